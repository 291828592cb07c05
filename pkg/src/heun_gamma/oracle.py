"""Independent verification: adaptive Runge-Kutta reference integration,
order-by-order residuals of the truncated series, and series-vs-integrator
comparison over probe grids.

The integrator is an embedded Dormand-Prince 5(4) pair marching a real
parameter along piecewise-linear complex paths, with an optional fixed-step
mode used by the order-convergence check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import SingularPathError, StepUnderflowError
from .expansion import evaluate

__all__ = [
    "SolutionSample",
    "integrate_reference",
    "residual_power_series",
    "compare",
    "rk_solve",
    "plan_path",
]

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
       187 / 2100, 1 / 40)


@dataclass(frozen=True)
class SolutionSample:
    z: complex
    u: complex
    u_prime: complex


def _step(f, t, y, h):
    """One DP5(4) step: returns (y5, error_vector)."""
    k = []
    for i in range(7):
        yi = list(y)
        for j, aij in enumerate(_A[i]):
            if aij != 0.0:
                for c in range(len(y)):
                    yi[c] += h * aij * k[j][c]
        k.append(f(t + _C[i] * h, yi))
    y5 = [y[c] + h * sum(_B5[i] * k[i][c] for i in range(7)) for c in range(len(y))]
    err = [h * sum((_B5[i] - _B4[i]) * k[i][c] for i in range(7)) for c in range(len(y))]
    return y5, err


def rk_solve(f, t0, y0, t1, rtol=1e-12, atol=1e-14, fixed_steps=None,
             max_steps=2_000_000):
    """Integrate dy/dt = f(t, y) from t0 to t1 (real parameter, complex y).

    fixed_steps forces that many equal steps with no error control (used by
    the order-convergence check).
    """
    y = [complex(v) for v in y0]
    t = t0
    span = t1 - t0
    if span == 0:
        return y
    if fixed_steps is not None:
        h = span / fixed_steps
        for _ in range(fixed_steps):
            y, _err = _step(f, t, y, h)
            t += h
        return y

    h = span / 64.0
    steps = 0
    while (span > 0 and t < t1) or (span < 0 and t > t1):
        steps += 1
        if steps > max_steps:
            raise StepUnderflowError("adaptive integrator exceeded its step budget")
        if (span > 0 and t + h > t1) or (span < 0 and t + h < t1):
            h = t1 - t
        y_new, err = _step(f, t, y, h)
        scale = [atol + rtol * max(abs(y[c]), abs(y_new[c])) for c in range(len(y))]
        enorm = math.sqrt(sum((abs(err[c]) / scale[c]) ** 2 for c in range(len(y)))
                          / len(y))
        if enorm <= 1.0:
            t += h
            y = y_new
            grow = 0.9 * enorm ** -0.2 if enorm > 0 else 5.0
            h *= min(5.0, max(0.2, grow))
        else:
            h *= max(0.2, 0.9 * enorm ** -0.2)
        if abs(h) < 1e-14 * max(abs(t), abs(span)) or abs(h) < 1e-290:
            raise StepUnderflowError(f"step size underflow near t={t}")
    return y


def _segment_clearance(a, b, points):
    """Distance from segment [a, b] to the closest of the points."""
    best = math.inf
    d = b - a
    L2 = abs(d) ** 2
    for p in points:
        if L2 == 0:
            best = min(best, abs(p - a))
            continue
        s = max(0.0, min(1.0, ((p - a).real * d.real + (p - a).imag * d.imag) / L2))
        best = min(best, abs(a + s * d - p))
    return best


def integrate_reference(eq, start, path, rtol=1e-12, atol=1e-14):
    """Reference (u, u') along a piecewise-linear path by adaptive RK5(4).

    start.z must be the first waypoint; the path must clear the equation's
    singular points by at least 1e-3. Returns one sample per waypoint.
    """
    waypoints = [complex(w) for w in path]
    if not waypoints or abs(start.z - waypoints[0]) > 1e-12 * max(1.0, abs(start.z)):
        raise SingularPathError("path must begin at the starting sample")
    singular = eq.singular_points()
    A, B, C = eq.p_polynomial(), eq.b_polynomial(), eq.c_polynomial()

    out = [SolutionSample(waypoints[0], complex(start.u), complex(start.u_prime))]
    y = [complex(start.u), complex(start.u_prime)]
    for za, zb in zip(waypoints[:-1], waypoints[1:]):
        if singular and _segment_clearance(za, zb, singular) < 1e-3:
            raise SingularPathError(
                f"segment {za} -> {zb} passes within 1e-3 of a singular point")
        dz = zb - za

        def f(t, yv, _za=za, _dz=dz):
            zt = _za + t * _dz
            u, up = yv
            return [_dz * up, -_dz * (B(zt) * up + C(zt) * u) / A(zt)]

        y = rk_solve(f, 0.0, y, 1.0, rtol=rtol, atol=atol)
        out.append(SolutionSample(zb, y[0], y[1]))
    return out


def residual_power_series(op, mu, coeffs, z1):
    """Magnitudes of the determined residual orders of op applied to the
    truncated series (z-z1)^mu sum c_n (z-z1)^n.

    Order m of the local expansion (offset mu-2) collects
    a_i c_(m-i) (mu+m-i)(mu+m-i-1) + b_i c_(m-1-i)(mu+m-1-i) + c_i c_(m-2-i);
    orders m = 0..N involve only known coefficients and must vanish when
    the c_n came from the matching recurrence.
    """
    mu = complex(mu)
    z1 = complex(z1)
    a = op.a.compose_shift(z1).coef
    b = op.b.compose_shift(z1).coef
    c = op.c.compose_shift(z1).coef
    cs = [complex(v) for v in coeffs.coefficients] if hasattr(coeffs, "coefficients") \
        else [complex(v) for v in coeffs]
    n_max = len(cs) - 1

    out = []
    for m in range(n_max + 1):
        acc = 0j
        for i, ai in enumerate(a):
            n = m - i
            if 0 <= n <= n_max:
                acc += ai * cs[n] * (mu + n) * (mu + n - 1.0)
        for i, bi in enumerate(b):
            n = m - 1 - i
            if 0 <= n <= n_max:
                acc += bi * cs[n] * (mu + n)
        for i, ci in enumerate(c):
            n = m - 2 - i
            if 0 <= n <= n_max:
                acc += ci * cs[n]
        out.append(abs(acc))
    return out


def plan_path(z_from, z_to, obstacles, clearance=2e-3, depth=0):
    """Waypoints from z_from to z_to keeping clearance from the obstacles.

    A blocking obstacle deflects the path through a point pushed radially
    away from it; two nested deflections suffice at desk scale.
    """
    z_from = complex(z_from)
    z_to = complex(z_to)
    if not obstacles or _segment_clearance(z_from, z_to, obstacles) >= clearance:
        return [z_from, z_to]
    if depth >= 4:
        raise SingularPathError(
            f"no clear path from {z_from} to {z_to} at clearance {clearance}")
    d = z_to - z_from
    L2 = abs(d) ** 2
    blocker = min(obstacles,
                  key=lambda p: _segment_clearance(z_from, z_to, [p]))
    s = max(0.0, min(1.0, ((blocker - z_from).real * d.real
                           + (blocker - z_from).imag * d.imag) / L2))
    near = z_from + s * d
    radial = near - blocker
    margin = max(4.0 * clearance, 0.08 * abs(d), 0.02)
    if abs(radial) < 1e-12:
        radial = complex(-d.imag, d.real) / abs(d)
        waypoint = blocker + margin * radial
    else:
        waypoint = blocker + radial / abs(radial) * margin
    left = plan_path(z_from, waypoint, obstacles, clearance, depth + 1)
    right = plan_path(waypoint, z_to, obstacles, clearance, depth + 1)
    return left[:-1] + right


def compare(series, eq, z_probes, rtol=1e-12, atol=1e-14):
    """Max over probes of |u_series - u_rk| / (|u_rk| + 1).

    The reference starts from the series values at the first probe and is
    transported to every other probe along singularity-avoiding paths.
    """
    probes = [complex(p) for p in z_probes]
    base = probes[0]
    u0, u0p, _ = evaluate(series, base)
    start = SolutionSample(base, u0, u0p)
    obstacles = list(eq.singular_points())
    worst = 0.0
    for probe in probes[1:]:
        path = plan_path(base, probe, obstacles)
        sample = integrate_reference(eq, start, path, rtol=rtol, atol=atol)[-1]
        u_series = evaluate(series, probe).u
        worst = max(worst, abs(u_series - sample.u) / (abs(sample.u) + 1.0))
    return worst
