"""Complex special functions: Gamma, Pochhammer, Kummer 1F1, incomplete Gamma.

Branch convention: principal logarithm everywhere; on the negative real
axis the upper-half-plane limit is taken (a negative-zero imaginary part
is folded to +0 before taking powers or logs).
"""

from __future__ import annotations

import cmath
import math

from ..errors import ConvergenceError, PoleError
from .quadrature import integrate_segment, integrate_segment_with_error

__all__ = [
    "EULER_GAMMA",
    "gamma",
    "pochhammer",
    "kummer_1f1",
    "upper_incomplete_gamma",
    "upper_gamma_series",
    "upper_gamma_cf",
]

EULER_GAMMA = 0.5772156649015328606

# Godfrey's 15-term Lanczos set, g = 607/128; ~1e-15 relative on Re a > 0
_LANCZOS_G = 4.7421875
_LANCZOS = (
    0.99999999999999709182,
    57.156235665862923517, -59.597960355475491248,
    14.136097974741747174, -0.49191381609762019978,
    0.33994649984811888699e-4, 0.46523628927048575665e-4,
    -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3,
    -0.16431810653676389022e-3, 0.84418223983852743293e-4,
    -0.26190838401581408670e-4, 0.36899182659531622704e-5,
)

R_SWITCH = 30.0          # series/continued-fraction handover radius
_SERIES_SAFE_X = 6.0     # beyond this Re z the Gamma(a) subtraction cancels
_CF_MAX_PHASE = 0.9 * math.pi    # CF stalls closer to the negative axis at |z| < 60
_MAX_ITER = 10_000


def _canonical(z):
    """Fold -0.0 imaginary parts on the cut to the upper-half-plane limit."""
    z = complex(z)
    if z.imag == 0.0:
        return complex(z.real, 0.0)
    return z


def _is_nonpositive_integer(a, tol=1e-12):
    a = complex(a)
    n = round(a.real)
    return (n <= 0 and abs(a.real - n) <= tol and abs(a.imag) <= tol), n


def _check_finite(value, what):
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowError(f"{what} overflowed double precision")
    return value


def gamma(a):
    """Complete Gamma function for complex a (|a| <= 50 at <= 1e-13 relative).

    Raises PoleError when a is a non-positive integer within 1e-12.
    """
    a = complex(a)
    is_pole, _ = _is_nonpositive_integer(a)
    if is_pole:
        raise PoleError(f"Gamma pole at a = {a}")
    if a.real < 0.5:
        # reflection: Gamma(a) = pi / (sin(pi a) Gamma(1 - a))
        return _check_finite(math.pi / (cmath.sin(math.pi * a) * gamma(1.0 - a)),
                             "gamma")
    ag = a - 1.0
    acc = complex(_LANCZOS[0])
    for k in range(1, len(_LANCZOS)):
        acc += _LANCZOS[k] / (ag + k)
    t = ag + _LANCZOS_G + 0.5
    value = math.sqrt(2.0 * math.pi) * t ** (ag + 0.5) * cmath.exp(-t) * acc
    return _check_finite(value, "gamma")


def pochhammer(a, k):
    """Rising factorial (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1."""
    if k < 0 or k != int(k):
        raise ValueError("pochhammer order must be a non-negative integer")
    a = complex(a)
    out = 1.0 + 0j
    for i in range(int(k)):
        out *= a + i
    return out


def _kummer_series(a, b, z):
    """Taylor sum of 1F1 plus its max-term/|sum| cancellation ratio."""
    term = 1.0 + 0j
    total = 1.0 + 0j
    peak = 1.0
    for k in range(_MAX_ITER):
        term *= (a + k) * z / ((b + k) * (k + 1))
        total += term
        peak = max(peak, abs(term))
        if abs(term) < 1e-16 * abs(total):
            lost = peak / abs(total) if total != 0 else math.inf
            return total, lost
    raise ConvergenceError(f"1F1 series did not converge for a={a}, b={b}, z={z}")


def _kummer_with_loss(a, b, z):
    a = complex(a)
    b = complex(b)
    z = _canonical(z)
    is_pole, _ = _is_nonpositive_integer(b)
    if is_pole:
        raise PoleError(f"1F1 pole at b = {b}")
    if z == 0:
        return 1.0 + 0j, 1.0
    if z.real < 0:
        total, lost = _kummer_series(b - a, b, -z)
        return _check_finite(cmath.exp(z) * total, "1F1"), lost
    total, lost = _kummer_series(a, b, z)
    return _check_finite(total, "1F1"), lost


def kummer_1f1(a, b, z):
    """Kummer confluent hypergeometric 1F1(a; b; z).

    Taylor series with term-ratio stopping; when Re z < 0 the reflection
    1F1(a;b;z) = e^z 1F1(b-a;b;-z) keeps the summation cancellation-free.
    Raises PoleError for b a non-positive integer.
    """
    value, _ = _kummer_with_loss(a, b, z)
    return value


def _series_parts(a, z):
    """The two summands of the series route plus the 1F1's internal loss."""
    p1 = gamma(a)
    m, lost = _kummer_with_loss(a, a + 1.0, -z)
    p2 = cmath.exp(a * cmath.log(z)) / a * m
    return p1, p2, lost


def upper_gamma_series(a, z):
    """Incomplete Gamma via Gamma(a) - z^a/a * 1F1(a; a+1; -z).

    Valid where the subtraction does not cancel; non-positive integer a is
    handled by the downward recurrence from the a = 0 logarithmic case.
    """
    a = complex(a)
    z = _canonical(z)
    is_pole, n = _is_nonpositive_integer(a)
    if is_pole:
        return _upper_gamma_nonpositive_int(-n, z)
    p1, p2, _ = _series_parts(a, z)
    return _check_finite(p1 - p2, "incomplete gamma")


def _upper_gamma_zero(z):
    """Gamma(0; z) = E1(z), by series for moderate |z|."""
    total = 0j
    term = 1.0 + 0j
    for k in range(1, _MAX_ITER):
        term *= -z / k
        add = term / k
        total += add
        if abs(add) < 1e-17 * (abs(total) + 1.0):
            break
    else:
        raise ConvergenceError(f"E1 series did not converge for z={z}")
    return -EULER_GAMMA - cmath.log(z) - total


def _upper_gamma_nonpositive_int(m, z):
    """Gamma(-m; z) for integer m >= 0 by descending the a-recurrence.

    Gamma(a-1; z) = (Gamma(a; z) - z^(a-1) e^(-z)) / (a - 1), started from
    the logarithmic a = 0 case.
    """
    g = _upper_gamma_zero(z)
    emz = cmath.exp(-z)
    zpow = 1.0 + 0j
    for j in range(1, m + 1):
        zpow /= z
        g = (g - zpow * emz) / (-j)
    return g


def upper_gamma_cf(a, z, max_iter=_MAX_ITER):
    """Incomplete Gamma by the Legendre continued fraction (modified Lentz).

    Converges off the negative real axis; best for |z| large or Re z > 0.
    """
    a = complex(a)
    z = _canonical(z)
    tiny = 1e-300
    b = z + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    hits = 0
    for i in range(1, max_iter):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if d == 0:
            d = tiny
        c = b + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            hits += 1
            if hits >= 2:
                pref = cmath.exp(a * cmath.log(z) - z)
                return _check_finite(pref * h, "incomplete gamma")
        else:
            hits = 0
    raise ConvergenceError(f"incomplete-gamma continued fraction stalled at a={a}, z={z}")


def _log_magnitude(a, t):
    """ln |t^(a-1) e^(-t)| on the principal branch."""
    return (a.real - 1.0) * math.log(abs(t)) - a.imag * cmath.phase(t) - t.real


def _ln_abs_gamma(a):
    """ln |Gamma(a)| by Stirling, reflected into Re a >= 0.5."""
    if a.real < 0.5:
        s = cmath.sin(math.pi * a)
        if s == 0:
            return math.inf
        return math.log(math.pi) - math.log(abs(s)) - _ln_abs_gamma(1.0 - a)
    return ((a - 0.5) * cmath.log(a) - a).real + 0.5 * math.log(2.0 * math.pi)


def _axis_crossing_radius(a, target):
    """Positive-real radius r with ln|integrand(r)| <= target, or None.

    (Re a - 1) ln r - r drops below any target for large enough r; bisect
    on [start, 2500] where start clears the origin and any interior max.
    """
    lo = max(6.0, a.real - 1.0)

    def g(r):
        return (a.real - 1.0) * math.log(r) - r

    hi = 2500.0
    if g(hi) > target:
        return None
    if g(lo) <= target:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def _ray_end(a, base, th):
    """Length after which the outgoing ray's integrand is spent."""
    reach = (max(a.real, 0.0) - min(base.real, 0.0) + 90.0 + abs(a.imag)) / max(math.cos(th), 0.1)
    return min(max(reach, 40.0), 6000.0)


def _path_log_max(a, legs, th):
    """Sampled max of ln|integrand| over the legs and the outgoing ray."""
    top = -math.inf
    for pa, pb in zip(legs[:-1], legs[1:]):
        for k in range(25):
            t = pa + (pb - pa) * (k / 24.0)
            if t != 0:
                top = max(top, _log_magnitude(a, t))
    base = legs[-1]
    direction = cmath.exp(1j * th)
    send = _ray_end(a, base, th)
    for k in range(1, 49):
        t = base + direction * (send * k / 48.0)
        top = max(top, _log_magnitude(a, t))
    return top


def _gamma_landscape_route(a, z, f):
    """Quadrature for |Im a| large: route by the integrand's log-magnitude.

    The integral may end at infinity in any direction within (-pi/2, pi/2),
    so candidate paths go straight out from z, or through the saddle
    t* = a - 1 (crossing the real axis only on its positive side when z and
    t* straddle the branch cut). The candidate with the smallest sampled
    magnitude maximum is integrated; quadrature error bounds are summed and
    checked against the result so cancellation past double precision is
    reported instead of returned.
    """
    ts = a - 1.0
    g_z = _log_magnitude(a, z)
    g_ts = _log_magnitude(a, ts)
    side = 1.0 if z.imag >= 0 else -1.0

    def cut_safe(base, th):
        s_dir = math.sin(th)
        if base.imag == 0 or base.imag * s_dir >= 0:
            return True
        s_star = -base.imag / s_dir
        return base.real + s_star * math.cos(th) > 2.0

    candidates = []
    ray_angles = {0.0, side * 0.3, side * 0.6, side * 0.9, side * 1.2, side * 1.45,
                  math.copysign(min(1.45, abs(cmath.phase(z))), side)}
    v = ts / z - 1.0
    if abs(v) > 1e-12:
        th_sd = cmath.phase(-v.conjugate())
        if abs(th_sd) <= 1.45:
            ray_angles.add(th_sd)
    for th in ray_angles:
        if cut_safe(z, th):
            candidates.append(([z], th))

    saddle_angles = {max(min(cmath.phase(ts), 1.45), -1.45),
                     max(min(0.5 * cmath.phase(ts), 1.45), -1.45)}
    straddle = z.imag * ts.imag < 0 and min(z.real, ts.real) < 0
    if straddle:
        r0 = _axis_crossing_radius(a, min(g_z, g_ts) + 6.0)
        if r0 is not None:
            for th in saddle_angles:
                candidates.append((_liftoff([z, complex(r0, 0.0), ts]), th))
    else:
        for th in saddle_angles:
            candidates.append((_liftoff([z, ts]), th))

    best = min(candidates, key=lambda c: _path_log_max(a, c[0], c[1]))
    legs, th = best
    direction = cmath.exp(1j * th)

    total = 0j
    seg_scale = 0.0
    err_total = 0.0
    for pa, pb in zip(legs[:-1], legs[1:]):
        seg, err = integrate_segment_with_error(
            f, pa, pb, rel_tol=5e-13, abs_tol=1e-300 + 1e-14 * seg_scale,
            floor_rel=1e-10, max_panels=8192)
        total += seg
        err_total += err
        seg_scale = max(seg_scale, abs(seg))
    base = legs[-1]
    send = _ray_end(a, base, th)
    block = max(10.0, 0.25 * abs(base))
    pos = base
    travelled = 0.0
    quiet = 0
    while travelled < send + block:
        nxt = pos + block * direction
        seg, err = integrate_segment_with_error(
            f, pos, nxt, rel_tol=5e-13, abs_tol=1e-300 + 1e-14 * seg_scale,
            floor_rel=1e-10, max_panels=8192)
        total += seg
        err_total += err
        seg_scale = max(seg_scale, abs(seg))
        pos = nxt
        travelled += block
        quiet = quiet + 1 if abs(seg) <= 1e-16 * max(abs(total), 1e-2 * seg_scale) else 0
        if quiet >= 2:
            break
    else:
        raise ConvergenceError("rotated-ray tail did not become negligible")
    if err_total > 1e-10 * abs(total):
        raise ConvergenceError(
            "incomplete-gamma path quadrature cancels beyond double precision "
            f"(error bound {err_total:.2e} vs |result| {abs(total):.2e})")
    return total, seg_scale


def _liftoff(points, clearance=4.5):
    """Insert a radial detour wherever a leg passes within clearance of 0."""
    out = [points[0]]
    for pa, pb in zip(points[:-1], points[1:]):
        d = pb - pa
        L2 = abs(d) ** 2
        if L2 > 0:
            s = max(0.0, min(1.0, (-(pa.real * d.real + pa.imag * d.imag)) / L2))
            near = pa + s * d
            if 0 < abs(near) < clearance and 0 < s < 1:
                out.append(near * (clearance / abs(near)))
            elif abs(near) == 0:
                perp = complex(-d.imag, d.real) / abs(d)
                out.append(clearance * perp)
        out.append(pb)
    return out


def _upper_gamma_contour(a, z):
    """Incomplete Gamma by path quadrature with a rotated endpoint.

    The defining integral may end at infinity in any direction within
    (-pi/2, pi/2). When |Im a| is large the integrand has a phase mountain
    near the positive real axis that dwarfs the answer, so the path is
    routed through the integrand's saddle t* = a - 1 and out along a ray
    where |t^(a-1) e^-t| decays; the path maximum then stays at the scale
    of the answer. For small |Im a| there is no mountain and a staircase
    over the origin with a continued-fraction tail is used instead.
    """
    def f(t):
        return cmath.exp((a - 1.0) * cmath.log(t) - t)

    if abs(a.imag) > 8.0:
        value, seg_scale = _gamma_landscape_route(a, z, f)
    else:
        sgn = 1.0 if z.imag >= 0.0 else -1.0
        h_spike = 0.0
        if a.real < 1.0 and z.real < 0.0:
            h_spike = abs(z) * math.exp(-(8.0 + max(-z.real, 0.0)) / (abs(a.real) + 1.0))
        H = abs(z.imag)
        if z.real < 0:
            H = max(H, min(max(h_spike, 4.0), 0.7 * abs(z)))
        X = min(max(z.real + 5.0, a.real + 12.0, 12.0, 0.13 * abs(a.imag) * H), 2500.0)
        pts = [z, complex(z.real, sgn * H), complex(X, sgn * H), complex(X, 0.0)]
        total = upper_gamma_cf(a, complex(X, 0.0))
        seg_scale = abs(total)
        for pa, pb in zip(pts[:-1], pts[1:]):
            if pa == pb:
                continue
            seg = integrate_segment(f, pa, pb, rel_tol=5e-13,
                                    abs_tol=1e-300 + 1e-14 * seg_scale,
                                    floor_rel=1e-11, max_panels=8192)
            total += seg
            seg_scale = max(seg_scale, abs(seg))
        value = total

    if abs(value) < 1e-10 * seg_scale:
        # pieces cancelled past double precision: no trustworthy digits left
        raise ConvergenceError(
            "incomplete-gamma path pieces cancel beyond double precision "
            f"(|result| ~ {abs(value):.2e} vs piece scale {seg_scale:.2e})")
    return _check_finite(value, "incomplete gamma")


def upper_incomplete_gamma(a, z):
    """Upper incomplete Gamma(a; z) on the principal branch.

    Route selection: the hypergeometric series wherever its 1F1 summation
    is phase-stable (|z| - |Re z| small) and its measured Gamma(a)
    subtraction keeps enough digits; otherwise the Legendre continued
    fraction in its verified region, with a contour-quadrature fallback
    for the remaining wedges (large real a off the real axis, the
    neighborhood of the negative real axis at |z| > R_SWITCH, and the
    large-|Im a| manifolds where the fraction can lock onto a spurious
    limit).
    """
    a = complex(a)
    z = _canonical(z)
    if z == 0:
        if a.real > 0:
            return gamma(a)
        raise PoleError(f"Gamma(a; 0) diverges for Re a <= 0 (a = {a})")
    sum_loss = abs(z) - abs(z.real)
    if sum_loss <= 14.0 and (abs(z) <= R_SWITCH or z.real < 0):
        # left of the imaginary axis the reflected 1F1 sum is same-phase
        # and stable at any |z|; accept on measured cancellation only
        is_pole, n = _is_nonpositive_integer(a)
        if is_pole:
            return _check_finite(_upper_gamma_nonpositive_int(-n, z),
                                 "incomplete gamma")
        try:
            p1, p2, inner = _series_parts(a, z)
            value = p1 - p2
            lost = (abs(p1) + abs(p2)) / abs(value) if value != 0 else math.inf
            if lost * inner <= 1e3:
                return _check_finite(value, "incomplete gamma")
        except (PoleError, OverflowError, ConvergenceError):
            pass
    big_enough = abs(z) >= max(6.0, 1.3 * max(a.real, 0.0))
    off_cut = abs(cmath.phase(z)) <= _CF_MAX_PHASE or abs(z) >= 60.0
    cf_ok = (big_enough and off_cut) or z.real > max(_SERIES_SAFE_X, a.real + 2.0)
    if cf_ok and abs(a.imag) > 8.0:
        # the fraction can lock onto a spurious limit when z sits on Im a's
        # side of the real axis a moderate distance out
        cf_ok = (a.imag * z.imag <= 0
                 or (abs(z.imag) <= 5.0 and abs(cmath.phase(z)) <= _CF_MAX_PHASE))
    if cf_ok:
        return upper_gamma_cf(a, z)
    return _upper_gamma_contour(a, z)
