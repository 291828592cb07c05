"""Assembly and evaluation of the incomplete-Gamma series for u.

A series with center z1, exponent mu, coefficients c_n, weight scale s and
weight power p represents

    u(z) = C0 - sum_n c_n / (p (s/p)^(a_n)) Gamma(a_n; L(z)),
    a_n = (1 + n + mu)/p,  L(z) = s (z - z1)^p / p,

whose derivative telescopes back to u' = e^(-L) sum c_n (z-z1)^(mu+n).
Terms are evaluated through the lower-incomplete form

    u(z) = C0 + sum_n c_n (z-z1)^(1+n+mu) / (1+n+mu) * 1F1(a_n; a_n+1; -L)

which keeps a single coherent branch of (z-z1)^mu (for non-integer mu the
upper-Gamma form would need w^a continued off its principal branch) and
avoids the Gamma(a_n) constants, whose partial sums grow factorially for
schemes with a finite convergence disk. C0 is stored in this gauge.
Terms whose parameter a_n is a non-positive integer (possible for
mu = -gamma with integer gamma) fall back to a branch-coherent upper-Gamma
ladder grown down from the logarithmic a = 0 case.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

from .equations import derive_v_equation
from .errors import (
    DegenerateIndexError,
    EvaluationError,
    PreconditionError,
    RegionError,
    SingularRefError,
)
from .numerics import EULER_GAMMA, gamma, kummer_1f1, upper_incomplete_gamma
from .recurrence import build_recurrence, generate_coefficients

__all__ = [
    "GammaSeries",
    "EvalResult",
    "assemble",
    "evaluate",
    "determine_c0",
    "convergence_radius",
    "choose_truncation",
]


class EvalResult(NamedTuple):
    u: complex
    u_prime: complex
    in_region: bool


@dataclass
class GammaSeries:
    """Evaluable series solution; c0 is set by determine_c0."""

    scheme: object
    z1: complex
    mu: complex
    coefficients: object
    scale: complex           # weight rate s
    power: int               # weight power p in {1, 2, 3}
    radius: float
    prefactor: complex = 1.0
    c0: complex = 0j

    def __post_init__(self):
        if self.scale == 0:
            raise PreconditionError("weight scale s must be nonzero")
        if self.power not in (1, 2, 3):
            raise PreconditionError("weight power must be 1, 2, or 3")

    @property
    def n_terms(self):
        return len(self.coefficients.coefficients)

    def gamma_parameter(self, n):
        """The n-th term's Gamma parameter a_n = (1 + n + mu)/p."""
        return (1.0 + n + self.mu) / self.power

    def weight_value(self, z):
        """L(z) = s (z - z1)^p / p."""
        return self.scale * (complex(z) - self.z1) ** self.power / self.power

    def term_gamma_form(self, n, z):
        """The n-th upper-Gamma term on the coherent branch (diagnostics)."""
        a_n = self.gamma_parameter(n)
        c_n = self.coefficients[n] * 2.0 ** self.coefficients.log2_scale
        w = self.weight_value(z)
        rung = _is_nonpos_int(a_n)
        if rung is None:
            upper = (gamma(a_n) - _coherent_power(self, z, a_n) / a_n
                     * kummer_1f1(a_n, a_n + 1.0, -w))
        else:
            upper = _gamma_upper_coherent_nonpos(self, z, rung)
        scale = self.power * (self.scale / self.power) ** a_n
        return self.prefactor * c_n / scale * upper


def _is_nonpos_int(a, tol=1e-10):
    n = round(a.real)
    if n <= 0 and abs(a.real - n) <= tol and abs(a.imag) <= tol:
        return int(n)
    return None


def _coherent_power(series, z, a):
    """(s/p)^a (z - z1)^(p a) with principal pieces, coherent with dz^mu."""
    dz = complex(z) - series.z1
    s_over_p = series.scale / series.power
    return cmath.exp(a * cmath.log(s_over_p) + (series.power * a) * cmath.log(dz))


def _log_coherent(series, z):
    """Coherent log of L(z): log(s/p) + p log(z - z1), principal pieces."""
    dz = complex(z) - series.z1
    return cmath.log(series.scale / series.power) + series.power * cmath.log(dz)


def _gamma_upper_zero_coherent(series, z):
    """Gamma(0; L(z)) with the coherent log branch."""
    w = series.weight_value(z)
    if abs(w) <= 40.0:
        total = 0j
        term = 1.0 + 0j
        for k in range(1, 700):
            term *= -w / k
            add = term / k
            total += add
            if abs(add) < 1e-17 * (abs(total) + 1.0):
                break
        return -EULER_GAMMA - _log_coherent(series, z) - total
    principal = upper_incomplete_gamma(0.0, w)
    return principal - (_log_coherent(series, z) - cmath.log(w))


def _gamma_upper_coherent_nonpos(series, z, m):
    """Gamma(-|m|; L(z)) by the downward ladder with coherent integer powers."""
    w = series.weight_value(z)
    g = _gamma_upper_zero_coherent(series, z)
    emw = cmath.exp(-w)
    dz = complex(z) - series.z1
    s_over_p = series.scale / series.power
    for j in range(1, -m + 1):
        wpow = s_over_p ** (-j) * dz ** (-j * series.power)
        g = (g - wpow * emw) / (-j)
    return g


def assemble(eq, scheme, mu=None, n_terms=60):
    """Build the evaluable series (C0 left 0 until determine_c0).

    mu=None tries the admissible exponents in order, skipping branches
    that degenerate during generation.
    """
    rel = build_recurrence(eq, scheme)
    if mu is None:
        last = None
        seq = None
        for cand in rel.exponents:
            try:
                seq = generate_coefficients(rel, cand, n_terms)
                break
            except (DegenerateIndexError, PreconditionError) as exc:
                last = exc
                seq = None
        if seq is None:
            raise last if last is not None else PreconditionError("no admissible exponent")
    else:
        seq = generate_coefficients(rel, complex(mu), n_terms)
    return GammaSeries(
        scheme=scheme,
        z1=scheme.center_value(eq),
        mu=seq.mu,
        coefficients=seq,
        scale=scheme.resolve_rate(eq),
        power=scheme.weight_power,
        radius=convergence_radius(eq, scheme),
    )


def _sorted_sum(values):
    """Compensated summation, largest magnitudes first."""
    vals = sorted(values, key=abs, reverse=True)
    total = 0j
    comp = 0j
    for v in vals:
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def evaluate(series, z):
    """(u, u') at z; in_region flags |z - z1| within the guaranteed disk.

    u' is evaluated in closed form as e^(-L) * (z-z1)^mu * sum c_n (z-z1)^n;
    no numerical differentiation is involved.
    """
    z = complex(z)
    dz = z - series.z1
    seq = series.coefficients
    booster = 2.0 ** seq.log2_scale
    n_max = seq.order
    in_region = abs(dz) <= series.radius * (1.0 + 1e-12)

    if dz == 0:
        has_pole_terms = any(
            seq.coefficients[n] != 0 and _is_nonpos_int(series.gamma_parameter(n)) is not None
            for n in range(n_max + 1))
        if has_pole_terms or (series.mu != 0 and series.mu.real <= 0):
            raise EvaluationError("series is singular at its own center")
        u_prime = booster * series.prefactor * seq.coefficients[0] if series.mu == 0 else 0j
        return EvalResult(series.c0, u_prime, in_region)

    w = series.weight_value(z)
    try:
        log_dz = cmath.log(dz)
        dz_mu1 = cmath.exp((1.0 + series.mu) * log_dz)
    except (ValueError, OverflowError):
        raise EvaluationError(f"cannot take the series branch at z={z}")

    terms = []
    dz_pow = 1.0 + 0j
    for n in range(n_max + 1):
        c_n = seq.coefficients[n]
        if c_n != 0:
            a_n = series.gamma_parameter(n)
            rung = _is_nonpos_int(a_n)
            if rung is None:
                expo = 1.0 + n + series.mu
                m_val = kummer_1f1(a_n, a_n + 1.0, -w)
                terms.append(c_n * dz_mu1 * dz_pow / expo * m_val)
            else:
                scale = series.power * (series.scale / series.power) ** a_n
                terms.append(-c_n / scale * _gamma_upper_coherent_nonpos(series, z, rung))
        dz_pow *= dz
        if not (math.isfinite(dz_pow.real) and math.isfinite(dz_pow.imag)):
            raise EvaluationError(f"series terms overflow at z={z}")

    mags = [abs(t) for t in terms if t != 0]
    if mags and max(mags) / min(mags) > 1e8:
        total = _sorted_sum(terms)
    else:
        total = sum(terms, 0j)
    u = series.c0 + series.prefactor * booster * total

    horner = 0j
    for c in reversed(seq.coefficients):
        horner = horner * dz + c
    dz_mu = cmath.exp(series.mu * log_dz)
    u_prime = series.prefactor * booster * cmath.exp(-w) * dz_mu * horner

    for val in (u, u_prime):
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise EvaluationError(f"series evaluation overflowed at z={z}")
    return EvalResult(u, u_prime, in_region)


def v_values(series, z):
    """(v, v') of the truncated Frobenius series at z."""
    z = complex(z)
    dz = z - series.z1
    seq = series.coefficients
    booster = 2.0 ** seq.log2_scale
    horner = 0j
    horner_d = 0j
    for n in range(seq.order, -1, -1):
        c = seq.coefficients[n]
        horner = horner * dz + c
        horner_d = horner_d * dz + c * (n + series.mu)
    dz_mu = cmath.exp(series.mu * cmath.log(dz)) if dz != 0 else (
        1.0 if series.mu == 0 else 0j)
    v = booster * dz_mu * horner
    vp = booster * dz_mu / dz * horner_d if dz != 0 else (
        booster * seq.coefficients[1] * (1.0 + series.mu) if seq.order >= 1 and series.mu == 0 else 0j)
    return v, vp


def determine_c0(series, eq, z_ref):
    """Fix the integration constant from the v-data at a reference point.

    u(z_ref) is reconstructed from the truncated v through the original
    equation, u = -e^(-L) (A (v' - L' v) + B v) / C, and C0 follows from
    u = C0 - sum(terms). The constant is stored on the series and returned.
    """
    z_ref = complex(z_ref)
    c_val = eq.c_polynomial()(z_ref)
    c_scale = max(abs(eq.alpha) * max(1.0, abs(z_ref)), abs(eq.q), 1e-30)
    if abs(c_val) <= 1e-12 * c_scale:
        raise SingularRefError(f"alpha z - q vanishes at z_ref={z_ref}")
    if abs(z_ref - series.z1) >= series.radius:
        raise RegionError(f"z_ref={z_ref} lies outside the convergence disk")
    if z_ref == series.z1 and series.mu.real < 0:
        raise RegionError("z_ref must avoid the center for a singular branch")

    v, vp = v_values(series, z_ref)
    w = series.weight_value(z_ref)
    lam_p = series.scale * (z_ref - series.z1) ** (series.power - 1)
    a_val = eq.p_polynomial()(z_ref)
    b_val = eq.b_polynomial()(z_ref)
    u_ref = -cmath.exp(-w) * (a_val * (vp - lam_p * v) + b_val * v) / c_val

    series.c0 = 0j
    base = evaluate(series, z_ref).u
    series.c0 = u_ref - base
    return series.c0


def convergence_radius(eq, scheme):
    """Distance from the center to the nearest other singular point of the
    derived v-operator (infinity when none exists)."""
    scheme.validate(eq)
    op = derive_v_equation(eq.operator(), scheme.weight_spec(eq))
    z1 = scheme.center_value(eq)
    best = math.inf
    for pt in op.singular_points():
        dist = abs(pt - z1)
        if dist > 1e-9 * max(1.0, abs(z1)):
            best = min(best, dist)
    return best


def choose_truncation(eq, scheme, z_eval, mu=None, rel_tol=1e-12, cap=200):
    """Smallest N whose last term contributes < rel_tol of the running sum
    at z_eval, capped."""
    series = assemble(eq, scheme, mu=mu, n_terms=cap)
    z_eval = complex(z_eval)
    dz = z_eval - series.z1
    seq = series.coefficients
    running = 0.0
    for n in range(seq.order + 1):
        mag = abs(seq.coefficients[n]) * abs(dz) ** n
        running += mag
        if n >= 8 and running > 0 and mag < rel_tol * running:
            return n
    return cap
