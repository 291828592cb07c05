"""Right-hand termination: parameter choices that truncate the series into
exact finite-sum solutions, with certification by the ODE residual.

The trailing recurrence coefficient is annihilated at the stop index by a
specific alpha; the accessory parameter q is then searched as a root of
the cleared-form coefficient d_(N+1)(q), a polynomial in q obtained by
running the recurrence with q left symbolic and denominators multiplied
through. Certified roots satisfy |c_(N+1)|, |c_(N+2)| below tolerance and
a finite-sum ODE residual below 1e-8 on a disk grid.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from .equations import extra_singularity
from .errors import (
    DegenerateIndexError,
    NoRootsError,
    PreconditionError,
    UnsupportedSchemeError,
)
from .expansion import assemble, determine_c0, evaluate, v_values
from .numerics import Polynomial
from .recurrence import build_recurrence, generate_coefficients

__all__ = [
    "TerminationCandidate",
    "QRoot",
    "rhs_alpha",
    "coefficients_as_q_polynomials",
    "find_terminating_q",
    "verify_finite_sum",
]

_RHS_ALPHA_SCHEMES = {"sche-I-origin", "sche-I-extra", "dche-I-origin",
                      "dche-I-extra", "bche-II-extra"}
_Q_SEARCH_SCHEMES = {"sche-I-origin", "sche-I-extra", "dche-I-origin",
                     "dche-I-extra"}
_CERT_TOL = 1e-8


def rhs_alpha(eq, scheme, n_stop, mu):
    """The alpha annihilating the trailing coefficient at the stop index.

    SCHE: alpha = eps (N + gamma + delta + mu); DCHE: eps (N + mu + delta);
    BCHE quadratic type II at the extra center (requires delta + eps z0 = 0,
    which pins q = -alpha delta / eps): alpha = eps (N + mu + gamma).
    Schemes whose trailing coefficient is independent of n and nonzero
    cannot terminate and raise UnsupportedSchemeError.
    """
    if scheme.id not in _RHS_ALPHA_SCHEMES:
        raise UnsupportedSchemeError(
            f"{scheme.id}: trailing recurrence coefficient does not depend on "
            "n, the series cannot terminate from the right")
    if eq.epsilon == 0:
        raise PreconditionError("ε ≠ 0")
    if n_stop < 1:
        raise PreconditionError("stop index must be a positive integer")
    mu = complex(mu)
    if scheme.variant == "SCHE":
        return eq.epsilon * (n_stop + eq.gamma + eq.delta + mu)
    if scheme.variant == "DCHE":
        return eq.epsilon * (n_stop + mu + eq.delta)
    return eq.epsilon * (n_stop + mu + eq.gamma)


def coefficients_as_q_polynomials(eq, scheme, mu, n_stop):
    """Cleared-form coefficients d_n(q) as polynomials in q, n <= N+2.

    d_n = (prod_(k=1..n) lead_k(q)) c_n(q); returns (d_n, clearing factor)
    pairs. Requires the leading coefficient, as a polynomial in q, not to
    vanish identically at any interior index.
    """
    mu = complex(mu)
    q_sym = Polynomial([0.0, 1.0])
    rel = build_recurrence(eq, scheme, q_value=q_sym)
    k = rel.k
    sigma = 0
    d = [Polynomial([1.0])]          # d_0 = 1
    clearing = [Polynomial([1.0])]
    lead_run = []                    # lead_1..lead_n as polynomials in q
    for n in range(1, n_stop + 3):
        lead = rel.coeff(sigma, n, mu)
        lead = lead if isinstance(lead, Polynomial) else Polynomial([lead])
        if lead.trimmed(1e-13).is_zero:
            raise DegenerateIndexError(
                n, f"leading coefficient vanishes identically in q at n={n}")
        lead_run.append(lead)
        # d_n = -sum_j coeff_j(n-j) * (prod_(i=n-j+1..n-1) lead_i) * d_(n-j)
        acc = Polynomial()
        for j in range(1, k):
            idx = n - j
            if idx < 0:
                continue
            w = rel.coeff(j, idx, mu)
            w = w if isinstance(w, Polynomial) else Polynomial([w])
            partial = Polynomial([1.0])
            for i in range(idx + 1, n):
                partial = partial * lead_run[i - 1]
            acc = acc + w * partial * d[idx]
        d.append(-acc)
        clearing.append(clearing[-1] * lead)
    return list(zip(d, clearing))


@dataclass(frozen=True)
class QRoot:
    """One candidate accessory-parameter value with certification data."""

    q: complex
    c_next_mag: float
    c_next2_mag: float
    residual: float
    certified: bool


@dataclass(frozen=True)
class TerminationCandidate:
    n_stop: int
    mu: complex
    alpha: complex
    certified: tuple
    uncertified: tuple

    @property
    def roots(self):
        return self.certified + self.uncertified


def _coeff_tail_mags(eq, scheme, mu, n_stop):
    """|c_(N+1)|, |c_(N+2)| relative to the finite-sum scale, by rerunning."""
    rel = build_recurrence(eq, scheme)
    seq = generate_coefficients(rel, mu, n_stop + 2)
    scale = max(abs(c) for c in seq.coefficients[:n_stop + 1])
    return (abs(seq.coefficients[n_stop + 1]) / scale,
            abs(seq.coefficients[n_stop + 2]) / scale)


def find_terminating_q(eq, scheme, n_stop, mu, alpha=None):
    """Roots q of the cleared termination polynomial, certified.

    alpha defaults to rhs_alpha. Roots where the clearing factor also
    vanishes are spurious and dropped. Certification: the rerun recurrence
    has |c_(N+1)|, |c_(N+2)| <= 1e-8 of the coefficient scale and the
    finite sum passes verify_finite_sum at 1e-8.
    """
    if scheme.id not in _Q_SEARCH_SCHEMES:
        if scheme.id == "bche-II-extra":
            raise UnsupportedSchemeError(
                "bche-II-extra pins q = -alpha delta/eps through its "
                "termination precondition; there is no free q to search")
        raise UnsupportedSchemeError(
            f"{scheme.id}: the series cannot terminate from the right")
    mu = complex(mu)
    if alpha is None:
        alpha = rhs_alpha(eq, scheme, n_stop, mu)
    eq = replace(eq, alpha=alpha)

    pairs = coefficients_as_q_polynomials(eq, scheme, mu, n_stop)
    d_next, clear_next = pairs[n_stop + 1]
    d_next = d_next.trimmed(1e-12)
    if d_next.degree < 1:
        if d_next.is_zero:
            raise NoRootsError("termination polynomial vanishes identically")
        raise NoRootsError("termination polynomial is constant and nonzero")

    certified = []
    uncertified = []
    for root in _dedupe_roots(d_next.roots()):
        if abs(clear_next(root)) <= 1e-10 * max(clear_next.scale(), 1.0) * \
                max(1.0, abs(root)) ** max(clear_next.degree, 1):
            continue  # spurious: a zero of the clearing factor
        eq_root = replace(eq, q=root)
        try:
            c1, c2 = _coeff_tail_mags(eq_root, scheme, mu, n_stop)
        except (DegenerateIndexError, PreconditionError):
            continue
        residual = math.inf
        if c1 <= _CERT_TOL and c2 <= _CERT_TOL:
            try:
                series = assemble(eq_root, scheme, mu=mu, n_terms=n_stop)
                _pick_reference(series, eq_root)
                residual = verify_finite_sum(eq_root, series)
            except Exception:
                residual = math.inf
        entry = QRoot(q=root, c_next_mag=c1, c_next2_mag=c2, residual=residual,
                      certified=(c1 <= _CERT_TOL and c2 <= _CERT_TOL
                                 and residual <= _CERT_TOL))
        (certified if entry.certified else uncertified).append(entry)
    key = lambda r: (r.q.real, r.q.imag)
    return TerminationCandidate(
        n_stop=n_stop, mu=mu, alpha=alpha,
        certified=tuple(sorted(certified, key=key)),
        uncertified=tuple(sorted(uncertified, key=key)),
    )


def _dedupe_roots(roots):
    out = []
    for r in roots:
        if not any(abs(r - s) <= 1e-8 * max(1.0, abs(s)) for s in out):
            out.append(r)
    return out


def _pick_reference(series, eq):
    """Set C0 from the first workable reference point on a small ring."""
    base = series.radius if math.isfinite(series.radius) else 2.0
    last = None
    for frac in (0.31, 0.24, 0.41, 0.17, 0.37):
        for ang in (0.3, 2.1, 4.2, 5.5, 1.2):
            z_ref = series.z1 + base * frac * cmath.exp(1j * ang)
            try:
                determine_c0(series, eq, z_ref)
                return z_ref
            except Exception as exc:
                last = exc
    raise last


def grid_points(center, radius, count):
    """Deterministic disk-filling grid: concentric rings plus near-center."""
    pts = []
    rings = max(1, int(math.ceil(count / 8)))
    idx = 0
    ring = 0
    while len(pts) < count:
        ring += 1
        r = radius * ring / (rings + 1)
        per = min(8, count - len(pts))
        for j in range(per):
            ang = 2.0 * math.pi * (j + 0.17 * ring) / per
            pts.append(center + r * cmath.exp(1j * ang))
            idx += 1
    return pts[:count]


def verify_finite_sum(eq, series, grid_count=200):
    """Max normalized ODE residual of the truncated sum over a disk grid.

    The grid fills the half-radius disk (|z - z1| <= 2 when the radius is
    infinite); the residual uses the closed-form u, u', and the u'' that
    follows from differentiating u' = e^(-L) v exactly.
    """
    base = series.radius / 2.0 if math.isfinite(series.radius) else 2.0
    worst = 0.0
    for z in grid_points(series.z1, base, grid_count):
        try:
            u, up, _ = evaluate(series, z)
        except Exception:
            continue
        v, vp = v_values(series, z)
        lam_p = series.scale * (z - series.z1) ** (series.power - 1)
        upp = cmath.exp(-series.weight_value(z)) * (vp - lam_p * v)
        res = abs(eq.residual(z, u, up, upp))
        scale = eq.residual_scale(z, u, up, upp)
        worst = max(worst, res / scale)
    return worst
