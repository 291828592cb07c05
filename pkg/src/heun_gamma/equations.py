"""The four confluent Heun equations and their weighted-derivative equations.

Each equation is stored in its per-variant canonical form

    SCHE:  u'' + (g/z + d/(z-1) + e) u' + (a z - q)/(z(z-1)) u = 0
    DCHE:  u'' + (g/z^2 + d/z + e) u' + (a z - q)/z^2      u = 0
    BCHE:  u'' + (g/z + d + e z)   u' + (a z - q)/z        u = 0
    TCHE:  u'' + (g + d z + e z^2) u' + (a z - q)          u = 0

and exposed as a cleared-denominator operator A u'' + B u' + C u with
polynomial A, B, C. The auxiliary unknown is v = e^(L(z)) u'; its equation
is always derived from first principles here (rational-function algebra),
never transcribed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    DegenerateError,
    IrregularError,
    NotSingularError,
    PreconditionError,
)
from .numerics import Polynomial, integrate_path, kummer_1f1, polynomial_roots

__all__ = [
    "VARIANTS",
    "ConfluentHeun",
    "GeneralHeun",
    "WeightSpec",
    "RationalOperator",
    "ClosedForm",
    "extra_singularity",
    "derive_v_equation",
    "indicial_exponents",
    "special_closed_form",
]

VARIANTS = ("SCHE", "DCHE", "BCHE", "TCHE")

_CANCEL_TOL = 1e-10   # a cleared factor counts as removable below this


def _finite(value, name):
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise PreconditionError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class ConfluentHeun:
    """One of the four confluent Heun equations in canonical form."""

    variant: str
    gamma: complex
    delta: complex
    epsilon: complex
    alpha: complex
    q: complex

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise PreconditionError(f"unknown variant {self.variant!r}")
        for name in ("gamma", "delta", "epsilon", "alpha", "q"):
            object.__setattr__(self, name, _finite(getattr(self, name), name))

    def p_polynomial(self):
        """Leading polynomial: z(z-1), z^2, z, 1."""
        return {
            "SCHE": Polynomial([0.0, -1.0, 1.0]),
            "DCHE": Polynomial([0.0, 0.0, 1.0]),
            "BCHE": Polynomial([0.0, 1.0]),
            "TCHE": Polynomial([1.0]),
        }[self.variant]

    def b_polynomial(self):
        """Cleared u' coefficient."""
        g, d, e = self.gamma, self.delta, self.epsilon
        if self.variant == "SCHE":
            # g(z-1) + d z + e z(z-1)
            return Polynomial([-g, g + d - e, e])
        return Polynomial([g, d, e])

    def c_polynomial(self):
        return Polynomial([-self.q, self.alpha])

    def operator(self):
        return RationalOperator(self.p_polynomial(), self.b_polynomial(),
                                self.c_polynomial())

    def singular_points(self):
        """Finite singular points of the equation (roots of P)."""
        p = self.p_polynomial()
        if p.degree < 1:
            return ()
        return tuple(polynomial_roots(p))

    def residual(self, z, u, u_prime, u_second):
        """A u'' + B u' + C u at a point."""
        return (self.p_polynomial()(z) * u_second
                + self.b_polynomial()(z) * u_prime
                + self.c_polynomial()(z) * u)

    def residual_scale(self, z, u, u_prime, u_second):
        """Magnitude scale of the three residual terms at a point."""
        return (abs(self.p_polynomial()(z) * u_second)
                + abs(self.b_polynomial()(z) * u_prime)
                + abs(self.c_polynomial()(z) * u) + 1e-300)


@dataclass(frozen=True)
class GeneralHeun:
    """The general Heun equation; used only to validate the derivation engine."""

    a: complex
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    epsilon: complex
    q: complex

    def __post_init__(self):
        for name in ("a", "alpha", "beta", "gamma", "delta", "epsilon", "q"):
            object.__setattr__(self, name, _finite(getattr(self, name), name))
        if abs(self.a) < 1e-12 or abs(self.a - 1.0) < 1e-12:
            raise PreconditionError("singular location a must avoid 0 and 1")
        fuchs = self.gamma + self.delta + self.epsilon - self.alpha - self.beta - 1.0
        if abs(fuchs) > 1e-12 * max(1.0, abs(self.gamma), abs(self.delta),
                                    abs(self.epsilon), abs(self.alpha), abs(self.beta)):
            raise PreconditionError(
                "exponent-sum condition gamma+delta+epsilon = alpha+beta+1 violated")

    def operator(self):
        aa = self.a
        z01 = Polynomial([0.0, -1.0, 1.0])            # z(z-1)
        za = Polynomial([-aa, 1.0])                   # z - a
        A = z01 * za
        B = (self.gamma * Polynomial([-1.0, 1.0]) * za
             + self.delta * Polynomial([0.0, 1.0]) * za
             + self.epsilon * z01)
        C = Polynomial([-self.q, self.alpha * self.beta])
        return RationalOperator(A, B, C)


@dataclass(frozen=True)
class WeightSpec:
    """Weight exponent L(z) of v = e^(L) u', normalized to L(center) = 0.

    The zero polynomial stands for the plain derivative v = u'; nonzero
    exponents must be nonconstant of degree 1..3.
    """

    center: complex
    exponent: Polynomial

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.exponent.is_zero and not 1 <= self.exponent.degree <= 3:
            raise PreconditionError(
                "weight exponent must be zero or of degree 1..3")

    @classmethod
    def plain(cls, center=0.0):
        """The unweighted derivative v = u'."""
        return cls(center, Polynomial())

    @classmethod
    def monomial(cls, center, rate, power):
        """L(z) = rate * (z - center)^power / power."""
        center = complex(center)
        base = Polynomial([-center, 1.0])
        return cls(center, (complex(rate) / power) * base ** power)


@dataclass(frozen=True)
class RationalOperator:
    """Second-order operator A u'' + B u' + C u with polynomial coefficients."""

    a: Polynomial
    b: Polynomial
    c: Polynomial

    def __post_init__(self):
        if self.a.is_zero:
            raise PreconditionError("leading polynomial must not vanish")

    def scale(self):
        return max(self.a.scale(), self.b.scale(), self.c.scale())

    def apply(self, z, v, v_prime, v_second):
        return self.a(z) * v_second + self.b(z) * v_prime + self.c(z) * v

    def normalized(self):
        """Cancel factors common to A, B, C and make A monic."""
        candidates = [] if self.a.degree < 1 else polynomial_roots(self.a)
        return _cancel_common(self.a, self.b, self.c, candidates)

    def singular_points(self, tol=_CANCEL_TOL):
        """Distinct finite singular points: roots of A not removable in B, C."""
        op = self.normalized()
        if op.a.degree < 1:
            return ()
        roots = polynomial_roots(op.a)
        out = []
        for r in roots:
            if not any(abs(r - s) <= 1e-8 * max(1.0, abs(s)) for s in out):
                out.append(r)
        return tuple(out)


def _dedupe(points):
    out = []
    for p in points:
        if not any(abs(p - s) <= 1e-9 * max(1.0, abs(s)) for s in out):
            out.append(p)
    return out


def _cancel_common(A, B, C, candidates):
    for r in _dedupe(candidates):
        while (A.degree >= 1 and A.vanishes_at(r, _CANCEL_TOL)
               and B.vanishes_at(r, _CANCEL_TOL) and C.vanishes_at(r, _CANCEL_TOL)):
            A = A.deflate(r)
            B = B.deflate(r)
            C = C.deflate(r)
    lead = A.leading
    return RationalOperator((A / lead).trimmed(1e-14), (B / lead).trimmed(1e-14),
                            (C / lead).trimmed(1e-14))


def extra_singularity(eq):
    """Location z0 = q/alpha of the singular point gained by the v-equation."""
    if eq.alpha == 0:
        raise DegenerateError("alpha = 0 puts the extra singular point at infinity")
    return eq.q / eq.alpha


def derive_v_equation(op_u, weight):
    """Operator annihilating v = e^(L) u' for solutions u of op_u.

    With f = B/A, g = C/A the construction solves u out of the original
    equation, differentiates once more, and clears denominators:

        v'' + (f - 2L' - g'/g) v'
            + (f' - L'' - L'(f - L') - (f - L')g'/g + g) v = 0.

    Raises DegenerateError when C vanishes identically (then u' already
    satisfies a first-order equation and quadrature suffices).
    """
    if isinstance(op_u, (ConfluentHeun, GeneralHeun)):
        op_u = op_u.operator()
    A, B, C = op_u.a, op_u.b, op_u.c
    if C.is_zero:
        raise DegenerateError("last term vanishes: general solution by quadratures")
    Lp = weight.exponent.derivative()
    Lpp = Lp.derivative()
    Ap, Bp, Cp = A.derivative(), B.derivative(), C.derivative()
    W = Cp * A - C * Ap                      # numerator of g'/g over A*C
    AC = A * C
    A2C = A * AC
    f_num = B * C - 2.0 * (Lp * AC) - W      # over A*C
    g_num = ((Bp * A - B * Ap) * C - Lpp * A2C - Lp * (B * AC) + (Lp * Lp) * A2C
             - (B - Lp * A) * W + A * (C * C))  # over A^2*C
    A_v = A2C
    B_v = A * f_num
    C_v = g_num
    candidates = []
    if A.degree >= 1:
        candidates += list(polynomial_roots(A))
    if C.degree >= 1:
        candidates += list(polynomial_roots(C))
    return _cancel_common(A_v, B_v, C_v, candidates)


def _local_order(poly, point, cap):
    """Vanishing order of poly at point, capped; returns (order, deflated)."""
    order = 0
    p = poly
    while order < cap and not p.is_zero and p.vanishes_at(point, _CANCEL_TOL):
        p = p.deflate(point)
        order += 1
    return order, p


def indicial_exponents(op, z_pt):
    """Characteristic exponents at a regular singular point of op.

    Roots of mu(mu-1) + p0 mu + q0 = 0 where p0, q0 lead the local
    expansions of (z-z_pt) B/A and (z-z_pt)^2 C/A. Raises NotSingularError
    at ordinary points and IrregularError when the pole orders exceed a
    regular singularity.
    """
    z_pt = complex(z_pt)
    op = op.normalized()
    m_a, a_hat = _local_order(op.a, z_pt, op.a.degree)
    if m_a == 0:
        raise NotSingularError(f"{z_pt} is an ordinary point")
    a0 = a_hat(z_pt)

    m_b, b_red = _local_order(op.b, z_pt, m_a - 1)
    if m_b < m_a - 1:
        if not op.b.is_zero and not b_red.vanishes_at(z_pt, _CANCEL_TOL):
            raise IrregularError(f"{z_pt} is an irregular singular point")
    p0 = b_red(z_pt) / a0 if m_b == m_a - 1 and not op.b.is_zero else 0j
    if op.b.is_zero:
        p0 = 0j

    need_c = max(m_a - 2, 0)
    m_c, c_red = _local_order(op.c, z_pt, need_c)
    if m_c < need_c and not op.c.is_zero and not c_red.vanishes_at(z_pt, _CANCEL_TOL):
        raise IrregularError(f"{z_pt} is an irregular singular point")
    q0 = 0j
    if m_a >= 2 and not op.c.is_zero and m_c == need_c:
        q0 = c_red(z_pt) / a0

    # mu^2 + (p0 - 1) mu + q0 = 0
    disc = cmath.sqrt((p0 - 1.0) ** 2 - 4.0 * q0)
    mu1 = 0.5 * (-(p0 - 1.0) + disc)
    mu2 = 0.5 * (-(p0 - 1.0) - disc)
    pair = sorted([mu1, mu2], key=lambda m: (-m.real, -m.imag))
    return pair[0], pair[1]


@dataclass(frozen=True)
class ClosedForm:
    """Two-constant general solution u = c1 u1 + c2 u2 in closed form."""

    kind: str
    u1: object
    u2: object
    u1_prime: object
    u2_prime: object

    def value(self, z, c1, c2):
        return c1 * self.u1(z) + c2 * self.u2(z)

    def derivative(self, z, c1, c2):
        return c1 * self.u1_prime(z) + c2 * self.u2_prime(z)


_TRUNCATED_RATE = {"SCHE": "epsilon", "DCHE": "epsilon", "BCHE": "delta",
                   "TCHE": "gamma"}
_QUAD_BASE = {"SCHE": 0.5 + 0j, "DCHE": 0.5 + 0j, "BCHE": 0.5 + 0j,
              "TCHE": 0.0 + 0j}


def _truncated_weight_factor(eq):
    """F(z) with u' = C2 e^(-rate z) F(z) solving the last-term-free equation."""
    g, d, e = eq.gamma, eq.delta, eq.epsilon
    if eq.variant == "SCHE":
        return lambda z: (1.0 - z) ** (-d) * z ** (-g)
    if eq.variant == "DCHE":
        return lambda z: cmath.exp(g / z) * z ** (-d)
    if eq.variant == "BCHE":
        return lambda z: cmath.exp(-e * z * z / 2.0) * z ** (-g)
    return lambda z: cmath.exp(-d * z * z / 2.0 - e * z ** 3 / 3.0)


def _match(x, y, scale):
    return abs(x - y) <= 1e-12 * max(1.0, scale)


def special_closed_form(eq, quad_tol=1e-11):
    """Catalogued closed-form general solutions, or None.

    Cases: (i) alpha = q = 0, the last-term-free equation solved by a
    constant plus one quadrature; (ii) BCHE with delta = q = 0, a pair of
    confluent hypergeometric functions of argument -eps z^2/2; (iii) TCHE
    with gamma = eps q^2/alpha^2 and delta = -2 eps q/alpha, a pair of
    confluent hypergeometric functions of argument -eps (z-z0)^3/3.
    """
    scale = max(abs(eq.gamma), abs(eq.delta), abs(eq.epsilon), abs(eq.alpha),
                abs(eq.q), 1.0)
    if _match(eq.alpha, 0.0, scale) and _match(eq.q, 0.0, scale):
        rate = getattr(eq, _TRUNCATED_RATE[eq.variant])
        F = _truncated_weight_factor(eq)
        base = _QUAD_BASE[eq.variant]

        def u2(z, _F=F, _r=rate, _b=base):
            return integrate_path(lambda t: cmath.exp(-_r * t) * _F(t),
                                  [_b, complex(z)], rel_tol=quad_tol,
                                  abs_tol=1e-300)

        return ClosedForm(
            kind="truncated-quadrature",
            u1=lambda z: 1.0 + 0j,
            u2=u2,
            u1_prime=lambda z: 0j,
            u2_prime=lambda z, _F=F, _r=rate: cmath.exp(-_r * z) * _F(z),
        )

    if eq.variant == "BCHE" and _match(eq.delta, 0.0, scale) and _match(eq.q, 0.0, scale):
        g, e, al = eq.gamma, eq.epsilon, eq.alpha
        if e == 0:
            return None
        a1, b1 = al / (2.0 * e), (1.0 + g) / 2.0
        a2, b2 = al / (2.0 * e) + (1.0 - g) / 2.0, (3.0 - g) / 2.0

        def w(z):
            return -e * z * z / 2.0

        def u1(z):
            return kummer_1f1(a1, b1, w(z))

        def u1p(z):
            return kummer_1f1(a1 + 1, b1 + 1, w(z)) * (a1 / b1) * (-e * z)

        def u2(z):
            return z ** (1.0 - g) * kummer_1f1(a2, b2, w(z))

        def u2p(z):
            return ((1.0 - g) * z ** (-g) * kummer_1f1(a2, b2, w(z))
                    + z ** (1.0 - g) * kummer_1f1(a2 + 1, b2 + 1, w(z))
                    * (a2 / b2) * (-e * z))

        return ClosedForm("bche-kummer-pair", u1, u2, u1p, u2p)

    if eq.variant == "TCHE" and abs(eq.alpha) > 0 and eq.epsilon != 0:
        e, al, q = eq.epsilon, eq.alpha, eq.q
        z0 = q / al
        if _match(eq.gamma, e * z0 * z0, scale) and _match(eq.delta, -2.0 * e * z0, scale):
            a1, b1 = al / (3.0 * e), 2.0 / 3.0
            a2, b2 = al / (3.0 * e) + 1.0 / 3.0, 4.0 / 3.0

            def w(z):
                return -e * (z - z0) ** 3 / 3.0

            def wp(z):
                return -e * (z - z0) ** 2

            def u1(z):
                return kummer_1f1(a1, b1, w(z))

            def u1p(z):
                return kummer_1f1(a1 + 1, b1 + 1, w(z)) * (a1 / b1) * wp(z)

            def u2(z):
                return (z - z0) * kummer_1f1(a2, b2, w(z))

            def u2p(z):
                return (kummer_1f1(a2, b2, w(z))
                        + (z - z0) * kummer_1f1(a2 + 1, b2 + 1, w(z))
                        * (a2 / b2) * wp(z))

            return ClosedForm("tche-kummer-pair", u1, u2, u1p, u2p)

    return None
