"""Complex polynomials, rational functions, and simultaneous root finding.

Coefficients are stored lowest degree first. The zero polynomial has an
empty coefficient list and degree -1. Arithmetic accepts plain numbers, so
parameterized expressions can be built by feeding ``Polynomial`` values
through the same formulas used for scalars (this is how the termination
search obtains series coefficients as polynomials in the accessory
parameter q).
"""

from __future__ import annotations

import cmath
import math

from ..errors import ConvergenceError, PreconditionError

__all__ = ["Polynomial", "RationalFunction", "polynomial_roots"]

_ROOT_MATCH_TOL = 1e-12   # relative tolerance for cancelling matching roots
_RESIDUAL_TOL = 1e-10     # acceptance residual for computed roots


def _as_coeffs(values):
    out = [complex(v) for v in values]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class Polynomial:
    """Immutable dense polynomial with complex coefficients."""

    __slots__ = ("coef",)

    def __init__(self, coefficients=()):
        object.__setattr__(self, "coef", _as_coeffs(coefficients))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def from_roots(cls, roots, leading=1.0):
        p = cls([leading])
        for r in roots:
            p = p * cls([-complex(r), 1.0])
        return p

    @classmethod
    def variable(cls):
        """The monomial z."""
        return cls([0.0, 1.0])

    # -- structure -------------------------------------------------------
    @property
    def degree(self):
        return len(self.coef) - 1

    @property
    def is_zero(self):
        return not self.coef

    @property
    def leading(self):
        if self.is_zero:
            return 0j
        return self.coef[-1]

    def scale(self):
        """Largest coefficient magnitude (0 for the zero polynomial)."""
        return max((abs(c) for c in self.coef), default=0.0)

    def trimmed(self, rel_tol=0.0):
        """Drop leading coefficients of magnitude <= rel_tol * scale."""
        s = self.scale()
        if s == 0.0:
            return Polynomial()
        cut = rel_tol * s
        out = list(self.coef)
        while out and abs(out[-1]) <= cut:
            out.pop()
        return Polynomial(out)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coef), len(other.coef))
        a = list(self.coef) + [0j] * (n - len(self.coef))
        for i, c in enumerate(other.coef):
            a[i] += c
        return Polynomial(a)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coef])

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [0j] * (len(self.coef) + len(other.coef) - 1)
        for i, a in enumerate(self.coef):
            for j, b in enumerate(other.coef):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        s = complex(scalar)
        return Polynomial([c / s for c in self.coef])

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial([1.0])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coef == other.coef

    def __hash__(self):
        return hash(self.coef)

    def __repr__(self):
        return f"Polynomial({list(self.coef)!r})"

    # -- calculus and evaluation ------------------------------------------
    def __call__(self, z):
        acc = 0j
        for c in reversed(self.coef):
            acc = acc * z + c
        return acc

    def derivative(self):
        return Polynomial([i * c for i, c in enumerate(self.coef)][1:])

    def compose_shift(self, c):
        """Coefficients of p(z + c) (Shaw-Traub repeated synthetic division)."""
        c = complex(c)
        work = list(self.coef)
        n = len(work)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                work[j] += c * work[j + 1]
        return Polynomial(work)

    def deflate(self, root):
        """Divide by (z - root), discarding the remainder."""
        if self.is_zero:
            return Polynomial()
        root = complex(root)
        out = [0j] * (len(self.coef) - 1)
        acc = 0j
        for i in range(len(self.coef) - 1, 0, -1):
            acc = acc * root + self.coef[i]
            out[i - 1] = acc
        return Polynomial(out)

    def vanishes_at(self, z, rel_tol=_RESIDUAL_TOL):
        """True when |p(z)| is negligible against the coefficient scale."""
        s = self.scale()
        if s == 0.0:
            return True
        bound = rel_tol * s * max(1.0, abs(z)) ** max(self.degree, 0)
        return abs(self(z)) <= bound

    def root_multiplicity(self, z, rel_tol=_RESIDUAL_TOL, max_mult=None):
        """Order of vanishing at z, judged against the coefficient scale."""
        p = self
        mult = 0
        cap = self.degree if max_mult is None else min(max_mult, self.degree)
        while mult < cap and not p.is_zero and p.vanishes_at(z, rel_tol):
            p = p.deflate(z)
            mult += 1
        return mult

    def monic(self):
        if self.is_zero:
            return self
        return self / self.leading

    def roots(self, max_iter=500):
        return polynomial_roots(self, max_iter=max_iter)


def _coerce(value):
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, float, complex)):
        return Polynomial([value])
    return NotImplemented


def polynomial_roots(p, max_iter=500):
    """All roots of p with multiplicity (Aberth-Ehrlich + Newton polish).

    Exact zero roots (trailing zero coefficients) are split off before the
    simultaneous iteration. Raises ConvergenceError when the residual bound
    |p(r)| <= 1e-10 * max|coef| * max(1, |r|)^deg is not met after the
    iteration cap.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    if p.degree < 1:
        raise PreconditionError("polynomial_roots requires degree >= 1")
    scale = p.scale()
    coef = list(p.coef)
    zeros = 0
    while abs(coef[0]) <= 1e-15 * scale and len(coef) > 1:
        coef.pop(0)
        zeros += 1
    roots = [0j] * zeros
    q = Polynomial(coef).monic()
    d = q.degree
    if d == 0:
        return roots
    if d == 1:
        return roots + [-q.coef[0]]

    # initial guesses on a circle sized by the coefficients
    r0 = max(abs(q.coef[0]) ** (1.0 / d), 1e-8)
    r0 = min(r0, 1.0 + max(abs(c) for c in q.coef[:-1]))
    guesses = [r0 * cmath.exp(2j * math.pi * (k + 0.35) / d + 0.45j)
               for k in range(d)]
    dq = q.derivative()

    x = guesses
    for _ in range(max_iter):
        moved = 0.0
        newx = list(x)
        for i in range(d):
            pv = q(x[i])
            dv = dq(x[i])
            if dv == 0:
                newx[i] = x[i] * (1 + 1e-8) + 1e-8
                moved = math.inf
                continue
            w = pv / dv
            rep = 0j
            for j in range(d):
                if j != i:
                    diff = x[i] - x[j]
                    if diff == 0:
                        diff = 1e-14 * (1 + abs(x[i]))
                    rep += 1.0 / diff
            denom = 1.0 - w * rep
            if denom == 0:
                denom = 1e-14
            step = w / denom
            newx[i] = x[i] - step
            moved = max(moved, abs(step) / (1.0 + abs(newx[i])))
        x = newx
        if moved < 1e-15:
            break

    # Newton polish
    for i in range(d):
        for _ in range(4):
            dv = dq(x[i])
            if dv == 0:
                break
            step = q(x[i]) / dv
            if abs(step) > 0.5 * (1 + abs(x[i])):
                break
            x[i] -= step

    qs = q.scale()
    for r in x:
        bound = _RESIDUAL_TOL * qs * max(1.0, abs(r)) ** d
        if abs(q(r)) > bound:
            raise ConvergenceError(
                f"root iteration residual {abs(q(r)):.3e} above bound {bound:.3e}")
    return roots + sorted(x, key=lambda r: (round(r.real, 12), round(r.imag, 12)))


def _match(a, b):
    return abs(a - b) <= _ROOT_MATCH_TOL * max(1.0, abs(a), abs(b))


class RationalFunction:
    """Quotient of two polynomials, normalized on request.

    Normalization removes numerator/denominator root pairs matching within
    1e-12 relative and makes the denominator monic; removable factors from
    cleared-denominator constructions must not survive into singularity
    detection.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        num = num if isinstance(num, Polynomial) else Polynomial(num)
        den = den if isinstance(den, Polynomial) else Polynomial(den)
        if den.is_zero:
            raise PreconditionError("rational function with zero denominator")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("RationalFunction is immutable")

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def __add__(self, other):
        other = _coerce_rat(other)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_coerce_rat(other))

    def __rsub__(self, other):
        return _coerce_rat(other) + (-self)

    def __mul__(self, other):
        other = _coerce_rat(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_rat(other)
        if other.num.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def derivative(self):
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den)

    def normalized(self):
        num, den = self.num, self.den
        if num.is_zero:
            return RationalFunction(Polynomial(), Polynomial([1.0]))
        den_roots = polynomial_roots(den) if den.degree >= 1 else []
        for r in den_roots:
            if num.degree >= 1 and num.vanishes_at(r, _ROOT_MATCH_TOL):
                num = num.deflate(r)
                den = den.deflate(r)
        lead = den.leading
        return RationalFunction(num / lead, den / lead)

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"


def _coerce_rat(value):
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Polynomial):
        return RationalFunction(value, Polynomial([1.0]))
    if isinstance(value, (int, float, complex)):
        return RationalFunction(Polynomial([value]), Polynomial([1.0]))
    raise TypeError(f"cannot coerce {type(value)!r} to RationalFunction")
