"""Special functions and polynomial machinery."""

import cmath
import math
import random

import pytest

from heun_gamma.errors import ConvergenceError, PoleError, PreconditionError
from heun_gamma.numerics import (
    Polynomial,
    RationalFunction,
    gamma,
    kummer_1f1,
    pochhammer,
    polynomial_roots,
    upper_gamma_cf,
    upper_gamma_series,
    upper_incomplete_gamma,
)

from .oracles import gamma_upper_quadrature


# ---------------------------------------------------------------- gamma

def test_gamma_known_values():
    assert abs(gamma(1.0) - 1.0) < 1e-14
    assert abs(gamma(5.0) - 24.0) < 1e-13 * 24
    assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-14


def test_gamma_pole():
    for a in (0.0, -1.0, -7.0, -3.0 + 1e-13j):
        with pytest.raises(PoleError):
            gamma(a)


def test_gamma_reflection_consistency():
    rng = random.Random(5)
    for _ in range(300):
        a = complex(rng.uniform(0.3, 20.0), rng.uniform(-15.0, 15.0))
        # Gamma(a+1) = a Gamma(a)
        lhs = gamma(a + 1.0)
        rhs = a * gamma(a)
        assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


# ----------------------------------------------------------- pochhammer

def test_pochhammer_values():
    assert pochhammer(2.0, 0) == 1.0
    assert abs(pochhammer(3.0, 4) - 360.0) < 1e-12 * 360
    assert pochhammer(-2.0, 3) == 0.0


# ------------------------------------------------------------------ 1F1

def test_kummer_trivial():
    assert kummer_1f1(0.3, 1.7, 0.0) == 1.0
    assert abs(kummer_1f1(1.0, 2.0, 1.0) - (math.e - 1.0)) < 1e-12
    assert abs(kummer_1f1(2.0, 2.0, 1.0) - math.e) < 1e-12


def test_kummer_pole():
    with pytest.raises(PoleError):
        kummer_1f1(1.0, -2.0, 0.5)


def test_kummer_transform_identity():
    """1F1(a;b;z) = e^z 1F1(b-a;b;-z) on a cancellation-bounded domain."""
    rng = random.Random(6)
    checked = 0
    while checked < 400:
        a = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        b = complex(rng.uniform(0.3, 5), rng.uniform(-3, 3))
        r = rng.uniform(0.1, 40.0)
        th = rng.uniform(0, 2 * math.pi)
        z = r * cmath.exp(1j * th)
        if abs(z) - abs(z.real) > 8.0:
            continue  # the Taylor route sheds ~(|z|-|Re z|)/ln10 digits
        lhs = kummer_1f1(a, b, z)
        rhs = cmath.exp(z) * kummer_1f1(b - a, b, -z)
        assert abs(lhs - rhs) <= 1e-10 * (abs(lhs) + abs(rhs))
        checked += 1


# ------------------------------------------------- incomplete gamma

def test_upper_gamma_trivial():
    assert abs(upper_incomplete_gamma(1.0, 2.0) - math.exp(-2.0)) < 1e-13
    assert abs(upper_incomplete_gamma(3.0, 0.0) - 2.0) < 1e-12


def test_upper_gamma_frozen_quadrature_values():
    """Values frozen from the independent scipy contour quadrature."""
    frozen = {
        (0.5, 1.0): 0.2788055852806619 + 0j,
        (1.5, 0.7 + 0.4j): 0.6142199686223285 - 0.16992126245195283j,
        (2.5 - 1.0j, 3.0 + 2.0j): -0.6818444366907274 - 0.22492949822833352j,
        (0.25, 2.0): 0.06267233587150543 + 0j,
    }
    for (a, z), want in frozen.items():
        got = upper_incomplete_gamma(a, z)
        assert abs(got - want) <= 1e-11 * abs(want)


def test_upper_gamma_vs_quadrature_oracle():
    rng = random.Random(7)
    for _ in range(40):
        a = complex(rng.uniform(0.2, 6.0), rng.uniform(-3.0, 3.0))
        z = complex(rng.uniform(0.2, 8.0), rng.uniform(-6.0, 6.0))
        want = gamma_upper_quadrature(a, z)
        got = upper_incomplete_gamma(a, z)
        assert abs(got - want) <= 1e-10 * (abs(want) + 1e-300)


def test_upper_gamma_pole_at_zero_argument():
    with pytest.raises(PoleError):
        upper_incomplete_gamma(-0.5, 0.0)


def test_upper_gamma_nonpositive_integer_parameter():
    """Gamma(-m; z) stays finite; checked against the quadrature oracle."""
    for m, z in ((0, 1.3), (1, 0.8 + 0.3j), (3, 2.0), (2, 1.5 - 0.7j)):
        want = gamma_upper_quadrature(-m + 0.0, z)
        got = upper_incomplete_gamma(-float(m), z)
        assert abs(got - want) <= 1e-9 * abs(want)


def test_upper_gamma_recurrence_identity():
    """Gamma(a+1; z) = a Gamma(a; z) + z^a e^-z, scaled by the term sizes."""
    rng = random.Random(8)
    checked = 0
    while checked < 1000:
        a = complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
        r = math.exp(rng.uniform(math.log(0.1), math.log(150.0)))
        th = rng.uniform(-math.pi, math.pi)
        z = r * cmath.exp(1j * th)
        est = (a.real - 1) * math.log(r) - z.real - a.imag * th
        if abs(est) > 500:
            continue
        try:
            g1 = upper_incomplete_gamma(a + 1.0, z)
            g0 = upper_incomplete_gamma(a, z)
        except (PoleError, ConvergenceError):
            continue
        power = cmath.exp(a * cmath.log(z) - z)
        scale = abs(g1) + abs(a * g0) + abs(power)
        assert abs(g1 - a * g0 - power) <= 1e-10 * scale
        checked += 1


def test_upper_gamma_route_consistency_annulus():
    """Series and continued-fraction routes agree around |z| = R_SWITCH.

    Sampled where both routes hold their accuracy in doubles: the series
    needs |z| - |Re z| small, the fraction needs to stay off the cut.
    """
    rng = random.Random(9)
    checked = 0
    while checked < 1000:
        a = complex(rng.uniform(-6, 6), rng.uniform(-6, 6))
        r = rng.uniform(25.0, 35.0)
        th = rng.choice([1.0, -1.0]) * rng.uniform(0.55, 0.9) * math.pi
        z = r * cmath.exp(1j * th)
        if abs(z) - abs(z.real) > 6.0:
            continue
        s = upper_gamma_series(a, z)
        c = upper_gamma_cf(a, z)
        assert abs(s - c) <= 1e-9 * (abs(s) + abs(c))
        checked += 1


# ------------------------------------------------------- polynomials

def test_polynomial_arithmetic():
    p = Polynomial([1.0, 0.0, 1.0])          # 1 + z^2
    dp = Polynomial([0.0, -1.0, 1.0]).derivative()
    assert dp.coef == (-1.0, 2.0)             # d/dz (z^2 - z) = 2z - 1
    assert abs(p(1j)) < 1e-15                 # evaluate(z^2 + 1, i) = 0
    shifted = Polynomial([0.0, 0.0, 1.0]).compose_shift(1.0)
    assert [abs(c - w) < 1e-14 for c, w in zip(shifted.coef, (1.0, 2.0, 1.0))]
    prod = Polynomial([1.0, 1.0]) * Polynomial([-1.0, 1.0])
    assert prod.coef == (-1.0, 0.0, 1.0)


def test_polynomial_roots_basics():
    roots = polynomial_roots(Polynomial([-1.0, 0.0, 1.0]))
    assert sorted(r.real for r in roots) == pytest.approx([-1.0, 1.0])
    roots = polynomial_roots(Polynomial([2.0, -2.0, 1.0]))
    assert sorted(r.imag for r in roots) == pytest.approx([-1.0, 1.0])
    assert all(abs(r.real - 1.0) < 1e-10 for r in roots)
    roots = polynomial_roots(Polynomial([0.0, 0.0, 0.0, 1.0]))
    assert roots == [0j, 0j, 0j]


def test_polynomial_roots_requires_degree():
    with pytest.raises(PreconditionError):
        polynomial_roots(Polynomial([3.0]))


def test_polynomial_roots_round_trip():
    """from_roots then roots recovers the multiset (deg <= 12, sep >= 1e-3)."""
    rng = random.Random(10)
    for _ in range(60):
        deg = rng.randint(2, 12)
        roots = []
        attempts = 0
        while len(roots) < deg and attempts < 500:
            attempts += 1
            cand = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if all(abs(cand - r) >= 1e-3 for r in roots):
                roots.append(cand)
        p = Polynomial.from_roots(roots)
        got = sorted(polynomial_roots(p), key=lambda r: (r.real, r.imag))
        want = sorted(roots, key=lambda r: (r.real, r.imag))
        for g, w in zip(got, want):
            assert abs(g - w) <= 1e-8 * max(1.0, abs(w))


def test_rational_function_normalization():
    num = Polynomial.from_roots([1.0, 2.0, 3.0])
    den = Polynomial.from_roots([2.0, 5.0])
    rf = RationalFunction(num, den).normalized()
    assert rf.den.degree == 1
    assert abs(rf(4.0) - num(4.0) / den(4.0)) < 1e-12 * abs(rf(4.0))
