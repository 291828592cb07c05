"""Equation types, the v-equation derivation engine, and closed forms."""

import cmath
import math
import random

import pytest

from heun_gamma import (
    ConfluentHeun,
    GeneralHeun,
    RationalOperator,
    WeightSpec,
    derive_v_equation,
    extra_singularity,
    indicial_exponents,
    scheme_from_id,
    special_closed_form,
)
from heun_gamma.errors import (
    DegenerateError,
    IrregularError,
    NotSingularError,
    PreconditionError,
)
from heun_gamma.numerics import Polynomial
from heun_gamma.oracle import SolutionSample, integrate_reference

from .conftest import ALL_SCHEME_IDS, draw_equation


def op_allclose(left, right, tol=1e-8):
    """Compare two operators coefficient-wise after monic normalization."""
    left = left.normalized()
    right = right.normalized()
    for pl, pr in zip((left.a, left.b, left.c), (right.a, right.b, right.c)):
        scale = max(pl.scale(), pr.scale(), 1e-30)
        assert pl.degree == pr.degree, (pl, pr)
        for cl, cr in zip(pl.coef, pr.coef):
            assert abs(cl - cr) <= tol * scale


# ------------------------------------------------------ basic structure

def test_extra_singularity():
    eq = ConfluentHeun("SCHE", 1, 1, 1, 2.0, 1.0)
    assert extra_singularity(eq) == 0.5
    assert extra_singularity(ConfluentHeun("BCHE", 1, 1, 1, 1.0, 0.0)) == 0.0
    with pytest.raises(DegenerateError):
        extra_singularity(ConfluentHeun("TCHE", 1, 1, 1, 0.0, 1.0))


def test_general_heun_exponent_sum_enforced():
    GeneralHeun(2.0, 0.5, 0.5, 1.0, 0.4, 0.6, 0.3)
    with pytest.raises(PreconditionError):
        GeneralHeun(2.0, 0.5, 0.5, 1.0, 0.4, 0.7, 0.3)
    with pytest.raises(PreconditionError):
        GeneralHeun(1.0, 0.5, 0.5, 1.0, 0.4, 0.6, 0.3)


# ------------------------------------------------- derivation engine

def test_derive_trivial_oscillator():
    """u'' + u = 0 maps to v'' + v = 0 under the plain derivative."""
    op = RationalOperator(Polynomial([1.0]), Polynomial(), Polynomial([1.0]))
    ov = derive_v_equation(op, WeightSpec.plain())
    op_allclose(ov, RationalOperator(Polynomial([1.0]), Polynomial(),
                                     Polynomial([1.0])), tol=1e-12)


def test_derive_airy_like():
    """u'' + z u = 0 maps to z v'' - v' + z^2 v = 0."""
    op = RationalOperator(Polynomial([1.0]), Polynomial(), Polynomial([0.0, 1.0]))
    ov = derive_v_equation(op, WeightSpec.plain())
    want = RationalOperator(Polynomial([0.0, 1.0]), Polynomial([-1.0]),
                            Polynomial([0.0, 0.0, 1.0]))
    op_allclose(ov, want, tol=1e-12)


def test_derive_degenerate_without_last_term():
    op = RationalOperator(Polynomial([1.0]), Polynomial([1.0]), Polynomial())
    with pytest.raises(DegenerateError):
        derive_v_equation(op, WeightSpec(0.0, Polynomial([0.0, 1.0])))


def test_general_heun_five_singular_points():
    gh = GeneralHeun(2.0, 0.7, 0.9, 1.1, 0.4, 0.7 + 0.9 + 1.0 - 1.1 - 0.4, 0.35)
    ov = derive_v_equation(gh.operator(), WeightSpec.plain())
    pts = sorted(ov.singular_points(), key=lambda p: (p.real, p.imag))
    want = sorted([0.0, 1.0, 2.0, 0.35 / (0.7 * 0.9)], key=float)
    assert len(pts) == 4
    for p, wv in zip(pts, want):
        assert abs(p - wv) < 1e-8


@pytest.mark.parametrize("which", ["zero", "ab", "aab"])
def test_general_heun_special_q_collapses(which):
    """q in {0, ab, a*ab} merges the extra point into an existing one."""
    a, al, be = 2.0, 0.7, 0.9
    q = {"zero": 0.0, "ab": al * be, "aab": a * al * be}[which]
    ga, de, ep = 1.1, 0.4, al + be + 1.0 - 1.1 - 0.4
    gh = GeneralHeun(a, al, be, ga, de, ep, q)
    ov = derive_v_equation(gh.operator(), WeightSpec.plain())
    assert len(ov.singular_points()) == 3


# ---------------------------------- transcription fixtures (Pi checks)

def _linear(z0):
    return Polynomial([-z0, 1.0])


def _fixture_operator(scheme_id, eq, lam):
    """The printed v-equation for the scheme, cleared of denominators."""
    g, d, e, al, q = eq.gamma, eq.delta, eq.epsilon, eq.alpha, eq.q
    z = Polynomial([0.0, 1.0])
    one = Polynomial([1.0])
    aq = Polynomial([-q, al])
    z0 = q / al if al != 0 else None
    if scheme_id == "sche-I-origin":
        A = z * _linear(1.0) * aq
        B = ((g + 1) * _linear(1.0) * aq + (d + 1) * z * aq
             - e * z * _linear(1.0) * aq - al * z * _linear(1.0))
        C = Polynomial([q * q + al * g - q * (g + d + g * e),
                        al * g * e + q * (g + d) * e - 2 * al * q,
                        al * (al - (g + d) * e)])
        return RationalOperator(A, B, C)
    if scheme_id == "dche-I-origin":
        z2 = z * z
        A = z2 * aq
        B = g * aq + (d + 2) * z * aq - e * z2 * aq - al * z2
        C = Polynomial([q * q + q * (g * e - d) - al * g,
                        q * (d * e - 2 * al) - al * g * e,
                        al * (al - d * e)])
        return RationalOperator(A, B, C)
    if scheme_id == "bche-I-origin":
        A = z * aq
        B = (g + 1) * aq + (d - 2 * lam) * z * aq + e * z * z * aq - al * z
        C = Polynomial([q * q + q * (g * lam + lam - d) - al * g,
                        -(al * g * lam + q * (2 * al + 2 * e - d * lam + lam * lam)),
                        q * e * lam + al * (al + e - d * lam + lam * lam),
                        -al * e * lam])
        return RationalOperator(A, B, C)
    if scheme_id == "bche-II-origin":
        A = z * aq
        B = (g + 1) * aq + d * z * aq - e * z * z * aq - al * z
        C = Polynomial([q * q - q * d - al * g,
                        q * g * e - 2 * q * al,
                        q * d * e + al * (al - g * e),
                        -al * d * e])
        return RationalOperator(A, B, C)
    if scheme_id == "bche-II-extra":
        lam_b = d + e * z0
        A = z * _linear(z0)
        B = ((g + 1) * _linear(z0) + (lam_b + e * z0) * z * _linear(z0)
             - e * z * z * _linear(z0) - z)
        C = Polynomial([-g - z0 * lam_b + z0 * z0 * (al - g * e),
                        -z0 * (2 * al - 2 * g * e + z0 * e * lam_b),
                        al - g * e + 2 * z0 * e * lam_b,
                        -e * lam_b])
        return RationalOperator(A, B, C)
    if scheme_id == "tche-I-extra":
        A = _linear(z0)
        B = Polynomial([g - 2 * lam, d, e]) * _linear(z0) - one
        kap = g + d * z0 + e * z0 * z0
        xi_poly = [(lam - kap), (lam - kap) * lam, (al + e - d * lam - 2 * e * z0 * lam),
                   -e * lam]
        C = Polynomial(xi_poly).compose_shift(-z0)
        return RationalOperator(A, B, C)
    if scheme_id == "tche-IIq-extra":
        A = _linear(z0)
        B = Polynomial([g + 2 * z0 * lam, d - 2 * lam, e]) * _linear(z0) - one
        kap = g + d * z0 + e * z0 * z0
        xi_poly = [-kap, 0.0, -kap * lam + al + e, -lam * (d + 2 * e * z0 - lam),
                   -e * lam]
        C = Polynomial(xi_poly).compose_shift(-z0)
        return RationalOperator(A, B, C)
    if scheme_id == "tche-IIc-extra":
        A = _linear(z0)
        B = Polynomial([g - 2 * e * z0 * z0, d + 4 * e * z0, -e]) * _linear(z0) - one
        kap = g + d * z0 + e * z0 * z0
        xi_poly = [-kap, 0.0, al, -kap * e, -e * (d + 2 * z0 * e)]
        C = Polynomial(xi_poly).compose_shift(-z0)
        return RationalOperator(A, B, C)
    raise AssertionError(scheme_id)


_FIXTURE_IDS = ["sche-I-origin", "dche-I-origin", "bche-I-origin",
                "bche-II-origin", "bche-II-extra", "tche-I-extra",
                "tche-IIq-extra", "tche-IIc-extra"]


@pytest.mark.parametrize("scheme_id", _FIXTURE_IDS)
def test_transcribed_operator_matches_derivation(scheme_id):
    """Derived-from-scratch operators agree with the printed forms."""
    rng = random.Random(hash(scheme_id) % 100000)
    eq = draw_equation(scheme_id, rng)
    scheme = scheme_from_id(scheme_id)
    lam = scheme.resolve_rate(eq)
    derived = derive_v_equation(eq.operator(), scheme.weight_spec(eq))
    fixture = _fixture_operator(scheme_id, eq, lam)
    op_allclose(derived, fixture)


def test_general_heun_transcribed_quadratic():
    """The general-equation fixture (needs the exponent-sum condition)."""
    a, al, be, ga, de, q = 2.0, 0.7, 0.9, 1.1, 0.4, 0.35
    ep = al + be + 1 - ga - de
    gh = GeneralHeun(a, al, be, ga, de, ep, q)
    derived = derive_v_equation(gh.operator(), WeightSpec.plain())
    z = Polynomial([0.0, 1.0])
    z01a = z * _linear(1.0) * _linear(a)
    abq = Polynomial([-q, al * be])
    A = z01a * abq
    B = ((ga + 1) * _linear(1.0) * _linear(a) * abq
         + (de + 1) * z * _linear(a) * abq
         + (ep + 1) * z * _linear(1.0) * abq
         - al * be * z01a)
    C = ((1 + al) * (1 + be) * z * Polynomial([-2 * q, al * be])
         + Polynomial([q * q + q * (ga + a * ga + a * de + ep) - a * al * be * ga]))
    op_allclose(derived, RationalOperator(A, B, C))


# ------------------------------------------------- indicial exponents

def test_indicial_extra_singularity_is_0_2():
    eq = ConfluentHeun("SCHE", 1.0, 1.0, 1.0, 1.0, 0.3)
    op = derive_v_equation(eq.operator(), WeightSpec.plain())
    mus = indicial_exponents(op, extra_singularity(eq))
    assert abs(mus[0] - 2.0) < 1e-9 and abs(mus[1]) < 1e-9


def test_indicial_sche_origin():
    eq = ConfluentHeun("SCHE", 0.9, 0.4, 1.0, 1.0, 0.3)
    mus = indicial_exponents(eq.operator(), 0.0)
    assert abs(mus[0] - (1.0 - 0.9)) < 1e-10 and abs(mus[1]) < 1e-10


def test_indicial_sche_v_equation_q_zero():
    """With q = 0 the merged singular point carries exponents {1, -gamma}."""
    eq = ConfluentHeun("SCHE", 0.7, 0.4, 1.0, 1.0, 0.0)
    scheme = scheme_from_id("sche-I-origin")
    op = derive_v_equation(eq.operator(), scheme.weight_spec(eq))
    mus = indicial_exponents(op, 0.0)
    assert abs(mus[0] - 1.0) < 1e-9
    assert abs(mus[1] + 0.7) < 1e-9


def test_indicial_errors():
    eq = ConfluentHeun("SCHE", 0.9, 0.4, 1.0, 1.0, 0.3)
    with pytest.raises(NotSingularError):
        indicial_exponents(eq.operator(), 0.5)
    eqd = ConfluentHeun("DCHE", 0.9, 0.4, 1.0, 1.0, 0.3)
    with pytest.raises(IrregularError):
        indicial_exponents(eqd.operator(), 0.0)


# --------------------------------------- transported-v residual property

@pytest.mark.parametrize("scheme_id", ALL_SCHEME_IDS)
def test_transported_v_satisfies_derived_equation(scheme_id):
    """An RK-transported v = e^L u' obeys the derived operator pointwise."""
    rng = random.Random(hash(scheme_id) % 99991 + 7)
    eq = draw_equation(scheme_id, rng)
    scheme = scheme_from_id(scheme_id)
    wspec = scheme.weight_spec(eq)
    op = derive_v_equation(eq.operator(), wspec)

    singular = list(eq.singular_points())
    base = None
    for cand in (0.37 + 0.21j, -0.29 + 0.33j, 0.55 - 0.4j, 2.1 + 0.8j):
        if all(abs(cand - s) > 0.15 for s in singular):
            base = cand
            break
    probes = [base + 0.12 * cmath.exp(2j * math.pi * k / 5) for k in range(5)]
    start = SolutionSample(base, 1.0 + 0.3j, -0.4 + 0.2j)

    A, B, C = eq.p_polynomial(), eq.b_polynomial(), eq.c_polynomial()
    Ap, Bp, Cp = A.derivative(), B.derivative(), C.derivative()
    Lp = wspec.exponent.derivative()
    Lpp = Lp.derivative()

    for probe in probes:
        if any(abs(probe - s) < 0.1 for s in singular):
            continue
        samp = integrate_reference(eq, start, [base, probe])[-1]
        z, u, up = samp.z, samp.u, samp.u_prime
        upp = -(B(z) * up + C(z) * u) / A(z)
        uppp = -((Bp(z) * up + B(z) * upp + Cp(z) * u + C(z) * up) * A(z)
                 - (B(z) * up + C(z) * u) * Ap(z)) / A(z) ** 2
        lam = wspec.exponent(z) - wspec.exponent(complex(z))  # zero; keep form
        el = cmath.exp(wspec.exponent(z))
        v = el * up
        vp = el * (upp + Lp(z) * up)
        vpp = el * (uppp + 2.0 * Lp(z) * upp + (Lpp(z) + Lp(z) ** 2) * up)
        res = op.apply(z, v, vp, vpp)
        scale = (abs(op.a(z) * vpp) + abs(op.b(z) * vp) + abs(op.c(z) * v) + 1e-300)
        assert abs(res) <= 1e-8 * scale, (scheme_id, probe, abs(res) / scale)


# ------------------------------------------------------- closed forms

def test_special_closed_form_none_for_generic():
    eq = ConfluentHeun("SCHE", 0.9, 0.4, 1.0, 1.0, 0.3)
    assert special_closed_form(eq) is None


@pytest.mark.parametrize("variant", ["SCHE", "DCHE", "BCHE", "TCHE"])
def test_truncated_quadrature_form_solves_equation(variant):
    """alpha = q = 0: u2' = e^(-rate z) F(z) satisfies the equation."""
    eq = ConfluentHeun(variant, 0.4, 0.6, 1.1, 0.0, 0.0)
    form = special_closed_form(eq)
    assert form is not None and form.kind == "truncated-quadrature"
    A, B = eq.p_polynomial(), eq.b_polynomial()
    Bp = B.derivative()
    for z in (0.35, 0.62, 0.45 + 0.1j):
        up = form.u2_prime(z)
        h = 1e-6
        upp = (form.u2_prime(z + h) - form.u2_prime(z - h)) / (2.0 * h)
        res = A(z) * upp + B(z) * up
        assert abs(res) <= 1e-7 * (abs(A(z) * upp) + abs(B(z) * up))


def test_bche_pair_solves_equation():
    eq = ConfluentHeun("BCHE", 0.7, 0.0, 1.0, 2.0, 0.0)
    form = special_closed_form(eq)
    assert form is not None and form.kind == "bche-kummer-pair"
    _check_pair_residual(eq, form, (0.3, 0.6, 0.8, 0.45 + 0.2j), 1e-9)


def test_tche_pair_solves_equation():
    e, al, q = 1.0, 3.0, 1.0
    z0 = q / al
    eq = ConfluentHeun("TCHE", e * z0 * z0, -2.0 * e * z0, e, al, q)
    form = special_closed_form(eq)
    assert form is not None and form.kind == "tche-kummer-pair"
    _check_pair_residual(eq, form, (0.3, 0.8, 1.2, 0.6 + 0.4j), 1e-9)


def _check_pair_residual(eq, form, points, tol):
    A, B, C = eq.p_polynomial(), eq.b_polynomial(), eq.c_polynomial()
    h = 1e-5
    for base in (form.u1, form.u2):
        for z in points:
            up = {form.u1: form.u1_prime, form.u2: form.u2_prime}[base](z)
            upp = ({form.u1: form.u1_prime, form.u2: form.u2_prime}[base](z + h)
                   - {form.u1: form.u1_prime, form.u2: form.u2_prime}[base](z - h)) / (2 * h)
            res = A(z) * upp + B(z) * up + C(z) * base(z)
            scale = abs(A(z) * upp) + abs(B(z) * up) + abs(C(z) * base(z)) + 1e-30
            assert abs(res) <= max(tol, 1e-7) * scale, (z, abs(res) / scale)
