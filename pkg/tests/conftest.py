"""Shared draw helpers: random equations satisfying scheme preconditions."""

import cmath
import math
import random

import pytest

from heun_gamma import ConfluentHeun, extra_singularity, scheme_from_id

ALL_SCHEME_IDS = [
    "sche-I-origin", "sche-I-extra", "dche-I-origin", "dche-I-extra",
    "bche-I-origin", "bche-I-extra", "bche-II-origin", "bche-II-extra",
    "tche-I-extra", "tche-IIq-extra", "tche-IIc-extra",
]


def unit_disc(rng, lo=0.0, hi=1.0):
    r = rng.uniform(lo, hi)
    th = rng.uniform(0.0, 2.0 * math.pi)
    return r * cmath.exp(1j * th)


def draw_equation(scheme_id, rng):
    """Unit-polydisc parameters meeting the scheme's preconditions.

    Magnitudes are kept off zero where a precondition needs it, and the
    extra singular point is kept clear of the equation's own singular
    points so the scheme's disk has usable size.
    """
    variant = scheme_id.split("-")[0].upper()
    extra = scheme_id.endswith("extra")
    for _ in range(200):
        g = unit_disc(rng, 0.15, 1.0)
        d = unit_disc(rng, 0.1, 1.0)
        e = unit_disc(rng, 0.35, 1.0)
        al = unit_disc(rng, 0.35, 1.0)
        q = unit_disc(rng, 0.3, 1.0)
        eq = ConfluentHeun(variant, g, d, e, al, q)
        if variant == "DCHE" and abs(g) < 0.3:
            continue
        z0 = q / al
        if extra or variant == "TCHE":
            if not (0.3 <= abs(z0) <= 2.5):
                continue
            if variant == "SCHE" and abs(z0 - 1.0) < 0.3:
                continue
        else:
            if variant == "SCHE" and (abs(z0) < 0.2 or abs(z0 - 1.0) < 0.2):
                continue
            if variant in ("DCHE", "BCHE") and abs(z0) < 0.2:
                continue
        return eq
    raise RuntimeError(f"could not draw parameters for {scheme_id}")


def scheme_and_equation(scheme_id, rng):
    eq = draw_equation(scheme_id, rng)
    return scheme_from_id(scheme_id), eq


@pytest.fixture
def rng():
    return random.Random(1234)
