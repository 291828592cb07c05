"""Coefficient recurrences for the catalogued incomplete-Gamma expansions.

Eleven (variant, center, weight-type) combinations are supported. For each
one the k-term relation

    lead_n c_n + next_(n-1) c_(n-1) + ... + last_(n-k+1) c_(n-k+1) = 0

is stored as hand-coded coefficient functions, each a polynomial in
m = n + mu whose coefficients are built from the equation parameters with
plain arithmetic (so a Polynomial may be substituted for q during the
termination search). Coefficients of the series are generated with the
convention c_n = 0 for n < 0; identically vanishing leading functions
shift the relation, and free indices are normalized first-one-then-zero,
which reproduces the degenerate two-term normalizations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .equations import ConfluentHeun, WeightSpec, extra_singularity
from .errors import DegenerateIndexError, PreconditionError
from .numerics import Polynomial, pochhammer

__all__ = [
    "RecurrenceScheme",
    "RecurrenceRelation",
    "CoefficientSequence",
    "ReductionReport",
    "SCHEME_IDS",
    "scheme_from_id",
    "build_recurrence",
    "admissible_exponents",
    "generate_coefficients",
    "detect_reductions",
    "two_term_closed_form",
]

_CATALOG = {
    ("SCHE", "origin", "I"), ("SCHE", "extra", "I"),
    ("DCHE", "origin", "I"), ("DCHE", "extra", "I"),
    ("BCHE", "origin", "I"), ("BCHE", "extra", "I"),
    ("BCHE", "origin", "II"), ("BCHE", "extra", "II"),
    ("TCHE", "extra", "I"), ("TCHE", "extra", "IIq"), ("TCHE", "extra", "IIc"),
}

_FREE_RATE = {("BCHE", "I"), ("TCHE", "I"), ("TCHE", "IIq")}

_POWER = {"I": 1, "II": 2, "IIq": 2, "IIc": 3}


@dataclass(frozen=True)
class RecurrenceScheme:
    """Identifies one catalogued expansion construction.

    center is "origin" (z1 = 0) or "extra" (z1 = q/alpha); kind is "I"
    (linear weight), "II"/"IIq" (quadratic) or "IIc" (cubic). rate holds
    the free weight constant for the schemes that admit one (BCHE type I,
    TCHE type I, TCHE quadratic type II); None picks the default.
    """

    variant: str
    center: str
    kind: str
    rate: complex | None = None

    def __post_init__(self):
        if (self.variant, self.center, self.kind) not in _CATALOG:
            raise PreconditionError(
                f"no catalogued scheme {self.variant}-{self.kind}/{self.center}")
        if self.rate is not None:
            object.__setattr__(self, "rate", complex(self.rate))
            if self.rate == 0 and self.has_free_rate:
                raise PreconditionError("weight rate must satisfy lambda != 0")

    @property
    def id(self):
        flavor = {"SCHE": "sche", "DCHE": "dche", "BCHE": "bche", "TCHE": "tche"}
        where = {"origin": "origin", "extra": "extra"}
        return f"{flavor[self.variant]}-{self.kind}-{where[self.center]}"

    @property
    def weight_power(self):
        return _POWER[self.kind]

    @property
    def has_free_rate(self):
        return (self.variant, self.kind) in _FREE_RATE

    def center_value(self, eq):
        if self.center == "origin":
            return 0j
        return extra_singularity(eq)

    def resolve_rate(self, eq):
        """The scale s in the weight exponent s (z - z1)^p / p."""
        if self.has_free_rate:
            if self.rate is not None:
                return self.rate
            if self.variant == "BCHE":
                default = eq.delta
            elif self.kind == "I":
                default = eq.gamma
            else:
                default = eq.delta + 2.0 * extra_singularity(eq) * eq.epsilon
            return default if default != 0 else 1.0 + 0j
        return eq.epsilon

    def weight_spec(self, eq):
        return WeightSpec.monomial(self.center_value(eq), self.resolve_rate(eq),
                                   self.weight_power)

    def validate(self, eq):
        """Raise PreconditionError naming the violated condition."""
        if eq.variant != self.variant:
            raise PreconditionError(
                f"scheme {self.id} does not apply to a {eq.variant} equation")
        if not self.has_free_rate and eq.epsilon == 0:
            raise PreconditionError("ε ≠ 0")
        if self.center == "extra" and eq.alpha == 0:
            raise PreconditionError("α ≠ 0")
        if self.variant == "DCHE" and eq.gamma == 0:
            raise PreconditionError("γ ≠ 0")
        if self.variant == "BCHE" and self.kind == "II" and eq.epsilon == 0:
            raise PreconditionError("ε ≠ 0")
        if self.has_free_rate and self.resolve_rate(eq) == 0:
            raise PreconditionError("λ ≠ 0")


SCHEME_IDS = {
    "sche-I-origin": ("SCHE", "origin", "I"),
    "sche-I-extra": ("SCHE", "extra", "I"),
    "dche-I-origin": ("DCHE", "origin", "I"),
    "dche-I-extra": ("DCHE", "extra", "I"),
    "bche-I-origin": ("BCHE", "origin", "I"),
    "bche-I-extra": ("BCHE", "extra", "I"),
    "bche-II-origin": ("BCHE", "origin", "II"),
    "bche-II-extra": ("BCHE", "extra", "II"),
    "tche-I-extra": ("TCHE", "extra", "I"),
    "tche-IIq-extra": ("TCHE", "extra", "IIq"),
    "tche-IIc-extra": ("TCHE", "extra", "IIc"),
}


def scheme_from_id(scheme_id, rate=None):
    try:
        variant, center, kind = SCHEME_IDS[scheme_id]
    except KeyError:
        raise PreconditionError(f"unknown scheme id {scheme_id!r}") from None
    return RecurrenceScheme(variant, center, kind, rate)


def _tables(scheme, g, d, e, al, q, lam, z0):
    """Slot tables: leading-first list of (name, m-polynomial coefficients)."""
    key = (scheme.variant, scheme.center, scheme.kind)
    if key == ("SCHE", "origin", "I"):
        return [
            ("S", [0.0, q * g, q]),
            ("R", [q * q + al * g - q * (g + d + g * e),
                   al * (1.0 - g) - q * (1.0 + g + d + e), -(q + al)]),
            ("Q", [-2.0 * q * al + (q + al) * g * e + q * d * e,
                   al * (g + d) + (q + al) * e, al]),
            ("P", [al * (al - e * (g + d)), -al * e]),
        ]
    if key == ("SCHE", "extra", "I"):
        zz = z0 * (z0 - 1.0)
        return [
            ("S", [0.0, -2.0 * zz, zz]),
            ("R", [g - z0 * (g + d),
                   1.0 - 2.0 * z0 - g + z0 * (g + d) - zz * e, 2.0 * z0 - 1.0]),
            ("Q", [(g - z0 * (g + d)) * e, g + d + (1.0 - 2.0 * z0) * e, 1.0]),
            ("P", [al - e * (g + d), -e]),
        ]
    if key == ("DCHE", "origin", "I"):
        return [
            ("S", [0.0, -q * g]),
            ("R", [q * (q - d + g * e) - al * g, al * g - q - q * d, -q]),
            ("Q", [e * (q * d - al * g) - 2.0 * q * al, al * d + q * e, al]),
            ("P", [al * (al - e * d), -al * e]),
        ]
    if key == ("DCHE", "extra", "I"):
        return [
            ("S", [0.0, -2.0 * z0 * z0, z0 * z0]),
            ("R", [-(g + z0 * d), g + z0 * (d - 2.0) - z0 * z0 * e, 2.0 * z0]),
            ("Q", [-(g + z0 * d) * e, d - 2.0 * z0 * e, 1.0]),
            ("P", [al - e * d, -e]),
        ]
    if key == ("BCHE", "origin", "I"):
        return [
            ("T", [0.0, -q * g, -q]),
            ("S", [q * q - al * g - q * (d - lam - g * lam),
                   al * g - al + 2.0 * q * lam - q * d, al]),
            ("R", [-2.0 * q * (al + e) + lam * (q * d - al * g - q * lam),
                   al * d - q * e - 2.0 * al * lam]),
            ("Q", [al * al + q * e * lam + al * lam * (lam - d) + al * e, al * e]),
            ("P", [-al * lam * e]),
        ]
    if key == ("BCHE", "extra", "I"):
        kap = g + d * z0 + e * z0 * z0
        return [
            ("T", [0.0, -2.0 * z0, z0]),
            ("S", [lam * z0 - kap, g - 1.0 + z0 * (d + z0 * e - 2.0 * lam), 1.0]),
            ("R", [lam * lam * z0 - lam * kap, d + 2.0 * z0 * e - 2.0 * lam]),
            ("Q", [al + e - lam * (d + 2.0 * z0 * e - lam), e]),
            ("P", [-lam * e]),
        ]
    if key == ("BCHE", "origin", "II"):
        return [
            ("T", [0.0, -q * g, -q]),
            ("S", [q * q - al * g - q * d, al * g - al - q * d, al]),
            ("R", [-2.0 * q * al + q * g * e, al * d + q * e]),
            ("Q", [al * al + q * d * e - al * e * g, -al * e]),
            ("P", [-al * d * e]),
        ]
    if key == ("BCHE", "extra", "II"):
        kap = g + d * z0 + e * z0 * z0
        return [
            ("T", [0.0, -2.0 * z0, z0]),
            ("S", [-kap, kap - 1.0, 1.0]),
            ("R", [0.0, d]),
            ("Q", [al - e * kap, -e]),
            ("P", [-e * (d + e * z0)]),
        ]
    if key == ("TCHE", "extra", "I"):
        kap = g + z0 * (d + e * z0)
        return [
            ("T", [0.0, -2.0, 1.0]),
            ("S", [lam - kap, kap - 2.0 * lam]),
            ("R", [(lam - kap) * lam, d + 2.0 * e * z0]),
            ("Q", [al + e - (d + 2.0 * e * z0) * lam, e]),
            ("P", [-e * lam]),
        ]
    if key == ("TCHE", "extra", "IIq"):
        kap = g + z0 * (d + e * z0)
        return [
            ("W", [0.0, -2.0, 1.0]),
            ("T", [-kap, kap]),
            ("S", [0.0, d + 2.0 * e * z0 - 2.0 * lam]),
            ("R", [al + e - kap * lam, e]),
            ("Q", [-(d + 2.0 * e * z0 - lam) * lam]),
            ("P", [-e * lam]),
        ]
    # TCHE IIc
    kap = g + z0 * (d + e * z0)
    return [
        ("W", [0.0, -2.0, 1.0]),
        ("T", [-kap, kap]),
        ("S", [0.0, d + 2.0 * e * z0]),
        ("R", [al, -e]),
        ("Q", [-e * kap]),
        ("P", [-e * (d + 2.0 * e * z0)]),
    ]


def _near(x, y, scale):
    return abs(x - y) <= 1e-12 * max(1.0, scale)


def _exponent_table(eq, scheme):
    """Admissible exponents (descending real part) and excluded branches."""
    g, d = eq.gamma, eq.delta
    scale = max(abs(eq.alpha), abs(eq.q), 1.0)
    key = (scheme.variant, scheme.center, scheme.kind)
    excluded = ()
    if key in {("SCHE", "origin", "I"), ("BCHE", "origin", "I")}:
        exps = [0j, -g]
    elif key == ("SCHE", "extra", "I"):
        z0 = extra_singularity(eq)
        if _near(z0, 0.0, scale):
            exps = [1 + 0j, -g]
        elif _near(z0, 1.0, scale):
            exps = [1 + 0j, -d]
        else:
            exps = [2 + 0j]
            excluded = ((0j, "logarithmic branch"),)
    elif key == ("DCHE", "origin", "I"):
        exps = [0j]
    elif key == ("DCHE", "extra", "I"):
        z0 = extra_singularity(eq)
        if _near(z0, 0.0, scale):
            exps = [1 + 0j]
        else:
            exps = [2 + 0j]
            excluded = ((0j, "logarithmic branch"),)
    elif key == ("BCHE", "origin", "II"):
        if _near(eq.q, 0.0, scale) and _near(d, 0.0, scale):
            exps = [0j, -1.0 - g]
        else:
            exps = [0j, -g]
    elif key in {("BCHE", "extra", "I"), ("BCHE", "extra", "II"),
                 ("TCHE", "extra", "IIc")}:
        exps = [2 + 0j, 0j]
    else:  # TCHE I and IIq: the greater exponent is the consistent one
        exps = [2 + 0j]
        excluded = ((0j, "logarithmic branch"),)
    exps = sorted(set(exps), key=lambda m: (-m.real, -m.imag))
    return tuple(exps), excluded


@dataclass(frozen=True)
class RecurrenceRelation:
    """k-term relation as leading-first coefficient functions of m = n + mu."""

    scheme: RecurrenceScheme
    names: tuple
    tables: tuple
    exponents: tuple
    excluded: tuple = ()

    @property
    def k(self):
        return len(self.names)

    def coeff(self, j, n, mu):
        """Coefficient multiplying c_(n) inside slot j of the relation."""
        m = n + mu
        acc = 0j
        for ck in reversed(self.tables[j]):
            acc = acc * m + ck
        return acc

    def slot_scale(self):
        out = 0.0
        for tab in self.tables:
            for ck in tab:
                mag = ck.scale() if isinstance(ck, Polynomial) else abs(ck)
                out = max(out, mag)
        return out

    def slot_is_zero(self, j, tol=1e-13):
        scale = self.slot_scale()
        if scale == 0.0:
            return True
        for ck in self.tables[j]:
            mag = ck.scale() if isinstance(ck, Polynomial) else abs(ck)
            if mag > tol * scale:
                return False
        return True

    def leading_shift(self, tol=1e-13):
        """Slots identically zero at the front of the relation."""
        for j in range(self.k):
            if not self.slot_is_zero(j, tol):
                return j
        raise PreconditionError("all recurrence coefficients vanish")


def build_recurrence(eq, scheme, q_value=None, rate_value=None):
    """The scheme's relation with coefficients exactly as catalogued.

    q_value and rate_value may replace the equation's q and the scheme's
    weight constant with arbitrary number-like values (e.g. Polynomial in
    q for the termination search).
    """
    scheme.validate(eq)
    g, d, e, al = eq.gamma, eq.delta, eq.epsilon, eq.alpha
    q = eq.q if q_value is None else q_value
    lam = scheme.resolve_rate(eq) if rate_value is None else rate_value
    z0 = None
    if scheme.center == "extra" or (scheme.variant == "TCHE"):
        z0 = q / al if abs(al) > 0 else None
        if scheme.center == "extra" and z0 is None:
            raise PreconditionError("α ≠ 0")
    rows = _tables(scheme, g, d, e, al, q, lam, z0)
    exps, excluded = _exponent_table(eq, scheme)
    return RecurrenceRelation(
        scheme=scheme,
        names=tuple(name for name, _ in rows),
        tables=tuple(tuple(coeffs) for _, coeffs in rows),
        exponents=exps,
        excluded=excluded,
    )


def admissible_exponents(eq, scheme):
    """Exponents mu admitting a Frobenius-style series, descending Re."""
    return list(build_recurrence(eq, scheme).exponents)


@dataclass(frozen=True)
class CoefficientSequence:
    """Exponent and coefficients c_0..c_N of the series for v."""

    mu: complex
    coefficients: tuple
    scheme: RecurrenceScheme | None = None
    log2_scale: int = 0

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, n):
        return self.coefficients[n]

    @property
    def order(self):
        return len(self.coefficients) - 1


def generate_coefficients(rel, mu, n_terms):
    """Run the relation forward: c_0..c_N with c_n = 0 for n < 0.

    At each index the leading slot either determines c_n, or (when it
    vanishes) leaves c_n free if the remaining terms balance: the first
    free index is normalized to 1 and later ones to 0, reproducing both
    the usual c_0 = 1 normalization and the degenerate two-term ones.
    Raises DegenerateIndexError at the first inconsistent index.
    """
    mu = complex(mu)
    if n_terms < 0:
        raise PreconditionError("series length must be non-negative")
    sigma = rel.leading_shift()
    k = rel.k
    scale = rel.slot_scale()
    coeffs = []
    log2_scale = 0
    seen_free = False
    for m in range(n_terms + 1):
        rhs = 0j
        rhs_scale = 0.0
        for j in range(sigma + 1, k):
            idx = m + sigma - j
            if idx < 0:
                continue
            w = rel.coeff(j, idx, mu)
            rhs -= w * coeffs[idx]
            rhs_scale += abs(w) * abs(coeffs[idx])
        lead = rel.coeff(sigma, m, mu)
        lead_scale = scale * max(1.0, abs(m + mu)) ** (len(rel.tables[sigma]) - 1)
        if abs(lead) > 1e-12 * lead_scale:
            coeffs.append(rhs / lead)
        elif abs(rhs) <= 1e-12 * (rhs_scale + scale):
            coeffs.append(0j if seen_free else 1.0 + 0j)
            seen_free = True
        else:
            raise DegenerateIndexError(
                m, f"leading coefficient vanishes at n={m} with unbalanced terms")
        if abs(coeffs[-1]) > 1e150:
            shrink = 2.0 ** -512
            coeffs = [c * shrink for c in coeffs]
            log2_scale += 512
    if not seen_free:
        raise PreconditionError(
            f"exponent mu={mu} admits only the zero series for this scheme")
    return CoefficientSequence(mu=mu, coefficients=tuple(coeffs),
                               scheme=rel.scheme, log2_scale=log2_scale)


@dataclass(frozen=True)
class ReductionReport:
    """Which coefficient functions vanish and what relation remains."""

    scheme_id: str
    names: tuple
    vanishing: tuple
    effective_terms: int
    successive: bool
    rate_choices: dict = field(default_factory=dict)


def detect_reductions(eq, scheme):
    """Report identically vanishing coefficient functions.

    For the free-rate schemes the report also lists, per coefficient
    function, the lambda values that would force it to vanish identically
    (zero excluded: the weight constant must stay nonzero).
    """
    rel = build_recurrence(eq, scheme)
    vanishing = tuple(rel.names[j] for j in range(rel.k) if rel.slot_is_zero(j))
    surviving = [j for j in range(rel.k) if rel.names[j] not in vanishing]
    successive = bool(surviving) and (surviving[-1] - surviving[0] + 1 == len(surviving))

    rate_choices = {}
    if scheme.has_free_rate:
        sym = build_recurrence(eq, scheme, rate_value=Polynomial([0.0, 1.0]))
        scale = sym.slot_scale()
        for j, name in enumerate(sym.names):
            entry_polys = [c if isinstance(c, Polynomial) else Polynomial([c])
                           for c in sym.tables[j]]
            entry_polys = [p.trimmed(1e-13) for p in entry_polys]
            nonzero = [p for p in entry_polys
                       if not p.is_zero and p.scale() > 1e-13 * max(scale, 1.0)]
            if not nonzero:
                continue
            probe = min(nonzero, key=lambda p: p.degree)
            if probe.degree < 1:
                continue
            roots = []
            for r in probe.roots():
                if abs(r) <= 1e-12:
                    continue
                ok = all(abs(p(r)) <= 1e-10 * max(p.scale(), 1.0) * max(1.0, abs(r)) ** max(p.degree, 1)
                         for p in nonzero)
                if ok and not any(abs(r - s) < 1e-9 * max(1.0, abs(s)) for s in roots):
                    roots.append(r)
            if roots:
                rate_choices[name] = tuple(sorted(roots, key=lambda r: (r.real, r.imag)))

    return ReductionReport(
        scheme_id=scheme.id,
        names=rel.names,
        vanishing=vanishing,
        effective_terms=rel.k - len(vanishing),
        successive=successive,
        rate_choices=rate_choices,
    )


def two_term_closed_form(case, eq, n, mu=0.0):
    """Explicit coefficients of the two catalogued two-term reductions.

    case "bche-step2": BCHE with q = delta = 0 under the quadratic weight;
    stride-2 relation, nonzero only at odd n (the series is normalized
    c_0 = 0, c_1 = 1). The (eps/2)-dependence is the k-th power.
    case "tche-step3": TCHE with gamma = eps q^2/alpha^2,
    delta = -2 eps q/alpha; stride-3 relation with c_0 = 1, c_1 = c_2 = 0.
    """
    if n < 0:
        raise PreconditionError("coefficient index must be non-negative")
    mu = complex(mu)
    g, d, e, al, q = eq.gamma, eq.delta, eq.epsilon, eq.alpha, eq.q
    scale = max(abs(g), abs(d), abs(e), abs(al), abs(q), 1.0)
    if case == "bche-step2":
        if eq.variant != "BCHE":
            raise PreconditionError("bche-step2 requires a BCHE equation")
        if not (_near(q, 0.0, scale) and _near(d, 0.0, scale)):
            raise PreconditionError("bche-step2 requires q = 0 and δ = 0")
        if al == 0 or e == 0:
            raise PreconditionError("bche-step2 requires α ≠ 0 and ε ≠ 0")
        if n % 2 == 0:
            return 0j
        k = (n - 1) // 2
        num = (e / 2.0) ** k * pochhammer((1.0 + g + mu - al / e) / 2.0, k)
        den = pochhammer(1.0 + mu / 2.0, k) * pochhammer(1.0 + (1.0 + g + mu) / 2.0, k)
        return num / den
    if case == "tche-step3":
        if eq.variant != "TCHE":
            raise PreconditionError("tche-step3 requires a TCHE equation")
        if al == 0 or e == 0:
            raise PreconditionError("tche-step3 requires α ≠ 0 and ε ≠ 0")
        z0 = q / al
        if not (_near(g, e * z0 * z0, scale) and _near(d, -2.0 * e * z0, scale)):
            raise PreconditionError(
                "tche-step3 requires γ = εq²/α² and δ = -2εq/α")
        if mu != 0:
            raise PreconditionError("tche-step3 is catalogued for μ = 0")
        if n % 3 != 0:
            return 0j
        k = n // 3
        num = (e / 3.0) ** k * pochhammer(-al / (3.0 * e), k)
        den = pochhammer(1.0 / 3.0, k) * pochhammer(1.0, k)
        return num / den
    raise PreconditionError(f"unknown two-term case {case!r}")
