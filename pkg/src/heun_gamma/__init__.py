"""Incomplete-Gamma series solutions of the four confluent Heun equations.

The package constructs, evaluates and independently verifies series
solutions u(z) = C0 - sum c_n (...) Gamma(a_n; L(z)) built from Frobenius
expansions of the weighted derivative v = e^(L) u', covering all four
confluent equations, the degenerate reductions of their coefficient
recurrences, right-hand-side termination into exact finite sums, and the
catalogued hypergeometric special cases.
"""

__version__ = "0.1.0"

from . import errors
from .equations import (
    ClosedForm,
    ConfluentHeun,
    GeneralHeun,
    RationalOperator,
    WeightSpec,
    derive_v_equation,
    extra_singularity,
    indicial_exponents,
    special_closed_form,
)
from .expansion import (
    EvalResult,
    GammaSeries,
    assemble,
    choose_truncation,
    convergence_radius,
    determine_c0,
    evaluate,
)
from .oracle import SolutionSample, compare, integrate_reference, residual_power_series
from .recurrence import (
    CoefficientSequence,
    RecurrenceRelation,
    RecurrenceScheme,
    ReductionReport,
    SCHEME_IDS,
    admissible_exponents,
    build_recurrence,
    detect_reductions,
    generate_coefficients,
    scheme_from_id,
    two_term_closed_form,
)
from .termination import (
    QRoot,
    TerminationCandidate,
    coefficients_as_q_polynomials,
    find_terminating_q,
    rhs_alpha,
    verify_finite_sum,
)

__all__ = [
    "errors",
    "__version__",
    "ClosedForm",
    "ConfluentHeun",
    "GeneralHeun",
    "RationalOperator",
    "WeightSpec",
    "derive_v_equation",
    "extra_singularity",
    "indicial_exponents",
    "special_closed_form",
    "EvalResult",
    "GammaSeries",
    "assemble",
    "choose_truncation",
    "convergence_radius",
    "determine_c0",
    "evaluate",
    "SolutionSample",
    "compare",
    "integrate_reference",
    "residual_power_series",
    "CoefficientSequence",
    "RecurrenceRelation",
    "RecurrenceScheme",
    "ReductionReport",
    "SCHEME_IDS",
    "admissible_exponents",
    "build_recurrence",
    "detect_reductions",
    "generate_coefficients",
    "scheme_from_id",
    "two_term_closed_form",
    "QRoot",
    "TerminationCandidate",
    "coefficients_as_q_polynomials",
    "find_terminating_q",
    "rhs_alpha",
    "verify_finite_sum",
]
