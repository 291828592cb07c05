"""Scalar special functions and polynomial machinery used by every module."""

from .poly import Polynomial, RationalFunction, polynomial_roots
from .quadrature import integrate_path, integrate_segment
from .special import (
    EULER_GAMMA,
    R_SWITCH,
    gamma,
    kummer_1f1,
    pochhammer,
    upper_gamma_cf,
    upper_gamma_series,
    upper_incomplete_gamma,
)

__all__ = [
    "EULER_GAMMA",
    "R_SWITCH",
    "Polynomial",
    "RationalFunction",
    "gamma",
    "integrate_path",
    "integrate_segment",
    "kummer_1f1",
    "pochhammer",
    "polynomial_roots",
    "upper_gamma_cf",
    "upper_gamma_series",
    "upper_incomplete_gamma",
]
