"""
Scalars, polynomials and the functionals Frobenius transformations act on
"""

from .functional import (
    AlgebraElement,
    FiniteElement,
    FiniteFunctional,
    Functional,
    MomentFunctional,
    PointMultiset,
    evaluation_functional,
    functional_apply,
)
from .parser import parse_polynomial
from .polynomial import Monomial, Polynomial, monomials_up_to, poly_eval
from .scalar import EXACT, GaussianRational, Scalar, ScalarContext, ScalarMode
from .series import FormalPowerSeries

__all__ = [
    "AlgebraElement",
    "EXACT",
    "FiniteElement",
    "FiniteFunctional",
    "FormalPowerSeries",
    "Functional",
    "GaussianRational",
    "Monomial",
    "MomentFunctional",
    "PointMultiset",
    "Polynomial",
    "Scalar",
    "ScalarContext",
    "ScalarMode",
    "evaluation_functional",
    "functional_apply",
    "monomials_up_to",
    "parse_polynomial",
    "poly_eval",
]
