"""
symprod: Frobenius n-homomorphisms of commutative algebras

This package computes the Frobenius transformations Phi_m(f) of a linear
functional by three independent definitions, certifies whether f is a
Frobenius n-homomorphism, and decomposes such functionals into multisets
of point evaluations. It ships a command-line interface (``symprod``)
with JSON input and output.
"""

from symprod.core.frobenius import (
    certify_frobenius,
    frobenius_degree,
    phi_inductive,
    phi_partition,
    phi_permutation,
)
from symprod.core.partitions import SetPartition, chi, verify_pairing_identity
from symprod.core.reconstruct import (
    ReconstructionReport,
    decompose,
    decompose_finite,
    decompose_polynomial,
    decompose_quotient,
)
from symprod.polyalg import (
    FiniteFunctional,
    MomentFunctional,
    PointMultiset,
    Polynomial,
    ScalarContext,
    evaluation_functional,
)

try:
    from symprod._version import __version__
except ImportError:  # pragma: no cover
    __version__ = "0.1.0"

__author__ = "symprod developers"

__all__ = [
    "SetPartition",
    "chi",
    "verify_pairing_identity",
    "phi_permutation",
    "phi_partition",
    "phi_inductive",
    "certify_frobenius",
    "frobenius_degree",
    "ReconstructionReport",
    "decompose",
    "decompose_finite",
    "decompose_polynomial",
    "decompose_quotient",
    "FiniteFunctional",
    "MomentFunctional",
    "PointMultiset",
    "Polynomial",
    "ScalarContext",
    "evaluation_functional",
]
