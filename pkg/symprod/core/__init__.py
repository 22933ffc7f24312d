"""Core package initialization"""

from .frobenius import (
    CertificateMethod,
    DegreeSearch,
    FrobeniusCertificate,
    certify_frobenius,
    degree_search,
    egf_coefficients,
    frobenius_degree,
    idempotent_value,
    phi_diagonal_series,
    phi_inductive,
    phi_one_padding,
    phi_partition,
    phi_permutation,
    symmetric_tensor_apply,
    symmetric_tensor_product,
    symmetrized_padding_value,
)
from .partitions import (
    FormalPartitionSum,
    PairingIdentityReport,
    PartialPairing,
    SetPartition,
    chi,
    coefficient_polynomial,
    coefficient_polynomial_at_one,
    enumerate_partial_pairings,
    enumerate_set_partitions,
    pairing_coefficient,
    pairing_pullback_chi,
    partition_sign,
    partition_weight,
    predicted_coefficient,
    verify_pairing_identity,
)
from .reconstruct import (
    ReconstructionReport,
    SeparatingForm,
    decompose,
    decompose_finite,
    decompose_polynomial,
    decompose_quotient,
    power_sums_to_elementary,
    select_separating_form,
)
from .roots import roots_with_multiplicity

__all__ = [
    "SetPartition",
    "FormalPartitionSum",
    "PartialPairing",
    "PairingIdentityReport",
    "enumerate_set_partitions",
    "partition_sign",
    "partition_weight",
    "chi",
    "enumerate_partial_pairings",
    "pairing_pullback_chi",
    "verify_pairing_identity",
    "pairing_coefficient",
    "coefficient_polynomial",
    "coefficient_polynomial_at_one",
    "predicted_coefficient",
    "CertificateMethod",
    "FrobeniusCertificate",
    "DegreeSearch",
    "phi_permutation",
    "phi_partition",
    "phi_inductive",
    "phi_diagonal_series",
    "egf_coefficients",
    "certify_frobenius",
    "degree_search",
    "frobenius_degree",
    "symmetric_tensor_apply",
    "symmetric_tensor_product",
    "symmetrized_padding_value",
    "idempotent_value",
    "phi_one_padding",
    "SeparatingForm",
    "ReconstructionReport",
    "decompose",
    "decompose_finite",
    "decompose_polynomial",
    "decompose_quotient",
    "power_sums_to_elementary",
    "select_separating_form",
    "roots_with_multiplicity",
]
