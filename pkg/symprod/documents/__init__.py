"""Document and report schemas"""

from .schemas import (
    DecompositionOutput,
    FiniteSection,
    FunctionalDocument,
    FunctionalKind,
    IdealDocument,
    MomentEntry,
    MomentSection,
    PointEntry,
    RunReport,
    ScalarDocument,
    decode_scalar,
    inputs_digest,
    load_functional_document,
    load_ideal,
)

__all__ = [
    "ScalarDocument",
    "FunctionalKind",
    "FiniteSection",
    "MomentEntry",
    "MomentSection",
    "FunctionalDocument",
    "IdealDocument",
    "PointEntry",
    "DecompositionOutput",
    "RunReport",
    "decode_scalar",
    "inputs_digest",
    "load_functional_document",
    "load_ideal",
]
