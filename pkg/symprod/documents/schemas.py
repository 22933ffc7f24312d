"""
JSON documents read and written by the CLI
"""

import hashlib
import json
from enum import Enum
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional, Union

import pydantic
from pydantic import (
    AllowInfNan,
    BaseModel,
    ConfigDict,
    Field,
    Strict,
    StrictInt,
    StrictStr,
)

from symprod.polyalg.functional import FiniteFunctional, Functional, MomentFunctional
from symprod.polyalg.parser import parse_polynomial
from symprod.polyalg.polynomial import Polynomial
from symprod.polyalg.scalar import Scalar, ScalarContext, ScalarMode
from symprod.utils.errors import ParseError, ValidationError

FiniteFloat = Annotated[float, Strict(), AllowInfNan(False)]
RealValue = Union[StrictInt, StrictStr, FiniteFloat]


# Scalars
class ScalarDocument(BaseModel):
    """``{"re": "p/q", "im": "p/q"}`` exactly, or floats with a precision"""

    re: RealValue
    im: RealValue = 0
    precision: Optional[int] = Field(None, ge=53)

    model_config = ConfigDict(extra="forbid")


ScalarValue = Union[ScalarDocument, RealValue]


def decode_scalar(value: ScalarValue, context: ScalarContext) -> Scalar:
    if isinstance(value, ScalarDocument):
        return context.from_json(value.model_dump(exclude_none=True))
    return context.from_json(value)


# Functionals
class FunctionalKind(str, Enum):
    """Which algebra a functional document lives on"""

    FINITE = "finite"
    MOMENTS = "moments"


class FiniteSection(BaseModel):
    labels: List[StrictStr] = Field(..., min_length=1)
    values: List[ScalarValue]

    @pydantic.model_validator(mode="after")
    def _same_length(self) -> "FiniteSection":
        if len(self.labels) != len(self.values):
            raise ValueError(
                f"{len(self.values)} values given for {len(self.labels)} labels"
            )
        return self


class MomentEntry(BaseModel):
    exponents: List[int] = Field(..., min_length=1)
    value: ScalarValue

    @pydantic.field_validator("exponents")
    @classmethod
    def _nonnegative(cls, v: List[int]) -> List[int]:
        if any(e < 0 for e in v):
            raise ValueError(f"negative exponent in {v}")
        return v


class MomentSection(BaseModel):
    num_vars: int = Field(..., ge=1)
    degree_bound: int = Field(..., ge=0)
    entries: List[MomentEntry]


class FunctionalDocument(BaseModel):
    """A finite value table or a truncated moment table"""

    kind: FunctionalKind
    finite: Optional[FiniteSection] = None
    moments: Optional[MomentSection] = None

    model_config = ConfigDict(use_enum_values=False)

    @pydantic.model_validator(mode="after")
    def _one_section(self) -> "FunctionalDocument":
        if self.kind == FunctionalKind.FINITE:
            if self.finite is None or self.moments is not None:
                raise ValueError("kind 'finite' needs exactly a 'finite' section")
        elif self.moments is None or self.finite is not None:
            raise ValueError("kind 'moments' needs exactly a 'moments' section")
        return self

    def to_functional(self, context: ScalarContext) -> Functional:
        if self.finite is not None:
            return FiniteFunctional(
                tuple(self.finite.labels),
                tuple(decode_scalar(v, context) for v in self.finite.values),
                context,
            )
        section = self.moments
        assert section is not None
        table: Dict[tuple, Scalar] = {}
        for entry in section.entries:
            key = tuple(entry.exponents)
            if key in table:
                raise ValidationError(f"Duplicate moment entry {list(key)}")
            table[key] = decode_scalar(entry.value, context)
        return MomentFunctional(section.num_vars, section.degree_bound, table, context)

    @classmethod
    def from_functional(cls, f: Functional) -> "FunctionalDocument":
        ctx = f.context
        if isinstance(f, FiniteFunctional):
            return cls(
                kind=FunctionalKind.FINITE,
                finite=FiniteSection(
                    labels=list(f.point_labels),
                    values=[_scalar_document(v, ctx) for v in f.values],
                ),
            )
        entries = [
            MomentEntry(exponents=list(m), value=_scalar_document(v, ctx))
            for m, v in sorted(f.moments.items(), key=lambda item: (sum(item[0]), item[0]))
        ]
        return cls(
            kind=FunctionalKind.MOMENTS,
            moments=MomentSection(
                num_vars=f.num_vars, degree_bound=f.degree_bound, entries=entries
            ),
        )


def _scalar_document(value: Scalar, context: ScalarContext) -> ScalarDocument:
    return ScalarDocument(**context.to_json(value))


# Ideals
class IdealDocument(BaseModel):
    """Generators of an ideal, as polynomial strings in u1..um"""

    num_vars: int = Field(..., ge=1)
    generators: List[StrictStr] = Field(default_factory=list)

    def to_polynomials(self, context: ScalarContext) -> List[Polynomial]:
        return [parse_polynomial(g, self.num_vars, context) for g in self.generators]


# Reports
class PointEntry(BaseModel):
    point: Union[StrictStr, List[Dict[str, Any]]]
    multiplicity: int = Field(..., ge=1)


class DecompositionOutput(BaseModel):
    points: List[PointEntry]
    size: int = Field(..., ge=0)
    residual: Union[StrictStr, float]
    form: Optional[Dict[str, Any]] = None
    retries: int = Field(0, ge=0)
    exact: bool = True
    quotient_weights: Optional[List[List[Optional[Dict[str, Any]]]]] = None


class RunReport(BaseModel):
    """What a CLI command prints on success"""

    command: str
    inputs_digest: str
    outputs: Dict[str, Any]
    scalar_mode: ScalarMode
    tolerances: Dict[str, float]
    timing: Optional[Dict[str, float]] = None

    def to_json(self, indent: Optional[int] = None) -> str:
        payload = self.model_dump(mode="json", exclude_none=True)
        return json.dumps(payload, indent=indent, sort_keys=True)


def inputs_digest(payload: Any) -> str:
    """sha256 of the canonical JSON form of the command inputs"""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# Loading
def _non_finite(path: Union[str, Path]) -> Any:
    def reject(name: str) -> Any:
        raise ValidationError(f"Non-finite number {name} in {path}")

    return reject


def _read_json(path: Union[str, Path]) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ValidationError(f"Cannot read {path}: {e}") from e
    try:
        return json.loads(text, parse_constant=_non_finite(path))
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON in {path}: {e.msg}", text, e.pos) from e


def _validate(model: Any, data: Any, source: str) -> Any:
    try:
        return model.model_validate(data)
    except pydantic.ValidationError as e:
        errors = [
            {"loc": [str(p) for p in err["loc"]], "msg": err["msg"]} for err in e.errors()
        ]
        raise ValidationError(
            f"Invalid {model.__name__} in {source}: {errors[0]['msg']}",
            {"errors": errors},
        ) from e


def load_functional_document(path: Union[str, Path]) -> FunctionalDocument:
    return _validate(FunctionalDocument, _read_json(path), str(path))


def load_ideal(path: Union[str, Path], context: ScalarContext) -> List[Polynomial]:
    return _validate(IdealDocument, _read_json(path), str(path)).to_polynomials(context)
