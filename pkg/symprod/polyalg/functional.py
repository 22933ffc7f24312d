"""
Linear functionals on the two concrete commutative algebras

* ``FiniteFunctional`` lives on C(X) for a finite labelled set X; algebra
  elements are ``FiniteElement`` value vectors, multiplied pointwise.
* ``MomentFunctional`` lives on C[u1..um], stored as its complete table of
  values on monomials up to a degree bound D. Asking for anything beyond D
  is an error, never a silent truncation.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from symprod.polyalg.polynomial import (
    Monomial,
    Polynomial,
    monomial_degree,
    monomial_power,
    monomials_up_to,
    unit_monomial,
)
from symprod.polyalg.scalar import EXACT, Scalar, ScalarContext
from symprod.utils.errors import (
    DegreeOverflowError,
    DimensionMismatchError,
    LabelMismatchError,
    ValidationError,
)

logger = logging.getLogger(__name__)


class FiniteElement:
    """A function on a finite labelled set, as its value vector"""

    __slots__ = ("labels", "values", "context")

    def __init__(
        self,
        labels: Sequence[str],
        values: Sequence[Any],
        context: ScalarContext = EXACT,
    ):
        if len(labels) != len(values):
            raise LabelMismatchError(
                f"{len(values)} values given for {len(labels)} labels"
            )
        self.labels: Tuple[str, ...] = tuple(labels)
        self.values: Tuple[Scalar, ...] = tuple(context.coerce(v) for v in values)
        self.context = context

    @classmethod
    def one(cls, labels: Sequence[str], context: ScalarContext = EXACT) -> "FiniteElement":
        return cls(labels, [1] * len(labels), context)

    @classmethod
    def indicator(
        cls, labels: Sequence[str], label: str, context: ScalarContext = EXACT
    ) -> "FiniteElement":
        """e_r: 1 on ``label``, 0 elsewhere"""
        if label not in labels:
            raise LabelMismatchError(f"Unknown label {label!r}")
        return cls(labels, [1 if x == label else 0 for x in labels], context)

    def _check(self, other: "FiniteElement") -> None:
        if self.labels != other.labels:
            raise LabelMismatchError("Finite algebra elements over different label sets")

    def __add__(self, other: "FiniteElement") -> "FiniteElement":
        self._check(other)
        return FiniteElement(
            self.labels, [a + b for a, b in zip(self.values, other.values)], self.context
        )

    def __sub__(self, other: "FiniteElement") -> "FiniteElement":
        self._check(other)
        return FiniteElement(
            self.labels, [a - b for a, b in zip(self.values, other.values)], self.context
        )

    def __mul__(self, other: Any) -> "FiniteElement":
        if isinstance(other, FiniteElement):
            self._check(other)
            return FiniteElement(
                self.labels,
                [a * b for a, b in zip(self.values, other.values)],
                self.context,
            )
        scalar = self.context.coerce(other)
        return FiniteElement(self.labels, [a * scalar for a in self.values], self.context)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "FiniteElement":
        return FiniteElement(self.labels, [a**exponent for a in self.values], self.context)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteElement):
            return NotImplemented
        return self.labels == other.labels and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.labels, self.values))

    def key(self) -> tuple:
        return tuple(self.context.sort_key(v) for v in self.values)

    def is_idempotent(self) -> bool:
        return all(v * v == v for v in self.values)

    def degree(self) -> int:
        return 0

    def __repr__(self) -> str:
        shown = ", ".join(self.context.format(v) for v in self.values)
        return f"FiniteElement({shown})"


@dataclass(frozen=True)
class FiniteFunctional:
    """
    A linear functional on C(X), X = ``point_labels``

    It is exactly its value vector on the indicator basis, so f(1) is the
    sum of ``values``.
    """

    point_labels: Tuple[str, ...]
    values: Tuple[Scalar, ...]
    context: ScalarContext = EXACT

    def __post_init__(self) -> None:
        labels = tuple(str(x) for x in self.point_labels)
        if len(set(labels)) != len(labels):
            raise ValidationError(f"Duplicate point labels in {labels}")
        if not labels:
            raise ValidationError("A finite functional needs at least one point")
        if len(self.values) != len(labels):
            raise LabelMismatchError(
                f"{len(self.values)} values given for {len(labels)} labels"
            )
        object.__setattr__(self, "point_labels", labels)
        object.__setattr__(
            self, "values", tuple(self.context.coerce(v) for v in self.values)
        )

    @classmethod
    def evaluation(
        cls,
        labels: Sequence[str],
        multiset: Mapping[str, int],
        context: ScalarContext = EXACT,
    ) -> "FiniteFunctional":
        """Sum of point evaluations with the given multiplicities"""
        unknown = set(multiset) - set(labels)
        if unknown:
            raise LabelMismatchError(f"Unknown labels {sorted(unknown)}")
        return cls(tuple(labels), tuple(multiset.get(x, 0) for x in labels), context)

    def apply(self, a: FiniteElement) -> Scalar:
        if a.labels != self.point_labels:
            raise LabelMismatchError(
                f"Element labels {a.labels} do not match functional labels "
                f"{self.point_labels}"
            )
        total = self.context.zero
        for weight, value in zip(self.values, a.values):
            total = total + weight * self.context.coerce(value)
        return total

    def unit(self) -> FiniteElement:
        return FiniteElement.one(self.point_labels, self.context)

    @property
    def unit_value(self) -> Scalar:
        return self.apply(self.unit())

    def indicator(self, label: str) -> FiniteElement:
        return FiniteElement.indicator(self.point_labels, label, self.context)

    def element(self, values: Sequence[Any]) -> FiniteElement:
        return FiniteElement(self.point_labels, values, self.context)

    def check_product(self, args: Sequence[FiniteElement]) -> None:
        for a in args:
            if a.labels != self.point_labels:
                raise LabelMismatchError("Argument over a different label set")

    def with_context(self, context: ScalarContext) -> "FiniteFunctional":
        return FiniteFunctional(
            self.point_labels, tuple(context.coerce(v) for v in self.values), context
        )

    def __add__(self, other: "FiniteFunctional") -> "FiniteFunctional":
        if other.point_labels != self.point_labels:
            raise LabelMismatchError("Cannot add functionals on different sets")
        return FiniteFunctional(
            self.point_labels,
            tuple(a + b for a, b in zip(self.values, other.values)),
            self.context,
        )

    def __rmul__(self, scalar: Any) -> "FiniteFunctional":
        c = self.context.coerce(scalar)
        return FiniteFunctional(
            self.point_labels, tuple(c * v for v in self.values), self.context
        )


class MomentFunctional:
    """
    A linear functional on C[u1..um], truncated at total degree D

    The table must hold every monomial of degree <= D.
    """

    def __init__(
        self,
        num_vars: int,
        degree_bound: int,
        moments: Mapping[Monomial, Any],
        context: ScalarContext = EXACT,
    ):
        if num_vars < 1:
            raise ValidationError(f"Invalid number of variables: {num_vars}")
        if degree_bound < 0:
            raise ValidationError(f"Invalid degree bound: {degree_bound}")
        self.num_vars = num_vars
        self.degree_bound = degree_bound
        self.context = context

        table: Dict[Monomial, Scalar] = {}
        for monomial, value in moments.items():
            monomial = tuple(int(e) for e in monomial)
            if len(monomial) != num_vars:
                raise DimensionMismatchError(
                    f"Monomial {monomial} has {len(monomial)} exponents, "
                    f"expected {num_vars}"
                )
            if monomial_degree(monomial) > degree_bound:
                raise DegreeOverflowError(
                    f"Moment {monomial} exceeds degree bound {degree_bound}"
                )
            table[monomial] = context.coerce(value)

        missing = [m for m in monomials_up_to(num_vars, degree_bound) if m not in table]
        if missing:
            raise ValidationError(
                f"Moment table incomplete: {len(missing)} monomials missing, "
                f"first {missing[0]}",
                {"missing": [list(m) for m in missing[:10]]},
            )
        self.moments: Dict[Monomial, Scalar] = table

    def moment(self, monomial: Monomial) -> Scalar:
        monomial = tuple(monomial)
        if monomial_degree(monomial) > self.degree_bound:
            raise DegreeOverflowError(
                f"Moment of degree {monomial_degree(monomial)} requested, "
                f"table only goes to degree {self.degree_bound}"
            )
        return self.moments[monomial]

    def apply(self, p: Polynomial) -> Scalar:
        if p.num_vars != self.num_vars:
            raise DimensionMismatchError(
                f"Polynomial in {p.num_vars} variables, functional in {self.num_vars}"
            )
        if p.degree() > self.degree_bound:
            raise DegreeOverflowError(
                f"Polynomial of degree {p.degree()} exceeds degree bound "
                f"{self.degree_bound}"
            )
        total = self.context.zero
        for monomial, coeff in p.items():
            total = total + self.context.coerce(coeff) * self.moments[monomial]
        return total

    def unit(self) -> Polynomial:
        return Polynomial.one(self.num_vars, self.context)

    @property
    def unit_value(self) -> Scalar:
        return self.moments[unit_monomial(self.num_vars)]

    def variable(self, index: int) -> Polynomial:
        return Polynomial.variable(self.num_vars, index, self.context)

    def check_product(self, args: Sequence[Polynomial]) -> None:
        total = sum(max(a.degree(), 0) for a in args)
        if total > self.degree_bound:
            raise DegreeOverflowError(
                f"Product of arguments has degree {total}, table only goes to "
                f"degree {self.degree_bound}"
            )

    def with_context(self, context: ScalarContext) -> "MomentFunctional":
        return MomentFunctional(self.num_vars, self.degree_bound, self.moments, context)

    def __add__(self, other: "MomentFunctional") -> "MomentFunctional":
        if other.num_vars != self.num_vars:
            raise DimensionMismatchError("Cannot add functionals in different variables")
        bound = min(self.degree_bound, other.degree_bound)
        return MomentFunctional(
            self.num_vars,
            bound,
            {
                m: self.moments[m] + other.moments[m]
                for m in monomials_up_to(self.num_vars, bound)
            },
            self.context,
        )

    def __rmul__(self, scalar: Any) -> "MomentFunctional":
        c = self.context.coerce(scalar)
        return MomentFunctional(
            self.num_vars,
            self.degree_bound,
            {m: c * v for m, v in self.moments.items()},
            self.context,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MomentFunctional):
            return NotImplemented
        return (
            self.num_vars == other.num_vars
            and self.degree_bound == other.degree_bound
            and self.moments == other.moments
        )

    def __repr__(self) -> str:
        return (
            f"MomentFunctional(num_vars={self.num_vars}, "
            f"degree_bound={self.degree_bound})"
        )


Functional = Union[FiniteFunctional, MomentFunctional]
AlgebraElement = Union[FiniteElement, Polynomial]

Point = Tuple[Any, ...]


@dataclass(frozen=True)
class PointMultiset:
    """
    A point of Sym^n: distinct points with positive multiplicities

    ``num_vars`` is the ambient dimension m; ``None`` means the points are
    labels of a finite set.
    """

    num_vars: Optional[int]
    entries: Tuple[Tuple[Point, int], ...] = ()
    context: ScalarContext = field(default=EXACT, compare=False)

    def __post_init__(self) -> None:
        merged: Dict[Any, int] = {}
        order: List[Any] = []
        for point, multiplicity in self.entries:
            if isinstance(multiplicity, bool) or not isinstance(multiplicity, int):
                raise ValidationError(f"Multiplicity must be an integer: {multiplicity!r}")
            if multiplicity <= 0:
                raise ValidationError(f"Multiplicity must be positive: {multiplicity}")
            if self.num_vars is None:
                key: Any = point
            else:
                if len(point) != self.num_vars:
                    raise DimensionMismatchError(
                        f"Point {point} does not have {self.num_vars} coordinates"
                    )
                key = tuple(self.context.coerce(x) for x in point)
            if key not in merged:
                order.append(key)
                merged[key] = 0
            merged[key] += multiplicity
        ordered = sorted(order, key=self._sort_key)
        object.__setattr__(self, "entries", tuple((p, merged[p]) for p in ordered))

    def _sort_key(self, point: Any) -> tuple:
        if self.num_vars is None:
            return (str(point),)
        return tuple(self.context.sort_key(x) for x in point)

    @classmethod
    def from_points(
        cls, points: Iterable[Sequence[Any]], context: ScalarContext = EXACT
    ) -> "PointMultiset":
        """Build from a list of points, repeated points adding multiplicity"""
        pts = [tuple(p) for p in points]
        num_vars = len(pts[0]) if pts else 1
        return cls(num_vars, tuple((p, 1) for p in pts), context)

    @property
    def size(self) -> int:
        """n, the total multiplicity"""
        return sum(m for _, m in self.entries)

    @property
    def points(self) -> List[Point]:
        return [p for p, _ in self.entries]

    def multiplicity(self, point: Any) -> int:
        key = point if self.num_vars is None else tuple(self.context.coerce(x) for x in point)
        return dict(self.entries).get(key, 0)

    def to_json(self) -> List[Dict[str, Any]]:
        if self.num_vars is None:
            return [{"point": p, "multiplicity": m} for p, m in self.entries]
        return [
            {"point": [self.context.to_json(x) for x in p], "multiplicity": m}
            for p, m in self.entries
        ]

    def __repr__(self) -> str:
        shown = ", ".join(
            f"{p if self.num_vars is None else tuple(self.context.format(x) for x in p)}:{m}"
            for p, m in self.entries
        )
        return f"PointMultiset({{{shown}}})"


def evaluation_functional(
    points: PointMultiset, degree_bound: int, context: Optional[ScalarContext] = None
) -> MomentFunctional:
    """
    The moment table of sum_j m_j * ev_{x_j}

    moments[a] = sum_j m_j * x_j^a for every |a| <= degree_bound.
    """
    if points.num_vars is None:
        raise ValidationError("Labelled multisets have no moment table")
    if degree_bound < 0:
        raise ValidationError(f"Invalid degree bound: {degree_bound}")
    ctx = context or points.context
    one = ctx.one
    coords = [(tuple(ctx.coerce(x) for x in p), m) for p, m in points.entries]
    moments: Dict[Monomial, Scalar] = {}
    for monomial in monomials_up_to(points.num_vars, degree_bound):
        total = ctx.zero
        for point, multiplicity in coords:
            total = total + multiplicity * monomial_power(point, monomial, one)
        moments[monomial] = total
    return MomentFunctional(points.num_vars, degree_bound, moments, ctx)


def functional_apply(f: Functional, a: AlgebraElement) -> Scalar:
    """Linear extension of the functional's defining data"""
    return f.apply(a)  # type: ignore[arg-type]
