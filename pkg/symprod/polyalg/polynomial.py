"""
Sparse multivariate polynomials over a ScalarContext

A monomial is a tuple of nonnegative exponents, one per variable; the
all-zero tuple is the unit monomial. Arithmetic is delegated to a sympy
``PolyRing`` over the context's ground domain (QQ_I or ComplexField), so
polynomials never store zero coefficients.
"""

from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from symprod.polyalg.scalar import EXACT, Scalar, ScalarContext
from symprod.utils.errors import DimensionMismatchError, ValidationError

Monomial = Tuple[int, ...]


def monomial_degree(monomial: Monomial) -> int:
    return sum(monomial)


def unit_monomial(num_vars: int) -> Monomial:
    return (0,) * num_vars


def monomials_up_to(num_vars: int, degree_bound: int) -> List[Monomial]:
    """All monomials of total degree <= degree_bound, graded then lex"""
    result: List[Monomial] = []
    for degree in range(degree_bound + 1):
        block = []
        for combo in combinations_with_replacement(range(num_vars), degree):
            exps = [0] * num_vars
            for var in combo:
                exps[var] += 1
            block.append(tuple(exps))
        result.extend(sorted(block, reverse=True))
    return result


def monomial_power(point: Sequence[Scalar], monomial: Monomial, one: Scalar) -> Scalar:
    value = one
    for coordinate, exponent in zip(point, monomial):
        if exponent:
            value = value * coordinate**exponent
    return value


@lru_cache(maxsize=None)
def _ring(num_vars: int, domain: Any) -> PolyRing:
    symbols = ",".join(f"u{i + 1}" for i in range(num_vars))
    return PolyRing(symbols, domain, grlex)


def polynomial_ring(num_vars: int, context: ScalarContext = EXACT) -> PolyRing:
    """The ring C[u1..um] over ``context.domain``"""
    return _ring(num_vars, context.domain)


class Polynomial:
    """
    Sparse polynomial in ``num_vars`` variables u1..um

    Instances are immutable and hashable; arithmetic returns new
    polynomials. ``element`` is the underlying sympy ring element and
    coefficients are handed out as context scalars.
    """

    __slots__ = ("num_vars", "context", "_poly")

    def __init__(
        self,
        num_vars: int,
        terms: Optional[Mapping[Monomial, Any]] = None,
        context: ScalarContext = EXACT,
    ):
        if num_vars < 0:
            raise ValidationError(f"Invalid number of variables: {num_vars}")
        self.num_vars = num_vars
        self.context = context
        coeffs: Dict[Monomial, Any] = {}
        for monomial, coeff in dict(terms or {}).items():
            monomial = tuple(int(e) for e in monomial)
            if len(monomial) != num_vars:
                raise DimensionMismatchError(
                    f"Monomial {monomial} has {len(monomial)} exponents, "
                    f"expected {num_vars}"
                )
            if any(e < 0 for e in monomial):
                raise ValidationError(f"Negative exponent in {monomial}")
            value = context.to_domain(coeff)
            coeffs[monomial] = coeffs[monomial] + value if monomial in coeffs else value
        self._poly: PolyElement = polynomial_ring(num_vars, context).from_dict(coeffs)

    @classmethod
    def from_element(cls, element: PolyElement, context: ScalarContext) -> "Polynomial":
        """Wrap a ring element of ``polynomial_ring(ngens, context)``"""
        poly = cls.__new__(cls)
        poly.num_vars = element.ring.ngens
        poly.context = context
        poly._poly = element
        return poly

    # Construction helpers
    @classmethod
    def constant(
        cls, num_vars: int, value: Any, context: ScalarContext = EXACT
    ) -> "Polynomial":
        return cls(num_vars, {unit_monomial(num_vars): value}, context)

    @classmethod
    def one(cls, num_vars: int, context: ScalarContext = EXACT) -> "Polynomial":
        return cls.from_element(polynomial_ring(num_vars, context).one, context)

    @classmethod
    def zero(cls, num_vars: int, context: ScalarContext = EXACT) -> "Polynomial":
        return cls.from_element(polynomial_ring(num_vars, context).zero, context)

    @classmethod
    def variable(
        cls, num_vars: int, index: int, context: ScalarContext = EXACT
    ) -> "Polynomial":
        """The coordinate function u_{index+1}"""
        if not 0 <= index < num_vars:
            raise DimensionMismatchError(
                f"Variable index {index} out of range for {num_vars} variables"
            )
        return cls.from_element(polynomial_ring(num_vars, context).gens[index], context)

    @classmethod
    def monomial(
        cls, monomial: Monomial, context: ScalarContext = EXACT
    ) -> "Polynomial":
        return cls(len(monomial), {tuple(monomial): 1}, context)

    @classmethod
    def linear_form(
        cls, coefficients: Sequence[Any], context: ScalarContext = EXACT
    ) -> "Polynomial":
        """sum_i c_i u_i"""
        ring = polynomial_ring(len(coefficients), context)
        poly = ring.zero
        for gen, coeff in zip(ring.gens, coefficients):
            poly = poly + gen * context.to_domain(coeff)
        return cls.from_element(poly, context)

    # Accessors
    @property
    def element(self) -> PolyElement:
        return self._poly

    @property
    def terms(self) -> Dict[Monomial, Scalar]:
        return dict(self.items())

    def items(self) -> Iterator[Tuple[Monomial, Scalar]]:
        from_domain = self.context.from_domain
        return ((m, from_domain(c)) for m, c in self._poly.items())

    def coefficient(self, monomial: Monomial) -> Scalar:
        coeff = self._poly.get(tuple(monomial))
        return self.context.zero if coeff is None else self.context.from_domain(coeff)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial"""
        return max((monomial_degree(m) for m in self._poly.itermonoms()), default=-1)

    def is_zero(self) -> bool:
        return not self._poly

    def is_constant(self) -> bool:
        return self._poly.is_ground

    def with_context(self, context: ScalarContext) -> "Polynomial":
        if context == self.context:
            return self
        return Polynomial(self.num_vars, self.terms, context)

    # Arithmetic
    def _lift(self, other: Any) -> PolyElement:
        if isinstance(other, Polynomial):
            if self.num_vars != other.num_vars:
                raise DimensionMismatchError(
                    f"Polynomials in {self.num_vars} and {other.num_vars} variables"
                )
            return other.with_context(self.context)._poly
        return self._poly.ring.ground_new(self.context.to_domain(other))

    def _wrap(self, element: PolyElement) -> "Polynomial":
        return Polynomial.from_element(element, self.context)

    def __add__(self, other: Any) -> "Polynomial":
        return self._wrap(self._poly + self._lift(other))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return self._wrap(-self._poly)

    def __sub__(self, other: Any) -> "Polynomial":
        return self._wrap(self._poly - self._lift(other))

    def __rsub__(self, other: Any) -> "Polynomial":
        return self._wrap(self._lift(other) - self._poly)

    def __mul__(self, other: Any) -> "Polynomial":
        return self._wrap(self._poly * self._lift(other))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValidationError(f"Invalid polynomial exponent {exponent!r}")
        return self._wrap(self._poly**exponent)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self._poly.ring == other._poly.ring and self._poly == other._poly
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._poly)

    def key(self) -> tuple:
        """Sortable, hashable canonical key"""
        return tuple(sorted((m, self.context.sort_key(c)) for m, c in self.items()))

    # Evaluation
    def evaluate(self, point: Sequence[Any]) -> Scalar:
        """Value at ``point``; a ring homomorphism in the polynomial"""
        if len(point) != self.num_vars:
            raise DimensionMismatchError(
                f"Point has {len(point)} coordinates, polynomial has "
                f"{self.num_vars} variables"
            )
        if not self.num_vars:
            return self.coefficient(())
        coords = [self.context.to_domain(x) for x in point]
        return self.context.from_domain(self._poly(*coords))

    def __str__(self) -> str:
        terms = self.terms
        if not terms:
            return "0"
        pieces = []
        for m in sorted(terms, key=lambda mono: (-monomial_degree(mono), mono)):
            factors = [
                f"u{i + 1}" if e == 1 else f"u{i + 1}^{e}"
                for i, e in enumerate(m)
                if e
            ]
            coeff = self.context.format(terms[m])
            if not factors:
                pieces.append(coeff if "+" not in coeff[1:] else f"({coeff})")
            elif coeff == "1":
                pieces.append("*".join(factors))
            elif coeff == "-1":
                pieces.append("-" + "*".join(factors))
            else:
                if "+" in coeff[1:] or "-" in coeff[1:]:
                    coeff = f"({coeff})"
                pieces.append(coeff + "*" + "*".join(factors))
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Polynomial({self.num_vars}, {self})"


def poly_eval(p: Polynomial, x: Sequence[Any]) -> Scalar:
    """Evaluate ``p`` at the point ``x``"""
    return p.evaluate(x)
