"""
Truncated formal power series

A series is a univariate ring element in t, truncated after t^order with
sympy's ``ring_series`` routines.
"""

from math import factorial
from typing import Any, List, Sequence

from sympy.polys.ring_series import rs_mul, rs_series_from_list, rs_trunc
from sympy.polys.rings import PolyElement

from symprod.polyalg.scalar import Scalar, ScalarContext
from symprod.polyalg.univariate import from_coefficients
from symprod.utils.errors import ValidationError


class FormalPowerSeries:
    """Power series sum a_k t^k known up to t^order"""

    def __init__(self, coefficients: Sequence[Any], order: int, context: ScalarContext):
        if order < 0:
            raise ValidationError(f"Series order must be nonnegative, got {order}")
        self.order = order
        self.context = context
        self._series = from_coefficients(list(coefficients)[: order + 1], context)

    @classmethod
    def _wrap(
        cls, series: PolyElement, order: int, context: ScalarContext
    ) -> "FormalPowerSeries":
        result = cls.__new__(cls)
        result.order = order
        result.context = context
        result._series = series
        return result

    @property
    def _t(self) -> PolyElement:
        return self._series.ring.gens[0]

    @property
    def coefficients(self) -> List[Scalar]:
        return [self[k] for k in range(self.order + 1)]

    def __getitem__(self, index: int) -> Scalar:
        if not 0 <= index <= self.order:
            raise IndexError(f"t^{index} is beyond the truncation order {self.order}")
        coeff = self._series.get((index,))
        return self.context.zero if coeff is None else self.context.from_domain(coeff)

    def __add__(self, other: "FormalPowerSeries") -> "FormalPowerSeries":
        order = min(self.order, other.order)
        total = rs_trunc(self._series + other._series, self._t, order + 1)
        return self._wrap(total, order, self.context)

    def __mul__(self, other: Any) -> "FormalPowerSeries":
        if not isinstance(other, FormalPowerSeries):
            scaled = self._series * self.context.to_domain(other)
            return self._wrap(scaled, self.order, self.context)
        order = min(self.order, other.order)
        product = rs_mul(self._series, other._series, self._t, order + 1)
        return self._wrap(product, order, self.context)

    __rmul__ = __mul__

    def exp(self) -> "FormalPowerSeries":
        """exp(s) = sum_j s^j / j!, for s with zero constant term"""
        if not self.context.is_zero(self[0]):
            raise ValidationError(
                "exp() needs a series without constant term",
                {"constant_term": self.context.to_json(self[0])},
            )
        ring = self._series.ring
        weights = [
            ring.one.quo_ground(ring.domain_new(factorial(j)))
            for j in range(self.order + 1)
        ]
        result = rs_series_from_list(self._series, weights, self._t, self.order + 1)
        return self._wrap(result, self.order, self.context)

    def egf_values(self) -> List[Scalar]:
        """Coefficients scaled by n!, reading the series as an EGF"""
        return [c * factorial(n) for n, c in enumerate(self.coefficients)]

    def __repr__(self) -> str:
        shown = [self.context.format(c) for c in self.coefficients]
        return f"FormalPowerSeries({shown})"
