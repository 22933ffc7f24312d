"""
Scalars: exact Gaussian rationals and arbitrary-precision complex floats

Exact mode computes in Q(i) with ``fractions.Fraction`` parts, so every
identity is checked bit-exactly. Float mode uses an ``mpmath`` context
with its own precision; comparisons always go through an explicit,
scale-aware tolerance.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Any, Dict, Optional, Union

import mpmath
from sympy.polys.domains import QQ, QQ_I, ComplexField

from symprod.utils.errors import ValidationError

RationalLike = Union[int, Fraction]


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValidationError(f"Invalid rational {value!r}") from e
    if isinstance(value, float):
        return Fraction(repr(_finite(value)))
    raise ValidationError(f"Cannot interpret {value!r} as a rational number")


def _finite(value: float) -> float:
    if not math.isfinite(value):
        raise ValidationError(f"Non-finite number {value!r}")
    return value


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    """A complex number with rational real and imaginary parts"""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _to_fraction(self.re))
        object.__setattr__(self, "im", _to_fraction(self.im))

    @classmethod
    def of(cls, value: Any) -> "GaussianRational":
        """Coerce ints, Fractions, rational strings and GaussianRationals"""
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(_to_fraction(value.real), _to_fraction(value.imag))
        return cls(_to_fraction(value))

    @staticmethod
    def _coerce(other: Any) -> Optional["GaussianRational"]:
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(Fraction(other))
        return None

    def __add__(self, other: Any) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Any) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        norm = o.norm()
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __rtruediv__(self, other: Any) -> "GaussianRational":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __pos__(self) -> "GaussianRational":
        return self

    def __pow__(self, exponent: int) -> "GaussianRational":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return GaussianRational(1) / (self ** (-exponent))
        result = GaussianRational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __abs__(self) -> float:
        return math.sqrt(float(self.norm()))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """|z|^2, exactly"""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def is_integer(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    def sort_key(self) -> tuple:
        return (self.re, self.im)

    def __str__(self) -> str:
        if self.im == 0:
            return _format_fraction(self.re)
        im_abs = abs(self.im)
        im_text = "" if im_abs == 1 else _format_fraction(im_abs)
        if self.re == 0:
            sign = "-" if self.im < 0 else ""
            return f"{sign}{im_text}i"
        sign = "-" if self.im < 0 else "+"
        return f"{_format_fraction(self.re)}{sign}{im_text}i"

    def __repr__(self) -> str:
        return f"GaussianRational({self})"


Scalar = Union[GaussianRational, mpmath.mpc]


def is_float_scalar(value: Any) -> bool:
    """True for mpmath numbers from any context"""
    return hasattr(value, "_mpc_") or hasattr(value, "_mpf_")


@lru_cache(maxsize=None)
def _complex_field(precision: int) -> Any:
    return ComplexField(prec=precision)


def _qq(value: Fraction) -> Any:
    return QQ(value.numerator, value.denominator)


def _from_qq(value: Any) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


class ScalarMode(str, Enum):
    """Scalar arithmetic modes"""

    EXACT = "exact"
    FLOAT = "float"


@dataclass(frozen=True)
class ScalarContext:
    """
    Arithmetic context shared by polynomials and functionals

    Exact contexts produce ``GaussianRational`` values; float contexts
    produce ``mpmath.mpc`` values bound to a private ``MPContext`` with the
    configured precision. Polynomial arithmetic runs in the matching sympy
    ground domain (``domain``): QQ_I when exact, ComplexField otherwise.
    """

    mode: ScalarMode = ScalarMode.EXACT
    precision: int = 128
    tolerance: float = 1e-20
    _mp: Any = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", ScalarMode(self.mode))
        ctx = mpmath.MPContext()
        ctx.prec = self.precision
        object.__setattr__(self, "_mp", ctx)

    @classmethod
    def exact(cls) -> "ScalarContext":
        return cls(ScalarMode.EXACT)

    @classmethod
    def floating(cls, precision: int = 128, tolerance: float = 1e-20) -> "ScalarContext":
        return cls(ScalarMode.FLOAT, precision, tolerance)

    @property
    def is_exact(self) -> bool:
        return self.mode == ScalarMode.EXACT

    @property
    def mp(self) -> Any:
        """The mpmath context used in float mode"""
        return self._mp

    @property
    def domain(self) -> Any:
        """The sympy ground domain matching this context"""
        return QQ_I if self.is_exact else _complex_field(self.precision)

    def to_domain(self, value: Any) -> Any:
        """``value`` as an element of ``domain``"""
        scalar = self.coerce(value)
        if isinstance(scalar, GaussianRational):
            return QQ_I(_qq(scalar.re), _qq(scalar.im))
        return self.domain.dtype(scalar)

    def from_domain(self, element: Any) -> Scalar:
        """Inverse of ``to_domain``"""
        if self.is_exact:
            return GaussianRational(_from_qq(element.x), _from_qq(element.y))
        return self._mp.mpc(element)

    @property
    def zero(self) -> Scalar:
        return self.coerce(0)

    @property
    def one(self) -> Scalar:
        return self.coerce(1)

    def to_float_context(self) -> "ScalarContext":
        if not self.is_exact:
            return self
        return ScalarContext(ScalarMode.FLOAT, self.precision, self.tolerance)

    def coerce(self, value: Any) -> Scalar:
        """Convert ``value`` into this context's scalar type"""
        if self.is_exact:
            if is_float_scalar(value):
                raise ValidationError(
                    "Floating-point value in exact mode; use --mode float"
                )
            return GaussianRational.of(value)

        mp = self._mp
        if isinstance(value, GaussianRational):
            return mp.mpc(self._fraction_to_mpf(value.re), self._fraction_to_mpf(value.im))
        if isinstance(value, Fraction):
            return mp.mpc(self._fraction_to_mpf(value))
        if isinstance(value, str):
            return mp.mpc(self._fraction_to_mpf(_to_fraction(value)))
        if is_float_scalar(value):
            return mp.mpc(value)
        return mp.mpc(value)

    def _fraction_to_mpf(self, value: Fraction) -> Any:
        mp = self._mp
        return mp.mpf(value.numerator) / mp.mpf(value.denominator)

    def magnitude(self, value: Scalar) -> float:
        return float(abs(value))

    def is_zero(self, value: Scalar, scale: float = 0.0) -> bool:
        """Exact zero test, or ``|value| <= tol * (1 + scale)`` in float mode"""
        if self.is_exact and isinstance(value, GaussianRational):
            return not value
        return float(abs(value)) <= self.tolerance * (1.0 + scale)

    def close(self, a: Scalar, b: Scalar, scale: float = 0.0) -> bool:
        return self.is_zero(a - b, scale)

    def as_integer(self, value: Scalar, tolerance: Optional[float] = None) -> Optional[int]:
        """The integer ``value`` equals (exact) or rounds to within tolerance"""
        if isinstance(value, GaussianRational):
            return int(value.re) if value.is_integer() else None
        if not self._mp.isfinite(value):
            return None
        tol = self.tolerance if tolerance is None else tolerance
        nearest = int(mpmath.nint(value.real))
        if abs(value - nearest) <= tol:
            return nearest
        return None

    def sort_key(self, value: Scalar) -> tuple:
        if isinstance(value, GaussianRational):
            return value.sort_key()
        # exact mpf parts, never rounded to float
        return (value.real, value.imag)

    def format(self, value: Scalar) -> str:
        if isinstance(value, GaussianRational):
            return str(value)
        return mpmath.nstr(value, 20)

    def to_json(self, value: Scalar) -> Dict[str, Any]:
        if isinstance(value, GaussianRational):
            return {"re": _format_fraction(value.re), "im": _format_fraction(value.im)}
        return {
            "re": float(value.real),
            "im": float(value.imag),
            "precision": self.precision,
        }

    def from_json(self, data: Any) -> Scalar:
        """Decode ``{"re", "im"}`` objects, bare numbers or rational strings"""
        if isinstance(data, dict):
            if "re" not in data:
                raise ValidationError(f"Scalar object missing 're': {data!r}")
            re = data["re"]
            im = data.get("im", 0)
            if self.is_exact:
                if isinstance(re, float) or isinstance(im, float):
                    raise ValidationError(
                        "Exact-mode scalars must be integers or 'p/q' strings"
                    )
                return GaussianRational(_to_fraction(re), _to_fraction(im))
            mp = self._mp
            return mp.mpc(self._real_to_mpf(re), self._real_to_mpf(im))
        if isinstance(data, bool):
            raise ValidationError(f"Invalid scalar {data!r}")
        if isinstance(data, (int, str)):
            return self.coerce(_to_fraction(data))
        if isinstance(data, float):
            if self.is_exact:
                raise ValidationError(
                    "Exact-mode scalars must be integers or 'p/q' strings"
                )
            return self._mp.mpc(_finite(data))
        raise ValidationError(f"Invalid scalar {data!r}")

    def _real_to_mpf(self, value: Any) -> Any:
        if isinstance(value, (int, str)) and not isinstance(value, bool):
            return self._fraction_to_mpf(_to_fraction(value))
        if isinstance(value, float):
            return self._mp.mpf(_finite(value))
        raise ValidationError(f"Invalid real part {value!r}")


EXACT = ScalarContext.exact()
