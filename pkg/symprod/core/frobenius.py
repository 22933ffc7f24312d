"""
Frobenius transformations Phi_m(f) and Frobenius n-homomorphism certificates

Phi_m(f) is computed three independent ways (permutation sum, partition sum,
inductive recursion) and all three must agree. Arguments are algebra elements
of the functional's algebra: ``FiniteElement`` for a ``FiniteFunctional``,
``Polynomial`` for a ``MomentFunctional``.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations_with_replacement, permutations
from math import factorial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from symprod.core.partitions import (
    DEFAULT_PARTITION_LIMIT,
    chi,
    permutation_cycles,
    permutation_sign,
)
from symprod.polyalg.functional import (
    AlgebraElement,
    FiniteElement,
    FiniteFunctional,
    Functional,
    MomentFunctional,
)
from symprod.polyalg.polynomial import Monomial, Polynomial, monomials_up_to
from symprod.polyalg.scalar import Scalar
from symprod.polyalg.series import FormalPowerSeries
from symprod.utils.cache import LRUCache
from symprod.utils.errors import (
    ConfigurationError,
    NotFrobeniusError,
    SizeLimitError,
    ValidationError,
)

logger = logging.getLogger(__name__)

DEFAULT_PERMUTATION_LIMIT = 9
DEFAULT_INDUCTIVE_LIMIT = 12


def _check_arity(k: int, limit: int, what: str) -> None:
    if k < 1:
        raise ValidationError("Phi needs at least one argument")
    if k > limit:
        raise SizeLimitError(
            f"{what} with {k} arguments exceeds the configured limit {limit}",
            {"requested": k, "limit": limit},
        )


def _product(f: Functional, elements: Sequence[AlgebraElement]) -> AlgebraElement:
    result = f.unit()
    for a in elements:
        result = result * a
    return result


class _BlockValues:
    """f(prod of args over a block), memoized per index set"""

    def __init__(self, f: Functional, args: Sequence[AlgebraElement]):
        self.f = f
        self.args = list(args)
        self._values: Dict[Tuple[int, ...], Scalar] = {}

    def __call__(self, block: Sequence[int]) -> Scalar:
        key = tuple(sorted(block))
        if key not in self._values:
            self._values[key] = self.f.apply(_product(self.f, [self.args[i] for i in key]))
        return self._values[key]


def phi_permutation(
    f: Functional,
    args: Sequence[AlgebraElement],
    *,
    limit: int = DEFAULT_PERMUTATION_LIMIT,
) -> Scalar:
    """Phi_k(f)(args) = sum over sigma in S_k of sign(sigma) f_sigma"""
    k = len(args)
    _check_arity(k, limit, "Permutation sum")
    f.check_product(args)
    values = _BlockValues(f, args)
    ctx = f.context
    total = ctx.zero
    for perm in permutations(range(k)):
        term = ctx.one
        for cycle in permutation_cycles(perm):
            term = term * values(cycle)
        total = total + term if permutation_sign(perm) > 0 else total - term
    return total


def _phi_partition_scaled(
    f: Functional, args: Sequence[AlgebraElement], limit: int
) -> Tuple[Scalar, float]:
    k = len(args)
    _check_arity(k, limit, "Partition sum")
    f.check_product(args)
    values = _BlockValues(f, args)
    ctx = f.context
    total = ctx.zero
    scale = 0.0
    for pi, coeff in chi(k, limit=limit).items():
        term = ctx.coerce(coeff)
        for block in pi.blocks:
            term = term * values(block)
        total = total + term
        if not ctx.is_exact:
            scale += ctx.magnitude(term)
    return total, scale


def phi_partition(
    f: Functional,
    args: Sequence[AlgebraElement],
    *,
    limit: int = DEFAULT_PARTITION_LIMIT,
) -> Scalar:
    """Phi_k(f)(args) = f(chi(X)): sum of eps(pi) n(pi) f_pi over partitions"""
    value, _ = _phi_partition_scaled(f, args, limit)
    return value


def _multiset_key(elements: Sequence[AlgebraElement]) -> tuple:
    return tuple(sorted(a.key() for a in elements))


def phi_inductive(
    f: Functional,
    args: Sequence[AlgebraElement],
    *,
    limit: int = DEFAULT_INDUCTIVE_LIMIT,
    cache: Optional[LRUCache] = None,
) -> Scalar:
    """
    Phi_k(f) through the recursion

        Phi_{n+1}(a1, ..., a_{n+1}) = f(a1) Phi_n(a2, ...)
                                      - sum_i Phi_n(a2, ..., a1*a_i, ...)

    Values are memoized on the argument multiset (Phi is symmetric). The
    cache is private to the call unless one is passed in.
    """
    k = len(args)
    _check_arity(k, limit, "Inductive recursion")
    f.check_product(args)
    memo = cache if cache is not None else LRUCache(max_size=1 << 16)

    def recurse(elements: List[AlgebraElement]) -> Scalar:
        if len(elements) == 1:
            return f.apply(elements[0])
        key = _multiset_key(elements)
        found, value = memo.lookup(key)
        if found:
            return value
        head, rest = elements[0], elements[1:]
        value = f.apply(head) * recurse(rest)
        for i in range(len(rest)):
            merged = list(rest)
            merged[i] = head * rest[i]
            value = value - recurse(merged)
        memo.set(key, value)
        return value

    result = recurse(list(args))
    logger.debug("Inductive recursion for k=%d: memo %s", k, memo.get_stats())
    return result


def _power_values(f: Functional, a: AlgebraElement, N: int) -> List[Scalar]:
    """[f(a), f(a^2), ..., f(a^N)]"""
    if N >= 1:
        f.check_product([a] * N)
    values = []
    power = f.unit()
    for _ in range(N):
        power = power * a
        values.append(f.apply(power))
    return values


def phi_diagonal_series(f: Functional, a: AlgebraElement, N: int) -> List[Scalar]:
    """
    [Phi_0, Phi_1(f)(a), ..., Phi_N(f)(a, ..., a)] with Phi_0 = 1

    Uses Phi_n = sum_k (-1)^(k+1) f(a^k) Phi_{n-k} (n-1)!/(n-k)!, where
    the ratio of factorials is the integer (n-1)(n-2)...(n-k+1).
    """
    if N < 0:
        raise ValidationError(f"Series length must be nonnegative, got {N}")
    ctx = f.context
    p = _power_values(f, a, N)
    series: List[Scalar] = [ctx.one]
    for n in range(1, N + 1):
        total = ctx.zero
        falling = 1
        for k in range(1, n + 1):
            if k > 1:
                falling *= n - k + 1
            term = p[k - 1] * series[n - k] * falling
            total = total + term if k % 2 else total - term
        series.append(total)
    return series


def egf_coefficients(f: Functional, a: AlgebraElement, N: int) -> List[Scalar]:
    """
    n! times the coefficients of exp(sum_k (-1)^(k+1) f(a^k) t^k / k)

    Computed as a truncated power series, independently of the recursion in
    ``phi_diagonal_series``.
    """
    if N < 0:
        raise ValidationError(f"Series length must be nonnegative, got {N}")
    ctx = f.context
    p = _power_values(f, a, N)
    log_series = [ctx.zero]
    for k in range(1, N + 1):
        term = p[k - 1] / k
        log_series.append(term if k % 2 else -term)
    return FormalPowerSeries(log_series, N, ctx).exp().egf_values()


def phi_one_padding(f: Functional, a: AlgebraElement, n: int) -> Scalar:
    """Closed form of Phi_n(f)(a, 1, ..., 1) = f(a)(f(1)-1)...(f(1)-(n-1))"""
    if n < 1:
        raise ValidationError(f"n must be positive, got {n}")
    f.check_product([a])
    f1 = f.unit_value
    value = f.apply(a)
    for i in range(1, n):
        value = value * (f1 - i)
    return value


def symmetric_tensor_apply(
    f: Functional,
    n: int,
    tensor: Sequence[AlgebraElement],
    *,
    limit: int = DEFAULT_PARTITION_LIMIT,
) -> Scalar:
    """
    Phi_n(f)/n! on the symmetrization of a1 ⊗ ... ⊗ an

    For a Frobenius n-homomorphism this is a ring homomorphism on the
    symmetric tensors; nothing here re-certifies f.
    """
    if len(tensor) != n:
        raise ValidationError(f"Expected {n} tensor factors, got {len(tensor)}")
    return phi_partition(f, tensor, limit=limit) / factorial(n)


def symmetric_tensor_product(
    f: Functional,
    n: int,
    a: Sequence[AlgebraElement],
    b: Sequence[AlgebraElement],
    *,
    limit: int = DEFAULT_PARTITION_LIMIT,
) -> Scalar:
    """
    sum over phi in S_n of Phi_n(a1 b_phi(1), ..., an b_phi(n))

    Equals Phi_n(a) Phi_n(b) when f is a Frobenius n-homomorphism.
    """
    if len(a) != n or len(b) != n:
        raise ValidationError(f"Expected {n} factors on both sides")
    ctx = f.context
    total = ctx.zero
    for perm in permutations(range(n)):
        total = total + phi_partition(
            f, [a[i] * b[perm[i]] for i in range(n)], limit=limit
        )
    return total


def symmetrized_padding_value(f: Functional, n: int, p: AlgebraElement) -> Scalar:
    """
    Phi_n(f)/n! on sum_i 1 ⊗ ... ⊗ p ⊗ ... ⊗ 1 (p in slot i)

    Every slot contributes Phi_n(p, 1, ..., 1), so this is
    n * phi_one_padding(f, p, n) / n!, which is f(p) when f(1) = n.
    """
    return phi_one_padding(f, p, n) * n / factorial(n)


def idempotent_value(f: Functional, a: AlgebraElement, n: int) -> int:
    """
    The integer f(a) for an idempotent a under a Frobenius n-homomorphism

    Phi_{n+1}(a, ..., a) = f(a)(f(a)-1)...(f(a)-n) must vanish, which
    forces f(a) into {0, ..., n}.
    """
    if a * a != a:
        raise ValidationError("Element is not idempotent")
    ctx = f.context
    top = phi_diagonal_series(f, a, n + 1)[-1]
    value = f.apply(a)
    as_int = ctx.as_integer(value)
    if not ctx.is_zero(top) or as_int is None or not 0 <= as_int <= n:
        raise NotFrobeniusError(
            f"Idempotent has value {ctx.format(value)}, not an integer in [0, {n}]",
            {"value": ctx.to_json(value), "n": n},
        )
    return as_int


class CertificateMethod(str, Enum):
    """How the tuples tested by a certificate were chosen"""

    EXHAUSTIVE_BASIS = "exhaustive-basis"
    MONOMIALS_TO_DEGREE = "monomials-to-degree"


@dataclass
class FrobeniusCertificate:
    """
    Result of testing Phi_{n+1}(f) = 0 and f(1) = n

    ``passed`` is the verdict. For the moment method it only speaks for
    tuples whose product has degree <= ``degree_bound``.
    """

    degree: int
    f1_value: Scalar
    method: CertificateMethod
    passed: bool
    degree_bound: Optional[int] = None
    tuples_checked: int = 0
    witness: Optional[List[AlgebraElement]] = field(default=None, repr=False)
    witness_value: Optional[Scalar] = None
    reason: str = ""

    @property
    def scope(self) -> str:
        if self.method == CertificateMethod.EXHAUSTIVE_BASIS:
            return "exhaustive over the indicator basis"
        return f"certified up to degree {self.degree_bound}"

    def to_dict(self, context: Any) -> Dict[str, Any]:
        witness = None
        if self.witness is not None:
            witness = [_describe(a, context) for a in self.witness]
        return {
            "degree": self.degree,
            "passed": self.passed,
            "f1": context.to_json(self.f1_value),
            "method": self.method.value,
            "degree_bound": self.degree_bound,
            "scope": self.scope,
            "tuples_checked": self.tuples_checked,
            "witness": witness,
            "witness_value": None
            if self.witness_value is None
            else context.to_json(self.witness_value),
            "reason": self.reason,
        }


def _describe(a: AlgebraElement, context: Any) -> Any:
    if isinstance(a, FiniteElement):
        return [context.to_json(v) for v in a.values]
    return str(a)


def _falling(value: Scalar, count: int, one: Scalar) -> Scalar:
    result = one
    for i in range(count):
        result = result * (value - i)
    return result


def _finite_tuples(f: FiniteFunctional, size: int) -> List[Tuple[str, ...]]:
    return list(combinations_with_replacement(f.point_labels, size))


def _monomial_tuples(num_vars: int, size: int, degree_bound: int) -> List[Tuple[Monomial, ...]]:
    """Multisets of ``size`` nonconstant monomials with total degree <= bound"""
    top = degree_bound - (size - 1)
    pool = [m for m in monomials_up_to(num_vars, top) if sum(m) > 0]
    result: List[Tuple[Monomial, ...]] = []

    def extend(start: int, chosen: List[Monomial], used: int) -> None:
        if len(chosen) == size:
            result.append(tuple(chosen))
            return
        remaining = size - len(chosen) - 1
        for i in range(start, len(pool)):
            d = sum(pool[i])
            # pool is graded, so later entries are no cheaper
            if used + d + remaining > degree_bound:
                break
            chosen.append(pool[i])
            extend(i, chosen, used + d)
            chosen.pop()

    extend(0, [], 0)
    return result


def _run_checks(
    items: Sequence[Any], check: Callable[[Any], Tuple[bool, Scalar]], threads: int
) -> List[Tuple[bool, Scalar]]:
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(check, items))
    return [check(item) for item in items]


def certify_frobenius(
    f: Functional,
    n: int,
    degree_bound: Optional[int] = None,
    *,
    threads: int = 1,
    partition_limit: int = DEFAULT_PARTITION_LIMIT,
    fast_finite: bool = True,
) -> FrobeniusCertificate:
    """
    Certify that f is a Frobenius n-homomorphism

    Finite functionals: Phi_{n+1} is tested on every multiset of n+1
    indicators, which is complete by multilinearity and symmetry. Products
    of distinct indicators vanish, so the value on a multiset with counts
    c_r is prod_r f(e_r)(f(e_r)-1)...(f(e_r)-c_r+1); ``fast_finite=False``
    evaluates the partition sum instead.

    Moment functionals: Phi_{n+1} is tested on every multiset of n+1
    nonconstant monomials of total degree <= D, and Phi_{n+1}(mu, 1, ..., 1)
    is checked in closed form for each monomial mu. The verdict is scoped
    to degree D.
    """
    if n < 0:
        raise ValidationError(f"n must be nonnegative, got {n}")
    ctx = f.context
    f1 = f.unit_value
    size = n + 1

    if isinstance(f, FiniteFunctional):
        method = CertificateMethod.EXHAUSTIVE_BASIS
        bound = None
        one = ctx.one
        indicator_values = dict(zip(f.point_labels, f.values))

        def check(labels: Tuple[str, ...]) -> Tuple[bool, Scalar]:
            if fast_finite:
                value = one
                scale = 1.0
                for label in sorted(set(labels)):
                    v = indicator_values[label]
                    c = labels.count(label)
                    value = value * _falling(v, c, one)
                    for i in range(c):
                        scale *= 1.0 + ctx.magnitude(v - i)
                return ctx.is_zero(value, scale), value
            value, scale = _phi_partition_scaled(
                f, [f.indicator(x) for x in labels], partition_limit
            )
            return ctx.is_zero(value, scale), value

        items: List[Any] = _finite_tuples(f, size)

        def materialize(labels: Tuple[str, ...]) -> List[AlgebraElement]:
            return [f.indicator(x) for x in labels]

    else:
        method = CertificateMethod.MONOMIALS_TO_DEGREE
        bound = f.degree_bound if degree_bound is None else degree_bound
        if bound > f.degree_bound:
            raise ConfigurationError(
                f"Degree bound {bound} exceeds the moment table's {f.degree_bound}"
            )
        if size > bound:
            raise ConfigurationError(
                f"Degree bound {bound} is too small to test Phi_{size}; "
                f"need at least {size}",
                {"degree_bound": bound, "required": size},
            )
        num_vars = f.num_vars

        def to_poly(monomials: Tuple[Monomial, ...]) -> List[AlgebraElement]:
            return [Polynomial.monomial(m, ctx) for m in monomials]

        def check(monomials: Tuple[Monomial, ...]) -> Tuple[bool, Scalar]:
            value, scale = _phi_partition_scaled(f, to_poly(monomials), partition_limit)
            return ctx.is_zero(value, scale), value

        items = _monomial_tuples(num_vars, size, bound)
        materialize = to_poly

    logger.debug("Certifying degree %d on %d tuples", n, len(items))
    results = _run_checks(items, check, threads)
    checked = len(items)

    for item, (vanished, value) in zip(items, results):
        if not vanished:
            return FrobeniusCertificate(
                degree=n,
                f1_value=f1,
                method=method,
                passed=False,
                degree_bound=bound,
                tuples_checked=checked,
                witness=materialize(item),
                witness_value=value,
                reason=f"Phi_{size} does not vanish on the witness",
            )

    if isinstance(f, MomentFunctional):
        for monomial in monomials_up_to(f.num_vars, bound):
            if sum(monomial) == 0:
                continue
            mu = Polynomial.monomial(monomial, ctx)
            value = phi_one_padding(f, mu, size)
            checked += 1
            scale = ctx.magnitude(f.apply(mu)) * (1.0 + ctx.magnitude(f1)) ** n
            if not ctx.is_zero(value, scale):
                return FrobeniusCertificate(
                    degree=n,
                    f1_value=f1,
                    method=method,
                    passed=False,
                    degree_bound=bound,
                    tuples_checked=checked,
                    witness=[mu] + [f.unit()] * n,
                    witness_value=value,
                    reason=f"Phi_{size} does not vanish on a padded tuple",
                )

    if not ctx.is_zero(f1 - n, float(n)):
        return FrobeniusCertificate(
            degree=n,
            f1_value=f1,
            method=method,
            passed=False,
            degree_bound=bound,
            tuples_checked=checked,
            reason=f"f(1) = {ctx.format(f1)} differs from {n}",
        )

    return FrobeniusCertificate(
        degree=n,
        f1_value=f1,
        method=method,
        passed=True,
        degree_bound=bound,
        tuples_checked=checked,
    )


@dataclass
class DegreeSearch:
    """Outcome of ``degree_search``: the degree found and the certificates tried"""

    degree: Optional[int]
    certificates: List[FrobeniusCertificate] = field(default_factory=list)
    reason: str = ""


def degree_search(
    f: Functional,
    max_n: int,
    degree_bound: Optional[int] = None,
    **options: Any,
) -> DegreeSearch:
    """
    Find the smallest n <= max_n at which f certifies

    A passing certificate needs f(1) = n, so the only candidate is
    n = f(1) when that is an integer in [0, max_n]; anything else is ruled
    out without enumerating tuples.
    """
    if max_n < 0:
        raise ValidationError(f"max_n must be nonnegative, got {max_n}")
    ctx = f.context
    f1 = f.unit_value
    k = ctx.as_integer(f1)
    if k is None or k < 0:
        return DegreeSearch(None, reason=f"f(1) = {ctx.format(f1)} is not a nonnegative integer")
    if k > max_n:
        return DegreeSearch(None, reason=f"f(1) = {k} exceeds max_n = {max_n}")
    certificate = certify_frobenius(f, k, degree_bound, **options)
    if certificate.passed:
        return DegreeSearch(k, [certificate])
    return DegreeSearch(None, [certificate], reason=certificate.reason)


def frobenius_degree(
    f: Functional,
    max_n: int,
    degree_bound: Optional[int] = None,
    **options: Any,
) -> Optional[int]:
    """Smallest n <= max_n with a passing certificate, or None"""
    return degree_search(f, max_n, degree_bound, **options).degree
