"""
Bundled acceptance suite behind ``symprod selfcheck``

Each check draws its random cases from its own seeded generator, so a run
is reproducible from ``seed`` alone. Quick runs use small case counts;
``full=True`` uses the release-gate counts.
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from symprod.core.frobenius import (
    certify_frobenius,
    egf_coefficients,
    idempotent_value,
    phi_diagonal_series,
    phi_inductive,
    phi_one_padding,
    phi_partition,
    phi_permutation,
)
from symprod.core.partitions import (
    coefficient_polynomial_at_one,
    predicted_coefficient,
    verify_pairing_identity,
)
from symprod.core.reconstruct import decompose_finite, decompose_polynomial, decompose_quotient
from symprod.documents import FunctionalDocument
from symprod.polyalg.functional import (
    FiniteElement,
    FiniteFunctional,
    MomentFunctional,
    PointMultiset,
    evaluation_functional,
)
from symprod.polyalg.parser import parse_polynomial
from symprod.polyalg.polynomial import Polynomial, monomials_up_to, unit_monomial
from symprod.polyalg.scalar import EXACT, GaussianRational, Scalar, ScalarContext
from symprod.utils.config import SymprodConfig
from symprod.utils.errors import AnnihilationError, SymprodError, ValidationError
from symprod.utils.performance import PerformanceTimer

logger = logging.getLogger(__name__)


class CheckFailure(Exception):
    """A self-check found a counterexample"""


@dataclass
class CheckResult:
    """Outcome of one self-check"""

    name: str
    passed: bool
    detail: str = ""
    criterion: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "criterion": self.criterion,
            "passed": self.passed,
            "detail": self.detail,
        }


# Random inputs
def random_rational(rng: random.Random, bound: int = 3, denominator: int = 3) -> Fraction:
    return Fraction(
        rng.randint(-bound * denominator, bound * denominator), rng.randint(1, denominator)
    )


def random_gaussian(
    rng: random.Random, bound: int = 3, denominator: int = 3, imaginary: bool = True
) -> GaussianRational:
    im = Fraction(0)
    if imaginary and rng.random() < 0.5:
        im = random_rational(rng, bound, denominator)
    return GaussianRational(random_rational(rng, bound, denominator), im)


def random_polynomial(
    rng: random.Random,
    num_vars: int,
    max_degree: int,
    context: ScalarContext = EXACT,
    terms: int = 3,
) -> Polynomial:
    """A sparse polynomial with Gaussian-rational coefficients"""
    pool = monomials_up_to(num_vars, max_degree)
    chosen = rng.sample(pool, min(terms, len(pool)))
    return Polynomial(num_vars, {m: random_gaussian(rng) for m in chosen}, context)


def random_moment_functional(
    rng: random.Random,
    num_vars: int,
    degree_bound: int,
    context: ScalarContext = EXACT,
    unit_value: Optional[Any] = None,
) -> MomentFunctional:
    """A complete moment table of random Gaussian rationals"""
    table: Dict[Tuple[int, ...], Any] = {
        m: random_gaussian(rng) for m in monomials_up_to(num_vars, degree_bound)
    }
    if unit_value is not None:
        table[unit_monomial(num_vars)] = unit_value
    return MomentFunctional(num_vars, degree_bound, table, context)


def random_finite_functional(
    rng: random.Random,
    size: int,
    context: ScalarContext = EXACT,
    unit_value: Optional[Any] = None,
) -> FiniteFunctional:
    labels = tuple(f"x{i}" for i in range(size))
    values = [random_gaussian(rng) for _ in labels]
    if unit_value is not None:
        values[-1] = GaussianRational.of(unit_value) - sum(values[:-1], GaussianRational())
    return FiniteFunctional(labels, tuple(values), context)


def random_multiset(
    rng: random.Random,
    num_vars: int,
    n: int,
    make_point: Callable[[random.Random], Sequence[Any]],
    context: ScalarContext = EXACT,
) -> PointMultiset:
    """Between 1 and n distinct points from ``make_point``, multiplicities adding to n"""
    distinct = rng.randint(1, n)
    points: List[Tuple[Any, ...]] = []
    while len(points) < distinct:
        point = tuple(make_point(rng))
        if point not in points:
            points.append(point)
    multiplicities = [1] * distinct
    for _ in range(n - distinct):
        multiplicities[rng.randrange(distinct)] += 1
    return PointMultiset(num_vars, tuple(zip(points, multiplicities)), context)


def random_points(
    rng: random.Random,
    num_vars: int,
    n: int,
    context: ScalarContext = EXACT,
    *,
    gaussian: bool = False,
) -> PointMultiset:
    """Small rational (or Gaussian-rational) points in C^num_vars"""

    def make_point(r: random.Random) -> List[Any]:
        if gaussian:
            return [random_gaussian(r, 2, 2) for _ in range(num_vars)]
        return [random_rational(r, 3, 2) for _ in range(num_vars)]

    return random_multiset(rng, num_vars, n, make_point, context)


def _random_element(rng: random.Random, f: FiniteFunctional) -> FiniteElement:
    return f.element([random_gaussian(rng) for _ in f.point_labels])


# Runner
@dataclass
class SelfCheckRun:
    """Settings shared by the checks of one run"""

    config: SymprodConfig
    context: ScalarContext
    full: bool = False
    seed: int = 0
    _rngs: Dict[str, random.Random] = field(default_factory=dict, repr=False)

    def rng(self, name: str) -> random.Random:
        if name not in self._rngs:
            self._rngs[name] = random.Random(f"symprod-selfcheck:{self.seed}:{name}")
        return self._rngs[name]

    def count(self, full: int, quick: int) -> int:
        return full if self.full else quick

    def same(self, a: Scalar, b: Scalar) -> bool:
        ctx = self.context
        return ctx.close(a, b, max(ctx.magnitude(a), ctx.magnitude(b)))

    def decompose_options(self) -> Dict[str, Any]:
        rc = self.config.reconstruction
        return {
            "seed": rc.seed,
            "max_retries": rc.max_retries,
            "cluster_tolerance": rc.cluster_tolerance,
            "multiplicity_tolerance": rc.multiplicity_tolerance,
            "verify_tolerance": rc.verify_tolerance,
            "max_steps": rc.root_max_steps,
            "extra_precision": rc.root_extra_precision,
        }

    def same_points(self, expected: PointMultiset, found: PointMultiset) -> bool:
        """Equal multisets; float results are matched within the cluster tolerance"""
        if expected.size != found.size or len(expected.entries) != len(found.entries):
            return False
        if self.context.is_exact and found.context.is_exact:
            return expected == found
        work = found.context
        tol = self.config.reconstruction.cluster_tolerance
        unmatched = list(found.entries)
        for point, multiplicity in expected.entries:
            target = [work.coerce(x) for x in point]
            for i, (candidate, m) in enumerate(unmatched):
                gap = max(work.magnitude(a - b) for a, b in zip(target, candidate))
                if m == multiplicity and gap <= tol:
                    del unmatched[i]
                    break
            else:
                return False
        return True


def require(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailure(message)


# Checks
def check_definitions(run: SelfCheckRun) -> str:
    """Permutation sum, partition sum and recursion agree"""
    rng = run.rng("definitions")
    ctx = run.context
    limits = run.config.limits
    cases = run.count(200, 20)
    for case in range(cases):
        k = rng.randint(1, 6)
        f: Any
        if case % 2:
            f = random_finite_functional(rng, rng.randint(1, 4), ctx)
            args: List[Any] = [_random_element(rng, f) for _ in range(k)]
        else:
            num_vars = rng.randint(1, 3)
            args = [random_polynomial(rng, num_vars, 2, ctx) for _ in range(k)]
            bound = sum(max(a.degree(), 0) for a in args)
            f = random_moment_functional(rng, num_vars, bound, ctx)
        by_permutation = phi_permutation(f, args, limit=limits.permutation_limit)
        by_partition = phi_partition(f, args, limit=limits.partition_limit)
        by_recursion = phi_inductive(f, args, limit=limits.inductive_limit)
        require(
            run.same(by_permutation, by_partition) and run.same(by_partition, by_recursion),
            f"case {case} (k = {k}): {ctx.format(by_permutation)}, "
            f"{ctx.format(by_partition)}, {ctx.format(by_recursion)}",
        )
    return f"{cases} cases, three definitions agree"


def check_pairing_identity(run: SelfCheckRun) -> str:
    limits = run.config.limits
    top = run.count(4, 3)
    checked = 0
    for left in range(1, top + 1):
        for right in range(1, top + 1):
            report = verify_pairing_identity(
                left,
                right,
                limit=limits.pairing_limit,
                partition_limit=limits.partition_limit,
                threads=run.config.threads,
            )
            require(report.equal, f"({left}, {right}): {report.first_difference}")
            for pi, coeff in report.lhs.items():
                require(
                    predicted_coefficient(pi, left) == coeff,
                    f"({left}, {right}): block formula disagrees at {pi}",
                )
            checked += 1
    return f"{checked} size pairs up to ({top}, {top})"


def check_coefficient_polynomial(run: SelfCheckRun) -> str:
    for m in range(1, 9):
        for n in range(1, 9):
            value = coefficient_polynomial_at_one(m, n)
            require(value == 0, f"P_{m},{n}(1) = {value}")
    return "P_m,n(1) = 0 for 1 <= m, n <= 8"


def check_egf(run: SelfCheckRun) -> str:
    """Diagonal recursion against the exponential generating function"""
    rng = run.rng("egf")
    ctx = run.context
    cases = run.count(100, 10)
    for case in range(cases):
        N = rng.randint(1, 8)
        f: Any
        if case % 2:
            f = random_finite_functional(rng, rng.randint(1, 4), ctx)
            a: Any = _random_element(rng, f)
        else:
            num_vars = rng.randint(1, 2)
            a = random_polynomial(rng, num_vars, rng.randint(1, 2), ctx)
            f = random_moment_functional(rng, num_vars, N * max(a.degree(), 0), ctx)
        series = phi_diagonal_series(f, a, N)
        egf = egf_coefficients(f, a, N)
        for k, (x, y) in enumerate(zip(series, egf)):
            require(run.same(x, y), f"case {case}: Phi_{k} = {ctx.format(x)}, EGF {ctx.format(y)}")
        if N <= 5:
            direct = phi_partition(f, [a] * N, limit=run.config.limits.partition_limit)
            require(run.same(direct, series[N]), f"case {case}: diagonal Phi_{N} mismatch")
    return f"{cases} cases, N <= 8"


def check_additivity(run: SelfCheckRun) -> str:
    """E(P) + E(Q) certifies at |P| + |Q| and not one below"""
    rng = run.rng("additivity")
    ctx = run.context
    limits = run.config.limits
    cases = run.count(10, 3)
    for case in range(cases):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        total = m + n
        bound = total + 1
        f = evaluation_functional(random_points(rng, 2, m, ctx, gaussian=True), bound, ctx)
        g = evaluation_functional(random_points(rng, 2, n, ctx, gaussian=True), bound, ctx)
        options = {"threads": run.config.threads, "partition_limit": limits.partition_limit}
        at_total = certify_frobenius(f + g, total, bound, **options)
        require(at_total.passed, f"case {case}: degree {total} rejected: {at_total.reason}")
        below = certify_frobenius(f + g, total - 1, bound, **options)
        require(not below.passed, f"case {case}: degree {total - 1} certified")
    return f"{cases} sums certified at m + n only"


def check_one_padding(run: SelfCheckRun) -> str:
    rng = run.rng("one-padding")
    ctx = run.context
    cases = run.count(100, 10)
    for case in range(cases):
        n = rng.randint(1, 6)
        f: Any
        if case % 2:
            f = random_finite_functional(rng, rng.randint(1, 4), ctx)
            a: Any = _random_element(rng, f)
        else:
            num_vars = rng.randint(1, 3)
            a = random_polynomial(rng, num_vars, 2, ctx)
            f = random_moment_functional(rng, num_vars, max(a.degree(), 0), ctx)
        closed = phi_one_padding(f, a, n)
        direct = phi_permutation(
            f, [a] + [f.unit()] * (n - 1), limit=run.config.limits.permutation_limit
        )
        require(run.same(closed, direct), f"case {case} (n = {n}): closed form differs")
    return f"{cases} cases, n <= 6"


def _finite_cases(
    run: SelfCheckRun,
) -> Iterator[Tuple[Tuple[str, ...], Counter, FiniteFunctional, int]]:
    top = run.count(5, 3)
    for size in range(1, top + 1):
        labels = tuple(f"p{i}" for i in range(size))
        for n in range(1, top + 1):
            for combo in combinations_with_replacement(labels, n):
                multiset = Counter(combo)
                yield labels, multiset, FiniteFunctional.evaluation(
                    labels, multiset, run.context
                ), n


def check_finite_round_trip(run: SelfCheckRun) -> str:
    count = 0
    for _labels, multiset, f, n in _finite_cases(run):
        points = decompose_finite(f, n)
        require(dict(points.entries) == dict(multiset), f"{dict(multiset)} -> {points}")
        certificate = certify_frobenius(f, n)
        require(certificate.passed, f"{dict(multiset)}: {certificate.reason}")
        count += 1
    return f"{count} multisets recovered exactly"


def check_idempotents(run: SelfCheckRun) -> str:
    count = 0
    for labels, multiset, f, n in _finite_cases(run):
        for mask in range(1, 1 << len(labels)):
            chosen = [x for i, x in enumerate(labels) if mask >> i & 1]
            e = FiniteElement(labels, [1 if x in chosen else 0 for x in labels], run.context)
            value = idempotent_value(f, e, n)
            expected = sum(multiset[x] for x in chosen)
            require(value == expected, f"{dict(multiset)}: f(e_{chosen}) = {value}")
            count += 1
    return f"{count} idempotent values, all integers in [0, n]"


def check_polynomial_round_trip(run: SelfCheckRun) -> str:
    rng = run.rng("polynomial-round-trip")
    ctx = run.context
    cases = run.count(100, 10)
    worst_retries = 0
    for case in range(cases):
        num_vars = rng.randint(1, 3)
        n = rng.randint(1, 5)
        expected = random_points(rng, num_vars, n, ctx)
        f = evaluation_functional(expected, n, ctx)
        report = decompose_polynomial(f, n, **run.decompose_options())
        require(run.same_points(expected, report.points), f"case {case}: {expected} -> {report.points}")
        if ctx.is_exact:
            require(report.residual == 0, f"case {case}: residual {report.residual}")
        require(report.retries <= 8, f"case {case}: {report.retries} retries")
        worst_retries = max(worst_retries, report.retries)
    return f"{cases} multisets recovered, at most {worst_retries} retries"


def _parabola_point(t: Fraction) -> Tuple[Fraction, Fraction]:
    return t, t * t


def _circle_point(t: Fraction) -> Tuple[Fraction, Fraction]:
    return (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)


def check_quotient(run: SelfCheckRun) -> str:
    """Points on the parabola and circle decompose; points off them are rejected"""
    rng = run.rng("quotient")
    ctx = run.context
    parabola = parse_polynomial("u1^2 - u2", 2, ctx)
    circle = parse_polynomial("u1^2 + u2^2 - 1", 2, ctx)
    on_cases = run.count(20, 4)
    off_cases = run.count(5, 2)

    for case in range(on_cases):
        ideal, curve = (parabola, _parabola_point) if case % 2 == 0 else (circle, _circle_point)
        n = rng.randint(1, 3)
        expected = random_multiset(
            rng, 2, n, lambda r: curve(random_rational(r, 2, 2)), ctx
        )
        f = evaluation_functional(expected, n + 2, ctx)
        report = decompose_quotient(f, [ideal], n, **run.decompose_options())
        require(run.same_points(expected, report.points), f"case {case}: {report.points}")
        work = report.points.context
        for point, _ in report.points.entries:
            value = ideal.with_context(work).evaluate(point)
            require(
                work.is_zero(value, 1.0 + max(work.magnitude(x) for x in point) ** 2),
                f"case {case}: point off the variety of {ideal}",
            )

    for case in range(off_cases):
        n = rng.randint(1, 3)
        shift = abs(random_rational(rng, 2, 2)) + 1
        if case % 2 == 0:
            ideal = parabola

            def off(r: random.Random) -> Tuple[Fraction, Fraction]:
                x, y = _parabola_point(random_rational(r, 2, 2))
                return x, y - shift

        else:
            ideal = circle

            def off(r: random.Random) -> Tuple[Fraction, Fraction]:
                x, y = _circle_point(random_rational(r, 2, 2))
                return 2 * x, 2 * y

        points = random_multiset(rng, 2, n, off, ctx)
        f = evaluation_functional(points, n + 2, ctx)
        try:
            decompose_quotient(f, [ideal], n, **run.decompose_options())
        except AnnihilationError:
            continue
        raise CheckFailure(f"off-variety case {case} was not rejected")
    return f"{on_cases} on-variety cases recovered, {off_cases} off-variety cases rejected"


def check_unit_diagonal(run: SelfCheckRun) -> str:
    """Phi_n(1, ..., 1) = n! whenever f(1) = n"""
    rng = run.rng("unit-diagonal")
    ctx = run.context
    top = run.count(8, 6)
    for n in range(1, top + 1):
        functionals = [
            random_finite_functional(rng, rng.randint(1, 4), ctx, unit_value=n),
            random_moment_functional(rng, rng.randint(1, 2), 1, ctx, unit_value=n),
        ]
        for f in functionals:
            value = phi_partition(f, [f.unit()] * n, limit=run.config.limits.partition_limit)
            require(run.same(value, ctx.coerce(factorial(n))), f"Phi_{n}(1..1) = {ctx.format(value)}")
            diagonal = phi_diagonal_series(f, f.unit(), n)[n]
            require(run.same(diagonal, value), f"diagonal Phi_{n}(1..1) = {ctx.format(diagonal)}")
    return f"n <= {top}"


def check_corrupt_document(run: SelfCheckRun) -> str:
    """A moment document with a missing entry fails to load"""
    ctx = run.context
    points = PointMultiset(1, (((1,), 1), ((2,), 1)), ctx)
    document = FunctionalDocument.from_functional(evaluation_functional(points, 2, ctx))
    payload = document.model_dump(mode="json")
    dropped = payload["moments"]["entries"].pop()
    try:
        FunctionalDocument.model_validate(payload).to_functional(ctx)
    except ValidationError as e:
        return f"rejected after dropping {dropped['exponents']}: {e.message}"
    raise CheckFailure("incomplete moment table was accepted")


def check_float_residual(run: SelfCheckRun) -> str:
    """Float-mode recovery of a known multiset, reporting the residual"""
    fctx = run.context.to_float_context()
    expected = PointMultiset(
        2, (((1, 2), 2), ((Fraction(1, 2), -1), 1), ((-3, Fraction(2, 3)), 1)), fctx
    )
    f = evaluation_functional(expected, 4, fctx)
    report = decompose_polynomial(f, 4, **run.decompose_options())
    float_run = SelfCheckRun(run.config, fctx, run.full, run.seed)
    require(float_run.same_points(expected, report.points), f"recovered {report.points}")
    return f"residual {float(report.residual):.3e} at {fctx.precision} bits"


CHECKS: List[Tuple[str, Optional[int], Callable[[SelfCheckRun], str]]] = [
    ("definitions-agree", 1, check_definitions),
    ("pairing-identity", 2, check_pairing_identity),
    ("coefficient-polynomial", 3, check_coefficient_polynomial),
    ("egf-consistency", 4, check_egf),
    ("additivity", 5, check_additivity),
    ("one-padding", 6, check_one_padding),
    ("finite-round-trip", 7, check_finite_round_trip),
    ("polynomial-round-trip", 8, check_polynomial_round_trip),
    ("quotient-membership", 9, check_quotient),
    ("idempotent-integrality", 10, check_idempotents),
    ("unit-diagonal", 11, check_unit_diagonal),
    ("corrupt-document", None, check_corrupt_document),
    ("float-residual", None, check_float_residual),
]


def run_selfcheck(
    config: SymprodConfig,
    context: ScalarContext,
    *,
    full: bool = False,
    seed: int = 0,
    only: Optional[Sequence[str]] = None,
) -> List[CheckResult]:
    """Run the bundled checks in order; failures never stop later checks"""
    run = SelfCheckRun(config, context, full, seed)
    results = []
    for name, criterion, check in CHECKS:
        if only is not None and name not in only:
            continue
        with PerformanceTimer(f"selfcheck.{name}") as timer:
            try:
                result = CheckResult(name, True, check(run), criterion)
            except CheckFailure as e:
                result = CheckResult(name, False, str(e), criterion)
            except SymprodError as e:
                result = CheckResult(
                    name, False, f"{type(e).__name__}: {e.message}", criterion
                )
            except Exception as e:
                logger.warning("Check %s raised unexpectedly", name, exc_info=True)
                result = CheckResult(name, False, f"{type(e).__name__}: {e}", criterion)
        logger.info(
            "%s: %s (%.2fs)", name, "pass" if result.passed else "FAIL", timer.duration or 0.0
        )
        results.append(result)
    return results
