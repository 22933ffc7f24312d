"""
Decomposing Frobenius n-homomorphisms into multisets of points

* finite sets: the multiplicity of a point is f at its indicator;
* polynomial algebras: a separating linear form psi turns the problem into
  a univariate one. Power sums f(psi^k) give the elementary symmetric
  functions of the psi-values, their roots give the distinct values, and
  Lagrange polynomials in psi pick out each point's multiplicity and
  coordinates;
* quotient algebras: as for polynomials, after checking that f kills the
  ideal, and each recovered point must lie on the variety.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from symprod.core.roots import DEFAULT_CLUSTER_TOLERANCE, roots_with_multiplicity
from symprod.polyalg import univariate
from symprod.polyalg.functional import (
    FiniteFunctional,
    Functional,
    MomentFunctional,
    PointMultiset,
    evaluation_functional,
)
from symprod.polyalg.polynomial import Polynomial, monomials_up_to
from symprod.polyalg.scalar import (
    EXACT,
    GaussianRational,
    Scalar,
    ScalarContext,
    is_float_scalar,
)
from symprod.utils.errors import (
    AnnihilationError,
    ConfigurationError,
    DimensionMismatchError,
    InconsistencyError,
    NotFrobeniusError,
    NumericalError,
    ReconstructionError,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_RETRIES = 8
DEFAULT_MULTIPLICITY_TOLERANCE = 1e-6
DEFAULT_VERIFY_TOLERANCE = 1e-12

Residual = Union[Fraction, float]


@dataclass(frozen=True)
class SeparatingForm:
    """psi = sum_i c_i u_i, drawn from ``seed`` on retry ``retry``"""

    coefficients: Tuple[int, ...]
    seed: int = 0
    retry: int = 0

    def polynomial(self, context: ScalarContext = EXACT) -> Polynomial:
        return Polynomial.linear_form(self.coefficients, context)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coefficients": list(self.coefficients),
            "seed": self.seed,
            "retry": self.retry,
        }


def select_separating_form(
    values_so_far: Optional[Sequence[SeparatingForm]] = None,
    seed: int = 0,
    num_vars: int = 1,
    *,
    retry: Optional[int] = None,
) -> SeparatingForm:
    """
    A reproducible random linear form

    ``values_so_far`` are the forms already rejected for this input; the
    retry index defaults to how many there are. On retry t coefficients are
    drawn from [-(t+1), t+1], never all zero, and never a rejected form.
    """
    if num_vars < 1:
        raise DimensionMismatchError(f"Invalid number of variables: {num_vars}")
    rejected = {form.coefficients for form in values_so_far or ()}
    t = len(rejected) if retry is None else retry
    bound = t + 1
    rng = random.Random(f"symprod-form:{seed}:{t}")
    while True:
        coefficients = tuple(rng.randint(-bound, bound) for _ in range(num_vars))
        if any(coefficients) and coefficients not in rejected:
            return SeparatingForm(coefficients, seed, t)


@dataclass
class ReconstructionReport:
    """
    Recovered points plus the evidence for them

    ``residual`` is the largest deviation between the rebuilt and the input
    moment table: an exact Fraction (max of |re|, |im|) in exact mode, a
    float otherwise.
    """

    points: PointMultiset
    residual: Residual
    form_used: Optional[SeparatingForm] = None
    retries: int = 0
    exact: bool = True
    quotient_weights: Optional[List[List[Optional[Scalar]]]] = None
    lagrange: List[Polynomial] = field(default_factory=list, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        ctx = self.points.context
        weights = None
        if self.quotient_weights is not None:
            weights = [
                [None if w is None else ctx.to_json(w) for w in row]
                for row in self.quotient_weights
            ]
        return {
            "points": self.points.to_json(),
            "size": self.points.size,
            "residual": str(self.residual) if self.exact else float(self.residual),
            "form": None if self.form_used is None else self.form_used.to_dict(),
            "retries": self.retries,
            "exact": self.exact,
            "quotient_weights": weights,
        }


def decompose_finite(f: FiniteFunctional, n: int) -> PointMultiset:
    """
    The multiset D with f = E(D): multiplicity of r is f(e_r)

    Raises NotFrobeniusError when some f(e_r) is not a nonnegative integer
    and InconsistencyError when the multiplicities do not add up to n.
    """
    ctx = f.context
    entries = []
    total = 0
    for label, value in zip(f.point_labels, f.values):
        multiplicity = ctx.as_integer(value)
        if multiplicity is None or multiplicity < 0:
            raise NotFrobeniusError(
                f"f(e_{label}) = {ctx.format(value)} is not a nonnegative integer",
                {"label": label, "value": ctx.to_json(value)},
            )
        total += multiplicity
        if multiplicity:
            entries.append((label, multiplicity))
    if total != n:
        raise InconsistencyError(
            f"Multiplicities add up to {total}, expected {n}",
            {"total": total, "n": n},
        )
    return PointMultiset(None, tuple(entries), ctx)


def power_sums_to_elementary(
    p: Sequence[Any], context: Optional[ScalarContext] = None
) -> List[Scalar]:
    """
    Newton's identities: e_k = (1/k) sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i

    Returns [e_1, ..., e_n] for p = [p_1, ..., p_n].
    """
    if context is None and any(is_float_scalar(x) for x in p):
        values = list(p)
        one: Any = values[0] ** 0
    else:
        ctx = context or EXACT
        values = [ctx.coerce(x) for x in p]
        one = ctx.one
    e: List[Any] = [one]
    for k in range(1, len(values) + 1):
        total = one * 0
        for i in range(1, k + 1):
            term = e[k - i] * values[i - 1]
            total = total + term if i % 2 else total - term
        e.append(total / k)
    return e[1:]


def _monic_from_elementary(e: Sequence[Scalar], one: Scalar) -> List[Scalar]:
    """Ascending coefficients of t^n - e1 t^(n-1) + ... + (-1)^n e_n"""
    n = len(e)
    coeffs: List[Scalar] = [one * 0] * (n + 1)
    coeffs[n] = one
    for k in range(1, n + 1):
        coeffs[n - k] = e[k - 1] if k % 2 == 0 else -e[k - 1]
    return coeffs


def _residual(
    f: MomentFunctional, rebuilt: MomentFunctional
) -> Tuple[Residual, float]:
    """Max deviation over the table, and the largest moment (for scaling)"""
    ctx = f.context
    largest = max(ctx.magnitude(v) for v in f.moments.values())
    if ctx.is_exact:
        worst = Fraction(0)
        for m, v in f.moments.items():
            diff = rebuilt.moments[m] - v
            worst = max(worst, abs(diff.re), abs(diff.im))
        return worst, largest
    worst_f = 0.0
    for m, v in f.moments.items():
        worst_f = max(worst_f, ctx.magnitude(rebuilt.moments[m] - v))
    return worst_f, largest


@dataclass
class _Attempt:
    points: PointMultiset
    residual: Residual
    accepted: bool
    exact: bool
    lagrange: List[Polynomial]


def _attempt(
    f: MomentFunctional,
    n: int,
    form: SeparatingForm,
    *,
    cluster_tolerance: float,
    multiplicity_tolerance: float,
    verify_tolerance: float,
    max_steps: int,
    extra_precision: int,
) -> _Attempt:
    ctx = f.context
    psi = form.polynomial(ctx)

    power = f.unit()
    p = []
    for _ in range(n):
        power = power * psi
        p.append(f.apply(power))
    e = power_sums_to_elementary(p, ctx)
    monic = _monic_from_elementary(e, ctx.one)
    roots = roots_with_multiplicity(
        monic,
        cluster_tolerance,
        context=ctx,
        max_steps=max_steps,
        extra_precision=extra_precision,
    )

    exact = ctx.is_exact and isinstance(roots[0][0], GaussianRational)
    work = ctx if exact else ctx.to_float_context()
    fw = f if work is ctx else f.with_context(work)
    psi_w = psi if work is ctx else psi.with_context(work)

    values = [v for v, _ in roots]
    basis = univariate.lagrange_basis(values, work)
    lagrange = []
    entries = []
    for (value, root_multiplicity), basis_elem in zip(roots, basis):
        ell = univariate.compose(basis_elem, psi_w)
        lagrange.append(ell)
        weight = fw.apply(ell)
        r = work.as_integer(weight, multiplicity_tolerance)
        if r is None or r <= 0:
            raise NotFrobeniusError(
                f"Multiplicity {work.format(weight)} at psi = {work.format(value)} "
                "is not a positive integer",
                {"psi_value": work.to_json(value), "weight": work.to_json(weight)},
            )
        if r != root_multiplicity:
            raise NotFrobeniusError(
                f"Multiplicity {r} disagrees with root multiplicity {root_multiplicity}",
                {"psi_value": work.to_json(value)},
            )
        point = tuple(
            fw.apply(fw.variable(i) * ell) / r for i in range(f.num_vars)
        )
        entries.append((point, r))

    points = PointMultiset(f.num_vars, tuple(entries), work)
    rebuilt = evaluation_functional(points, f.degree_bound, work)
    residual, largest = _residual(fw, rebuilt)
    if exact:
        accepted = residual == 0
    else:
        accepted = residual <= verify_tolerance * (1.0 + largest)
    return _Attempt(points, residual, accepted, exact, lagrange)


def decompose_polynomial(
    f: MomentFunctional,
    n: int,
    *,
    seed: int = 0,
    max_retries: int = DEFAULT_MAX_RETRIES,
    cluster_tolerance: float = DEFAULT_CLUSTER_TOLERANCE,
    multiplicity_tolerance: float = DEFAULT_MULTIPLICITY_TOLERANCE,
    verify_tolerance: float = DEFAULT_VERIFY_TOLERANCE,
    max_steps: int = 200,
    extra_precision: int = 64,
) -> ReconstructionReport:
    """
    Recover the points x_j and multiplicities r_j with f = sum r_j ev_{x_j}

    Each attempt draws a separating form, recovers candidate points and
    verifies them by rebuilding the whole moment table. An attempt whose
    form identifies two distinct points fails verification and the next
    form is tried.
    """
    if n < 0:
        raise ConfigurationError(f"n must be nonnegative, got {n}")
    if f.degree_bound < n:
        raise ConfigurationError(
            f"Degree bound {f.degree_bound} is below n = {n}",
            {"degree_bound": f.degree_bound, "n": n},
        )
    ctx = f.context
    f1 = f.unit_value
    if ctx.as_integer(f1, multiplicity_tolerance) != n:
        raise NotFrobeniusError(
            f"f(1) = {ctx.format(f1)}, expected {n}", {"f1": ctx.to_json(f1), "n": n}
        )

    if n == 0:
        points = PointMultiset(f.num_vars, (), ctx)
        residual, largest = _residual(f, evaluation_functional(points, f.degree_bound, ctx))
        vanishes = residual == 0 or (
            not ctx.is_exact and residual <= verify_tolerance * (1.0 + largest)
        )
        if not vanishes:
            raise NotFrobeniusError("f(1) = 0 but f is not the zero functional")
        return ReconstructionReport(points, residual, None, 0, ctx.is_exact)

    rejected: List[SeparatingForm] = []
    best: Optional[Residual] = None
    for retry in range(max_retries):
        form = select_separating_form(rejected, seed, f.num_vars, retry=retry)
        try:
            attempt = _attempt(
                f,
                n,
                form,
                cluster_tolerance=cluster_tolerance,
                multiplicity_tolerance=multiplicity_tolerance,
                verify_tolerance=verify_tolerance,
                max_steps=max_steps,
                extra_precision=extra_precision,
            )
        except NumericalError as exc:
            logger.warning("Form %s: %s; retrying", form.coefficients, exc.message)
            rejected.append(form)
            continue

        if attempt.accepted:
            logger.debug("Accepted form %s after %d retries", form.coefficients, retry)
            return ReconstructionReport(
                points=attempt.points,
                residual=attempt.residual,
                form_used=form,
                retries=retry,
                exact=attempt.exact,
                lagrange=attempt.lagrange,
            )
        logger.warning(
            "Form %s failed verification (residual %s); retrying",
            form.coefficients,
            attempt.residual,
        )
        if best is None or attempt.residual < best:
            best = attempt.residual
        rejected.append(form)

    raise ReconstructionError(
        f"No separating form verified after {max_retries} attempts",
        best,
        {"forms": [list(form.coefficients) for form in rejected]},
    )


def _check_annihilation(f: MomentFunctional, generators: Sequence[Polynomial]) -> None:
    ctx = f.context
    largest = max(ctx.magnitude(v) for v in f.moments.values())
    for theta in generators:
        if theta.num_vars != f.num_vars:
            raise DimensionMismatchError(
                f"Generator in {theta.num_vars} variables, functional in {f.num_vars}"
            )
        theta = theta.with_context(ctx)
        if theta.degree() > f.degree_bound:
            logger.warning(
                "Generator %s exceeds degree bound %d; not checked", theta, f.degree_bound
            )
            continue
        for monomial in monomials_up_to(f.num_vars, f.degree_bound - theta.degree()):
            product = theta * Polynomial.monomial(monomial, ctx)
            value = f.apply(product)
            scale = sum(ctx.magnitude(c) for _, c in product.items()) * largest
            if not ctx.is_zero(value, scale):
                raise AnnihilationError(
                    f"f does not vanish on the ideal: f(({theta}) * u^{list(monomial)}) "
                    f"= {ctx.format(value)}",
                    {
                        "generator": str(theta),
                        "monomial": list(monomial),
                        "value": ctx.to_json(value),
                    },
                )


def quotient_weights(
    f: MomentFunctional,
    generators: Sequence[Polynomial],
    report: ReconstructionReport,
) -> List[List[Optional[Scalar]]]:
    """
    f(theta * l_j(psi)) for each generator theta and recovered point j

    For a decomposition this is r_j theta(x_j), so every entry vanishes on
    the quotient. Entries whose degree exceeds the table are None.
    """
    work = report.points.context
    fw = f if f.context == work else f.with_context(work)
    rows = []
    for theta in generators:
        theta_w = theta.with_context(work)
        row: List[Optional[Scalar]] = []
        for ell in report.lagrange:
            if theta_w.degree() + max(ell.degree(), 0) > f.degree_bound:
                row.append(None)
            else:
                row.append(fw.apply(theta_w * ell))
        rows.append(row)
    return rows


def decompose_quotient(
    f: MomentFunctional,
    ideal_generators: Sequence[Polynomial],
    n: int,
    **options: Any,
) -> ReconstructionReport:
    """
    Decompose a functional on C[u]/I, I given by ``ideal_generators``

    f must vanish on theta * mu for every generator theta and monomial mu
    within the degree bound (AnnihilationError otherwise). Every recovered
    point must satisfy every generator (InconsistencyError otherwise).
    """
    _check_annihilation(f, ideal_generators)
    report = decompose_polynomial(f, n, **options)
    work = report.points.context
    for theta in ideal_generators:
        theta_w = theta.with_context(work)
        scale = sum(work.magnitude(c) for _, c in theta_w.items())
        for point, _ in report.points.entries:
            value = theta_w.evaluate(point)
            if not work.is_zero(value, scale):
                raise InconsistencyError(
                    f"Recovered point {[work.format(x) for x in point]} is off the "
                    f"variety of {theta}",
                    {"generator": str(theta), "value": work.to_json(value)},
                )
    report.quotient_weights = quotient_weights(f, ideal_generators, report)
    return report


def decompose(
    f: Functional,
    n: int,
    ideal_generators: Optional[Sequence[Polynomial]] = None,
    **options: Any,
) -> ReconstructionReport:
    """Dispatch to the finite, polynomial or quotient decomposition"""
    if isinstance(f, FiniteFunctional):
        points = decompose_finite(f, n)
        return ReconstructionReport(points, Fraction(0), None, 0, f.context.is_exact)
    if ideal_generators:
        return decompose_quotient(f, ideal_generators, n, **options)
    return decompose_polynomial(f, n, **options)
