"""
Roots with multiplicity of a monic univariate polynomial

Exact mode factors the polynomial into irreducibles over Q(i) with sympy.
Linear factors give exact Gaussian-rational roots; any higher irreducible
factor has irrational roots, which are found numerically, and then the whole
result is returned in float mode. Float mode runs mpmath's simultaneous
(Durand-Kerner) iteration on the full polynomial and clusters the result.
"""

import logging
from typing import Any, List, Optional, Sequence, Tuple

import mpmath
from sympy.polys.rings import PolyElement

from symprod.polyalg import univariate
from symprod.polyalg.scalar import EXACT, Scalar, ScalarContext
from symprod.utils.errors import (
    ClusteringAmbiguityError,
    NumericalError,
    ValidationError,
)

logger = logging.getLogger(__name__)

DEFAULT_CLUSTER_TOLERANCE = 1e-8

RootList = List[Tuple[Scalar, int]]


def _numeric_roots(
    coeffs: Sequence[Scalar],
    fctx: ScalarContext,
    max_steps: int,
    extra_precision: int,
) -> List[Any]:
    mp = fctx.mp
    descending = [fctx.coerce(c) for c in reversed(list(coeffs))]
    try:
        return list(
            mp.polyroots(descending, maxsteps=max_steps, extraprec=extra_precision)
        )
    except mpmath.libmp.NoConvergence as exc:
        raise NumericalError(
            f"Root finder did not converge in {max_steps} steps",
            {
                "degree": len(descending) - 1,
                "precision": fctx.precision,
                "extra_precision": extra_precision,
                "reason": str(exc),
            },
        ) from exc


def cluster_roots(
    roots: Sequence[Any], context: ScalarContext, tolerance: float
) -> RootList:
    """
    Group numeric roots lying within ``tolerance`` of each other

    Each cluster becomes its mean with the cluster size as multiplicity.
    Clusters whose centres are closer than 3 * tolerance are ambiguous.
    """
    parent = list(range(len(roots)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= tolerance:
                parent[find(i)] = find(j)

    groups: dict = {}
    for i in range(len(roots)):
        groups.setdefault(find(i), []).append(roots[i])

    clusters: RootList = []
    for members in groups.values():
        centre = context.coerce(sum(members) / len(members))
        clusters.append((centre, len(members)))

    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            gap = context.magnitude(clusters[i][0] - clusters[j][0])
            if gap < 3 * tolerance:
                raise ClusteringAmbiguityError(
                    f"Root clusters only {gap:.3g} apart at tolerance {tolerance:g}",
                    {"gap": gap, "tolerance": tolerance},
                )
    clusters.sort(key=lambda item: context.sort_key(item[0]))
    return clusters


def _factor_roots(
    factor: PolyElement, context: ScalarContext
) -> Optional[List[Scalar]]:
    """The exact root of a linear factor; None for higher irreducibles"""
    dense = factor.to_dense()
    if len(dense) != 2:
        return None
    lead, constant = dense
    return [context.from_domain(-constant / lead)]


def roots_with_multiplicity(
    coeffs: Sequence[Any],
    tol: Optional[float] = None,
    *,
    context: ScalarContext = EXACT,
    max_steps: int = 200,
    extra_precision: int = 64,
) -> RootList:
    """
    All roots of a monic polynomial with their multiplicities

    ``coeffs`` are ascending (constant term first) and must end in 1. The
    multiplicities sum to the degree. Exact-mode results are Gaussian
    rationals whenever every root is; otherwise every root is an mpmath
    complex in a float context of the same precision.
    """
    tolerance = DEFAULT_CLUSTER_TOLERANCE if tol is None else tol
    poly = univariate.from_coefficients([context.coerce(c) for c in coeffs], context)
    ascending = univariate.coefficients(poly, context)
    degree = len(ascending) - 1
    if degree < 1:
        raise ValidationError("Root extraction needs a polynomial of degree >= 1")
    if not context.is_zero(ascending[-1] - 1):
        raise ValidationError("Root extraction expects a monic polynomial")

    if not context.is_exact:
        # Multiple roots only converge to about eps^(1/r); pay for it in
        # working precision.
        extra = extra_precision + (degree - 1) * context.precision
        numeric = _numeric_roots(ascending, context, max_steps * degree, extra)
        clusters = cluster_roots(numeric, context, tolerance)
        logger.debug("Float roots: %d clusters from degree %d", len(clusters), degree)
        return clusters

    fctx = ScalarContext.floating(
        context.precision + extra_precision, context.tolerance
    )
    exact: RootList = []
    numeric_all: List[Tuple[Any, int]] = []
    irrational = False
    _, factors = poly.factor_list()
    for factor, multiplicity in factors:
        roots = _factor_roots(factor, context)
        if roots is None:
            irrational = True
            numeric = _numeric_roots(
                univariate.coefficients(factor, context),
                fctx,
                max_steps * factor.degree(),
                extra_precision,
            )
            numeric_all.extend((r, multiplicity) for r in numeric)
        else:
            exact.extend((r, multiplicity) for r in roots)
            numeric_all.extend((fctx.coerce(r), multiplicity) for r in roots)

    if not irrational:
        exact.sort(key=lambda item: context.sort_key(item[0]))
        return exact

    logger.info("Irrational roots found; continuing in float mode")
    float_ctx = context.to_float_context()
    result = [(float_ctx.coerce(r), m) for r, m in numeric_all]
    result.sort(key=lambda item: float_ctx.sort_key(item[0]))
    return result
