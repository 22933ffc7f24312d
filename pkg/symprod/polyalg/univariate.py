"""
Univariate polynomials in t over a context's ground domain

These are plain sympy ring elements of ``univariate_ring(context)``; the
helpers here move between them, coefficient lists and the multivariate
``Polynomial`` wrapper.
"""

from functools import lru_cache
from typing import Any, List, Sequence

from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from symprod.polyalg.polynomial import Polynomial
from symprod.polyalg.scalar import Scalar, ScalarContext


@lru_cache(maxsize=None)
def _ring(domain: Any) -> PolyRing:
    return PolyRing("t", domain, lex)


def univariate_ring(context: ScalarContext) -> PolyRing:
    return _ring(context.domain)


def from_coefficients(coeffs: Sequence[Any], context: ScalarContext) -> PolyElement:
    """c0 + c1*t + ... from the ascending list ``coeffs``"""
    ring = univariate_ring(context)
    return ring.from_dict({(k,): context.to_domain(c) for k, c in enumerate(coeffs)})


def coefficients(p: PolyElement, context: ScalarContext) -> List[Scalar]:
    """Ascending coefficients, up to the degree of ``p``"""
    return [context.from_domain(c) for c in reversed(p.to_dense())]


def lagrange_basis(values: Sequence[Any], context: ScalarContext) -> List[PolyElement]:
    """
    Polynomials l_j of degree len(values)-1 with l_j(v_i) = delta_ij

    ``values`` must be pairwise distinct.
    """
    ring = univariate_ring(context)
    (t,) = ring.gens
    nodes = [context.to_domain(v) for v in values]
    basis = []
    for j, vj in enumerate(nodes):
        numerator = ring.one
        denominator = ring.domain.one
        for i, vi in enumerate(nodes):
            if i != j:
                numerator = numerator * (t - vi)
                denominator = denominator * (vj - vi)
        basis.append(numerator.quo_ground(denominator))
    return basis


def compose(p: PolyElement, psi: Polynomial) -> Polynomial:
    """The multivariate polynomial p(psi) = sum_k c_k psi^k, by Horner's rule"""
    inner = psi.element
    result = inner.ring.zero
    for c in p.to_dense():
        result = result * inner + c
    return Polynomial.from_element(result, psi.context)
