"""
Unit tests for root extraction with multiplicities
"""

from fractions import Fraction

import pytest

from symprod.core.roots import cluster_roots, roots_with_multiplicity
from symprod.polyalg.scalar import GaussianRational
from symprod.utils.errors import ClusteringAmbiguityError, ValidationError


class TestExactRoots:
    """Exact mode: factoring over Q(i)"""

    def test_distinct_roots(self):
        assert roots_with_multiplicity([2, -3, 1]) == [(1, 1), (2, 1)]

    def test_double_root(self):
        assert roots_with_multiplicity([9, -6, 1]) == [(3, 2)]

    def test_negative_and_zero_roots(self):
        assert roots_with_multiplicity([0, -1, 0, 1]) == [(-1, 1), (0, 1), (1, 1)]

    def test_rational_and_gaussian_roots(self):
        # (t - 1/2)^2 (t^2 + 1)
        roots = roots_with_multiplicity(
            [Fraction(1, 4), -1, Fraction(5, 4), -1, 1]
        )

        assert roots == [
            (GaussianRational(0, -1), 1),
            (GaussianRational(0, 1), 1),
            (GaussianRational(Fraction(1, 2)), 2),
        ]
        assert all(isinstance(r, GaussianRational) for r, _ in roots)

    def test_multiplicities_sum_to_degree(self):
        roots = roots_with_multiplicity([-8, 12, -6, 1])

        assert roots == [(2, 3)]
        assert sum(m for _, m in roots) == 3

    def test_irrational_roots_fall_back_to_floats(self):
        roots = roots_with_multiplicity([-2, 0, 1])

        assert [m for _, m in roots] == [1, 1]
        assert not any(isinstance(r, GaussianRational) for r, _ in roots)
        assert abs(float(roots[1][0].real) - 2**0.5) < 1e-12

    def test_roots_with_large_denominators_stay_exact(self):
        a, b = Fraction(1, 1000003), Fraction(1, 1000033)
        roots = roots_with_multiplicity([a * b, -(a + b), 1])

        assert roots == [(GaussianRational(b), 1), (GaussianRational(a), 1)]

    def test_gaussian_root_with_large_denominator(self):
        z = GaussianRational(1, Fraction(1, 7000001))
        # (t - z)^2
        roots = roots_with_multiplicity([z * z, -2 * z, 1])

        assert roots == [(z, 2)]

    def test_mixed_rational_and_irrational_factors(self):
        # (t - 1)^2 (t^2 - 2)
        roots = roots_with_multiplicity([-2, 4, -1, -2, 1])

        assert sorted(m for _, m in roots) == [1, 1, 2]
        assert not any(isinstance(r, GaussianRational) for r, _ in roots)
        double = [r for r, m in roots if m == 2]
        assert abs(float(double[0].real) - 1.0) < 1e-15

    def test_rejects_non_monic(self):
        with pytest.raises(ValidationError):
            roots_with_multiplicity([1, 2])

    def test_rejects_constants(self):
        with pytest.raises(ValidationError):
            roots_with_multiplicity([1])


class TestFloatRoots:
    """Float mode: simultaneous iteration plus clustering"""

    def test_distinct_roots(self, floating):
        roots = roots_with_multiplicity([2, -3, 1], context=floating)

        assert [m for _, m in roots] == [1, 1]
        assert floating.close(roots[0][0], floating.coerce(1), 1e10)
        assert floating.close(roots[1][0], floating.coerce(2), 1e10)

    def test_double_root_clusters(self, floating):
        roots = roots_with_multiplicity([9, -6, 1], context=floating)

        assert len(roots) == 1
        assert roots[0][1] == 2
        assert abs(float(roots[0][0].real) - 3.0) < 1e-9

    def test_ambiguous_clusters(self, floating):
        mp = floating.mp
        roots = [mp.mpc(0), mp.mpc(mp.mpf("2.5e-8"))]

        with pytest.raises(ClusteringAmbiguityError):
            cluster_roots(roots, floating, 1e-8)

    def test_clusters_merge_within_tolerance(self, floating):
        mp = floating.mp
        roots = [mp.mpc(1), mp.mpc(mp.mpf(1) + mp.mpf("1e-12")), mp.mpc(5)]

        clusters = cluster_roots(roots, floating, 1e-8)

        assert [m for _, m in clusters] == [2, 1]
