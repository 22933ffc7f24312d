"""
Property tests for Phi, certificates and point recovery
"""

from fractions import Fraction
from math import comb

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import moments_of
from symprod.core.frobenius import (
    certify_frobenius,
    egf_coefficients,
    phi_diagonal_series,
    phi_partition,
)
from symprod.core.reconstruct import decompose_polynomial, power_sums_to_elementary
from symprod.polyalg import FiniteFunctional
from symprod.polyalg.scalar import GaussianRational

LABELS = ("p", "q", "r")

small = st.integers(min_value=-3, max_value=3)
values_3 = st.lists(small, min_size=3, max_size=3)
functionals = values_3.map(lambda v: FiniteFunctional(LABELS, tuple(v)))
multiplicities = st.lists(st.integers(0, 3), min_size=3, max_size=3)


def element(f, values):
    return f.element(values)


class TestPhiStructure:
    """Symmetry and multilinearity of Phi_k"""

    @settings(max_examples=40, deadline=None)
    @given(functionals, st.lists(values_3, min_size=2, max_size=4), st.randoms())
    def test_symmetric(self, f, arg_values, rnd):
        args = [element(f, v) for v in arg_values]
        shuffled = list(args)
        rnd.shuffle(shuffled)

        assert phi_partition(f, shuffled) == phi_partition(f, args)

    @settings(max_examples=40, deadline=None)
    @given(functionals, values_3, values_3, st.lists(values_3, max_size=2), small)
    def test_linear_in_each_argument(self, f, a_values, b_values, rest_values, c):
        a, b = element(f, a_values), element(f, b_values)
        rest = [element(f, v) for v in rest_values]

        combined = phi_partition(f, [c * a + b] + rest)
        separate = c * phi_partition(f, [a] + rest) + phi_partition(f, [b] + rest)
        assert combined == separate


class TestVanishing:
    """Phi_{n+1} = 0 propagates upwards and ends the diagonal series"""

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(st.integers(-1, 3), min_size=3, max_size=3),
        st.integers(0, 3),
        st.lists(values_3, min_size=5, max_size=5),
    )
    def test_vanishing_is_monotone(self, values, n, arg_values):
        f = FiniteFunctional(LABELS, tuple(values))
        args = [element(f, v) for v in arg_values[: n + 2]]

        if certify_frobenius(f, n).passed:
            assert phi_partition(f, args) == 0
            assert phi_partition(f, [f.unit()] * (n + 2)) == 0

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(-1, 3), min_size=3, max_size=3), st.integers(0, 4))
    def test_certificate_matches_indicator_series(self, values, n):
        f = FiniteFunctional(LABELS, tuple(values))

        terminates = all(
            phi_diagonal_series(f, f.indicator(x), n + 1)[n + 1] == 0 for x in LABELS
        )
        expected = terminates and f.unit_value == n
        assert certify_frobenius(f, n).passed == expected

    @settings(max_examples=40, deadline=None)
    @given(multiplicities, values_3)
    def test_point_sums_have_finite_series(self, counts, a_values):
        f = FiniteFunctional.evaluation(LABELS, dict(zip(LABELS, counts)))
        n = sum(counts)
        series = phi_diagonal_series(f, element(f, a_values), n + 3)

        assert certify_frobenius(f, n).passed
        assert series[n + 1 :] == [0, 0, 0]


class TestGeneratingFunctions:
    """EGF additivity and the Newton bridge"""

    @settings(max_examples=40, deadline=None)
    @given(values_3, values_3, values_3)
    def test_egf_of_sum_is_product(self, f_values, g_values, a_values):
        f = FiniteFunctional(LABELS, tuple(f_values))
        g = FiniteFunctional(LABELS, tuple(g_values))
        a = element(f, a_values)
        N = 4

        cf = egf_coefficients(f, a, N)
        cg = egf_coefficients(g, a, N)
        combined = egf_coefficients(f + g, a, N)

        for n in range(N + 1):
            convolution = sum(comb(n, k) * cf[k] * cg[n - k] for k in range(n + 1))
            assert combined[n] == convolution

    @settings(max_examples=40, deadline=None)
    @given(multiplicities, values_3)
    def test_power_sums_give_elementary_functions(self, counts, a_values):
        f = FiniteFunctional.evaluation(LABELS, dict(zip(LABELS, counts)))
        a = element(f, a_values)
        n = sum(counts)

        power = f.unit()
        p = []
        for _ in range(n):
            power = power * a
            p.append(f.apply(power))

        # coefficients of prod_j (1 + a(x_j) t) over the multiset
        expected = [GaussianRational(1)]
        for value, count in zip(a_values, counts):
            for _ in range(count):
                expected = [
                    (expected[k] if k < len(expected) else 0)
                    + (value * expected[k - 1] if k > 0 else 0)
                    for k in range(len(expected) + 1)
                ]
        assert power_sums_to_elementary(p) == expected[1:]


class TestRecovery:
    """Point recovery under every seed"""

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_axis_points_recovered_for_any_seed(self, seed):
        f = moments_of([((1, 0), 1), ((0, 1), 1)], 2)

        report = decompose_polynomial(f, 2, seed=seed)

        assert report.points.entries == (((0, 1), 1), ((1, 0), 1))
        assert report.form_used.coefficients[0] != report.form_used.coefficients[1]

    @settings(max_examples=25, deadline=None)
    @given(st.integers(-4, 4), st.integers(1, 4))
    def test_rational_point_recovered(self, numerator, denominator):
        x = Fraction(numerator, denominator)
        f = moments_of([((x,), 2), ((x + 1,), 1)], 3)

        report = decompose_polynomial(f, 3)

        assert report.exact
        assert report.points.multiplicity((x,)) == 2
        assert report.points.multiplicity((x + 1,)) == 1
