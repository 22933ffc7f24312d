"""
Unit tests for point recovery
"""

from fractions import Fraction

import pytest

from conftest import moments_of
from symprod.core import reconstruct
from symprod.core.reconstruct import (
    SeparatingForm,
    decompose,
    decompose_finite,
    decompose_polynomial,
    decompose_quotient,
    power_sums_to_elementary,
    select_separating_form,
)
from symprod.core.frobenius import phi_diagonal_series
from symprod.polyalg import FiniteFunctional, MomentFunctional, parse_polynomial
from symprod.polyalg.scalar import GaussianRational
from symprod.utils.errors import (
    AnnihilationError,
    ConfigurationError,
    InconsistencyError,
    NotFrobeniusError,
    ReconstructionError,
)


@pytest.fixture
def parabola():
    return [parse_polynomial("u1^2 - u2", 2)]


class TestDecomposeFinite:
    """Finite sets: multiplicities are values on indicators"""

    def test_values_are_multiplicities(self, finite_210):
        points = decompose_finite(finite_210, 3)

        assert points.entries == (("p", 2), ("q", 1))
        assert points.size == 3

    def test_single_evaluation(self):
        f = FiniteFunctional(("a", "b", "c"), (1, 0, 0))

        assert decompose_finite(f, 1).entries == (("a", 1),)

    def test_fractional_values(self):
        f = FiniteFunctional(("a", "b"), (Fraction(1, 2), Fraction(1, 2)))

        with pytest.raises(NotFrobeniusError):
            decompose_finite(f, 1)

    def test_negative_values(self):
        with pytest.raises(NotFrobeniusError):
            decompose_finite(FiniteFunctional(("a", "b"), (3, -1)), 2)

    def test_wrong_total(self, finite_210):
        with pytest.raises(InconsistencyError):
            decompose_finite(finite_210, 4)

    def test_dispatch(self, finite_210):
        report = decompose(finite_210, 3)

        assert report.points.entries == (("p", 2), ("q", 1))
        assert report.residual == 0
        assert report.to_dict()["points"] == [
            {"point": "p", "multiplicity": 2},
            {"point": "q", "multiplicity": 1},
        ]


class TestNewtonIdentities:
    """Power sums to elementary symmetric functions"""

    def test_two_roots(self):
        assert power_sums_to_elementary([3, 5]) == [3, 2]

    def test_all_ones(self):
        assert power_sums_to_elementary([4, 4, 4, 4]) == [4, 6, 4, 1]

    def test_zeros(self):
        assert power_sums_to_elementary([0, 0, 0]) == [0, 0, 0]

    def test_float_power_sums(self, floating):
        e = power_sums_to_elementary([floating.coerce(3), floating.coerce(5)])

        assert floating.close(e[1], floating.coerce(2))

    def test_matches_diagonal_phi(self):
        f = moments_of([((1,), 2), ((-3,), 1), ((Fraction(1, 2),), 1)], 4)
        u = f.variable(0)
        p = [f.moment((k,)) for k in range(1, 5)]
        series = phi_diagonal_series(f, u, 4)

        e = power_sums_to_elementary(p)
        factorials = [1, 2, 6, 24]
        assert e == [series[k + 1] / factorials[k] for k in range(4)]


class TestSeparatingForms:
    """Reproducible random linear forms"""

    def test_deterministic(self):
        assert select_separating_form(None, 7, 2) == select_separating_form(None, 7, 2)

    def test_range_grows_with_retries(self):
        for t in range(6):
            form = select_separating_form(None, 3, 4, retry=t)

            assert form.retry == t
            assert all(abs(c) <= t + 1 for c in form.coefficients)
            assert any(form.coefficients)

    def test_rejected_forms_are_skipped(self):
        first = select_separating_form(None, 0, 1)
        second = select_separating_form([first], 0, 1)

        assert first.coefficients != second.coefficients
        assert second.retry == 1

    def test_one_variable_is_nonzero(self):
        for seed in range(20):
            assert select_separating_form(None, seed, 1).coefficients[0] != 0

    def test_to_dict(self):
        form = SeparatingForm((1, -2), seed=5, retry=1)

        assert form.to_dict() == {"coefficients": [1, -2], "seed": 5, "retry": 1}


class TestDecomposePolynomial:
    """Recovery of points in C^m from moment tables"""

    def test_two_points(self, two_points):
        report = decompose_polynomial(two_points, 2)

        assert report.points.entries == (((1,), 1), ((2,), 1))
        assert report.residual == 0
        assert report.exact

    def test_coincident_points(self):
        report = decompose_polynomial(moments_of([((3,), 2)], 2), 2)

        assert report.points.entries == (((3,), 2),)

    def test_two_variables_with_multiplicity(self):
        f = moments_of([((1, 2), 1), ((0, -1), 1), ((1, 2), 1)], 3)

        report = decompose_polynomial(f, 3)

        assert report.points.entries == (((0, -1), 1), ((1, 2), 2))
        assert report.residual == 0

    def test_gaussian_points(self):
        i = GaussianRational(0, 1)
        f = moments_of([((1 + i, 2), 1), ((-i, Fraction(1, 3)), 2)], 3)

        report = decompose_polynomial(f, 3)

        assert report.points.multiplicity((1 + i, 2)) == 1
        assert report.points.multiplicity((-i, Fraction(1, 3))) == 2

    def test_same_points_for_every_seed(self):
        f = moments_of([((1, 2), 1), ((0, -1), 2), ((3, 3), 1)], 4)

        results = {decompose_polynomial(f, 4, seed=s).points for s in range(5)}

        assert len(results) == 1

    def test_irrational_points_use_floats(self):
        f = MomentFunctional(1, 3, {(0,): 2, (1,): 0, (2,): 4, (3,): 0})

        report = decompose_polynomial(f, 2)

        assert not report.exact
        values = sorted(float(p[0].real) for p in report.points.points)
        assert values == pytest.approx([-(2**0.5), 2**0.5])
        assert isinstance(report.to_dict()["residual"], float)

    def test_float_mode(self, floating):
        f = moments_of([((1,), 1), ((2,), 1)], 3, floating)

        report = decompose_polynomial(f, 2)

        assert not report.exact
        assert report.residual < 1e-12
        assert [m for _, m in report.points.entries] == [1, 1]

    def test_zero_functional(self):
        report = decompose_polynomial(moments_of([], 2), 0)

        assert report.points.size == 0
        assert report.residual == 0

    def test_points_with_large_denominators_stay_exact(self):
        a, b = Fraction(1, 1000003), Fraction(1, 1000033)
        f = moments_of([((a,), 1), ((b,), 1)], 2)

        report = decompose_polynomial(f, 2)

        assert report.exact
        assert report.residual == 0
        assert report.points.entries == (((b,), 1), ((a,), 1))

    def test_colliding_form_is_retried(self, monkeypatch):
        f = moments_of([((1, 0), 1), ((0, 1), 1)], 2)

        def collide_first(rejected, seed, num_vars, retry=None):
            if retry == 0:
                return SeparatingForm((1, 1), seed, 0)
            return select_separating_form(rejected, seed, num_vars, retry=retry)

        monkeypatch.setattr(reconstruct, "select_separating_form", collide_first)
        report = decompose_polynomial(f, 2)

        assert report.retries >= 1
        assert report.form_used.coefficients != (1, 1)
        assert report.points.entries == (((0, 1), 1), ((1, 0), 1))

    def test_degree_bound_below_n(self):
        with pytest.raises(ConfigurationError):
            decompose_polynomial(moments_of([((1,), 1), ((2,), 1)], 1), 2)

    def test_unit_value_must_be_n(self, two_points):
        with pytest.raises(NotFrobeniusError):
            decompose_polynomial(two_points, 3)

    def test_not_a_point_sum_exhausts_retries(self):
        f = MomentFunctional(1, 3, {(0,): 1, (1,): 2, (2,): 5, (3,): 7})

        with pytest.raises(ReconstructionError) as info:
            decompose_polynomial(f, 1, max_retries=3)

        assert info.value.best_residual == 1
        assert info.value.exit_code == 3

    def test_report_dict(self, two_points):
        data = decompose_polynomial(two_points, 2, seed=4).to_dict()

        assert data["size"] == 2
        assert data["residual"] == "0"
        assert data["form"]["seed"] == 4
        assert data["quotient_weights"] is None


class TestDecomposeQuotient:
    """Recovery on C[u]/I"""

    def test_parabola(self, parabola):
        f = moments_of([((2, 4), 1), ((-1, 1), 1)], 3)

        report = decompose_quotient(f, parabola, 2)

        assert report.points.entries == (((-1, 1), 1), ((2, 4), 1))
        assert all(w == 0 for row in report.quotient_weights for w in row)

    def test_no_generators(self, two_points):
        quotient = decompose_quotient(two_points, [], 2)
        plain = decompose_polynomial(two_points, 2)

        assert quotient.points == plain.points
        assert quotient.quotient_weights == []

    def test_point_off_the_variety(self, parabola):
        f = moments_of([((1, 3), 1)], 2)

        with pytest.raises(AnnihilationError):
            decompose_quotient(f, parabola, 1)
        with pytest.raises(AnnihilationError):
            decompose(f, 1, parabola)

    def test_generator_above_degree_bound(self, parabola):
        f = moments_of([((1, 3), 1)], 1)

        with pytest.raises(InconsistencyError):
            decompose_quotient(f, parabola, 1)
