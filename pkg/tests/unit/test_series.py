"""
Unit tests for truncated power series
"""

from fractions import Fraction

import pytest

from symprod.polyalg import EXACT, FormalPowerSeries
from symprod.utils.errors import ValidationError


class TestFormalPowerSeries:
    """Truncated series arithmetic"""

    def test_padding_and_truncation(self):
        s = FormalPowerSeries([1, 2, 3, 4], 2, EXACT)

        assert s.coefficients == [1, 2, 3]
        assert FormalPowerSeries([1], 3, EXACT).coefficients == [1, 0, 0, 0]

    def test_product(self):
        s = FormalPowerSeries([1, 1], 3, EXACT)

        assert (s * s).coefficients == [1, 2, 1, 0]
        assert (s * 3).coefficients == [3, 3, 0, 0]

    def test_exp_of_t(self):
        e = FormalPowerSeries([0, 1], 4, EXACT).exp()

        assert e.coefficients == [1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]
        assert e.egf_values() == [1, 1, 1, 1, 1]

    def test_exp_is_a_homomorphism(self):
        a = FormalPowerSeries([0, 2, -1], 5, EXACT)
        b = FormalPowerSeries([0, Fraction(1, 3), 0, 4], 5, EXACT)

        assert ((a + b).exp()).coefficients == (a.exp() * b.exp()).coefficients

    def test_exp_needs_zero_constant_term(self):
        with pytest.raises(ValidationError) as exc:
            FormalPowerSeries([1, 1], 2, EXACT).exp()

        assert exc.value.exit_code == 2
        assert exc.value.details == {"constant_term": {"re": "1", "im": "0"}}

    def test_negative_order_rejected(self):
        with pytest.raises(ValidationError):
            FormalPowerSeries([1], -1, EXACT)

    def test_index_beyond_order(self):
        with pytest.raises(IndexError):
            FormalPowerSeries([0, 1], 1, EXACT)[2]

    def test_float_exp(self, floating):
        e = FormalPowerSeries([0, 1], 6, floating).exp()

        assert floating.close(e[6], floating.coerce(Fraction(1, 720)))
