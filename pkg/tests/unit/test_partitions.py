"""
Unit tests for set partitions, chi and the pairing identity
"""

from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import bell

from symprod.core.partitions import (
    FormalPartitionSum,
    PartialPairing,
    SetPartition,
    chi,
    coefficient_polynomial,
    coefficient_polynomial_at_one,
    enumerate_partial_pairings,
    enumerate_set_partitions,
    pairing_coefficient,
    pairing_pullback_chi,
    partition_sign,
    partition_weight,
    permutation_cycles,
    permutation_sign,
    predicted_coefficient,
    pullback,
    verify_pairing_identity,
)
from symprod.utils.errors import SizeLimitError, ValidationError


def part(k, *blocks):
    return SetPartition(k, tuple(tuple(b) for b in blocks))


class TestSetPartition:
    """Canonical partitions"""

    def test_canonical_form(self):
        assert part(3, (2, 0), (1,)) == part(3, (1,), (0, 2))
        assert part(3, (2, 0), (1,)).blocks == ((0, 2), (1,))

    def test_rejects_non_partitions(self):
        with pytest.raises(ValidationError):
            part(3, (0, 1))
        with pytest.raises(ValidationError):
            part(2, (0, 1), (1,))

    def test_string_form(self):
        assert str(part(3, (0, 2), (1,))) == "[{0,2},{1}]"


class TestEnumeration:
    """Bell-number enumeration"""

    @pytest.mark.parametrize("k,count", [(1, 1), (3, 5), (4, 15), (5, 52)])
    def test_counts(self, k, count):
        partitions = enumerate_set_partitions(k)

        assert len(partitions) == count
        assert len(set(partitions)) == count
        assert bell(k) == count

    def test_limit(self):
        with pytest.raises(SizeLimitError):
            enumerate_set_partitions(11)
        assert len(enumerate_set_partitions(6, limit=6)) == 203

    def test_nonpositive_size(self):
        with pytest.raises(ValidationError):
            enumerate_set_partitions(0)


class TestSignsAndWeights:
    """epsilon(pi) and n(pi)"""

    def test_signs(self):
        assert partition_sign(SetPartition.singletons(3)) == 1
        assert partition_sign(SetPartition.single_block(2)) == -1
        assert partition_sign(SetPartition.single_block(3)) == 1

    def test_weights(self):
        assert partition_weight(SetPartition.singletons(3)) == 1
        assert partition_weight(SetPartition.single_block(3)) == 2
        assert partition_weight(part(4, (0, 1), (2, 3))) == 1

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_weights_count_permutations(self, k):
        assert sum(partition_weight(pi) for pi in enumerate_set_partitions(k)) == factorial(k)

    @given(st.permutations(list(range(6))))
    def test_orbit_sign_matches_permutation_sign(self, perm):
        cycles = tuple(tuple(c) for c in permutation_cycles(perm))
        orbits = SetPartition(len(perm), cycles)

        assert partition_sign(orbits) == permutation_sign(perm)


class TestChi:
    """The formal sum chi(X)"""

    def test_small_cases(self):
        assert chi(1) == FormalPartitionSum(1, {SetPartition.singletons(1): 1})
        assert chi(2) == FormalPartitionSum(
            2, {SetPartition.singletons(2): 1, SetPartition.single_block(2): -1}
        )

    def test_chi_three(self):
        c = chi(3)

        assert c.coefficient(SetPartition.singletons(3)) == 1
        assert c.coefficient(part(3, (0, 1), (2,))) == -1
        assert c.coefficient(part(3, (0, 2), (1,))) == -1
        assert c.coefficient(part(3, (0,), (1, 2))) == -1
        assert c.coefficient(SetPartition.single_block(3)) == 2
        assert len(c) == 5

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_signed_weights_cancel(self, k):
        assert sum(c for _, c in chi(k).items()) == 0

    def test_string_form(self):
        assert str(chi(2)) == "+1·[{0},{1}] -1·[{0,1}]"


class TestPairings:
    """Partial pairings and their pullbacks"""

    @pytest.mark.parametrize("left,right,count", [(1, 1, 2), (2, 2, 7), (2, 3, 13)])
    def test_counts(self, left, right, count):
        assert len(enumerate_partial_pairings(left, right)) == count
        assert count == sum(
            factorial(l) * comb(left, l) * comb(right, l)
            for l in range(min(left, right) + 1)
        )

    def test_not_injective(self):
        with pytest.raises(ValidationError):
            PartialPairing(2, 2, ((0, 0), (1, 0)))

    def test_quotient_map(self):
        phi = PartialPairing(2, 3, ((1, 2),))

        assert phi.quotient_size == 4
        assert phi.quotient_map() == [0, 1, 2, 3, 1]

    def test_full_pairing_pullback(self):
        phi = PartialPairing(1, 1, ((0, 0),))

        assert pairing_pullback_chi(phi) == FormalPartitionSum(
            2, {SetPartition.single_block(2): 1}
        )

    def test_empty_pairing_pullback(self):
        assert pairing_pullback_chi(PartialPairing(1, 1)) == chi(2)

    def test_merged_pullback(self):
        phi = PartialPairing(2, 1, ((0, 0),))

        assert pairing_pullback_chi(phi) == FormalPartitionSum(
            3, {part(3, (0, 2), (1,)): 1, SetPartition.single_block(3): -1}
        )

    def test_pullback_requires_surjection(self):
        with pytest.raises(ValidationError):
            pullback(SetPartition.singletons(3), [0, 1, 1])
        with pytest.raises(ValidationError):
            pullback(SetPartition.singletons(2), [0, 2])


class TestPairingIdentity:
    """sum over pairings of pulled-back chi equals chi(X) chi(Y)"""

    def test_one_one(self):
        report = verify_pairing_identity(1, 1)

        assert report.equal
        assert report.pairings == 2
        assert report.lhs == FormalPartitionSum(2, {SetPartition.singletons(2): 1})
        assert report.first_difference is None

    @pytest.mark.parametrize("left,right", [(1, 2), (2, 2), (3, 3)])
    def test_equal(self, left, right):
        assert verify_pairing_identity(left, right).equal

    def test_threads_give_the_same_sums(self):
        serial = verify_pairing_identity(2, 3)
        parallel = verify_pairing_identity(2, 3, threads=4)

        assert serial.lhs == parallel.lhs

    def test_report_dict(self):
        data = verify_pairing_identity(1, 2).to_dict()

        assert data["equal"] is True
        assert data["pairings"] == 3
        assert data["first_difference"] is None

    def test_pairing_limit(self):
        with pytest.raises(SizeLimitError):
            verify_pairing_identity(5, 1)

    @pytest.mark.parametrize("left,right", [(1, 1), (2, 2), (2, 3)])
    def test_predicted_coefficients(self, left, right):
        lhs = verify_pairing_identity(left, right).lhs

        for pi in enumerate_set_partitions(left + right):
            assert lhs.coefficient(pi) == predicted_coefficient(pi, left)


class TestCoefficientPolynomial:
    """P_{m,n}(t) and its vanishing at 1"""

    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (2, 2), (3, 5), (8, 8)])
    def test_vanishes_at_one(self, m, n):
        assert coefficient_polynomial_at_one(m, n) == 0
        assert sum(pairing_coefficient(m, n, l) for l in range(min(m, n) + 1)) == 0

    def test_coefficients(self):
        assert coefficient_polynomial(1, 1) == [1, -1]
        assert coefficient_polynomial(2, 2) == [1, Fraction(-4, 3), Fraction(1, 3)]

    def test_one_sided_blocks(self):
        assert coefficient_polynomial(3, 0) == [1]

    def test_rejects_empty_sides(self):
        with pytest.raises(ValidationError):
            coefficient_polynomial_at_one(0, 2)
