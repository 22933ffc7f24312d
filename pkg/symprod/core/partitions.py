"""
Set partitions, the formal sum chi(X), and partial pairings

Index conventions: a partition lives on {0, ..., k-1}. For a disjoint union
X ⊔ Y with |X| = left and |Y| = right, X occupies 0..left-1 and Y occupies
left..left+right-1. Both sides of the pairing identity use this layout.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_partitions

from symprod.utils.errors import SizeLimitError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_PARTITION_LIMIT = 10
DEFAULT_PAIRING_LIMIT = 4

Block = Tuple[int, ...]


@dataclass(frozen=True)
class SetPartition:
    """
    A partition of {0, ..., ground_size-1} in canonical form

    Blocks are sorted internally and ordered by least element, so equality
    and hashing are structural.
    """

    ground_size: int
    blocks: Tuple[Block, ...]

    def __post_init__(self) -> None:
        if self.ground_size < 0:
            raise ValidationError(f"Invalid ground size {self.ground_size}")
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else -1))
        seen: List[int] = []
        for block in blocks:
            if not block:
                raise ValidationError("Partition blocks must be nonempty")
            seen.extend(block)
        if sorted(seen) != list(range(self.ground_size)):
            raise ValidationError(
                f"Blocks {blocks} do not partition {{0..{self.ground_size - 1}}}"
            )
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def singletons(cls, ground_size: int) -> "SetPartition":
        return cls(ground_size, tuple((i,) for i in range(ground_size)))

    @classmethod
    def single_block(cls, ground_size: int) -> "SetPartition":
        return cls(ground_size, (tuple(range(ground_size)),))

    @property
    def block_sizes(self) -> List[int]:
        return [len(b) for b in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "[" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "]"


def partition_sign(pi: SetPartition) -> int:
    """epsilon(pi): sign of any permutation whose orbits are the blocks"""
    return -1 if sum(len(b) - 1 for b in pi.blocks) % 2 else 1


def partition_weight(pi: SetPartition) -> int:
    """n(pi): number of permutations whose orbit partition is pi"""
    weight = 1
    for block in pi.blocks:
        weight *= factorial(len(block) - 1)
    return weight


def _check_limit(k: int, limit: int, what: str = "ground size") -> None:
    if k < 1:
        raise ValidationError(f"{what} must be positive, got {k}")
    if k > limit:
        raise SizeLimitError(
            f"{what} {k} exceeds the configured limit {limit}",
            {"requested": k, "limit": limit},
        )


@lru_cache(maxsize=None)
def _partitions_of(k: int) -> Tuple[SetPartition, ...]:
    return tuple(
        SetPartition(k, tuple(tuple(b) for b in blocks))
        for blocks in multiset_partitions(list(range(k)))
    )


def enumerate_set_partitions(
    k: int, *, limit: int = DEFAULT_PARTITION_LIMIT
) -> List[SetPartition]:
    """Every partition of {0..k-1} once, in canonical form (Bell(k) of them)"""
    _check_limit(k, limit)
    return list(_partitions_of(k))


def permutation_cycles(perm: Sequence[int]) -> List[List[int]]:
    """Disjoint cycles of ``perm``, each starting at its least element"""
    k = len(perm)
    seen = [False] * k
    cycles = []
    for start in range(k):
        if seen[start]:
            continue
        cycle = []
        i = start
        while not seen[i]:
            seen[i] = True
            cycle.append(i)
            i = perm[i]
        cycles.append(cycle)
    return cycles


def permutation_sign(perm: Sequence[int]) -> int:
    return -1 if sum(len(c) - 1 for c in permutation_cycles(perm)) % 2 else 1


class FormalPartitionSum:
    """
    An element of the free abelian group on partitions of a fixed set

    Coefficients are Python ints; zero coefficients are never stored.
    """

    __slots__ = ("ground_size", "_terms")

    def __init__(self, ground_size: int, terms: Optional[Dict[SetPartition, int]] = None):
        self.ground_size = ground_size
        clean: Dict[SetPartition, int] = {}
        for pi, coeff in (terms or {}).items():
            if pi.ground_size != ground_size:
                raise ValidationError(
                    f"Partition on {pi.ground_size} points in a sum on {ground_size}"
                )
            if coeff:
                clean[pi] = clean.get(pi, 0) + int(coeff)
        self._terms = {pi: c for pi, c in clean.items() if c}

    @property
    def terms(self) -> Dict[SetPartition, int]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[SetPartition, int]]:
        return iter(self._terms.items())

    def coefficient(self, pi: SetPartition) -> int:
        return self._terms.get(pi, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def _check(self, other: "FormalPartitionSum") -> None:
        if other.ground_size != self.ground_size:
            raise ValidationError(
                f"Sums on {self.ground_size} and {other.ground_size} points"
            )

    def __add__(self, other: "FormalPartitionSum") -> "FormalPartitionSum":
        self._check(other)
        terms = dict(self._terms)
        for pi, c in other._terms.items():
            terms[pi] = terms.get(pi, 0) + c
        return FormalPartitionSum(self.ground_size, terms)

    def __neg__(self) -> "FormalPartitionSum":
        return FormalPartitionSum(self.ground_size, {pi: -c for pi, c in self._terms.items()})

    def __sub__(self, other: "FormalPartitionSum") -> "FormalPartitionSum":
        return self + (-other)

    def __mul__(self, other: "FormalPartitionSum") -> "FormalPartitionSum":
        """Bilinear extension of the product partition on X ⊔ Y"""
        terms: Dict[SetPartition, int] = {}
        for p1, c1 in self._terms.items():
            for p2, c2 in other._terms.items():
                pi = product_partition(p1, p2)
                terms[pi] = terms.get(pi, 0) + c1 * c2
        return FormalPartitionSum(self.ground_size + other.ground_size, terms)

    def pullback(self, mapping: Sequence[int]) -> "FormalPartitionSum":
        """g* applied termwise, for a surjection g: {0..len-1} -> ground set"""
        terms: Dict[SetPartition, int] = {}
        for pi, c in self._terms.items():
            pulled = pullback(pi, mapping)
            terms[pulled] = terms.get(pulled, 0) + c
        return FormalPartitionSum(len(mapping), terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalPartitionSum):
            return NotImplemented
        return self.ground_size == other.ground_size and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.ground_size, frozenset(self._terms.items())))

    def first_difference(
        self, other: "FormalPartitionSum"
    ) -> Optional[Tuple[SetPartition, int, int]]:
        """First partition (canonical order) where the coefficients differ"""
        keys = sorted(set(self._terms) | set(other._terms), key=lambda p: p.blocks)
        for pi in keys:
            a, b = self.coefficient(pi), other.coefficient(pi)
            if a != b:
                return pi, a, b
        return None

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for pi in sorted(self._terms, key=lambda p: p.blocks):
            c = self._terms[pi]
            parts.append(f"{'+' if c > 0 else '-'}{abs(c)}·{pi}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"FormalPartitionSum({self.ground_size}, {self})"


def product_partition(pi1: SetPartition, pi2: SetPartition) -> SetPartition:
    """pi1 pi2 on X ⊔ Y, with Y shifted past X"""
    shift = pi1.ground_size
    blocks = list(pi1.blocks) + [tuple(i + shift for i in b) for b in pi2.blocks]
    return SetPartition(pi1.ground_size + pi2.ground_size, tuple(blocks))


def pullback(pi: SetPartition, mapping: Sequence[int]) -> SetPartition:
    """
    g*pi: preimages of the blocks of pi under the surjection ``mapping``

    Non-surjective maps are rejected.
    """
    if any(not 0 <= y < pi.ground_size for y in mapping):
        raise ValidationError(f"Mapping {list(mapping)} leaves {{0..{pi.ground_size - 1}}}")
    if set(mapping) != set(range(pi.ground_size)):
        raise ValidationError("Pullback is only defined along surjective maps")
    owner: Dict[int, int] = {}
    for index, block in enumerate(pi.blocks):
        for y in block:
            owner[y] = index
    blocks: List[List[int]] = [[] for _ in pi.blocks]
    for x, y in enumerate(mapping):
        blocks[owner[y]].append(x)
    return SetPartition(len(mapping), tuple(tuple(b) for b in blocks))


@lru_cache(maxsize=None)
def _chi(k: int) -> FormalPartitionSum:
    return FormalPartitionSum(
        k, {pi: partition_sign(pi) * partition_weight(pi) for pi in _partitions_of(k)}
    )


def chi(k: int, *, limit: int = DEFAULT_PARTITION_LIMIT) -> FormalPartitionSum:
    """chi(X) = sum over partitions pi of epsilon(pi) n(pi) pi"""
    _check_limit(k, limit)
    return _chi(k)


@dataclass(frozen=True)
class PartialPairing:
    """An injective partial map from {0..left-1} to {0..right-1}"""

    left_size: int
    right_size: int
    pairs: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.left_size < 1 or self.right_size < 1:
            raise ValidationError("Pairing sizes must be positive")
        pairs = tuple(sorted((int(x), int(y)) for x, y in self.pairs))
        xs = [x for x, _ in pairs]
        ys = [y for _, y in pairs]
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise ValidationError(f"Pairing {pairs} is not injective")
        if any(not 0 <= x < self.left_size for x in xs) or any(
            not 0 <= y < self.right_size for y in ys
        ):
            raise ValidationError(f"Pairing {pairs} leaves its sets")
        object.__setattr__(self, "pairs", pairs)

    @property
    def quotient_size(self) -> int:
        """#X + #Y - #X_phi"""
        return self.left_size + self.right_size - len(self.pairs)

    def quotient_map(self) -> List[int]:
        """
        q_phi on X ⊔ Y as a list

        X keeps its indices; a paired y goes to its partner in X; unpaired
        elements of Y are numbered left.. in increasing order.
        """
        partner = {y: x for x, y in self.pairs}
        mapping = list(range(self.left_size))
        next_index = self.left_size
        for y in range(self.right_size):
            if y in partner:
                mapping.append(partner[y])
            else:
                mapping.append(next_index)
                next_index += 1
        return mapping


def enumerate_partial_pairings(
    left_size: int, right_size: int, *, limit: int = DEFAULT_PAIRING_LIMIT
) -> List[PartialPairing]:
    """All partial pairings between X and Y, the empty one included"""
    _check_limit(left_size, limit, "left size")
    _check_limit(right_size, limit, "right size")
    pairings = []
    for size in range(min(left_size, right_size) + 1):
        for xs in combinations(range(left_size), size):
            for ys in permutations(range(right_size), size):
                pairings.append(PartialPairing(left_size, right_size, tuple(zip(xs, ys))))
    return pairings


def pairing_pullback_chi(
    phi: PartialPairing, *, limit: int = DEFAULT_PARTITION_LIMIT
) -> FormalPartitionSum:
    """q_phi^* chi(X ⊔_phi Y) on the disjoint union"""
    return chi(phi.quotient_size, limit=limit).pullback(phi.quotient_map())


@dataclass
class PairingIdentityReport:
    """Outcome of checking sum_phi q_phi^* chi(X ⊔_phi Y) = chi(X) chi(Y)"""

    left_size: int
    right_size: int
    equal: bool
    pairings: int
    lhs: FormalPartitionSum = field(repr=False)
    rhs: FormalPartitionSum = field(repr=False)
    first_difference: Optional[Tuple[SetPartition, int, int]] = None

    def to_dict(self) -> Dict[str, object]:
        diff = None
        if self.first_difference is not None:
            pi, a, b = self.first_difference
            diff = {"partition": [list(bl) for bl in pi.blocks], "lhs": a, "rhs": b}
        return {
            "left": self.left_size,
            "right": self.right_size,
            "equal": self.equal,
            "pairings": self.pairings,
            "lhs_terms": len(self.lhs),
            "rhs_terms": len(self.rhs),
            "first_difference": diff,
        }


def _sum_sums(ground_size: int, sums: Iterable[FormalPartitionSum]) -> FormalPartitionSum:
    terms: Dict[SetPartition, int] = {}
    for s in sums:
        for pi, c in s.items():
            terms[pi] = terms.get(pi, 0) + c
    return FormalPartitionSum(ground_size, terms)


def verify_pairing_identity(
    left_size: int,
    right_size: int,
    *,
    limit: int = DEFAULT_PAIRING_LIMIT,
    partition_limit: int = DEFAULT_PARTITION_LIMIT,
    threads: int = 1,
) -> PairingIdentityReport:
    """Check the partial-pairing identity on sets of the given sizes"""
    pairings = enumerate_partial_pairings(left_size, right_size, limit=limit)
    _check_limit(left_size + right_size, partition_limit, "disjoint union size")
    logger.debug(
        "Checking pairing identity for (%d, %d): %d pairings",
        left_size,
        right_size,
        len(pairings),
    )

    def pulled(phi: PartialPairing) -> FormalPartitionSum:
        return pairing_pullback_chi(phi, limit=partition_limit)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            pieces = list(pool.map(pulled, pairings))
    else:
        pieces = [pulled(phi) for phi in pairings]

    lhs = _sum_sums(left_size + right_size, pieces)
    rhs = chi(left_size, limit=partition_limit) * chi(right_size, limit=partition_limit)
    diff = lhs.first_difference(rhs)
    return PairingIdentityReport(
        left_size=left_size,
        right_size=right_size,
        equal=diff is None,
        pairings=len(pairings),
        lhs=lhs,
        rhs=rhs,
        first_difference=diff,
    )


def pairing_coefficient(m: int, n: int, l: int) -> int:
    """c(m, n, l) = (-1)^(m+n-l-1) (m+n-l-1)! l! C(m,l) C(n,l)"""
    if not 0 <= l <= min(m, n):
        return 0
    sign = -1 if (m + n - l - 1) % 2 else 1
    return sign * factorial(m + n - l - 1) * factorial(l) * comb(m, l) * comb(n, l)


def _d(m: int, n: int, l: int) -> Fraction:
    return Fraction(comb(m, l) * comb(n, l), comb(m + n - 1, l))


def coefficient_polynomial(m: int, n: int) -> List[Fraction]:
    """Ascending coefficients of P_{m,n}(t) = sum_l d(m,n,l) (-t)^l"""
    if m < 0 or n < 0 or m + n < 1:
        raise ValidationError(f"Invalid sizes ({m}, {n})")
    return [_d(m, n, l) * (-1) ** l for l in range(min(m, n) + 1)]


def coefficient_polynomial_at_one(m: int, n: int) -> Fraction:
    """P_{m,n}(1), exactly; zero whenever min(m, n) > 0"""
    if m < 1 or n < 1:
        raise ValidationError(f"Sizes must be positive, got ({m}, {n})")
    return sum(coefficient_polynomial(m, n), Fraction(0))


def predicted_coefficient(pi: SetPartition, left_size: int) -> int:
    """
    Coefficient of pi in sum_phi q_phi^* chi, from the block formula

    Each block with m elements of X and n of Y contributes sum_l c(m, n, l),
    which is (-1)^(m+n-1) (m+n-1)! P_{m,n}(1); blocks mixing X and Y therefore
    kill the coefficient.
    """
    value = 1
    for block in pi.blocks:
        m = sum(1 for i in block if i < left_size)
        n = len(block) - m
        value *= sum(pairing_coefficient(m, n, l) for l in range(min(m, n) + 1))
    return value
