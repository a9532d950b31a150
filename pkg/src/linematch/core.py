"""Domain types and within-group distance functions for score matching.

Items carry one real-valued score (age, a propensity scale, ...).  Groups of
k items are costed by the sum over all member pairs of either the absolute
difference of scores or the squared difference.  Everything here is a pure
function; integer scores stay in exact integer arithmetic throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from operator import attrgetter
from typing import Iterable, Sequence


class ValidationError(ValueError):
    """Malformed input: non-finite score, duplicate id, bad group structure."""


class SizeError(ValueError):
    """Item count incompatible with the requested group size."""


class CertifiedRangeError(ValueError):
    """Group size outside the range with machine-verified optimality."""


class ArityError(ValueError):
    """Operation needs a bipartite instance but got tripartite, or vice versa."""


class EnumerationBudgetError(RuntimeError):
    """Exhaustive enumeration would exceed the configured budget."""


class WeightKind(Enum):
    """Pairwise distance used inside a group: |x-y| or (x-y)**2."""

    ABS = "abs"
    SQ = "sq"


# Largest k for which sorted-chunk optimality has a machine-checked
# certificate (see the certify module).  Larger k needs an explicit
# uncertified/exploratory opt-in.
CERTIFIED_MAX_K = {WeightKind.ABS: 16, WeightKind.SQ: 8}


@dataclass(frozen=True, slots=True)
class ScoredItem:
    """One subject: opaque id, real score, and its 0-based input position."""

    id: str
    score: float
    input_rank: int

    def sort_key(self) -> tuple[float, int]:
        return (self.score, self.input_rank)


def items_from_pairs(pairs: Iterable[tuple[str, float]]) -> list[ScoredItem]:
    """Build ScoredItems from (id, score) pairs, ranks taken from input order.

    Rejects duplicate ids and non-finite scores.
    """
    items = []
    seen = set()
    for rank, (item_id, score) in enumerate(pairs):
        if item_id in seen:
            raise ValidationError(f"duplicate item id {item_id!r}")
        if not math.isfinite(score):
            raise ValidationError(f"non-finite score {score!r} for id {item_id!r}")
        seen.add(item_id)
        items.append(ScoredItem(item_id, score, rank))
    return items


def sort_items(items: Sequence[ScoredItem]) -> list[ScoredItem]:
    """Return items in nondecreasing score order, ties broken by input_rank.

    The tie-break makes the whole pipeline deterministic: equal scores keep
    their input order, so repeated runs produce identical groupings.
    """
    for it in items:
        if not math.isfinite(it.score):
            raise ValidationError(f"non-finite score {it.score!r} for id {it.id!r}")
    return sorted(items, key=attrgetter("score", "input_rank"))


@dataclass(frozen=True, slots=True)
class KTuple:
    """A group of k >= 2 items, members sorted by (score, input_rank).

    The constructor trusts its input for speed; use :meth:`of` to sort and
    validate arbitrary member lists.
    """

    members: tuple[ScoredItem, ...]

    @classmethod
    def of(cls, members: Iterable[ScoredItem]) -> "KTuple":
        ordered = tuple(sorted(members, key=attrgetter("score", "input_rank")))
        if len(ordered) < 2:
            raise ValidationError("a group needs at least 2 members")
        return cls(ordered)

    @property
    def k(self) -> int:
        return len(self.members)

    def scores(self) -> tuple[float, ...]:
        return tuple(m.score for m in self.members)

    def check_sorted(self) -> None:
        keys = [m.sort_key() for m in self.members]
        if len(keys) < 2:
            raise ValidationError("a group needs at least 2 members")
        if any(a > b for a, b in zip(keys, keys[1:])):
            raise ValidationError("group members are not in sorted order")


def abs_within_scores(scores: Sequence[float]) -> float:
    """Sum of |x_j - x_i| over all pairs of a nondecreasing score sequence.

    Uses the linear form sum((2*i - k - 1) * x_i, i=1..k), which equals the
    O(k^2) pairwise definition on sorted input.
    """
    k = len(scores)
    return sum((2 * i - k + 1) * x for i, x in enumerate(scores))


def sq_within_scores(scores: Sequence[float]) -> float:
    """Sum of (x_j - x_i)**2 over all pairs; order-independent."""
    total = 0
    for i in range(len(scores) - 1):
        xi = scores[i]
        for xj in scores[i + 1 :]:
            d = xj - xi
            total += d * d
    return total


def within_distance_abs(group: KTuple) -> float:
    """Within-distance of a sorted group under absolute differences."""
    return abs_within_scores(group.scores())


def within_distance_sq(group: KTuple) -> float:
    """Within-distance of a sorted group under squared differences."""
    return sq_within_scores(group.scores())


def within_scores(scores: Sequence[float], weight: WeightKind) -> float:
    """Within-distance of a nondecreasing score sequence under `weight`."""
    if weight is WeightKind.ABS:
        return abs_within_scores(scores)
    return sq_within_scores(scores)


def within_distance(group: KTuple, weight: WeightKind) -> float:
    return within_scores(group.scores(), weight)


class KPartition:
    """A cover of k*n items by n disjoint k-groups plus the total cost.

    `tuples` may be materialized lazily from the flat sorted item list when
    the partition was produced by sort-and-chunk; the observable value is
    identical either way.
    """

    __slots__ = ("k", "weight", "total_within", "_tuples", "_flat")

    def __init__(
        self,
        k: int,
        tuples: Sequence[KTuple],
        total_within: float,
        weight: WeightKind,
    ):
        self.k = k
        self.weight = weight
        self.total_within = total_within
        self._tuples = list(tuples)
        self._flat = None

    @classmethod
    def from_sorted_items(
        cls,
        k: int,
        flat_sorted: list[ScoredItem],
        total_within: float,
        weight: WeightKind,
    ) -> "KPartition":
        """Chunked view over an already-sorted item list, groups built on
        demand.  Adopts the list; the caller must not mutate it afterwards."""
        part = cls.__new__(cls)
        part.k = k
        part.weight = weight
        part.total_within = total_within
        part._tuples = None
        part._flat = flat_sorted
        return part

    @property
    def tuples(self) -> list[KTuple]:
        if self._tuples is None:
            flat, k = self._flat, self.k
            self._tuples = [
                KTuple(tuple(flat[i : i + k])) for i in range(0, len(flat), k)
            ]
        return self._tuples

    @property
    def n(self) -> int:
        if self._tuples is None:
            return len(self._flat) // self.k
        return len(self._tuples)

    def items(self) -> list[ScoredItem]:
        if self._tuples is None:
            return list(self._flat)
        return [m for t in self._tuples for m in t.members]

    def check(self, items: Sequence[ScoredItem] | None = None) -> None:
        """Validate structure: sorted groups, exact cover, consistent total."""
        for t in self.tuples:
            if t.k != self.k:
                raise ValidationError(f"group of size {t.k} in a {self.k}-partition")
            t.check_sorted()
        members = self.items()
        if items is not None:
            if sorted(m.input_rank for m in members) != sorted(
                it.input_rank for it in items
            ):
                raise ValidationError("partition does not cover the input exactly")
        elif len({m.input_rank for m in members}) != len(members):
            raise ValidationError("an item appears in more than one group")
        total = sum(within_distance(t, self.weight) for t in self.tuples)
        if isinstance(total, int) and isinstance(self.total_within, int):
            ok = total == self.total_within
        else:
            ok = math.isclose(total, self.total_within, rel_tol=1e-9, abs_tol=1e-9)
        if not ok:
            raise ValidationError(
                f"stored total {self.total_within!r} != recomputed {total!r}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KPartition):
            return NotImplemented
        return (
            self.k == other.k
            and self.weight == other.weight
            and self.tuples == other.tuples
        )

    def __repr__(self) -> str:
        return (
            f"KPartition(k={self.k}, n={self.n}, weight={self.weight.value},"
            f" total_within={self.total_within})"
        )


def variance_identity_check(values: Sequence[float]) -> tuple[float, float]:
    """Evaluate both sides of the pairwise-squares / variance identity.

    Returns (lhs, rhs) where lhs is the full double sum over ordered pairs of
    (x_j - x_i)**2 and rhs is 2*N times the sum of squared deviations from the
    mean, each computed independently.  The two agree exactly on integer
    input (rhs goes through rational arithmetic) and to ~1e-9 relative error
    on floats.
    """
    n = len(values)
    if n <= 1:
        raise ValidationError("need at least 2 values")
    lhs = 0
    for i in range(n):
        xi = values[i]
        for j in range(n):
            d = values[j] - xi
            lhs += d * d
    if all(isinstance(v, int) for v in values):
        mean = Fraction(sum(values), n)
        rhs_frac = 2 * n * sum((Fraction(v) - mean) ** 2 for v in values)
        rhs = int(rhs_frac) if rhs_frac.denominator == 1 else rhs_frac
    else:
        mean = math.fsum(values) / n
        rhs = 2 * n * math.fsum((v - mean) ** 2 for v in values)
    return lhs, rhs


def check_certified_k(k: int, weight: WeightKind, uncertified: bool = False) -> None:
    """Raise unless k is inside the machine-certified range (or overridden)."""
    if k < 2:
        raise ValidationError(f"group size must be at least 2, got {k}")
    cap = CERTIFIED_MAX_K[weight]
    if k > cap and not uncertified:
        raise CertifiedRangeError(
            f"k={k} is outside the certified optimal range for weight "
            f"'{weight.value}' (abs: k<=16, sq: k<=8); "
            "pass uncertified=True (CLI: --uncertified) to proceed anyway"
        )
