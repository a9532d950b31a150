"""Exhaustive solvers and the greedy baseline, for desk-scale ground truth.

Every optimality claim in this package is testable against these: canonical
enumeration of k-group partitions (lowest unused item anchors each group),
permutation enumeration for bipartite/tripartite matching, and the greedy
cheapest-group-first heuristic that exists purely to be beaten.

Enumeration is budgeted; searches use branch-and-bound pruning that only
discards branches strictly worse than the incumbent, so the returned
solution is always the lexicographically first minimum.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Iterator, Sequence

from .core import (
    EnumerationBudgetError,
    KPartition,
    KTuple,
    ScoredItem,
    SizeError,
    WeightKind,
    sort_items,
    within_scores,
)
from .multipartite import Matching, MultipartiteInstance, edge_weight

DEFAULT_BUDGET = 10_000_000

BIPARTITE_ORACLE_MAX_N = 8
TRIPARTITE_ORACLE_MAX_N = 6


def partition_count(k: int, n: int) -> int:
    """Number of distinct partitions of k*n items into n unordered k-groups."""
    return math.factorial(k * n) // (math.factorial(k) ** n * math.factorial(n))


def iter_tuple_partitions(n_items: int, k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield every partition of range(n_items) into k-sized index groups.

    Canonical form: the lowest unused index anchors each group, companions
    are combinations of the remaining indices, so each set partition appears
    exactly once, in lexicographic order.
    """
    if n_items % k != 0:
        raise SizeError(f"{n_items} items cannot be split into groups of {k}")

    def rec(unused: tuple[int, ...]):
        if not unused:
            yield ()
            return
        anchor = unused[0]
        rest = unused[1:]
        for companions in combinations(rest, k - 1):
            group = (anchor,) + companions
            chosen = set(companions)
            remaining = tuple(i for i in rest if i not in chosen)
            for tail in rec(remaining):
                yield (group,) + tail

    return rec(tuple(range(n_items)))


def brute_force_partition(
    items: Sequence[ScoredItem],
    k: int,
    weight: WeightKind,
    budget: int = DEFAULT_BUDGET,
) -> KPartition:
    """Exact minimal k-group partition by exhaustive search.

    Among equal-cost minima returns the lexicographically smallest by sorted
    group contents.  Refuses instances whose partition count exceeds the
    budget.
    """
    if len(items) % k != 0:
        raise SizeError(f"{len(items)} items cannot be split into groups of {k}")
    n = len(items) // k
    count = partition_count(k, n)
    if count > budget:
        raise EnumerationBudgetError(
            f"instance too large for oracle: {count} partitions exceeds budget {budget}"
        )
    ordered = sort_items(items)
    scores = [it.score for it in ordered]

    best_cost = None
    best_groups: tuple[tuple[int, ...], ...] | None = None

    def rec(unused: tuple[int, ...], partial: float, acc: tuple[tuple[int, ...], ...]):
        nonlocal best_cost, best_groups
        if not unused:
            if best_cost is None or partial < best_cost:
                best_cost = partial
                best_groups = acc
            return
        anchor = unused[0]
        rest = unused[1:]
        for companions in combinations(rest, k - 1):
            group = (anchor,) + companions
            cost = partial + within_scores([scores[i] for i in group], weight)
            # group costs are nonnegative, so an incumbent-matching partial
            # can at best tie, and ties never replace the first minimum
            if best_cost is not None and cost >= best_cost:
                continue
            chosen = set(companions)
            remaining = tuple(i for i in rest if i not in chosen)
            rec(remaining, cost, acc + (group,))

    rec(tuple(range(len(ordered))), 0, ())
    tuples = [KTuple(tuple(ordered[i] for i in group)) for group in best_groups]
    return KPartition(k, tuples, best_cost, weight)


def greedy_match(
    items: Sequence[ScoredItem],
    k: int,
    weight: WeightKind,
    budget: int = DEFAULT_BUDGET,
) -> KPartition:
    """Repeatedly extract the cheapest k-subset of the remaining items.

    Ties go to the lexicographically smallest member ranks.  Not optimal in
    general; kept as the falsifiable baseline.
    """
    if len(items) % k != 0:
        raise SizeError(f"{len(items)} items cannot be split into groups of {k}")
    remaining = sorted(items, key=lambda it: it.input_rank)
    tuples = []
    total = 0
    while remaining:
        step_count = math.comb(len(remaining), k)
        if step_count > budget:
            raise EnumerationBudgetError(
                f"greedy step would enumerate {step_count} subsets, over budget {budget}"
            )
        best_cost = None
        best_combo = None
        for combo in combinations(range(len(remaining)), k):
            cost = within_scores(
                sorted(remaining[i].score for i in combo), weight
            )
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_combo = combo
        group = KTuple.of(remaining[i] for i in best_combo)
        tuples.append(group)
        total += best_cost
        chosen = set(best_combo)
        remaining = [it for i, it in enumerate(remaining) if i not in chosen]
    return KPartition(k, tuples, total, weight)


def _bipartite_min_assignment(cost: list[list[float]]) -> tuple[tuple[int, ...], float]:
    n = len(cost)
    best: list = [None, None]

    def rec(i: int, used: list[bool], partial: float, perm: list[int]):
        if best[0] is not None and partial > best[0]:
            return
        if i == n:
            if best[0] is None or partial < best[0]:
                best[0] = partial
                best[1] = tuple(perm)
            return
        row = cost[i]
        for j in range(n):
            if not used[j]:
                used[j] = True
                perm.append(j)
                rec(i + 1, used, partial + row[j], perm)
                perm.pop()
                used[j] = False

    rec(0, [False] * n, 0, [])
    return best[1], best[0]


def brute_force_assignment(instance: MultipartiteInstance) -> Matching:
    """Exact minimal perfect matching by permutation enumeration.

    Bipartite instances up to n=8, tripartite up to n=6; ties broken by the
    lexicographically smallest permutation (pair of permutations for three
    parts).  Matched tuples are listed against part 0 in input order.
    """
    n = instance.n
    w = instance.weight
    parts = instance.parts
    if len(parts) == 2:
        if n > BIPARTITE_ORACLE_MAX_N:
            raise EnumerationBudgetError(
                f"bipartite oracle limited to n<={BIPARTITE_ORACLE_MAX_N}, got {n}"
            )
        xs = instance.scores(0)
        ys = instance.scores(1)
        cost = [[edge_weight(w, x, y) for y in ys] for x in xs]
        perm, total = _bipartite_min_assignment(cost)
        return Matching(tuple((i, perm[i]) for i in range(n)), total)

    if n > TRIPARTITE_ORACLE_MAX_N:
        raise EnumerationBudgetError(
            f"tripartite oracle limited to n<={TRIPARTITE_ORACLE_MAX_N}, got {n}"
        )
    xs = instance.scores(0)
    ys = instance.scores(1)
    zs = instance.scores(2)
    ab = [[edge_weight(w, x, y) for y in ys] for x in xs]
    bc = [[edge_weight(w, y, z) for z in zs] for y in ys]
    ca = [[edge_weight(w, z, x) for x in xs] for z in zs]

    best: list = [None, None, None]

    def rec_tau(i: int, sigma: tuple[int, ...], used: list[bool],
                partial: float, tau: list[int]):
        if best[0] is not None and partial > best[0]:
            return
        if i == len(sigma):
            if best[0] is None or partial < best[0]:
                best[0] = partial
                best[1] = sigma
                best[2] = tuple(tau)
            return
        b = sigma[i]
        for j in range(len(sigma)):
            if not used[j]:
                used[j] = True
                tau.append(j)
                rec_tau(i + 1, sigma, used, partial + bc[b][j] + ca[j][i], tau)
                tau.pop()
                used[j] = False

    def rec_sigma(i: int, used: list[bool], partial: float, sigma: list[int]):
        if best[0] is not None and partial > best[0]:
            return
        if i == n:
            rec_tau(0, tuple(sigma), [False] * n, partial, [])
            return
        for j in range(n):
            if not used[j]:
                used[j] = True
                sigma.append(j)
                rec_sigma(i + 1, used, partial + ab[i][j], sigma)
                sigma.pop()
                used[j] = False

    rec_sigma(0, [False] * n, 0, [])
    sigma, tau = best[1], best[2]
    return Matching(tuple((i, sigma[i], tau[i]) for i in range(n)), best[0])


__all__ = [
    "BIPARTITE_ORACLE_MAX_N",
    "DEFAULT_BUDGET",
    "TRIPARTITE_ORACLE_MAX_N",
    "brute_force_assignment",
    "brute_force_partition",
    "greedy_match",
    "iter_tuple_partitions",
    "partition_count",
]
