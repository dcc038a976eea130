"""Largest-task-component decay under people removal, and its area score.

Removing people one by one shrinks the largest connected component that
still contains a person; recording its task count after every removal gives
a decay curve. The robustness score is the trapezoidal area under that
curve, normalized so a complete bipartite graph scores exactly 1 and an
edgeless one 0. Lower scores under destructive removal orders mean the
project shatters quickly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from collections.abc import Sequence

from .graph import PersonId, ProjectGraph, require_nondegenerate

EXACT_GUARD = 8  # permutation enumeration refuses larger people sets

RemovalSequence = Sequence[PersonId]


@dataclass(frozen=True)
class DecayCurve:
    """Task counts of the largest person-containing component after
    0..n_people removals."""

    values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]


@dataclass(frozen=True)
class RobustnessResult:
    value: float
    sequence: tuple[PersonId, ...]
    curve: DecayCurve


class _UnionFind:
    """Disjoint sets over dense indices with per-root task counts."""

    __slots__ = ("parent", "rank", "task_count")

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size
        self.task_count = [0] * size

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> int:
        """Union by rank; returns the surviving root."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.task_count[ra] += self.task_count[rb]
        return ra


def _validate_sequence(graph: ProjectGraph, order: RemovalSequence) -> list[PersonId]:
    order = list(order)
    if len(order) != graph.n_people or set(order) != set(graph.people):
        raise ValueError("removal sequence must be a permutation of all people")
    return order


def decay_curve(graph: ProjectGraph, order: RemovalSequence) -> DecayCurve:
    """Decay curve for a full removal order, by reverse simulation.

    People are inserted back in reverse order into the task-only graph; a
    disjoint-set forest tracks per-component task counts. The maximum over
    components containing a person never decreases during insertion
    (components only merge and grow), so a running maximum suffices.
    """
    order = _validate_sequence(graph, order)
    task_index = {t: i for i, t in enumerate(graph.tasks)}
    n_tasks = len(task_index)
    person_index = {p: n_tasks + i for i, p in enumerate(graph.people)}
    uf = _UnionFind(n_tasks + len(person_index))
    for i in range(n_tasks):
        uf.task_count[i] = 1

    reversed_curve = [0]  # zero people inserted
    best = 0
    for p in reversed(order):
        root = person_index[p]
        for t in graph.tasks_of(p):
            root = uf.union(root, task_index[t])
        best = max(best, uf.task_count[root])
        reversed_curve.append(best)
    return DecayCurve(tuple(reversed(reversed_curve)))


def decay_curve_naive(graph: ProjectGraph, order: RemovalSequence) -> DecayCurve:
    """Reference decay curve by full recomputation after each removal."""
    order = _validate_sequence(graph, order)
    values = [graph.largest_task_component_size()]
    current = graph
    for p in order:
        current = current.remove_people([p])
        values.append(current.largest_task_component_size())
    return DecayCurve(tuple(values))


def _area_numerator(curve: DecayCurve) -> int:
    values = curve.values
    return sum(values[i - 1] + values[i] for i in range(1, len(values)))


def _normalization(graph: ProjectGraph) -> int:
    return graph.n_tasks * (2 * graph.n_people - 1)


def robustness(graph: ProjectGraph, order: RemovalSequence) -> float:
    """Normalized trapezoidal area under the decay curve, in [0, 1].

    The area sum(tau[i-1] + tau[i]) / 2 is divided by the complete-graph
    maximum n_tasks * (2 * n_people - 1) / 2; the halves cancel. A graph
    with a single person scores 1 by this normalization (its own curve is
    the theoretical maximum for one person), fragile as it is.
    """
    require_nondegenerate(graph)
    curve = decay_curve(graph, order)
    return _area_numerator(curve) / _normalization(graph)


def greedy_order(graph: ProjectGraph, adaptive: bool = False) -> list[PersonId]:
    """Most-destructive-first heuristic order: decreasing degree, ties to
    the smallest id.

    ``adaptive`` re-ranks after every removal. Removing a person never
    changes anyone else's degree in a bipartite person-task graph, so it
    provably returns the static order; it exists as an executable check of
    that equivalence.
    """
    if not adaptive:
        return sorted(graph.people, key=lambda p: (-graph.degree_of_person(p), p))
    remaining = graph.copy()
    order: list[PersonId] = []
    while remaining.n_people:
        nxt = min(
            remaining.people,
            key=lambda p: (-remaining.degree_of_person(p), p),
        )
        order.append(nxt)
        remaining = remaining.remove_people([nxt])
    return order


def bus_factor_greedy(
    graph: ProjectGraph, adaptive: bool = False
) -> RobustnessResult:
    """Upper bound on worst-case robustness via the degree-order heuristic."""
    require_nondegenerate(graph)
    order = greedy_order(graph, adaptive=adaptive)
    curve = decay_curve(graph, order)
    value = _area_numerator(curve) / _normalization(graph)
    return RobustnessResult(value=value, sequence=tuple(order), curve=curve)


def bus_factor_exact(graph: ProjectGraph) -> RobustnessResult:
    """Exhaustive minimum over all removal orders (smallest graphs only).

    All orders share the same normalization, so candidates are compared by
    integer area; ties go to the lexicographically smallest sequence.
    """
    require_nondegenerate(graph)
    if graph.n_people > EXACT_GUARD:
        raise ValueError(
            f"exact search refused: {graph.n_people} people exceeds the "
            f"{EXACT_GUARD}-person guard"
        )
    best_area: int | None = None
    best: tuple[tuple[PersonId, ...], DecayCurve] | None = None
    for order in itertools.permutations(sorted(graph.people)):
        curve = decay_curve(graph, order)
        area = _area_numerator(curve)
        if best_area is None or area < best_area:
            best_area = area
            best = (order, curve)
    assert best is not None and best_area is not None
    return RobustnessResult(
        value=best_area / _normalization(graph),
        sequence=best[0],
        curve=best[1],
    )
