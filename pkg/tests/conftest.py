import itertools

import numpy as np
import pytest

from busfactor.graph import ProjectGraph


@pytest.fixture
def four_edge_graph() -> ProjectGraph:
    """p1 on {t1,t2}, p2 on {t2,t3}."""
    return ProjectGraph(edges=[(1, 1), (1, 2), (2, 2), (2, 3)])


@pytest.fixture
def k22() -> ProjectGraph:
    return ProjectGraph(edges=[(1, 1), (1, 2), (2, 1), (2, 2)])


@pytest.fixture
def star_graph() -> ProjectGraph:
    """One person covering five tasks."""
    return ProjectGraph(edges=[(1, t) for t in range(1, 6)])


@pytest.fixture
def two_stars() -> ProjectGraph:
    """p1 on {t1,t2}; p2 on {t3,t4}; disconnected."""
    return ProjectGraph(edges=[(1, 1), (1, 2), (2, 3), (2, 4)])


def random_bipartite(
    rng: np.random.Generator,
    max_people: int,
    max_tasks: int,
    edge_prob: float | None = None,
    allow_isolated: bool = True,
) -> ProjectGraph:
    """Random test graph; sizes uniform up to the caps."""
    n_p = int(rng.integers(1, max_people + 1))
    n_t = int(rng.integers(1, max_tasks + 1))
    if edge_prob is None:
        edge_prob = float(rng.uniform(0.05, 0.6))
    graph = ProjectGraph(people=range(n_p), tasks=range(n_t))
    for p in range(n_p):
        for t in range(n_t):
            if rng.random() < edge_prob:
                graph.add_edge(p, t)
    if not allow_isolated:
        for p in range(n_p):
            if graph.degree_of_person(p) == 0:
                graph.add_edge(p, int(rng.integers(n_t)))
        for t in range(n_t):
            if graph.degree_of_task(t) == 0:
                graph.add_edge(int(rng.integers(n_p)), t)
    return graph


# -- brute-force oracles, kept independent of the library's algorithms --------


def coverage_bruteforce(graph: ProjectGraph, team) -> set[int]:
    covered = set()
    for p in team:
        covered |= set(graph.tasks_of(p))
    return covered


def mrs_bruteforce(graph: ProjectGraph, target) -> set[int] | None:
    """Largest removable set keeping coverage >= target, else None."""
    people = sorted(graph.people)
    for size in range(len(people), -1, -1):
        candidates = []
        for removed in itertools.combinations(people, size):
            kept = [p for p in people if p not in removed]
            if len(coverage_bruteforce(graph, kept)) >= target:
                candidates.append(removed)
        if candidates:
            return set(min(candidates))
    return None


def mcs_bruteforce(graph: ProjectGraph, target) -> set[int]:
    """Smallest set whose removal drops coverage below target."""
    people = sorted(graph.people)
    for size in range(len(people) + 1):
        for removed in itertools.combinations(people, size):
            kept = [p for p in people if p not in removed]
            if len(coverage_bruteforce(graph, kept)) < target:
                return set(removed)
    raise AssertionError("removing everyone always drops coverage")


def z_worst_bruteforce(graph: ProjectGraph, target) -> int:
    """Largest k such that every size-k removal keeps coverage >= target."""
    people = sorted(graph.people)
    z = -1
    for k in range(len(people) + 1):
        ok = all(
            len(coverage_bruteforce(graph, [p for p in people if p not in removed]))
            >= target
            for removed in itertools.combinations(people, k)
        )
        if not ok:
            break
        z = k
    return z
