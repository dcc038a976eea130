"""Null-model testing and workload-preserving rewiring.

The null model scrambles who does what while keeping every person's and
every task's degree fixed (double-edge swaps), giving an ensemble against
which the observed robustness is scored with a lower-tail permutation
test. The annealer then searches for a better assignment outright: it
moves single edges between tasks, never changing anyone's workload and
never leaving a task uncovered, accepting downhill moves with the usual
temperature-controlled probability.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import DegenerateError
from .generators import make_rng
from .graph import ProjectGraph
from .robustness import (
    DecayCurve,
    decay_curve,
    greedy_order,
    _area_numerator,
    _normalization,
)
from .robustness import bus_factor_greedy


@dataclass(frozen=True)
class NullModelConfig:
    n_samples: int
    swaps_per_edge: int = 10
    seed: int = 0

    def validate(self) -> None:
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if self.swaps_per_edge < 1:
            raise ValueError("swaps_per_edge must be at least 1")


@dataclass(frozen=True)
class SwapResult:
    """One degree-preserving rewiring; ``swaps == 0`` means the graph was
    returned unchanged (too few edges, or rigid like a complete graph)."""

    graph: ProjectGraph
    attempts: int
    swaps: int


def null_sample(
    graph: ProjectGraph, config: NullModelConfig, sample_index: int = 0
) -> SwapResult:
    """Degree-preserving random rewiring, deterministic per (seed, index).

    Attempts ``swaps_per_edge * n_edges`` double-edge swaps: two edges
    (p1,t1), (p2,t2) are crossed to (p1,t2), (p2,t1) when all four nodes are
    distinct and neither crossed edge exists.
    """
    config.validate()
    if graph.n_edges < 2:
        return SwapResult(graph=graph.copy(), attempts=0, swaps=0)
    rng = make_rng(config.seed, sample_index)
    edges = list(graph.edges())
    edge_set = set(edges)
    m = len(edges)
    attempts = config.swaps_per_edge * m
    draws = rng.integers(0, m, size=2 * attempts).tolist()
    swaps = 0
    for k in range(attempts):
        i, j = draws[2 * k], draws[2 * k + 1]
        if i == j:
            continue
        p1, t1 = edges[i]
        p2, t2 = edges[j]
        if p1 == p2 or t1 == t2:
            continue
        new_a, new_b = (p1, t2), (p2, t1)
        if new_a in edge_set or new_b in edge_set:
            continue
        edge_set.remove((p1, t1))
        edge_set.remove((p2, t2))
        edge_set.add(new_a)
        edge_set.add(new_b)
        edges[i] = new_a
        edges[j] = new_b
        swaps += 1
    sampled = ProjectGraph(
        people=graph.people, tasks=graph.tasks, edges=edges
    )
    return SwapResult(graph=sampled, attempts=attempts, swaps=swaps)


@dataclass(frozen=True)
class PermutationTestResult:
    observed: float
    null_values: tuple[float, ...]
    p_value: float

    def to_dict(self, include_null_values: bool = False) -> dict:
        nulls = self.null_values
        mean = sum(nulls) / len(nulls)
        out = {
            "observed": self.observed,
            "p_value": self.p_value,
            "n_samples": len(nulls),
            "null_mean": mean,
            "null_std": (sum((v - mean) ** 2 for v in nulls) / len(nulls)) ** 0.5,
            "null_min": min(nulls),
            "null_max": max(nulls),
        }
        if include_null_values:
            out["null_values"] = list(nulls)
        return out


def _null_objective(args: tuple[ProjectGraph, NullModelConfig, int]) -> float:
    graph, config, index = args
    return bus_factor_greedy(null_sample(graph, config, index).graph).value


def _null_objective_chunk(
    args: tuple[ProjectGraph, NullModelConfig, int, int]
) -> list[float]:
    graph, config, start, stop = args
    return [_null_objective((graph, config, i)) for i in range(start, stop)]


def _map_jobs(fn, jobs, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]


def null_objectives(
    graph: ProjectGraph, config: NullModelConfig, indices: range, workers: int = 1
) -> list[float]:
    """Greedy robustness of null samples at the given indices, in order.

    Worker payloads are chunked so the base graph crosses process
    boundaries once per chunk; results do not depend on the worker count.
    """
    if workers > 1:
        chunk = max(1, math.ceil(len(indices) / (workers * 8)))
        jobs = [
            (graph, config, s, min(s + chunk, indices.stop))
            for s in range(indices.start, indices.stop, chunk)
        ]
        parts = _map_jobs(_null_objective_chunk, jobs, workers)
        return [v for part in parts for v in part]
    return [_null_objective((graph, config, i)) for i in indices]


def permutation_test(
    graph: ProjectGraph, config: NullModelConfig, workers: int = 1
) -> PermutationTestResult:
    """Lower-tail permutation test of the observed greedy robustness.

    p = (1 + #{null <= observed}) / (n_samples + 1); the add-one keeps p in
    (0, 1] and counts the observed value as its own null draw.
    """
    config.validate()
    observed = bus_factor_greedy(graph).value
    null_values = null_objectives(graph, config, range(config.n_samples), workers)
    below = sum(1 for v in null_values if v <= observed)
    p_value = (1 + below) / (config.n_samples + 1)
    return PermutationTestResult(
        observed=observed, null_values=tuple(null_values), p_value=p_value
    )


def _calibration_trial(args: tuple[ProjectGraph, NullModelConfig, int]) -> float:
    graph, config, trial = args
    base = trial * (config.n_samples + 1)
    observed = _null_objective((graph, config, base))
    nulls = [
        _null_objective((graph, config, base + 1 + i))
        for i in range(config.n_samples)
    ]
    below = sum(1 for v in nulls if v <= observed)
    return (1 + below) / (config.n_samples + 1)


def calibrate_pvalues(
    graph: ProjectGraph, config: NullModelConfig, trials: int, workers: int = 1
) -> list[float]:
    """p-values with the observed value itself drawn from the null.

    Under this self-calibration the p-values are uniform on the grid
    {1/(n+1), ..., 1}; each trial consumes its own block of sample indices
    so trials are independent.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    jobs = [(graph, config, j) for j in range(trials)]
    return _map_jobs(_calibration_trial, jobs, workers)


# -- simulated annealing ---------------------------------------------------------


@dataclass(frozen=True)
class AnnealingConfig:
    initial_temperature: float = 0.05
    cooling_rate: float = 0.95
    steps_per_temperature: int = 200
    min_temperature: float = 1e-4
    seed: int = 0

    def validate(self) -> None:
        if self.initial_temperature <= 0 or self.min_temperature <= 0:
            raise ValueError("temperatures must be positive")
        if not 0 < self.cooling_rate < 1:
            raise ValueError("cooling_rate must be in (0, 1)")
        if self.steps_per_temperature < 1:
            raise ValueError("steps_per_temperature must be at least 1")


@dataclass(frozen=True)
class TraceRow:
    step: int
    temperature: float
    objective: float  # best objective seen up to this accepted step


@dataclass
class AnnealingTrace:
    rows: list[TraceRow] = field(default_factory=list)


def _has_feasible_move(graph: ProjectGraph) -> bool:
    n_tasks = graph.n_tasks
    for p in graph.people:
        if graph.degree_of_person(p) >= n_tasks:
            continue
        if any(graph.degree_of_task(t) >= 2 for t in graph.tasks_of(p)):
            return True
    return False


def anneal(
    graph: ProjectGraph, config: AnnealingConfig
) -> tuple[ProjectGraph, AnnealingTrace]:
    """Rewire assignments to raise greedy robustness, workloads untouched.

    Proposal: take a random edge (p, t) and a random task the person does
    not already cover, and move the edge there. Moves off a task's last
    contributor are rejected before touching the graph, so every initially
    covered task stays covered; person degrees are invariant, which also
    pins the greedy removal order once and for all.
    """
    config.validate()
    if graph.n_edges < 1:
        raise DegenerateError("annealing needs at least one edge")
    if graph.n_tasks < 2:
        raise DegenerateError("annealing needs at least two tasks")
    if not _has_feasible_move(graph):
        return graph.copy(), AnnealingTrace()

    rng = make_rng(config.seed)
    working = graph.copy()
    order = greedy_order(working)  # person degrees never change below
    denom = _normalization(working)

    def objective_area(g: ProjectGraph) -> int:
        return _area_numerator(decay_curve(g, order))

    edges = list(working.edges())
    tasks = sorted(working.tasks)
    current_area = objective_area(working)
    best_area = current_area
    best_graph = working.copy()
    trace = AnnealingTrace()

    temperature = config.initial_temperature
    step = 0
    while temperature >= config.min_temperature:
        for _ in range(config.steps_per_temperature):
            step += 1
            i = int(rng.integers(len(edges)))
            p, t = edges[i]
            if working.degree_of_task(t) < 2:
                continue  # would abandon t; reject before mutating
            t_new = _draw_new_task(rng, working, p, tasks)
            if t_new is None:
                continue
            working.remove_edge(p, t)
            working.add_edge(p, t_new)
            candidate_area = objective_area(working)
            delta = (candidate_area - current_area) / denom
            if delta >= 0 or rng.random() < math.exp(delta / temperature):
                current_area = candidate_area
                edges[i] = (p, t_new)
                if candidate_area > best_area:
                    best_area = candidate_area
                    best_graph = working.copy()
                trace.rows.append(
                    TraceRow(
                        step=step,
                        temperature=temperature,
                        objective=best_area / denom,
                    )
                )
            else:
                working.remove_edge(p, t_new)
                working.add_edge(p, t)
        temperature *= config.cooling_rate
    return best_graph, trace


def _draw_new_task(rng, graph: ProjectGraph, person: int, tasks: list[int]):
    """Uniform task outside the person's neighborhood, or None if covered."""
    degree = graph.degree_of_person(person)
    if degree >= len(tasks):
        return None
    while True:
        t = tasks[int(rng.integers(len(tasks)))]
        if not graph.has_edge(person, t):
            return t


@dataclass(frozen=True)
class PairedDecay:
    """Greedy decay curves of a graph and a rewired counterpart."""

    original: DecayCurve
    optimized: DecayCurve

    def rows(self):
        for step, (a, b) in enumerate(zip(self.original.values, self.optimized.values)):
            yield step, a, b


def compare_decay(original: ProjectGraph, optimized: ProjectGraph) -> PairedDecay:
    """Pair the two greedy decay curves for side-by-side export."""
    if (
        original.n_people != optimized.n_people
        or original.n_tasks != optimized.n_tasks
    ):
        raise ValueError("graphs must have matching people and task counts")
    return PairedDecay(
        original=bus_factor_greedy(original).curve,
        optimized=bus_factor_greedy(optimized).curve,
    )
