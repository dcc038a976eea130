from collections import Counter

import numpy as np
import pytest

from busfactor.errors import DegenerateError
from busfactor.generators import GeneratorConfig, disjoint_union, generate_powerlaw
from busfactor.graph import ProjectGraph
from busfactor.optimize import (
    AnnealingConfig,
    NullModelConfig,
    anneal,
    calibrate_pvalues,
    compare_decay,
    null_sample,
    permutation_test,
)
from busfactor.robustness import bus_factor_greedy

from conftest import random_bipartite


def two_silo(seed_a=501, seed_b=502, people=30, tasks=40):
    return disjoint_union(
        generate_powerlaw(GeneratorConfig(n_people=people, n_tasks=tasks, seed=seed_a)),
        generate_powerlaw(GeneratorConfig(n_people=people, n_tasks=tasks, seed=seed_b)),
    )


SHORT_SA = AnnealingConfig(
    initial_temperature=0.05,
    cooling_rate=0.8,
    steps_per_temperature=60,
    min_temperature=1e-3,
    seed=3,
)


# -- null model ---------------------------------------------------------------


def test_k22_is_rigid(k22):
    result = null_sample(k22, NullModelConfig(n_samples=1, seed=0), 0)
    assert result.graph == k22
    assert result.swaps == 0
    assert result.attempts == 40


def test_four_edge_swap_candidates(four_edge_graph):
    # the only legal swap is (p1,t1),(p2,t3) -> (p1,t3),(p2,t1); samples are
    # therefore either the original or that one crossed variant
    variant = ProjectGraph(edges=[(1, 3), (1, 2), (2, 2), (2, 1)])
    seen = set()
    for i in range(12):
        result = null_sample(four_edge_graph, NullModelConfig(n_samples=1, seed=2), i)
        assert result.graph in (four_edge_graph, variant)
        seen.add(result.graph == variant)
    assert seen == {True, False}  # both outcomes occur across indices


def test_degree_multisets_preserved_random():
    rng = np.random.default_rng(42)
    cfg = NullModelConfig(n_samples=1, seed=9)
    for i in range(25):
        g = random_bipartite(rng, 12, 12)
        sampled = null_sample(g, cfg, i).graph
        assert Counter(g.person_degrees().values()) == Counter(
            sampled.person_degrees().values()
        )
        assert Counter(g.task_degrees().values()) == Counter(
            sampled.task_degrees().values()
        )
        # stronger: each node keeps its own degree
        assert g.person_degrees() == sampled.person_degrees()
        assert g.task_degrees() == sampled.task_degrees()


def test_null_sample_deterministic(four_edge_graph):
    cfg = NullModelConfig(n_samples=1, seed=11)
    a = null_sample(four_edge_graph, cfg, 3)
    b = null_sample(four_edge_graph, cfg, 3)
    assert a.graph == b.graph and a.swaps == b.swaps
    assert null_sample(four_edge_graph, cfg, 4).graph in (
        a.graph,
        four_edge_graph,
        ProjectGraph(edges=[(1, 3), (1, 2), (2, 2), (2, 1)]),
    )


def test_tiny_graph_returned_unchanged():
    g = ProjectGraph(edges=[(1, 1)])
    result = null_sample(g, NullModelConfig(n_samples=1, seed=0), 0)
    assert result.graph == g
    assert result.attempts == 0 and result.swaps == 0


def test_permutation_test_k22(k22):
    result = permutation_test(k22, NullModelConfig(n_samples=19, seed=5))
    assert result.p_value == 1.0
    assert result.observed == 1.0
    assert all(v == 1.0 for v in result.null_values)


def test_permutation_test_silo_is_low():
    silo = two_silo()
    result = permutation_test(silo, NullModelConfig(n_samples=99, seed=17))
    # silos are anomalously fragile: every degree-preserving rewire beats them
    assert result.observed < min(result.null_values)
    assert result.p_value == pytest.approx(1 / 100)


def test_permutation_test_workers_equivalent():
    g = generate_powerlaw(GeneratorConfig(n_people=25, n_tasks=30, seed=8))
    cfg = NullModelConfig(n_samples=24, seed=21)
    serial = permutation_test(g, cfg, workers=1)
    parallel = permutation_test(g, cfg, workers=3)
    assert serial == parallel


def test_calibration_pvalues_grid():
    g = generate_powerlaw(GeneratorConfig(n_people=20, n_tasks=25, seed=31))
    cfg = NullModelConfig(n_samples=9, seed=33)
    pvalues = calibrate_pvalues(g, cfg, trials=20)
    assert len(pvalues) == 20
    grid = {k / 10 for k in range(1, 11)}
    assert set(pvalues) <= grid
    assert calibrate_pvalues(g, cfg, trials=20, workers=2) == pvalues


# -- annealing ------------------------------------------------------------------


def test_anneal_preserves_person_degrees_and_coverage():
    silo = two_silo()
    optimized, trace = anneal(silo, SHORT_SA)
    assert optimized.person_degrees() == silo.person_degrees()
    assert min(optimized.task_degrees().values()) >= 1
    assert optimized.n_edges == silo.n_edges


def test_anneal_improves_silo():
    silo = two_silo()
    before = bus_factor_greedy(silo).value
    optimized, trace = anneal(silo, SHORT_SA)
    after = bus_factor_greedy(optimized).value
    assert after > before
    assert trace.rows, "accepted moves expected"
    assert trace.rows[-1].objective == pytest.approx(after, abs=0)


def test_anneal_trace_best_is_monotone():
    silo = two_silo(people=20, tasks=25)
    _, trace = anneal(silo, SHORT_SA)
    objectives = [row.objective for row in trace.rows]
    assert objectives == sorted(objectives)
    steps = [row.step for row in trace.rows]
    assert steps == sorted(steps)


def test_anneal_k22_noop(k22):
    optimized, trace = anneal(k22, SHORT_SA)
    assert optimized == k22
    assert trace.rows == []


def test_anneal_deterministic():
    silo = two_silo(people=15, tasks=20)
    a, _ = anneal(silo, SHORT_SA)
    b, _ = anneal(silo, SHORT_SA)
    assert a == b


def test_anneal_degenerate_inputs():
    with pytest.raises(DegenerateError):
        anneal(ProjectGraph(people=[1], tasks=[1, 2]), SHORT_SA)
    with pytest.raises(DegenerateError):
        anneal(ProjectGraph(edges=[(1, 1)]), SHORT_SA)


def test_anneal_never_abandons_tasks_midway():
    # a task with one contributor can gain edges but never lose its last one
    g = ProjectGraph(edges=[(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)])
    covered_before = {t for t in g.tasks if g.degree_of_task(t) > 0}
    optimized, _ = anneal(g, SHORT_SA)
    assert {t for t in optimized.tasks if optimized.degree_of_task(t) > 0} == covered_before


# -- paired decay ----------------------------------------------------------------


def test_compare_decay_identity(four_edge_graph):
    paired = compare_decay(four_edge_graph, four_edge_graph)
    assert paired.original.values == paired.optimized.values
    rows = list(paired.rows())
    assert rows[0] == (0, 3, 3)
    assert len(rows) == four_edge_graph.n_people + 1


def test_compare_decay_silo_improvement():
    silo = two_silo()
    optimized, _ = anneal(silo, SHORT_SA)
    paired = compare_decay(silo, optimized)
    pairs = list(zip(paired.original.values, paired.optimized.values))
    at_least = sum(1 for a, b in pairs if b >= a)
    assert at_least / len(pairs) >= 0.8


def test_compare_decay_shape_mismatch(four_edge_graph, k22):
    with pytest.raises(ValueError, match="matching"):
        compare_decay(four_edge_graph, k22)
