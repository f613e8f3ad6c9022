import itertools
import random

import numpy as np
import pytest

from egvi.whispers import chinese_whispers

from .reference import chinese_whispers_ref


def _clique(nodes, weight=1.0):
    return {(a, b): weight for a, b in itertools.combinations(nodes, 2)}


def _random_graph(seed, n_max=12, p=0.4):
    rng = random.Random(seed)
    n = rng.randint(0, n_max)
    nodes = list(range(n))
    edges = {}
    for a, b in itertools.combinations(nodes, 2):
        if rng.random() < p:
            edges[(a, b)] = rng.uniform(0.01, 2.0)
    return nodes, edges


def test_single_vertex():
    result = chinese_whispers([7], {}, seed=0)
    assert result.clusters == [{7}]
    assert result.converged


def test_empty_graph():
    result = chinese_whispers([], {}, seed=0)
    assert result.clusters == []
    assert result.converged


def test_path_merges_to_one_cluster():
    nodes = [0, 1, 2]
    edges = {(0, 1): 1.0, (1, 2): 1.0}
    result = chinese_whispers(nodes, edges, seed=0)
    assert result.clusters == [{0, 1, 2}]


def test_path_against_visit_order_oracle():
    # replay the exact seeded visit orders through the reference version
    nodes = [0, 1, 2]
    edges = {(0, 1): 1.0, (1, 2): 1.0}
    rng = np.random.default_rng(0)
    orders = [[nodes[i] for i in rng.permutation(3)] for _ in range(20)]
    assert chinese_whispers_ref(nodes, edges, orders) == [{0, 1, 2}]


def test_two_cliques_with_weak_bridge():
    edges = _clique(range(5)) | _clique(range(5, 10))
    edges[(4, 5)] = 0.1
    hits = 0
    for seed in range(100):
        result = chinese_whispers(list(range(10)), edges, seed=seed)
        if sorted(result.clusters, key=min) == [set(range(5)), set(range(5, 10))]:
            hits += 1
    assert hits >= 95


def test_no_edges_all_singletons():
    result = chinese_whispers(range(6), {}, seed=1)
    assert len(result.clusters) == 6
    assert result.converged and result.iterations_run == 1


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        chinese_whispers([0, 1], {(0, 1): -0.5}, seed=0)


@pytest.mark.parametrize("seed", range(30))
def test_partition_property(seed):
    nodes, edges = _random_graph(seed)
    result = chinese_whispers(nodes, edges, seed=seed * 13 + 1)
    seen = set()
    for cluster in result.clusters:
        assert cluster
        assert not (cluster & seen)
        seen |= cluster
    assert seen == set(nodes)


def test_deterministic_for_fixed_seed():
    nodes, edges = _random_graph(5, n_max=30)
    runs = [chinese_whispers(nodes, edges, seed=123) for _ in range(5)]
    for other in runs[1:]:
        assert other.clusters == runs[0].clusters
        assert other.iterations_run == runs[0].iterations_run


def test_matches_oracle_with_replayed_orders():
    # generic graph: implementation == reference fed the same visit orders
    for seed in range(10):
        nodes, edges = _random_graph(seed + 100)
        got = chinese_whispers(nodes, edges, seed=seed, max_iter=20)
        rng = np.random.default_rng(seed)
        node_list = sorted(nodes)
        orders = [
            [node_list[i] for i in rng.permutation(len(node_list))]
            for _ in range(20)
        ]
        assert got.clusters == chinese_whispers_ref(nodes, edges, orders)


def test_representation_independence_small_graphs():
    # no-tie random weights; relabeling nodes + visit orders permutes output
    rng = random.Random(7)
    for _ in range(5):
        n = rng.randint(2, 5)
        nodes = list(range(n))
        edges = {}
        for a, b in itertools.combinations(nodes, 2):
            if rng.random() < 0.6:
                edges[(a, b)] = rng.uniform(0.1, 1.0) + rng.random() * 1e-6
        perm = list(range(n))
        rng.shuffle(perm)
        p_edges = {(min(perm[a], perm[b]), max(perm[a], perm[b])): w
                   for (a, b), w in edges.items()}
        for order in itertools.permutations(nodes):
            base = chinese_whispers_ref(nodes, edges, [list(order)] * 10)
            p_order = [perm[v] for v in order]
            permuted = chinese_whispers_ref(nodes, p_edges, [p_order] * 10)
            expect = sorted(
                ({perm[v] for v in cluster} for cluster in base),
                key=lambda c: (-len(c), min(c)),
            )
            assert permuted == expect
