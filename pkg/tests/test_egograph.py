import math

import numpy as np
import pytest

from egvi.egograph import DegenerateDelta, anti_pair, build_ego_graph, to_dot
from egvi.vectorstore import EmbeddingMatrix

from .reference import linear_scan_topk


def _matrix(words, rows):
    return EmbeddingMatrix.from_arrays(words, np.array(rows, dtype=np.float64))


class TestAntiPair:
    def test_orthonormal_toy_tie_break(self):
        # delta = t - a = (1,-1,0); b and m both score cosine 0 -> smaller id
        m = _matrix(
            ["t", "a", "b", "m"],
            [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1 / math.sqrt(2), 1 / math.sqrt(2), 0]],
        )
        assert anti_pair(m, m.word_id("t"), m.word_id("a")) == m.word_id("b")

    def test_orthonormal_toy_negative_member(self):
        # with m = (0.6, 0.8, 0): delta . m < 0, so b wins outright
        m = _matrix(
            ["t", "a", "b", "m"],
            [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0.6, 0.8, 0]],
        )
        delta = m.vectors[0] - m.vectors[1]
        expect = linear_scan_topk(m.vectors, delta, 1, exclude={0, 1})[0][0]
        assert expect == m.word_id("b")
        assert anti_pair(m, 0, 1) == m.word_id("b")

    def test_identical_vectors_degenerate(self):
        m = _matrix(["x", "y", "z"], [[1, 0], [1, 0], [0, 1]])
        with pytest.raises(DegenerateDelta):
            anti_pair(m, 0, 1)

    def test_same_word_rejected(self, basis3):
        with pytest.raises(ValueError):
            anti_pair(basis3, 1, 1)


def _mutual_anti_pair_matrix():
    # ego t with two symmetric neighbors a, b that are each other's anti-pair;
    # d sits opposite so it never enters the picture
    c20, s20 = math.cos(math.radians(20)), math.sin(math.radians(20))
    return _matrix(
        ["t", "a", "b", "d"],
        [[1, 0], [c20, s20], [c20, -s20], [-1, 0]],
    )


class TestBuildEgoGraph:
    def test_mutual_anti_pairs_give_empty_edge_set(self):
        m = _mutual_anti_pair_matrix()
        # hand-check the anti-pairs with the scan oracle first
        delta_a = m.vectors[0] - m.vectors[1]
        assert linear_scan_topk(m.vectors, delta_a, 1, exclude={0, 1})[0][0] == 2
        delta_b = m.vectors[0] - m.vectors[2]
        assert linear_scan_topk(m.vectors, delta_b, 1, exclude={0, 2})[0][0] == 1

        g = build_ego_graph(m, 0, n=2, k=2)
        assert g.vertices == {1, 2}
        assert len(g.anti_edges) == 2
        assert g.edges == {}

    def test_ego_never_a_vertex(self, fixture):
        ego = fixture.matrix.word_id(fixture.ego_word)
        g = build_ego_graph(fixture.matrix, ego, 30, 30)
        assert ego not in g.vertices

    def test_fixture_anti_edges_cross_planted_clusters(self, fixture):
        m = fixture.matrix
        g = build_ego_graph(m, m.word_id(fixture.ego_word), 30, 30)
        assert g.anti_edges
        for e in g.anti_edges:
            assert fixture.labels[m.words[e.member]] != fixture.labels[m.words[e.anti]]

    def test_invariants_on_random_graphs(self):
        rng = np.random.default_rng(11)
        rows = rng.standard_normal((120, 12))
        m = EmbeddingMatrix.from_arrays([f"w{i}" for i in range(120)], rows)
        anti_free = 0
        for ego in range(15):
            n = int(rng.integers(2, 40))
            k = int(rng.integers(1, 40))
            g = build_ego_graph(m, ego, n, k)
            assert len(g.vertices) <= n
            assert len(g.anti_edges) <= n
            forbidden = g.anti_pairs_set()
            covered = {e.member for e in g.anti_edges} | {e.anti for e in g.anti_edges}
            assert g.vertices == covered
            for (a, b), w in g.edges.items():
                assert a in g.vertices and b in g.vertices
                assert (a, b) not in forbidden
                assert 0.0 <= w <= 1.0 + 1e-12
            if not g.vertices:
                anti_free += 1
        assert anti_free < 15  # at least some egos produce non-empty graphs

    def test_deterministic(self, fixture):
        m = fixture.matrix
        ego = m.word_id(fixture.ego_word)
        a = build_ego_graph(m, ego, 30, 30)
        b = build_ego_graph(m, ego, 30, 30)
        assert a.vertices == b.vertices
        assert a.edges == b.edges
        assert a.anti_edges == b.anti_edges

    def test_vertices_within_top_n(self, fixture):
        m = fixture.matrix
        ego = m.word_id(fixture.ego_word)
        g = build_ego_graph(m, ego, 30, 30)
        top = {i for i, _ in linear_scan_topk(m.vectors, m.vectors[ego], 30, {ego})}
        assert g.vertices <= top

    def test_parameter_validation(self, basis3):
        with pytest.raises(ValueError):
            build_ego_graph(basis3, 0, n=1, k=1)
        with pytest.raises(ValueError):
            build_ego_graph(basis3, 0, n=2, k=0)
        with pytest.raises(IndexError):
            build_ego_graph(basis3, 99, n=2, k=1)


def test_dot_dump(fixture):
    m = fixture.matrix
    g = build_ego_graph(m, m.word_id(fixture.ego_word), 30, 30)
    dot = to_dot(g, m)
    assert dot.startswith("graph ego {") and dot.endswith("}")
    assert "style=dashed, color=red" in dot
    some_vertex = next(iter(g.vertices))
    assert m.words[some_vertex] in dot
