"""Ego-graph construction with anti-edge filtering.

For a target word, take its N nearest neighbors, find each neighbor's
anti-pair (the word closest to ego-minus-neighbor, i.e. similar to the ego
but dissimilar to that neighbor), keep only neighbors whose anti-pair is
itself among the N neighbors, and wire the survivors with cosine-weighted
edges from their own neighbor lists -- never along an anti-edge. The
resulting graph separates into dense subgraphs, one per word sense.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .vectorstore import EmbeddingMatrix, top_k, top_k_batch


class DegenerateDelta(ValueError):
    """Ego and member have identical vectors; their difference is zero."""


@dataclass(frozen=True)
class AntiEdge:
    member: int
    anti: int


@dataclass
class EgoGraph:
    ego: int
    n_param: int
    k_param: int
    vertices: set[int]
    edges: dict[tuple[int, int], float]  # keys (a, b) with a < b
    anti_edges: list[AntiEdge] = field(default_factory=list)

    def anti_pairs_set(self) -> set[tuple[int, int]]:
        """Unordered anti-edge endpoint pairs."""
        return {(min(e.member, e.anti), max(e.member, e.anti)) for e in self.anti_edges}

    def adjacency(self) -> dict[int, list[tuple[int, float]]]:
        adj: dict[int, list[tuple[int, float]]] = {v: [] for v in self.vertices}
        for (a, b), w in self.edges.items():
            adj[a].append((b, w))
            adj[b].append((a, w))
        return adj


def anti_pair(matrix: EmbeddingMatrix, ego: int, member: int) -> int:
    """Top-1 neighbor of vector(ego) - vector(member), excluding both words.

    The search runs over the full retained vocabulary; membership filtering
    against the ego's neighbor list is the caller's business.
    """
    if ego == member:
        raise ValueError("ego and member must differ")
    delta = matrix.vectors[ego] - matrix.vectors[member]
    if not np.any(delta):
        raise DegenerateDelta(f"identical vectors for ids {ego} and {member}")
    hits = top_k(matrix, delta, 1, exclude={ego, member})
    return hits[0].word_id


def build_ego_graph(matrix: EmbeddingMatrix, ego: int, n: int, k: int) -> EgoGraph:
    """Anti-edge-filtered ego-graph for word id `ego`.

    n: neighborhood size considered for the graph; k: neighbor-list size
    used when wiring edges between surviving vertices. The graph may come
    out empty (no neighbor's anti-pair lands back in the neighborhood);
    callers handle that as a distinct outcome, not an error.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 <= ego < len(matrix):
        raise IndexError(f"ego id {ego} out of range")

    neighbors = top_k(matrix, matrix.vectors[ego], n, exclude={ego})
    neighbor_ids = [nb.word_id for nb in neighbors]
    neighbor_set = set(neighbor_ids)

    # anti-pair per neighbor, batched: delta_i = ego - w_i
    deltas = matrix.vectors[ego][None, :] - matrix.vectors[neighbor_ids]
    live = [i for i in range(len(neighbor_ids)) if np.any(deltas[i])]
    anti_edges: list[AntiEdge] = []
    vertices: set[int] = set()
    if live:
        excludes = [{ego, neighbor_ids[i]} for i in live]
        ids, _ = top_k_batch(matrix, deltas[live], 1, excludes)
        for row, i in enumerate(live):
            anti = int(ids[row, 0])
            if anti < 0 or anti not in neighbor_set:
                continue
            member = neighbor_ids[i]
            anti_edges.append(AntiEdge(member=member, anti=anti))
            vertices.add(member)
            vertices.add(anti)

    graph = EgoGraph(
        ego=ego,
        n_param=n,
        k_param=k,
        vertices=vertices,
        edges={},
        anti_edges=anti_edges,
    )
    if not vertices:
        return graph

    forbidden = graph.anti_pairs_set()
    vlist = sorted(vertices)
    ids, scores = top_k_batch(
        matrix, matrix.vectors[vlist], k, [{v} for v in vlist]
    )
    for row, v in enumerate(vlist):
        for j in range(ids.shape[1]):
            u = int(ids[row, j])
            if u < 0 or u not in vertices:
                continue
            pair = (min(v, u), max(v, u))
            if pair in forbidden or pair in graph.edges:
                continue
            graph.edges[pair] = max(float(scores[row, j]), 0.0)
    return graph


def to_dot(graph: EgoGraph, matrix: EmbeddingMatrix) -> str:
    """Graphviz dump: vertices labelled with words, anti-edges dashed red."""
    lines = ["graph ego {"]
    for v in sorted(graph.vertices):
        lines.append(f'  n{v} [label="{matrix.words[v]}"];')
    for (a, b), w in sorted(graph.edges.items()):
        lines.append(f'  n{a} -- n{b} [weight={w:.4f}];')
    for a, b in sorted(graph.anti_pairs_set()):
        lines.append(f'  n{a} -- n{b} [style=dashed, color=red];')
    lines.append("}")
    return "\n".join(lines)
