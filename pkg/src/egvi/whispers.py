"""Chinese Whispers: bottom-up label propagation on a weighted graph.

Randomized only through the visit order, which is drawn from a seeded
generator, so a fixed (graph, seed, max_iter) always yields the same
clustering. The number of clusters is discovered, not prescribed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Clustering:
    clusters: list[set[int]]
    iterations_run: int
    converged: bool


def chinese_whispers(
    nodes,
    edges,
    seed: int = 0,
    max_iter: int = 20,
) -> Clustering:
    """Cluster an undirected weighted graph by iterated label adoption.

    nodes: iterable of hashable node ids.
    edges: mapping {(a, b): weight >= 0}; direction is ignored.

    Every node starts with its own label. Each iteration visits all nodes
    in a fresh seeded-shuffle order; a node adopts the label with the
    largest total weight among its incident edges (current labels, updated
    in place as the pass proceeds). Ties go to the smallest label id and
    isolated nodes keep theirs. Stops on the first pass with no change.
    """
    node_list = sorted(nodes)
    if not node_list:
        return Clustering(clusters=[], iterations_run=0, converged=True)

    adj: dict[int, list[tuple[int, float]]] = {v: [] for v in node_list}
    for (a, b), w in edges.items():
        if w < 0:
            raise ValueError(f"negative edge weight on ({a}, {b})")
        if a == b:
            continue
        adj[a].append((b, w))
        adj[b].append((a, w))

    label = {v: v for v in node_list}
    rng = np.random.default_rng(seed)
    iterations = 0
    converged = False
    while iterations < max_iter:
        iterations += 1
        changed = False
        for idx in rng.permutation(len(node_list)):
            v = node_list[idx]
            totals: dict[int, float] = {}
            for u, w in adj[v]:
                lab = label[u]
                totals[lab] = totals.get(lab, 0.0) + w
            if not totals:
                continue
            best = min(totals, key=lambda lab: (-totals[lab], lab))
            if best != label[v]:
                label[v] = best
                changed = True
        if not changed:
            converged = True
            break

    groups: dict[int, set[int]] = {}
    for v in node_list:
        groups.setdefault(label[v], set()).add(v)
    clusters = sorted(groups.values(), key=lambda c: (-len(c), min(c)))
    return Clustering(clusters=clusters, iterations_run=iterations, converged=converged)
