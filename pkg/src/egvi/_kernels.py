"""Hot k-NN kernels: score every vocabulary row and keep the top k.

Two interchangeable backends live here. The default is a numba-jitted fused
kernel (scores and selects in one pass, parallel over queries); the fallback
is pure numpy (BLAS matmul + stable argsort). Set ``EGVI_NUMBA=0`` to force
the numpy path; it is also used automatically when numba is not importable.
Both backends implement the same contract:

    ids sorted by score descending, ties broken by ascending row id;
    excluded ids never returned; slots beyond the number of eligible rows
    are id -1 / score nan.

Scores are raw dot products against unit-normalized rows divided by the
query norm, i.e. exact cosines up to float64 rounding.
"""

import os

import numpy as np

_flag = os.environ.get("EGVI_NUMBA", "1").strip().lower()
_want_numba = _flag not in ("0", "false", "no", "off")

try:
    if _want_numba:
        from numba import njit, prange
    else:
        njit = None
except ImportError:
    njit = None

NUMBA_ENABLED = njit is not None


def topk_batch_numpy(matrix, queries, k, exclude):
    """Reference backend: full score matrix, then a stable sort per query.

    `exclude` is an int64 array of shape (n_queries, e); -1 entries are
    padding. Stable argsort on the negated scores yields exactly the
    (score desc, id asc) order because equal scores keep index order.
    """
    n = matrix.shape[0]
    k_eff = min(k, n)
    sims = queries @ matrix.T
    for q in range(exclude.shape[0]):
        for j in range(exclude.shape[1]):
            e = exclude[q, j]
            if 0 <= e < n:
                sims[q, e] = -np.inf
    order = np.argsort(-sims, axis=1, kind="stable")[:, :k_eff]
    ids = order.astype(np.int64)
    scores = np.take_along_axis(sims, order, axis=1)
    dead = ~np.isfinite(scores)
    ids[dead] = -1
    scores[dead] = np.nan
    return ids, scores


if NUMBA_ENABLED:

    @njit(cache=True)
    def _sift_down(hs, hi, size, pos):
        # min-heap where the root is the worst kept entry:
        # a is worse than b iff score lower, or equal score and id larger
        while True:
            left = 2 * pos + 1
            right = left + 1
            worst = pos
            if left < size and (
                hs[left] < hs[worst] or (hs[left] == hs[worst] and hi[left] > hi[worst])
            ):
                worst = left
            if right < size and (
                hs[right] < hs[worst] or (hs[right] == hs[worst] and hi[right] > hi[worst])
            ):
                worst = right
            if worst == pos:
                return
            hs[pos], hs[worst] = hs[worst], hs[pos]
            hi[pos], hi[worst] = hi[worst], hi[pos]
            pos = worst

    @njit(cache=True)
    def _topk_one(matrix, query, k_eff, excl, out_ids, out_scores):
        n, dim = matrix.shape
        hs = np.empty(k_eff, dtype=np.float64)
        hi = np.empty(k_eff, dtype=np.int64)
        size = 0
        for i in range(n):
            skip = False
            for j in range(excl.shape[0]):
                if excl[j] == i:
                    skip = True
            if skip:
                continue
            s = 0.0
            for d in range(dim):
                s += matrix[i, d] * query[d]
            if size < k_eff:
                # grow phase: append and sift up by swapping with parent
                hs[size] = s
                hi[size] = i
                child = size
                size += 1
                while child > 0:
                    parent = (child - 1) // 2
                    if hs[child] < hs[parent] or (
                        hs[child] == hs[parent] and hi[child] > hi[parent]
                    ):
                        hs[child], hs[parent] = hs[parent], hs[child]
                        hi[child], hi[parent] = hi[parent], hi[child]
                        child = parent
                    else:
                        break
            elif s > hs[0] or (s == hs[0] and i < hi[0]):
                hs[0] = s
                hi[0] = i
                _sift_down(hs, hi, size, 0)
        # pop everything; the heap yields worst-first, so fill back to front
        for slot in range(size - 1, -1, -1):
            out_scores[slot] = hs[0]
            out_ids[slot] = hi[0]
            hs[0] = hs[slot]
            hi[0] = hi[slot]
            _sift_down(hs, hi, slot, 0)
        for slot in range(size, k_eff):
            out_ids[slot] = -1
            out_scores[slot] = np.nan

    @njit(cache=True, parallel=True)
    def _topk_batch_numba(matrix, queries, k_eff, exclude, ids, scores):
        for q in prange(queries.shape[0]):
            _topk_one(matrix, queries[q], k_eff, exclude[q], ids[q], scores[q])

    def topk_batch_numba(matrix, queries, k, exclude):
        n = matrix.shape[0]
        k_eff = min(k, n)
        m = queries.shape[0]
        ids = np.empty((m, k_eff), dtype=np.int64)
        scores = np.empty((m, k_eff), dtype=np.float64)
        _topk_batch_numba(matrix, queries, k_eff, exclude, ids, scores)
        return ids, scores

else:
    topk_batch_numba = None


def topk_batch(matrix, queries, k, exclude=None):
    """Top-k rows of `matrix` for each query row, by dot product.

    matrix: (n, dim) float64, rows unit-normalized.
    queries: (m, dim) float64, any non-zero norm.
    exclude: optional (m, e) int64, -1 padded; excluded per query.

    Returns (ids, cosines) of shape (m, min(k, n)); cosines are the dot
    products divided by each query's norm. Short queries (fewer eligible
    rows than k) pad with id -1 / score nan.
    """
    matrix = np.ascontiguousarray(matrix, dtype=np.float64)
    queries = np.ascontiguousarray(queries, dtype=np.float64)
    if exclude is None:
        exclude = np.empty((queries.shape[0], 0), dtype=np.int64)
    else:
        exclude = np.ascontiguousarray(exclude, dtype=np.int64)
    if NUMBA_ENABLED:
        ids, scores = topk_batch_numba(matrix, queries, k, exclude)
    else:
        ids, scores = topk_batch_numpy(matrix, queries, k, exclude)
    qnorms = np.sqrt(np.einsum("md,md->m", queries, queries))
    scores /= qnorms[:, None]
    return ids, scores


def backend_name():
    return "numba" if NUMBA_ENABLED else "numpy"


def warmup():
    """Trigger JIT compilation on a tiny problem so first real use is fast."""
    m = np.eye(3, dtype=np.float64)
    q = np.ones((2, 3), dtype=np.float64)
    topk_batch(m, q, 2, np.array([[0], [-1]], dtype=np.int64))
