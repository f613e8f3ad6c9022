"""Embedding matrix: load word2vec-text vectors, normalize, exact cosine k-NN.

The matrix is immutable after load and safe to share across threads. All
neighbor queries are exact brute force over the retained vocabulary; see
egvi._kernels for the two backend implementations.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from . import _kernels


class EmbeddingsFormatError(ValueError):
    """Malformed word2vec text input."""


class OutOfVocabulary(KeyError):
    def __init__(self, word: str):
        super().__init__(word)
        self.word = word

    def __str__(self):
        return f"word not in vocabulary: {self.word!r}"


@dataclass(frozen=True)
class Neighbor:
    word_id: int
    score: float


@dataclass
class EmbeddingMatrix:
    """Frequency-ordered vocabulary with unit-normalized float64 vectors."""

    words: list[str]
    vectors: np.ndarray
    index: dict[str, int] = field(repr=False)

    @classmethod
    def from_arrays(cls, words: list[str], vectors: np.ndarray) -> "EmbeddingMatrix":
        if len(words) != vectors.shape[0]:
            raise ValueError("words/vectors length mismatch")
        index = {}
        for i, w in enumerate(words):
            if w in index:
                raise EmbeddingsFormatError(f"duplicate word {w!r}")
            index[w] = i
        vecs = normalize_rows(np.asarray(vectors, dtype=np.float64))
        return cls(words=list(words), vectors=vecs, index=index)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def word_id(self, word: str) -> int:
        """Row id for `word`: exact match, then one lowercase retry."""
        i = self.index.get(word)
        if i is None:
            i = self.index.get(word.lower())
        if i is None:
            raise OutOfVocabulary(word)
        return i

    def row(self, word_id: int) -> np.ndarray:
        return self.vectors[word_id]


def normalize_rows(vectors: np.ndarray) -> np.ndarray:
    """Scale every row to unit L2 norm.

    Rows whose norm is already within 1e-9 of 1 are divided by exactly 1.0,
    which makes the operation bitwise idempotent.
    """
    norms = np.sqrt(np.einsum("nd,nd->n", vectors, vectors))
    if np.any(norms == 0.0):
        bad = int(np.nonzero(norms == 0.0)[0][0])
        raise ValueError(f"zero vector at row {bad}")
    norms = np.where(np.abs(norms - 1.0) < 1e-9, 1.0, norms)
    return vectors / norms[:, None]


def load_embeddings(source, limit: int) -> EmbeddingMatrix:
    """Parse word2vec text format, keeping at most `limit` rows in file order.

    File order is assumed to be frequency order (most frequent first), so
    truncation keeps the most frequent words. Accepts a path, a binary
    stream, or a text stream; UTF-8, LF or CRLF.
    """
    if limit < 1:
        raise ValueError("limit must be positive")
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8") as fh:
            return _parse_embeddings(fh, limit)
    if isinstance(source, io.TextIOBase):
        return _parse_embeddings(source, limit)
    return _parse_embeddings(io.TextIOWrapper(source, encoding="utf-8"), limit)


def _parse_embeddings(fh, limit: int) -> EmbeddingMatrix:
    header = fh.readline()
    parts = header.split()
    if len(parts) != 2:
        raise EmbeddingsFormatError(f"malformed header: {header.strip()!r}")
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise EmbeddingsFormatError(f"malformed header: {header.strip()!r}") from None
    if count < 0 or dim < 1:
        raise EmbeddingsFormatError(f"malformed header: {header.strip()!r}")

    words: list[str] = []
    index: dict[str, int] = {}
    rows = []
    for lineno, line in enumerate(fh, start=2):
        if len(words) >= limit:
            break
        line = line.rstrip("\r\n")
        if not line:
            continue
        fields = line.split(" ")
        word = fields[0]
        if len(fields) != dim + 1:
            raise EmbeddingsFormatError(
                f"line {lineno}: expected {dim} components for {word!r}, "
                f"got {len(fields) - 1}"
            )
        if word in index:
            raise EmbeddingsFormatError(f"line {lineno}: duplicate word {word!r}")
        try:
            vec = np.array(fields[1:], dtype=np.float64)
        except ValueError:
            raise EmbeddingsFormatError(f"line {lineno}: non-numeric component") from None
        if not np.any(vec):
            raise EmbeddingsFormatError(f"line {lineno}: zero vector for word {word!r}")
        index[word] = len(words)
        words.append(word)
        rows.append(vec)
    if not words:
        raise EmbeddingsFormatError("no vectors read")

    vectors = normalize_rows(np.vstack(rows))
    return EmbeddingMatrix(words=words, vectors=vectors, index=index)


def vector(matrix: EmbeddingMatrix, word: str) -> np.ndarray:
    """Stored unit vector for `word` (exact match, lowercase fallback)."""
    return matrix.vectors[matrix.word_id(word)]


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = np.sqrt(np.dot(a, a))
    nb = np.sqrt(np.dot(b, b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine of a zero vector is undefined")
    return float(np.dot(a, b) / (na * nb))


def top_k(
    matrix: EmbeddingMatrix,
    query: np.ndarray,
    k: int,
    exclude: set[int] | frozenset[int] = frozenset(),
) -> list[Neighbor]:
    """Exact top-k cosine neighbors of `query` over the whole vocabulary.

    Returns exactly min(k, |vocab| - |exclude|) neighbors, sorted by score
    descending with ties broken by ascending word id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    query = np.asarray(query, dtype=np.float64)
    if not np.any(query):
        raise ValueError("zero query vector")
    ids, scores = top_k_batch(matrix, query[None, :], k, [exclude])
    return [Neighbor(int(i), float(s)) for i, s in zip(ids[0], scores[0]) if i >= 0]


def top_k_batch(matrix, queries: np.ndarray, k: int, excludes) -> tuple[np.ndarray, np.ndarray]:
    """Batched top_k: one query per row, one exclude set per query.

    Rectangular output (m, min(k, n)); slots past the number of eligible
    rows hold id -1 / score nan.
    """
    m = queries.shape[0]
    width = max((len(e) for e in excludes), default=0)
    excl = np.full((m, max(width, 1)), -1, dtype=np.int64)
    for q, ids in enumerate(excludes):
        for j, e in enumerate(sorted(ids)):
            excl[q, j] = e
    return _kernels.topk_batch(matrix.vectors, queries, k, excl)
