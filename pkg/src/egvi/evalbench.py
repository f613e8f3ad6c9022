"""Word-similarity evaluation, inventory statistics, synthetic fixtures."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .disambig import relatedness
from .inventory import SenseInventory
from .vectorstore import EmbeddingMatrix, OutOfVocabulary, cosine, vector


class BenchmarkFormatError(ValueError):
    pass


class DegenerateVariance(ValueError):
    """Correlation is undefined: fewer than two pairs or zero variance."""


@dataclass
class Benchmark:
    name: str
    pairs: list[tuple[str, str, float]]


@dataclass
class EvalReport:
    benchmark: str
    pearson: float
    spearman: float
    n_pairs_used: int
    coverage: float

    def to_dict(self) -> dict:
        return {
            "benchmark": self.benchmark,
            "pearson": self.pearson,
            "spearman": self.spearman,
            "n_pairs_used": self.n_pairs_used,
            "coverage": self.coverage,
        }


def load_benchmark(source, name: str = "benchmark") -> Benchmark:
    """Parse "word1<TAB>word2<TAB>score" rows; '#' lines are comments."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8") as fh:
            return _read_benchmark(fh, name)
    if isinstance(source, io.TextIOBase):
        return _read_benchmark(source, name)
    return _read_benchmark(io.TextIOWrapper(source, encoding="utf-8"), name)


def _read_benchmark(fh, name: str) -> Benchmark:
    pairs = []
    for lineno, line in enumerate(fh, start=1):
        line = line.rstrip("\r\n")
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise BenchmarkFormatError(f"line {lineno}: expected 3 columns")
        try:
            gold = float(parts[2])
        except ValueError:
            raise BenchmarkFormatError(f"line {lineno}: bad score {parts[2]!r}") from None
        if not np.isfinite(gold):
            raise BenchmarkFormatError(f"line {lineno}: non-finite score")
        pairs.append((parts[0], parts[1], gold))
    if not pairs:
        raise BenchmarkFormatError("benchmark has no pairs")
    return Benchmark(name=name, pairs=pairs)


def pearson(xs, ys) -> float:
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.size < 2:
        raise DegenerateVariance("need at least two paired values")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    vx = float(np.dot(dx, dx))
    vy = float(np.dot(dy, dy))
    if vx == 0.0 or vy == 0.0:
        raise DegenerateVariance("zero variance")
    return float(np.dot(dx, dy) / np.sqrt(vx * vy))


def _ranks(values: np.ndarray) -> np.ndarray:
    # average ranks for ties, 1-based
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs, ys) -> float:
    """Pearson over average ranks; reported alongside raw-score Pearson."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    return pearson(_ranks(xs), _ranks(ys))


def evaluate_similarity(
    matrix: EmbeddingMatrix,
    inventory: SenseInventory | None,
    benchmark: Benchmark,
) -> EvalReport:
    """Correlate predicted relatedness with gold scores.

    With an inventory, pairs are scored by max sense-vector similarity; in
    baseline mode (inventory None or "baseline") by plain word-vector
    cosine. Pairs with a word that cannot be resolved are dropped and
    reflected in coverage.
    """
    if isinstance(inventory, str):
        if inventory != "baseline":
            raise ValueError(f"unknown evaluation mode {inventory!r}")
        inventory = None
    golds, preds = [], []
    for w1, w2, gold in benchmark.pairs:
        try:
            if inventory is None:
                score = cosine(vector(matrix, w1), vector(matrix, w2))
            else:
                score = relatedness(matrix, inventory, w1, w2)
        except OutOfVocabulary:
            continue
        golds.append(gold)
        preds.append(score)
    if not golds:
        raise DegenerateVariance("no resolvable pairs")
    return EvalReport(
        benchmark=benchmark.name,
        pearson=pearson(golds, preds),
        spearman=spearman(golds, preds),
        n_pairs_used=len(golds),
        coverage=len(golds) / len(benchmark.pairs),
    )


def inventory_stats(inventory: SenseInventory) -> dict:
    """Mean/median/max senses per word plus a sense-count histogram."""
    if not inventory.entries:
        raise ValueError("empty inventory")
    counts = np.array([len(s) for s in inventory.entries.values()])
    hist: dict[int, int] = {}
    for c in counts:
        hist[int(c)] = hist.get(int(c), 0) + 1
    return {
        "n_words": int(counts.size),
        "mean_senses": float(counts.mean()),
        "median_senses": float(np.median(counts)),
        "max_senses": int(counts.max()),
        "histogram": dict(sorted(hist.items())),
    }


# --- deterministic planted-sense fixture -------------------------------------
#
# Desk-scale stand-in for real embeddings: three exactly orthogonal prototype
# directions, twenty noisy members each, and one hub word sitting on the
# normalized sum of the prototypes. Cluster membership is known by
# construction, which makes it a ground-truth oracle for the whole pipeline.

FIXTURE_DIM = 16
FIXTURE_CLUSTERS = 3
FIXTURE_MEMBERS = 20
FIXTURE_NOISE = 0.05
FIXTURE_RNG_SEED = 158  # fixed; all derived expectations depend on it
FIXTURE_EGO = "hub"


@dataclass
class PlantedFixture:
    matrix: EmbeddingMatrix
    ego_word: str
    labels: dict[str, int] = field(repr=False)  # member word -> cluster 1..3
    prototypes: np.ndarray = field(repr=False)


def planted_fixture() -> PlantedFixture:
    """Build the fixture; perturbations come from one seeded PCG64 stream.

    Word order (= frequency order): the hub first, then members cluster by
    cluster. Member c,i is normalize(prototype_c + 0.05 * gauss noise).
    """
    rng = np.random.default_rng(FIXTURE_RNG_SEED)
    protos = np.zeros((FIXTURE_CLUSTERS, FIXTURE_DIM))
    for c in range(FIXTURE_CLUSTERS):
        protos[c, c] = 1.0

    words = [FIXTURE_EGO]
    rows = [protos.sum(axis=0)]
    labels: dict[str, int] = {}
    for c in range(FIXTURE_CLUSTERS):
        for i in range(FIXTURE_MEMBERS):
            word = f"s{c + 1}m{i:02d}"
            noise = rng.standard_normal(FIXTURE_DIM)
            words.append(word)
            rows.append(protos[c] + FIXTURE_NOISE * noise)
            labels[word] = c + 1

    matrix = EmbeddingMatrix.from_arrays(words, np.array(rows))

    # sanity: intra-cluster similarity strictly dominates inter-cluster
    member_rows = matrix.vectors[1:]
    sims = member_rows @ member_rows.T
    intra_min, inter_max = np.inf, -np.inf
    m = FIXTURE_MEMBERS
    for a in range(len(member_rows)):
        for b in range(a + 1, len(member_rows)):
            if a // m == b // m:
                intra_min = min(intra_min, sims[a, b])
            else:
                inter_max = max(inter_max, sims[a, b])
    if not intra_min > inter_max:
        raise AssertionError("fixture separation broken; noise too large")

    return PlantedFixture(
        matrix=matrix, ego_word=FIXTURE_EGO, labels=labels, prototypes=protos
    )


def fixture_to_word2vec_text(fixture: PlantedFixture, path) -> None:
    """Dump the fixture as a word2vec text file (full float precision)."""
    matrix = fixture.matrix
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(matrix)} {matrix.dim}\n")
        for word, row in zip(matrix.words, matrix.vectors):
            comps = " ".join(repr(float(x)) for x in row)
            fh.write(f"{word} {comps}\n")
