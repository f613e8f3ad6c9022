"""Sense induction pipeline: cluster ego-graphs, label senses, persist.

A sense inventory maps each processed word to an ordered list of sense
clusters. Clusters carry member words with their cosine-to-ego weights and
a keyword label (the member participating in the most anti-edges). Sense
vectors are derived on demand from an entry plus the embedding matrix, so
inventory files stay small and can never drift out of sync with the
embeddings named in their provenance field.
"""

from __future__ import annotations

import io
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .egograph import AntiEdge, build_ego_graph
from .vectorstore import EmbeddingMatrix, OutOfVocabulary, top_k
from .whispers import chinese_whispers

FORBIDDEN_CHARS = ("\t", ",", ":")
CW_MAX_ITER = 20

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One step of the splitmix64 sequence (Steele et al. constants)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def per_word_seed(global_seed: int, word_id: int) -> int:
    """Seed for one word's clustering: splitmix64(splitmix64(seed) ^ id).

    Mixing makes results independent of the order in which a worker pool
    schedules words.
    """
    return splitmix64(splitmix64(global_seed & _MASK64) ^ (word_id & _MASK64))


class InventoryFormatError(ValueError):
    """Malformed inventory file."""


@dataclass
class SenseCluster:
    sense_id: int
    keyword: str
    members: list[tuple[str, float]]  # (word, cosine-to-ego), weight desc


@dataclass
class InventoryParams:
    n: int
    k: int
    lam: float
    vocab: int
    seed: int


@dataclass
class SenseInventory:
    language: str
    params: InventoryParams
    entries: dict[str, list[SenseCluster]]
    provenance: str = ""

    def lookup(self, word: str) -> list[SenseCluster] | None:
        """Entry for `word`: exact match, then one lowercase retry."""
        entry = self.entries.get(word)
        if entry is None:
            entry = self.entries.get(word.lower())
        return entry


def count_anti_edges(anti_edges: list[AntiEdge], v: int) -> int:
    """How many anti-edge entries contain `v`, with multiplicity."""
    return sum(1 for e in anti_edges if e.member == v or e.anti == v)


def select_keyword(
    cluster_members: set[int],
    anti_edges: list[AntiEdge],
    matrix: EmbeddingMatrix,
    ego: int,
) -> int:
    """Member with the most anti-edge participations.

    Ties go to the higher cosine against the ego word, then to the smaller
    word id.
    """
    ego_vec = matrix.vectors[ego]

    def rank(v: int):
        return (
            -count_anti_edges(anti_edges, v),
            -float(np.dot(ego_vec, matrix.vectors[v])),
            v,
        )

    return min(cluster_members, key=rank)


def sense_vector(
    matrix: EmbeddingMatrix, ego, cluster: SenseCluster, lam: float
) -> np.ndarray:
    """Blend of the ego vector and the cosine-weighted mean of members.

    s = lam * w + (1 - lam) * (1/n) * sum(cos(w, u) * u) over the cluster's
    n members. Cosines are recomputed from the matrix, not read from the
    stored (rounded) weights. The result is intentionally not re-normalized.
    """
    if not cluster.members:
        raise ValueError("empty cluster")
    ego_id = ego if isinstance(ego, int) else matrix.word_id(ego)
    w = matrix.vectors[ego_id]
    member_ids = [matrix.word_id(m) for m, _ in cluster.members]
    rows = matrix.vectors[member_ids]
    cos = rows @ w
    mean = (cos[:, None] * rows).sum(axis=0) / len(member_ids)
    return lam * w + (1.0 - lam) * mean


def induce_senses(
    matrix: EmbeddingMatrix,
    ego: int,
    n: int,
    k: int,
    lam: float,
    seed: int,
    min_size: int = 1,
) -> list[SenseCluster]:
    """Full induction for one word id: ego-graph, clustering, labelling.

    Clusters smaller than min_size are dropped. If the graph is empty or
    everything got dropped, the word still gets one fallback sense whose
    single member (and keyword) is its top-1 neighbor. Senses come back
    ordered by size descending, then keyword id.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must be in [0, 1]")
    if min_size < 1:
        raise ValueError("min_size must be >= 1")
    if not 0 <= ego < len(matrix):
        raise OutOfVocabulary(f"<id {ego}>")

    graph = build_ego_graph(matrix, ego, n, k)
    ego_vec = matrix.vectors[ego]

    kept: list[set[int]] = []
    if graph.vertices:
        clustering = chinese_whispers(
            graph.vertices, graph.edges, seed=seed, max_iter=CW_MAX_ITER
        )
        kept = [c for c in clustering.clusters if len(c) >= min_size]

    if not kept:
        fallback = top_k(matrix, ego_vec, 1, exclude={ego})[0]
        kept = [{fallback.word_id}]

    labelled = []
    for members in kept:
        keyword_id = select_keyword(members, graph.anti_edges, matrix, ego)
        labelled.append((members, keyword_id))
    labelled.sort(key=lambda pair: (-len(pair[0]), pair[1]))

    senses = []
    for sense_id, (members, keyword_id) in enumerate(labelled):
        weighted = [
            (matrix.words[m], float(np.dot(ego_vec, matrix.vectors[m])))
            for m in members
        ]
        weighted.sort(key=lambda mw: (-mw[1], matrix.index[mw[0]]))
        senses.append(
            SenseCluster(
                sense_id=sense_id,
                keyword=matrix.words[keyword_id],
                members=weighted,
            )
        )
    return senses


def _check_serializable(word: str) -> None:
    for ch in FORBIDDEN_CHARS:
        if ch in word:
            raise ValueError(
                f"word {word!r} contains {ch!r}, which the inventory file "
                "format cannot represent"
            )


def build_inventory(
    matrix: EmbeddingMatrix,
    words,
    n: int,
    k: int,
    lam: float,
    seed: int,
    min_size: int = 1,
    language: str = "xx",
    provenance: str = "",
    jobs: int = 0,
    checkpoint_path: str | None = None,
    checkpoint_every: int = 500,
    progress=None,
) -> tuple[SenseInventory, dict[str, str]]:
    """Induce senses for many words; parallel, deterministic, resumable.

    words: "all" for the whole vocabulary, or an iterable of word strings.
    Each word is clustered with its own seed (see per_word_seed), so the
    thread schedule cannot change results. Per-word failures are collected
    into the returned error dict instead of aborting the build. When
    checkpoint_path is given, a partial inventory is written there every
    checkpoint_every words and picked up again on restart.
    """
    params = InventoryParams(n=n, k=k, lam=lam, vocab=len(matrix), seed=seed)
    errors: dict[str, str] = {}

    if isinstance(words, str) and words == "all":
        word_ids = list(range(len(matrix)))
    else:
        word_ids = []
        seen = set()
        for w in words:
            try:
                wid = matrix.word_id(w)
            except OutOfVocabulary:
                errors[w] = "not in vocabulary"
                continue
            if wid not in seen:
                seen.add(wid)
                word_ids.append(wid)
        word_ids.sort()

    entries: dict[str, list[SenseCluster]] = {}
    if checkpoint_path and os.path.exists(checkpoint_path):
        previous = load_inventory(checkpoint_path)
        if previous.params != params or previous.language != language:
            raise ValueError(
                f"checkpoint {checkpoint_path} was built with different "
                "parameters; delete it or change the output path"
            )
        entries.update(previous.entries)
        word_ids = [i for i in word_ids if matrix.words[i] not in entries]

    lock = threading.Lock()
    done = 0
    since_checkpoint = 0
    total = len(word_ids)

    def work(wid: int):
        word = matrix.words[wid]
        _check_serializable(word)
        senses = induce_senses(
            matrix, wid, n, k, lam, per_word_seed(seed, wid), min_size
        )
        for cluster in senses:
            for member, _ in cluster.members:
                _check_serializable(member)
        return word, senses

    def finish(word, senses, err):
        nonlocal done, since_checkpoint
        with lock:
            if err is not None:
                errors[word] = err
            else:
                entries[word] = senses
            done += 1
            since_checkpoint += 1
            if progress is not None:
                progress(done, total)
            if checkpoint_path and since_checkpoint >= checkpoint_every:
                since_checkpoint = 0
                _write_checkpoint(
                    SenseInventory(language, params, dict(entries), provenance),
                    checkpoint_path,
                )

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(work, wid): wid for wid in word_ids}
            for fut, wid in futures.items():
                try:
                    word, senses = fut.result()
                    finish(word, senses, None)
                except Exception as exc:
                    finish(matrix.words[wid], None, str(exc))
    else:
        for wid in word_ids:
            try:
                word, senses = work(wid)
                finish(word, senses, None)
            except Exception as exc:
                finish(matrix.words[wid], None, str(exc))

    inv = SenseInventory(
        language=language, params=params, entries=entries, provenance=provenance
    )
    if checkpoint_path:
        _write_checkpoint(inv, checkpoint_path)
    return inv, errors


def _write_checkpoint(inv: SenseInventory, path: str) -> None:
    tmp = path + ".tmp"
    save_inventory(inv, tmp)
    os.replace(tmp, path)


def save_inventory(inv: SenseInventory, sink) -> None:
    """Write the TSV inventory format.

    Header line, column line, then one row per sense with the cluster as
    comma-separated member:weight pairs at fixed 6-decimal precision.
    Entries are written in word order so identical inventories produce
    byte-identical files.
    """
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            _write_inventory(inv, fh)
    else:
        _write_inventory(inv, sink)


def _write_inventory(inv: SenseInventory, fh) -> None:
    p = inv.params
    fh.write(
        f"#params\tlang={inv.language}\tN={p.n}\tK={p.k}\tlambda={p.lam!r}"
        f"\tvocab={p.vocab}\tseed={p.seed}\tsource={inv.provenance}\n"
    )
    fh.write("word\tsense_id\tkeyword\tcluster\n")
    for word in sorted(inv.entries):
        for cluster in inv.entries[word]:
            _check_serializable(word)
            _check_serializable(cluster.keyword)
            items = ",".join(f"{m}:{w:.6f}" for m, w in cluster.members)
            fh.write(f"{word}\t{cluster.sense_id}\t{cluster.keyword}\t{items}\n")


def load_inventory(source) -> SenseInventory:
    """Read an inventory file back; weights come out 6-decimal rounded."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8") as fh:
            return _read_inventory(fh)
    if isinstance(source, io.TextIOBase):
        return _read_inventory(source)
    return _read_inventory(io.TextIOWrapper(source, encoding="utf-8"))


def _read_inventory(fh) -> SenseInventory:
    header = fh.readline().rstrip("\r\n")
    fields = header.split("\t")
    if not fields or fields[0] != "#params":
        raise InventoryFormatError("params header missing")
    kv = {}
    for item in fields[1:]:
        key, _, value = item.partition("=")
        kv[key] = value
    try:
        language = kv["lang"]
        params = InventoryParams(
            n=int(kv["N"]),
            k=int(kv["K"]),
            lam=float(kv["lambda"]),
            vocab=int(kv["vocab"]),
            seed=int(kv["seed"]),
        )
        provenance = kv.get("source", "")
    except (KeyError, ValueError) as exc:
        raise InventoryFormatError(f"bad params header: {exc}") from None

    columns = fh.readline().rstrip("\r\n")
    if columns != "word\tsense_id\tkeyword\tcluster":
        raise InventoryFormatError("column header missing")

    entries: dict[str, list[SenseCluster]] = {}
    for lineno, line in enumerate(fh, start=3):
        line = line.rstrip("\r\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise InventoryFormatError(f"line {lineno}: expected 4 columns")
        word, sense_id_s, keyword, cluster_s = parts
        try:
            sense_id = int(sense_id_s)
        except ValueError:
            raise InventoryFormatError(f"line {lineno}: bad sense id") from None
        members = []
        for item in cluster_s.split(","):
            m, sep, w = item.rpartition(":")
            if not sep or not m:
                raise InventoryFormatError(f"line {lineno}: bad member {item!r}")
            try:
                members.append((m, float(w)))
            except ValueError:
                raise InventoryFormatError(f"line {lineno}: bad weight in {item!r}") from None
        if not members:
            raise InventoryFormatError(f"line {lineno}: empty cluster")
        if keyword not in {m for m, _ in members}:
            raise InventoryFormatError(f"line {lineno}: keyword not among members")
        senses = entries.setdefault(word, [])
        if sense_id != len(senses):
            raise InventoryFormatError(
                f"line {lineno}: sense ids for {word!r} must be consecutive from 0"
            )
        senses.append(SenseCluster(sense_id=sense_id, keyword=keyword, members=members))
    return SenseInventory(
        language=language, params=params, entries=entries, provenance=provenance
    )


def structurally_equal(a: SenseInventory, b: SenseInventory) -> bool:
    """Equality with weights compared at the file format's 6-decimal precision."""
    if (a.language, a.params, a.provenance) != (b.language, b.params, b.provenance):
        return False
    if set(a.entries) != set(b.entries):
        return False
    for word, senses_a in a.entries.items():
        senses_b = b.entries[word]
        if len(senses_a) != len(senses_b):
            return False
        for ca, cb in zip(senses_a, senses_b):
            if (ca.sense_id, ca.keyword) != (cb.sense_id, cb.keyword):
                return False
            fmt_a = [(m, f"{w:.6f}") for m, w in ca.members]
            fmt_b = [(m, f"{w:.6f}") for m, w in cb.members]
            if fmt_a != fmt_b:
                return False
    return True
