"""Tokenization, context vectors, sense choice, word-pair relatedness."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

import numpy as np

from .inventory import SenseInventory, sense_vector
from .vectorstore import EmbeddingMatrix, OutOfVocabulary, cosine, vector

_CHUNK = re.compile(r"\S+")


class NoContext(ValueError):
    """No in-vocabulary context token to average."""


class OutOfInventory(KeyError):
    def __init__(self, word: str):
        super().__init__(word)
        self.word = word

    def __str__(self):
        return f"no inventory entry for {self.word!r}"


@dataclass
class Token:
    surface: str
    char_start: int
    char_end: int
    word_id: int | None = None  # None marks out-of-vocabulary


@dataclass
class DisambiguationResult:
    token_index: int
    sense_id: int
    keyword: str
    score: float
    margin: float
    n_senses: int
    low_confidence: bool = False


@dataclass
class AnnotatedToken:
    token: Token
    n_senses: int  # 0 when the word has no inventory entry
    result: DisambiguationResult | None

    @property
    def ambiguous(self) -> bool:
        return self.n_senses >= 2


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str, matrix: EmbeddingMatrix | None = None) -> list[Token]:
    """Split on Unicode whitespace; peel boundary punctuation off as tokens.

    Internal punctuation stays ("state-of-the-art" is one token). When a
    matrix is given, each token's word id is resolved with the usual
    exact-then-lowercase rule; misses stay None.
    """
    tokens: list[Token] = []
    for m in _CHUNK.finditer(text):
        chunk = m.group()
        start = m.start()
        end = m.end()
        head = 0
        while head < len(chunk) and _is_punct(chunk[head]):
            tokens.append(Token(chunk[head], start + head, start + head + 1))
            head += 1
        tail = len(chunk)
        trailing = []
        while tail > head and _is_punct(chunk[tail - 1]):
            tail -= 1
            trailing.append(Token(chunk[tail], start + tail, start + tail + 1))
        if tail > head:
            tokens.append(Token(chunk[head:tail], start + head, start + tail))
        tokens.extend(reversed(trailing))
    if matrix is not None:
        for tok in tokens:
            try:
                tok.word_id = matrix.word_id(tok.surface)
            except OutOfVocabulary:
                tok.word_id = None
    return tokens


def context_vector(
    matrix: EmbeddingMatrix,
    tokens: list[Token],
    target: int,
    window="sentence",
) -> np.ndarray:
    """Mean of the in-vocabulary token vectors around `target`.

    The target itself never contributes. window is "sentence" for the whole
    input or an integer for +-window positions.
    """
    if not 0 <= target < len(tokens):
        raise IndexError("target out of range")
    ids = []
    for i, tok in enumerate(tokens):
        if i == target or tok.word_id is None:
            continue
        if window != "sentence" and abs(i - target) > int(window):
            continue
        ids.append(tok.word_id)
    if not ids:
        raise NoContext("no in-vocabulary context tokens")
    return matrix.vectors[ids].mean(axis=0)


def disambiguate(
    matrix: EmbeddingMatrix,
    inventory: SenseInventory,
    word: str,
    context: np.ndarray,
) -> DisambiguationResult:
    """Pick the sense whose vector is most cosine-similar to the context."""
    entry = inventory.lookup(word)
    if entry is None:
        raise OutOfInventory(word)
    lam = inventory.params.lam
    ego_id = matrix.word_id(word)
    best_id, best, second = 0, -np.inf, -np.inf
    for cluster in entry:
        s = cosine(context, sense_vector(matrix, ego_id, cluster, lam))
        if s > best:
            best_id, second, best = cluster.sense_id, best, s
        elif s > second:
            second = s
    margin = 0.0 if len(entry) == 1 else best - second
    return DisambiguationResult(
        token_index=-1,
        sense_id=best_id,
        keyword=entry[best_id].keyword,
        score=best,
        margin=margin,
        n_senses=len(entry),
    )


def disambiguate_text(
    matrix: EmbeddingMatrix,
    inventory: SenseInventory,
    text: str,
    window="sentence",
) -> list[AnnotatedToken]:
    """Annotate every token; resolve a sense for those with >= 2 senses.

    Tokens whose word has a single sense are reported unambiguous without a
    result; words absent from the inventory carry n_senses 0. A token with
    no usable context falls back to sense 0, flagged low-confidence.
    """
    tokens = tokenize(text, matrix)
    annotated = []
    for i, tok in enumerate(tokens):
        entry = inventory.lookup(tok.surface)
        n_senses = len(entry) if entry else 0
        result = None
        if entry and n_senses >= 2:
            try:
                ctx = context_vector(matrix, tokens, i, window)
                result = disambiguate(matrix, inventory, tok.surface, ctx)
                result.token_index = i
            except NoContext:
                result = DisambiguationResult(
                    token_index=i,
                    sense_id=0,
                    keyword=entry[0].keyword,
                    score=0.0,
                    margin=0.0,
                    n_senses=n_senses,
                    low_confidence=True,
                )
        annotated.append(AnnotatedToken(token=tok, n_senses=n_senses, result=result))
    return annotated


def relatedness(
    matrix: EmbeddingMatrix,
    inventory: SenseInventory,
    w1: str,
    w2: str,
) -> float:
    """Max cosine over all cross-word sense-vector pairs.

    Words without an inventory entry fall back to their single word vector;
    words absent from both inventory and vocabulary raise OutOfVocabulary.
    """

    def candidate_vectors(word: str) -> list[np.ndarray]:
        entry = inventory.lookup(word)
        if entry is not None:
            ego_id = matrix.word_id(word)
            return [
                sense_vector(matrix, ego_id, c, inventory.params.lam) for c in entry
            ]
        return [vector(matrix, word)]

    best = -np.inf
    for a in candidate_vectors(w1):
        for b in candidate_vectors(w2):
            s = cosine(a, b)
            if s > best:
                best = s
    return float(best)
