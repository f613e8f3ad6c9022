import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from egvi.vectorstore import (
    EmbeddingsFormatError,
    OutOfVocabulary,
    cosine,
    load_embeddings,
    normalize_rows,
    top_k,
    vector,
)

from .reference import cosine_ref, linear_scan_topk


def _load(text, limit=10):
    return load_embeddings(io.StringIO(text), limit=limit)


class TestLoadEmbeddings:
    def test_truncation_by_limit(self):
        m = _load("3 4\na 1 0 0 0\nb 0 1 0 0\nc 0 0 1 0\n", limit=2)
        assert m.words == ["a", "b"]
        assert m.dim == 4

    def test_unit_row_kept_as_is(self):
        m = _load("1 4\na 1 0 0 0\n")
        np.testing.assert_array_equal(m.vectors[0], [1, 0, 0, 0])

    def test_scaled_basis_vector_normalized(self):
        m = _load("1 4\nb 2 0 0 0\n")
        np.testing.assert_array_equal(m.vectors[0], [1, 0, 0, 0])

    def test_crlf_accepted(self):
        m = _load("2 2\r\na 1 0\r\nb 0 1\r\n")
        assert m.words == ["a", "b"]

    def test_malformed_header(self):
        with pytest.raises(EmbeddingsFormatError, match="header"):
            _load("3\na 1 0\n")
        with pytest.raises(EmbeddingsFormatError, match="header"):
            _load("x y\na 1 0\n")

    def test_wrong_component_count_reports_line(self):
        with pytest.raises(EmbeddingsFormatError, match="line 3"):
            _load("2 3\na 1 0 0\nb 1 0\n")

    def test_duplicate_word_reports_line(self):
        with pytest.raises(EmbeddingsFormatError, match="line 3.*'a'"):
            _load("2 2\na 1 0\na 0 1\n")

    def test_zero_vector_reports_word(self):
        with pytest.raises(EmbeddingsFormatError, match="'z'"):
            _load("1 2\nz 0 0\n")

    def test_rows_unit_norm(self):
        m = _load("2 3\na 1 2 3\nb -4 0 1\n")
        norms = np.linalg.norm(m.vectors, axis=1)
        np.testing.assert_allclose(norms, 1.0, atol=1e-6)


class TestNormalize:
    def test_idempotent_bitwise(self):
        rng = np.random.default_rng(3)
        rows = rng.standard_normal((50, 8)) * rng.uniform(0.1, 9, size=(50, 1))
        once = normalize_rows(rows)
        twice = normalize_rows(once)
        assert np.array_equal(once, twice)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_idempotent_bitwise_fuzz(self, seed):
        rng = np.random.default_rng(seed)
        rows = rng.standard_normal((8, 5)) * 10 ** rng.uniform(-3, 3)
        once = normalize_rows(rows)
        assert np.array_equal(once, normalize_rows(once))


class TestLookup:
    def test_exact(self, basis3):
        np.testing.assert_array_equal(vector(basis3, "e1"), [1, 0, 0])

    def test_lowercase_fallback(self):
        m = _load("1 2\nruby 1 0\n")
        np.testing.assert_array_equal(vector(m, "Ruby"), [1, 0])

    def test_out_of_vocabulary(self, basis3):
        with pytest.raises(OutOfVocabulary):
            vector(basis3, "zzz")


class TestCosine:
    def test_identical(self):
        assert cosine(np.array([1.0, 0.0]), np.array([1.0, 0.0])) == 1.0

    def test_orthogonal(self):
        assert cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_45_degrees(self):
        got = cosine(np.array([1.0, 1.0]), np.array([1.0, 0.0]))
        assert got == pytest.approx(0.7071, abs=1e-4)

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            cosine(np.zeros(2), np.ones(2))


class TestTopK:
    def test_orthonormal_ties_by_id(self, basis3):
        hits = top_k(basis3, basis3.vectors[0], 2, exclude={0})
        assert [h.word_id for h in hits] == [1, 2]
        assert [h.score for h in hits] == [0.0, 0.0]

    def test_count_is_min_k_vocab_minus_excluded(self, basis3):
        assert len(top_k(basis3, basis3.vectors[0], 10, exclude={0})) == 2

    def test_zero_query_rejected(self, basis3):
        with pytest.raises(ValueError):
            top_k(basis3, np.zeros(3), 1)

    def test_k_must_be_positive(self, basis3):
        with pytest.raises(ValueError):
            top_k(basis3, basis3.vectors[0], 0)

    def test_matches_linear_scan_oracle(self):
        rng = np.random.default_rng(42)
        rows = rng.standard_normal((1000, 16))
        from egvi.vectorstore import EmbeddingMatrix

        m = EmbeddingMatrix.from_arrays([f"w{i}" for i in range(1000)], rows)
        for qseed in range(5):
            q = np.random.default_rng(qseed).standard_normal(16)
            hits = top_k(m, q, 50)
            expect = linear_scan_topk(m.vectors, q, 50)
            assert [h.word_id for h in hits] == [i for i, _ in expect]
            np.testing.assert_allclose(
                [h.score for h in hits], [s for _, s in expect], atol=1e-6
            )

    def test_invariant_under_positive_query_scaling(self, basis3):
        q = np.array([0.3, 0.2, 0.1])
        a = top_k(basis3, q, 3)
        b = top_k(basis3, 7.5 * q, 3)
        assert [h.word_id for h in a] == [h.word_id for h in b]
        np.testing.assert_allclose(
            [h.score for h in a], [h.score for h in b], atol=1e-12
        )

    def test_scores_are_exact_cosines(self):
        m = _load("2 2\na 3 4\nb -1 1\n")
        q = np.array([2.0, 1.0])
        hits = top_k(m, q, 2)
        for h in hits:
            assert h.score == pytest.approx(cosine_ref(m.vectors[h.word_id], q), abs=1e-12)
