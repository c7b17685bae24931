import math

import numpy as np
import pytest

from app.core.errors import ConfigError, EmbeddingDimensionError, WordVectorFormatError
from app.core.tokenizer import tokenize
from app.schemas.embedding import DenseEmbedding, SparseVector, TfIdfModel
from app.services import vector_service
from tests.conftest import make_doc, table_from, write_word_vectors


class TestLoadWordVectors:

    def test_with_header(self, tmp_path):
        path = write_word_vectors(tmp_path / "v.txt", {"a": [1, 2, 3], "b": [4, 5, 6]})
        table = vector_service.load_word_vectors(path)
        assert table.dimension == 3
        assert len(table) == 2
        np.testing.assert_array_equal(table.get("b"), [4.0, 5.0, 6.0])

    def test_without_header(self, tmp_path):
        path = write_word_vectors(tmp_path / "v.txt", {"a": [1, 0], "b": [0, 1]}, header=False)
        table = vector_service.load_word_vectors(path)
        assert table.dimension == 2
        assert "a" in table and "c" not in table

    def test_dimension_mismatch_names_line(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("a 1 2 3\nb 1 2\n", encoding="utf-8")
        with pytest.raises(WordVectorFormatError) as info:
            vector_service.load_word_vectors(path)
        assert info.value.line == 2

    def test_non_numeric_component(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("a 1 x 3\n", encoding="utf-8")
        with pytest.raises(WordVectorFormatError):
            vector_service.load_word_vectors(path)

    def test_last_duplicate_wins(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("a 1 0\nb 0 1\na 0.5 0.5\n", encoding="utf-8")
        table = vector_service.load_word_vectors(path)
        assert len(table) == 2
        np.testing.assert_array_equal(table.get("a"), [0.5, 0.5])

    def test_header_after_blank_lines(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("\n  \n2 3\na 1 2 3\nb 4 5 6\n", encoding="utf-8")
        table = vector_service.load_word_vectors(path)
        assert table.dimension == 3
        assert len(table) == 2
        assert "2" not in table


class TestDenseEmbeddings:

    def test_single_token_normalized(self):
        table = table_from({"a": [3.0, 4.0]})
        emb = vector_service.embed_sentence(tokenize("a"), table)
        np.testing.assert_allclose(emb.values, [0.6, 0.8], atol=1e-12)

    def test_all_oov_is_zero(self):
        table = table_from({"a": [1.0, 0.0]})
        emb = vector_service.embed_sentence(tokenize("x y"), table)
        assert emb.is_zero
        assert not emb.values.any()

    def test_mean_then_normalize(self):
        table = table_from({"a": [1.0, 0.0], "b": [0.0, 1.0]})
        emb = vector_service.embed_sentence(tokenize("a b"), table)
        np.testing.assert_allclose(emb.values, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-12)

    def test_scale_invariance(self):
        vectors = {"a": [1.0, 2.0, -1.0], "b": [0.5, -3.0, 2.0]}
        scaled = {w: [7.5 * x for x in v] for w, v in vectors.items()}
        sentence = tokenize("a b a")
        first = vector_service.embed_sentence(sentence, table_from(vectors))
        second = vector_service.embed_sentence(sentence, table_from(scaled))
        np.testing.assert_allclose(first.values, second.values, atol=1e-9)

    def test_document_of_one_sentence(self):
        table = table_from({"a": [1.0, 2.0], "b": [2.0, -1.0]})
        doc = make_doc("d", ["a b"])
        np.testing.assert_allclose(
            vector_service.embed_document(doc, table).values,
            vector_service.embed_sentence(doc.sentences[0], table).values,
            atol=1e-12,
        )

    def test_document_of_orthogonal_sentences(self):
        table = table_from({"a": [1.0, 0.0], "b": [0.0, 1.0]})
        doc = make_doc("d", ["a", "b", "zzz"])
        emb = vector_service.embed_document(doc, table)
        np.testing.assert_allclose(emb.values, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-12)

    def test_unit_norm(self):
        rng = np.random.default_rng(3)
        table = table_from({f"w{i}": rng.standard_normal(8) for i in range(20)})
        for n in range(1, 10):
            emb = vector_service.embed_sentence(tokenize(" ".join(f"w{i}" for i in range(n))), table)
            assert abs(np.linalg.norm(emb.values) - 1.0) < 1e-9


class TestCosine:

    def test_identity_and_orthogonal(self):
        e = DenseEmbedding(values=np.array([1.0, 0.0]))
        f = DenseEmbedding(values=np.array([0.0, 1.0]))
        assert vector_service.cosine(e, e) == pytest.approx(1.0)
        assert vector_service.cosine(e, f) == 0.0

    def test_zero_operand(self):
        e = DenseEmbedding(values=np.array([1.0, 0.0]))
        zero = DenseEmbedding(values=np.zeros(2), is_zero=True)
        assert vector_service.cosine(zero, e) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(EmbeddingDimensionError):
            vector_service.cosine(DenseEmbedding(values=np.ones(2)), DenseEmbedding(values=np.ones(3)))

    def test_symmetric(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a, b = rng.standard_normal(6), rng.standard_normal(6)
            ea = DenseEmbedding(values=a / np.linalg.norm(a))
            eb = DenseEmbedding(values=b / np.linalg.norm(b))
            assert vector_service.cosine(ea, eb) == vector_service.cosine(eb, ea)


class TestProviders:

    def test_embed_corpus(self, tiny_provider):
        docs = [make_doc("x", ["the cat sat"]), make_doc("y", ["unknown words"])]
        corpus = vector_service.embed_corpus(docs, tiny_provider)
        assert corpus.ids == ["x", "y"]
        assert corpus.matrix.shape == (2, 3)
        assert list(corpus.zero_mask) == [False, True]

    def test_embed_corpus_uses_given_sentence_matrices(self, tiny_provider):
        docs = [make_doc("x", ["the cat sat"]), make_doc("y", ["unknown words"])]
        corpus = vector_service.embed_corpus(docs, tiny_provider, {"y": np.array([[0.0, 3.0, 4.0]])})
        np.testing.assert_allclose(corpus.matrix[1], [0.0, 0.6, 0.8], atol=1e-12)
        np.testing.assert_allclose(
            corpus.matrix[0], vector_service.embed_corpus(docs[:1], tiny_provider).matrix[0], atol=1e-12,
        )
        assert list(corpus.zero_mask) == [False, False]

    def test_word_vectors_requires_path(self):
        with pytest.raises(ConfigError):
            vector_service.get_embedding_provider("word_vectors", None)

    def test_unknown_provider(self):
        with pytest.raises(ConfigError):
            vector_service.get_embedding_provider("bag_of_magic", "x")


class TestTfIdf:

    def test_weights_with_single_document(self):
        model = TfIdfModel(doc_count=1, document_frequency={"a": 1, "b": 1})
        vector = vector_service.tfidf_vector(tokenize("a a b"), model)
        assert vector.entries == pytest.approx({"a": 2.0, "b": 1.0})

    def test_unseen_tokens(self):
        model = TfIdfModel(doc_count=1, document_frequency={})
        vector = vector_service.tfidf_vector(tokenize("q"), model)
        assert vector.entries["q"] == pytest.approx(math.log(2) + 1)

    def test_fit(self):
        model = vector_service.fit_tfidf([tokenize("a b"), tokenize("a a"), tokenize("c")])
        assert model.doc_count == 3
        assert model.document_frequency == {"a": 2, "b": 1, "c": 1}

    def test_cosine_cases(self):
        model = TfIdfModel(doc_count=1, document_frequency={"a": 1, "b": 1})
        a = vector_service.tfidf_vector(tokenize("a"), model)
        ab = vector_service.tfidf_vector(tokenize("a b"), model)
        c = vector_service.tfidf_vector(tokenize("c"), model)
        assert vector_service.tfidf_cosine(ab, ab) == pytest.approx(1.0)
        assert vector_service.tfidf_cosine(a, c) == 0.0
        assert vector_service.tfidf_cosine(a, ab) == pytest.approx(1 / math.sqrt(2))

    def test_self_cosine_is_exactly_one(self):
        rng = np.random.default_rng(17)
        for _ in range(2000):
            size = int(rng.integers(1, 30))
            weights = rng.uniform(0.05, 12.0, size=size)
            v = SparseVector(entries={f"t{i}": float(w) for i, w in enumerate(weights)})
            assert vector_service.tfidf_cosine(v, v) == 1.0

    def test_self_cosine_of_fitted_vectors(self):
        sentences = [tokenize(s) for s in ("the cat sat on the mat", "a dog ran", "the sky the sky", "cat")]
        model = vector_service.fit_tfidf(sentences)
        for sentence in sentences:
            v = vector_service.tfidf_vector(sentence, model)
            assert vector_service.tfidf_cosine(v, v) == 1.0

    def test_invalid_document_frequency(self):
        with pytest.raises(ValueError):
            TfIdfModel(doc_count=1, document_frequency={"a": 2})
