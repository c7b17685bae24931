# app/services/vector_service.py
# Cümle/doküman gömmeleri (madencilik için) ve TF-IDF vektörleri (LexRank için).
# Varsayılan sağlayıcı: birim normlu kelime vektörü ortalaması.

import logging
import math
from abc import ABC, abstractmethod
from collections import Counter
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from app.core import parsers
from app.core.config import SENTENCE_MODEL_NAME
from app.core.errors import ConfigError, EmbeddingDimensionError, WordVectorFormatError
from app.core.parsers import PathLike
from app.schemas.corpus import Document, TokenizedSentence
from app.schemas.embedding import (
    DenseEmbedding,
    EmbeddedCorpus,
    SparseVector,
    TfIdfModel,
    WordVectorTable,
)

logger = logging.getLogger(__name__)


# --- Kelime vektörleri ---

def load_word_vectors(path: PathLike) -> WordVectorTable:
    """
    Metin biçimli kelime vektörü dosyasını yükler. Boş olmayan ilk satır isteğe bağlı
    '<vocab> <dim>' başlığıdır. Tekrar eden kelimede son değer geçerlidir.
    """
    logger.info(f"📥 Kelime vektörleri yükleniyor: {path}")
    vectors = {}
    dimension: Optional[int] = None
    first = True

    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            if first:
                first = False
                header = parsers.parse_word_vector_header(line)
                if header is not None:
                    dimension = header[1]
                    if dimension <= 0:
                        raise WordVectorFormatError(line_no, f"geçersiz boyut: {dimension}")
                    continue
            word, values = parsers.parse_word_vector_line(line, line_no, dimension)
            if dimension is None:
                dimension = len(values)
            vectors[word] = values

    if dimension is None:
        raise WordVectorFormatError(0, "dosyada hiç vektör yok")

    vocab = {word: row for row, word in enumerate(vectors)}
    matrix = np.array(list(vectors.values()), dtype=np.float64).reshape(len(vocab), dimension)
    logger.info(f"✅ {len(vocab):,} kelime vektörü yüklendi (d={dimension})")
    return WordVectorTable(dimension=dimension, vocab=vocab, matrix=matrix)


def _unit_mean(vectors: np.ndarray, dimension: int) -> np.ndarray:
    """Satırların ortalamasını birim uzunluğa getirir; tanımsızsa sıfır vektör."""
    if vectors.shape[0] == 0:
        return np.zeros(dimension)
    mean = vectors.mean(axis=0)
    norm = float(np.linalg.norm(mean))
    if norm == 0.0 or not math.isfinite(norm):
        return np.zeros(dimension)
    return mean / norm


def _to_embedding(values: np.ndarray) -> DenseEmbedding:
    return DenseEmbedding(values=values, is_zero=not values.any())


def _sentence_vector(sentence: TokenizedSentence, table: WordVectorTable) -> np.ndarray:
    rows = [table.vocab[token] for token in sentence.tokens if token in table.vocab]
    return _unit_mean(table.matrix[rows], table.dimension)


def embed_sentence(sentence: TokenizedSentence, table: WordVectorTable) -> DenseEmbedding:
    return _to_embedding(_sentence_vector(sentence, table))


def document_vector(sentence_matrix: np.ndarray, dimension: int) -> np.ndarray:
    """Sıfır olmayan cümle gömmelerinin birim normlu ortalaması."""
    if sentence_matrix.shape[0] == 0:
        return np.zeros(dimension)
    nonzero = sentence_matrix[sentence_matrix.any(axis=1)]
    return _unit_mean(nonzero, dimension)


def embed_document(doc: Document, table: WordVectorTable) -> DenseEmbedding:
    return _to_embedding(document_vector(WordVectorProvider(table).embed_sentences(doc.sentences), table.dimension))


def cosine(a: DenseEmbedding, b: DenseEmbedding) -> float:
    if a.dimension != b.dimension:
        raise EmbeddingDimensionError(f"Boyutlar uyuşmuyor: {a.dimension} != {b.dimension}")
    if a.is_zero or b.is_zero:
        return 0.0
    return float(min(1.0, max(-1.0, np.dot(a.values, b.values))))


# --- Gömme sağlayıcıları ---

class BaseEmbeddingProvider(ABC):
    """Cümle gömme sağlayıcıları için arayüz. Satırlar birim normlu ya da sıfırdır."""

    @property
    @abstractmethod
    def dimension(self) -> int:
        pass

    @abstractmethod
    def embed_sentences(self, sentences: Sequence[TokenizedSentence]) -> np.ndarray:
        """(n x d) matris döndürür."""
        pass


class WordVectorProvider(BaseEmbeddingProvider):
    """Kelime vektörlerinin ortalaması (varsayılan)."""

    def __init__(self, table: WordVectorTable):
        self.table = table

    @property
    def dimension(self) -> int:
        return self.table.dimension

    def embed_sentences(self, sentences: Sequence[TokenizedSentence]) -> np.ndarray:
        matrix = np.zeros((len(sentences), self.table.dimension))
        for i, sentence in enumerate(sentences):
            matrix[i] = _sentence_vector(sentence, self.table)
        return matrix


@lru_cache(maxsize=1)
def get_sentence_model(model_name: str = SENTENCE_MODEL_NAME):
    """
    Cümle kodlayıcı modeli ilk kez ihtiyaç duyulduğunda yükler (Lazy Load).
    """
    logger.info(f"⚡ Cümle gömme modeli ilk kez yükleniyor: {model_name}")
    try:
        from sentence_transformers import SentenceTransformer
    except ImportError as e:
        raise ConfigError("'sentence-transformers' paketi yüklü değil; EMBEDDING_PROVIDER=word_vectors kullanın.") from e
    return SentenceTransformer(model_name)


class SentenceTransformerProvider(BaseEmbeddingProvider):
    """Önceden eğitilmiş cümle kodlayıcı; ham cümle metnini kodlar."""

    def __init__(self, model_name: str = SENTENCE_MODEL_NAME):
        self.model = get_sentence_model(model_name)

    @property
    def dimension(self) -> int:
        return int(self.model.get_sentence_embedding_dimension())

    def embed_sentences(self, sentences: Sequence[TokenizedSentence]) -> np.ndarray:
        if not sentences:
            return np.zeros((0, self.dimension))
        encoded = self.model.encode(
            [sentence.raw for sentence in sentences],
            normalize_embeddings=True,
            convert_to_numpy=True,
            show_progress_bar=False,
        )
        matrix = np.asarray(encoded, dtype=np.float64)
        # float32 kodlamayı float64'te yeniden normalize et
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        return np.divide(matrix, norms, out=np.zeros_like(matrix), where=norms > 0)


def get_embedding_provider(kind: str, word_vectors_path: Optional[str] = None) -> BaseEmbeddingProvider:
    """Yapılandırmaya göre doğru gömme sağlayıcısını döndürür."""
    if kind == "word_vectors":
        if not word_vectors_path:
            raise ConfigError("word_vectors sağlayıcısı için word_vectors_path gerekli")
        return WordVectorProvider(load_word_vectors(word_vectors_path))
    if kind == "sentence_transformers":
        return SentenceTransformerProvider()
    raise ConfigError(f"Bilinmeyen gömme sağlayıcısı: {kind}")


def embed_corpus(
    docs: Iterable[Document],
    provider: BaseEmbeddingProvider,
    sentence_matrices: Optional[Dict[str, np.ndarray]] = None,
) -> EmbeddedCorpus:
    """
    Her doküman için doküman gömmesi (sıfır olmayan cümle gömmelerinin ortalaması).
    `sentence_matrices` verilirse id başına önceden hesaplanmış cümle gömmeleri kullanılır.
    """
    ids: List[str] = []
    rows: List[np.ndarray] = []
    for doc in docs:
        ids.append(doc.id)
        if sentence_matrices is not None and doc.id in sentence_matrices:
            sentence_matrix = sentence_matrices[doc.id]
        else:
            sentence_matrix = provider.embed_sentences(doc.sentences)
        rows.append(document_vector(sentence_matrix, provider.dimension))
    matrix = np.vstack(rows) if rows else np.zeros((0, provider.dimension))
    return EmbeddedCorpus(ids=ids, matrix=matrix, zero_mask=~matrix.any(axis=1))


# --- TF-IDF ---

def fit_tfidf(sentences: Iterable[TokenizedSentence]) -> TfIdfModel:
    """Her cümleyi bir 'doküman' sayarak df tablosunu çıkarır."""
    df: Counter = Counter()
    n_docs = 0
    for sentence in sentences:
        n_docs += 1
        df.update(set(sentence.tokens))
    return TfIdfModel(doc_count=n_docs, document_frequency=dict(df))


def idf(token: str, model: TfIdfModel) -> float:
    """Yumuşatılmış idf: ln((1 + N) / (1 + df)) + 1"""
    df = model.document_frequency.get(token, 0)
    return math.log((1 + model.doc_count) / (1 + df)) + 1.0


def tfidf_vector(sentence: TokenizedSentence, model: TfIdfModel) -> SparseVector:
    counts = Counter(sentence.tokens)
    return SparseVector(entries={token: tf * idf(token, model) for token, tf in counts.items()})


def tfidf_cosine(a: SparseVector, b: SparseVector) -> float:
    if not a.entries or not b.entries:
        return 0.0
    small, large = (a.entries, b.entries) if len(a.entries) <= len(b.entries) else (b.entries, a.entries)
    dot = sum(weight * large[token] for token, weight in small.items() if token in large)
    # Kareler toplamı dot ile aynı sırada; tek karekök sayesinde v·v / |v|² tam olarak 1.0
    sq_a = sum(w * w for w in a.entries.values())
    sq_b = sum(w * w for w in b.entries.values())
    if sq_a == 0.0 or sq_b == 0.0:
        return 0.0
    return min(1.0, dot / math.sqrt(sq_a * sq_b))
