# app/services/extractor_service.py
# Doküman başına en belirgin K cümleyi seçer: Lead, LexRank ve ROUGE-1 Oracle.

import logging
from typing import Iterable, Optional

import numpy as np

from app.core.errors import EmptyCorpusError
from app.schemas.corpus import Document
from app.schemas.embedding import TfIdfModel
from app.schemas.extract import ExtractConfig, ExtractedPick, ExtractedSummary
from app.services.metrics_service import rouge_n
from app.services.vector_service import fit_tfidf, tfidf_cosine, tfidf_vector

logger = logging.getLogger(__name__)

# Merkezilik puanları bu hassasiyete yuvarlanıp karşılaştırılır; eşitlikte küçük indeks kazanır
_SCORE_DECIMALS = 12


def _summary(doc: Document, indices: Iterable[int]) -> ExtractedSummary:
    picks = [ExtractedPick(index=i, sentence=doc.sentences[i]) for i in sorted(set(indices))]
    return ExtractedSummary(doc_id=doc.id, picks=picks)


def lead(doc: Document, k: int) -> ExtractedSummary:
    return _summary(doc, range(min(k, len(doc.sentences))))


def pagerank(
    weights: np.ndarray,
    damping: float = 0.85,
    epsilon: float = 1e-8,
    max_iterations: int = 200,
) -> np.ndarray:
    """
    Güç iterasyonu: p <- (1-d)/N + d * W^T p. W satır-normalize edilir;
    toplamı sıfır olan satırlar olasılığı düzgün dağıtır.
    """
    weights = np.asarray(weights, dtype=np.float64)
    if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
        raise ValueError(f"Ağırlık matrisi kare olmalı: {weights.shape}")
    n = weights.shape[0]
    if n == 0:
        raise ValueError("PageRank için en az bir düğüm gerekli")
    if (weights < 0).any():
        raise ValueError("Ağırlıklar negatif olamaz")

    row_sums = weights.sum(axis=1, keepdims=True)
    transition = np.where(row_sums > 0, weights / np.where(row_sums > 0, row_sums, 1.0), 1.0 / n)

    teleport = (1.0 - damping) / n
    p = np.full(n, 1.0 / n)
    for iteration in range(max_iterations):
        updated = teleport + damping * (transition.T @ p)
        delta = float(np.abs(updated - p).sum())
        p = updated
        if delta < epsilon:
            break
    else:
        logger.debug(f"PageRank {max_iterations} iterasyonda yakınsamadı (son fark {delta:.2e})")

    return p / p.sum()


def similarity_graph(doc: Document, model: TfIdfModel, threshold: float) -> np.ndarray:
    """Eşiği aşan TF-IDF kosinüs benzerlikleri kenar ağırlığı olur (sürekli, ikili değil)."""
    vectors = [tfidf_vector(sentence, model) for sentence in doc.sentences]
    n = len(vectors)
    weights = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            sim = tfidf_cosine(vectors[i], vectors[j])
            if sim > threshold:
                weights[i, j] = weights[j, i] = sim
    return weights


def lexrank(doc: Document, model: Optional[TfIdfModel] = None, config: ExtractConfig = ExtractConfig()) -> ExtractedSummary:
    """
    LexRank: en yüksek merkeziliğe sahip k cümle, doküman sırasında.
    `model` verilmezse TF-IDF dokümanın kendi cümleleri üzerinde kurulur.
    """
    n = len(doc.sentences)
    if n == 0:
        return ExtractedSummary(doc_id=doc.id)
    if n <= config.k:
        return lead(doc, n)

    if model is None:
        model = fit_tfidf(doc.sentences)
    weights = similarity_graph(doc, model, config.lexrank_threshold)
    scores = pagerank(weights, config.damping, config.epsilon, config.max_iterations)

    ranked = sorted(range(n), key=lambda i: (-round(float(scores[i]), _SCORE_DECIMALS), i))
    return _summary(doc, ranked[:config.k])


def oracle_extract(article: Document, reference: Document) -> ExtractedSummary:
    """Her referans cümlesi için ROUGE-1 F1'i en yüksek makale cümlesi (tekrarsız)."""
    if not article.sentences or not reference.sentences:
        return ExtractedSummary(doc_id=article.id)

    picks = set()
    for ref_sentence in reference.sentences:
        best_index, best_f1 = 0, -1.0
        for i, sentence in enumerate(article.sentences):
            f1 = rouge_n(sentence.tokens, ref_sentence.tokens, 1).f1
            if f1 > best_f1:
                best_index, best_f1 = i, f1
        picks.add(best_index)
    return _summary(article, picks)


def estimate_k(summary_corpus: Iterable[Document]) -> int:
    """Özet başına ortalama cümle sayısı, yarım yukarı yuvarlanır."""
    total = count = 0
    for doc in summary_corpus:
        total += len(doc.sentences)
        count += 1
    if count == 0:
        raise EmptyCorpusError("K tahmini için özet korpusu boş")

    # round-half-up, tam sayı aritmetiğiyle
    k = (2 * total + count) // (2 * count)
    if k < 1:
        logger.warning(f"⚠️ Ortalama özet uzunluğu {total / count:.2f}; K=1 kullanılıyor")
        k = 1
    logger.info(f"📏 {count} özet üzerinden K={k} (ortalama {total / count:.2f} cümle)")
    return k


def extract(doc: Document, config: ExtractConfig, model: Optional[TfIdfModel] = None) -> ExtractedSummary:
    if config.method == "lexrank":
        return lexrank(doc, model, config)
    return lead(doc, config.k)
