# app/services/miner_service.py
# Hiyerarşik hizalama: önce doküman gömmeleriyle özet -> makale eşleştirmesi,
# sonra eşleşen doküman çiftlerinde cümle seviyesinde en yakın komşu.
# Arama kesin (brute-force); sonuçlar iş parçacığı sayısından bağımsızdır.

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
from tqdm import tqdm

from app.core.config import SHOW_PROGRESS
from app.core.errors import EmbeddingDimensionError
from app.schemas.corpus import Document
from app.schemas.embedding import EmbeddedCorpus
from app.schemas.mining import AlignConfig, DocPair, MinedDataset, SentencePair
from app.services.metrics_service import rouge_n
from app.services.vector_service import BaseEmbeddingProvider, embed_corpus

logger = logging.getLogger(__name__)

# (summary_row, [(similarity, article_row), ...])
_Candidates = Dict[int, List[Tuple[float, int]]]


# --- Doküman seviyesi ---

def _id_ranks(ids: Sequence[str]) -> np.ndarray:
    """Her id'nin sözlük sırasındaki konumu (eşit benzerlikte küçük id kazanır)."""
    order = sorted(range(len(ids)), key=lambda i: ids[i])
    ranks = np.empty(len(ids), dtype=np.int64)
    ranks[order] = np.arange(len(ids))
    return ranks


def _block_rows(config: AlignConfig, shard_width: int, workers: int) -> int:
    """Eşzamanlı benzerlik blokları (satır x shard genişliği, float64) bellek bütçesine sığacak satır sayısı."""
    budget = int(config.block_memory_mb * 1024 * 1024) // max(1, workers)
    return max(1, min(config.batch_size, budget // (8 * max(1, shard_width))))


def _top_neighbors(
    summary_block: np.ndarray,
    summary_rows: np.ndarray,
    articles: np.ndarray,
    article_zero: np.ndarray,
    article_offset: int,
    article_ranks: np.ndarray,
    config: AlignConfig,
) -> _Candidates:
    sims = summary_block @ articles.T
    np.clip(sims, -1.0, 1.0, out=sims)
    sims[:, article_zero] = -np.inf
    k = config.doc_neighbors

    found: _Candidates = {}
    for local, row in enumerate(summary_rows):
        hits = np.nonzero(sims[local] >= config.theta_d)[0]
        if hits.size == 0:
            continue
        hit_sims = sims[local, hits]
        if hits.size > k:
            # k. en büyük değere eşit olanlar da kalır; eşitlik id sırasıyla çözülür
            kth = np.partition(hit_sims, hits.size - k)[hits.size - k]
            keep = hit_sims >= kth
            hits, hit_sims = hits[keep], hit_sims[keep]
        order = np.lexsort((article_ranks[hits + article_offset], -hit_sims))[:k]
        found[int(row)] = [(float(hit_sims[o]), int(hits[o]) + article_offset) for o in order]
    return found


def align_documents(
    summaries: EmbeddedCorpus,
    articles: EmbeddedCorpus,
    config: AlignConfig,
    workers: int = 1,
) -> List[DocPair]:
    """
    Her özet için kosinüsü θ_d'nin üstündeki en yakın `doc_neighbors` makale.
    Makale korpusu sırayla parçalara (shard) bölünür; özetler her parçada
    `batch_size`'lık bloklar halinde paralel işlenir. Blok boyu, benzerlik
    matrisleri toplamda `block_memory_mb`'yi aşmayacak şekilde küçültülür.
    """
    if len(summaries) and len(articles) and summaries.dimension != articles.dimension:
        raise EmbeddingDimensionError(f"Özet d={summaries.dimension}, makale d={articles.dimension}")
    if len(summaries) == 0 or len(articles) == 0:
        return []

    active = np.nonzero(~summaries.zero_mask)[0]
    rows_per_block = _block_rows(config, min(config.article_shard_size, len(articles)), workers)
    blocks = [active[i:i + rows_per_block] for i in range(0, len(active), rows_per_block)]
    article_ranks = _id_ranks(articles.ids)
    merged: Dict[int, List[Tuple[float, int]]] = {}

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for start in range(0, len(articles), config.article_shard_size):
            stop = min(start + config.article_shard_size, len(articles))
            shard = articles.matrix[start:stop]
            shard_zero = articles.zero_mask[start:stop]

            def run(block: np.ndarray) -> _Candidates:
                return _top_neighbors(summaries.matrix[block], block, shard, shard_zero, start, article_ranks, config)

            for found in pool.map(run, blocks):
                for row, candidates in found.items():
                    merged.setdefault(row, []).extend(candidates)

    pairs = []
    for row, candidates in merged.items():
        candidates.sort(key=lambda c: (-c[0], article_ranks[c[1]]))
        for sim, article_row in candidates[:config.doc_neighbors]:
            pairs.append(DocPair(summary_id=summaries.ids[row], article_id=articles.ids[article_row], similarity=sim))

    pairs.sort(key=lambda p: (p.summary_id, -p.similarity, p.article_id))
    logger.info(f"📄 Doküman hizalama: {len(pairs)} çift (θ_d={config.theta_d})")
    return pairs


# --- Cümle seviyesi ---

def align_sentences(
    pair: DocPair,
    summary: Document,
    article: Document,
    provider: BaseEmbeddingProvider,
    theta_s: float,
    summary_matrix: Optional[np.ndarray] = None,
    article_matrix: Optional[np.ndarray] = None,
) -> List[SentencePair]:
    """Her özet cümlesi için tek en yakın makale cümlesi; benzerlik θ_s'in altındaysa atılır."""
    if summary.id != pair.summary_id or article.id != pair.article_id:
        raise ValueError(f"Doküman id'leri çiftle uyuşmuyor: {pair.summary_id}/{pair.article_id}")
    if not summary.sentences or not article.sentences:
        return []

    if summary_matrix is None:
        summary_matrix = provider.embed_sentences(summary.sentences)
    if article_matrix is None:
        article_matrix = provider.embed_sentences(article.sentences)

    sims = np.clip(summary_matrix @ article_matrix.T, -1.0, 1.0)
    sims[:, ~article_matrix.any(axis=1)] = -np.inf
    summary_nonzero = summary_matrix.any(axis=1)

    pairs = []
    for i, target in enumerate(summary.sentences):
        if not summary_nonzero[i]:
            continue
        j = int(np.argmax(sims[i]))  # ilk maksimum: eşitlikte küçük indeks
        similarity = float(sims[i, j])
        if similarity >= theta_s:
            pairs.append(SentencePair(
                source=article.sentences[j],
                target=target,
                similarity=similarity,
                provenance="pseudo_parallel",
                origin=(summary.id, article.id),
            ))
    return pairs


def _pair_sort_key(pair: SentencePair) -> Tuple[str, str, str, str]:
    return (pair.origin[0], pair.origin[1], pair.target.raw, pair.source.raw)


def dedupe_pairs(pairs: Iterable[SentencePair]) -> List[SentencePair]:
    """(source raw, target raw) anahtarında ilk görülen çift kalır."""
    seen: Set[Tuple[str, str]] = set()
    unique = []
    for pair in pairs:
        if pair.key in seen:
            continue
        seen.add(pair.key)
        unique.append(pair)
    return unique


def _embed_sentences(docs: Sequence[Document], provider: BaseEmbeddingProvider, desc: str) -> Dict[str, np.ndarray]:
    return {
        doc.id: provider.embed_sentences(doc.sentences)
        for doc in tqdm(docs, desc=desc, disable=not SHOW_PROGRESS)
    }


def mine(
    summaries: Iterable[Document],
    articles: Iterable[Document],
    provider: BaseEmbeddingProvider,
    config: AlignConfig = AlignConfig(),
    exclude_ids: Optional[Set[str]] = None,
    workers: int = 1,
) -> MinedDataset:
    """
    align_documents + her doküman çifti için align_sentences.
    Çiftler (origin, hedef, kaynak) sırasına dizilir ve ham metin üzerinden tekilleştirilir.
    """
    exclude_ids = exclude_ids or set()
    summary_docs = [doc for doc in summaries if doc.id not in exclude_ids and doc.sentences]
    article_docs = [doc for doc in articles if doc.id not in exclude_ids and doc.sentences]
    logger.info(f"⛏️ Madencilik başlıyor: {len(summary_docs)} özet x {len(article_docs)} makale")

    summary_matrices = _embed_sentences(summary_docs, provider, "Özet gömmeleri")
    article_matrices = _embed_sentences(article_docs, provider, "Makale gömmeleri")

    doc_pairs = align_documents(
        embed_corpus(summary_docs, provider, summary_matrices),
        embed_corpus(article_docs, provider, article_matrices),
        config,
        workers=workers,
    )

    summary_by_id = {doc.id: doc for doc in summary_docs}
    article_by_id = {doc.id: doc for doc in article_docs}

    def run(pair: DocPair) -> List[SentencePair]:
        return align_sentences(
            pair,
            summary_by_id[pair.summary_id],
            article_by_id[pair.article_id],
            provider,
            config.theta_s,
            summary_matrix=summary_matrices[pair.summary_id],
            article_matrix=article_matrices[pair.article_id],
        )

    sentence_pairs: List[SentencePair] = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = pool.map(run, doc_pairs)
        for found in tqdm(results, total=len(doc_pairs), desc="Cümle hizalama", disable=not SHOW_PROGRESS):
            sentence_pairs.extend(found)

    sentence_pairs.sort(key=_pair_sort_key)
    dataset = MinedDataset.from_pairs(dedupe_pairs(sentence_pairs))
    logger.info(f"✅ {len(dataset)} sözde-paralel çift (θ_s={config.theta_s})")
    return dataset


# --- Gerçek paralel çiftler ---

def build_parallel_pairs(articles: Iterable[Document], summaries: Iterable[Document]) -> List[SentencePair]:
    """
    Aynı id'yi paylaşan makale/özet çiftlerinde her özet cümlesini ROUGE-1 F1'i
    en yüksek makale cümlesine bağlar (eşitlikte küçük indeks). Hiç örtüşmeyen cümleler atlanır.
    """
    article_by_id = {doc.id: doc for doc in articles}
    pairs = []
    for summary in summaries:
        article = article_by_id.get(summary.id)
        if article is None or not article.sentences:
            continue
        for target in summary.sentences:
            best_index, best_f1 = 0, -1.0
            for i, sentence in enumerate(article.sentences):
                f1 = rouge_n(sentence.tokens, target.tokens, 1).f1
                if f1 > best_f1:
                    best_index, best_f1 = i, f1
            if best_f1 <= 0.0:
                continue
            pairs.append(SentencePair(
                source=article.sentences[best_index],
                target=target,
                similarity=best_f1,
                provenance="parallel",
                origin=(summary.id, article.id),
            ))

    unique = dedupe_pairs(pairs)
    logger.info(f"🧾 {len(unique)} paralel çift oluşturuldu")
    return unique
