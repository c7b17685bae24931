# app/services/pipeline_service.py
# Alt komutların iş mantığı: her cmd_* fonksiyonu dosya yollarını ve PipelineConfig'i
# alır, ilgili servisleri çağırır ve sonucu döndürür (yazdırma CLI'ın işidir).

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Set, Tuple, TypeVar

from app.core import parsers
from app.core.config import GENERATOR_BATCH_SIZE
from app.core.errors import GeneratorProtocolError, IdMismatchError, RecordError
from app.core.parsers import PathLike
from app.generators import get_generator
from app.schemas.corpus import CorpusStats, Document, DoiLink, TokenizedSentence
from app.schemas.extract import ExtractedSummary
from app.schemas.generator import GeneratorRequest
from app.schemas.metrics import EvalReport
from app.schemas.mining import MinedDataset, MixtureStats, SentencePair
from app.schemas.pipeline import PipelineConfig, SummaryResult
from app.services import (
    corpus_service,
    extractor_service,
    metrics_service,
    miner_service,
    synth_service,
    vector_service,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _load(path: PathLike, errors: Optional[List[RecordError]] = None) -> List[Document]:
    return list(corpus_service.ingest_jsonl(path, errors=errors))


def _shards(items: Sequence[T], count: int) -> List[Sequence[T]]:
    """Girdiyi sırayı koruyan `count` ardışık parçaya böler."""
    count = max(1, min(count, len(items)))
    size, extra = divmod(len(items), count)
    shards, start = [], 0
    for i in range(count):
        stop = start + size + (1 if i < extra else 0)
        shards.append(items[start:stop])
        start = stop
    return shards


def _match_by_id(
    references: Sequence[Document],
    others: Sequence[Document],
    other_side: str,
) -> List[Tuple[Document, Document]]:
    """Referans sırasıyla (referans, diğer) çiftleri; eksik id'de IdMismatchError."""
    by_id = {doc.id: doc for doc in others}
    for doc in references:
        if doc.id not in by_id:
            raise IdMismatchError(doc.id, other_side)
    reference_ids = {doc.id for doc in references}
    for doc in others:
        if doc.id not in reference_ids:
            raise IdMismatchError(doc.id, "reference")
    return [(ref, by_id[ref.id]) for ref in references]


# --- ingest / stats / doilink ---

def cmd_ingest(input_path: PathLike, out_path: PathLike, source: str = "") -> Dict[str, int]:
    errors: List[RecordError] = []
    written = corpus_service.write_documents_jsonl(corpus_service.ingest_jsonl(input_path, source, errors), out_path)
    logger.info(f"📥 {written} doküman yazıldı, {len(errors)} satır atlandı")
    return {"documents": written, "skipped_lines": len(errors)}


def cmd_stats(corpus_path: PathLike) -> CorpusStats:
    return corpus_service.corpus_stats(corpus_service.ingest_jsonl(corpus_path))


def cmd_doilink(releases_path: PathLike, papers_path: PathLike) -> List[DoiLink]:
    return corpus_service.link_by_doi(_load(releases_path), _load(papers_path))


def read_excluded_ids(doilink_path: PathLike) -> Set[str]:
    """doilink çıktısındaki bülten ve makale id'leri."""
    excluded: Set[str] = set()
    for line_no, record in parsers.iter_jsonl(doilink_path):
        if isinstance(record, RecordError):
            raise record
        for key in ("release_id", "paper_id"):
            if isinstance(record.get(key), str):
                excluded.add(record[key])
    return excluded


# --- mine / parallel / synth ---

def cmd_mine(
    summaries_path: PathLike,
    articles_path: PathLike,
    config: PipelineConfig,
    out_path: PathLike,
    exclude_path: Optional[PathLike] = None,
) -> MixtureStats:
    summaries = _load(summaries_path)
    articles = _load(articles_path)
    exclude_ids = read_excluded_ids(exclude_path) if exclude_path else None

    provider = vector_service.get_embedding_provider(config.embedding_provider, config.word_vectors_path)
    dataset = miner_service.mine(
        summaries, articles, provider, config.align, exclude_ids=exclude_ids, workers=config.workers,
    )
    synth_service.export_training_pairs(dataset, out_path)
    return dataset.stats


def cmd_parallel(articles_path: PathLike, summaries_path: PathLike, out_path: PathLike) -> MixtureStats:
    pairs = miner_service.build_parallel_pairs(_load(articles_path), _load(summaries_path))
    dataset = MinedDataset.from_pairs(pairs)
    synth_service.export_training_pairs(dataset, out_path)
    return dataset.stats


def _expand_shard(shard: Sequence[Tuple[str, TokenizedSentence]], config: PipelineConfig) -> List[SentencePair]:
    with get_generator(config.generator_command, config.seed) as generator:
        return synth_service.expand_with_backtranslation(shard, generator, config.j_hypotheses)


def cmd_synth(
    pairs_paths: Sequence[PathLike],
    summaries_path: PathLike,
    config: PipelineConfig,
    out_path: PathLike,
) -> MixtureStats:
    """
    Tüm özet cümlelerini j_hypotheses hipotezle genişletir ve verilen çift TSV'leriyle
    (sözde-paralel ve/veya paralel) birleştirir. Dosyalar verildiği sırayla okunur.
    Her işçi kendi üretici sürecini kullanır; parçalar girdi sırasıyla birleştirilir.
    """
    existing: List[SentencePair] = []
    for path in pairs_paths:
        existing.extend(synth_service.read_training_pairs(path).pairs)
    pp = MinedDataset.from_pairs(existing)
    sentences = [(doc.id, sentence) for doc in _load(summaries_path) for sentence in doc.sentences]

    bt: List[SentencePair] = []
    if sentences:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            for found in pool.map(lambda shard: _expand_shard(shard, config), _shards(sentences, config.workers)):
                bt.extend(found)

    dataset = synth_service.merge_datasets(pp, bt)
    synth_service.export_training_pairs(dataset, out_path)
    return dataset.stats


# --- extract / summarize / oracle / eval ---

def cmd_extract(
    articles_path: PathLike,
    config: PipelineConfig,
    summaries_path: Optional[PathLike] = None,
) -> List[ExtractedSummary]:
    """`summaries_path` verilirse K özet korpusundan tahmin edilir."""
    extract_config = config.extract
    if summaries_path:
        k = extractor_service.estimate_k(corpus_service.ingest_jsonl(summaries_path))
        extract_config = extract_config.model_copy(update={"k": k})
    articles = _load(articles_path)
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(lambda doc: extractor_service.extract(doc, extract_config), articles))


def _summarize_shard(docs: Sequence[Document], config: PipelineConfig) -> List[SummaryResult]:
    extracted = [extractor_service.extract(doc, config.extract) for doc in docs]
    requests = [
        GeneratorRequest(id=f"{summary.doc_id}#{pick.index}", text=pick.sentence.raw, j=1)
        for summary in extracted
        for pick in summary.picks
    ]

    paraphrases: Dict[str, str] = {}
    with get_generator(config.abstractor_command, config.seed) as abstractor:
        for start in range(0, len(requests), GENERATOR_BATCH_SIZE):
            for request_id, response in abstractor.generate(requests[start:start + GENERATOR_BATCH_SIZE]).items():
                if not response.hypotheses or not response.hypotheses[0].strip():
                    raise GeneratorProtocolError(f"'{request_id}' için parafraz gelmedi")
                paraphrases[request_id] = response.hypotheses[0]

    return [
        SummaryResult(
            doc_id=summary.doc_id,
            extracted=summary,
            abstracted=[paraphrases[f"{summary.doc_id}#{pick.index}"] for pick in summary.picks],
        )
        for summary in extracted
    ]


def cmd_summarize(articles_path: PathLike, config: PipelineConfig) -> List[SummaryResult]:
    """Çıkar + parafrazla. Her işçi kendi abstractor sürecini kullanır; çıktı girdi sırasındadır."""
    articles = _load(articles_path)
    results: List[SummaryResult] = []
    if not articles:
        return results
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        for shard_results in pool.map(lambda shard: _summarize_shard(shard, config), _shards(articles, config.workers)):
            results.extend(shard_results)
    logger.info(f"📝 {len(results)} özet üretildi (abstractor: {config.abstractor_command})")
    return results


def cmd_eval(system_path: PathLike, reference_path: PathLike, workers: int = 1) -> EvalReport:
    """Sistem ve referans JSONL'leri id ile eşleştirilir; metin küçük harfli token'lar üzerinden puanlanır."""
    pairs = _match_by_id(_load(reference_path), _load(system_path), "system")
    return metrics_service.evaluate(
        [system.tokens for _, system in pairs],
        [reference.tokens for reference, _ in pairs],
        workers=workers,
    )


def cmd_oracle(
    articles_path: PathLike,
    references_path: PathLike,
    workers: int = 1,
) -> Tuple[List[ExtractedSummary], EvalReport]:
    pairs = _match_by_id(_load(references_path), _load(articles_path), "articles")
    summaries = [extractor_service.oracle_extract(article, reference) for reference, article in pairs]
    report = metrics_service.evaluate(
        [summary.tokens for summary in summaries],
        [reference.tokens for reference, _ in pairs],
        workers=workers,
    )
    return summaries, report
