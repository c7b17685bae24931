# app/services/synth_service.py
# Sözde-paralel çekirdeği geri çeviri hipotezleriyle genişletir ve abstractor
# eğitim kümesini (TSV) oluşturur.

import logging
from typing import Dict, List, Sequence, Tuple

from tqdm import tqdm

from app.core import parsers
from app.core.config import GENERATOR_BATCH_SIZE, SHOW_PROGRESS
from app.core.errors import DegenerateSentenceError, GeneratorProtocolError, PairExportError, RecordError
from app.core.parsers import PathLike
from app.core.tokenizer import tokenize
from app.generators import BaseGenerator, builtin_noising_generator
from app.schemas.corpus import TokenizedSentence
from app.schemas.generator import GeneratorRequest
from app.schemas.mining import UNSET_SIMILARITY, MinedDataset, SentencePair

logger = logging.getLogger(__name__)

# Çakışmada küçük değer kazanır
PROVENANCE_PRIORITY: Dict[str, int] = {"parallel": 0, "pseudo_parallel": 1, "backtranslated": 2}

__all__ = [
    "builtin_noising_generator",
    "expand_with_backtranslation",
    "merge_datasets",
    "export_training_pairs",
    "read_training_pairs",
]


def expand_with_backtranslation(
    summary_sentences: Sequence[Tuple[str, TokenizedSentence]],
    generator: BaseGenerator,
    j: int,
    batch_size: int = GENERATOR_BATCH_SIZE,
) -> List[SentencePair]:
    """
    Her (summary_id, özet cümlesi) için en fazla j (hipotez -> özet cümlesi) çifti.
    Çıktı, girdi sırasını ve her cümle içinde hipotez sırasını korur.
    """
    if j < 1:
        raise ValueError(f"j >= 1 olmalı: {j}")

    pairs: List[SentencePair] = []
    skipped = 0
    batches = range(0, len(summary_sentences), batch_size)
    for start in tqdm(batches, desc="Geri çeviri", disable=not SHOW_PROGRESS):
        batch = summary_sentences[start:start + batch_size]
        requests = [
            GeneratorRequest(id=str(start + offset), text=sentence.raw, j=j)
            for offset, (_, sentence) in enumerate(batch)
        ]
        responses = generator.generate(requests)

        for request, (summary_id, target) in zip(requests, batch):
            response = responses.get(request.id)
            if response is None:
                raise GeneratorProtocolError(f"'{request.id}' isteği için yanıt gelmedi")
            if len(response.hypotheses) > j:
                raise GeneratorProtocolError(
                    f"'{request.id}' için {len(response.hypotheses)} hipotez geldi, en fazla {j} istendi"
                )
            if not response.hypotheses:
                skipped += 1
                logger.warning(f"⚠️ '{summary_id}' özet cümlesi için hipotez gelmedi, atlanıyor: {target.raw[:80]}")
                continue
            for hypothesis in response.hypotheses:
                try:
                    source = tokenize(hypothesis)
                except DegenerateSentenceError:
                    raise GeneratorProtocolError(f"'{request.id}' için boş hipotez") from None
                pairs.append(SentencePair(
                    source=source,
                    target=target,
                    similarity=UNSET_SIMILARITY,
                    provenance="backtranslated",
                    origin=(summary_id, generator.tag),
                ))

    logger.info(f"🔁 {len(summary_sentences)} özet cümlesinden {len(pairs)} sentetik çift ({skipped} atlandı)")
    return pairs


def merge_datasets(pp: MinedDataset, bt: Sequence[SentencePair]) -> MinedDataset:
    """
    pp + bt birleştirmesi; (source raw, target raw) çakışmalarında
    parallel > pseudo_parallel > backtranslated. Sıra birleştirme sırasıdır.
    """
    combined = list(pp.pairs) + list(bt)
    winners: Dict[Tuple[str, str], SentencePair] = {}
    for pair in combined:
        current = winners.get(pair.key)
        if current is None or PROVENANCE_PRIORITY[pair.provenance] < PROVENANCE_PRIORITY[current.provenance]:
            winners[pair.key] = pair

    merged = []
    emitted = set()
    for pair in combined:
        if pair.key in emitted or winners[pair.key] is not pair:
            continue
        emitted.add(pair.key)
        merged.append(pair)

    dataset = MinedDataset.from_pairs(merged)
    logger.info(
        f"🧩 Birleştirildi: {len(dataset)} çift "
        f"(pp={dataset.stats.pseudo_parallel_count}, bt={dataset.stats.backtranslated_count}, "
        f"oran={dataset.stats.fraction_pp:.3f})"
    )
    return dataset


def export_training_pairs(dataset: MinedDataset, path: PathLike) -> int:
    """Çift TSV'si yazar; yazılan satır sayısını döndürür."""
    written = 0
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            for pair in dataset.pairs:
                handle.write(parsers.format_pair_line(
                    pair.source.raw, pair.target.raw, pair.similarity, pair.provenance, pair.origin,
                ))
                written += 1
    except OSError as e:
        raise PairExportError(f"Çift dosyası yazılamadı ({path}): {e}", written) from e
    logger.info(f"💾 {written} çift yazıldı: {path}")
    return written


def read_training_pairs(path: PathLike) -> MinedDataset:
    """export_training_pairs çıktısını geri okur."""
    pairs = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip("\r\n"):
                continue
            source, target, similarity, provenance, origin = parsers.parse_pair_line(line.rstrip("\r\n"), line_no)
            if provenance not in PROVENANCE_PRIORITY:
                raise RecordError(line_no, f"bilinmeyen provenance: {provenance!r}")
            try:
                pairs.append(SentencePair(
                    source=tokenize(source),
                    target=tokenize(target),
                    similarity=similarity,
                    provenance=provenance,
                    origin=origin,
                ))
            except DegenerateSentenceError as e:
                raise RecordError(line_no, str(e)) from e
    return MinedDataset.from_pairs(pairs)
