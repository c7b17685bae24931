# app/services/corpus_service.py
# Ham JSONL korpuslarını tokenize edilmiş Document akışına çevirir, korpus
# istatistiklerini hesaplar ve basın bültenlerindeki DOI'leri yakalar.

import logging
import math
import re
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from pydantic import ValidationError

from app.core import parsers
from app.core.errors import DegenerateSentenceError, DuplicateDocumentError, RecordError
from app.core.parsers import PathLike
from app.core.tokenizer import split_sentences, tokenize
from app.schemas.corpus import CorpusStats, Document, DoiLink, TokenizedSentence

logger = logging.getLogger(__name__)

# 10.<4-9 rakam>/<boşluk olmayan sonek>
_DOI_RE = re.compile(r"(?<!\d)10\.\d{4,9}/\S+")
_DOI_TRAILING = ".,;:!?"
_DOI_QUOTES = "\"'\u2018\u2019\u201c\u201d\u00ab\u00bb"
_DOI_BRACKETS = {")": "(", "]": "["}


def _tokenize_all(sentences: Iterable[str]) -> List[TokenizedSentence]:
    tokenized = []
    for sentence in sentences:
        try:
            tokenized.append(tokenize(sentence))
        except DegenerateSentenceError:
            continue
    return tokenized


def document_from_record(record: Dict, line_no: int, default_source: str = "") -> Document:
    """Tek bir JSONL kaydını Document'a çevirir; eksik/bozuk alanlar RecordError."""
    doc_id = record.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise RecordError(line_no, "'id' alanı boş olmayan bir string olmalı")

    if isinstance(record.get("sentences"), list):
        raw_sentences = record["sentences"]
        if not all(isinstance(s, str) for s in raw_sentences):
            raise RecordError(line_no, "'sentences' string dizisi olmalı")
    elif isinstance(record.get("text"), str):
        raw_sentences = split_sentences(record["text"])
    else:
        raise RecordError(line_no, "'text' ya da 'sentences' alanı gerekli")

    sentences = _tokenize_all(raw_sentences)
    source = record.get("source", default_source)
    doi = record.get("doi")
    try:
        return Document(
            id=doc_id,
            sentences=sentences,
            source=source if isinstance(source, str) else default_source,
            doi=doi if isinstance(doi, str) and doi else None,
            degenerate=not sentences,
        )
    except ValidationError as e:
        raise RecordError(line_no, str(e)) from e


def ingest_jsonl(
    path: PathLike,
    source: str = "",
    errors: Optional[List[RecordError]] = None,
) -> Iterator[Document]:
    """
    JSONL korpusunu dosya sırasıyla Document olarak akıtır.
    Bozuk satırlar loglanır (ve verildiyse `errors` listesine eklenir), akış sürer.
    Tekrar eden id korpus seviyesinde hatadır: DuplicateDocumentError.
    """
    seen_ids = set()
    for line_no, record in parsers.iter_jsonl(path):
        if isinstance(record, RecordError):
            error = record
        else:
            try:
                doc = document_from_record(record, line_no, default_source=source)
            except RecordError as e:
                error = e
            else:
                if doc.id in seen_ids:
                    raise DuplicateDocumentError(doc.id, line_no)
                seen_ids.add(doc.id)
                if doc.degenerate:
                    logger.warning(f"⚠️ '{doc.id}' dokümanından cümle çıkarılamadı (satır {line_no})")
                yield doc
                continue

        logger.error(f"❌ {path}: {error}, satır atlanıyor")
        if errors is not None:
            errors.append(error)


def write_documents_jsonl(docs: Iterable[Document], path: PathLike) -> int:
    """Kanonik biçimde (id, source, sentences, doi) yazar; yazılan doküman sayısını döndürür."""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for doc in docs:
            record = {"id": doc.id, "source": doc.source, "sentences": [s.raw for s in doc.sentences]}
            if doc.doi:
                record["doi"] = doc.doi
            handle.write(parsers.dump_jsonl_line(record))
            count += 1
    return count


def _strip_doi_tail(doi: str) -> str:
    """Sondaki noktalama, tırnak ve eşi olmayan kapanış parantezlerini atar; dengeli parantez korunur."""
    while doi:
        last = doi[-1]
        if last in _DOI_TRAILING or last in _DOI_QUOTES:
            doi = doi[:-1]
        elif last in _DOI_BRACKETS and doi.count(last) > doi.count(_DOI_BRACKETS[last]):
            doi = doi[:-1]
        else:
            break
    return doi


def detect_dois(text: str) -> List[str]:
    """Metindeki DOI'leri görünme sırasıyla döndürür (tekrarlar korunur)."""
    dois = []
    for match in _DOI_RE.finditer(text or ""):
        doi = _strip_doi_tail(match.group())
        # "10.1234/" gibi soneki kalmayan eşleşmeler atlanır
        if doi.split("/", 1)[1]:
            dois.append(doi)
    return dois


def _mean_std(count: int, total: int, total_sq: int) -> Tuple[float, float]:
    """Tam sayı toplamlarından ortalama ve popülasyon std (akış ile toplu hesap aynı sonucu verir)."""
    if count == 0:
        return 0.0, 0.0
    mean = total / count
    variance_num = count * total_sq - total * total  # n^2 * var, tam sayı
    return mean, math.sqrt(variance_num) / count


def corpus_stats(corpus: Iterable[Document]) -> CorpusStats:
    doc_count = sentence_count = 0
    sent_total = sent_total_sq = 0
    tok_total = tok_total_sq = 0

    for doc in corpus:
        n_sentences = len(doc.sentences)
        doc_count += 1
        sent_total += n_sentences
        sent_total_sq += n_sentences * n_sentences
        for sentence in doc.sentences:
            n_tokens = len(sentence.tokens)
            sentence_count += 1
            tok_total += n_tokens
            tok_total_sq += n_tokens * n_tokens

    return CorpusStats(
        doc_count=doc_count,
        sentence_count=sentence_count,
        token_count=tok_total,
        tokens_per_sentence=_mean_std(sentence_count, tok_total, tok_total_sq),
        sentences_per_doc=_mean_std(doc_count, sent_total, sent_total_sq),
    )


def link_by_doi(releases: Iterable[Document], papers: Iterable[Document]) -> List[DoiLink]:
    """
    Basın bültenlerini, metinlerinde geçen DOI üzerinden makalelere bağlar.
    Her bülten için, bilinen bir makale DOI'sine eşleşen ilk DOI kullanılır.
    """
    paper_by_doi: Dict[str, str] = {}
    for paper in papers:
        if paper.doi:
            paper_by_doi.setdefault(paper.doi.lower(), paper.id)

    links = []
    for release in releases:
        for doi in detect_dois(release.text):
            paper_id = paper_by_doi.get(doi.lower())
            if paper_id is not None:
                links.append(DoiLink(release_id=release.id, paper_id=paper_id, doi=doi))
                break

    logger.info(f"🔗 DOI eşleştirmesi: {len(links)} bülten bir makaleye bağlandı")
    return links
