# app/core/parsers.py
# Dosya biçimleri: JSONL korpus satırları, kelime vektörü satırları ve çift TSV satırları.

import json
import math
import re
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

from app.core.errors import RecordError, WordVectorFormatError

PathLike = Union[str, Path]

# TSV sütunları: source_raw, target_raw, similarity, provenance, origin
PAIR_TSV_COLUMNS = 5
_CONTROL_RE = re.compile(r"[\t\r\n]")


def iter_jsonl(path: PathLike) -> Iterator[Tuple[int, Union[Dict[str, Any], RecordError]]]:
    """
    (satır_no, kayıt) çiftleri üretir. Bozuk satırlar için kayıt yerine RecordError
    döner; akış devam eder. Boş satırlar atlanır.
    """
    with open(path, "rb") as handle:
        for line_no, raw_line in enumerate(handle, start=1):
            try:
                line = raw_line.decode("utf-8")
            except UnicodeDecodeError as e:
                yield line_no, RecordError(line_no, f"geçersiz UTF-8: {e}")
                continue
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                yield line_no, RecordError(line_no, f"bozuk JSON: {e.msg}")
                continue
            if not isinstance(record, dict):
                yield line_no, RecordError(line_no, "satır bir JSON nesnesi değil")
                continue
            yield line_no, record


def dump_jsonl_line(record: Dict[str, Any]) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=False) + "\n"


def parse_word_vector_header(line: str) -> Optional[Tuple[int, int]]:
    """'<vocab> <dim>' başlığıysa (vocab, dim) döndürür, değilse None."""
    parts = line.split()
    if len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit():
        return int(parts[0]), int(parts[1])
    return None


def parse_word_vector_line(line: str, line_no: int, dimension: Optional[int]) -> Tuple[str, List[float]]:
    """'word v1 ... vd' satırını ayrıştırır; boyut tutarsızsa WordVectorFormatError."""
    parts = line.rstrip("\n").rstrip("\r").split(" ")
    parts = [p for p in parts if p != ""]
    if len(parts) < 2:
        raise WordVectorFormatError(line_no, "kelime ve en az bir bileşen bekleniyordu")
    word, components = parts[0], parts[1:]
    if dimension is not None and len(components) != dimension:
        raise WordVectorFormatError(line_no, f"boyut {len(components)}, beklenen {dimension}")
    values = []
    for component in components:
        try:
            value = float(component)
        except ValueError:
            raise WordVectorFormatError(line_no, f"sayısal olmayan bileşen: {component!r}") from None
        if not math.isfinite(value):
            raise WordVectorFormatError(line_no, f"sonlu olmayan bileşen: {component!r}")
        values.append(value)
    return word, values


def _clean_field(text: str) -> str:
    # Sekme ve satır sonları tek boşluğa iner
    return _CONTROL_RE.sub(" ", text)


def format_pair_line(source: str, target: str, similarity: float, provenance: str, origin: Tuple[str, str]) -> str:
    origin_field = json.dumps([_clean_field(origin[0]), _clean_field(origin[1])], ensure_ascii=False, separators=(",", ":"))
    return "\t".join([
        _clean_field(source),
        _clean_field(target),
        repr(float(similarity)),
        provenance,
        origin_field,
    ]) + "\n"


def parse_pair_line(line: str, line_no: int) -> Tuple[str, str, float, str, Tuple[str, str]]:
    parts = line.rstrip("\n").split("\t")
    if len(parts) != PAIR_TSV_COLUMNS:
        raise RecordError(line_no, f"{PAIR_TSV_COLUMNS} sütun bekleniyordu, {len(parts)} bulundu")
    source, target, similarity, provenance, origin_field = parts
    try:
        origin = json.loads(origin_field)
        if not (isinstance(origin, list) and len(origin) == 2):
            raise ValueError("origin iki elemanlı bir liste olmalı")
        return source, target, float(similarity), provenance, (str(origin[0]), str(origin[1]))
    except ValueError as e:
        raise RecordError(line_no, f"çift satırı ayrıştırılamadı: {e}") from e
