import json
from pathlib import Path
from typing import Dict, Iterable, List, Sequence

import numpy as np
import pytest

from app.core.tokenizer import tokenize
from app.schemas.corpus import Document
from app.schemas.embedding import WordVectorTable
from app.services.vector_service import WordVectorProvider

FIXTURES_DIR = Path(__file__).parent / "fixtures"


def make_doc(doc_id: str, sentences: Sequence[str], **kwargs) -> Document:
    return Document(id=doc_id, sentences=[tokenize(s) for s in sentences], **kwargs)


def write_jsonl(path: Path, records: Iterable[Dict]) -> Path:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    return path


def read_jsonl(path: Path) -> List[Dict]:
    with open(path, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]


def write_word_vectors(path: Path, vectors: Dict[str, Sequence[float]], header: bool = True) -> Path:
    dimension = len(next(iter(vectors.values())))
    with open(path, "w", encoding="utf-8") as handle:
        if header:
            handle.write(f"{len(vectors)} {dimension}\n")
        for word, values in vectors.items():
            handle.write(word + " " + " ".join(repr(float(v)) for v in values) + "\n")
    return path


def table_from(vectors: Dict[str, Sequence[float]]) -> WordVectorTable:
    words = list(vectors)
    matrix = np.array([vectors[w] for w in words], dtype=np.float64)
    return WordVectorTable(dimension=matrix.shape[1], vocab={w: i for i, w in enumerate(words)}, matrix=matrix)


def planted_vectors(n_pairs: int, dimension: int = 300, seed: int = 0) -> Dict[str, np.ndarray]:
    """p{i} / q{i} / z{i} kelimeleri için rastgele Gauss vektörleri (yüksek boyutta neredeyse dik)."""
    rng = np.random.default_rng(seed)
    vectors = {}
    for i in range(n_pairs):
        for prefix in ("p", "q", "z"):
            vectors[f"{prefix}{i}"] = rng.standard_normal(dimension)
    return vectors


@pytest.fixture
def tiny_vectors() -> Dict[str, List[float]]:
    return {
        "cat": [1.0, 0.0, 0.0],
        "dog": [0.9, 0.1, 0.0],
        "sat": [0.0, 1.0, 0.0],
        "ran": [0.0, 0.9, 0.1],
        "sky": [0.0, 0.0, 1.0],
        "the": [0.1, 0.1, 0.1],
    }


@pytest.fixture
def tiny_provider(tiny_vectors) -> WordVectorProvider:
    return WordVectorProvider(table_from(tiny_vectors))
