# app/schemas/mining.py

from collections import Counter
from typing import Iterable, List, Literal, Tuple

from pydantic import BaseModel, Field

from app.schemas.corpus import TokenizedSentence

Provenance = Literal["pseudo_parallel", "backtranslated", "parallel"]

# Geri çeviri çiftlerinde benzerlik tanımsızdır
UNSET_SIMILARITY = -1.0


class AlignConfig(BaseModel):
    """Hiyerarşik hizalama eşikleri (θ_d, θ_s) ve arama ayarları."""
    theta_d: float = Field(default=0.5, ge=0.0, le=1.0)
    theta_s: float = Field(default=0.63, ge=0.0, le=1.0)
    doc_neighbors: int = Field(default=5, gt=0)
    batch_size: int = Field(default=10000, gt=0)
    article_shard_size: int = Field(default=100000, gt=0)
    # Eşzamanlı benzerlik bloklarının toplam bellek sınırı (MB)
    block_memory_mb: float = Field(default=256.0, gt=0.0)


class DocPair(BaseModel):
    summary_id: str
    article_id: str
    similarity: float


class SentencePair(BaseModel):
    """Makale tarafı (source, x) -> özet tarafı (target, s)."""
    source: TokenizedSentence
    target: TokenizedSentence
    similarity: float = UNSET_SIMILARITY
    provenance: Provenance = "pseudo_parallel"
    # (summary_id, article_id ya da üretici etiketi)
    origin: Tuple[str, str]

    @property
    def key(self) -> Tuple[str, str]:
        return (self.source.raw, self.target.raw)


class MixtureStats(BaseModel):
    pseudo_parallel_count: int = 0
    backtranslated_count: int = 0
    parallel_count: int = 0
    fraction_pp: float = Field(default=0.0, ge=0.0, le=1.0)

    @classmethod
    def from_pairs(cls, pairs: Iterable[SentencePair]) -> "MixtureStats":
        counts = Counter(pair.provenance for pair in pairs)
        pp = counts["pseudo_parallel"]
        bt = counts["backtranslated"]
        total = pp + bt
        return cls(
            pseudo_parallel_count=pp,
            backtranslated_count=bt,
            parallel_count=counts["parallel"],
            fraction_pp=pp / total if total > 0 else 0.0,
        )


class MinedDataset(BaseModel):
    """Abstractor eğitim kümesi: cümle çiftleri + karışım istatistikleri."""
    pairs: List[SentencePair] = []
    stats: MixtureStats = MixtureStats()

    @classmethod
    def from_pairs(cls, pairs: List[SentencePair]) -> "MinedDataset":
        return cls(pairs=pairs, stats=MixtureStats.from_pairs(pairs))

    def __len__(self) -> int:
        return len(self.pairs)
