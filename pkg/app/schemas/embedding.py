# app/schemas/embedding.py

from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class WordVectorTable(BaseModel):
    """Önceden eğitilmiş kelime vektörleri: token -> satır indeksi + (V x d) matris."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dimension: int = Field(gt=0)
    vocab: Dict[str, int]
    matrix: np.ndarray

    def __len__(self) -> int:
        return len(self.vocab)

    def __contains__(self, token: str) -> bool:
        return token in self.vocab

    def get(self, token: str) -> Optional[np.ndarray]:
        row = self.vocab.get(token)
        return None if row is None else self.matrix[row]


class DenseEmbedding(BaseModel):
    """Birim normlu ya da sıfır (is_zero) yoğun vektör."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    is_zero: bool = False

    @property
    def dimension(self) -> int:
        return int(self.values.shape[0])


class EmbeddedCorpus(BaseModel):
    """Doküman gömmeleri: id listesi, (n x d) matris ve sıfır maskesi."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    ids: List[str]
    matrix: np.ndarray
    zero_mask: np.ndarray

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[1])


class TfIdfModel(BaseModel):
    doc_count: int = Field(ge=0)
    document_frequency: Dict[str, int] = {}

    @field_validator("document_frequency")
    @classmethod
    def _check_df(cls, df: Dict[str, int], info) -> Dict[str, int]:
        n_docs = info.data.get("doc_count", 0)
        for token, count in df.items():
            if count < 0 or count > n_docs:
                raise ValueError(f"df({token})={count}, 0..{n_docs} aralığında olmalı")
        return df


class SparseVector(BaseModel):
    """TF-IDF ağırlıkları; sıfır ağırlıklı giriş tutulmaz."""
    entries: Dict[str, float] = {}

    @field_validator("entries")
    @classmethod
    def _drop_zeros(cls, entries: Dict[str, float]) -> Dict[str, float]:
        for token, weight in entries.items():
            if weight < 0:
                raise ValueError(f"Negatif ağırlık: {token}={weight}")
        return {token: weight for token, weight in entries.items() if weight != 0}
