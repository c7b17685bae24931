# app/schemas/extract.py

from typing import Any, Dict, List, Literal

from pydantic import BaseModel, Field, model_validator

from app.schemas.corpus import TokenizedSentence

ExtractMethod = Literal["lead", "lexrank"]


class ExtractConfig(BaseModel):
    """K ve LexRank parametreleri (eşik t, damping, yakınsama)."""
    k: int = Field(default=4, gt=0)
    method: ExtractMethod = "lead"
    lexrank_threshold: float = Field(default=0.1, ge=0.0, le=1.0)
    damping: float = Field(default=0.85, gt=0.0, lt=1.0)
    epsilon: float = Field(default=1e-8, gt=0.0)
    max_iterations: int = Field(default=200, gt=0)


class ExtractedPick(BaseModel):
    index: int = Field(ge=0)
    sentence: TokenizedSentence


class ExtractedSummary(BaseModel):
    """Seçilen cümleler, orijinal doküman sırasında."""
    doc_id: str
    picks: List[ExtractedPick] = []

    @model_validator(mode="after")
    def _check_order(self):
        indices = self.indices
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError(f"'{self.doc_id}': indeksler kesin artan olmalı: {indices}")
        return self

    @property
    def indices(self) -> List[int]:
        return [pick.index for pick in self.picks]

    @property
    def tokens(self) -> List[str]:
        return [token for pick in self.picks for token in pick.sentence.tokens]

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "id": self.doc_id,
            "indices": self.indices,
            "sentences": [pick.sentence.raw for pick in self.picks],
        }
