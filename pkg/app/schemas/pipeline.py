# app/schemas/pipeline.py

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from app.schemas.extract import ExtractConfig, ExtractedSummary
from app.schemas.mining import AlignConfig


class PipelineConfig(BaseModel):
    """Tüm alt komutların paylaştığı deney kaydı (K, t, θ_d, θ_s, J, ...)."""
    extract: ExtractConfig = ExtractConfig()
    align: AlignConfig = AlignConfig()
    j_hypotheses: int = Field(default=5, ge=1)
    abstractor_command: str = "identity"
    generator_command: str = "builtin"
    word_vectors_path: Optional[str] = None
    embedding_provider: Literal["word_vectors", "sentence_transformers"] = "word_vectors"
    workers: int = Field(default=1, ge=1)
    seed: int = 13


class SummaryResult(BaseModel):
    doc_id: str
    extracted: ExtractedSummary
    abstracted: List[str] = []

    @model_validator(mode="after")
    def _check_lengths(self):
        if len(self.abstracted) != len(self.extracted.picks):
            raise ValueError(
                f"'{self.doc_id}': {len(self.extracted.picks)} cümle çıkarıldı ama "
                f"{len(self.abstracted)} parafraz var"
            )
        return self

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "id": self.doc_id,
            "indices": self.extracted.indices,
            "extracted": [pick.sentence.raw for pick in self.extracted.picks],
            "abstracted": self.abstracted,
            "text": " ".join(self.abstracted),
        }
