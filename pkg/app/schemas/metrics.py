# app/schemas/metrics.py

from typing import Any, Dict, List

from pydantic import BaseModel, Field


class MetricTriple(BaseModel):
    precision: float = Field(default=0.0, ge=0.0, le=1.0, serialization_alias="p")
    recall: float = Field(default=0.0, ge=0.0, le=1.0, serialization_alias="r")
    f1: float = Field(default=0.0, ge=0.0, le=1.0)

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "MetricTriple":
        denom = precision + recall
        f1 = 2 * precision * recall / denom if denom > 0 else 0.0
        return cls(precision=precision, recall=recall, f1=f1)


class EvalReport(BaseModel):
    """Değerlendirme raporu: ROUGE-1/2/L, METEOR ve ortalama token sayısı."""
    rouge1: MetricTriple = MetricTriple()
    rouge2: MetricTriple = MetricTriple()
    rougeL: MetricTriple = MetricTriple()
    meteor: float = Field(default=0.0, ge=0.0, le=1.0)
    avg_tokens: float = Field(default=0.0, ge=0.0)
    n_examples: int = 0

    def to_json_dict(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True)

    def table_row(self, name: str) -> List[Any]:
        """x100 ölçekli tablo satırı."""
        return [
            name,
            round(self.rouge1.f1 * 100, 2),
            round(self.rouge2.f1 * 100, 2),
            round(self.rougeL.f1 * 100, 2),
            round(self.meteor * 100, 2),
            round(self.avg_tokens),
        ]


TABLE_HEADERS = ["Approach", "R-1", "R-2", "R-L", "MET", "#"]
