# app/schemas/generator.py
# Üretici / abstractor tel protokolü mesajları (satır başına bir JSON nesnesi)

from typing import List

from pydantic import BaseModel, Field


class GeneratorRequest(BaseModel):
    id: str
    text: str
    j: int = Field(default=1, ge=1)


class GeneratorResponse(BaseModel):
    id: str
    hypotheses: List[str]  # en iyisi başta; alan zorunlu
