# app/generators/identity.py

from typing import Dict, Sequence

from app.generators.base import BaseGenerator
from app.schemas.generator import GeneratorRequest, GeneratorResponse


class IdentityGenerator(BaseGenerator):
    """Girdiyi değiştirmeden tek hipotez olarak geri döndürür (echo)."""

    tag = "identity"

    def generate(self, requests: Sequence[GeneratorRequest]) -> Dict[str, GeneratorResponse]:
        return {request.id: GeneratorResponse(id=request.id, hypotheses=[request.text]) for request in requests}
