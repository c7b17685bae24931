# app/generators/base.py

from abc import ABC, abstractmethod
from typing import Dict, Sequence

from app.schemas.generator import GeneratorRequest, GeneratorResponse


class BaseGenerator(ABC):
    """
    Geri çeviri üreticisi ve abstractor için ortak arayüz.
    İstekler id ile eşleştirilir; yanıt sözlüğü her istek id'sini içerir.
    """

    # SentencePair.origin alanına yazılan etiket
    tag: str = "generator"

    @abstractmethod
    def generate(self, requests: Sequence[GeneratorRequest]) -> Dict[str, GeneratorResponse]:
        """İstek listesini işler, {id: yanıt} döndürür."""
        pass

    def close(self):
        """Kaynakları bırak (alt süreç vb.)."""
        pass

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()
        return False
