# app/schemas/corpus.py

from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator


class TokenizedSentence(BaseModel):
    """Küçük harfli token listesi + orijinal cümle metni."""
    tokens: List[str]
    raw: str

    @field_validator("tokens")
    @classmethod
    def _check_tokens(cls, tokens: List[str]) -> List[str]:
        if not tokens:
            raise ValueError("tokens boş olamaz")
        for token in tokens:
            if not token or any(ch.isspace() for ch in token):
                raise ValueError(f"Geçersiz token: {token!r}")
        return tokens


class Document(BaseModel):
    """
    Tokenize edilmiş doküman. Makaleler ve özetler (madde işaretli cümleler)
    aynı modeli kullanır.
    """
    id: str = Field(min_length=1)
    sentences: List[TokenizedSentence] = []
    source: str = ""
    doi: Optional[str] = None
    degenerate: bool = False  # cümle çıkarılamayan dokümanlar

    @model_validator(mode="after")
    def _check_sentences(self):
        if not self.sentences and not self.degenerate:
            raise ValueError(f"'{self.id}' dokümanında cümle yok ve degenerate olarak işaretlenmemiş")
        return self

    @property
    def tokens(self) -> List[str]:
        return [token for sentence in self.sentences for token in sentence.tokens]

    @property
    def text(self) -> str:
        return " ".join(sentence.raw for sentence in self.sentences)


class CorpusStats(BaseModel):
    """Cümle başına token ve doküman başına cümle dağılımları (ortalama, std)."""
    doc_count: int = 0
    sentence_count: int = 0
    token_count: int = 0
    tokens_per_sentence: Tuple[float, float] = (0.0, 0.0)
    sentences_per_doc: Tuple[float, float] = (0.0, 0.0)


class DoiLink(BaseModel):
    """Basın bülteni ile orijinal makale arasındaki DOI bağlantısı."""
    release_id: str
    paper_id: str
    doi: str
