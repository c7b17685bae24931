# app/core/tokenizer.py
# Kural tabanlı cümle bölücü ve küçük harfli, noktalamayı ayıran tokenizer.

import re
from typing import List

from app.core.errors import DegenerateSentenceError
from app.schemas.corpus import TokenizedSentence

# Sonunda nokta olmasına rağmen cümle bitirmeyen kısaltmalar (küçük harf, sondaki nokta olmadan)
ABBREVIATIONS = frozenset({
    "dr", "mr", "mrs", "ms", "prof", "sr", "jr", "st", "mt",
    "fig", "figs", "eq", "eqs", "ref", "refs", "vol", "no", "nos", "pp",
    "vs", "etc", "approx", "e.g", "i.e", "cf", "ca", "inc", "ltd", "co", "corp",
    "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec",
    "u.s", "u.k",
})

# Cümle sonu: . ! ? (tekrarlanabilir), ardından kapanan tırnak/parantez, sonra boşluk ya da metin sonu
_BOUNDARY_RE = re.compile(r"[.!?]+[\"'\)\]]*(?=\s|$)")
_TOKEN_RE = re.compile(r"\w+|[^\w\s]")
_LEADING_PUNCT = "\"'([{"


def _ends_with_abbreviation(prefix: str) -> bool:
    """`prefix` sondaki noktaya kadar olan metin; son kelime kısaltma mı?"""
    words = prefix.split()
    if not words:
        return False
    last = words[-1].lower().lstrip(_LEADING_PUNCT).rstrip(".")
    if last in ABBREVIATIONS:
        return True
    # "et al."
    if last == "al" and len(words) >= 2 and words[-2].lower().lstrip(_LEADING_PUNCT) == "et":
        return True
    return False


def split_sentences(text: str) -> List[str]:
    """
    Metni cümlelere böler. Sınırlar . ! ? işaretlerinden sonra (ve bir boşluktan
    önce) konur; kısaltma listesindeki bir kelimeyle biten noktalar sınır sayılmaz.
    """
    if not text:
        return []

    sentences = []
    start = 0
    for match in _BOUNDARY_RE.finditer(text):
        if match.group().startswith(".") and _ends_with_abbreviation(text[start:match.start() + 1]):
            continue
        sentence = text[start:match.end()].strip()
        if sentence:
            sentences.append(sentence)
        start = match.end()

    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize_words(sentence: str) -> List[str]:
    """Küçük harfe çevirip kelime ve noktalama token'larına ayırır (doğrulama yok)."""
    return _TOKEN_RE.findall(sentence.lower())


def tokenize(sentence: str) -> TokenizedSentence:
    """
    Tek bir cümleyi TokenizedSentence'a çevirir.
    Sadece boşluktan oluşan girdi DegenerateSentenceError fırlatır.
    """
    raw = sentence.strip()
    tokens = tokenize_words(raw)
    if not tokens:
        raise DegenerateSentenceError(f"Boş cümle tokenize edilemez: {sentence!r}")
    return TokenizedSentence.model_construct(tokens=tokens, raw=raw)
