# app/core/errors.py
# Ozetex hata hiyerarşisi. CLI, exit_code alanına bakarak çıkış kodunu belirler.

from typing import Optional


class OzetexError(Exception):
    """Tüm domain hatalarının temel sınıfı."""
    exit_code = 1


# --- Girdi / Yapılandırma Hataları (exit 2) ---

class InputError(OzetexError):
    """Kötü girdi veya yapılandırma."""
    exit_code = 2


class DegenerateSentenceError(InputError):
    """Boşluklardan başka bir şey içermeyen cümle."""


class RecordError(InputError):
    """JSONL dosyasındaki tek bir satır okunamadı."""

    def __init__(self, line: int, message: str):
        super().__init__(f"satır {line}: {message}")
        self.line = line
        self.message = message


class DuplicateDocumentError(InputError):
    """Aynı korpusta tekrar eden doküman id'si."""

    def __init__(self, doc_id: str, line: Optional[int] = None):
        where = f" (satır {line})" if line is not None else ""
        super().__init__(f"Tekrar eden doküman id'si: '{doc_id}'{where}")
        self.doc_id = doc_id
        self.line = line


class WordVectorFormatError(InputError):
    """Kelime vektörü dosyası biçim hatası."""

    def __init__(self, line: int, message: str):
        super().__init__(f"Kelime vektörü dosyası, satır {line}: {message}")
        self.line = line


class EmbeddingDimensionError(InputError):
    """Farklı boyutlu iki vektör karşılaştırıldı."""


class EmptyCorpusError(InputError):
    """Boş olmaması gereken bir korpus boş geldi."""


class ConfigError(InputError):
    """Geçersiz pipeline yapılandırması."""


class LengthMismatchError(InputError):
    """Sistem ve referans listeleri aynı uzunlukta değil."""


class IdMismatchError(InputError):
    """Sistem çıktısı ile referanslar id bazında eşleşmiyor."""

    def __init__(self, missing_id: str, side: str):
        super().__init__(f"Eşleşmeyen id: '{missing_id}' ({side} tarafında yok)")
        self.missing_id = missing_id
        self.side = side


# --- Generator (abstractor / backtranslation) Hataları (exit 1) ---

class GeneratorError(OzetexError):
    """Harici üretici süreçle ilgili hatalar."""
    exit_code = 1


class GeneratorProtocolError(GeneratorError):
    """Süreç tel protokolünü ihlal etti (bilinmeyen id, bozuk satır vb.)."""


class GeneratorProcessError(GeneratorError):
    """Süreç beklenmedik şekilde kapandı."""

    def __init__(self, message: str, pending_id: Optional[str] = None, returncode: Optional[int] = None):
        if pending_id is not None:
            message = f"{message} (bekleyen istek id: {pending_id})"
        super().__init__(message)
        self.pending_id = pending_id
        self.returncode = returncode


class PairExportError(OzetexError):
    """TSV yazımı yarıda kaldı."""
    exit_code = 1

    def __init__(self, message: str, written: int):
        super().__init__(f"{message} ({written} satır yazıldı)")
        self.written = written
