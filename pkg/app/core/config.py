# app/core/config.py

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from app.core.errors import ConfigError
from app.schemas.pipeline import PipelineConfig

# .env dosyasını yükle
load_dotenv()

# --- GÖMME (EMBEDDING) AYARLARI ---
WORD_VECTORS_PATH = os.environ.get("WORD_VECTORS_PATH")
# "word_vectors" (varsayılan) veya "sentence_transformers"
EMBEDDING_PROVIDER = os.environ.get("EMBEDDING_PROVIDER", "word_vectors")
SENTENCE_MODEL_NAME = os.environ.get("SENTENCE_MODEL_NAME", "sentence-transformers/all-MiniLM-L6-v2")

# --- ÜRETİCİ (GENERATOR) AYARLARI ---
# "identity" ya da tel protokolünü konuşan bir komut satırı
ABSTRACTOR_COMMAND = os.environ.get("ABSTRACTOR_COMMAND", "identity")
# "builtin" (gürültü ekleyici), "identity" ya da harici komut
GENERATOR_COMMAND = os.environ.get("GENERATOR_COMMAND", "builtin")
# Tek seferde sürece gönderilen istek sayısı
GENERATOR_BATCH_SIZE = int(os.environ.get("GENERATOR_BATCH_SIZE", "1000"))

# --- ÇALIŞMA AYARLARI ---
WORKERS = int(os.environ.get("WORKERS", "1"))
SEED = int(os.environ.get("SEED", "13"))
LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO").upper()
SHOW_PROGRESS = os.environ.get("SHOW_PROGRESS", "false").lower() == "true"

# Hazır ayarların (cnndm.json, science.json) bulunduğu klasör
PRESETS_DIR = Path(os.environ.get("PRESETS_DIR", Path(__file__).resolve().parents[2] / "presets"))


def _deep_merge(base: Dict[str, Any], extra: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _env_defaults() -> Dict[str, Any]:
    return {
        "abstractor_command": ABSTRACTOR_COMMAND,
        "generator_command": GENERATOR_COMMAND,
        "word_vectors_path": WORD_VECTORS_PATH,
        "embedding_provider": EMBEDDING_PROVIDER,
        "workers": WORKERS,
        "seed": SEED,
    }


def load_pipeline_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> PipelineConfig:
    """
    Pipeline yapılandırmasını oluşturur.
    Öncelik sırası: ortam değişkenleri < JSON dosyası < komut satırı bayrakları.
    `path` bir dosya değilse presets/ altında '<path>.json' aranır.
    """
    data = _env_defaults()

    if path:
        config_path = Path(path)
        if not config_path.exists():
            preset = PRESETS_DIR / f"{path}.json"
            if preset.exists():
                config_path = preset
        try:
            file_data = json.loads(config_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Yapılandırma dosyası okunamadı ({path}): {e}") from e
        if not isinstance(file_data, dict):
            raise ConfigError(f"Yapılandırma dosyası bir JSON nesnesi olmalı: {path}")
        data = _deep_merge(data, file_data)

    # None değerli bayraklar verilmemiş sayılır
    clean_overrides = {}
    for key, value in (overrides or {}).items():
        if isinstance(value, dict):
            value = {k: v for k, v in value.items() if v is not None}
            if not value:
                continue
        elif value is None:
            continue
        clean_overrides[key] = value
    data = _deep_merge(data, clean_overrides)

    try:
        return PipelineConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Geçersiz yapılandırma: {e}") from e
