# app/generators/__init__.py

from app.core.config import SEED
from app.generators.base import BaseGenerator
from app.generators.identity import IdentityGenerator
from app.generators.noising import NoisingGenerator, builtin_noising_generator
from app.generators.subprocess_generator import SubprocessGenerator


def get_generator(command: str, seed: int = SEED) -> BaseGenerator:
    """'identity', 'builtin' ya da tel protokolünü konuşan bir komut satırı."""
    name = (command or "").strip()

    if name.lower() in ("identity", "echo"):
        return IdentityGenerator()
    if name.lower() in ("builtin", "noise"):
        return NoisingGenerator(seed)

    return SubprocessGenerator(name)


__all__ = [
    "BaseGenerator",
    "IdentityGenerator",
    "NoisingGenerator",
    "SubprocessGenerator",
    "builtin_noising_generator",
    "get_generator",
]
