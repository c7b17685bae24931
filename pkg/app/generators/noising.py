# app/generators/noising.py
# Sinir ağı olmadan pipeline'ı test edebilmek için deterministik geri çeviri yerine geçeni:
# tohumlu token düşürme + 3'lük pencere içinde yerel karıştırma.

import random
from typing import Dict, List, Sequence

from app.generators.base import BaseGenerator
from app.schemas.generator import GeneratorRequest, GeneratorResponse

DROPOUT_PROBABILITY = 0.1
SWAP_WINDOW = 3
# Aynı varyant tekrar üretilirse bir hipotez için denenecek en fazla tohum
MAX_ATTEMPTS = 10


def noise_tokens(tokens: Sequence[str], rng: random.Random) -> List[str]:
    kept = [token for token in tokens if rng.random() >= DROPOUT_PROBABILITY]
    if not kept:
        # En az bir token kalır
        kept = [tokens[rng.randrange(len(tokens))]]
    # i + U(0, 3) anahtarıyla sıralama: hiçbir token 3 konumdan fazla kaymaz
    keys = [i + rng.uniform(0, SWAP_WINDOW) for i in range(len(kept))]
    order = sorted(range(len(kept)), key=lambda i: keys[i])
    return [kept[i] for i in order]


def builtin_noising_generator(sentence: str, seed: int, j: int) -> List[str]:
    """
    En fazla j farklı varyant döndürür. Her hipotez (sentence, seed, hipotez indeksi,
    deneme) dörtlüsüyle tohumlanır; kısa cümlelerde j'den az varyant çıkabilir.
    """
    tokens = sentence.split()
    if not tokens:
        return []

    variants: List[str] = []
    seen = set()
    for h in range(j):
        for attempt in range(MAX_ATTEMPTS):
            rng = random.Random(f"{seed}|{h}|{attempt}|{sentence}")
            variant = " ".join(noise_tokens(tokens, rng))
            if variant not in seen:
                seen.add(variant)
                variants.append(variant)
                break
    return variants


class NoisingGenerator(BaseGenerator):
    tag = "builtin-noise"

    def __init__(self, seed: int):
        self.seed = seed

    def generate(self, requests: Sequence[GeneratorRequest]) -> Dict[str, GeneratorResponse]:
        return {
            request.id: GeneratorResponse(
                id=request.id,
                hypotheses=builtin_noising_generator(request.text, self.seed, request.j),
            )
            for request in requests
        }
