# app/generators/worker.py
# Yerleşik üreticiyi tel protokolü üzerinden sunar:
#   python -m app.generators.worker --mode builtin --seed 13

import argparse
import logging
import sys
from typing import IO, List, Optional

from pydantic import ValidationError

from app.core.config import SEED
from app.generators import get_generator
from app.generators.base import BaseGenerator
from app.schemas.generator import GeneratorRequest

logger = logging.getLogger(__name__)


def serve(generator: BaseGenerator, stdin: IO[str], stdout: IO[str]) -> int:
    stdout.write('{"ready": true}\n')
    stdout.flush()

    for line in stdin:
        if not line.strip():
            continue
        try:
            request = GeneratorRequest.model_validate_json(line)
        except ValidationError as e:
            logger.error(f"❌ Bozuk istek satırı: {e}")
            return 1
        response = generator.generate([request])[request.id]
        stdout.write(response.model_dump_json() + "\n")
        stdout.flush()
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Ozetex üretici süreci (JSON satır protokolü)")
    parser.add_argument("--mode", default="builtin", choices=["builtin", "identity"])
    parser.add_argument("--seed", type=int, default=SEED)
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    # Tel protokolü her zaman UTF-8
    sys.stdin.reconfigure(encoding="utf-8")
    sys.stdout.reconfigure(encoding="utf-8")
    with get_generator(args.mode, args.seed) as generator:
        return serve(generator, sys.stdin, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
