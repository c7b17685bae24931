# app/generators/subprocess_generator.py
# Tel protokolünü konuşan harici süreç: stdin/stdout üzerinden satır başına bir JSON.
# Başlangıçta süreç {"ready": true} yazar; yanıtlar sırasız gelebilir, id ile eşleşir.

import json
import logging
import os
import shlex
import subprocess
import threading
from collections import OrderedDict
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from app.core.errors import GeneratorError, GeneratorProcessError, GeneratorProtocolError
from app.generators.base import BaseGenerator
from app.schemas.generator import GeneratorRequest, GeneratorResponse

logger = logging.getLogger(__name__)

# close() sırasında sürecin kendiliğinden kapanması için beklenen süre (sn)
SHUTDOWN_TIMEOUT = 30


class SubprocessGenerator(BaseGenerator):

    def __init__(self, command: str, tag: Optional[str] = None):
        self.argv = shlex.split(command)
        if not self.argv:
            raise GeneratorProcessError("Üretici komutu boş")
        self.command = command
        self.tag = tag or os.path.basename(self.argv[0])
        self._process: Optional[subprocess.Popen] = None

    def start(self):
        logger.info(f"🚀 Üretici süreç başlatılıyor: {self.command}")
        try:
            self._process = subprocess.Popen(
                self.argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as e:
            raise GeneratorProcessError(f"Üretici başlatılamadı ({self.command}): {e}") from e

        line = self._read_line()
        if not line:
            raise GeneratorProcessError("Süreç 'ready' satırını yazmadan kapandı", returncode=self._process.wait())
        try:
            message = json.loads(line)
        except json.JSONDecodeError:
            self._kill()
            raise GeneratorProtocolError(f"'ready' yerine bozuk satır: {line.strip()[:200]}") from None
        if message != {"ready": True}:
            self._kill()
            raise GeneratorProtocolError(f"'ready' bekleniyordu, gelen: {line.strip()[:200]}")

    def _read_line(self) -> str:
        try:
            return self._process.stdout.readline()
        except UnicodeDecodeError as e:
            self._kill()
            raise GeneratorProtocolError(f"Geçersiz UTF-8 çıktı: {e}") from e

    def _write_all(self, requests: Sequence[GeneratorRequest], failures: List[BaseException]):
        try:
            for request in requests:
                self._process.stdin.write(request.model_dump_json() + "\n")
                self._process.stdin.flush()
        except (BrokenPipeError, OSError, ValueError) as e:
            # Süreç kapandıysa hata okuma tarafında raporlanır
            failures.append(e)

    def generate(self, requests: Sequence[GeneratorRequest]) -> Dict[str, GeneratorResponse]:
        if self._process is None:
            self.start()

        pending: "OrderedDict[str, GeneratorRequest]" = OrderedDict()
        for request in requests:
            if request.id in pending:
                raise ValueError(f"Aynı istek id'si iki kez gönderildi: {request.id}")
            pending[request.id] = request

        # İstekler ayrı bir iş parçacığından yazılır; böylece yanıtlar okunurken boru dolmaz
        failures: List[BaseException] = []
        writer = threading.Thread(target=self._write_all, args=(list(requests), failures), daemon=True)
        writer.start()

        responses: Dict[str, GeneratorResponse] = {}
        try:
            while pending:
                line = self._read_line()
                if not line:
                    writer.join()
                    returncode = self._process.wait()
                    raise GeneratorProcessError(
                        "Üretici süreç beklenmedik şekilde kapandı",
                        pending_id=next(iter(pending)),
                        returncode=returncode,
                    )
                if not line.strip():
                    continue
                try:
                    response = GeneratorResponse.model_validate_json(line)
                except ValidationError:
                    raise GeneratorProtocolError(f"Bozuk yanıt satırı: {line.strip()[:200]}") from None
                if response.id not in pending:
                    raise GeneratorProtocolError(f"Bilinmeyen yanıt id'si: '{response.id}'")
                del pending[response.id]
                responses[response.id] = response
        except GeneratorError:
            self._kill()
            raise

        writer.join()
        return responses

    def _kill(self):
        if self._process is not None and self._process.poll() is None:
            self._process.kill()
            self._process.wait()

    def close(self):
        if self._process is None:
            return
        try:
            self._process.stdin.close()
        except OSError:
            pass
        try:
            returncode = self._process.wait(timeout=SHUTDOWN_TIMEOUT)
            if returncode:
                logger.warning(f"⚠️ Üretici süreç {returncode} koduyla kapandı")
        except subprocess.TimeoutExpired:
            logger.warning("⚠️ Üretici süreç kapanmadı, sonlandırılıyor")
            self._kill()
        self._process = None
