# app/services/metrics_service.py
# ROUGE-1/2/L F1, METEOR (tam eşleşme + kök eşleşmesi aşamaları) ve korpus raporu.
# Kök bulma ve stopword çıkarma ROUGE'da uygulanmaz; ROUGE-L tüm özet dizisi üzerinden LCS'dir.

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from nltk.stem.porter import PorterStemmer

from app.core.errors import EmptyCorpusError, LengthMismatchError
from app.schemas.metrics import EvalReport, MetricTriple

logger = logging.getLogger(__name__)

# METEOR parametreleri: F_mean = 10PR / (R + 9P), ceza = 0.5 * (chunks / m)^3
METEOR_ALPHA = 0.9
METEOR_BETA = 3.0
METEOR_GAMMA = 0.5

_STEMMER = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)

Alignment = List[Tuple[int, int]]


# --- ROUGE ---

def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    if n == 1:
        return Counter(tokens)
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int = 1) -> MetricTriple:
    if n < 1:
        raise ValueError(f"n >= 1 olmalı: {n}")
    cand = _ngram_counts(candidate, n)
    ref = _ngram_counts(reference, n)
    cand_total = sum(cand.values())
    ref_total = sum(ref.values())
    overlap = sum(min(count, ref[gram]) for gram, count in cand.items() if gram in ref)
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    return MetricTriple.from_pr(precision, recall)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            curr.append(prev[j - 1] + 1 if x == y else max(prev[j], curr[j - 1]))
        prev = curr
    return prev[-1]


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> MetricTriple:
    lcs = lcs_length(candidate, reference)
    precision = lcs / len(candidate) if candidate else 0.0
    recall = lcs / len(reference) if reference else 0.0
    return MetricTriple.from_pr(precision, recall)


# --- METEOR ---

@lru_cache(maxsize=200_000)
def porter_stem(token: str) -> str:
    if not token:
        return token
    return _STEMMER.stem(token, to_lowercase=False)


def count_chunks(alignment: Alignment) -> int:
    """Hem adayda hem referansta bitişik eşleşme bloklarının sayısı."""
    chunks = 0
    previous = None
    for cand_i, ref_i in sorted(alignment):
        if previous is None or cand_i != previous[0] + 1 or ref_i != previous[1] + 1:
            chunks += 1
        previous = (cand_i, ref_i)
    return chunks


class _ChunkSearch:
    """
    Tek bir hizalama aşaması. Her anahtar için min(aday, referans) eşleşme zorunludur
    (maksimal eşleşme); bunlar arasında chunk sayısı en az olan, eşitlikte en soldaki seçilir.

    chunks = eşleşme - bağ; bağ, (i, j) ile (i-1, j-1) çiftinin birlikte bulunmasıdır.
    Eşleşme sayısı sabit olduğundan arama bağ sayısını maksimize eder. Adaylar sırayla
    işlenir; önceki aşamalardan gelen sabit çiftler de sıraya dahildir.
    """

    def __init__(self, cand_keys, ref_keys, cand_free, ref_free, fixed: Alignment):
        self.ref_keys = ref_keys
        self.fixed_ref = dict(fixed)
        self.ref_by_key: Dict[str, List[int]] = {}
        for j in sorted(ref_free):
            self.ref_by_key.setdefault(ref_keys[j], []).append(j)
        self.keys = {i: cand_keys[i] for i in sorted(cand_free) if cand_keys[i] in self.ref_by_key}
        self.slots = sorted(set(self.fixed_ref) | set(self.keys))

        counts = Counter(self.keys.values())
        self.quota = {key: min(count, len(self.ref_by_key[key])) for key, count in counts.items()}

        # Bu konumdan sonra aynı anahtarlı serbest aday sayısı
        self.remaining_after: List[int] = [0] * len(self.slots)
        seen: Counter = Counter()
        for s in range(len(self.slots) - 1, -1, -1):
            key = self.keys.get(self.slots[s])
            if key is not None:
                self.remaining_after[s] = seen[key]
                seen[key] += 1

        # Üst sınır: s ve sonrasında bağ kurabilecek konum sayısı
        linkable = [
            any(j > 0 and self._allowed(i - 1, j - 1) for j in self._options(i))
            for i in self.slots
        ]
        self.link_bound = [0] * (len(self.slots) + 1)
        for s in range(len(self.slots) - 1, -1, -1):
            self.link_bound[s] = self.link_bound[s + 1] + int(linkable[s])

    def _options(self, i: int) -> List[int]:
        if i in self.fixed_ref:
            return [self.fixed_ref[i]]
        return self.ref_by_key[self.keys[i]]

    def _allowed(self, i: int, j: int) -> bool:
        if i in self.fixed_ref:
            return self.fixed_ref[i] == j
        key = self.keys.get(i)
        return key is not None and self.ref_keys.get(j) == key

    def _choices(self, s: int, prev, used: Set[int], needed: Dict[str, int], extension_first: bool) -> List[Optional[int]]:
        i = self.slots[s]
        if i in self.fixed_ref:
            return [self.fixed_ref[i]]
        key = self.keys[i]
        need = needed[key]
        choices: List[Optional[int]] = []
        if need > 0:
            choices = [j for j in self.ref_by_key[key] if j not in used]
            if extension_first and prev is not None and prev[0] == i - 1 and prev[1] + 1 in choices:
                choices.remove(prev[1] + 1)
                choices.insert(0, prev[1] + 1)
        if self.remaining_after[s] >= need:
            choices.append(None)
        return choices

    def _search(self, extension_first: bool, target: Optional[int]) -> Tuple[int, Alignment]:
        """
        target yoksa en çok bağ sayısını bulur (zincir uzatma önce denenir).
        target verilirse sol-öncelikli sırada o bağ sayısına ulaşan ilk hizalamayı döndürür.
        """
        best_links, best_path = -1, []
        used: Set[int] = set()
        needed = dict(self.quota)
        path: Alignment = []
        n = len(self.slots)

        # çerçeve: [s, prev, links, choices, sıradaki seçenek, uygulanan seçenek]
        stack = [[0, None, 0, self._choices(0, None, used, needed, extension_first), 0, None]]
        while stack:
            frame = stack[-1]
            s, prev, links, choices = frame[0], frame[1], frame[2], frame[3]
            i = self.slots[s]
            if frame[5] is not None:
                if i not in self.fixed_ref:
                    used.discard(frame[5])
                    needed[self.keys[i]] += 1
                    path.pop()
                frame[5] = None
            if frame[4] >= len(choices):
                stack.pop()
                continue
            j = choices[frame[4]]
            frame[4] += 1

            if j is None:
                next_prev, next_links = prev, links
            else:
                if i not in self.fixed_ref:
                    used.add(j)
                    needed[self.keys[i]] -= 1
                    path.append((i, j))
                frame[5] = j
                next_prev = (i, j)
                next_links = links + int(prev == (i - 1, j - 1))

            ceiling = next_links + self.link_bound[s + 1]
            if target is None and ceiling <= best_links:
                continue
            if target is not None and ceiling < target:
                continue
            if s + 1 == n:
                if target is not None:
                    return next_links, list(path)
                best_links, best_path = next_links, list(path)
                if best_links == self.link_bound[0]:
                    break
                continue
            stack.append([s + 1, next_prev, next_links, self._choices(s + 1, next_prev, used, needed, extension_first), 0, None])

        return best_links, best_path

    def run(self) -> Alignment:
        if not self.keys:
            return []
        best_links, _ = self._search(extension_first=True, target=None)
        _, alignment = self._search(extension_first=False, target=best_links)
        return alignment


def _align(candidate: Sequence[str], reference: Sequence[str]) -> Alignment:
    alignment: Alignment = []
    cand_free = set(range(len(candidate)))
    ref_free = set(range(len(reference)))
    stages: List[Callable[[str], str]] = [lambda t: t, porter_stem]
    for key_fn in stages:
        if not cand_free or not ref_free:
            break
        cand_keys = {i: key_fn(candidate[i]) for i in cand_free}
        ref_keys = {j: key_fn(reference[j]) for j in ref_free}
        stage = _ChunkSearch(cand_keys, ref_keys, cand_free, ref_free, alignment).run()
        alignment = alignment + stage
        cand_free -= {i for i, _ in stage}
        ref_free -= {j for _, j in stage}
    return sorted(alignment)


def meteor_lite(candidate: Sequence[str], reference: Sequence[str]) -> float:
    """Eş anlamlı aşaması olmayan METEOR: tam eşleşme, ardından Porter kökü eşleşmesi."""
    alignment = _align(candidate, reference)
    matches = len(alignment)
    if matches == 0:
        return 0.0
    precision = matches / len(candidate)
    recall = matches / len(reference)
    f_mean = precision * recall / (METEOR_ALPHA * precision + (1 - METEOR_ALPHA) * recall)
    penalty = METEOR_GAMMA * (count_chunks(alignment) / matches) ** METEOR_BETA
    return max(0.0, min(1.0, f_mean * (1 - penalty)))


# --- Korpus değerlendirmesi ---

def score_example(candidate: Sequence[str], reference: Sequence[str]) -> Tuple[float, ...]:
    r1 = rouge_n(candidate, reference, 1)
    r2 = rouge_n(candidate, reference, 2)
    rl = rouge_l(candidate, reference)
    return (
        r1.precision, r1.recall, r1.f1,
        r2.precision, r2.recall, r2.f1,
        rl.precision, rl.recall, rl.f1,
        meteor_lite(candidate, reference),
        float(len(candidate)),
    )


def evaluate(
    system: Sequence[Sequence[str]],
    references: Sequence[Sequence[str]],
    workers: int = 1,
) -> EvalReport:
    """
    Örnek başına metrikler aritmetik ortalamayla (makro) birleştirilir.
    Toplama math.fsum ile yapılır; sonuç örnek sırasından ve işçi sayısından bağımsızdır.
    """
    if len(system) != len(references):
        raise LengthMismatchError(f"{len(system)} sistem özeti, {len(references)} referans")
    if not system:
        raise EmptyCorpusError("Değerlendirilecek örnek yok")

    if workers > 1 and len(system) > 1:
        chunksize = max(1, len(system) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(score_example, system, references, chunksize=chunksize))
    else:
        rows = [score_example(c, r) for c, r in zip(system, references)]

    n = len(rows)
    means = [math.fsum(column) / n for column in zip(*rows)]

    def triple(offset: int) -> MetricTriple:
        return MetricTriple(precision=means[offset], recall=means[offset + 1], f1=means[offset + 2])

    report = EvalReport(
        rouge1=triple(0),
        rouge2=triple(3),
        rougeL=triple(6),
        meteor=means[9],
        avg_tokens=means[10],
        n_examples=n,
    )
    logger.info(
        f"📊 {n} örnek: R-1={report.rouge1.f1:.4f} R-2={report.rouge2.f1:.4f} "
        f"R-L={report.rougeL.f1:.4f} MET={report.meteor:.4f} #={report.avg_tokens:.1f}"
    )
    return report
