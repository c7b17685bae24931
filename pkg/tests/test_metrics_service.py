import itertools
import math
import random

import pytest

from app.core.errors import EmptyCorpusError, LengthMismatchError
from app.services import metrics_service


def _oracle_rouge_n(candidate, reference, n):
    cand = [tuple(candidate[i:i + n]) for i in range(len(candidate) - n + 1)]
    ref = [tuple(reference[i:i + n]) for i in range(len(reference) - n + 1)]
    remaining = list(ref)
    overlap = 0
    for gram in cand:
        if gram in remaining:
            remaining.remove(gram)
            overlap += 1
    p = overlap / len(cand) if cand else 0.0
    r = overlap / len(ref) if ref else 0.0
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f


def _oracle_lcs(a, b):
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            if a[i - 1] == b[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    return table[len(a)][len(b)]


def _random_pairs(count, seed=11):
    rng = random.Random(seed)
    vocab = [f"w{i}" for i in range(20)]
    pairs = []
    for _ in range(count):
        cand = [rng.choice(vocab) for _ in range(rng.randint(0, 30))]
        ref = [rng.choice(vocab) for _ in range(rng.randint(0, 30))]
        pairs.append((cand, ref))
    return pairs


def _chunks(alignment):
    ordered = sorted(alignment)
    return sum(
        1 for k, (i, j) in enumerate(ordered)
        if k == 0 or (i, j) != (ordered[k - 1][0] + 1, ordered[k - 1][1] + 1)
    )


def _key_matchings(cand, ref, key):
    cand_pos = [i for i, t in enumerate(cand) if t == key]
    ref_pos = [j for j, t in enumerate(ref) if t == key]
    size = min(len(cand_pos), len(ref_pos))
    return [
        list(zip(chosen, order))
        for chosen in itertools.combinations(cand_pos, size)
        for order in itertools.permutations(ref_pos, size)
    ]


def _matching_count(cand, ref):
    total = 1
    for key in set(cand) & set(ref):
        c, r = cand.count(key), ref.count(key)
        size = min(c, r)
        total *= math.comb(c, size) * math.perm(r, size)
    return total


def _oracle_meteor(cand, ref):
    """Tüm maksimal eşleşmeler üzerinde en az chunk; (eşleşme, chunk, skor)."""
    per_key = [_key_matchings(cand, ref, key) for key in sorted(set(cand) & set(ref))]
    matches, chunks = 0, 0
    for i, combo in enumerate(itertools.product(*per_key)):
        alignment = [pair for part in combo for pair in part]
        count = _chunks(alignment)
        if i == 0 or count < chunks:
            matches, chunks = len(alignment), count
    if matches == 0:
        return 0, 0, 0.0
    p, r = matches / len(cand), matches / len(ref)
    f_mean = p * r / (0.9 * p + 0.1 * r)
    return matches, chunks, f_mean * (1 - 0.5 * (chunks / matches) ** 3)


def _repetitive_pairs(count, seed=29, limit=5000):
    # tek harfli kelimeler Porter kökünde değişmez; yalnız tam eşleşme aşaması çalışır
    rng = random.Random(seed)
    vocab = list("abcdefgh")
    pairs = []
    while len(pairs) < count:
        words = vocab[:rng.randint(2, len(vocab))]
        cand = [rng.choice(words) for _ in range(rng.randint(1, 16))]
        ref = [rng.choice(words) for _ in range(rng.randint(1, 16))]
        if _matching_count(cand, ref) <= limit:
            pairs.append((cand, ref))
    return pairs


class TestRouge:

    def test_matches_brute_force(self):
        for cand, ref in _random_pairs(500):
            for n in (1, 2):
                got = metrics_service.rouge_n(cand, ref, n)
                p, r, f = _oracle_rouge_n(cand, ref, n)
                assert abs(got.precision - p) <= 1e-12
                assert abs(got.recall - r) <= 1e-12
                assert abs(got.f1 - f) <= 1e-12

            lcs = _oracle_lcs(cand, ref)
            p = lcs / len(cand) if cand else 0.0
            r = lcs / len(ref) if ref else 0.0
            f = 2 * p * r / (p + r) if p + r > 0 else 0.0
            got = metrics_service.rouge_l(cand, ref)
            assert abs(got.f1 - f) <= 1e-12

    def test_identical(self):
        tokens = "the cat sat on the mat".split()
        assert metrics_service.rouge_n(tokens, tokens, 2).f1 == 1.0
        assert metrics_service.rouge_l(tokens, tokens).f1 == 1.0

    def test_clipped_counts(self):
        result = metrics_service.rouge_n(["the", "the", "the"], ["the", "cat"], 1)
        assert result.precision == pytest.approx(1 / 3)
        assert result.recall == pytest.approx(1 / 2)

    def test_empty_candidate(self):
        assert metrics_service.rouge_n([], ["a"], 1).f1 == 0.0
        assert metrics_service.rouge_l([], ["a"]).f1 == 0.0

    def test_lcs_length(self):
        assert metrics_service.lcs_length("abcbdab", "bdcaba") == 4

    def test_swapping_sides_swaps_precision_and_recall(self):
        for cand, ref in _random_pairs(300, seed=5):
            for n in (1, 2):
                forward = metrics_service.rouge_n(cand, ref, n)
                backward = metrics_service.rouge_n(ref, cand, n)
                assert (forward.precision, forward.recall) == (backward.recall, backward.precision)
                assert forward.f1 == backward.f1
            forward = metrics_service.rouge_l(cand, ref)
            backward = metrics_service.rouge_l(ref, cand)
            assert (forward.precision, forward.recall) == (backward.recall, backward.precision)
            assert forward.f1 == backward.f1

    def test_appending_absent_token(self):
        for cand, ref in _random_pairs(300, seed=8):
            extended = cand + ["unseen"]
            for n in (1, 2):
                before = metrics_service.rouge_n(cand, ref, n)
                after = metrics_service.rouge_n(extended, ref, n)
                assert after.precision <= before.precision
                assert after.recall == before.recall

    def test_higher_order_can_score_higher(self):
        # bigram örtüşmesi unigram'dan yüksek olabilir: n'de monotonluk yok
        cand, ref = ["a", "b", "a"], ["b", "a", "b"]
        assert metrics_service.rouge_n(cand, ref, 1).f1 == pytest.approx(2 / 3)
        assert metrics_service.rouge_n(cand, ref, 2).f1 == 1.0


class TestMeteor:

    def test_identical_four_tokens(self):
        tokens = ["a", "b", "c", "d"]
        assert metrics_service.meteor_lite(tokens, tokens) == pytest.approx(0.9921875)

    def test_stem_stage(self):
        assert metrics_service.meteor_lite(["the", "cat"], ["the", "cats"]) == pytest.approx(0.9375)

    def test_no_match(self):
        assert metrics_service.meteor_lite(["x"], ["y"]) == 0.0
        assert metrics_service.meteor_lite([], ["y"]) == 0.0

    def test_alignment_minimizes_chunks(self):
        score = metrics_service.meteor_lite(["the", "cat", "the", "dog"], ["the", "dog"])
        f_mean = 0.5 * 1.0 / (0.9 * 0.5 + 0.1 * 1.0)
        assert score == pytest.approx(f_mean * (1 - 0.5 * (1 / 2) ** 3))

    def test_long_repeated_input(self):
        tokens = ["a"] * 30
        assert metrics_service.meteor_lite(tokens, tokens) == pytest.approx(1 - 0.5 * (1 / 30) ** 3)

    def test_chain_behind_repeated_prefix(self):
        cand = ["a", "b"] + ["x", "y"] * 5
        ref = ["a", "c", "a", "b"] + ["x", "y"] * 5
        assert metrics_service.count_chunks(metrics_service._align(cand, ref)) == 1
        assert metrics_service.meteor_lite(cand, ref) == pytest.approx(0.8693136070853462, abs=1e-12)

    def test_matches_exhaustive_alignment(self):
        for cand, ref in _repetitive_pairs(200):
            matches, chunks, score = _oracle_meteor(cand, ref)
            alignment = metrics_service._align(cand, ref)
            assert len(alignment) == matches
            assert metrics_service.count_chunks(alignment) == chunks
            assert all(cand[i] == ref[j] for i, j in alignment)
            assert len({i for i, _ in alignment}) == len({j for _, j in alignment}) == matches
            assert metrics_service.meteor_lite(cand, ref) == pytest.approx(score, abs=1e-12)

    def test_fragmentation_penalty(self):
        # "c d a b" vs "a b c d": 4 eşleşme, 2 chunk
        score = metrics_service.meteor_lite(["c", "d", "a", "b"], ["a", "b", "c", "d"])
        assert score == pytest.approx(1 - 0.5 * (2 / 4) ** 3)

    def test_count_chunks(self):
        assert metrics_service.count_chunks([(0, 0), (1, 1), (2, 5), (3, 6), (5, 7)]) == 3
        assert metrics_service.count_chunks([]) == 0

    def test_porter_stem(self):
        assert metrics_service.porter_stem("running") == "run"
        assert metrics_service.porter_stem("cats") == "cat"
        assert metrics_service.porter_stem("sat") == "sat"
        assert metrics_service.porter_stem("") == ""


class TestEvaluate:

    def test_identical_system_scores_one(self):
        refs = [["a", "b", "c"], ["d", "e"]]
        report = metrics_service.evaluate(refs, refs)
        assert report.rouge1.f1 == 1.0
        assert report.rouge2.f1 == 1.0
        assert report.rougeL.f1 == 1.0
        assert report.n_examples == 2
        assert report.avg_tokens == 2.5

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            metrics_service.evaluate([["a"]], [["a"], ["b"]])

    def test_empty(self):
        with pytest.raises(EmptyCorpusError):
            metrics_service.evaluate([], [])

    def test_macro_average(self):
        report = metrics_service.evaluate([["a"], ["x"]], [["a"], ["y"]])
        assert report.rouge1.f1 == pytest.approx(0.5)

    def test_workers_do_not_change_result(self):
        pairs = _random_pairs(40, seed=3)
        system = [c for c, _ in pairs]
        refs = [r for _, r in pairs]
        assert metrics_service.evaluate(system, refs, workers=2) == metrics_service.evaluate(system, refs, workers=1)

    def test_joint_permutation_leaves_report_unchanged(self):
        pairs = _random_pairs(60, seed=21)
        system = [c for c, _ in pairs]
        refs = [r for _, r in pairs]
        expected = metrics_service.evaluate(system, refs)
        rng = random.Random(4)
        for _ in range(5):
            order = list(range(len(pairs)))
            rng.shuffle(order)
            shuffled = metrics_service.evaluate([system[i] for i in order], [refs[i] for i in order])
            assert shuffled == expected

    def test_table_row_scale(self):
        report = metrics_service.evaluate([["a", "b"]], [["a", "c"]])
        row = report.table_row("Lead")
        assert row[0] == "Lead"
        assert row[1] == pytest.approx(50.0)
        assert report.to_json_dict()["rouge1"]["p"] == pytest.approx(0.5)
