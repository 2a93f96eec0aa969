import math

import pytest
from hypothesis import given, settings, strategies as st

from prosodymt import (
    BleuConfig,
    Evidence,
    bei_accuracy,
    bleu,
    build_evidence,
    chrf,
    load_parallel,
    score_report,
    split_dataset,
)
from prosodymt.errors import AlignmentError
from prosodymt.metrics import round_half_up_percent
from prosodymt.resources import demo_polarity_lexicon, synthetic_corpus_path


class TestBleu:
    def test_identity(self):
        corpus = ["the cat sat down", "on the mat today", "it was late"]
        assert bleu(corpus, corpus) == pytest.approx(100.0)

    def test_clipping_oracle(self):
        # unigram precision clipped to 1/4; isolate it with max_ngram=1
        score = bleu(["the the the the"], ["the cat sat down"], BleuConfig(max_ngram=1))
        assert score == pytest.approx(25.0, abs=1e-9)

    def test_brevity_penalty_oracle(self):
        # hyp half the reference length, perfect unigrams: BP = e^(1-2)
        score = bleu(["a b"], ["a b c d"], BleuConfig(max_ngram=1))
        assert score == pytest.approx(100.0 * math.exp(-1.0), abs=1e-9)

    def test_zero_precision_without_smoothing(self):
        assert bleu(["x y z w"], ["a b c d"]) == 0.0

    def test_add_k_smoothing_lifts_zero(self):
        cfg = BleuConfig(smooth_add_k=1.0)
        assert bleu(["a b x y"], ["a b c d"], cfg) > 0.0

    def test_length_mismatch(self):
        with pytest.raises(AlignmentError):
            bleu(["a"], ["a", "b"])

    def test_empty_hypothesis_scores_zero(self):
        assert bleu([""], ["a b c"]) == 0.0

    def test_zh_char_tokenization(self):
        # per-character n-grams: 3 of 4 unigrams shared
        score = bleu(["我被表扬了"], ["我被批评了"], BleuConfig(max_ngram=1))
        assert score == pytest.approx(100.0 * 3 / 5, abs=1e-9)

    def test_zh_latin_runs_stay_whole(self):
        assert bleu(["GPT模型很好"], ["GPT模型很好"]) == pytest.approx(100.0)
        score_on = bleu(["word我"], ["word他"], BleuConfig(max_ngram=1))
        assert score_on == pytest.approx(100.0 * 1 / 2, abs=1e-9)

    def test_char_tokenize_off(self):
        score = bleu(["我被表扬了"], ["我被批评了"], BleuConfig(max_ngram=1, zh_char_tokenize=False))
        assert score == 0.0  # whole strings differ

    def test_permutation_equivariance(self):
        hyps = ["a b c", "d e f", "g h"]
        refs = ["a b x", "d e f", "g y"]
        a = bleu(hyps, refs)
        b = bleu(hyps[::-1], refs[::-1])
        assert a == pytest.approx(b)

    def test_short_corpus_identity_still_100(self):
        assert bleu(["hi"], ["hi"]) == pytest.approx(100.0)


class TestChrf:
    def test_identity(self):
        corpus = ["the cat sat", "on the mat"]
        assert chrf(corpus, corpus) == pytest.approx(100.0)

    def test_empty_hypothesis(self):
        assert chrf([""], ["abc"]) == 0.0

    def test_order1_hand_enumeration(self):
        # P = R = 3/4 at order 1 -> F2 = 75.0
        assert chrf(["abcd"], ["abce"], beta=2.0, char_order=1) == pytest.approx(75.0, abs=1e-9)

    def test_whitespace_removed(self):
        assert chrf(["ab cd"], ["abcd"], char_order=2) == pytest.approx(100.0)

    def test_word_order_mixes_in(self):
        plain = chrf(["the cat sat"], ["the cat sat"], word_order=2)
        assert plain == pytest.approx(100.0)
        hyp, ref = ["the cat sat down"], ["the cat lay down"]
        assert chrf(hyp, ref, word_order=2) != chrf(hyp, ref, word_order=0)

    def test_length_mismatch(self):
        with pytest.raises(AlignmentError):
            chrf(["a"], ["a", "b"])

    def test_permutation_equivariance(self):
        hyps = ["abcd", "efgh", "ij"]
        refs = ["abce", "efgh", "ik"]
        assert chrf(hyps, refs) == pytest.approx(chrf(hyps[::-1], refs[::-1]))

    def test_bounds(self):
        assert 0.0 <= chrf(["abc"], ["xyz"]) <= 100.0


_SEGMENT = st.text(
    alphabet=st.characters(codec="utf-8", exclude_categories=("Cs", "Cc")),
    min_size=1, max_size=30,
).filter(lambda s: s.strip())


@given(st.lists(_SEGMENT, min_size=1, max_size=8))
@settings(max_examples=100, deadline=None)
def test_identity_scores_100_property(corpus):
    assert bleu(corpus, corpus) == pytest.approx(100.0)
    assert chrf(corpus, corpus) == pytest.approx(100.0)


@given(st.lists(st.tuples(_SEGMENT, _SEGMENT), min_size=1, max_size=6))
@settings(max_examples=100, deadline=None)
def test_scores_bounded_property(pairs):
    hyps = [h for h, _ in pairs]
    refs = [r for _, r in pairs]
    assert 0.0 <= bleu(hyps, refs) <= 100.0
    assert 0.0 <= chrf(hyps, refs) <= 100.0


class TestBeiAccuracy:
    def test_table2_arithmetic(self):
        pos = [Evidence.POSITIVE] * 65
        neg = [Evidence.NEGATIVE] * 59
        pos_hyps = ["他被骗了"] * 49 + ["他睡了"] * 16
        neg_hyps = ["他睡了"] * 6 + ["他被骗了"] * 53
        acc = bei_accuracy(pos + neg, pos_hyps + neg_hyps)
        assert acc.pos_correct == 49 and acc.pos_total == 65
        assert acc.neg_correct == 6 and acc.neg_total == 59
        assert round_half_up_percent(acc.pos_acc) == "75.4"
        assert round_half_up_percent(acc.neg_acc) == "10.2"

    def test_gold_references_are_perfect(self):
        corpus = load_parallel(synthetic_corpus_path())
        items = build_evidence(corpus, demo_polarity_lexicon())
        refs = [e.pair.tgt.raw for e in items]
        acc = bei_accuracy(items, refs)
        assert acc.pos_acc == 1.0 and acc.neg_acc == 1.0

    def test_alignment_error(self):
        with pytest.raises(AlignmentError):
            bei_accuracy([Evidence.POSITIVE], ["a", "b"])

    def test_zero_totals(self):
        acc = bei_accuracy([Evidence.POSITIVE], ["他被骗了"])
        assert acc.neg_total == 0 and acc.neg_acc == 0.0


class TestScoreReport:
    def test_two_systems(self):
        text, tsv = score_report([
            ("base", {"BLEU": 0.321, "chrF2": 0.216}),
            ("tuned", {"BLEU": 0.317, "chrF2": 0.213}),
        ])
        lines = text.split("\n")
        assert len(lines) == 3
        assert "32.1" in lines[1] and "31.7" in lines[2]
        assert tsv.split("\n")[0] == "system\tBLEU\tchrF2"

    def test_missing_external_column(self):
        text, _ = score_report([("base", {"BLEU": 0.5, "CometKiwi": None})])
        assert "—" in text

    def test_rounding_half_up(self):
        assert round_half_up_percent(0.75384) == "75.4"
        assert round_half_up_percent(0.7535) == "75.4"
        assert round_half_up_percent(0.7525) == "75.3"  # half-up, not banker's
        assert round_half_up_percent(1.0) == "100.0"
