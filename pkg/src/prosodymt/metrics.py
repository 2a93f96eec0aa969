"""Translation evaluation: corpus BLEU, chrF (chrF++ optional), BEI accuracy.

BLEU is the corpus-level geometric mean of clipped n-gram precisions times
the brevity penalty; orders no segment is long enough to contain are
skipped, so identity corpora always score 100. chrF averages character
n-gram precision/recall over orders (whitespace removed) and mixes in word
n-grams when ``word_order`` > 0. BEI accuracy checks whether hypotheses
use the marked passive on positive-evidence items and avoid it on
negative-evidence items.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from typing import Mapping, Sequence

from .corpus import SegmentationDict, segment_zh
from .dataset import Evidence, EvidencePair
from .detect import DetectorConfig, Voice, classify_voice_zh
from .errors import AlignmentError, DataError


@dataclass(frozen=True)
class BleuConfig:
    max_ngram: int = 4
    smooth_add_k: float | None = None  # None = no smoothing; k applies to orders >= 2
    zh_char_tokenize: bool = True

    def __post_init__(self):
        if self.max_ngram < 1:
            raise ValueError("max_ngram must be >= 1")


@dataclass(frozen=True)
class BeiAccuracy:
    pos_total: int
    pos_correct: int
    neg_total: int
    neg_correct: int

    @property
    def pos_acc(self) -> float:
        return self.pos_correct / self.pos_total if self.pos_total else 0.0

    @property
    def neg_acc(self) -> float:
        return self.neg_correct / self.neg_total if self.neg_total else 0.0


def _is_cjk_char(ch: str) -> bool:
    cp = ord(ch)
    return 0x4E00 <= cp <= 0x9FFF or 0x3400 <= cp <= 0x4DBF or 0xF900 <= cp <= 0xFAFF


def _bleu_tokens(text: str, zh_char: bool) -> list[str]:
    """Whitespace tokens; CJK characters split out individually when zh_char
    (latin runs inside a chunk stay whole). A no-op for non-CJK text."""
    chunks = text.split()
    if not zh_char:
        return chunks
    tokens: list[str] = []
    for chunk in chunks:
        run = []
        for ch in chunk:
            if _is_cjk_char(ch):
                if run:
                    tokens.append("".join(run))
                    run = []
                tokens.append(ch)
            else:
                run.append(ch)
        if run:
            tokens.append("".join(run))
    return tokens


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(hypotheses: Sequence[str], references: Sequence[str], cfg: BleuConfig | None = None) -> float:
    """Corpus BLEU in [0, 100], single reference per hypothesis."""
    cfg = cfg or BleuConfig()
    if len(hypotheses) != len(references):
        raise AlignmentError(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise AlignmentError("empty corpus")

    correct = [0] * cfg.max_ngram
    total = [0] * cfg.max_ngram
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_toks = _bleu_tokens(hyp, cfg.zh_char_tokenize)
        ref_toks = _bleu_tokens(ref, cfg.zh_char_tokenize)
        hyp_len += len(hyp_toks)
        ref_len += len(ref_toks)
        for n in range(1, cfg.max_ngram + 1):
            hyp_ngrams = _ngram_counts(hyp_toks, n)
            ref_ngrams = _ngram_counts(ref_toks, n)
            total[n - 1] += sum(hyp_ngrams.values())
            correct[n - 1] += sum(min(c, ref_ngrams[g]) for g, c in hyp_ngrams.items())

    if hyp_len == 0:
        return 0.0
    log_sum = 0.0
    effective = 0
    for n in range(1, cfg.max_ngram + 1):
        c, t = correct[n - 1], total[n - 1]
        if cfg.smooth_add_k is not None and n > 1:
            c += cfg.smooth_add_k
            t += cfg.smooth_add_k
        if t == 0:
            break  # corpus too short for this order; skip higher orders
        if c == 0:
            return 0.0
        log_sum += math.log(c / t)
        effective = n
    if effective == 0:
        return 0.0
    brevity = 1.0 if hyp_len >= ref_len else math.exp(1 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_sum / effective)


def _char_ngram_stats(hyp: str, ref: str, order: int) -> list[tuple[int, int, int]]:
    hyp = "".join(hyp.split())
    ref = "".join(ref.split())
    stats = []
    for n in range(1, order + 1):
        h = _ngram_counts(hyp, n)
        r = _ngram_counts(ref, n)
        stats.append((sum(h.values()), sum(r.values()), sum((h & r).values())))
    return stats


def _word_ngram_stats(hyp: str, ref: str, order: int) -> list[tuple[int, int, int]]:
    hyp_toks = hyp.split()
    ref_toks = ref.split()
    stats = []
    for n in range(1, order + 1):
        h = _ngram_counts(hyp_toks, n)
        r = _ngram_counts(ref_toks, n)
        stats.append((sum(h.values()), sum(r.values()), sum((h & r).values())))
    return stats


def chrf(
    hypotheses: Sequence[str],
    references: Sequence[str],
    beta: float = 2.0,
    char_order: int = 6,
    word_order: int = 0,
) -> float:
    """Corpus chrF in [0, 100]; ``word_order`` > 0 gives the chrF++ behavior."""
    if len(hypotheses) != len(references):
        raise AlignmentError(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise AlignmentError("empty corpus")
    n_components = char_order + word_order
    sums = [[0, 0, 0] for _ in range(n_components)]
    for hyp, ref in zip(hypotheses, references):
        stats = _char_ngram_stats(hyp, ref, char_order) + _word_ngram_stats(hyp, ref, word_order)
        for i, (h, r, m) in enumerate(stats):
            sums[i][0] += h
            sums[i][1] += r
            sums[i][2] += m
    precision = recall = 0.0
    effective = 0
    for h, r, m in sums:
        if h > 0 and r > 0:
            precision += m / h
            recall += m / r
            effective += 1
    if effective == 0:
        return 0.0
    precision /= effective
    recall /= effective
    if precision + recall == 0:
        return 0.0
    b2 = beta * beta
    return 100.0 * (1 + b2) * precision * recall / (b2 * precision + recall)


def bei_accuracy(
    test_items: Sequence[EvidencePair | Evidence],
    hypotheses: Sequence[str],
    cfg: DetectorConfig | None = None,
    seg_dict: SegmentationDict | None = None,
) -> BeiAccuracy:
    """Marked-passive usage accuracy over positive/negative evidence items.

    Hypotheses are raw ZH text aligned 1:1 with the items; each is
    segmented and voice-classified internally.
    """
    if len(test_items) != len(hypotheses):
        raise AlignmentError(f"{len(test_items)} test items vs {len(hypotheses)} hypotheses")
    cfg = cfg or DetectorConfig()
    if seg_dict is None:
        from .resources import default_segmentation_dict

        seg_dict = default_segmentation_dict()
    pos_total = pos_correct = neg_total = neg_correct = 0
    for item, hyp in zip(test_items, hypotheses):
        evidence = item.evidence if isinstance(item, EvidencePair) else item
        voice = classify_voice_zh(segment_zh(hyp, seg_dict), cfg)
        if evidence is Evidence.POSITIVE:
            pos_total += 1
            pos_correct += voice is Voice.MARKED_PASSIVE
        elif evidence is Evidence.NEGATIVE:
            neg_total += 1
            neg_correct += voice is Voice.UNMARKED
        else:
            raise DataError(f"test item without an evidence label: {item!r}")
    return BeiAccuracy(pos_total, pos_correct, neg_total, neg_correct)


def round_half_up_percent(fraction: float, digits: int = 1) -> str:
    """Render a fraction in [0, 1] as a percent string, half-up rounding."""
    quantum = Decimal(1).scaleb(-digits)
    return str((Decimal(str(fraction)) * 100).quantize(quantum, rounding=ROUND_HALF_UP))


def score_report(runs: Sequence[tuple[str, Mapping[str, float | None]]]) -> tuple[str, str]:
    """(aligned text table, TSV) for named metric results.

    Values are fractions in [0, 1] rendered as percentages to one decimal,
    half-up; missing values (e.g. external scores not provided) render as
    an em dash placeholder.
    """
    columns: list[str] = []
    for _name, metrics in runs:
        for key in metrics:
            if key not in columns:
                columns.append(key)
    header = ["system"] + columns
    rows = []
    for name, metrics in runs:
        cells = [name]
        for col in columns:
            value = metrics.get(col)
            cells.append("—" if value is None else round_half_up_percent(value))
        rows.append(cells)
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    text_lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
                  for row in [header] + rows]
    tsv_lines = ["\t".join(row) for row in [header] + rows]
    return "\n".join(text_lines), "\n".join(tsv_lines)
