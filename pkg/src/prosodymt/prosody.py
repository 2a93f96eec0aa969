"""Semantic-prosody scoring: polarity of collocate windows and node profiles.

A node's prosody is read off the polarity ratios of its occurrence
windows: a dominant negative ratio means negative prosody, and so on.
Window polarity is a signed weight sum (sign readout), so weighted
lexicons work and ties are well-defined (NEU).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .corpus import Corpus, ParallelPair, PolarityLexicon, Polarity, Side
from .concordance import occurrences, query_label
from .detect import DetectorConfig, detect
from .errors import DataError


class ProsodyLabel(Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    NEUTRAL = "neutral"
    MIXED = "mixed"


class SidePolicy(Enum):
    SRC = "src"
    TGT = "tgt"
    BOTH = "both"


@dataclass(frozen=True)
class ProsodyThresholds:
    dominant: float = 0.5

    def __post_init__(self):
        if not (0 < self.dominant <= 1):
            raise ValueError("dominant threshold must be in (0, 1]")


@dataclass(frozen=True)
class ProsodyProfile:
    node: str
    n_occurrences: int
    neg_ratio: float
    pos_ratio: float
    neu_ratio: float
    label: ProsodyLabel


def polarity_of_window(window: Iterable[str], lexicon: PolarityLexicon) -> Polarity:
    """Sign of the summed signed weights over the window tokens."""
    score = 0.0
    for token in window:
        pol, weight = lexicon.lookup(token)
        if pol is Polarity.POS:
            score += weight
        elif pol is Polarity.NEG:
            score -= weight
    if score < 0:
        return Polarity.NEG
    if score > 0:
        return Polarity.POS
    return Polarity.NEU


def classify_prosody(profile: ProsodyProfile, thresholds: ProsodyThresholds | None = None) -> ProsodyLabel:
    """Label from ratios: the strictly dominant ratio wins, otherwise MIXED."""
    t = (thresholds or ProsodyThresholds()).dominant
    if profile.neg_ratio > t:
        return ProsodyLabel.NEGATIVE
    if profile.pos_ratio > t:
        return ProsodyLabel.POSITIVE
    if profile.neu_ratio > t:
        return ProsodyLabel.NEUTRAL
    return ProsodyLabel.MIXED


def prosody_profile(
    corpus: Corpus,
    side: Side,
    node,
    lexicon: PolarityLexicon,
    window: tuple[int, int] = (4, 4),
    thresholds: ProsodyThresholds | None = None,
    cfg: DetectorConfig | None = None,
) -> ProsodyProfile:
    """One polarity verdict per occurrence window; ratios over occurrences.

    ``node`` is a token sequence or a detector kind, as in the concordance
    module. Literal token nodes are excluded from their own windows; for
    construction nodes (detector kinds) only the grammatical marker is
    excluded, so the verb slot counts as a collocate (a construction's
    prosody lives in what fills it). No occurrences yields the all-zero
    NEUTRAL profile.
    """
    left_w, right_w = window
    counts = {Polarity.NEG: 0, Polarity.POS: 0, Polarity.NEU: 0}
    n = 0
    for _pair_id, sent, (a, b), marker in occurrences(corpus, side, node, cfg):
        n += 1
        surfaces = [t.surface.lower() for t in sent.tokens]
        if marker is None:
            toks = surfaces[max(0, a - left_w):a] + surfaces[b + 1:b + 1 + right_w]
        else:
            positions = [
                i for i in range(max(0, a - left_w), min(len(surfaces), b + 1 + right_w))
                if i != marker
            ]
            toks = [surfaces[i] for i in positions]
        counts[polarity_of_window(toks, lexicon)] += 1
    if n == 0:
        return ProsodyProfile(query_label(node), 0, 0.0, 0.0, 0.0, ProsodyLabel.NEUTRAL)
    partial = ProsodyProfile(
        query_label(node), n, counts[Polarity.NEG] / n, counts[Polarity.POS] / n,
        counts[Polarity.NEU] / n, ProsodyLabel.MIXED,
    )
    return ProsodyProfile(
        partial.node, partial.n_occurrences, partial.neg_ratio, partial.pos_ratio,
        partial.neu_ratio, classify_prosody(partial, thresholds),
    )


def _match_window_tokens(sentence, matches, window) -> list[str]:
    """Union of windows around each match plus the match interior.

    Unlike collocate counting, the construction's own content words (verb,
    agent NP) stay in: "was praised" is favourable because of "praised".
    Only the grammatical markers themselves are dropped.
    """
    left_w, right_w = window
    picked: set[int] = set()
    for m in matches:
        a, b = m.span
        picked.update(range(max(0, a - left_w), min(len(sentence.tokens), b + 1 + right_w)))
    picked.difference_update(m.marker_index for m in matches)
    surfaces = [t.surface.lower() for t in sentence.tokens]
    return [surfaces[i] for i in sorted(picked)]


def pair_polarity(
    pair: ParallelPair,
    lexicon: PolarityLexicon,
    side_policy: SidePolicy = SidePolicy.BOTH,
    window: tuple[int, int] = (4, 4),
    cfg: DetectorConfig | None = None,
) -> Polarity:
    """Polarity of the union of windows around the pair's passive matches.

    Requires at least one source-side match. Under BOTH, a NEG verdict on
    either side wins, then POS, then NEU.
    """
    src_matches = detect(pair.src, cfg)
    if not src_matches:
        raise DataError(f"pair {pair.id!r} has no source-side passive match")

    def side_verdict(sentence, matches) -> Polarity:
        if sentence is None or not matches:
            return Polarity.NEU
        return polarity_of_window(_match_window_tokens(sentence, matches, window), lexicon)

    if side_policy is SidePolicy.SRC:
        return side_verdict(pair.src, src_matches)
    tgt_matches = detect(pair.tgt, cfg) if pair.tgt is not None else []
    if side_policy is SidePolicy.TGT:
        return side_verdict(pair.tgt, tgt_matches)
    verdicts = {side_verdict(pair.src, src_matches), side_verdict(pair.tgt, tgt_matches)}
    if Polarity.NEG in verdicts:
        return Polarity.NEG
    if Polarity.POS in verdicts:
        return Polarity.POS
    return Polarity.NEU
