"""KWIC concordancing, collocate extraction, and normalized frequency.

Queries are either a token sequence (matched case-insensitively) or a
:class:`~prosodymt.detect.PassiveKind`, in which case occurrences are the
detector's match spans. Windows never cross sentence boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .corpus import Corpus, Side, TokenizedSentence, is_punct_token
from .detect import DetectorConfig, PassiveKind, detect, kind_language
from .errors import DataError


@dataclass(frozen=True)
class ConcordanceLine:
    left: tuple[str, ...]
    node: tuple[str, ...]
    right: tuple[str, ...]
    source_id: str


@dataclass(frozen=True)
class CollocateRow:
    collocate: str
    freq: int
    left: int
    right: int


@dataclass(frozen=True)
class CollocateTable:
    node: str
    window: tuple[int, int]
    rows: tuple[CollocateRow, ...]
    total_windows: int


def _normalize_query(query: "PassiveKind | str | Sequence[str]") -> tuple[PassiveKind | None, list[str]]:
    if isinstance(query, PassiveKind):
        return query, []
    if isinstance(query, str):
        if not query:
            raise DataError("empty query")
        return None, [query.lower()]
    toks = [t.lower() for t in query]
    if not toks:
        raise DataError("empty query")
    return None, toks


def query_label(query) -> str:
    kind, toks = _normalize_query(query)
    return kind.value if kind is not None else " ".join(toks)


def occurrences(
    corpus: Corpus,
    side: Side,
    query,
    cfg: DetectorConfig | None = None,
) -> Iterator[tuple[str, TokenizedSentence, tuple[int, int], int | None]]:
    """Yield (pair_id, sentence, span, marker_index) per occurrence, in file
    order. marker_index is None for literal token-sequence queries."""
    kind, tokens = _normalize_query(query)
    for pair_id, sent in corpus.sentences(side):
        if kind is not None:
            if sent.language is not kind_language(kind):
                continue
            for m in detect(sent, cfg):
                if m.kind is kind:
                    yield pair_id, sent, m.span, m.marker_index
        else:
            surfaces = [t.surface.lower() for t in sent.tokens]
            k = len(tokens)
            for i in range(0, len(surfaces) - k + 1):
                if surfaces[i:i + k] == tokens:
                    yield pair_id, sent, (i, i + k - 1), None


def kwic(
    corpus: Corpus,
    side: Side,
    query,
    width: int = 4,
    cfg: DetectorConfig | None = None,
) -> list[ConcordanceLine]:
    """One concordance line per occurrence, contexts truncated to ``width`` tokens."""
    if width < 0:
        raise DataError("width must be >= 0")
    lines = []
    for pair_id, sent, (a, b), _marker in occurrences(corpus, side, query, cfg):
        surfaces = sent.surfaces()
        lines.append(
            ConcordanceLine(
                left=tuple(surfaces[max(0, a - width):a]),
                node=tuple(surfaces[a:b + 1]),
                right=tuple(surfaces[b + 1:b + 1 + width]),
                source_id=pair_id,
            )
        )
    return lines


def collocates(
    corpus: Corpus,
    side: Side,
    query,
    window: tuple[int, int] = (4, 4),
    cfg: DetectorConfig | None = None,
    include_punctuation: bool = False,
) -> CollocateTable:
    """Count tokens in the window around each occurrence (node excluded).

    Collocates are counted case-folded; punctuation tokens are excluded by
    default. Windows truncate at sentence edges without padding.
    """
    left_w, right_w = window
    if left_w < 0 or right_w < 0:
        raise DataError("window sizes must be >= 0")
    counts: dict[str, list[int]] = {}
    total = 0
    for _pair_id, sent, (a, b), _marker in occurrences(corpus, side, query, cfg):
        total += 1
        surfaces = [t.surface.lower() for t in sent.tokens]
        for j in range(max(0, a - left_w), a):
            _bump(counts, surfaces[j], 0, include_punctuation)
        for j in range(b + 1, min(len(surfaces), b + 1 + right_w)):
            _bump(counts, surfaces[j], 1, include_punctuation)
    rows = tuple(
        CollocateRow(tok, sides[0] + sides[1], sides[0], sides[1])
        for tok, sides in sorted(counts.items(), key=lambda kv: (-(kv[1][0] + kv[1][1]), kv[0]))
    )
    return CollocateTable(query_label(query), (left_w, right_w), rows, total)


def _bump(counts, token, side_idx, include_punctuation):
    if not include_punctuation and is_punct_token(token):
        return
    slot = counts.setdefault(token, [0, 0])
    slot[side_idx] += 1


def normalized_frequency(
    corpus: Corpus,
    side: Side,
    detector_kind: PassiveKind,
    cfg: DetectorConfig | None = None,
) -> float:
    """Detector-match occurrences per 100,000 tokens on the chosen side."""
    token_count = corpus.token_count(side)
    if token_count == 0:
        raise DataError("cannot normalize frequency over an empty side (token count 0)")
    n = sum(1 for _ in occurrences(corpus, side, detector_kind, cfg))
    return n * 100_000 / token_count


def format_kwic(lines: Sequence[ConcordanceLine]) -> str:
    """Aligned plain-text KWIC columns (left right-aligned, node centered)."""
    if not lines:
        return ""
    lefts = [" ".join(l.left) for l in lines]
    nodes = [" ".join(l.node) for l in lines]
    rights = [" ".join(l.right) for l in lines]
    lw = max(len(s) for s in lefts)
    nw = max(len(s) for s in nodes)
    return "\n".join(
        f"{l:>{lw}}  {n:<{nw}}  {r}".rstrip() for l, n, r in zip(lefts, nodes, rights)
    )


def collocates_tsv(table: CollocateTable) -> str:
    """``collocate<TAB>freq<TAB>left<TAB>right`` rows."""
    return "\n".join(f"{r.collocate}\t{r.freq}\t{r.left}\t{r.right}" for r in table.rows)
