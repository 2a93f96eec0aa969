"""Text ingestion: tokenization, Chinese segmentation, corpus and lexicon loading.

Tokenization scheme (documented because corpus conventions vary):

* English/Spanish: whitespace chunks; leading and trailing punctuation
  characters are split off as single-character tokens; English clitics
  ('s, n't, 're, 'm, 've, 'd) become their own tokens. Case is preserved.
* Chinese: forward maximum matching against a word dictionary over Han
  runs, single-character fallback; punctuation characters are single
  tokens; non-CJK runs (latin, digits) are kept whole; whitespace only
  separates tokens.

Every token records character (code point) offsets into the raw string,
so the raw text is always reconstructible from the token spans.
"""

from __future__ import annotations

import json
import unicodedata
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import CorpusFormatError, DataError


class Language(Enum):
    EN = "en"
    ZH = "zh"
    ES = "es"


class Side(Enum):
    SRC = "src"
    TGT = "tgt"


class Polarity(Enum):
    POS = "pos"
    NEG = "neg"
    NEU = "neu"


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int


@dataclass(frozen=True)
class TokenizedSentence:
    """A language-tagged token sequence with character offsets into ``raw``."""

    language: Language
    tokens: tuple[Token, ...]
    raw: str

    def __post_init__(self):
        prev_end = -1
        for tok in self.tokens:
            if not (0 <= tok.start < tok.end <= len(self.raw)):
                raise DataError(f"token span out of bounds: {tok}")
            if tok.start < prev_end:
                raise DataError(f"token spans overlap or regress at {tok}")
            if self.raw[tok.start:tok.end] != tok.surface:
                raise DataError(f"token surface does not match raw text at {tok}")
            prev_end = tok.end

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def reconstruct(self) -> str:
        """Rebuild the raw string from token surfaces and recorded gaps."""
        if not self.tokens:
            return self.raw
        parts = [self.raw[: self.tokens[0].start]]
        for i, tok in enumerate(self.tokens):
            parts.append(tok.surface)
            nxt = self.tokens[i + 1].start if i + 1 < len(self.tokens) else len(self.raw)
            parts.append(self.raw[tok.end:nxt])
        return "".join(parts)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class ParallelPair:
    id: str
    src: TokenizedSentence
    tgt: TokenizedSentence | None
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.tgt is not None and self.src.language == self.tgt.language:
            raise DataError(f"pair {self.id!r}: src and tgt share language {self.src.language.value}")


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable collection of (possibly monolingual) pairs."""

    pairs: tuple[ParallelPair, ...]
    src_token_count: int
    tgt_token_count: int

    @classmethod
    def from_pairs(cls, pairs: Iterable[ParallelPair]) -> "Corpus":
        pairs = tuple(pairs)
        seen: set[str] = set()
        for p in pairs:
            if p.id in seen:
                raise DataError(f"duplicate pair id {p.id!r}")
            seen.add(p.id)
        src_n = sum(len(p.src) for p in pairs)
        tgt_n = sum(len(p.tgt) for p in pairs if p.tgt is not None)
        return cls(pairs, src_n, tgt_n)

    def token_count(self, side: Side) -> int:
        return self.src_token_count if side is Side.SRC else self.tgt_token_count

    def sentences(self, side: Side) -> Iterator[tuple[str, TokenizedSentence]]:
        """Yield (pair_id, sentence) for the chosen side, skipping absent sides."""
        for p in self.pairs:
            sent = p.src if side is Side.SRC else p.tgt
            if sent is not None:
                yield p.id, sent

    def __len__(self) -> int:
        return len(self.pairs)


# ---------------------------------------------------------------------------
# Tokenization
# ---------------------------------------------------------------------------

EN_CLITICS = ("n't", "'s", "'re", "'m", "'ve", "'d")


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def is_punct_token(surface: str) -> bool:
    """True when every character of the token is punctuation."""
    return bool(surface) and all(_is_punct_char(c) for c in surface)


def _is_cjk(ch: str) -> bool:
    cp = ord(ch)
    return (
        0x4E00 <= cp <= 0x9FFF
        or 0x3400 <= cp <= 0x4DBF
        or 0xF900 <= cp <= 0xFAFF
        or 0x20000 <= cp <= 0x2FA1F
    )


def _whitespace_chunks(text: str) -> Iterator[tuple[int, str]]:
    start = None
    for i, ch in enumerate(text):
        if ch.isspace():
            if start is not None:
                yield start, text[start:i]
                start = None
        elif start is None:
            start = i
    if start is not None:
        yield start, text[start:]


def _split_chunk(chunk: str, offset: int, clitics: Sequence[str]) -> list[Token]:
    i, j = 0, len(chunk)
    leading: list[Token] = []
    trailing: list[Token] = []
    while i < j and _is_punct_char(chunk[i]):
        leading.append(Token(chunk[i], offset + i, offset + i + 1))
        i += 1
    while j > i and _is_punct_char(chunk[j - 1]):
        j -= 1
        trailing.append(Token(chunk[j], offset + j, offset + j + 1))
    trailing.reverse()

    core = chunk[i:j]
    parts: list[tuple[str, int]] = []  # (surface, start-within-chunk), right to left
    end = j
    while core:
        lowered = core.lower()
        for cl in clitics:
            if lowered.endswith(cl) and len(core) > len(cl):
                cut = len(core) - len(cl)
                parts.append((core[cut:], i + cut))
                core = core[:cut]
                end = i + cut
                break
        else:
            break
    middle: list[Token] = []
    if core:
        middle.append(Token(core, offset + i, offset + i + len(core)))
    for surface, start in reversed(parts):
        middle.append(Token(surface, offset + start, offset + start + len(surface)))
    return leading + middle + trailing


def tokenize_en(text: str) -> TokenizedSentence:
    """Tokenize English text: whitespace split, edge punctuation and clitics split off."""
    tokens: list[Token] = []
    for start, chunk in _whitespace_chunks(text):
        tokens.extend(_split_chunk(chunk, start, EN_CLITICS))
    return TokenizedSentence(Language.EN, tuple(tokens), text)


def tokenize_es(text: str) -> TokenizedSentence:
    """Tokenize Spanish text: as :func:`tokenize_en` without the clitic rules."""
    tokens: list[Token] = []
    for start, chunk in _whitespace_chunks(text):
        tokens.extend(_split_chunk(chunk, start, ()))
    return TokenizedSentence(Language.ES, tuple(tokens), text)


# ---------------------------------------------------------------------------
# Chinese segmentation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SegmentationDict:
    """Word list driving forward-maximum-match segmentation."""

    words: frozenset[str]
    max_word_len: int

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "SegmentationDict":
        ws = frozenset(words)
        if "" in ws:
            raise DataError("segmentation dictionary entries must be non-empty")
        return cls(ws, max((len(w) for w in ws), default=0))

    @classmethod
    def load(cls, path: str | Path) -> "SegmentationDict":
        words = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                w = line.strip()
                if w and not w.startswith("#"):
                    words.append(w)
        return cls.from_words(words)


def segment_zh(text: str, dictionary: SegmentationDict) -> TokenizedSentence:
    """Segment Chinese text by forward maximum matching against ``dictionary``.

    At each Han position the longest dictionary word wins, with a
    single-character fallback. Punctuation characters are single tokens;
    non-CJK runs are kept whole.
    """
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if _is_cjk(ch):
            size = 1
            for k in range(min(dictionary.max_word_len, n - i), 1, -1):
                if text[i:i + k] in dictionary.words:
                    size = k
                    break
            tokens.append(Token(text[i:i + size], i, i + size))
            i += size
        elif _is_punct_char(ch):
            tokens.append(Token(ch, i, i + 1))
            i += 1
        else:
            j = i + 1
            while j < n and not (text[j].isspace() or _is_cjk(text[j]) or _is_punct_char(text[j])):
                j += 1
            tokens.append(Token(text[i:j], i, j))
            i = j
    return TokenizedSentence(Language.ZH, tuple(tokens), text)


def tokenize(text: str, language: Language, seg_dict: SegmentationDict | None = None) -> TokenizedSentence:
    """Dispatch to the per-language tokenizer. ZH requires a dictionary
    (falls back to the bundled one)."""
    if language is Language.EN:
        return tokenize_en(text)
    if language is Language.ES:
        return tokenize_es(text)
    if seg_dict is None:
        from .resources import default_segmentation_dict

        seg_dict = default_segmentation_dict()
    return segment_zh(text, seg_dict)


# ---------------------------------------------------------------------------
# Polarity lexicon
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolarityLexicon:
    """token -> (polarity, weight); lookups are total (missing -> NEU, 0.0)."""

    entries: Mapping[str, tuple[Polarity, float]]

    def lookup(self, token: str) -> tuple[Polarity, float]:
        return self.entries.get(token, (Polarity.NEU, 0.0))

    @classmethod
    def from_entries(cls, entries: Mapping[str, tuple[str | Polarity, float]]) -> "PolarityLexicon":
        parsed = {}
        for token, (pol, weight) in entries.items():
            parsed[token] = (pol if isinstance(pol, Polarity) else Polarity(pol.lower()), float(weight))
        return cls(parsed)


def load_lexicon(path: str | Path) -> PolarityLexicon:
    """Load a ``token<TAB>polarity[<TAB>weight]`` lexicon; '#' lines are comments."""
    entries: dict[str, tuple[Polarity, float]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped.strip() or stripped.lstrip().startswith("#"):
                continue
            fields = stripped.split("\t")
            if len(fields) not in (2, 3):
                raise CorpusFormatError(f"expected 2 or 3 tab-separated fields, got {len(fields)}", lineno)
            token, pol_raw = fields[0], fields[1].strip().lower()
            try:
                polarity = Polarity(pol_raw)
            except ValueError:
                raise CorpusFormatError(f"unknown polarity label {fields[1]!r}", lineno) from None
            weight = 1.0
            if len(fields) == 3:
                try:
                    weight = float(fields[2])
                except ValueError:
                    raise CorpusFormatError(f"bad weight {fields[2]!r}", lineno) from None
            if token in entries:
                warnings.warn(f"duplicate lexicon entry {token!r} at line {lineno}; last row wins")
            entries[token] = (polarity, weight)
    return PolarityLexicon(entries)


# ---------------------------------------------------------------------------
# Corpus loading
# ---------------------------------------------------------------------------


def _parse_lang(value: str, lineno: int | None = None) -> Language:
    try:
        return Language(value.lower())
    except ValueError:
        raise CorpusFormatError(f"unknown language {value!r}", lineno) from None


def load_parallel(
    path: str | Path,
    fmt: str = "jsonl",
    *,
    src_lang: Language | str | None = None,
    tgt_lang: Language | str | None = None,
    monolingual: bool = False,
    seg_dict: SegmentationDict | None = None,
) -> Corpus:
    """Load a parallel (or monolingual) corpus from JSONL or TSV.

    JSONL records look like ``{"id", "src", "tgt", "src_lang", "tgt_lang",
    "meta"?}``; records may omit languages if the corresponding argument is
    given. TSV rows are ``id<TAB>src<TAB>tgt`` and require both language
    arguments. File order is preserved.
    """
    fmt = fmt.lower()
    if fmt not in ("jsonl", "tsv"):
        raise CorpusFormatError(f"unknown corpus format {fmt!r}")
    if isinstance(src_lang, str):
        src_lang = _parse_lang(src_lang)
    if isinstance(tgt_lang, str):
        tgt_lang = _parse_lang(tgt_lang)

    pairs: list[ParallelPair] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            if fmt == "jsonl":
                pair = _pair_from_json(line, lineno, src_lang, tgt_lang, monolingual, seg_dict)
            else:
                pair = _pair_from_tsv(line, lineno, src_lang, tgt_lang, monolingual, seg_dict)
            if pair.id in seen_ids:
                raise CorpusFormatError(f"duplicate pair id {pair.id!r}", lineno)
            seen_ids.add(pair.id)
            pairs.append(pair)
    return Corpus.from_pairs(pairs)


def _pair_from_json(line, lineno, src_lang, tgt_lang, monolingual, seg_dict) -> ParallelPair:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusFormatError(f"invalid JSON ({exc.msg})", lineno) from None
    if not isinstance(rec, dict):
        raise CorpusFormatError("record is not a JSON object", lineno)
    for key in ("id", "src"):
        if key not in rec:
            raise CorpusFormatError(f"missing field {key!r}", lineno)
    s_lang = _parse_lang(rec["src_lang"], lineno) if "src_lang" in rec else src_lang
    if s_lang is None:
        raise CorpusFormatError("missing field 'src_lang' and no default given", lineno)
    src = tokenize(str(rec["src"]), s_lang, seg_dict)
    tgt = None
    if "tgt" in rec and rec["tgt"] is not None:
        t_lang = _parse_lang(rec["tgt_lang"], lineno) if "tgt_lang" in rec else tgt_lang
        if t_lang is None:
            raise CorpusFormatError("missing field 'tgt_lang' and no default given", lineno)
        tgt = tokenize(str(rec["tgt"]), t_lang, seg_dict)
    elif not monolingual:
        raise CorpusFormatError("missing field 'tgt' in parallel mode", lineno)
    meta = rec.get("meta", {})
    if not isinstance(meta, dict):
        raise CorpusFormatError("'meta' must be an object", lineno)
    return ParallelPair(str(rec["id"]), src, tgt, meta)


def _pair_from_tsv(line, lineno, src_lang, tgt_lang, monolingual, seg_dict) -> ParallelPair:
    fields = line.rstrip("\n").split("\t")
    expected = 2 if monolingual else 3
    if len(fields) < expected:
        raise CorpusFormatError(f"expected {expected} tab-separated fields, got {len(fields)}", lineno)
    if src_lang is None:
        raise CorpusFormatError("TSV corpora need src_lang", lineno)
    src = tokenize(fields[1], src_lang, seg_dict)
    tgt = None
    if not monolingual:
        if tgt_lang is None:
            raise CorpusFormatError("TSV parallel corpora need tgt_lang", lineno)
        tgt = tokenize(fields[2], tgt_lang, seg_dict)
    return ParallelPair(fields[0], src, tgt)
