"""Rule-based passive-construction detection for English, Chinese, Spanish.

English: BE (and optionally GET) form followed, across a bounded gap of
negation/adverb fillers, by a past participle. Chinese: the 被 marker
(pattern 被 [NP]? V) and light-verb passives (受到-class); a lexical
notional-passive hint is available separately. Spanish: SER/ESTAR forms
followed by a participle. Adjectival and verbal passives are not
distinguished ("was tired" counts).

All detectors are pure functions over immutable inputs and raise
:class:`~prosodymt.errors.LanguageError` on a wrong-language sentence
rather than returning a silent empty result.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .corpus import Language, TokenizedSentence, is_punct_token
from .errors import LanguageError
from . import resources


class PassiveKind(Enum):
    BE = "be"
    GET = "get"
    BEI = "bei"
    LIGHT_VERB = "light_verb"
    SER_ESTAR = "ser_estar"
    NOTIONAL_HINT = "notional_hint"


class Voice(Enum):
    MARKED_PASSIVE = "marked_passive"
    UNMARKED = "unmarked"


_KIND_LANGUAGE = {
    PassiveKind.BE: Language.EN,
    PassiveKind.GET: Language.EN,
    PassiveKind.BEI: Language.ZH,
    PassiveKind.LIGHT_VERB: Language.ZH,
    PassiveKind.NOTIONAL_HINT: Language.ZH,
    PassiveKind.SER_ESTAR: Language.ES,
}


def kind_language(kind: PassiveKind) -> Language:
    return _KIND_LANGUAGE[kind]


@dataclass(frozen=True)
class PassiveMatch:
    kind: PassiveKind
    marker_index: int
    verb_index: int | None
    agent_present: bool
    span: tuple[int, int]


@dataclass(frozen=True)
class DetectorConfig:
    max_gap: int = 3
    count_get: bool = False
    light_verb_set: frozenset[str] = field(default_factory=resources.light_verbs_zh)
    count_light_verb_as_passive: bool = False
    irregular_participles_en: frozenset[str] = field(default_factory=resources.irregular_participles_en)
    irregular_participles_es: frozenset[str] = field(default_factory=resources.irregular_participles_es)
    bei_exclusion: frozenset[str] = field(default_factory=resources.bei_exclusion_zh)
    zh_verb_set: frozenset[str] = field(default_factory=resources.zh_verbs)

    def __post_init__(self):
        if self.max_gap < 0:
            raise ValueError("max_gap must be >= 0")


BE_FORMS = frozenset({"am", "is", "are", "was", "were", "be", "been", "being", "'s", "'re", "'m"})
GET_FORMS = frozenset({"get", "gets", "got", "gotten", "getting"})
_NEGATION_EN = frozenset({"not", "n't", "never"})
# "very" is admitted so "have been very badly treated" parses within the gap.
_ADVERBS_EN = frozenset({"also", "already", "just", "quite", "so", "all", "still", "very"})
# Frequent -ed words that are not participles; kept out of the regular rule.
_NON_PARTICIPLES_EN = frozenset({"indeed", "hundred", "hatred", "kindred", "sacred", "naked", "wicked"})

_FILLERS_ES = frozenset(
    {"no", "nunca", "jamás", "ya", "muy", "bien", "mal", "también", "siempre",
     "tan", "todavía", "aún", "recién", "casi", "siendo", "estando"}
)
_ES_PARTICIPLE_SUFFIXES = ("ado", "ada", "ados", "adas", "ido", "ida", "idos", "idas")
_ZH_ASPECT_PARTICLES = frozenset({"了", "着", "过"})
_ZH_VERB_WINDOW = 4


def _require_language(sentence: TokenizedSentence, expected: Language, op: str) -> None:
    if sentence.language is not expected:
        raise LanguageError(
            f"{op} requires a {expected.value.upper()} sentence, got {sentence.language.value.upper()}"
        )


def _is_participle_en(token: str, irregular: frozenset[str]) -> bool:
    if token in ("been", "being"):
        return False
    if token in irregular:
        return True
    if token in _NON_PARTICIPLES_EN:
        return False
    return len(token) >= 4 and token.endswith("ed")


def _is_participle_es(token: str, irregular: frozenset[str]) -> bool:
    if token in irregular:
        return True
    return len(token) >= 4 and token.endswith(_ES_PARTICIPLE_SUFFIXES)


def _find_participle(surfaces, start, max_gap, is_participle, is_filler):
    """First participle after ``start`` across at most ``max_gap`` fillers."""
    gap = 0
    j = start + 1
    while j < len(surfaces):
        if is_participle(surfaces[j]):
            return j
        if not is_filler(surfaces[j]) or gap >= max_gap:
            return None
        gap += 1
        j += 1
    return None


def _copula_matches(sentence, cfg, kind, marker_forms, is_participle, is_filler, agent_word):
    surfaces = [t.surface.lower() for t in sentence.tokens]
    matches: list[PassiveMatch] = []
    claimed: set[int] = set()  # one match per participle ("is being built")
    for idx, s in enumerate(surfaces):
        if s not in marker_forms:
            continue
        verb = _find_participle(surfaces, idx, cfg.max_gap, is_participle, is_filler)
        if verb is None or verb in claimed:
            continue
        claimed.add(verb)
        agent = agent_word in surfaces[verb + 1:verb + 3]
        matches.append(PassiveMatch(kind, idx, verb, agent, (idx, verb)))
    return matches


def detect_en(sentence: TokenizedSentence, cfg: DetectorConfig | None = None) -> list[PassiveMatch]:
    """Detect English BE passives (and GET passives when ``cfg.count_get``)."""
    _require_language(sentence, Language.EN, "detect_en")
    cfg = cfg or DetectorConfig()

    def is_filler(tok: str) -> bool:
        return (
            tok in _NEGATION_EN
            or tok in _ADVERBS_EN
            or tok == "being"
            or (len(tok) >= 3 and tok.endswith("ly"))
        )

    def is_participle(tok: str) -> bool:
        return _is_participle_en(tok, cfg.irregular_participles_en)

    matches = _copula_matches(sentence, cfg, PassiveKind.BE, BE_FORMS, is_participle, is_filler, "by")
    if cfg.count_get:
        get_matches = _copula_matches(
            sentence, cfg, PassiveKind.GET, GET_FORMS, is_participle, is_filler, "by"
        )
        taken = {m.verb_index for m in matches}
        matches.extend(m for m in get_matches if m.verb_index not in taken)
        matches.sort(key=lambda m: m.marker_index)
    return matches


def detect_es(sentence: TokenizedSentence, cfg: DetectorConfig | None = None) -> list[PassiveMatch]:
    """Detect Spanish SER/ESTAR + past participle constructions."""
    _require_language(sentence, Language.ES, "detect_es")
    cfg = cfg or DetectorConfig()

    def is_filler(tok: str) -> bool:
        return tok in _FILLERS_ES or (len(tok) >= 6 and tok.endswith("mente"))

    def is_participle(tok: str) -> bool:
        if tok in ("sido", "estado"):  # auxiliary participles act as markers
            return False
        return _is_participle_es(tok, cfg.irregular_participles_es)

    return _copula_matches(
        sentence, cfg, PassiveKind.SER_ESTAR, resources.ser_estar_forms(), is_participle, is_filler, "por"
    )


def _locate_bei_verb(surfaces: list[str], marker: int, verb_set: frozenset[str]):
    """Verb position and agent flag for the 被 [NP]? V pattern.

    The first listed verb within a short window is taken as V; an
    intervening token means a long passive (agent present). Without a
    listed verb the next token is assumed to be V (short passive).
    """
    limit = min(len(surfaces), marker + 1 + _ZH_VERB_WINDOW)
    for j in range(marker + 1, limit):
        if surfaces[j] in verb_set:
            return j, j > marker + 1
    nxt = marker + 1
    if nxt >= len(surfaces) or is_punct_token(surfaces[nxt]):
        return None, False
    return nxt, False


def detect_zh(sentence: TokenizedSentence, cfg: DetectorConfig | None = None) -> list[PassiveMatch]:
    """Detect Chinese BEI and light-verb passives on a segmented sentence.

    BEI candidates are tokens equal to 被 or starting with 被 (fused forms
    from user dictionaries); candidates listed in ``cfg.bei_exclusion``
    (被子, 被动, ...) never match.
    """
    _require_language(sentence, Language.ZH, "detect_zh")
    cfg = cfg or DetectorConfig()
    surfaces = sentence.surfaces()
    matches: list[PassiveMatch] = []
    for idx, s in enumerate(surfaces):
        if s.startswith("被") and s not in cfg.bei_exclusion:
            if s == "被":
                verb, agent = _locate_bei_verb(surfaces, idx, cfg.zh_verb_set)
                if verb is None:
                    continue
                matches.append(PassiveMatch(PassiveKind.BEI, idx, verb, agent, (idx, verb)))
            else:
                # fused 被V token: marker and verb share the token
                matches.append(PassiveMatch(PassiveKind.BEI, idx, None, False, (idx, idx)))
        elif s in cfg.light_verb_set:
            comp = _light_verb_complement(surfaces, idx)
            if comp is not None:
                matches.append(PassiveMatch(PassiveKind.LIGHT_VERB, idx, comp, False, (idx, comp)))
    matches.sort(key=lambda m: m.marker_index)
    return matches


def _light_verb_complement(surfaces: list[str], marker: int) -> int | None:
    limit = min(len(surfaces), marker + 1 + _ZH_VERB_WINDOW)
    for j in range(marker + 1, limit):
        s = surfaces[j]
        if s in _ZH_ASPECT_PARTICLES or is_punct_token(s):
            continue
        return j
    return None


def detect_notional_hint(
    sentence: TokenizedSentence,
    patient_lexicon: frozenset[str] | set[str],
    cfg: DetectorConfig | None = None,
) -> list[PassiveMatch]:
    """Advisory hint: sentence-initial inanimate noun followed by a listed
    transitive verb with no passive marker in between. Never counted by
    :func:`classify_voice_zh`."""
    _require_language(sentence, Language.ZH, "detect_notional_hint")
    cfg = cfg or DetectorConfig()
    surfaces = sentence.surfaces()
    first = next((i for i, s in enumerate(surfaces) if not is_punct_token(s)), None)
    if first is None or surfaces[first] not in patient_lexicon:
        return []
    limit = min(len(surfaces), first + 2 + 2)  # verb at most 2 tokens past the noun
    for j in range(first + 1, limit):
        s = surfaces[j]
        if s.startswith("被") or s in cfg.light_verb_set:
            return []
        if s in cfg.zh_verb_set:
            return [PassiveMatch(PassiveKind.NOTIONAL_HINT, first, None, False, (first, j))]
    return []


def classify_voice_zh(sentence: TokenizedSentence, cfg: DetectorConfig | None = None) -> Voice:
    """MARKED_PASSIVE iff a BEI match exists (or a light-verb match when
    ``cfg.count_light_verb_as_passive``)."""
    cfg = cfg or DetectorConfig()
    matches = detect_zh(sentence, cfg)
    for m in matches:
        if m.kind is PassiveKind.BEI:
            return Voice.MARKED_PASSIVE
        if m.kind is PassiveKind.LIGHT_VERB and cfg.count_light_verb_as_passive:
            return Voice.MARKED_PASSIVE
    return Voice.UNMARKED


def detect(sentence: TokenizedSentence, cfg: DetectorConfig | None = None) -> list[PassiveMatch]:
    """Language-dispatching detector (notional hints excluded)."""
    if sentence.language is Language.EN:
        return detect_en(sentence, cfg)
    if sentence.language is Language.ZH:
        return detect_zh(sentence, cfg)
    return detect_es(sentence, cfg)
