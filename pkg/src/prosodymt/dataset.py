"""Positive/negative evidence selection and deterministic dataset splitting.

Positive evidence: source has a BE passive, the target uses the marked
passive, and the pair's polarity is negative. Negative evidence: source
has a BE passive and the target stays unmarked (negative-polarity pairs
filtered out by default). Splits use seeded shuffling plus
largest-remainder apportionment, which reproduces 675/101/124 at N=900.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import Corpus, ParallelPair, PolarityLexicon, Polarity, Language
from .detect import DetectorConfig, PassiveKind, PassiveMatch, Voice, classify_voice_zh, detect_en
from .errors import DataError
from .prosody import SidePolicy, pair_polarity


class Evidence(Enum):
    POSITIVE = "pos"
    NEGATIVE = "neg"


@dataclass(frozen=True)
class EvidencePair:
    pair: ParallelPair
    evidence: Evidence
    src_matches: tuple[PassiveMatch, ...]
    tgt_voice: Voice
    polarity: Polarity


@dataclass(frozen=True)
class BuilderConfig:
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    side_policy: SidePolicy = SidePolicy.BOTH
    window: tuple[int, int] = (4, 4)
    filter_negative_polarity: bool = True

    def describe(self) -> dict:
        det = self.detector
        return {
            "max_gap": det.max_gap,
            "count_get": det.count_get,
            "count_light_verb_as_passive": det.count_light_verb_as_passive,
            "light_verb_set": sorted(det.light_verb_set),
            "bei_exclusion": sorted(det.bei_exclusion),
            "side_policy": self.side_policy.value,
            "window": list(self.window),
            "filter_negative_polarity": self.filter_negative_polarity,
        }


@dataclass(frozen=True)
class DatasetSplit:
    train: tuple
    valid: tuple
    test: tuple
    seed: int
    ratios: tuple[float, float, float]

    def sizes(self) -> tuple[int, int, int]:
        return len(self.train), len(self.valid), len(self.test)


def _analyze_pair(pair: ParallelPair, lexicon: PolarityLexicon, cfg: BuilderConfig):
    """BE matches, target voice, and polarity for one EN->ZH pair."""
    if pair.tgt is None or pair.src.language is not Language.EN or pair.tgt.language is not Language.ZH:
        return None
    be_matches = tuple(m for m in detect_en(pair.src, cfg.detector) if m.kind is PassiveKind.BE)
    if not be_matches:
        return None
    voice = classify_voice_zh(pair.tgt, cfg.detector)
    polarity = pair_polarity(pair, lexicon, cfg.side_policy, cfg.window, cfg.detector)
    return be_matches, voice, polarity


def select_positive_evidence(
    corpus: Corpus,
    lexicon: PolarityLexicon,
    cfg: BuilderConfig | None = None,
    allow_ids: Iterable[str] = (),
    deny_ids: Iterable[str] = (),
) -> list[EvidencePair]:
    """Pairs reinforcing the marked-passive/negativity link, in corpus order.

    ``allow_ids`` bypasses only the polarity gate; ``deny_ids`` drops pairs.
    The structural gates (BE match present, marked-passive target) always hold.
    """
    cfg = cfg or BuilderConfig()
    allow, deny = set(allow_ids), set(deny_ids)
    selected = []
    for pair in corpus.pairs:
        if pair.id in deny:
            continue
        analyzed = _analyze_pair(pair, lexicon, cfg)
        if analyzed is None:
            continue
        be_matches, voice, polarity = analyzed
        if voice is not Voice.MARKED_PASSIVE:
            continue
        if polarity is not Polarity.NEG and pair.id not in allow:
            continue
        selected.append(EvidencePair(pair, Evidence.POSITIVE, be_matches, voice, polarity))
    return selected


def select_negative_evidence(
    corpus: Corpus,
    lexicon: PolarityLexicon,
    cfg: BuilderConfig | None = None,
    allow_ids: Iterable[str] = (),
    deny_ids: Iterable[str] = (),
) -> list[EvidencePair]:
    """Pairs attenuating the BE/BEI correspondence (active targets)."""
    cfg = cfg or BuilderConfig()
    allow, deny = set(allow_ids), set(deny_ids)
    selected = []
    for pair in corpus.pairs:
        if pair.id in deny:
            continue
        analyzed = _analyze_pair(pair, lexicon, cfg)
        if analyzed is None:
            continue
        be_matches, voice, polarity = analyzed
        if voice is not Voice.UNMARKED:
            continue
        if cfg.filter_negative_polarity and polarity is Polarity.NEG and pair.id not in allow:
            continue
        selected.append(EvidencePair(pair, Evidence.NEGATIVE, be_matches, voice, polarity))
    return selected


def build_evidence(
    corpus: Corpus,
    lexicon: PolarityLexicon,
    cfg: BuilderConfig | None = None,
    allow_pos: Iterable[str] = (),
    deny_pos: Iterable[str] = (),
    allow_neg: Iterable[str] = (),
    deny_neg: Iterable[str] = (),
) -> list[EvidencePair]:
    """Run both selections and assert disjointness (tgt-voice contradiction)."""
    pos = select_positive_evidence(corpus, lexicon, cfg, allow_pos, deny_pos)
    neg = select_negative_evidence(corpus, lexicon, cfg, allow_neg, deny_neg)
    overlap = {e.pair.id for e in pos} & {e.pair.id for e in neg}
    if overlap:
        raise DataError(f"positive and negative evidence overlap: {sorted(overlap)[:5]}")
    return pos + neg


def largest_remainder(n: int, ratios: Sequence[float]) -> list[int]:
    """Integer apportionment of ``n`` by ratios; ties go to earlier buckets."""
    quotas = [r * n for r in ratios]
    base = [math.floor(q + 1e-9) for q in quotas]
    leftover = n - sum(base)
    remainders = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - base[i]), i))
    for i in remainders[:leftover]:
        base[i] += 1
    return base


def _stratum_key(item) -> str:
    if isinstance(item, EvidencePair):
        return item.evidence.value
    return str(getattr(item, "evidence", ""))


def _reconcile(per_stratum: dict[str, list[int]], quotas: dict[str, list[float]], targets: list[int]):
    """Move units between splits so per-split totals hit the global targets.

    The donor stratum for a move is the one with the largest fractional
    claim on the receiving split (ties: smallest claim on the giving split,
    then stratum order).
    """
    order = list(per_stratum)
    for _ in range(sum(targets)):
        totals = [sum(per_stratum[s][k] for s in order) for k in range(len(targets))]
        over = next((k for k in range(len(targets)) if totals[k] > targets[k]), None)
        if over is None:
            break
        under = next(k for k in range(len(targets)) if totals[k] < targets[k])
        frac = lambda s, k: quotas[s][k] - math.floor(quotas[s][k] + 1e-9)
        donor = max(
            (s for s in order if per_stratum[s][over] > 0),
            key=lambda s: (frac(s, under), -frac(s, over), -order.index(s)),
        )
        per_stratum[donor][over] -= 1
        per_stratum[donor][under] += 1


def split_dataset(
    pairs: Sequence,
    ratios: tuple[float, float, float] = (0.75, 0.1125, 0.1375),
    seed: int = 0,
    stratify: bool = False,
    counts_override: Mapping[str, Sequence[int]] | None = None,
) -> DatasetSplit:
    """Seeded shuffle, then largest-remainder apportionment into train/valid/test.

    With ``stratify`` the apportionment runs per stratum (the evidence
    label) and is reconciled so split totals match the unstratified
    apportionment. ``counts_override`` pins per-stratum (train, valid,
    test) counts exactly.
    """
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise DataError(f"split ratios must sum to 1, got {sum(ratios)}")
    items = list(pairs)
    if not items:
        return DatasetSplit((), (), (), seed, tuple(ratios))
    rng = random.Random(seed)
    rng.shuffle(items)
    targets = largest_remainder(len(items), ratios)

    if not stratify and counts_override is None:
        train = items[: targets[0]]
        valid = items[targets[0]: targets[0] + targets[1]]
        test = items[targets[0] + targets[1]:]
        return DatasetSplit(tuple(train), tuple(valid), tuple(test), seed, tuple(ratios))

    strata: dict[str, list] = {}
    for item in items:
        strata.setdefault(_stratum_key(item), []).append(item)
    if counts_override is not None:
        counts = {s: list(counts_override[s]) for s in strata}
        for s, members in strata.items():
            if sum(counts[s]) != len(members):
                raise DataError(
                    f"counts_override for stratum {s!r} sums to {sum(counts[s])}, have {len(members)} items"
                )
    else:
        quotas = {s: [r * len(members) for r in ratios] for s, members in strata.items()}
        counts = {s: largest_remainder(len(members), ratios) for s, members in strata.items()}
        _reconcile(counts, quotas, targets)

    assignment: dict[int, int] = {}
    for s, members in strata.items():
        t, v, _e = counts[s]
        for i, item in enumerate(members):
            assignment[id(item)] = 0 if i < t else (1 if i < t + v else 2)
    buckets: tuple[list, list, list] = ([], [], [])
    for item in items:
        buckets[assignment[id(item)]].append(item)
    return DatasetSplit(tuple(buckets[0]), tuple(buckets[1]), tuple(buckets[2]), seed, tuple(ratios))


def config_hash(cfg: BuilderConfig, ratios: Sequence[float], seed: int) -> str:
    payload = {"builder": cfg.describe(), "ratios": list(ratios), "seed": seed}
    return hashlib.sha256(json.dumps(payload, sort_keys=True, ensure_ascii=False).encode()).hexdigest()


def _evidence_record(item: EvidencePair) -> dict:
    pair = item.pair
    rec = {
        "id": pair.id,
        "src": pair.src.raw,
        "tgt": pair.tgt.raw if pair.tgt is not None else None,
        "src_lang": pair.src.language.value,
        "tgt_lang": pair.tgt.language.value if pair.tgt is not None else None,
        "evidence": item.evidence.value,
        "polarity": item.polarity.value,
    }
    if pair.meta:
        rec["meta"] = dict(pair.meta)
    return rec


def export_dataset(split: DatasetSplit, out_dir: str | Path, cfg: BuilderConfig | None = None) -> list[Path]:
    """Write train/valid/test JSONL plus a manifest; byte-deterministic."""
    cfg = cfg or BuilderConfig()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, items in (("train", split.train), ("valid", split.valid), ("test", split.test)):
        path = out / f"{name}.jsonl"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for item in items:
                fh.write(json.dumps(_evidence_record(item), ensure_ascii=False, sort_keys=True) + "\n")
        written.append(path)
    manifest = {
        "seed": split.seed,
        "ratios": list(split.ratios),
        "config_hash": config_hash(cfg, split.ratios, split.seed),
        "counts": {"train": len(split.train), "valid": len(split.valid), "test": len(split.test)},
    }
    manifest_path = out / "manifest.json"
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")
    written.append(manifest_path)
    return written


def load_evidence_jsonl(path: str | Path, seg_dict=None) -> list[EvidencePair]:
    """Reload exported evidence records (used by `split` and `score`)."""
    from .corpus import tokenize

    items = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from None
            try:
                evidence = Evidence(rec["evidence"])
                src = tokenize(rec["src"], Language(rec["src_lang"]), seg_dict)
                tgt = (
                    tokenize(rec["tgt"], Language(rec["tgt_lang"]), seg_dict)
                    if rec.get("tgt") is not None
                    else None
                )
                pair = ParallelPair(str(rec["id"]), src, tgt, rec.get("meta", {}))
                polarity = Polarity(rec.get("polarity", "neu"))
            except (KeyError, ValueError) as exc:
                raise DataError(f"{path}: line {lineno}: bad evidence record ({exc})") from None
            be_matches = tuple(m for m in detect_en(src) if m.kind is PassiveKind.BE) if src.language is Language.EN else ()
            voice = classify_voice_zh(tgt) if tgt is not None and tgt.language is Language.ZH else Voice.UNMARKED
            items.append(EvidencePair(pair, evidence, be_matches, voice, polarity))
    return items
