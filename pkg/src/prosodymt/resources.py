"""Loaders for the word lists and demo corpora bundled with the package.

All lists are plain UTF-8, one entry per line, '#' comments allowed, and can
be overridden through :class:`~prosodymt.detect.DetectorConfig` or CLI flags.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from .corpus import PolarityLexicon, SegmentationDict, load_lexicon


def data_path(name: str) -> Path:
    return Path(str(resources.files("prosodymt").joinpath("data", name)))


def load_word_set(path: str | Path) -> frozenset[str]:
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            w = line.strip()
            if w and not w.startswith("#"):
                words.add(w)
    return frozenset(words)


@lru_cache(maxsize=None)
def _bundled_set(name: str) -> frozenset[str]:
    return load_word_set(data_path(name))


def irregular_participles_en() -> frozenset[str]:
    return _bundled_set("irregular_participles_en.txt")


def irregular_participles_es() -> frozenset[str]:
    return _bundled_set("irregular_participles_es.txt")


def ser_estar_forms() -> frozenset[str]:
    return _bundled_set("ser_estar_forms.txt")


def light_verbs_zh() -> frozenset[str]:
    return _bundled_set("light_verbs_zh.txt")


def bei_exclusion_zh() -> frozenset[str]:
    return _bundled_set("bei_exclusion_zh.txt")


def zh_verbs() -> frozenset[str]:
    return _bundled_set("zh_verbs.txt")


def patient_nouns_zh() -> frozenset[str]:
    return _bundled_set("patient_nouns_zh.txt")


@lru_cache(maxsize=None)
def default_segmentation_dict() -> SegmentationDict:
    return SegmentationDict.load(data_path("zh_seg_dict.txt"))


@lru_cache(maxsize=None)
def demo_polarity_lexicon() -> PolarityLexicon:
    return load_lexicon(data_path("demo_polarity.tsv"))


def synthetic_corpus_path() -> Path:
    """120-pair EN-ZH demo corpus used by the acceptance suite and CLI examples."""
    return data_path("synthetic_en_zh_120.jsonl")


def detector_fixtures_path() -> Path:
    """Hand-labeled mini-corpus for detector evaluation."""
    return data_path("detector_fixtures.jsonl")
