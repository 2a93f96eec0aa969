"""Run configuration: TOML file merged with CLI flags (flags win).

Every command dumps its resolved configuration as a single JSON line on
stderr so any run is reproducible from the dump alone.
"""

from __future__ import annotations

import copy
import json
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .corpus import SegmentationDict, load_lexicon
from .detect import DetectorConfig
from .errors import ConfigError
from .prosody import ProsodyThresholds, SidePolicy
from .probe import ProbeConfig
from . import resources

DEFAULTS: dict[str, dict] = {
    "detector": {
        "max_gap": 3,
        "count_get": False,
        "count_light_verb_as_passive": False,
        "light_verbs_file": None,
        "bei_exclusion_file": None,
        "irregular_en_file": None,
        "irregular_es_file": None,
        "zh_verbs_file": None,
    },
    "paths": {
        "lexicon": None,
        "seg_dict": None,
        "patient_nouns": None,
    },
    "prosody": {
        "window_left": 4,
        "window_right": 4,
        "dominant": 0.5,
        "side_policy": "both",
    },
    "builder": {
        "filter_negative_polarity": True,
    },
    "split": {
        "ratios": [0.75, 0.1125, 0.1375],
        "seed": 0,
        "stratify": False,
    },
    "probe": {
        "train_frac": 0.8,
        "lr": 0.1,
        "epochs": 500,
        "seed": 0,
        "l2": 0.0,
    },
    "metrics": {
        "max_ngram": 4,
        "smooth_add_k": None,
        "zh_char_tokenize": True,
        "beta": 2.0,
        "char_order": 6,
        "word_order": 0,
    },
    "remote": {
        "batch_size": 16,
        "retries": 3,
        "backoff_base": 0.5,
        "token_env": "PROSODYMT_TOKEN",
    },
}


class RunConfig:
    def __init__(self, values: dict[str, dict]):
        self.values = values

    @classmethod
    def load(cls, config_path: str | None = None, overrides: dict[tuple[str, str], object] | None = None) -> "RunConfig":
        values = copy.deepcopy(DEFAULTS)
        if config_path:
            try:
                with open(config_path, "rb") as fh:
                    file_values = tomllib.load(fh)
            except FileNotFoundError:
                raise ConfigError(f"config file not found: {config_path}") from None
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"bad config file {config_path}: {exc}") from None
            for section, entries in file_values.items():
                if section not in values:
                    raise ConfigError(f"unknown config section [{section}]")
                if not isinstance(entries, dict):
                    raise ConfigError(f"config section [{section}] must be a table")
                for key, value in entries.items():
                    if key not in values[section]:
                        raise ConfigError(f"unknown config key {section}.{key}")
                    values[section][key] = value
        for (section, key), value in (overrides or {}).items():
            if value is not None:
                values[section][key] = value
        return cls(values)

    def get(self, section: str, key: str):
        return self.values[section][key]

    def dump(self, invocation: dict | None = None, stream=None) -> str:
        payload = {"resolved_config": self.values}
        if invocation:
            payload["invocation"] = invocation
        line = json.dumps(payload, sort_keys=True, ensure_ascii=False)
        print(line, file=stream if stream is not None else sys.stderr)
        return line

    # -- typed views ---------------------------------------------------------

    def detector_config(self) -> DetectorConfig:
        d = self.values["detector"]
        kwargs: dict = {
            "max_gap": int(d["max_gap"]),
            "count_get": bool(d["count_get"]),
            "count_light_verb_as_passive": bool(d["count_light_verb_as_passive"]),
        }
        files = {
            "light_verbs_file": "light_verb_set",
            "bei_exclusion_file": "bei_exclusion",
            "irregular_en_file": "irregular_participles_en",
            "irregular_es_file": "irregular_participles_es",
            "zh_verbs_file": "zh_verb_set",
        }
        for file_key, field_name in files.items():
            if d[file_key]:
                kwargs[field_name] = resources.load_word_set(d[file_key])
        try:
            return DetectorConfig(**kwargs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def seg_dict(self) -> SegmentationDict:
        path = self.values["paths"]["seg_dict"]
        return SegmentationDict.load(path) if path else resources.default_segmentation_dict()

    def lexicon(self, flag_path: str | None = None):
        path = flag_path or self.values["paths"]["lexicon"]
        return load_lexicon(path) if path else resources.demo_polarity_lexicon()

    def patient_nouns(self) -> frozenset[str]:
        path = self.values["paths"]["patient_nouns"]
        return resources.load_word_set(path) if path else resources.patient_nouns_zh()

    def window(self) -> tuple[int, int]:
        p = self.values["prosody"]
        return int(p["window_left"]), int(p["window_right"])

    def thresholds(self) -> ProsodyThresholds:
        try:
            return ProsodyThresholds(float(self.values["prosody"]["dominant"]))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def side_policy(self) -> SidePolicy:
        raw = self.values["prosody"]["side_policy"]
        try:
            return SidePolicy(raw)
        except ValueError:
            raise ConfigError(f"unknown side policy {raw!r}") from None

    def probe_config(self) -> ProbeConfig:
        p = self.values["probe"]
        try:
            return ProbeConfig(
                train_frac=float(p["train_frac"]),
                lr=float(p["lr"]),
                epochs=int(p["epochs"]),
                seed=int(p["seed"]),
                l2=float(p["l2"]),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def split_params(self) -> tuple[tuple[float, float, float], int, bool]:
        s = self.values["split"]
        ratios = tuple(float(r) for r in s["ratios"])
        if len(ratios) != 3:
            raise ConfigError("split.ratios must have exactly 3 entries")
        return ratios, int(s["seed"]), bool(s["stratify"])
