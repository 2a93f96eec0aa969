"""Corpus-linguistics and MT-evaluation toolkit: passive detection across
English/Chinese/Spanish, semantic-prosody profiling, evidence-dataset
construction, BLEU/chrF/BEI-accuracy scoring, and layer-wise linear probing.
"""

from .corpus import (
    Corpus,
    Language,
    ParallelPair,
    Polarity,
    PolarityLexicon,
    SegmentationDict,
    Side,
    Token,
    TokenizedSentence,
    load_lexicon,
    load_parallel,
    segment_zh,
    tokenize,
    tokenize_en,
    tokenize_es,
)
from .detect import (
    DetectorConfig,
    PassiveKind,
    PassiveMatch,
    Voice,
    classify_voice_zh,
    detect,
    detect_en,
    detect_es,
    detect_notional_hint,
    detect_zh,
)
from .concordance import CollocateTable, ConcordanceLine, collocates, kwic, normalized_frequency
from .prosody import (
    ProsodyLabel,
    ProsodyProfile,
    ProsodyThresholds,
    SidePolicy,
    classify_prosody,
    pair_polarity,
    polarity_of_window,
    prosody_profile,
)
from .dataset import (
    BuilderConfig,
    DatasetSplit,
    Evidence,
    EvidencePair,
    build_evidence,
    export_dataset,
    select_negative_evidence,
    select_positive_evidence,
    split_dataset,
)
from .metrics import BeiAccuracy, BleuConfig, bei_accuracy, bleu, chrf, score_report
from .hsf import HsfHeader, Pooling, ProbeDataset, read_hsf, synth_hsf, write_hsf
from .probe import (
    LayerId,
    LayerSide,
    LayerSweepResult,
    LinearProbe,
    ProbeConfig,
    Split,
    emit_sweep,
    eval_probe,
    layer_sweep,
    train_probe,
)

__version__ = "0.1.0"
