"""Layer-wise linear probing over HSF1 hidden states.

Each layer gets a logistic-regression probe trained by full-batch gradient
descent from a shared seeded initialization (per-dimension stream: probes of
equal width start bitwise-identical, and the first k weights coincide across
widths). The train/test split depends only on (n_items, seed, train_frac),
never on vector content, and is reused across layers for comparability.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import DataError
from .hsf import ProbeDataset

# Fixed global seed for the shared probe initialization ("same set of weights").
INIT_WEIGHT_SEED = 727
_INIT_SCALE = 0.01


class LayerSide(Enum):
    ENC = "enc"
    DEC = "dec"


class Split(Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class LayerId:
    side: LayerSide
    index: int  # 1-based transformer-block output

    def flat_index(self, n_enc: int, n_dec: int) -> int:
        n = n_enc if self.side is LayerSide.ENC else n_dec
        if not (1 <= self.index <= n):
            raise DataError(f"layer {self.side.value}{self.index} out of range (1..{n})")
        return self.index - 1 if self.side is LayerSide.ENC else n_enc + self.index - 1


@dataclass(frozen=True)
class ProbeConfig:
    train_frac: float = 0.8
    lr: float = 0.1
    epochs: int = 500
    seed: int = 0
    l2: float = 0.0

    def __post_init__(self):
        if not (0 < self.train_frac < 1):
            raise ValueError("train_frac must be in (0, 1)")
        if self.epochs < 0 or self.lr <= 0 or self.l2 < 0:
            raise ValueError("bad probe hyperparameters")


@dataclass
class LinearProbe:
    weights: np.ndarray
    bias: float
    layer_id: LayerId


@dataclass(frozen=True)
class LayerResult:
    side: LayerSide
    index: int
    train_acc: float
    test_acc: float


@dataclass(frozen=True)
class LayerSweepResult:
    rows: tuple[LayerResult, ...]
    mean_enc_acc: float
    mean_dec_acc: float


def split_indices(n_items: int, cfg: ProbeConfig) -> tuple[np.ndarray, np.ndarray]:
    """Seeded permutation split; depends only on (n_items, seed, train_frac)."""
    perm = np.random.default_rng(cfg.seed).permutation(n_items)
    n_train = int(n_items * cfg.train_frac + 1e-9)
    return perm[:n_train], perm[n_train:]


def initial_weights(dim: int) -> np.ndarray:
    """Shared seeded initialization; the first k values coincide for all dims >= k."""
    return np.random.default_rng(INIT_WEIGHT_SEED).standard_normal(dim) * _INIT_SCALE


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def logistic_loss(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float = 0.0) -> float:
    """Mean binary cross-entropy plus (l2/2)·||w||², numerically stable."""
    z = X @ w + b
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    return loss + 0.5 * l2 * float(w @ w)


def logistic_grad(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float = 0.0):
    residual = _sigmoid(X @ w + b) - y
    grad_w = X.T @ residual / len(y) + l2 * w
    grad_b = float(np.mean(residual))
    return grad_w, grad_b


def _layer_matrix(dataset: ProbeDataset, layer_id: LayerId) -> np.ndarray:
    flat = layer_id.flat_index(dataset.header.n_enc_layers, dataset.header.n_dec_layers)
    return dataset.vectors[:, flat, :].astype(np.float64)


def train_probe(dataset: ProbeDataset, layer_id: LayerId, cfg: ProbeConfig | None = None) -> LinearProbe:
    """Full-batch gradient descent on the seeded 80% training split."""
    cfg = cfg or ProbeConfig()
    X_all = _layer_matrix(dataset, layer_id)
    y_all = dataset.labels.astype(np.float64)
    train_idx, _ = split_indices(dataset.header.n_items, cfg)
    X, y = X_all[train_idx], y_all[train_idx]
    if len(np.unique(y)) < 2:
        raise DataError("single-class training split; cannot train a probe")
    w = initial_weights(dataset.header.hidden_dim)
    b = 0.0
    for _ in range(cfg.epochs):
        grad_w, grad_b = logistic_grad(w, b, X, y, cfg.l2)
        w = w - cfg.lr * grad_w
        b = b - cfg.lr * grad_b
    return LinearProbe(w, b, layer_id)


def eval_probe(
    probe: LinearProbe,
    dataset: ProbeDataset,
    layer_id: LayerId,
    split: Split = Split.TEST,
    cfg: ProbeConfig | None = None,
) -> float:
    """Fraction of correct sign(w·x + b) predictions on the chosen split."""
    cfg = cfg or ProbeConfig()
    if probe.weights.shape != (dataset.header.hidden_dim,):
        raise DataError(
            f"probe dimension {probe.weights.shape[0]} != dataset dimension {dataset.header.hidden_dim}"
        )
    X_all = _layer_matrix(dataset, layer_id)
    train_idx, test_idx = split_indices(dataset.header.n_items, cfg)
    idx = train_idx if split is Split.TRAIN else test_idx
    X = X_all[idx]
    y = dataset.labels[idx]
    predictions = (X @ probe.weights + probe.bias > 0).astype(np.uint8)
    return float(np.mean(predictions == y))


def layer_sweep(dataset: ProbeDataset, cfg: ProbeConfig | None = None) -> LayerSweepResult:
    """Train/eval one probe per layer, encoder layers first, shared split."""
    cfg = cfg or ProbeConfig()
    rows = []
    h = dataset.header
    for side, count in ((LayerSide.ENC, h.n_enc_layers), (LayerSide.DEC, h.n_dec_layers)):
        for index in range(1, count + 1):
            layer_id = LayerId(side, index)
            probe = train_probe(dataset, layer_id, cfg)
            train_acc = eval_probe(probe, dataset, layer_id, Split.TRAIN, cfg)
            test_acc = eval_probe(probe, dataset, layer_id, Split.TEST, cfg)
            rows.append(LayerResult(side, index, train_acc, test_acc))
    enc = [r.test_acc for r in rows if r.side is LayerSide.ENC]
    dec = [r.test_acc for r in rows if r.side is LayerSide.DEC]
    return LayerSweepResult(
        tuple(rows),
        sum(enc) / len(enc) if enc else 0.0,
        sum(dec) / len(dec) if dec else 0.0,
    )


def emit_sweep(result: LayerSweepResult, path: str | Path) -> None:
    """CSV columns side,layer,test_acc plus appended mean rows; deterministic.
    An empty result yields the header only."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["side", "layer", "test_acc"])
        if not result.rows:
            return
        for row in result.rows:
            writer.writerow([row.side.value, row.index, f"{row.test_acc:.6f}"])
        writer.writerow(["enc", "mean", f"{result.mean_enc_acc:.6f}"])
        writer.writerow(["dec", "mean", f"{result.mean_dec_acc:.6f}"])
