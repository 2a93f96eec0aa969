"""HSF1: binary container for per-item, per-layer pooled hidden-state vectors.

Byte layout (bit-exact):

    magic "HSF1" (4 bytes)
    header length, 32-bit little-endian unsigned
    UTF-8 JSON header {model_name, n_enc_layers, n_dec_layers, hidden_dim,
                       n_items, pooling, dtype, meta?}
    n_items label bytes (0x00 / 0x01)
    vectors as little-endian float32, item-major, layer order
    enc_1..enc_N then dec_1..dec_M, contiguous per layer
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import DataError

MAGIC = b"HSF1"


class HsfFormatError(DataError):
    """Base class for malformed HSF1 files."""


class BadMagicError(HsfFormatError):
    pass


class TruncatedPayloadError(HsfFormatError):
    pass


class SizeMismatchError(HsfFormatError):
    pass


class HeaderError(HsfFormatError):
    pass


class Pooling(Enum):
    MEAN = "mean"
    LAST = "last"
    MARKER = "marker"


@dataclass(frozen=True)
class HsfHeader:
    model_name: str
    n_enc_layers: int
    n_dec_layers: int
    hidden_dim: int
    n_items: int
    pooling: Pooling = Pooling.MEAN
    dtype: str = "f32"
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("n_enc_layers", "n_dec_layers", "hidden_dim", "n_items"):
            if getattr(self, name) <= 0:
                raise HeaderError(f"{name} must be > 0")
        if self.dtype != "f32":
            raise HeaderError(f"unsupported dtype {self.dtype!r}")

    @property
    def n_layers(self) -> int:
        return self.n_enc_layers + self.n_dec_layers

    def to_json(self) -> str:
        payload = {
            "model_name": self.model_name,
            "n_enc_layers": self.n_enc_layers,
            "n_dec_layers": self.n_dec_layers,
            "hidden_dim": self.hidden_dim,
            "n_items": self.n_items,
            "pooling": self.pooling.value,
            "dtype": self.dtype,
        }
        if self.meta:
            payload["meta"] = dict(self.meta)
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)


_HEADER_KEYS = {"model_name", "n_enc_layers", "n_dec_layers", "hidden_dim", "n_items", "pooling", "dtype", "meta"}


def _header_from_json(raw: bytes) -> HsfHeader:
    try:
        payload = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise HeaderError(f"header is not valid UTF-8 JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise HeaderError("header is not a JSON object")
    unknown = set(payload) - _HEADER_KEYS
    if unknown:
        raise HeaderError(f"unknown header fields: {sorted(unknown)}")
    try:
        return HsfHeader(
            model_name=str(payload["model_name"]),
            n_enc_layers=int(payload["n_enc_layers"]),
            n_dec_layers=int(payload["n_dec_layers"]),
            hidden_dim=int(payload["hidden_dim"]),
            n_items=int(payload["n_items"]),
            pooling=Pooling(payload["pooling"]),
            dtype=str(payload.get("dtype", "f32")),
            meta=payload.get("meta", {}),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise HeaderError(f"bad header field: {exc}") from None


@dataclass(frozen=True)
class ProbeDataset:
    header: HsfHeader
    labels: np.ndarray  # (n_items,) uint8 in {0, 1}
    vectors: np.ndarray  # (n_items, n_layers, hidden_dim) float32

    def __post_init__(self):
        h = self.header
        if self.labels.shape != (h.n_items,):
            raise DataError(f"labels shape {self.labels.shape} does not match n_items {h.n_items}")
        if not np.isin(self.labels, (0, 1)).all():
            raise DataError("labels must be 0 or 1")
        expected = (h.n_items, h.n_layers, h.hidden_dim)
        if self.vectors.shape != expected:
            raise DataError(f"vectors shape {self.vectors.shape} != {expected}")
        if self.vectors.dtype != np.float32:
            raise DataError(f"vectors must be float32, got {self.vectors.dtype}")


def write_hsf(dataset: ProbeDataset, path: str | Path) -> None:
    header_bytes = dataset.header.to_json().encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(header_bytes)))
        fh.write(header_bytes)
        fh.write(dataset.labels.astype(np.uint8).tobytes())
        fh.write(np.ascontiguousarray(dataset.vectors, dtype="<f4").tobytes())


def read_hsf(path: str | Path) -> ProbeDataset:
    blob = Path(path).read_bytes()
    if len(blob) < 4 or blob[:4] != MAGIC:
        raise BadMagicError(f"{path}: not an HSF1 file (bad magic)")
    if len(blob) < 8:
        raise TruncatedPayloadError(f"{path}: truncated before header length")
    (header_len,) = struct.unpack("<I", blob[4:8])
    if len(blob) < 8 + header_len:
        raise TruncatedPayloadError(f"{path}: truncated header")
    header = _header_from_json(blob[8:8 + header_len])
    expected_payload = header.n_items + header.n_items * header.n_layers * header.hidden_dim * 4
    actual_payload = len(blob) - 8 - header_len
    if actual_payload < expected_payload:
        raise TruncatedPayloadError(
            f"{path}: truncated payload ({actual_payload} bytes, expected {expected_payload})"
        )
    if actual_payload > expected_payload:
        raise SizeMismatchError(
            f"{path}: payload size mismatch ({actual_payload} bytes, expected {expected_payload})"
        )
    off = 8 + header_len
    labels = np.frombuffer(blob, dtype=np.uint8, count=header.n_items, offset=off).copy()
    if not np.isin(labels, (0, 1)).all():
        raise HeaderError(f"{path}: labels must be 0x00/0x01 bytes")
    off += header.n_items
    vectors = (
        np.frombuffer(blob, dtype="<f4", count=header.n_items * header.n_layers * header.hidden_dim, offset=off)
        .reshape(header.n_items, header.n_layers, header.hidden_dim)
        .astype(np.float32, copy=True)
    )
    return ProbeDataset(header, labels, vectors)


def synth_hsf(
    n_items: int,
    layers: int | tuple[int, int],
    dim: int,
    separability: float,
    seed: int,
    pooling: Pooling = Pooling.MEAN,
) -> ProbeDataset:
    """Synthetic dataset: class means at ±(separability/2)·u for a seeded unit
    vector u, unit-variance spherical noise, balanced labels."""
    if separability < 0:
        raise DataError("separability must be >= 0")
    if isinstance(layers, tuple):
        n_enc, n_dec = layers
    else:
        n_enc = (layers + 1) // 2
        n_dec = layers - n_enc
    header = HsfHeader(
        model_name=f"synthetic(sep={separability},seed={seed})",
        n_enc_layers=n_enc,
        n_dec_layers=n_dec,
        hidden_dim=dim,
        n_items=n_items,
        pooling=pooling,
    )
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(dim)
    u /= np.linalg.norm(u)
    labels = np.zeros(n_items, dtype=np.uint8)
    labels[(n_items + 1) // 2:] = 1
    signs = labels.astype(np.float64) * 2 - 1
    noise = rng.standard_normal((n_items, n_enc + n_dec, dim))
    vectors = (noise + signs[:, None, None] * (separability / 2) * u).astype(np.float32)
    return ProbeDataset(header, labels, vectors)
