"""Standalone HSF1 writer implementing the published byte layout.

Layout: magic "HSF1" · u32-LE header length · UTF-8 JSON header
{model_name, n_enc_layers, n_dec_layers, hidden_dim, n_items, pooling,
dtype, meta?} · n_items label bytes (0x00/0x01) · little-endian float32
vectors, item-major, enc_1..enc_N then dec_1..dec_M per item.

Kept independent of the toolkit package on purpose: the file format is the
interface between the two.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"HSF1"


def write_hsf1(
    path: str | Path,
    model_name: str,
    n_enc_layers: int,
    n_dec_layers: int,
    hidden_dim: int,
    labels,
    vectors,
    pooling: str = "mean",
    meta: dict | None = None,
) -> Path:
    labels = np.asarray(labels, dtype=np.uint8)
    vectors = np.ascontiguousarray(vectors, dtype="<f4")
    n_items = len(labels)
    expected = (n_items, n_enc_layers + n_dec_layers, hidden_dim)
    if vectors.shape != expected:
        raise ValueError(f"vectors shape {vectors.shape} != {expected}")
    if not np.isin(labels, (0, 1)).all():
        raise ValueError("labels must be 0/1")
    header = {
        "model_name": model_name,
        "n_enc_layers": n_enc_layers,
        "n_dec_layers": n_dec_layers,
        "hidden_dim": hidden_dim,
        "n_items": n_items,
        "pooling": pooling,
        "dtype": "f32",
    }
    if meta:
        header["meta"] = meta
    header_bytes = json.dumps(header, ensure_ascii=False, sort_keys=True).encode("utf-8")
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(header_bytes)))
        fh.write(header_bytes)
        fh.write(labels.tobytes())
        fh.write(vectors.tobytes())
    return path
