"""Layer-wise hidden-state extraction from encoder-decoder MT models.

Encoder states come from the source sentences; decoder states from forced
decoding of the aligned reference targets when given (deterministic and
label-consistent), otherwise from a greedy decode. Embedding outputs are
excluded: layer i is the output of transformer block i.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import torch
from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

from .hsf_writer import write_hsf1

POOLINGS = ("mean", "last", "marker")


@dataclass
class ExtractionJob:
    model_id: str
    sentences: Sequence[str]
    labels: Sequence[int]
    pooling: str = "mean"
    forced_targets: Sequence[str] | None = None
    marker_positions: Sequence[int] | None = None  # source-side model-token indices
    tgt_marker_positions: Sequence[int] | None = None

    def __post_init__(self):
        if len(self.labels) != len(self.sentences):
            raise ValueError(f"{len(self.labels)} labels for {len(self.sentences)} sentences")
        if self.forced_targets is not None and len(self.forced_targets) != len(self.sentences):
            raise ValueError("forced_targets must align 1:1 with sentences")
        if self.pooling not in POOLINGS:
            raise ValueError(f"unknown pooling {self.pooling!r}")
        if self.pooling == "marker" and self.marker_positions is None:
            raise ValueError("marker pooling needs marker_positions")


def _load(model_id: str):
    tokenizer = AutoTokenizer.from_pretrained(model_id)
    model = AutoModelForSeq2SeqLM.from_pretrained(model_id)
    model.eval()
    if not model.config.is_encoder_decoder:
        raise ValueError(f"{model_id} is not an encoder-decoder model")
    return tokenizer, model


def _model_dims(config) -> tuple[int, int, int]:
    n_enc = getattr(config, "encoder_layers", None) or config.num_hidden_layers
    n_dec = getattr(config, "decoder_layers", None) or config.num_hidden_layers
    dim = getattr(config, "d_model", None) or config.hidden_size
    return int(n_enc), int(n_dec), int(dim)


def _pool(states: torch.Tensor, mask: torch.Tensor, pooling: str, positions=None) -> torch.Tensor:
    """(batch, seq, dim) -> (batch, dim) under an attention mask."""
    if pooling == "mean":
        weights = mask.unsqueeze(-1).to(states.dtype)
        denom = weights.sum(dim=1).clamp(min=1.0)
        return (states * weights).sum(dim=1) / denom
    if pooling == "last":
        lengths = mask.sum(dim=1).clamp(min=1) - 1
        return states[torch.arange(states.shape[0]), lengths]
    idx = torch.as_tensor(positions, dtype=torch.long).clamp(0, states.shape[1] - 1)
    return states[torch.arange(states.shape[0]), idx]


def extract_hidden_states(job: ExtractionJob, out_path: str | Path, batch_size: int = 8) -> Path:
    """Run the model over the job and write a validated HSF1 file."""
    tokenizer, model = _load(job.model_id)
    n_enc, n_dec, dim = _model_dims(model.config)
    n_items = len(job.sentences)
    vectors = np.zeros((n_items, n_enc + n_dec, dim), dtype=np.float32)
    decode_mode = "forced" if job.forced_targets is not None else "greedy"

    start = 0
    while start < n_items:
        size = batch_size
        while True:
            try:
                _extract_batch(job, tokenizer, model, vectors, start, size, n_enc)
                break
            except RuntimeError as exc:  # OOM backoff, then give up
                if "out of memory" not in str(exc).lower() or size <= 1:
                    raise
                size = max(1, size // 2)
                warnings.warn(f"extraction batch OOM; retrying with batch size {size}")
        start += size

    return write_hsf1(
        out_path,
        model_name=job.model_id,
        n_enc_layers=n_enc,
        n_dec_layers=n_dec,
        hidden_dim=dim,
        labels=job.labels,
        vectors=vectors,
        pooling=job.pooling,
        meta={"decode": decode_mode},
    )


def _extract_batch(job, tokenizer, model, vectors, start, size, n_enc):
    batch = list(job.sentences[start:start + size])
    enc_inputs = tokenizer(batch, return_tensors="pt", padding=True)
    pad = model.config.pad_token_id
    if job.forced_targets is not None:
        targets = list(job.forced_targets[start:start + size])
        dec_ids, dec_mask = _forced_decoder_inputs(tokenizer, model, targets)
    else:
        with torch.no_grad():
            generated = model.generate(
                **enc_inputs, max_new_tokens=48, num_beams=1, do_sample=False
            )
        dec_ids = generated
        dec_mask = (generated != pad).long()
        dec_mask[:, 0] = 1  # the start token may equal pad

    with torch.no_grad():
        out = model(
            input_ids=enc_inputs["input_ids"],
            attention_mask=enc_inputs["attention_mask"],
            decoder_input_ids=dec_ids,
            output_hidden_states=True,
        )

    enc_mask = enc_inputs["attention_mask"]
    enc_positions = dec_positions = None
    if job.pooling == "marker":
        enc_positions = list(job.marker_positions[start:start + size])
        if job.tgt_marker_positions is not None:
            dec_positions = list(job.tgt_marker_positions[start:start + size])
    for layer, states in enumerate(out.encoder_hidden_states[1:]):  # skip embeddings
        vectors[start:start + size, layer, :] = _pool(
            states, enc_mask, job.pooling, enc_positions
        ).numpy()
    dec_pooling = job.pooling
    if job.pooling == "marker" and dec_positions is None:
        dec_pooling = "mean"  # no target marker positions given
    for layer, states in enumerate(out.decoder_hidden_states[1:]):
        vectors[start:start + size, n_enc + layer, :] = _pool(
            states, dec_mask, dec_pooling, dec_positions
        ).numpy()


def _forced_decoder_inputs(tokenizer, model, targets):
    labels = tokenizer(targets, return_tensors="pt", padding=True)["input_ids"]
    pad = model.config.pad_token_id
    start = model.config.decoder_start_token_id
    if start is None:
        start = pad
    shifted = torch.full_like(labels, pad)
    shifted[:, 0] = start
    shifted[:, 1:] = labels[:, :-1]
    return shifted, (labels != pad).long()
