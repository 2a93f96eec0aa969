"""Batch translation with a local encoder-decoder model."""

from __future__ import annotations

from pathlib import Path

import torch
from transformers import AutoModelForSeq2SeqLM, AutoTokenizer


def _forced_bos(tokenizer, tgt_lang: str | None):
    """Language forcing for multilingual models (NLLB/mBART-style); None for
    pair-specific models that ignore language codes."""
    if not tgt_lang:
        return None
    mapping = getattr(tokenizer, "lang_code_to_id", None)
    if mapping and tgt_lang in mapping:
        return mapping[tgt_lang]
    if mapping:
        for code, idx in mapping.items():
            if code.startswith(tgt_lang):
                return idx
    return None


def load_model(model_id: str):
    tokenizer = AutoTokenizer.from_pretrained(model_id)
    model = AutoModelForSeq2SeqLM.from_pretrained(model_id)
    model.eval()
    return tokenizer, model


def translate_texts(
    tokenizer,
    model,
    texts: list[str],
    src_lang: str | None = None,
    tgt_lang: str | None = None,
    batch_size: int = 8,
    num_beams: int = 1,
    max_new_tokens: int = 64,
) -> list[str]:
    if src_lang and hasattr(tokenizer, "src_lang"):
        tokenizer.src_lang = src_lang
    forced_bos = _forced_bos(tokenizer, tgt_lang)
    hypotheses: list[str] = []
    for start in range(0, len(texts), batch_size):
        batch = texts[start:start + batch_size]
        inputs = tokenizer(batch, return_tensors="pt", padding=True)
        kwargs = dict(max_new_tokens=max_new_tokens, num_beams=num_beams, do_sample=False)
        if forced_bos is not None:
            kwargs["forced_bos_token_id"] = forced_bos
        with torch.no_grad():
            generated = model.generate(**inputs, **kwargs)
        hypotheses.extend(tokenizer.batch_decode(generated, skip_special_tokens=True))
    return hypotheses


def translate_batch(
    model_id: str,
    src_file: str | Path,
    out_file: str | Path,
    src_lang: str | None = None,
    tgt_lang: str | None = None,
    batch_size: int = 8,
    num_beams: int = 1,
) -> Path:
    """One hypothesis line per source line, order preserved."""
    lines = Path(src_file).read_text(encoding="utf-8").splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    tokenizer, model = load_model(model_id)
    hypotheses = translate_texts(
        tokenizer, model, lines, src_lang, tgt_lang, batch_size, num_beams
    ) if lines else []
    out_file = Path(out_file)
    out_file.write_text("".join(h + "\n" for h in hypotheses), encoding="utf-8")
    return out_file
