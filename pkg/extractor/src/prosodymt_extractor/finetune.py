"""Best-effort fine-tuning on evidence datasets exported by the toolkit.

Defaults follow the 6+6 setup (lr 1e-5, batches of 32, 6 epochs, best
validation BLEU kept); 12+12 NLLB-class models want lr 5e-4. Validation
BLEU is computed by the installed `prosodymt` CLI so the two packages only
meet at the file/CLI interface.
"""

from __future__ import annotations

import json
import random
import subprocess
import sys
import tempfile
import warnings
from pathlib import Path

import torch
from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

DEFAULT_LR = 1e-5
DEFAULT_BATCH_SIZE = 32
DEFAULT_EPOCHS = 6
NLLB_CLASS_LR = 5e-4  # reference value for the 12+12 multilingual models


def _load_records(path: str | Path) -> list[tuple[str, str]]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                records.append((rec["src"], rec["tgt"]))
    return records


def _validation_bleu(valid_jsonl: Path, hypotheses: list[str]) -> float:
    """Score hypotheses against the validation references via the toolkit CLI."""
    with tempfile.TemporaryDirectory() as tmp:
        hyp_path = Path(tmp) / "hyp.txt"
        hyp_path.write_text("".join(h + "\n" for h in hypotheses), encoding="utf-8")
        tsv_path = Path(tmp) / "score.tsv"
        subprocess.run(
            [sys.executable, "-m", "prosodymt.cli", "score",
             "--test", str(valid_jsonl), "--hyp", str(hyp_path),
             "--metrics", "bleu", "--out", str(tsv_path)],
            check=True, capture_output=True,
        )
        lines = tsv_path.read_text(encoding="utf-8").strip().split("\n")
        header, row = lines[0].split("\t"), lines[1].split("\t")
        return float(row[header.index("BLEU")])


def finetune(
    model_id: str,
    train_jsonl: str | Path,
    valid_jsonl: str | Path,
    out_dir: str | Path,
    lr: float = DEFAULT_LR,
    batch_size: int = DEFAULT_BATCH_SIZE,
    epochs: int = DEFAULT_EPOCHS,
    seed: int = 0,
    max_length: int = 64,
) -> tuple[Path, Path]:
    """Returns (best checkpoint dir, metric log path)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    best_dir = out_dir / "best"
    log_path = out_dir / "metrics.jsonl"

    if not torch.cuda.is_available():
        warnings.warn("no GPU available; fine-tuning on CPU")
    device = torch.device("cuda" if torch.cuda.is_available() else "cpu")

    tokenizer = AutoTokenizer.from_pretrained(model_id)
    model = AutoModelForSeq2SeqLM.from_pretrained(model_id).to(device)

    train = _load_records(train_jsonl)
    valid = _load_records(valid_jsonl)
    valid_src = [src for src, _tgt in valid]

    from .translate import translate_texts

    def evaluate() -> float:
        model.eval()
        hyps = translate_texts(tokenizer, model, valid_src, batch_size=batch_size)
        return _validation_bleu(Path(valid_jsonl), hyps)

    torch.manual_seed(seed)
    rng = random.Random(seed)
    optimizer = torch.optim.AdamW(model.parameters(), lr=lr)
    pad = model.config.pad_token_id

    log_entries = []
    step = 0
    baseline = evaluate()
    log_entries.append({"epoch": 0, "step": 0, "valid_bleu": baseline})
    best_bleu = baseline
    model.save_pretrained(best_dir)
    tokenizer.save_pretrained(best_dir)

    for epoch in range(1, epochs + 1):
        model.train()
        order = list(range(len(train)))
        rng.shuffle(order)
        for start in range(0, len(order), batch_size):
            batch = [train[i] for i in order[start:start + batch_size]]
            sources = [s for s, _ in batch]
            targets = [t for _, t in batch]
            inputs = tokenizer(sources, return_tensors="pt", padding=True,
                               truncation=True, max_length=max_length).to(device)
            labels = tokenizer(targets, return_tensors="pt", padding=True,
                               truncation=True, max_length=max_length)["input_ids"].to(device)
            labels = labels.masked_fill(labels == pad, -100)
            loss = model(**inputs, labels=labels).loss
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            step += 1
        bleu = evaluate()
        log_entries.append({"epoch": epoch, "step": step, "valid_bleu": bleu})
        if bleu > best_bleu:
            best_bleu = bleu
            model.save_pretrained(best_dir)
            tokenizer.save_pretrained(best_dir)

    with open(log_path, "w", encoding="utf-8", newline="\n") as fh:
        for entry in log_entries:
            fh.write(json.dumps(entry) + "\n")
    return best_dir, log_path
