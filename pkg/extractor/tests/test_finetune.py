import json

import pytest
from transformers import AutoModelForSeq2SeqLM

from prosodymt_extractor import finetune
from prosodymt_extractor.finetune import DEFAULT_BATCH_SIZE, DEFAULT_EPOCHS, DEFAULT_LR, NLLB_CLASS_LR

PAIRS = [
    ("the house was built", "房子被敌人摧毁了"),
    ("he slept", "他睡了"),
    ("the story was told", "他们告诉了我这个故事"),
    ("the dog ran", "狗跑了"),
]


def _write_jsonl(path, pairs, evidence="neg"):
    with open(path, "w", encoding="utf-8") as fh:
        for i, (src, tgt) in enumerate(pairs):
            fh.write(json.dumps({
                "id": f"x{i}", "src": src, "tgt": tgt,
                "src_lang": "en", "tgt_lang": "zh",
                "evidence": evidence, "polarity": "neu",
            }, ensure_ascii=False) + "\n")


def test_default_hyperparameters():
    assert DEFAULT_LR == 1e-5
    assert DEFAULT_BATCH_SIZE == 32
    assert DEFAULT_EPOCHS == 6
    assert NLLB_CLASS_LR == 5e-4


def test_zero_epochs_keeps_base_model(tiny_model_dir, tmp_path):
    train = tmp_path / "train.jsonl"
    valid = tmp_path / "valid.jsonl"
    _write_jsonl(train, PAIRS)
    _write_jsonl(valid, PAIRS[:2])
    best, log = finetune(tiny_model_dir, train, valid, tmp_path / "run", epochs=0, batch_size=2)
    base = AutoModelForSeq2SeqLM.from_pretrained(tiny_model_dir)
    tuned = AutoModelForSeq2SeqLM.from_pretrained(best)
    for a, b in zip(base.parameters(), tuned.parameters()):
        assert a.detach().numpy().tobytes() == b.detach().numpy().tobytes()
    entries = [json.loads(l) for l in open(log, encoding="utf-8")]
    assert len(entries) == 1 and entries[0]["epoch"] == 0


@pytest.mark.slow
def test_one_epoch_logs_and_selects_argmax(tiny_model_dir, tmp_path):
    train = tmp_path / "train.jsonl"
    valid = tmp_path / "valid.jsonl"
    _write_jsonl(train, PAIRS)
    _write_jsonl(valid, PAIRS[:2])
    best, log = finetune(tiny_model_dir, train, valid, tmp_path / "run",
                         epochs=1, batch_size=2, lr=1e-4)
    entries = [json.loads(l) for l in open(log, encoding="utf-8")]
    assert len(entries) == 2
    assert entries[1]["step"] == 2  # 4 pairs / batch 2
    assert best.is_dir()
    # best checkpoint = argmax of the logged validation BLEUs (ties keep earlier)
    bleus = [e["valid_bleu"] for e in entries]
    assert max(bleus) == pytest.approx(bleus[0] if bleus[0] >= bleus[1] else bleus[1])
