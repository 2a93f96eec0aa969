import json
import threading

import pytest

from prosodymt.cli import main as prosodymt_main
from prosodymt_extractor import make_server, translate_batch

EN_SENTENCES = [
    "i was praised by my teacher",
    "he slept",
    "the cat sat on the mat",
    "the house was built",
    "the song was sung",
    "the story was told",
    "the letter was written yesterday",
    "the room was cleaned this morning",
    "the book was moved",
    "the dog ran",
]
ZH_REFS = [
    "我受到了老师的表扬",
    "他睡了",
    "猫坐在垫子上",
    "房子被敌人摧毁了",
    "歌被唱了",
    "他们告诉了我这个故事",
    "他昨天写完了信",
    "他今天早上打扫了房间",
    "他搬走了书",
    "狗跑了",
]
EVIDENCE = ["neg", "neg", "neg", "pos", "pos", "neg", "neg", "neg", "neg", "neg"]


@pytest.fixture()
def http_endpoint(tiny_model_dir):
    server = make_server(tiny_model_dir, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}/translate"
    server.shutdown()


def _write_test_jsonl(path):
    with open(path, "w", encoding="utf-8") as fh:
        for i, (src, tgt, ev) in enumerate(zip(EN_SENTENCES, ZH_REFS, EVIDENCE)):
            fh.write(json.dumps({
                "id": f"t{i}", "src": src, "tgt": tgt,
                "src_lang": "en", "tgt_lang": "zh",
                "evidence": ev, "polarity": "neu",
            }, ensure_ascii=False) + "\n")


class TestPipelineSmoke:
    def test_translate_then_score(self, http_endpoint, tmp_path, capsys):
        # secondary acceptance: 10 sentences through the HTTP contract,
        # then cmd_score runs to completion with a well-formed report
        src = tmp_path / "src.txt"
        src.write_text("".join(s + "\n" for s in EN_SENTENCES), encoding="utf-8")
        hyp = tmp_path / "hyp.txt"
        code = prosodymt_main([
            "translate-remote", "--input", str(src), "--endpoint", http_endpoint,
            "--src", "en", "--tgt", "zh", "--out", str(hyp), "--batch-size", "4",
        ])
        assert code == 0
        hyp_lines = hyp.read_text(encoding="utf-8").splitlines()
        assert len(hyp_lines) == len(EN_SENTENCES)

        test_jsonl = tmp_path / "test.jsonl"
        _write_test_jsonl(test_jsonl)
        report_tsv = tmp_path / "report.tsv"
        code = prosodymt_main([
            "score", "--test", str(test_jsonl), "--hyp", str(hyp),
            "--metrics", "bleu,chrf,bei", "--out", str(report_tsv),
        ])
        assert code == 0
        lines = report_tsv.read_text(encoding="utf-8").strip().split("\n")
        header = lines[0].split("\t")
        assert header[0] == "system"
        assert {"BLEU", "chrF2", "BEI-pos", "BEI-neg"} <= set(header[1:])
        row = lines[1].split("\t")
        assert len(row) == len(header)
        for cell in row[1:]:
            value = float(cell)
            assert 0.0 <= value <= 100.0
        print("PASS: pipeline smoke (translate via HTTP, line counts equal, report well-formed)")

    def test_translate_batch_file_roundtrip(self, tiny_model_dir, tmp_path):
        src = tmp_path / "src.txt"
        src.write_text("".join(s + "\n" for s in EN_SENTENCES), encoding="utf-8")
        out = translate_batch(tiny_model_dir, src, tmp_path / "hyp.txt")
        assert len(out.read_text(encoding="utf-8").splitlines()) == len(EN_SENTENCES)

    def test_translate_batch_empty_file(self, tiny_model_dir, tmp_path):
        src = tmp_path / "empty.txt"
        src.write_text("", encoding="utf-8")
        out = translate_batch(tiny_model_dir, src, tmp_path / "hyp.txt")
        assert out.read_text(encoding="utf-8") == ""

    def test_server_rejects_bad_payload(self, http_endpoint):
        import urllib.request
        import urllib.error

        request = urllib.request.Request(
            http_endpoint, data=b'{"nope": 1}', headers={"Content-Type": "application/json"}
        )
        with pytest.raises(urllib.error.HTTPError) as info:
            urllib.request.urlopen(request, timeout=10)
        assert info.value.code == 400
