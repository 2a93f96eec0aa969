import json

import pytest
from hypothesis import given, settings, strategies as st

from prosodymt import (
    Language,
    PolarityLexicon,
    Polarity,
    SegmentationDict,
    load_lexicon,
    load_parallel,
    segment_zh,
    tokenize_en,
    tokenize_es,
)
from prosodymt.errors import CorpusFormatError


class TestTokenizeEn:
    def test_paper_sentence(self):
        sent = tokenize_en("I was praised by my teacher.")
        assert sent.surfaces() == ["I", "was", "praised", "by", "my", "teacher", "."]

    def test_empty(self):
        assert tokenize_en("").surfaces() == []

    def test_clitic_split(self):
        assert tokenize_en("It wasn't told.").surfaces() == ["It", "was", "n't", "told", "."]

    def test_more_clitics(self):
        assert tokenize_en("I'm sure you've won.").surfaces() == [
            "I", "'m", "sure", "you", "'ve", "won", ".",
        ]

    def test_leading_punctuation(self):
        assert tokenize_en('"Stop!" he said.').surfaces() == ['"', "Stop", "!", '"', "he", "said", "."]

    def test_case_preserved(self):
        assert tokenize_en("THE Cat").surfaces() == ["THE", "Cat"]

    def test_offsets_are_substrings(self):
        sent = tokenize_en("You were treated as a son in my friend's house.")
        for tok in sent.tokens:
            assert sent.raw[tok.start:tok.end] == tok.surface


class TestTokenizeEs:
    def test_derived_example(self):
        sent = tokenize_es("Fuiste tratado como un hijo.")
        assert sent.surfaces() == ["Fuiste", "tratado", "como", "un", "hijo", "."]

    def test_empty(self):
        assert tokenize_es("").surfaces() == []

    def test_inverted_question(self):
        assert tokenize_es("¿Fue visto?").surfaces() == ["¿", "Fue", "visto", "?"]

    def test_no_clitic_rules(self):
        assert tokenize_es("wasn't").surfaces() == ["wasn't"]


class TestSegmentZh:
    def test_paper_example(self):
        d = SegmentationDict.from_words(["李四", "张三", "打"])
        assert segment_zh("李四被张三打了", d).surfaces() == ["李四", "被", "张三", "打", "了"]

    def test_empty(self):
        d = SegmentationDict.from_words(["被子"])
        assert segment_zh("", d).surfaces() == []

    def test_longest_match_absorbs_bei(self):
        d = SegmentationDict.from_words(["被子"])
        assert segment_zh("他有一床被子", d).surfaces() == ["他", "有", "一", "床", "被子"]

    def test_whitespace_separates(self):
        d = SegmentationDict.from_words(["老师", "表扬"])
        assert segment_zh("我 被 老师 表扬 了", d).surfaces() == ["我", "被", "老师", "表扬", "了"]

    def test_latin_run_kept_whole(self):
        d = SegmentationDict.from_words(["被子"])
        assert segment_zh("他用iPhone12拍照", d).surfaces() == ["他", "用", "iPhone12", "拍", "照"]

    def test_cjk_punctuation_is_tokenized(self):
        d = SegmentationDict.from_words(["被子"])
        assert segment_zh("他走了。", d).surfaces() == ["他", "走", "了", "。"]

    def test_max_word_len(self):
        d = SegmentationDict.from_words(["自行车", "书"])
        assert d.max_word_len == 3


# Round-trip invariant: offsets always reproduce the raw string exactly.
_TEXT = st.text(
    alphabet=st.characters(codec="utf-8", exclude_categories=("Cs",)),
    max_size=60,
)


@given(_TEXT)
@settings(max_examples=200, deadline=None)
def test_roundtrip_en(text):
    assert tokenize_en(text).reconstruct() == text


@given(_TEXT)
@settings(max_examples=100, deadline=None)
def test_roundtrip_es(text):
    assert tokenize_es(text).reconstruct() == text


_ZH_DICT = SegmentationDict.from_words(["被子", "老师", "表扬", "受到", "张三", "李四"])
_ZH_TEXT = st.text(alphabet="被子老师表扬受到张三李四了的我他 abc。，", max_size=40)


@given(_ZH_TEXT)
@settings(max_examples=200, deadline=None)
def test_roundtrip_zh(text):
    assert segment_zh(text, _ZH_DICT).reconstruct() == text


@given(_ZH_TEXT)
@settings(max_examples=200, deadline=None)
def test_segment_zh_idempotent(text):
    first = segment_zh(text, _ZH_DICT).surfaces()
    again = segment_zh(" ".join(first), _ZH_DICT).surfaces()
    assert first == again


class TestLexicon:
    def test_basic(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("misery\tNEG\n", encoding="utf-8")
        lex = load_lexicon(path)
        assert lex.lookup("misery") == (Polarity.NEG, 1.0)

    def test_empty_file_total_lookup(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("", encoding="utf-8")
        lex = load_lexicon(path)
        assert lex.lookup("anything") == (Polarity.NEU, 0.0)

    def test_duplicate_last_wins_with_warning(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("x\tNEG\nx\tPOS\t2.5\n", encoding="utf-8")
        with pytest.warns(UserWarning, match="duplicate"):
            lex = load_lexicon(path)
        assert lex.lookup("x") == (Polarity.POS, 2.5)

    def test_case_insensitive_polarity(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("x\tneg\n", encoding="utf-8")
        assert load_lexicon(path).lookup("x")[0] is Polarity.NEG

    def test_unknown_polarity_reports_line(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("a\tNEG\nb\tBAD\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_lexicon(path)

    def test_comments_skipped(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("# comment\nx\tPOS\n", encoding="utf-8")
        assert load_lexicon(path).lookup("x")[0] is Polarity.POS


def _write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


class TestLoadParallel:
    def test_two_pairs(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(path, [
            {"id": "a", "src": "I was told.", "tgt": "我被告知了", "src_lang": "en", "tgt_lang": "zh"},
            {"id": "b", "src": "He slept.", "tgt": "他睡了", "src_lang": "en", "tgt_lang": "zh"},
        ])
        corpus = load_parallel(path)
        assert len(corpus) == 2
        assert [p.id for p in corpus.pairs] == ["a", "b"]

    def test_missing_tgt_in_parallel_mode(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(path, [
            {"id": "a", "src": "x.", "tgt": "好", "src_lang": "en", "tgt_lang": "zh"},
            {"id": "b", "src": "y.", "src_lang": "en"},
        ])
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_parallel(path)

    def test_monolingual_mode(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(path, [{"id": "a", "src": "Hello there.", "src_lang": "en"}])
        corpus = load_parallel(path, monolingual=True)
        assert corpus.pairs[0].tgt is None
        assert corpus.tgt_token_count == 0

    def test_duplicate_id(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(path, [
            {"id": "a", "src": "x.", "tgt": "好", "src_lang": "en", "tgt_lang": "zh"},
            {"id": "a", "src": "y.", "tgt": "好", "src_lang": "en", "tgt_lang": "zh"},
        ])
        with pytest.raises(CorpusFormatError, match="duplicate"):
            load_parallel(path)

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "src": "x.", "tgt": "好", "src_lang": "en", "tgt_lang": "zh"}\n{oops\n',
                        encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_parallel(path)

    def test_tsv(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("a\tI was told.\t我被告知了\n", encoding="utf-8")
        corpus = load_parallel(path, fmt="tsv", src_lang="en", tgt_lang="zh")
        assert corpus.pairs[0].src.language is Language.EN
        assert corpus.pairs[0].tgt.language is Language.ZH

    def test_token_count_matches_recount(self, tmp_path):
        path = tmp_path / "c.jsonl"
        _write_jsonl(path, [
            {"id": f"p{i}", "src": "I was praised by my teacher.", "tgt": "我被老师表扬了",
             "src_lang": "en", "tgt_lang": "zh"}
            for i in range(9)
        ])
        corpus = load_parallel(path)
        assert corpus.src_token_count == sum(len(p.src) for p in corpus.pairs)
        assert corpus.tgt_token_count == sum(len(p.tgt) for p in corpus.pairs)

    def test_order_preserved(self, tmp_path):
        path = tmp_path / "c.jsonl"
        ids = [f"id{i}" for i in range(20)]
        _write_jsonl(path, [
            {"id": i, "src": "He slept.", "tgt": "他睡了", "src_lang": "en", "tgt_lang": "zh"}
            for i in ids
        ])
        corpus = load_parallel(path)
        assert [p.id for p in corpus.pairs] == ids
