"""Command-line interface.

Exit codes: 0 success, 1 config/usage error, 2 data error, 3 remote-service
error. All outputs are UTF-8 and newline-delimited; the resolved
configuration is dumped to stderr as one JSON line on every run.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import urllib.error
import urllib.request
from pathlib import Path

from .concordance import collocates, collocates_tsv, format_kwic, kwic, normalized_frequency
from .config import RunConfig
from .corpus import Language, load_parallel, tokenize
from .dataset import (
    BuilderConfig,
    load_evidence_jsonl,
    select_negative_evidence,
    select_positive_evidence,
    split_dataset,
    export_dataset,
)
from .detect import PassiveKind, detect, detect_notional_hint
from .errors import ConfigError, DataError, RemoteError, ToolkitError
from .hsf import read_hsf
from .metrics import BleuConfig, bei_accuracy, bleu, chrf, score_report
from .probe import emit_sweep, layer_sweep
from .prosody import prosody_profile


class _UsageError(ConfigError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route usage errors through the exit-code contract
        raise _UsageError(message)


def _read_lines(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            return [line.rstrip("\n") for line in fh]
    except FileNotFoundError:
        raise DataError(f"input file not found: {path}") from None


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if text and not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
            if text and not text.endswith("\n"):
                fh.write("\n")


def _match_json(match, sentence) -> dict:
    surfaces = sentence.surfaces()
    return {
        "kind": match.kind.value,
        "marker_index": match.marker_index,
        "marker": surfaces[match.marker_index],
        "verb_index": match.verb_index,
        "verb": surfaces[match.verb_index] if match.verb_index is not None else None,
        "agent_present": match.agent_present,
        "span": list(match.span),
    }


def _load_corpus(args, cfg: RunConfig):
    return load_parallel(
        args.input,
        fmt=getattr(args, "corpus_format", "jsonl"),
        src_lang=getattr(args, "src_lang", None),
        tgt_lang=getattr(args, "tgt_lang", None),
        monolingual=getattr(args, "monolingual", False),
        seg_dict=cfg.seg_dict(),
    )


def _parse_query(args):
    if getattr(args, "kind", None):
        try:
            return PassiveKind(args.kind)
        except ValueError:
            raise _UsageError(f"unknown detector kind {args.kind!r}") from None
    if getattr(args, "query", None):
        return args.query.split()
    raise _UsageError("one of --query or --kind is required")


def _side(args):
    from .corpus import Side

    return Side.SRC if args.side == "src" else Side.TGT


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_detect(args, cfg: RunConfig) -> int:
    try:
        lang = Language(args.lang)
    except ValueError:
        raise _UsageError(f"unknown language {args.lang!r}") from None
    det = cfg.detector_config()
    seg = cfg.seg_dict()
    patients = cfg.patient_nouns()
    out_lines = []
    for raw in _read_lines(args.input):
        if not raw.strip():
            continue
        sentence = tokenize(raw, lang, seg)
        matches = detect(sentence, det)
        record = {
            "text": raw,
            "lang": lang.value,
            "tokens": sentence.surfaces(),
            "matches": [_match_json(m, sentence) for m in matches],
        }
        if args.with_hints and lang is Language.ZH:
            hints = detect_notional_hint(sentence, patients, det)
            record["notional_hints"] = [_match_json(m, sentence) for m in hints]
        out_lines.append(json.dumps(record, ensure_ascii=False))
    _write_text(args.out, "\n".join(out_lines))
    return 0


def cmd_kwic(args, cfg: RunConfig) -> int:
    corpus = _load_corpus(args, cfg)
    lines = kwic(corpus, _side(args), _parse_query(args), args.width, cfg.detector_config())
    if args.output_format == "jsonl":
        payload = "\n".join(
            json.dumps(
                {"left": list(l.left), "node": list(l.node), "right": list(l.right), "source_id": l.source_id},
                ensure_ascii=False,
            )
            for l in lines
        )
    else:
        payload = format_kwic(lines)
    _write_text(args.out, payload)
    return 0


def cmd_collocates(args, cfg: RunConfig) -> int:
    corpus = _load_corpus(args, cfg)
    table = collocates(
        corpus, _side(args), _parse_query(args), (args.left, args.right), cfg.detector_config()
    )
    _write_text(args.out, collocates_tsv(table))
    return 0


def cmd_frequency(args, cfg: RunConfig) -> int:
    corpus = _load_corpus(args, cfg)
    query = _parse_query(args)
    if not isinstance(query, PassiveKind):
        raise _UsageError("frequency requires --kind")
    value = normalized_frequency(corpus, _side(args), query, cfg.detector_config())
    _write_text(args.out, f"{value:.4f}")
    return 0


def cmd_prosody(args, cfg: RunConfig) -> int:
    corpus = _load_corpus(args, cfg)
    lexicon = cfg.lexicon(args.lexicon)
    if args.nodes_file:
        nodes = [line.split() for line in _read_lines(args.nodes_file) if line.strip()]
    else:
        nodes = [_parse_query(args)]
    out_lines = []
    for node in nodes:
        profile = prosody_profile(
            corpus, _side(args), node, lexicon, cfg.window(), cfg.thresholds(), cfg.detector_config()
        )
        out_lines.append(
            json.dumps(
                {
                    "node": profile.node,
                    "n": profile.n_occurrences,
                    "ratios": {
                        "neg": profile.neg_ratio,
                        "pos": profile.pos_ratio,
                        "neu": profile.neu_ratio,
                    },
                    "label": profile.label.value,
                },
                ensure_ascii=False,
            )
        )
    _write_text(args.out, "\n".join(out_lines))
    return 0


def _builder_config(cfg: RunConfig) -> BuilderConfig:
    return BuilderConfig(
        detector=cfg.detector_config(),
        side_policy=cfg.side_policy(),
        window=cfg.window(),
        filter_negative_polarity=bool(cfg.get("builder", "filter_negative_polarity")),
    )


def _id_list(path: str | None) -> list[str]:
    return [l.strip() for l in _read_lines(path) if l.strip()] if path else []


def cmd_build_dataset(args, cfg: RunConfig) -> int:
    corpus = _load_corpus(args, cfg)
    lexicon = cfg.lexicon(args.lexicon)
    bcfg = _builder_config(cfg)
    pos = select_positive_evidence(corpus, lexicon, bcfg, _id_list(args.allow_pos), _id_list(args.deny_pos))
    neg = select_negative_evidence(corpus, lexicon, bcfg, _id_list(args.allow_neg), _id_list(args.deny_neg))
    overlap = {e.pair.id for e in pos} & {e.pair.id for e in neg}
    if overlap:
        raise DataError(f"evidence sets overlap: {sorted(overlap)[:5]}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    from .dataset import _evidence_record

    with open(out / "evidence.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for item in pos + neg:
            fh.write(json.dumps(_evidence_record(item), ensure_ascii=False, sort_keys=True) + "\n")
    # human-review export: one KWIC-style line per candidate
    review = []
    for item in pos + neg:
        src = item.pair.src
        for m in item.src_matches:
            a, b = m.span
            surfaces = src.surfaces()
            review.append(
                f"{item.pair.id}\t{item.evidence.value}\t{item.polarity.value}\t"
                f"{' '.join(surfaces[max(0, a - 4):a])}\t{' '.join(surfaces[a:b + 1])}\t"
                f"{' '.join(surfaces[b + 1:b + 5])}"
            )
    (out / "review_kwic.tsv").write_text("\n".join(review) + ("\n" if review else ""), encoding="utf-8")
    print(f"positive evidence: {len(pos)}", file=sys.stderr)
    print(f"negative evidence: {len(neg)}", file=sys.stderr)
    return 0


def _parse_counts_override(raw: str | None):
    if not raw:
        return None
    override = {}
    try:
        for part in raw.split(";"):
            stratum, counts = part.split(":")
            override[stratum.strip()] = tuple(int(c) for c in counts.split(","))
    except ValueError:
        raise _UsageError(
            "counts override must look like 'pos:357,53,66;neg:318,48,58'"
        ) from None
    return override


def cmd_split(args, cfg: RunConfig) -> int:
    items = load_evidence_jsonl(args.input, cfg.seg_dict())
    ratios, seed, stratify = cfg.split_params()
    split = split_dataset(items, ratios, seed, stratify, _parse_counts_override(args.counts_override))
    export_dataset(split, args.out, _builder_config(cfg))
    sizes = split.sizes()
    print(f"train/valid/test: {sizes[0]}/{sizes[1]}/{sizes[2]}", file=sys.stderr)
    return 0


_METRIC_NAMES = ("bleu", "chrf", "bei")


def cmd_score(args, cfg: RunConfig) -> int:
    metric_names = [m.strip() for m in args.metrics.split(",") if m.strip()]
    if not metric_names:
        raise _UsageError("no metrics requested")
    for name in metric_names:
        if name not in _METRIC_NAMES:
            raise _UsageError(f"unknown metric {name!r} (available: {', '.join(_METRIC_NAMES)})")
    items = load_evidence_jsonl(args.test, cfg.seg_dict())
    hypotheses = _read_lines(args.hyp)
    while hypotheses and hypotheses[-1] == "":
        hypotheses.pop()
    if len(hypotheses) != len(items):
        raise DataError(f"{len(hypotheses)} hypotheses vs {len(items)} test items")
    references = [item.pair.tgt.raw if item.pair.tgt is not None else "" for item in items]

    results: dict[str, float | None] = {}
    m = cfg.values["metrics"]
    if "bleu" in metric_names:
        bleu_cfg = BleuConfig(
            max_ngram=int(m["max_ngram"]),
            smooth_add_k=None if m["smooth_add_k"] in (None, "") else float(m["smooth_add_k"]),
            zh_char_tokenize=bool(m["zh_char_tokenize"]),
        )
        results["BLEU"] = bleu(hypotheses, references, bleu_cfg) / 100.0
    if "chrf" in metric_names:
        label = "chrF2" if int(m["word_order"]) == 0 else f"chrF{int(m['word_order'])}+"
        results[label] = chrf(
            hypotheses, references, float(m["beta"]), int(m["char_order"]), int(m["word_order"])
        ) / 100.0
    if "bei" in metric_names:
        acc = bei_accuracy(items, hypotheses, cfg.detector_config(), cfg.seg_dict())
        results["BEI-pos"] = acc.pos_acc
        results["BEI-neg"] = acc.neg_acc
    for spec in args.external or []:
        name, _, path = spec.partition("=")
        if not path:
            raise _UsageError("external scores must look like name=path")
        if not Path(path).is_file():  # absent scores render as an em dash
            print(f"warning: external score file {path} not found", file=sys.stderr)
            results[name] = None
            continue
        try:
            values = [float(l) for l in _read_lines(path) if l.strip()]
        except ValueError:
            raise DataError(f"external score file {path} must contain one real per line") from None
        results[name] = sum(values) / len(values) if values else None

    text, tsv = score_report([(args.system_name, results)])
    print(text)
    if args.out:
        _write_text(args.out, tsv)
    return 0


def cmd_bei_acc(args, cfg: RunConfig) -> int:
    items = load_evidence_jsonl(args.test, cfg.seg_dict())
    hypotheses = _read_lines(args.hyp)
    while hypotheses and hypotheses[-1] == "":
        hypotheses.pop()
    acc = bei_accuracy(items, hypotheses, cfg.detector_config(), cfg.seg_dict())
    from .metrics import round_half_up_percent

    print(f"positive evidence: {round_half_up_percent(acc.pos_acc)} ({acc.pos_correct}/{acc.pos_total})")
    print(f"negative evidence: {round_half_up_percent(acc.neg_acc)} ({acc.neg_correct}/{acc.neg_total})")
    return 0


def cmd_probe(args, cfg: RunConfig) -> int:
    dataset = read_hsf(args.hsf)
    result = layer_sweep(dataset, cfg.probe_config())
    emit_sweep(result, args.out)
    for row in result.rows:
        print(f"{row.side.value}\t{row.index}\t{row.test_acc:.4f}")
    print(f"enc\tmean\t{result.mean_enc_acc:.4f}")
    print(f"dec\tmean\t{result.mean_dec_acc:.4f}")
    return 0


def cmd_report(args, cfg: RunConfig) -> int:
    runs = []
    for path in args.tsv:
        lines = [l for l in _read_lines(path) if l.strip()]
        if not lines:
            continue
        header = lines[0].split("\t")
        for row in lines[1:]:
            cells = row.split("\t")
            metrics = {}
            for key, cell in zip(header[1:], cells[1:]):
                metrics[key] = None if cell == "—" else float(cell) / 100.0
            runs.append((cells[0], metrics))
    text, tsv = score_report(runs)
    print(text)
    if args.out:
        _write_text(args.out, tsv)
    return 0


def _post_json(url: str, payload: dict, timeout: float, token: str | None) -> dict:
    data = json.dumps(payload, ensure_ascii=False).encode("utf-8")
    headers = {"Content-Type": "application/json"}
    if token:
        headers["Authorization"] = f"Bearer {token}"
    request = urllib.request.Request(url, data=data, headers=headers, method="POST")
    with urllib.request.urlopen(request, timeout=timeout) as response:
        return json.loads(response.read().decode("utf-8"))


def cmd_translate_remote(args, cfg: RunConfig) -> int:
    import os

    lines = _read_lines(args.input)
    while lines and lines[-1] == "":
        lines.pop()
    batch_size = args.batch_size or int(cfg.get("remote", "batch_size"))
    retries = args.retries if args.retries is not None else int(cfg.get("remote", "retries"))
    backoff = args.backoff if args.backoff is not None else float(cfg.get("remote", "backoff_base"))
    token = os.environ.get(str(cfg.get("remote", "token_env")) or "", None)

    translations: list[str] = []
    batches = [lines[i:i + batch_size] for i in range(0, len(lines), batch_size)]
    for batch_index, batch in enumerate(batches):
        payload = {"text": batch, "src": args.src, "tgt": args.tgt}
        last_error = None
        for attempt in range(retries):
            try:
                reply = _post_json(args.endpoint, payload, args.timeout, token)
                got = reply.get("translations")
                if not isinstance(got, list) or len(got) != len(batch):
                    raise RemoteError(
                        f"batch {batch_index}: server returned {len(got) if isinstance(got, list) else 'no'} "
                        f"translations for {len(batch)} inputs"
                    )
                translations.extend(str(t) for t in got)
                last_error = None
                break
            except (urllib.error.URLError, urllib.error.HTTPError, TimeoutError, OSError, json.JSONDecodeError) as exc:
                last_error = exc
                if attempt + 1 < retries:
                    time.sleep(backoff * (2 ** attempt))
        if last_error is not None:
            manifest = {
                "endpoint": args.endpoint,
                "src": args.src,
                "tgt": args.tgt,
                "failed_batch_index": batch_index,
                "completed_lines": len(translations),
                "total_lines": len(lines),
                "error": str(last_error),
            }
            manifest_path = args.manifest or (args.out + ".failed.json")
            with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(manifest, fh, ensure_ascii=False, sort_keys=True, indent=2)
                fh.write("\n")
            if translations:  # keep completed prefix for resume
                _write_text(args.out, "\n".join(translations))
            raise RemoteError(
                f"batch {batch_index} failed after {retries} attempts: {last_error} "
                f"(manifest: {manifest_path})"
            )
    _write_text(args.out, "\n".join(translations))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_corpus_args(p):
    p.add_argument("--input", required=True, help="corpus file (JSONL or TSV)")
    p.add_argument("--corpus-format", default="jsonl", choices=["jsonl", "tsv"])
    p.add_argument("--src-lang", default=None, choices=["en", "zh", "es"])
    p.add_argument("--tgt-lang", default=None, choices=["en", "zh", "es"])
    p.add_argument("--monolingual", action="store_true")
    p.add_argument("--side", default="src", choices=["src", "tgt"])


def _add_query_args(p):
    p.add_argument("--query", help="token sequence to search for")
    p.add_argument("--kind", help="detector kind (be, get, bei, light_verb, ser_estar, notional_hint)")


def build_parser() -> _Parser:
    parser = _Parser(prog="prosodymt", description=__doc__)
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--dump-config", help="also write the resolved config JSON here")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect passive constructions, one JSON object per line")
    p.add_argument("--input", required=True)
    p.add_argument("--lang", required=True, choices=["en", "zh", "es"])
    p.add_argument("--with-hints", action="store_true", help="include ZH notional-passive hints")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("kwic", help="concordance lines for a query or detector kind")
    _add_corpus_args(p)
    _add_query_args(p)
    p.add_argument("--width", type=int, default=4)
    p.add_argument("--output-format", default="text", choices=["text", "jsonl"])
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_kwic)

    p = sub.add_parser("collocates", help="collocate table around a query")
    _add_corpus_args(p)
    _add_query_args(p)
    p.add_argument("--left", type=int, default=4)
    p.add_argument("--right", type=int, default=4)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_collocates)

    p = sub.add_parser("frequency", help="detector matches per 100,000 tokens")
    _add_corpus_args(p)
    _add_query_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_frequency)

    p = sub.add_parser("prosody", help="semantic-prosody profile of a node")
    _add_corpus_args(p)
    _add_query_args(p)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--nodes-file", default=None, help="batch mode: one node per line")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_prosody)

    p = sub.add_parser("build-dataset", help="select positive/negative evidence pairs")
    _add_corpus_args(p)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--allow-pos", default=None)
    p.add_argument("--deny-pos", default=None)
    p.add_argument("--allow-neg", default=None)
    p.add_argument("--deny-neg", default=None)
    p.set_defaults(func=cmd_build_dataset)

    p = sub.add_parser("split", help="split evidence JSONL into train/valid/test")
    p.add_argument("--input", required=True, help="evidence.jsonl from build-dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--ratios", default=None, help="e.g. 0.75,0.1125,0.1375")
    p.add_argument("--stratify", action="store_true", default=None)
    p.add_argument("--counts-override", default=None, help="e.g. pos:357,53,66;neg:318,48,58")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("score", help="score hypotheses against a test JSONL")
    p.add_argument("--test", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--metrics", default="bleu,chrf,bei")
    p.add_argument("--external", action="append", help="name=path: merge external scores (one real per line)")
    p.add_argument("--system-name", default="system")
    p.add_argument("--out", default=None, help="write the TSV report here")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("bei-acc", help="BEI-passive usage accuracy only")
    p.add_argument("--test", required=True)
    p.add_argument("--hyp", required=True)
    p.set_defaults(func=cmd_bei_acc)

    p = sub.add_parser("probe", help="layer-wise probing sweep over an HSF1 file")
    p.add_argument("--hsf", required=True)
    p.add_argument("--out", required=True, help="sweep CSV path")
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--train-frac", type=float, default=None)
    p.add_argument("--l2", type=float, default=None)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("report", help="merge score TSVs into one table")
    p.add_argument("tsv", nargs="+")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("translate-remote", help="translate via the HTTP-JSON contract")
    p.add_argument("--input", required=True)
    p.add_argument("--endpoint", required=True)
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--retries", type=int, default=None)
    p.add_argument("--backoff", type=float, default=None)
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--manifest", default=None, help="failed-batch manifest path")
    p.set_defaults(func=cmd_translate_remote)

    return parser


def _overrides_from_args(args) -> dict[tuple[str, str], object]:
    mapping = {
        "seed": ("split", "seed") if args.command == "split" else ("probe", "seed"),
        "lr": ("probe", "lr"),
        "epochs": ("probe", "epochs"),
        "train_frac": ("probe", "train_frac"),
        "l2": ("probe", "l2"),
    }
    overrides: dict[tuple[str, str], object] = {}
    for attr, key in mapping.items():
        if getattr(args, attr, None) is not None:
            overrides[key] = getattr(args, attr)
    if getattr(args, "ratios", None):
        try:
            overrides[("split", "ratios")] = [float(r) for r in args.ratios.split(",")]
        except ValueError:
            raise _UsageError(f"bad ratios {args.ratios!r}") from None
    if getattr(args, "stratify", None):
        overrides[("split", "stratify")] = True
    return overrides


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig.load(args.config, _overrides_from_args(args))
        invocation = {k: v for k, v in vars(args).items() if k != "func" and v is not None}
        dump = cfg.dump(invocation)
        if args.dump_config:
            Path(args.dump_config).write_text(dump + "\n", encoding="utf-8")
        return args.func(args, cfg)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except RemoteError as exc:
        print(f"remote error: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
