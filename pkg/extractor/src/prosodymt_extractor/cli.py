"""Extractor CLI: extract hidden states, translate files, serve the HTTP
translation contract, fine-tune on exported evidence datasets."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .extract import ExtractionJob, extract_hidden_states
from .finetune import DEFAULT_BATCH_SIZE, DEFAULT_EPOCHS, DEFAULT_LR, finetune
from .server import make_server
from .translate import translate_batch


def _read_lines(path: str) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    return lines


def cmd_extract(args) -> int:
    sentences = _read_lines(args.input)
    labels = [int(l) for l in _read_lines(args.labels)]
    forced = _read_lines(args.forced_targets) if args.forced_targets else None
    job = ExtractionJob(
        model_id=args.model,
        sentences=sentences,
        labels=labels,
        pooling=args.pooling,
        forced_targets=forced,
    )
    path = extract_hidden_states(job, args.out, batch_size=args.batch_size)
    print(path)
    return 0


def cmd_translate(args) -> int:
    translate_batch(
        args.model, args.input, args.out,
        src_lang=args.src, tgt_lang=args.tgt,
        batch_size=args.batch_size, num_beams=args.beams,
    )
    return 0


def cmd_serve(args) -> int:
    server = make_server(args.model, args.host, args.port,
                         batch_size=args.batch_size, num_beams=args.beams)
    print(f"serving {args.model} on http://{args.host}:{server.server_port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


def cmd_finetune(args) -> int:
    best, log = finetune(
        args.model, args.train, args.valid, args.out,
        lr=args.lr, batch_size=args.batch_size, epochs=args.epochs, seed=args.seed,
    )
    print(best)
    print(log)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prosodymt-extractor", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="write layer-wise hidden states to HSF1")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="source sentences, one per line")
    p.add_argument("--labels", required=True, help="0/1 voice labels, one per line")
    p.add_argument("--forced-targets", default=None, help="reference targets for forced decoding")
    p.add_argument("--pooling", default="mean", choices=["mean", "last", "marker"])
    p.add_argument("--out", required=True)
    p.add_argument("--batch-size", type=int, default=8)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("translate", help="translate a file line by line")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--src", default=None)
    p.add_argument("--tgt", default=None)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--beams", type=int, default=1)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("serve", help="serve the HTTP-JSON translation contract")
    p.add_argument("--model", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8752)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--beams", type=int, default=1)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("finetune", help="fine-tune on exported train/valid JSONL")
    p.add_argument("--model", required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--valid", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lr", type=float, default=DEFAULT_LR)
    p.add_argument("--batch-size", type=int, default=DEFAULT_BATCH_SIZE)
    p.add_argument("--epochs", type=int, default=DEFAULT_EPOCHS)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_finetune)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
