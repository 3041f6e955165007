"""Command-line entry point.

Subcommands: ``evaluate`` (corpus report), ``reward-serve`` (streaming
reward service), ``export-scorer-corpus`` (pair-scorer training tuples),
``score-pair`` (one-pair debugging). Exit codes: 0 success, 1 usage
error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional, Sequence

from . import corpus, service, similarity
from .exact import MissingDocument
from .textnorm import EmptyPhrase, normalize_phrase

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; the toolkit reserves 2 for data errors
    def error(self, message):
        raise UsageError(message)


def _default_jobs() -> int:
    env = os.environ.get("KGEVAL_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kgeval", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evaluate", help="score a JSONL corpus and print a report")
    ev.add_argument("--input", required=True, help="references JSONL (or combined file)")
    ev.add_argument("--predictions", help="separate predictions JSONL joined on id")
    ev.add_argument(
        "--metrics",
        default="fg,f1@5,f1@m",
        help="comma list from: fg, f1@5, f1@m, token",
    )
    ev.add_argument("--split", default="all", choices=corpus.SPLITS)
    ev.add_argument("--no-stem", action="store_true", help="compare surfaces, not stems")
    ev.add_argument("--no-dedup", action="store_true", help="keep duplicate predictions for exact metrics")
    ev.add_argument("--no-histograms", action="store_true")
    ev.add_argument("--per-instance", action="store_true", help="include per-instance rows")
    ev.add_argument("--jobs", type=int, default=None, help="worker processes (env KGEVAL_JOBS)")
    ev.add_argument("--out", help="write the JSON report here instead of stdout")
    ev.add_argument("--verbose", action="store_true", help="timing info on stderr")

    rs = sub.add_parser("reward-serve", help="serve rewards over stdio or TCP")
    rs.add_argument("--transport", default="stdio", choices=("stdio", "tcp"))
    rs.add_argument("--listen", default="127.0.0.1:7469", help="host:port for --transport tcp")
    rs.add_argument("--scorer-cmd", help="external pair-scorer command line (enables fb)")
    rs.add_argument("--no-stem", action="store_true")

    ex = sub.add_parser("export-scorer-corpus", help="emit (prediction, target, score) tuples")
    ex.add_argument("--input", required=True)
    ex.add_argument("--predictions")
    ex.add_argument("--low", type=float, default=0.0, help="drop tuples with score below this")
    ex.add_argument("--high", type=float, default=1.0, help="drop tuples with score above this")
    ex.add_argument("--format", default="jsonl", choices=("jsonl", "tsv"))
    ex.add_argument("--no-stem", action="store_true")
    ex.add_argument("--out", help="write here instead of stdout")

    sp = sub.add_parser("score-pair", help="similarity components for one pair")
    sp.add_argument("prediction")
    sp.add_argument("target")
    sp.add_argument("--no-stem", action="store_true")

    return parser


def _cmd_evaluate(args) -> int:
    t0 = time.perf_counter()
    instances = corpus.load_corpus(
        args.input, predictions_path=args.predictions, stem=not args.no_stem
    )
    config = corpus.EvalConfig(
        metrics=tuple(m.strip() for m in args.metrics.split(",") if m.strip()),
        splits=(args.split,),
        dedup=not args.no_dedup,
        histograms=not args.no_histograms,
        per_instance=args.per_instance,
        jobs=args.jobs if args.jobs is not None else _default_jobs(),
    )
    t1 = time.perf_counter()
    report = corpus.evaluate_corpus(instances, config)
    t2 = time.perf_counter()
    payload = report.to_json() + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    if args.verbose:
        print(
            f"loaded {len(instances)} instances in {t1 - t0:.3f}s; "
            f"evaluated in {t2 - t1:.3f}s with {config.jobs} job(s)",
            file=sys.stderr,
        )
    return EXIT_OK


def _cmd_export(args) -> int:
    instances = corpus.load_corpus(
        args.input, predictions_path=args.predictions, stem=not args.no_stem
    )
    tuples = corpus.export_scorer_corpus(instances, low=args.low, high=args.high)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for t in tuples:
            if args.format == "jsonl":
                out.write(json.dumps({"p": t.prediction, "y": t.target, "score": t.score},
                                     ensure_ascii=False) + "\n")
            else:
                out.write(f"{t.prediction}\t{t.target}\t{t.score}\n")
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _cmd_score_pair(args) -> int:
    stem = not args.no_stem
    try:
        p = normalize_phrase(args.prediction, stem=stem)
        y = normalize_phrase(args.target, stem=stem)
    except EmptyPhrase as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    ps = similarity.pair_score(p, y)
    print(f"ed={ps.ed:.6f} token_f1={ps.token_f1:.6f} combined={ps.combined:.6f}")
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "evaluate":
            return _cmd_evaluate(args)
        if args.command == "reward-serve":
            service.serve(
                transport=args.transport,
                listen=args.listen,
                scorer_cmd=args.scorer_cmd,
                stem=not args.no_stem,
            )
            return EXIT_OK
        if args.command == "export-scorer-corpus":
            return _cmd_export(args)
        if args.command == "score-pair":
            return _cmd_score_pair(args)
        raise AssertionError(f"unhandled command {args.command!r}")
    except (corpus.ParseError, corpus.JoinError, MissingDocument) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
