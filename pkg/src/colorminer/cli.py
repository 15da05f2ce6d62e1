"""colorminer command line: mine, gen, convert, check, bench.

Exit codes: 0 ok, 1 verification mismatch, 2 I/O or format error, 3 bad argument.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .core import ArityMismatch, ColoredStringError, gen_random, ingest_trace, parse_colored, read_trace_csv
from .harness import BenchPlan, CorpusConfig, check_corpus, format_bench, run_bench, run_engine
from .miner_skip import format_trace

EXIT_OK, EXIT_MISMATCH, EXIT_IO, EXIT_ARG = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARG, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    color: str | None = None
    engine: str = "skip"
    filter: str = "full"
    max_delay: int | None = None
    counts: bool = False
    tokens: bool = False
    debug_trace: bool = False

    def __post_init__(self):
        if self.engine == "fast" and self.filter != "real":
            raise UsageError("--engine fast requires --filter real")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("values must be positive")
    return values


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="colorminer", description="Mine minimally (y,d)-unique substrings of colored strings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    mine = sub.add_parser("mine", help="report minimal patterns for one color")
    mine.add_argument("--input", required=True)
    mine.add_argument("--output")
    mine.add_argument("--color", required=True, help="color token, e.g. y")
    mine.add_argument("--engine", choices=("base", "skip", "fast"), default="skip")
    mine.add_argument("--filter", choices=("full", "real"), default="full")
    mine.add_argument("--max-delay", type=int, help="drop reports with larger delay")
    mine.add_argument("--counts", action="store_true", help="append the occurrence count")
    mine.add_argument("--tokens", action="store_true", help="read and print space-separated tokens")
    mine.add_argument("--debug-trace", action="store_true", help="extraction log on stderr (skip/fast)")

    gen = sub.add_parser("gen", help="write a random colored string")
    gen.add_argument("--n", type=_positive, required=True)
    gen.add_argument("--sigma", type=_positive, default=2)
    gen.add_argument("--gamma", type=_positive, default=2)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output")
    gen.add_argument("--tokens", action="store_true", help="force tokenized output")

    conv = sub.add_parser("convert", help="turn a CSV simulation trace into a colored string")
    conv.add_argument("--input", required=True)
    conv.add_argument("--output")
    conv.add_argument("--mapping", help="mapping report path (default: stderr, or OUTPUT.map.tsv)")
    conv.add_argument("--tokens", action="store_true")

    check = sub.add_parser("check", help="cross-check all engines against the brute-force oracle")
    check.add_argument("--count", type=_positive, default=500)
    check.add_argument("--max-n", type=_positive, default=64)
    check.add_argument("--sigma", type=_int_list, default=(2, 3, 4))
    check.add_argument("--gamma", type=_int_list, default=(2, 3, 4))
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--sabotage", action="store_true", help=argparse.SUPPRESS)

    bench = sub.add_parser("bench", help="time base, skip and fast with the real-type filter")
    bench.add_argument("--n", type=_int_list, default=(1000,))
    bench.add_argument("--sigma", type=_int_list, default=(2, 8))
    bench.add_argument("--gamma", type=_int_list, default=(2, 8))
    bench.add_argument("--reps", type=_positive, default=5)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--output")
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def cmd_mine(cfg: RunConfig) -> int:
    cs = parse_colored(_read(cfg.input), tokenized=cfg.tokens)
    if cfg.color not in cs.color_names:
        raise UsageError(f"unknown color {cfg.color!r}; input colors are {', '.join(cs.color_names)}")
    y = cs.color_id(cfg.color)
    mined = run_engine(cfg.engine, cs, y, cfg.filter == "real", trace=cfg.debug_trace and cfg.engine != "base")
    if cfg.debug_trace and "trace" in mined.stats:
        sys.stderr.write(format_trace(mined.stats["trace"]))
    tokenized = cfg.tokens or not cs.is_compact()
    rows = []
    for entry in mined.entries():
        if cfg.max_delay is not None and entry.delay > cfg.max_delay:
            continue
        toks = cs.tokens(entry.pattern)
        line = f"{entry.delay}\t{(' ' if tokenized else '').join(toks)}"
        if cfg.counts:
            line += f"\t{entry.occurrence_count}"
        rows.append((-entry.delay, toks, line))
    rows.sort(key=lambda r: (r[0], r[1]))
    _write(cfg.output, "".join(r[2] + "\n" for r in rows))
    return EXIT_OK


def cmd_gen(args) -> int:
    cs = gen_random(args.n, args.sigma, args.gamma, args.seed)
    _write(args.output, cs.render(tokenized=True if args.tokens else None))
    return EXIT_OK


def cmd_convert(args) -> int:
    cs, mapping = ingest_trace(read_trace_csv(_read(args.input)))
    _write(args.output, cs.render(tokenized=True if args.tokens else None))
    report = mapping.render()
    if args.mapping:
        _write(args.mapping, report)
    elif args.output:
        _write(args.output + ".map.tsv", report)
    else:
        sys.stderr.write(report)
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = CorpusConfig(count=args.count, max_n=args.max_n, sigmas=args.sigma, gammas=args.gamma, seed=args.seed)
    result = check_corpus(cfg, sabotage=args.sabotage)
    for m in result.mismatches:
        print(m.describe())
    if result.bound_violations:
        print(f"{result.bound_violations} instances exceed the n(n+1) report bound")
    status = "ok" if result.ok else "MISMATCH"
    print(f"{status}: {result.instances} instances, {result.runs} engine runs, {len(result.mismatches)} mismatches")
    return EXIT_OK if result.ok else EXIT_MISMATCH


def cmd_bench(args) -> int:
    plan = BenchPlan(sizes=args.n, sigmas=args.sigma, gammas=args.gamma, reps=args.reps, seed=args.seed)
    rows = run_bench(plan, progress=lambda r: print(f"done n={r.n} sigma={r.sigma} gamma={r.gamma}", file=sys.stderr))
    _write(args.output, format_bench(rows))
    return EXIT_OK if all(r.agree for r in rows) else EXIT_MISMATCH


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "mine":
            cfg = RunConfig(
                command="mine", input=args.input, output=args.output, color=args.color, engine=args.engine,
                filter=args.filter, max_delay=args.max_delay, counts=args.counts, tokens=args.tokens,
                debug_trace=args.debug_trace,
            )
            return cmd_mine(cfg)
        handler = {"gen": cmd_gen, "convert": cmd_convert, "check": cmd_check, "bench": cmd_bench}[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"colorminer: error: {exc}", file=sys.stderr)
        return EXIT_ARG
    except (OSError, ColoredStringError, ArityMismatch) as exc:
        print(f"colorminer: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
