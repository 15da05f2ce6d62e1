"""Time the three engines over a grid of random colored strings and write a TSV table.

    python3 scripts/run_benchmark.py                      # default grid
    python3 scripts/run_benchmark.py --sizes 1000,10000 --reps 3 --output results/bench.tsv
"""
import argparse
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from colorminer.harness import BenchPlan, format_bench, run_bench


@dataclass
class ExperimentConfig:
    plan: BenchPlan = field(default_factory=lambda: BenchPlan(sizes=(1000, 10000), sigmas=(2, 8), gammas=(2, 8), reps=3))
    output: Path | None = Path("results/bench.tsv")


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def parse_args(argv=None) -> ExperimentConfig:
    cfg = ExperimentConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=_ints, default=cfg.plan.sizes)
    ap.add_argument("--sigmas", type=_ints, default=cfg.plan.sigmas)
    ap.add_argument("--gammas", type=_ints, default=cfg.plan.gammas)
    ap.add_argument("--reps", type=int, default=cfg.plan.reps)
    ap.add_argument("--seed", type=int, default=cfg.plan.seed)
    ap.add_argument("--output", type=Path, default=cfg.output, help="'-' for stdout only")
    args = ap.parse_args(argv)
    plan_fields = {f.name for f in fields(BenchPlan)}
    overrides = {k: v for k, v in vars(args).items() if k in plan_fields}
    plan = BenchPlan(**{**vars(cfg.plan), **overrides})
    return ExperimentConfig(plan=plan, output=None if str(args.output) == "-" else args.output)


def main(argv=None) -> int:
    cfg = parse_args(argv)

    def progress(row):
        print(f"n={row.n} sigma={row.sigma} gamma={row.gamma} done, agree={row.agree}", file=sys.stderr)

    rows = run_bench(cfg.plan, progress)
    table = format_bench(rows, cfg.plan.engines)
    sys.stdout.write(table)
    if cfg.output is not None:
        cfg.output.parent.mkdir(parents=True, exist_ok=True)
        cfg.output.write_text(table)
    return 0 if all(r.agree for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
