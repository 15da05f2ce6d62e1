"""Oracle cross-check corpus and the engine benchmark."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .core import ColoredString, SplitMix64, gen_random
from .miner_base import MinedPairs, algo2_minimal
from .miner_skip import skipping_mine
from .oracle import oracle_report
from . import suffix_tree as stree

ENGINES = ("base", "skip", "fast")


def run_engine(engine: str, cs: ColoredString, y: int, real_filter: bool, tree=None, trace: bool = False) -> MinedPairs:
    if engine == "base":
        return algo2_minimal(cs, y, real_filter, tree=tree)
    if engine == "skip":
        return skipping_mine(cs, y, False, real_filter, tree=tree, trace=trace)
    if engine == "fast":
        return skipping_mine(cs, y, True, real_filter, tree=tree, trace=trace)
    raise ValueError(f"unknown engine {engine!r}")


# --- oracle corpus -------------------------------------------------------------


@dataclass
class CorpusConfig:
    count: int = 500
    max_n: int = 64
    sigmas: tuple[int, ...] = (2, 3, 4)
    gammas: tuple[int, ...] = (2, 3, 4)
    seed: int = 0
    all_colors: bool = True


@dataclass
class Instance:
    index: int
    seed: int
    n: int
    sigma: int
    gamma: int
    cs: ColoredString


@dataclass
class Mismatch:
    instance: Instance
    color: int
    comparison: str
    pair: tuple
    side: str

    def describe(self) -> str:
        inst = self.instance
        pattern, d = self.pair
        shown = inst.cs.format_pattern(pattern)
        return (
            f"instance {inst.index} (seed={inst.seed}, n={inst.n}, sigma={inst.sigma}, gamma={inst.gamma}) "
            f"color={inst.cs.color_names[self.color]} {self.comparison}: ({shown!r}, {d}) only in {self.side}"
        )


@dataclass
class CheckResult:
    instances: int = 0
    runs: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)
    bound_violations: int = 0
    max_full_reports: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.bound_violations


def corpus(cfg: CorpusConfig) -> Iterator[Instance]:
    """Instances whose parameters are drawn from one splitmix64 stream."""
    rng = SplitMix64(cfg.seed)
    for index in range(cfg.count):
        r = rng.next()
        n = 1 + r % cfg.max_n
        sigma = cfg.sigmas[(r >> 20) % len(cfg.sigmas)]
        gamma = cfg.gammas[(r >> 40) % len(cfg.gammas)]
        seed = rng.next()
        yield Instance(index, seed, n, sigma, gamma, gen_random(n, sigma, gamma, seed))


def _compare(out: CheckResult, inst, y, label, engine_name, got: set, want: set):
    for pair in sorted(got - want):
        out.mismatches.append(Mismatch(inst, y, label, pair, engine_name))
    for pair in sorted(want - got):
        out.mismatches.append(Mismatch(inst, y, label, pair, "oracle"))


def check_corpus(cfg: CorpusConfig = CorpusConfig(), sabotage: bool = False,
                 progress: Callable[[Instance], None] | None = None) -> CheckResult:
    """Compare every engine against the oracle on each instance and color."""
    out = CheckResult()
    sabotaged = not sabotage
    for inst in corpus(cfg):
        out.instances += 1
        st = stree.build(inst.cs)
        colors = range(inst.gamma) if cfg.all_colors else [inst.seed % inst.gamma]
        for y in colors:
            report = oracle_report(inst.cs, y)
            results = {}
            for engine in ENGINES:
                for real in (False, True):
                    if engine == "fast" and not real:
                        continue
                    results[engine, real] = run_engine(engine, inst.cs, y, real, tree=st).pairs()
                    out.runs += 1
            if not sabotaged and results["skip", False]:
                results["skip", False] = set(sorted(results["skip", False])[1:])
                sabotaged = True
            full = len(results["base", False])
            if full > inst.n * (inst.n + 1):
                out.bound_violations += 1
            out.max_full_reports[inst.index, y] = full
            for (engine, real), got in results.items():
                want = report.real_pairs if real else report.minimal_pairs
                name = f"{engine}+{'real' if real else 'full'}"
                _compare(out, inst, y, f"{name} vs oracle", name, got, want)
        if progress is not None:
            progress(inst)
    return out


# --- benchmark -----------------------------------------------------------------


@dataclass
class BenchPlan:
    sizes: tuple[int, ...] = (1000,)
    sigmas: tuple[int, ...] = (2, 8)
    gammas: tuple[int, ...] = (2, 8)
    reps: int = 5
    seed: int = 0
    color: int = 0
    engines: tuple[str, ...] = ENGINES


@dataclass
class BenchRow:
    n: int
    sigma: int
    gamma: int
    build_seconds: float
    seconds: dict
    reported: int
    agree: bool

    def speedup(self, a: str, b: str) -> float:
        return self.seconds[a] / self.seconds[b] if self.seconds[b] > 0 else float("inf")


def warm_up() -> None:
    """Compile the numba kernels so the first timed call excludes JIT cost."""
    cs = gen_random(8, 2, 2, 0)
    for engine in ENGINES:
        run_engine(engine, cs, 0, True)
    run_engine("skip", cs, 0, False)


def run_bench(plan: BenchPlan, progress: Callable[[BenchRow], None] | None = None) -> list[BenchRow]:
    """All engines with the real-type filter on each (n, sigma, gamma) cell."""
    warm_up()
    rows = []
    for n in plan.sizes:
        for sigma in plan.sigmas:
            for gamma in plan.gammas:
                cs = gen_random(n, sigma, gamma, plan.seed)
                start = time.perf_counter()
                st = stree.build(cs)
                st.right_target, st.second_leaf  # derived arrays are part of the build
                build = time.perf_counter() - start
                seconds, outputs = {}, {}
                for engine in plan.engines:
                    samples = []
                    for _ in range(plan.reps):
                        start = time.perf_counter()
                        mined = run_engine(engine, cs, plan.color % gamma, True, tree=st)
                        samples.append(time.perf_counter() - start)
                    seconds[engine] = float(np.mean(samples))
                    outputs[engine] = mined.node_pairs()
                first = outputs[plan.engines[0]]
                row = BenchRow(n, sigma, gamma, build, seconds, len(first),
                               all(o == first for o in outputs.values()))
                rows.append(row)
                if progress is not None:
                    progress(row)
    return rows


def format_bench(rows: list[BenchRow], engines: tuple[str, ...] = ENGINES) -> str:
    head = ["n", "sigma", "gamma", "build"] + list(engines)
    # neighbours first, then first/last: base/skip, skip/fast, base/fast
    pairs = list(zip(engines, engines[1:]))
    if len(engines) > 2:
        pairs.append((engines[0], engines[-1]))
    head += [f"{a}/{b}" for a, b in pairs] + ["reported", "agree"]
    lines = ["\t".join(head)]
    for r in rows:
        cells = [str(r.n), str(r.sigma), str(r.gamma), f"{r.build_seconds:.3f}"]
        cells += [f"{r.seconds[e]:.6f}" for e in engines]
        cells += [f"{r.speedup(a, b):.2f}" for a, b in pairs]
        cells += [str(r.reported), "yes" if r.agree else "NO"]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"
