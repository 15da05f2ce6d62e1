"""Walk the small running example through every stage of the pipeline.

Prints the suffix tree in iBFS order, the h values around the node "aca",
the skipping-miner trace and the mined pairs, and writes a Graphviz dump.

    python3 scripts/walkthrough.py [--dot results/running_tree.dot]
"""
import argparse
from dataclasses import dataclass
from pathlib import Path

from colorminer import suffix_tree as T
from colorminer.core import from_strings
from colorminer.miner_base import algo2_minimal
from colorminer.miner_skip import fast_h, format_trace, h, skipping_mine
from colorminer.structures import build_color_bitvector


@dataclass
class WalkthroughConfig:
    text: str = "acacacbacab"
    colors: str = "xyxzxyzyxxz"
    color: str = "y"
    focus: str = "aca"
    bounds: tuple[int, ...] = (9, 3)
    dot: Path = Path("results/running_tree.dot")


def _label(cs, st, u) -> str:
    return "".join("$" if c < 0 else cs.symbol_names[c] for c in st.label(u))


def run(cfg: WalkthroughConfig) -> None:
    cs = from_strings(cfg.text, cfg.colors)
    y = cs.color_id(cfg.color)
    st = T.build(cs)
    bv = build_color_bitvector(cs, y)

    print(f"# suffix tree of the reversed text ({st.k} nodes)")
    print("ibfs\tlabel\tleaves")
    for u in sorted(range(st.k), key=lambda v: -int(st.ibfs[v])):
        print(f"{int(st.ibfs[u])}\t{_label(cs, st, u) or '(root)'}\t{sorted(st.leaves_below(u).tolist())}")

    u = st.find(cs.symbol_ids(cfg.focus)).node
    print(f"\n# h around node {cfg.focus!r} (iBFS {int(st.ibfs[u])})")
    for ell in cfg.bounds:
        kids = {int(st.leaf_number[v]): h(st, bv, v, ell) for v in st.children(u)}
        print(f"h({cfg.focus},{ell}) = {h(st, bv, u, ell)}  fast_h = {fast_h(st, bv, u, ell)}  children by leaf: {kids}")

    mined = skipping_mine(cs, y, tree=st, trace=True)
    print("\n# skipping miner trace, full mode")
    print(format_trace(mined.stats["trace"]), end="")

    for name, real in (("full", False), ("real", True)):
        pairs = algo2_minimal(cs, y, real_filter=real, tree=st).entries()
        shown = ", ".join(f"({cs.format_pattern(e.pattern)},{e.delay})" for e in pairs)
        print(f"\n# minimal pairs, {name} mode: {shown}")

    cfg.dot.parent.mkdir(parents=True, exist_ok=True)
    cfg.dot.write_text(T.to_dot(st, cs))
    print(f"\nwrote {cfg.dot}")


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dot", type=Path, default=WalkthroughConfig.dot)
    run(WalkthroughConfig(dot=ap.parse_args(argv).dot))


if __name__ == "__main__":
    main()
