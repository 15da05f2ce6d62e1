"""Mining minimally (y, d)-unique substrings of colored strings."""
from .core import ColoredString, ReportEntry, from_strings, gen_random, parse_colored
from .miner_base import algo1_all_unique, algo2_minimal
from .miner_skip import skipping_mine
from .oracle import oracle_minimal_set, oracle_real_set, oracle_unique_set
from .suffix_tree import build as build_suffix_tree

__all__ = [
    "ColoredString",
    "ReportEntry",
    "from_strings",
    "gen_random",
    "parse_colored",
    "algo1_all_unique",
    "algo2_minimal",
    "skipping_mine",
    "oracle_minimal_set",
    "oracle_real_set",
    "oracle_unique_set",
    "build_suffix_tree",
]
