"""Brute-force reference sets computed straight from the definitions.

Nothing here touches the suffix tree. Patterns are tuples of symbol ids and
every set holds ``(pattern, d)`` pairs.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import ColoredString, ColorOutOfRange

DEFAULT_BOUND = 256

Pair = tuple[tuple[int, ...], int]


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OracleReport:
    unique_pairs: frozenset
    minimal_pairs: frozenset
    real_pairs: frozenset

    def at(self, d: int) -> dict[str, set]:
        pick = lambda pairs: {p for p, e in pairs if e == d}
        return {
            "unique": pick(self.unique_pairs),
            "minimal": pick(self.minimal_pairs),
            "real": pick(self.real_pairs),
        }


class _Scanner:
    """Occurrence lists for every distinct substring plus a memoized uniqueness test."""

    def __init__(self, cs: ColoredString, y: int, bound: int):
        if cs.n > bound:
            raise TooLarge(f"n={cs.n} exceeds oracle bound {bound}")
        if not 0 <= y < cs.gamma:
            raise ColorOutOfRange(f"color id {y} not in [0, {cs.gamma})")
        self.n = cs.n
        self.y = y
        self.colors = cs.colors.tolist()
        text = cs.text.tolist()
        self.starts: dict[tuple[int, ...], list[int]] = {}
        for i in range(self.n):
            for j in range(i + 1, self.n + 1):
                self.starts.setdefault(tuple(text[i:j]), []).append(i + 1)
        self.unique = lru_cache(maxsize=None)(self._unique)

    def _unique(self, pattern: tuple[int, ...], d: int) -> bool:
        m = len(pattern)
        for i in self.starts[pattern]:
            pos = i + m - 1 + d
            if pos <= self.n and self.colors[pos - 1] != self.y:
                return False
        return True

    def minimal(self, pattern: tuple[int, ...], d: int) -> bool:
        m = len(pattern)
        for i in range(m):
            for j in range(i + 1, m + 1):
                if j - i == m:
                    continue
                if self.unique(pattern[i:j], d + m - j):
                    return False
        return True

    def real(self, pattern: tuple[int, ...], d: int) -> bool:
        starts = self.starts[pattern]
        return len(starts) >= 2 and starts[1] + len(pattern) - 1 + d <= self.n


def _d_range(cs, d_max):
    return range((cs.n if d_max is None else d_max) + 1)


def oracle_unique_set(cs: ColoredString, y: int, d_max: int | None = None, bound: int = DEFAULT_BOUND) -> set[Pair]:
    sc = _Scanner(cs, y, bound)
    return {(p, d) for d in _d_range(cs, d_max) for p in sc.starts if sc.unique(p, d)}


def oracle_report(cs: ColoredString, y: int, d_max: int | None = None, bound: int = DEFAULT_BOUND) -> OracleReport:
    sc = _Scanner(cs, y, bound)
    unique = {(p, d) for d in _d_range(cs, d_max) for p in sc.starts if sc.unique(p, d)}
    minimal = {(p, d) for p, d in unique if sc.minimal(p, d)}
    real = {(p, d) for p, d in minimal if sc.real(p, d)}
    return OracleReport(frozenset(unique), frozenset(minimal), frozenset(real))


def oracle_minimal_set(cs: ColoredString, y: int, d_max: int | None = None, bound: int = DEFAULT_BOUND) -> set[Pair]:
    return set(oracle_report(cs, y, d_max, bound).minimal_pairs)


def oracle_real_set(cs: ColoredString, y: int, d_max: int | None = None, bound: int = DEFAULT_BOUND) -> set[Pair]:
    return set(oracle_report(cs, y, d_max, bound).real_pairs)
