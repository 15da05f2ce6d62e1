"""Rank/select bitvector, maximum-oriented indexed priority queue, range top-2.

The heap primitives are numba functions over plain arrays so the skipping
engine's kernel can call them directly; :class:`IndexedMaxPQ` is a thin
checked wrapper around the same functions.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .core import ColoredString, ColorOutOfRange, OutOfRange


class DemoteIncrease(ValueError):
    pass


class DuplicateInsert(ValueError):
    pass


# --- bitvector ---------------------------------------------------------------


class ColorBitvector:
    """Bits ``b[1..2n]`` with ``b[i] = 1`` iff ``i > n`` or position ``i`` has color ``y``.

    ``ranks[i]`` is the inclusive prefix count and ``selects[k]`` the position
    of the k-th one (``selects[0] = 0``), so both queries are single lookups.
    """

    def __init__(self, bits):
        bits = np.asarray(bits, dtype=np.uint8)
        self.bits = np.concatenate(([0], bits)).astype(np.uint8)
        self.ranks = np.cumsum(self.bits, dtype=np.int64)
        self.selects = np.concatenate(([0], np.flatnonzero(self.bits))).astype(np.int64)

    def __len__(self):
        return len(self.bits) - 1

    def __getitem__(self, i: int) -> int:
        if not 1 <= i <= len(self):
            raise OutOfRange(i)
        return int(self.bits[i])

    def ones(self) -> int:
        return int(self.ranks[-1])

    def rank1(self, i: int) -> int:
        if not 0 <= i <= len(self):
            raise OutOfRange(f"rank1({i}) outside [0, {len(self)}]")
        return int(self.ranks[i])

    def select1(self, k: int) -> int:
        if not 1 <= k <= self.ones():
            raise OutOfRange(f"select1({k}) outside [1, {self.ones()}]")
        return int(self.selects[k])


def build_color_bitvector(cs: ColoredString, y: int) -> ColorBitvector:
    if not 0 <= y < cs.gamma:
        raise ColorOutOfRange(f"color id {y} not in [0, {cs.gamma})")
    first = (cs.colors == y).astype(np.uint8)
    return ColorBitvector(np.concatenate((first, np.ones(cs.n, dtype=np.uint8))))


# --- indexed max priority queue ------------------------------------------------
# heap[1..size] holds item indices; pos[i] is the heap slot of item i (0 = absent).
# Order: larger key first, ties toward the larger index.


@njit(cache=True)
def _above(keys, a, b):
    ka = keys[a]
    kb = keys[b]
    return ka > kb or (ka == kb and a > b)


@njit(cache=True)
def pq_swim(keys, heap, pos, k):
    while k > 1:
        p = k >> 1
        if not _above(keys, heap[k], heap[p]):
            break
        a = heap[k]
        heap[k] = heap[p]
        heap[p] = a
        pos[heap[k]] = k
        pos[heap[p]] = p
        k = p


@njit(cache=True)
def pq_sink(keys, heap, pos, size, k):
    while 2 * k <= size:
        c = 2 * k
        if c < size and _above(keys, heap[c + 1], heap[c]):
            c += 1
        if not _above(keys, heap[c], heap[k]):
            break
        a = heap[k]
        heap[k] = heap[c]
        heap[c] = a
        pos[heap[k]] = k
        pos[heap[c]] = c
        k = c


@njit(cache=True)
def pq_insert(keys, heap, pos, size, i, key):
    size += 1
    keys[i] = key
    heap[size] = i
    pos[i] = size
    pq_swim(keys, heap, pos, size)
    return size


@njit(cache=True)
def pq_demote(keys, heap, pos, size, i, key):
    if key < keys[i]:
        keys[i] = key
        pq_sink(keys, heap, pos, size, pos[i])


class IndexedMaxPQ:
    """Maximum-oriented indexed priority queue over indices ``0..capacity-1``.

    ``max()`` peeks; there is no extraction. Ties on the key go to the larger
    index, so with reverse-BFS indices a parent outranks its children.
    """

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.keys = np.zeros(capacity, dtype=np.int64)
        self.heap = np.zeros(capacity + 1, dtype=np.int64)
        self.pos = np.zeros(capacity, dtype=np.int64)
        self.size = 0

    def __len__(self):
        return self.size

    def __contains__(self, i: int) -> bool:
        return 0 <= i < self.capacity and self.pos[i] != 0

    def _check_index(self, i):
        if not 0 <= i < self.capacity:
            raise OutOfRange(f"index {i} outside [0, {self.capacity})")

    def insert(self, i: int, key: int) -> None:
        self._check_index(i)
        if self.pos[i]:
            raise DuplicateInsert(f"index {i} already present")
        self.size = pq_insert(self.keys, self.heap, self.pos, self.size, i, key)

    def demote(self, i: int, key: int) -> None:
        self._check_index(i)
        if not self.pos[i]:
            raise KeyError(i)
        if key > self.keys[i]:
            raise DemoteIncrease(f"demote({i}, {key}) above current key {self.keys[i]}")
        pq_demote(self.keys, self.heap, self.pos, self.size, i, key)

    def max(self) -> tuple[int, int]:
        if not self.size:
            raise IndexError("max() of an empty queue")
        i = int(self.heap[1])
        return i, int(self.keys[i])

    def key_of(self, i: int) -> int:
        self._check_index(i)
        if not self.pos[i]:
            raise KeyError(i)
        return int(self.keys[i])

    def all_negative(self) -> bool:
        return self.size == 0 or self.keys[self.heap[1]] < 0


# --- range top-2 ---------------------------------------------------------------


class RangeTop2:
    """Max and second max over ``values[lo..hi]`` (1-based, inclusive).

    A sparse table of argmax positions answers each range-max in O(1); the
    second max comes from two more probes on either side of the argmax.
    """

    def __init__(self, values):
        self.values = np.asarray(values, dtype=np.int64)
        m = len(self.values)
        if m == 0:
            raise ValueError("RangeTop2 needs at least one value")
        levels = [np.arange(m, dtype=np.int64)]
        width = 1
        while 2 * width <= m:
            prev = levels[-1]
            left = prev[: m - 2 * width + 1]
            right = prev[width : width + len(left)]
            levels.append(np.where(self.values[right] > self.values[left], right, left))
            width *= 2
        self._table = levels

    def __len__(self):
        return len(self.values)

    def _argmax(self, lo, hi):
        # 0-based inclusive bounds, vectorized over arrays
        span = hi - lo + 1
        level = np.floor(np.log2(np.maximum(span, 1))).astype(np.int64)
        out = np.empty(len(lo), dtype=np.int64)
        for j in np.unique(level):
            sel = level == j
            a = self._table[j][lo[sel]]
            b = self._table[j][hi[sel] - (1 << j) + 1]
            out[sel] = np.where(self.values[b] > self.values[a], b, a)
        return out

    def argmax(self, lo: int, hi: int) -> int:
        """1-based position of a maximum in ``[lo, hi]``."""
        self._check(lo, hi)
        return int(self._argmax(np.array([lo - 1]), np.array([hi - 1]))[0]) + 1

    def _check(self, lo, hi):
        if not 1 <= lo <= hi <= len(self):
            raise OutOfRange(f"range [{lo}, {hi}] outside [1, {len(self)}]")

    def top2(self, lo: int, hi: int) -> tuple[int, int | None]:
        self._check(lo, hi)
        first, second = self.top2_many(np.array([lo]), np.array([hi]))
        return int(first[0]), (None if lo == hi else int(second[0]))

    def top2_many(self, lo, hi, missing: int = -1) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized top-2; singleton ranges get ``missing`` as second value."""
        lo = np.asarray(lo, dtype=np.int64) - 1
        hi = np.asarray(hi, dtype=np.int64) - 1
        p = self._argmax(lo, hi)
        floor = np.iinfo(np.int64).min
        second = np.full(len(lo), floor, dtype=np.int64)
        left = p > lo
        if left.any():
            q = self._argmax(lo[left], p[left] - 1)
            second[left] = self.values[q]
        right = p < hi
        if right.any():
            q = self._argmax(p[right] + 1, hi[right])
            second[right] = np.maximum(second[right], self.values[q])
        second[lo == hi] = missing
        return self.values[p], second


def range_top2(rt: RangeTop2, lo: int, hi: int) -> tuple[int, int | None]:
    return rt.top2(lo, hi)
