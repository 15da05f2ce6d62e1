"""Baseline engines: one bottom-up g-marking pass over the tree per delay."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .core import ColoredString, ColorOutOfRange, ReportEntry
from . import suffix_tree as stree


class BoundViolation(AssertionError):
    pass


@dataclass
class MinedPairs:
    """Raw engine output: parallel arrays of delays and BFS node ids, plus counters."""

    delays: np.ndarray
    nodes: np.ndarray
    tree: stree.SuffixTree
    stats: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.delays)

    def pattern(self, u: int) -> tuple[int, ...]:
        return stree.left_min_label(self.tree, int(u))

    def pairs(self) -> set[tuple[tuple[int, ...], int]]:
        return {(self.pattern(u), int(d)) for d, u in zip(self.delays, self.nodes)}

    def node_pairs(self) -> set[tuple[int, int]]:
        return set(zip(self.delays.tolist(), self.nodes.tolist()))

    def entries(self, with_positions: bool = False) -> list[ReportEntry]:
        st = self.tree
        out = [
            ReportEntry(
                delay=int(d),
                pattern=self.pattern(u),
                occurrence_count=int(st.occurrence_count[u]),
                end_positions=tuple(st.end_positions(int(u))) if with_positions else None,
            )
            for d, u in zip(self.delays, self.nodes)
        ]
        out.sort(key=lambda e: (-e.delay, e.pattern))
        return out


def check_color(cs: ColoredString, y: int) -> None:
    if not 0 <= y < cs.gamma:
        raise ColorOutOfRange(f"color id {y} not in [0, {cs.gamma})")


def check_count_bound(n: int, reported: int) -> None:
    if reported > n * (n + 1):
        raise BoundViolation(f"{reported} reported pairs exceed n(n+1) = {n * (n + 1)}")


@njit(cache=True)
def mark_round(g, parent, is_leaf, leaf_j, n, colors, y, d):
    """Fill ``g`` for delay ``d``; returns the number of node visits."""
    k = len(parent)
    g[:] = True
    visits = 0
    for v in range(k - 1, 0, -1):
        visits += 1
        if is_leaf[v]:
            j = leaf_j[v]
            g[v] = j > 0 and (j + d > n or colors[j + d - 1] == y)
        if not g[v]:
            g[parent[v]] = False
    return visits


@njit(cache=True)
def _algo2_kernel(parent, is_leaf, leaf_j, leftmin, target, second_leaf, n, colors, y, real):
    k = len(parent)
    g = np.zeros(k, dtype=np.bool_)
    g_prev = np.zeros(k, dtype=np.bool_)
    cap = 64
    out_d = np.empty(cap, dtype=np.int64)
    out_v = np.empty(cap, dtype=np.int64)
    count = 0
    max_visits = 0
    for d in range(n, -1, -1):
        visits = mark_round(g, parent, is_leaf, leaf_j, n, colors, y, d)
        for v in range(1, k):
            visits += 1
            if not g[v] or g[parent[v]] or not leftmin[v] or g_prev[target[v]]:
                continue
            if real and (is_leaf[v] or second_leaf[v] < d + 1):
                continue
            if count == cap:
                cap *= 2
                out_d = np.concatenate((out_d, np.empty(cap - count, dtype=np.int64)))
                out_v = np.concatenate((out_v, np.empty(cap - count, dtype=np.int64)))
            out_d[count] = d
            out_v[count] = v
            count += 1
        if visits > max_visits:
            max_visits = visits
        g, g_prev = g_prev, g
    return out_d[:count], out_v[:count], max_visits


def _kernel_args(st: stree.SuffixTree, cs: ColoredString):
    return (
        st.parent,
        st.is_leaf,
        st.leaf_offset,
        np.ascontiguousarray(cs.colors, dtype=np.int64),
    )


def algo2_minimal(cs: ColoredString, y: int, real_filter: bool = False, tree: stree.SuffixTree | None = None) -> MinedPairs:
    """Minimally (y, d)-unique substrings for d = n down to 0 (left- then right-minimality)."""
    check_color(cs, y)
    st = tree if tree is not None else stree.build(cs)
    parent, is_leaf, leaf_j, colors = _kernel_args(st, cs)
    target = np.maximum(st.right_target, 0)
    delays, nodes, max_visits = _algo2_kernel(
        parent, is_leaf, leaf_j, st.leftmin_defined, target, st.second_leaf, cs.n, colors, y, real_filter
    )
    check_count_bound(cs.n, len(delays))
    stats = {"max_visits_per_round": int(max_visits), "node_count": st.k}
    if max_visits > 2 * st.k:
        raise BoundViolation(f"{max_visits} visits in one round exceed 2k = {2 * st.k}")
    return MinedPairs(delays, nodes, st, stats)


def algo1_all_unique(cs: ColoredString, y: int, d_max: int | None = None, tree: stree.SuffixTree | None = None) -> list[ReportEntry]:
    """Every (y, d)-unique substring for d = 0..d_max, sorted by (d, pattern)."""
    check_color(cs, y)
    if d_max is None:
        d_max = cs.n
    if not 0 <= d_max <= cs.n:
        raise ValueError(f"d_max={d_max} outside [0, {cs.n}]")
    st = tree if tree is not None else stree.build(cs)
    parent, is_leaf, leaf_j, colors = _kernel_args(st, cs)
    g = np.zeros(st.k, dtype=np.bool_)
    out = []
    for d in range(d_max + 1):
        mark_round(g, parent, is_leaf, leaf_j, cs.n, colors, y, d)
        for u in np.flatnonzero(g[1:]) + 1:
            top = int(st.depth[u]) - (1 if is_leaf[u] else 0)
            full = st.label(int(u))
            for t in range(int(st.depth[parent[u]]) + 1, top + 1):
                out.append(ReportEntry(d, full[:t][::-1], int(st.occurrence_count[u])))
    out.sort(key=lambda e: (e.delay, e.pattern))
    return out
