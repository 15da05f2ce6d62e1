"""Skipping engine: lazy h evaluation driven by an indexed max-priority queue.

Keys are candidate delays indexed by iBFS. A node popped with key d (all of its
subtree then also holds key d) is left-minimal (y, d)-unique; its subtree is
re-evaluated at bound d and the new value is pushed to the ancestors.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .core import ColoredString
from .miner_base import MinedPairs, BoundViolation, check_color, check_count_bound
from .structures import ColorBitvector, IndexedMaxPQ, build_color_bitvector, pq_demote, pq_insert
from . import suffix_tree as stree

NEVER = -1


# --- reference evaluation (plain Python, used by tests and the walkthrough) ----


def leaf_h(bv: ColorBitvector, j: int, ell: int) -> int:
    """Largest i in [0, ell-1] with b_y[j+i] = 1, else -1."""
    if ell <= 0 or j <= 0:
        return -1
    r = bv.rank1(j + ell - 1)
    if r == 0:
        return -1
    value = bv.select1(r) - j
    return value if value >= 0 else -1


def _demote(ipq, st, u, value):
    if ipq is not None:
        i = st.k - 1 - u
        if value < ipq.key_of(i):
            ipq.demote(i, value)


def h(st: stree.SuffixTree, bv: ColorBitvector, u: int, ell: int, ipq: IndexedMaxPQ | None = None) -> int:
    """Recursive h(u, ell); demotes every evaluated node when ``ipq`` is given."""
    if st.is_leaf[u]:
        value = leaf_h(bv, int(st.leaf_offset[u]), ell)
    else:
        value = min(h(st, bv, v, ell, ipq) for v in st.children(u))
    _demote(ipq, st, u, value)
    return value


def fast_h(st: stree.SuffixTree, bv: ColorBitvector, u: int, ell: int, ipq: IndexedMaxPQ | None = None) -> int:
    """h with direct convergence at nodes whose children are all leaves."""
    if st.is_leaf[u]:
        return h(st, bv, u, ell, ipq)
    if not st.all_leaf_children[u]:
        value = min(fast_h(st, bv, v, ell, ipq) for v in st.children(u))
        _demote(ipq, st, u, value)
        return value
    cand = ell - 1
    changed = True
    while changed and cand >= 0:
        changed = False
        for v in st.children(u):
            r = leaf_h(bv, int(st.leaf_offset[v]), cand + 1)
            _demote(ipq, st, v, r)
            if r < cand:
                cand = r
                changed = True
                break
    cand = max(cand, -1)
    _demote(ipq, st, u, cand)
    return cand


def real_type_check(st: stree.SuffixTree, u: int, d: int) -> bool:
    """At least two occurrences, the second one leaving room for delay d."""
    if u == st.root:
        raise ValueError("real_type_check is undefined at the root")
    return bool(not st.is_leaf[u] and st.second_leaf[u] >= d + 1)


# --- kernel ----------------------------------------------------------------------


@njit(cache=True)
def _leaf_h(ranks, selects, j, ell):
    if ell <= 0 or j <= 0:
        return -1
    r = ranks[j + ell - 1]
    if r == 0:
        return -1
    value = selects[r] - j
    return value if value >= 0 else -1


@njit(cache=True)
def _grow(buf, count):
    if count < buf.shape[0]:
        return buf
    out = np.empty((2 * buf.shape[0], buf.shape[1]), dtype=buf.dtype)
    out[:count] = buf[:count]
    return out


@njit(cache=True)
def _skip_kernel(parent, is_leaf, leaf_j, leftmin, target, second_leaf, preorder, pre_index, subtree_size,
                 child_start, child_count, all_leaf, ranks, selects, n, real, use_fast, trace):
    k = len(parent)
    keys = np.zeros(k, dtype=np.int64)
    heap = np.zeros(k + 1, dtype=np.int64)
    pos = np.zeros(k, dtype=np.int64)
    size = 0
    for i in range(k):
        size = pq_insert(keys, heap, pos, size, i, n + 1)
    lm = np.full((2, k), NEVER, dtype=np.int64)
    acc = np.zeros(k, dtype=np.int64)
    extractions = np.zeros(k, dtype=np.int64)
    reports = np.empty((64, 2), dtype=np.int64)
    n_reports = 0
    log = np.empty((64 if trace else 1, 4), dtype=np.int64)
    n_log = 0
    parent_violations = 0
    visits = 0
    big = n + 2

    while size > 0:
        top = heap[1]
        d = keys[top]
        if d < 0:
            break
        u = k - 1 - top
        extractions[u] += 1
        reported = 0
        if d <= n:
            if u != 0 and keys[k - 1 - parent[u]] >= d:
                parent_violations += 1
            if leftmin[u] and lm[(d + 1) & 1, target[u]] != d + 1:
                if not real or (not is_leaf[u] and second_leaf[u] >= d + 1):
                    reports = _grow(reports, n_reports)
                    reports[n_reports, 0] = d
                    reports[n_reports, 1] = u
                    n_reports += 1
                    reported = 1
            lm[d & 1, u] = d

        # re-evaluate the subtree of u at bound d, children before parents
        lo = pre_index[u]
        hi = lo + subtree_size[u]
        for q in range(lo, hi):
            w = preorder[q]
            if not is_leaf[w]:
                acc[w] = big
        for q in range(hi - 1, lo - 1, -1):
            w = preorder[q]
            p = parent[w]
            if use_fast and w != u and all_leaf[p]:
                continue  # handled by the parent's convergence loop
            visits += 1
            if is_leaf[w]:
                value = _leaf_h(ranks, selects, leaf_j[w], d)
            elif use_fast and all_leaf[w]:
                cand = d - 1
                changed = True
                while changed and cand >= 0:
                    changed = False
                    for c in range(child_start[w], child_start[w] + child_count[w]):
                        visits += 1
                        r = _leaf_h(ranks, selects, leaf_j[c], cand + 1)
                        pq_demote(keys, heap, pos, size, k - 1 - c, r)
                        if r < cand:
                            cand = r
                            changed = True
                            break
                value = cand if cand >= 0 else -1
            else:
                value = acc[w]
            pq_demote(keys, heap, pos, size, k - 1 - w, value)
            if w != u and value < acc[p]:
                acc[p] = value
        new = keys[top]
        p = parent[u]
        while p >= 0 and keys[k - 1 - p] > new:
            pq_demote(keys, heap, pos, size, k - 1 - p, new)
            p = parent[p]

        if trace:
            log = _grow(log, n_log)
            log[n_log, 0] = top
            log[n_log, 1] = d
            log[n_log, 2] = reported
            log[n_log, 3] = new
            n_log += 1

    return reports[:n_reports].copy(), extractions, parent_violations, visits, log[:n_log].copy()


def skipping_mine(cs: ColoredString, y: int, use_fast: bool = False, real_filter: bool = False,
                  tree: stree.SuffixTree | None = None, trace: bool = False) -> MinedPairs:
    """Minimal patterns in descending delay order via the priority-queue schedule.

    ``stats["trace"]`` (when requested) holds one row per extraction:
    (iBFS, key, reported, new key).
    """
    if use_fast and not real_filter:
        raise ValueError("fast_h is only valid together with the real-type filter")
    check_color(cs, y)
    st = tree if tree is not None else stree.build(cs)
    bv = build_color_bitvector(cs, y)
    reports, extractions, violations, visits, log = _skip_kernel(
        st.parent, st.is_leaf, st.leaf_offset, st.leftmin_defined, np.maximum(st.right_target, 0),
        st.second_leaf, st.preorder, st.pre_index, st.subtree_size, st.child_start, st.child_count,
        st.all_leaf_children, bv.ranks, bv.selects, cs.n, real_filter, use_fast, trace,
    )
    max_ext = int(extractions.max())
    if max_ext > cs.n + 2:
        raise BoundViolation(f"a node was extracted {max_ext} times (> n+2 = {cs.n + 2})")
    if violations:
        raise BoundViolation(f"{violations} extractions had a parent key >= their own")
    check_count_bound(cs.n, len(reports))
    stats = {
        "max_extractions_per_node": max_ext,
        "total_extractions": int(extractions.sum()),
        "parent_key_violations": int(violations),
        "visits": int(visits),
        "node_count": st.k,
    }
    if trace:
        stats["trace"] = log
    return MinedPairs(reports[:, 0].copy(), reports[:, 1].copy(), st, stats)


def format_trace(log: np.ndarray) -> str:
    lines = ["ibfs\tkey\treported\tnew_key"]
    lines += [f"{a}\t{b}\t{'yes' if c else 'no'}\t{e}" for a, b, c, e in log.tolist()]
    return "\n".join(lines) + "\n"
