"""Suffix tree of the reversed colored text, flattened into BFS-numbered arrays.

Node ids are BFS ranks (root = 0, children visited sentinel-first then by
display token), so the children of a node occupy a contiguous id range and every
parent id is smaller than its children's. The reverse-BFS index used as the
priority-queue index is ``k - 1 - id``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import ColoredString
from .structures import RangeTop2

SENTINEL_ID = -1


class InvalidLocus(ValueError):
    pass


class RootHasNoLabel(ValueError):
    pass


@dataclass(frozen=True)
class Locus:
    node: int
    depth: int


def _ukkonen(s: list[int]):
    """Ukkonen's construction; ``s`` must end with a unique terminator.

    Returns raw (start, end, link, children) lists with the root at index 0.
    Edges are half-open ``[start, end)`` into ``s``.
    """
    size = len(s)
    start = [-1]
    end = [-1]
    link = [0]
    children: list[dict[int, int]] = [{}]

    def new_node(st, en):
        start.append(st)
        end.append(en)
        link.append(0)
        children.append({})
        return len(start) - 1

    active_node, active_edge, active_len, remainder = 0, 0, 0, 0
    for i, c in enumerate(s):
        remainder += 1
        last_new = -1
        while remainder:
            if active_len == 0:
                active_edge = i
            edge_sym = s[active_edge]
            nxt = children[active_node].get(edge_sym)
            if nxt is None:
                children[active_node][edge_sym] = new_node(i, size)
                if last_new != -1:
                    link[last_new] = active_node
                    last_new = -1
            else:
                edge_len = min(end[nxt], i + 1) - start[nxt]
                if active_len >= edge_len:
                    active_edge += edge_len
                    active_len -= edge_len
                    active_node = nxt
                    continue
                if s[start[nxt] + active_len] == c:
                    if last_new != -1 and active_node != 0:
                        link[last_new] = active_node
                        last_new = -1
                    active_len += 1
                    break
                split = new_node(start[nxt], start[nxt] + active_len)
                children[active_node][edge_sym] = split
                children[split][c] = new_node(i, size)
                start[nxt] += active_len
                children[split][s[start[nxt]]] = nxt
                if last_new != -1:
                    link[last_new] = split
                last_new = split
            remainder -= 1
            if active_node == 0 and active_len > 0:
                active_len -= 1
                active_edge = i - remainder + 1
            elif active_node != 0:
                active_node = link[active_node]
    return start, end, link, children


def suffix_array(s) -> np.ndarray:
    """0-based suffix array by prefix doubling; ``s`` must end with a unique minimum."""
    s = np.asarray(s, dtype=np.int64)
    size = len(s)
    _, rank = np.unique(s, return_inverse=True)
    rank = rank.astype(np.int64)
    step = 1
    while True:
        second = np.full(size, -1, dtype=np.int64)
        second[: size - step] = rank[step:]
        order = np.lexsort((second, rank))
        pairs_r, pairs_s = rank[order], second[order]
        bumps = np.concatenate(([0], ((pairs_r[1:] != pairs_r[:-1]) | (pairs_s[1:] != pairs_s[:-1])).astype(np.int64)))
        new_rank = np.empty(size, dtype=np.int64)
        new_rank[order] = np.cumsum(bumps)
        rank = new_rank
        if rank.max() == size - 1:
            return order
        step *= 2


def lcp_kasai(s, sa) -> np.ndarray:
    """``lcp[r]`` = longest common prefix of suffixes ``sa[r-1]`` and ``sa[r]`` (``lcp[0] = 0``)."""
    s = list(s)
    size = len(s)
    rank = [0] * size
    for r, p in enumerate(sa):
        rank[p] = r
    lcp = [0] * size
    h = 0
    for p in range(size):
        r = rank[p]
        if r == 0:
            h = 0
            continue
        q = sa[r - 1]
        while p + h < size and q + h < size and s[p + h] == s[q + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.array(lcp, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class SuffixTree:
    n: int
    rev: np.ndarray  # reversed text followed by SENTINEL_ID
    parent: np.ndarray
    depth: np.ndarray  # string depth sd
    tree_depth: np.ndarray
    edge_start: np.ndarray
    leaf_number: np.ndarray  # 1..n+1 on leaves, 0 on internal nodes
    slink: np.ndarray  # -1 at the root
    child_start: np.ndarray
    child_count: np.ndarray
    sa: np.ndarray  # leaf numbers in lexicographic order (1-based values)
    sa_lo: np.ndarray  # 1-based inclusive suffix-array interval
    sa_hi: np.ndarray
    preorder: np.ndarray
    pre_index: np.ndarray
    subtree_size: np.ndarray
    symbol_rank: np.ndarray  # child-order rank per symbol id

    root = 0

    @property
    def k(self) -> int:
        return len(self.parent)

    def __len__(self):
        return self.k

    @cached_property
    def ibfs(self) -> np.ndarray:
        return self.k - 1 - np.arange(self.k, dtype=np.int64)

    @cached_property
    def is_leaf(self) -> np.ndarray:
        return self.child_count == 0

    @cached_property
    def first_symbol(self) -> np.ndarray:
        out = np.full(self.k, SENTINEL_ID, dtype=np.int64)
        out[1:] = self.rev[self.edge_start[1:]]
        return out

    @cached_property
    def rep(self) -> np.ndarray:
        """0-based start in ``rev`` of one suffix below each node (the leftmost leaf)."""
        return self.sa[self.sa_lo - 1] - 1

    @cached_property
    def occurrence_count(self) -> np.ndarray:
        return self.sa_hi - self.sa_lo + 1

    @cached_property
    def leaf_offset(self) -> np.ndarray:
        """For leaves, the prefix length ``j = n - ln + 1`` of the text it spells.

        The sentinel-only leaf gets -1: it spells no nonempty substring and is
        never counted as (y, d)-good. Internal nodes get 0 (unused).
        """
        j = np.zeros(self.k, dtype=np.int64)
        leaves = self.is_leaf
        j[leaves] = self.n - self.leaf_number[leaves] + 1
        j[leaves & (self.leaf_number == self.n + 1)] = -1
        return j

    @cached_property
    def leftmin_defined(self) -> np.ndarray:
        ok = self.first_symbol != SENTINEL_ID
        ok[0] = False
        return ok

    @cached_property
    def right_target(self) -> np.ndarray:
        """Node at or below ``slink(u, sd(parent(u)) + 1)``; -1 where Left-min is undefined."""
        out = np.full(self.k, -1, dtype=np.int64)
        for u in np.flatnonzero(self.leftmin_defined):
            p = self.parent[u]
            out[u] = 0 if p == 0 else slink_locus(self, int(u), int(self.depth[p]) + 1).node
        return out

    @cached_property
    def all_leaf_children(self) -> np.ndarray:
        out = np.zeros(self.k, dtype=bool)
        leaves = self.is_leaf
        internal = np.flatnonzero(~leaves)
        bad = np.zeros(self.k, dtype=bool)
        nonleaf_child = np.flatnonzero(~leaves)[1:]
        bad[self.parent[nonleaf_child]] = True
        out[internal] = ~bad[internal]
        return out

    @cached_property
    def range_top2(self) -> RangeTop2:
        return RangeTop2(self.sa)

    @cached_property
    def second_leaf(self) -> np.ndarray:
        """Second-largest leaf number below each node; -1 for leaves."""
        _, second = self.range_top2.top2_many(self.sa_lo, self.sa_hi, missing=-1)
        return second

    def children(self, u: int) -> range:
        s = int(self.child_start[u])
        return range(s, s + int(self.child_count[u]))

    def child(self, u: int, symbol: int) -> int | None:
        s, c = int(self.child_start[u]), int(self.child_count[u])
        if c == 0:
            return None
        keys = self.order_key(self.first_symbol[s : s + c])
        at = int(np.searchsorted(keys, self.order_key(symbol)))
        if at < c and self.first_symbol[s + at] == symbol:
            return s + at
        return None

    def order_key(self, symbols):
        """Child-order key: sentinel first, then symbols by display token."""
        symbols = np.asarray(symbols)
        return np.where(symbols < 0, -1, self.symbol_rank[np.maximum(symbols, 0)])

    def label(self, u: int, t: int | None = None) -> tuple[int, ...]:
        """``L(u, t)`` over the reversed text (sentinel shown as -1)."""
        if t is None:
            t = int(self.depth[u])
        r = int(self.rep[u])
        return tuple(int(c) for c in self.rev[r : r + t])

    def leaves_below(self, u: int) -> np.ndarray:
        return self.sa[self.sa_lo[u] - 1 : self.sa_hi[u]]

    def end_positions(self, u: int) -> list[int]:
        """1-based end positions in the text of the substring ``L(u)^rev``."""
        lns = self.leaves_below(u)
        return sorted(int(self.n - ln + 1) for ln in lns if ln <= self.n)

    def find(self, rev_string) -> Locus | None:
        """Locus of a string over the reversed text, or None if absent."""
        node, matched = 0, 0
        rev_string = list(rev_string)
        if not rev_string:
            return Locus(0, 0)
        while matched < len(rev_string):
            nxt = self.child(node, rev_string[matched])
            if nxt is None:
                return None
            lo = self.edge_start[nxt]
            length = int(self.depth[nxt] - self.depth[node])
            for k in range(length):
                if matched == len(rev_string):
                    break
                if self.rev[lo + k] != rev_string[matched]:
                    return None
                matched += 1
            node = nxt
        return Locus(node, len(rev_string))

    def signature(self) -> tuple:
        """Shape fingerprint independent of the construction algorithm."""
        return (
            tuple(self.parent.tolist()),
            tuple(self.depth.tolist()),
            tuple(self.leaf_number.tolist()),
            tuple(self.slink.tolist()),
        )


def _finalize(rev: np.ndarray, n: int, symbol_rank, edge_start, depth, children, slink=None) -> SuffixTree:
    """Renumber a raw tree (root at raw id 0) into BFS order and derive all arrays."""

    def first(c):
        sym = rev[edge_start[c]]
        return -1 if sym < 0 else symbol_rank[sym]

    order = [0]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        order.extend(sorted(children[u], key=first))
    k = len(order)
    new_id = {raw: i for i, raw in enumerate(order)}

    parent = np.full(k, -1, dtype=np.int64)
    sd = np.zeros(k, dtype=np.int64)
    es = np.full(k, -1, dtype=np.int64)
    child_start = np.zeros(k, dtype=np.int64)
    child_count = np.zeros(k, dtype=np.int64)
    leaf_number = np.zeros(k, dtype=np.int64)
    tree_depth = np.zeros(k, dtype=np.int64)
    for i, raw in enumerate(order):
        sd[i] = depth[raw]
        if i:
            es[i] = edge_start[raw]
        kids = children[raw]
        child_count[i] = len(kids)
        if kids:
            child_start[i] = new_id[min(kids, key=lambda c: new_id[c])]
            for c in kids:
                parent[new_id[c]] = i
                tree_depth[new_id[c]] = tree_depth[i] + 1
        else:
            leaf_number[i] = len(rev) - sd[i] + 1

    # preorder: children in sorted (= id) order
    preorder = np.empty(k, dtype=np.int64)
    stack = [0]
    at = 0
    while stack:
        u = stack.pop()
        preorder[at] = u
        at += 1
        s, c = child_start[u], child_count[u]
        stack.extend(range(s + c - 1, s - 1, -1))
    pre_index = np.empty(k, dtype=np.int64)
    pre_index[preorder] = np.arange(k)

    is_leaf = child_count == 0
    sa = leaf_number[preorder[is_leaf[preorder]]]
    leaf_rank = np.zeros(k, dtype=np.int64)
    leaf_rank[preorder[is_leaf[preorder]]] = np.arange(1, len(sa) + 1)
    sa_lo = leaf_rank.copy()
    sa_hi = leaf_rank.copy()
    subtree_size = np.ones(k, dtype=np.int64)
    for u in range(k - 1, -1, -1):
        if not is_leaf[u]:
            s, c = child_start[u], child_count[u]
            sa_lo[u] = sa_lo[s]
            sa_hi[u] = sa_hi[s + c - 1]
            subtree_size[u] = 1 + subtree_size[s : s + c].sum()

    link = np.full(k, -1, dtype=np.int64)
    leaf_of = {int(leaf_number[u]): u for u in np.flatnonzero(is_leaf)}
    for u in np.flatnonzero(is_leaf):
        ln = int(leaf_number[u])
        link[u] = leaf_of[ln + 1] if ln < len(rev) else 0
    if slink is not None:
        for i, raw in enumerate(order):
            if i and not is_leaf[i]:
                link[i] = new_id[slink[raw]]
    else:
        for u in np.flatnonzero(~is_leaf):
            if u == 0:
                continue
            # walk up from the leaf of the next suffix to depth sd(u) - 1
            v = leaf_of[int(sa[sa_lo[u] - 1]) + 1]
            while sd[v] > sd[u] - 1:
                v = parent[v]
            link[u] = v

    return SuffixTree(
        n=n,
        rev=rev,
        parent=parent,
        depth=sd,
        tree_depth=tree_depth,
        edge_start=es,
        leaf_number=leaf_number,
        slink=link,
        child_start=child_start,
        child_count=child_count,
        sa=sa,
        sa_lo=sa_lo,
        sa_hi=sa_hi,
        preorder=preorder,
        pre_index=pre_index,
        subtree_size=subtree_size,
        symbol_rank=symbol_rank,
    )


def _reversed_with_sentinel(cs: ColoredString) -> np.ndarray:
    rev = np.empty(cs.n + 1, dtype=np.int64)
    rev[: cs.n] = cs.text[::-1]
    rev[cs.n] = SENTINEL_ID
    rev.setflags(write=False)
    return rev


def build(cs: ColoredString) -> SuffixTree:
    """Suffix tree of ``reverse(text) + $`` via Ukkonen's algorithm."""
    rev = _reversed_with_sentinel(cs)
    start, end, link, children = _ukkonen(rev.tolist())
    raw = len(start)
    depth = [0] * raw
    stack = [0]
    while stack:
        u = stack.pop()
        for c in children[u].values():
            depth[c] = depth[u] + end[c] - start[c]
            stack.append(c)
    kids = [list(ch.values()) for ch in children]
    return _finalize(rev, cs.n, cs.symbol_rank(), start, depth, kids, slink=link)


def build_from_suffix_array(cs: ColoredString) -> SuffixTree:
    """Same tree assembled from the suffix array and LCP array (validation path)."""
    rev = _reversed_with_sentinel(cs)
    size = len(rev)
    sa = suffix_array(rev)
    lcp = lcp_kasai(rev.tolist(), sa)
    edge_start, depth, children, parent = [-1], [0], [[]], [-1]

    def new_node(es, d, par):
        edge_start.append(es)
        depth.append(d)
        children.append([])
        parent.append(par)
        return len(depth) - 1

    path = [0]
    for r, p in enumerate(sa):
        h = int(lcp[r])
        popped = -1
        while depth[path[-1]] > h:
            popped = path.pop()
        top = path[-1]
        if depth[top] < h:
            mid = new_node(edge_start[popped], h, top)
            children[top][children[top].index(popped)] = mid
            children[mid].append(popped)
            parent[popped] = mid
            edge_start[popped] += h - depth[top]
            path.append(mid)
            top = mid
        leaf = new_node(int(p) + depth[top], size - int(p), top)
        children[top].append(leaf)
        path.append(leaf)
    return _finalize(rev, cs.n, cs.symbol_rank(), edge_start, depth, children)


def slink_locus(st: SuffixTree, u: int, t: int) -> Locus:
    """Locus of ``L(u, t)`` with its first symbol removed."""
    if u == st.root:
        raise InvalidLocus("the root has no loci")
    p = int(st.parent[u])
    if not int(st.depth[p]) < t <= int(st.depth[u]):
        raise InvalidLocus(f"depth {t} not on the edge into node {u}")
    target = t - 1
    if target == 0:
        return Locus(st.root, 0)
    if p == st.root:
        node, matched = st.root, 0
    else:
        node = int(st.slink[p])
        matched = int(st.depth[node])
    pos = int(st.rep[u]) + 1  # L(u)[1:] starts here in rev
    while True:
        nxt = st.child(node, int(st.rev[pos + matched]))
        if nxt is None:
            raise InvalidLocus("suffix link target missing (corrupt tree)")
        if st.depth[nxt] >= target:
            return Locus(nxt, target)
        node, matched = nxt, int(st.depth[nxt])


def left_min_label(st: SuffixTree, u: int) -> tuple[int, ...] | None:
    """``x1 . L(parent(u))^rev`` as symbol ids in text order; None on a sentinel edge."""
    if u == st.root:
        raise RootHasNoLabel("Left-min is undefined at the root")
    if not st.leftmin_defined[u]:
        return None
    t = int(st.depth[st.parent[u]]) + 1
    return st.label(u, t)[::-1]


def second_largest_leaf(st: SuffixTree, u: int) -> int | None:
    value = int(st.second_leaf[u])
    return None if value < 0 else value


def ibfs_order(st: SuffixTree) -> np.ndarray:
    return st.ibfs


def to_dot(st: SuffixTree, cs: ColoredString | None = None) -> str:
    """Graphviz dump annotated with sd, ln and iBFS."""

    def sym(c):
        if c == SENTINEL_ID:
            return "$"
        return cs.symbol_names[c] if cs is not None else str(c)

    lines = ["digraph suffix_tree {", "  node [shape=box, fontsize=10];"]
    for u in range(st.k):
        attrs = f"iBFS={st.ibfs[u]}\\nsd={st.depth[u]}"
        if st.is_leaf[u]:
            attrs += f"\\nln={st.leaf_number[u]}"
        lines.append(f'  n{u} [label="{attrs}"];')
    for u in range(1, st.k):
        p = int(st.parent[u])
        lo = int(st.edge_start[u])
        text = "".join(sym(c) for c in st.rev[lo : lo + int(st.depth[u] - st.depth[p])])
        lines.append(f'  n{p} -> n{u} [label="{text}"];')
    for u in range(1, st.k):
        if st.slink[u] >= 0:
            lines.append(f"  n{u} -> n{st.slink[u]} [style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"
