import numpy as np
import pytest
from hypothesis import given

from colorminer import suffix_tree as T
from colorminer.core import from_strings
from conftest import colored_strings

# (label over the reversed text, iBFS) for the running example; "$" marks the sentinel
RUNNING_IBFS = {
    "": 17, "$": 16, "a": 15, "b": 14, "ca": 13, "a$": 12, "abcacaca$": 11, "aca": 10,
    "bacabcacaca$": 9, "bcacaca$": 8, "ca$": 7, "cabcacaca$": 6, "caca": 5, "aca$": 4,
    "acabcacaca$": 3, "acaca$": 2, "caca$": 1, "cacaca$": 0,
}


def _label(cs, st, u):
    return "".join("$" if c < 0 else cs.symbol_names[c] for c in st.label(u))


def test_running_example_shape(running, running_tree):
    st = running_tree
    assert st.k == 18
    assert {_label(running, st, u): int(st.ibfs[u]) for u in range(st.k)} == RUNNING_IBFS


def test_running_example_node_aca(running, running_tree):
    st = running_tree
    u = st.find(running.symbol_ids("aca")).node
    assert st.ibfs[u] == 10
    assert sorted(st.leaves_below(u).tolist()) == [2, 7, 9]
    assert st.ibfs[st.right_target[u]] == 13
    assert running.format_pattern(T.left_min_label(st, u)) == "ca"
    assert T.second_largest_leaf(st, u) == 7
    assert st.end_positions(u) == [3, 5, 10]


def test_ibfs_order_is_parent_first(running_tree):
    st = running_tree
    ibfs = T.ibfs_order(st)
    assert ibfs[st.root] == st.k - 1
    assert all(ibfs[st.parent[u]] > ibfs[u] for u in range(1, st.k))


def test_left_min_label_rules(running_tree):
    st = running_tree
    with pytest.raises(T.RootHasNoLabel):
        T.left_min_label(st, st.root)
    sentinel_leaf = st.child(st.root, T.SENTINEL_ID)
    assert T.left_min_label(st, sentinel_leaf) is None
    assert T.second_largest_leaf(st, sentinel_leaf) is None


def test_slink_locus_errors(running, running_tree):
    st = running_tree
    u = st.find(running.symbol_ids("aca")).node
    with pytest.raises(T.InvalidLocus):
        T.slink_locus(st, st.root, 1)
    with pytest.raises(T.InvalidLocus):
        T.slink_locus(st, u, 1)  # depth 1 is the parent itself


def test_dot_dump(running, running_tree):
    dot = T.to_dot(running_tree, running)
    assert dot.startswith("digraph")
    assert dot.count("iBFS=") == 18
    assert 'label="ca"' in dot


def _naive_count(seq, pattern):
    m = len(pattern)
    return sum(1 for i in range(len(seq) - m + 1) if seq[i : i + m] == pattern)


@given(colored_strings(max_n=30, max_sigma=4))
def test_ukkonen_matches_suffix_array_builder(cs):
    a = T.build(cs)
    b = T.build_from_suffix_array(cs)
    assert a.signature() == b.signature()


@given(colored_strings(max_n=30, max_sigma=4))
def test_tree_invariants(cs):
    st = T.build(cs)
    rev = st.rev.tolist()
    size = cs.n + 1
    assert st.is_leaf.sum() == size
    assert sorted(st.leaf_number[st.is_leaf].tolist()) == list(range(1, size + 1))
    internal = np.flatnonzero(~st.is_leaf)
    assert (st.child_count[internal[1:]] >= 2).all()
    # suffix array over the leaves matches a direct sort
    assert (st.sa - 1).tolist() == sorted(range(size), key=lambda i: rev[i:])
    assert (T.suffix_array(rev) == st.sa - 1).all()
    for u in range(1, st.k):
        label = list(st.label(u))
        assert st.find(label) == T.Locus(u, len(label))
        assert st.occurrence_count[u] == _naive_count(rev, label)
        assert st.depth[u] > st.depth[st.parent[u]]
        assert st.tree_depth[u] == st.tree_depth[st.parent[u]] + 1


@given(colored_strings(max_n=25, max_sigma=3))
def test_suffix_links_drop_first_symbol(cs):
    st = T.build(cs)
    for u in range(1, st.k):
        for t in range(int(st.depth[st.parent[u]]) + 1, int(st.depth[u]) + 1):
            loc = T.slink_locus(st, u, t)
            expect = st.find(st.label(u, t)[1:])
            assert loc == expect
        if st.slink[u] >= 0:
            assert st.label(int(st.slink[u])) == st.label(u)[1:]


@given(colored_strings(max_n=25, max_sigma=3))
def test_second_leaf_and_targets(cs):
    st = T.build(cs)
    for u in range(1, st.k):
        leaves = sorted(st.leaves_below(u).tolist(), reverse=True)
        assert T.second_largest_leaf(st, u) == (leaves[1] if len(leaves) > 1 else None)
        if st.leftmin_defined[u]:
            p = int(st.parent[u])
            want = st.find(st.label(u, int(st.depth[p]) + 1)[1:]).node
            assert st.right_target[u] == want


def test_children_follow_display_order():
    # symbol ids by first appearance are c=0, a=1, b=2; children still go $, a, b, c
    cs = from_strings("cab", "xyx")
    st = T.build(cs)
    firsts = [int(st.first_symbol[v]) for v in st.children(st.root)]
    assert firsts == [T.SENTINEL_ID] + [cs.symbol_ids(s)[0] for s in "abc"]
