import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from colorminer.core import ColorOutOfRange, OutOfRange
from colorminer.structures import (
    ColorBitvector,
    DemoteIncrease,
    DuplicateInsert,
    IndexedMaxPQ,
    RangeTop2,
    build_color_bitvector,
    range_top2,
)


def test_running_example_bitvector(running, y):
    bv = build_color_bitvector(running, y)
    assert len(bv) == 22
    assert [bv[i] for i in range(1, 12)] == [0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0]
    assert all(bv[i] == 1 for i in range(12, 23))
    assert bv.rank1(8) == 3
    assert bv.select1(3) == 8


def test_bitvector_bad_color(running):
    with pytest.raises(ColorOutOfRange):
        build_color_bitvector(running, 3)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=200))
def test_rank_select_laws(bits):
    bv = ColorBitvector(bits)
    ones = sum(bits)
    assert bv.ones() == ones
    for k in range(1, ones + 1):
        p = bv.select1(k)
        assert bv[p] == 1
        assert bv.rank1(p) == k
    for i in range(len(bits) + 1):
        assert bv.rank1(i) == sum(bits[:i])
        if bv.rank1(i):
            assert bv.select1(bv.rank1(i)) <= i


def test_bitvector_bounds():
    bv = ColorBitvector([1, 0, 1])
    for bad in (-1, 4):
        with pytest.raises(OutOfRange):
            bv.rank1(bad)
    for bad in (0, 3):
        with pytest.raises(OutOfRange):
            bv.select1(bad)
    with pytest.raises(OutOfRange):
        bv[0]


def test_pq_tie_goes_to_larger_index():
    pq = IndexedMaxPQ(4)
    for i in range(4):
        pq.insert(i, 7)
    assert pq.max() == (3, 7)
    pq.demote(3, 2)
    assert pq.max() == (2, 7)


def test_pq_errors():
    pq = IndexedMaxPQ(3)
    pq.insert(1, 5)
    with pytest.raises(DuplicateInsert):
        pq.insert(1, 2)
    with pytest.raises(DemoteIncrease):
        pq.demote(1, 6)
    with pytest.raises(KeyError):
        pq.demote(0, 1)
    with pytest.raises(OutOfRange):
        pq.insert(3, 0)
    with pytest.raises(IndexError):
        IndexedMaxPQ(2).max()


def test_pq_all_negative():
    pq = IndexedMaxPQ(2)
    assert pq.all_negative()
    pq.insert(0, 0)
    pq.insert(1, -1)
    assert not pq.all_negative()
    pq.demote(0, -3)
    assert pq.all_negative()


def test_pq_matches_naive_model():
    rng = random.Random(7)
    cap = 200
    pq = IndexedMaxPQ(cap)
    model: dict[int, int] = {}
    for _ in range(100_000):
        op = rng.random()
        i = rng.randrange(cap)
        if op < 0.3 and i not in model:
            key = rng.randint(-5, 1000)
            pq.insert(i, key)
            model[i] = key
        elif model:
            j = rng.choice(list(model)) if op < 0.9 else i
            if j in model:
                new = model[j] - rng.randint(0, 50)
                pq.demote(j, new)
                model[j] = new
        if model:
            best = max(model.items(), key=lambda kv: (kv[1], kv[0]))
            assert pq.max() == best
            assert pq.all_negative() == (best[1] < 0)


@given(st.lists(st.integers(-1000, 1000), min_size=1, max_size=60), st.data())
def test_range_top2_matches_scan(values, data):
    rt = RangeTop2(values)
    lo = data.draw(st.integers(1, len(values)))
    hi = data.draw(st.integers(lo, len(values)))
    window = sorted(values[lo - 1 : hi], reverse=True)
    first, second = range_top2(rt, lo, hi)
    assert first == window[0]
    assert second == (window[1] if len(window) > 1 else None)
    assert values[rt.argmax(lo, hi) - 1] == window[0]


def test_range_top2_ten_thousand_cases():
    rng = np.random.default_rng(3)
    values = rng.integers(-500, 500, size=300)
    rt = RangeTop2(values)
    lo = rng.integers(1, 301, size=10_000)
    hi = np.array([rng.integers(a, 301) for a in lo])
    first, second = rt.top2_many(lo, hi, missing=-10**9)
    for a, b, f, s in zip(lo, hi, first, second):
        window = sorted(values[a - 1 : b], reverse=True)
        assert f == window[0]
        assert s == (window[1] if b > a else -10**9)


def test_range_top2_bounds():
    rt = RangeTop2([3, 1])
    with pytest.raises(OutOfRange):
        rt.top2(2, 1)
    with pytest.raises(OutOfRange):
        rt.top2(1, 3)
