import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import nearest_brute
from rrtplus.nn import KdNnIndex, NnIndex, make_index

KINDS = ["linear", "kdtree"]


@pytest.mark.parametrize("kind", KINDS)
def test_singleton(kind):
    idx = make_index(kind, 3)
    idx.insert(np.array([0.5, 0.5, 0.5]), 7)
    assert idx.nearest(np.array([-3.0, 2.0, 9.0])) == 7


@pytest.mark.parametrize("kind", KINDS)
def test_collinear_midpoint(kind):
    idx = make_index(kind, 2)
    for i, x in enumerate([0.0, 1.0, 2.0]):
        idx.insert(np.array([x, 0.0]), i)
    assert idx.nearest(np.array([1.0, 0.0])) == 1


@pytest.mark.parametrize("kind", KINDS)
def test_small_examples(kind):
    idx = make_index(kind, 2)
    idx.insert(np.array([0.0, 0.0]), 0)
    idx.insert(np.array([1.0, 1.0]), 1)
    assert idx.nearest(np.array([0.1, 0.1])) == 0
    # equidistant: lower id wins
    assert idx.nearest(np.array([0.5, 0.5])) == 0
    idx2 = make_index(kind, 1)
    idx2.insert(np.array([2.0]), 5)
    idx2.insert(np.array([0.0]), 3)
    assert idx2.nearest(np.array([1.0])) == 3


@pytest.mark.parametrize("kind", KINDS)
def test_size_and_errors(kind):
    idx = make_index(kind, 4)
    with pytest.raises(LookupError):
        idx.nearest(np.zeros(4))
    rng = np.random.default_rng(0)
    for i in range(10_000):
        idx.insert(rng.random(4), i)
    assert len(idx) == 10_000
    with pytest.raises(KeyError):
        idx.insert(np.zeros(4), 3)


def test_unknown_kind():
    with pytest.raises(ValueError):
        make_index("ball-tree", 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 300), st.integers(0, 2**31))
def test_linear_matches_brute_force(dim, count, seed):
    rng = np.random.default_rng(seed)
    # coarse grid so exact ties are common
    pts = rng.integers(0, 4, (count, dim)).astype(float)
    idx = NnIndex(dim, capacity=2)
    for i, p in enumerate(pts):
        idx.insert(p, i)
    for q in rng.integers(0, 4, (20, dim)).astype(float) + 0.5 * rng.integers(0, 2, (20, dim)):
        assert idx.nearest(q) == nearest_brute(pts, q)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 400), st.integers(0, 2**31))
def test_kdtree_matches_linear(dim, count, seed):
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, 3, (count, dim)).astype(float)
    lin, kd = NnIndex(dim), KdNnIndex(dim, min_buffer=8)
    for i, p in enumerate(pts):
        lin.insert(p, i)
        kd.insert(p, i)
        if i % 37 == 0:
            q = rng.random(dim) * 3
            assert kd.nearest(q) == lin.nearest(q)
    for q in rng.integers(0, 3, (30, dim)) + 0.5 * rng.integers(0, 2, (30, dim)):
        assert kd.nearest(q.astype(float)) == lin.nearest(q.astype(float))
