import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rrtplus.cspace import ConfigSpace, DimensionError, contains, distance, interpolate, path_length

unit2 = ConfigSpace.uniform(2, 0.0, 1.0)


@pytest.mark.parametrize(
    "q, expected",
    [((0.5, 0.5), True), ((1.5, 0.0), False), ((1.0, 1.0), True), ((0.0, 0.0), True),
     ((-1e-15, 0.5), False)],
)
def test_contains(q, expected):
    assert contains(unit2, q) is expected
    assert unit2.contains(q) is expected


def test_contains_dimension_mismatch():
    with pytest.raises(DimensionError):
        contains(unit2, (0.5, 0.5, 0.5))


def test_space_validation():
    with pytest.raises(ValueError):
        ConfigSpace(np.array([0.0]), np.array([0.0]))
    with pytest.raises(DimensionError):
        ConfigSpace(np.zeros(2), np.ones(3))
    space = ConfigSpace.from_bounds([(-1, 1), (0, 2)])
    assert space.n == 2
    assert space.bounds == [(-1.0, 1.0), (0.0, 2.0)]
    np.testing.assert_array_equal(space.extent, [2.0, 2.0])
    with pytest.raises(ValueError):
        space.lower[0] = 5.0


def test_distance_examples():
    assert distance((0, 0), (3, 4)) == 5.0
    a = np.array([0.3, -2.0, 7.0])
    assert distance(a, a) == 0.0
    assert distance((1, 2, 3), (1, 2, 3.5)) == 0.5
    with pytest.raises(DimensionError):
        distance((0, 0), (1, 1, 1))


def test_interpolate_examples():
    np.testing.assert_array_equal(interpolate((0, 0), (2, 2), 0.5), (1, 1))
    a, b = np.array([0.1, 0.7]), np.array([0.3, -0.2])
    np.testing.assert_array_equal(interpolate(a, b, 0.0), a)
    np.testing.assert_array_equal(interpolate(a, b, 1.0), b)
    with pytest.raises(ValueError):
        interpolate(a, b, 1.5)


finite = st.floats(-100, 100, allow_nan=False)


@given(st.lists(finite, min_size=3, max_size=3), st.lists(finite, min_size=3, max_size=3))
def test_distance_is_symmetric(a, b):
    assert distance(a, b) == pytest.approx(distance(b, a), abs=0, rel=1e-15)


@given(st.lists(finite, min_size=2, max_size=2), st.lists(finite, min_size=2, max_size=2),
       st.floats(0, 1))
def test_interpolate_lies_on_segment(a, b, s):
    q = interpolate(a, b, s)
    d = distance(a, b)
    assert distance(a, q) + distance(q, b) == pytest.approx(d, abs=1e-9 * (1 + d))


def test_path_length():
    assert path_length([]) == 0.0
    assert path_length([np.zeros(2)]) == 0.0
    assert path_length([np.zeros(2), np.array([3.0, 4.0]), np.array([3.0, 5.0])]) == 6.0
