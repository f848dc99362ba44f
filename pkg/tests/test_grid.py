import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from loggabor.grid import (GridShape, MemoryBudgetError, axis_scale, check_budget,
                           inverse_log_freq_map, log_freq_map)

odd_n = st.integers(1, 600).map(lambda i: 2 * i + 1)


def test_axis_scale_values():
    # 40-digit mpmath evaluations of (N-1)/(2 ln((N+1)/2))
    assert axis_scale(101) == pytest.approx(12.7167389072021132, rel=1e-15)
    assert axis_scale(3) == pytest.approx(1.44269504088896341, rel=1e-15)


@pytest.mark.parametrize("N", [0, 1, 2, 4, 100, -3, 2.5])
def test_axis_scale_rejects(N):
    with pytest.raises(ValueError):
        axis_scale(N)


@given(odd_n)
def test_axis_scale_identity(N):
    assert axis_scale(N) * math.log((N + 1) / 2) == pytest.approx((N - 1) / 2, rel=1e-12)


def test_grid_shape():
    g = GridShape(2, 5)
    assert g.dims == (5, 5)
    assert list(g.axis()) == [-2, -1, 0, 1, 2]
    pts = g.points()
    assert pts.shape == (5, 5, 2)
    assert tuple(pts[0, 4]) == (-2, 2)
    assert tuple(pts[g.origin()]) == (0, 0)
    with pytest.raises(ValueError):
        GridShape(0, 5)
    with pytest.raises(ValueError):
        GridShape(2, 6)


def test_budget():
    check_budget(GridShape(3, 101))
    with pytest.raises(MemoryBudgetError):
        check_budget(GridShape(3, 101), max_elements=10**5)
    with pytest.raises(MemoryBudgetError):
        GridShape(6, 101).points()


def test_log_freq_map_examples():
    assert np.array_equal(log_freq_map((0, 0), 101), [0.0, 0.0])
    # s(101) * (0.6, 0.8) * ln 6, evaluated with mpmath
    np.testing.assert_allclose(log_freq_map((3, 4), 101),
                               [13.6712024128081288, 18.2282698837441717], rtol=1e-14)
    np.testing.assert_allclose(log_freq_map((50, 0), 101), [50.0, 0.0], rtol=1e-14)


def test_boundary_fixpoint_all_axes():
    N = 31
    for D in (1, 2, 3):
        for i in range(D):
            for sign in (-1, 1):
                k = np.zeros(D)
                k[i] = sign * (N - 1) / 2
                np.testing.assert_allclose(log_freq_map(k, N), k, rtol=1e-13)


vec = st.lists(st.integers(-200, 200), min_size=1, max_size=4)


@given(vec, odd_n)
def test_direction_preserved(k, N):
    m = log_freq_map(k, N)
    k = np.asarray(k, float)
    if not k.any():
        assert not m.any()
        return
    c = np.dot(m, k) / np.dot(k, k)
    assert c > 0
    np.testing.assert_allclose(m, c * k, atol=1e-12 * np.linalg.norm(m))


@given(vec, st.integers(2, 5), odd_n)
def test_monotone_along_ray(k, factor, N):
    k = np.asarray(k)
    if not k.any():
        return
    assert np.linalg.norm(log_freq_map(k, N)) < np.linalg.norm(log_freq_map(factor * k, N))


def test_norm_depends_only_on_radius():
    # (5,0), (3,4), (0,-5), (-4,3) share |k| = 5
    norms = [np.linalg.norm(log_freq_map(k, 21)) for k in [(5, 0), (3, 4), (0, -5), (-4, 3)]]
    assert np.ptp(norms) < 1e-13


def test_wrapped_points_accepted():
    m = log_freq_map((3 + 101, -101), 101)
    assert np.all(np.isfinite(m))


def test_vectorized_matches_pointwise():
    g = GridShape(2, 7)
    pts = g.points()
    m = log_freq_map(pts, 7)
    for idx in [(0, 0), (3, 3), (6, 1)]:
        np.testing.assert_array_equal(m[idx], log_freq_map(pts[idx], 7))


@given(vec, odd_n)
def test_inverse_map(k, N):
    np.testing.assert_allclose(inverse_log_freq_map(log_freq_map(k, N), N), k,
                               rtol=1e-9, atol=1e-9)
