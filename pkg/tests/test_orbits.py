import numpy as np
import pytest

from holocorr.errors import BudgetExceededError
from holocorr.orbits import DEDUP, EXACT, expand, iter_levels, limit_set, render
from holocorr.sphere import chordal


def test_exact_level_sizes(squaring):
    levels = expand(squaring, 1, 6, EXACT)
    assert [len(L) for L in levels] == [2**n for n in range(7)]
    assert all(L.summable for L in levels)
    # parent pointers: every child is a forward image of its parent
    L3, L2 = levels[3], levels[2]
    assert np.allclose(L3.points**2, L2.points[L3.parent])


def test_exact_weights_on_circle(squaring):
    for L in iter_levels(squaring, 1, 8):
        assert np.allclose(L.weights, 0.5**L.depth)


def test_budget(squaring):
    with pytest.raises(BudgetExceededError):
        expand(squaring, 1, 30, EXACT, node_budget=1e6)


def test_dedup_levels_are_thinned(squaring):
    levels = expand(squaring, 2, 25, DEDUP, grid_res=1e-2)
    last = levels[-1]
    assert not last.summable
    d = chordal(last.points[:, None], last.points[None, :])
    np.fill_diagonal(d, 9)
    assert d.min() >= 1e-2 * (1 - 1e-9)


def test_limit_set_circle(squaring):
    cloud = limit_set(squaring, 2, 30, burn_in=10, grid_res=1e-3)
    assert np.max(np.abs(np.abs(cloud.finite) - 1)) < 2e-3
    assert len(cloud) > 1000


def test_limit_set_reaches_parabolic_point(cauliflower):
    # convergence towards 1/2 is polynomial, so this needs many dedup levels
    cloud = limit_set(cauliflower, 3, 200, grid_res=1e-2)
    assert np.min(chordal(cloud.points, 0.5)) < 1e-2


def test_limit_set_rejects_bad_burn_in(squaring):
    with pytest.raises(ValueError):
        limit_set(squaring, 2, 5, burn_in=5)


def test_render_orientation(squaring):
    from holocorr.cloud import PointCloud

    cloud = PointCloud.from_points([0.9 + 0.9j], 1e-3)
    img = render(cloud, (-1, 1, -1, 1), (4, 4))
    assert img.shape == (4, 4)
    assert img[0, 3] == 255 and img.sum() == 255  # top-right pixel


def test_thread_count_does_not_change_levels(squaring):
    a = list(iter_levels(squaring, 0.3 + 0.7j, 17, threads=1))[-1]
    b = list(iter_levels(squaring, 0.3 + 0.7j, 17, threads=4))[-1]
    assert np.array_equal(a.points, b.points) and np.array_equal(a.logw, b.logw)
