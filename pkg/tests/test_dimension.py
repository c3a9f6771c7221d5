import numpy as np
import pytest

from holocorr.cloud import PointCloud
from holocorr.dimension import ReportConfig, box_dimension, hd_delta_report
from holocorr.errors import DegenerateGrowthError


def circle(n=10_000, center=0, r=1.0):
    return center + r * np.exp(2j * np.pi * np.arange(n) / n)


def test_circle():
    est = box_dimension(PointCloud.from_points(circle(), 1e-3))
    assert est.dim == pytest.approx(1.0, abs=0.05)
    assert all(a > b for a, b in zip(est.scales, est.scales[1:]))
    assert all(a <= b for a, b in zip(est.counts, est.counts[1:]))


def test_segment():
    est = box_dimension(PointCloud.from_points(np.linspace(-2, 2, 10_000), 1e-3))
    assert est.dim == pytest.approx(1.0, abs=0.05)


def test_single_point_is_degenerate():
    est = box_dimension(PointCloud.from_points([0.3 + 0.1j], 1e-3))
    assert est.dim == 0 and est.r2 == 0 and est.degenerate


def test_too_few_points():
    with pytest.raises(ValueError):
        box_dimension(PointCloud.from_points(circle(20), 1e-3))


def test_scale_floor():
    with pytest.raises(ValueError):
        box_dimension(PointCloud.from_points(circle(), 1e-3), scale_lo=1e-3)


def test_rotation_invariance():
    base = box_dimension(PointCloud.from_points(circle(), 1e-3)).dim
    # a rotation of the sphere: z -> (z - a) / (1 + conj(a) z)
    a = 0.4 + 0.3j
    z = circle()
    rot = (z - a) / (1 + np.conj(a) * z)
    assert abs(box_dimension(PointCloud.from_points(rot, 1e-3)).dim - base) <= 0.02


def test_subsampling_stability():
    z = circle(20_000)
    full = box_dimension(PointCloud.from_points(z, 1e-3)).dim
    keep = np.random.default_rng(0).random(len(z)) < 0.5
    half = box_dimension(PointCloud.from_points(z[keep], 1e-3)).dim
    assert abs(full - half) <= 0.05


def test_report_squaring(squaring):
    rep = hd_delta_report(squaring, 2, ReportConfig(depth=14))
    assert rep["hd_est"] == pytest.approx(1.0, abs=0.06)
    assert rep["delta_est"] == pytest.approx(1.0, abs=0.01)
    assert rep["inequality_ok"] and rep["delta_lt_2"]


def test_report_propagates_errors(conj):
    with pytest.raises(DegenerateGrowthError):
        hd_delta_report(conj, 0.3 + 0.2j, ReportConfig(depth=8))
