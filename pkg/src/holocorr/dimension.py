"""Box-counting dimension of point clouds and the dimension-versus-exponent report."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .cloud import PointCloud
from .correspondence import Correspondence
from .orbits import limit_set
from .poincare import critical_exponent
from .sphere import SpherePoint, as_complex, to_sphere

MIN_POINTS = 100
#: Grid offset in units of the box side.
GRID_SHIFT = np.array([0.3141, 0.2718, 0.1414])


@dataclass
class DimensionEstimate:
    dim: float
    scales: list
    counts: list
    r2: float
    degenerate: bool = False

    def to_json(self) -> dict:
        return asdict(self)


def box_counts(X: np.ndarray, scales) -> list:
    """Occupied cubes of side ``eps`` for points ``X`` on the unit sphere in R^3.

    The grid origin is fixed, so counts are reproducible. It is shifted off
    the coordinate planes by a fraction of a box so that the equator and
    the meridian circles do not straddle cell faces.
    """
    out = []
    for eps in scales:
        keys = np.floor((X + 1.0) / eps + GRID_SHIFT).astype(np.int64)
        n = int(math.ceil(2.0 / eps)) + 2
        flat = (keys[:, 0] * n + keys[:, 1]) * n + keys[:, 2]
        out.append(int(len(np.unique(flat))))
    return out


def box_dimension(cloud: PointCloud, scale_lo: float | None = None,
                  scale_hi: float | None = None, n_scales: int = 10) -> DimensionEstimate:
    """Least-squares slope of ``log N(eps)`` against ``log(1/eps)``.

    Boxes are cubes in the unit-sphere embedding, so scales are chordal
    lengths. Constant counts (a point, or a cloud far coarser than every
    scale) give ``dim = 0`` with ``r2 = 0`` and ``degenerate = True``.

    By default ``scale_hi`` is a quarter of the cloud's extent (capped at
    0.25) and ``scale_lo`` is four times the larger of its resolution and
    its median nearest-neighbour spacing.
    """
    X = to_sphere(cloud.points)
    if scale_hi is None:
        extent = float(np.max(np.ptp(X, axis=0))) if len(X) else 0.0
        scale_hi = min(0.25, extent / 4)
    if scale_lo is None:
        spacing = 0.0
        if len(X) > 1:
            d, _ = cKDTree(X).query(X, k=2)
            spacing = float(np.median(d[:, 1]))
        scale_lo = 4 * max(cloud.grid_res, spacing)
    if scale_lo < 2 * cloud.grid_res:
        raise ValueError(
            f"scale_lo = {scale_lo} is below twice the cloud resolution {cloud.grid_res}"
        )
    if n_scales < 2:
        raise ValueError("need n_scales >= 2")
    if not 0 < scale_lo < scale_hi:
        # the cloud is too small to resolve: a point as far as counting can tell
        scale_hi = max(scale_hi, 2 * scale_lo)
    scales = np.geomspace(scale_hi, scale_lo, n_scales)
    counts = box_counts(X, scales) if len(X) else [0] * n_scales
    if len(set(counts)) == 1:
        return DimensionEstimate(0.0, scales.tolist(), counts, 0.0, True)
    if len(cloud) < MIN_POINTS:
        raise ValueError(f"box counting needs at least {MIN_POINTS} points, got {len(cloud)}")
    x = np.log(1.0 / scales)
    y = np.log(np.asarray(counts, float))
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    ss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss
    return DimensionEstimate(float(min(max(slope, 0.0), 2.0)), scales.tolist(), counts, r2)


@dataclass
class ReportConfig:
    """Settings for :func:`hd_delta_report`; defaults suit degree-two examples."""

    depth: int = 20
    limit_depth: int | None = None
    burn_in: int | None = None
    grid_res: float = 1e-3
    s_lo: float = 0.25
    s_hi: float = 2.5
    tol: float = 1e-3
    slack: float = 0.1
    scale_lo: float | None = None
    scale_hi: float | None = None
    n_scales: int = 10
    threads: int | None = None
    extra: dict = field(default_factory=dict)


def hd_delta_report(c: Correspondence, x, config: ReportConfig | None = None) -> dict:
    """Box dimension of the forward limit set next to the critical-exponent estimate.

    Box dimension stands in for Hausdorff dimension (it is an upper bound),
    so ``inequality_ok`` asks for ``hd_est <= delta_est + slack``.
    """
    cfg = config or ReportConfig()
    est = critical_exponent(c, x, cfg.s_lo, cfg.s_hi, cfg.tol, cfg.depth, threads=cfg.threads)
    ld = cfg.limit_depth or cfg.depth
    cloud = limit_set(c, x, ld, cfg.burn_in, cfg.grid_res, threads=cfg.threads)
    dim = box_dimension(cloud, cfg.scale_lo, cfg.scale_hi, cfg.n_scales)
    return {
        "correspondence": c.to_json(),
        "basepoint": SpherePoint.from_complex(as_complex(x)).to_json(),
        "hd_est": dim.dim,
        "hd_method": "box-counting (upper bound for Hausdorff dimension)",
        "box": dim.to_json(),
        "cloud_points": len(cloud),
        "delta_est": est.delta,
        "delta": est.to_json(),
        "slack": cfg.slack,
        "inequality_ok": bool(dim.dim <= est.delta + cfg.slack),
        "delta_lt_2": bool(est.delta < 2),
    }
