"""Orbit-tree expansion, forward limit sets and rasters.

Weights are kept as logarithms throughout: products of branch derivatives
along depth-40 paths underflow doubles long before they stop mattering.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cloud import PointCloud, thin
from .correspondence import Correspondence
from .errors import BudgetExceededError
from .sphere import as_complex

DEFAULT_NODE_BUDGET = 20_000_000
#: Parent chunk size for threaded expansion. Chunk boundaries do not depend on
#: the thread count, so results are identical for any number of threads.
CHUNK = 65536

EXACT = "exact"
DEDUP = "dedup"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("HOLOCORR_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class LevelNodes:
    """Depth-``n`` nodes: points, log-weights and parent indices into level n-1."""

    depth: int
    points: np.ndarray
    logw: np.ndarray
    parent: np.ndarray
    summable: bool = True

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.logw)

    def __len__(self):
        return len(self.points)


def _step_chunk(c: Correspondence, pts, logw):
    W = c.forward_many(pts)
    z = np.repeat(pts, c.dw)
    w = W.ravel()
    with np.errstate(all="ignore"):
        lw = np.repeat(logw, c.dw) + c.log_branch_derivative_many(z, w)
    return w, lw


def step(c: Correspondence, pts, logw, threads: int = 1):
    """Children of every node: ``(points, logw, parent)`` with ``d_w`` children each."""
    n = len(pts)
    bounds = list(range(0, n, CHUNK)) + [n]
    chunks = [(bounds[k], bounds[k + 1]) for k in range(len(bounds) - 1)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(lambda ab: _step_chunk(c, pts[ab[0]:ab[1]], logw[ab[0]:ab[1]]),
                                chunks))
    else:
        parts = [_step_chunk(c, pts[a:b], logw[a:b]) for a, b in chunks]
    if parts:
        w = np.concatenate([p[0] for p in parts])
        lw = np.concatenate([p[1] for p in parts])
    else:
        w, lw = np.zeros(0, complex), np.zeros(0)
    parent = np.repeat(np.arange(n), c.dw)
    return w, lw, parent


def check_budget(c: Correspondence, depth: int, node_budget: float = DEFAULT_NODE_BUDGET):
    if float(c.dw) ** depth > node_budget:
        raise BudgetExceededError(
            f"exact expansion to depth {depth} needs {c.dw}^{depth} leaves, over the "
            f"budget of {int(node_budget)}; use dedup mode or a smaller depth"
        )


def iter_levels(c: Correspondence, x, depth: int, node_budget=DEFAULT_NODE_BUDGET, threads=None):
    """Yield exact :class:`LevelNodes` for n = 0..depth, one level in memory at a time."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    check_budget(c, depth, node_budget)
    threads = threads or default_threads()
    pts = np.array([as_complex(x)], dtype=complex)
    lw = np.zeros(1)
    lev = LevelNodes(0, pts, lw, np.array([-1]))
    yield lev
    for n in range(1, depth + 1):
        w, lw2, parent = step(c, lev.points, lev.logw, threads)
        lev = LevelNodes(n, w, lw2, parent)
        yield lev


def _dedup_level(lev: LevelNodes, grid_res: float) -> LevelNodes:
    # heaviest first so the survivors carry the max weight of their cell
    order = np.lexsort((np.arange(len(lev.logw)), -lev.logw))
    keep = order[thin(lev.points[order], grid_res)]
    keep.sort()
    return LevelNodes(lev.depth, lev.points[keep], lev.logw[keep], lev.parent[keep], False)


def expand(c: Correspondence, x, depth: int, mode: str = EXACT, grid_res: float = 1e-3,
           node_budget=DEFAULT_NODE_BUDGET, threads=None) -> list:
    """Level-by-level orbit tree of ``x`` under ``c``.

    ``exact`` mode keeps every branch (level n has ``d_w**n`` nodes) so level
    sums equal full enumeration. ``dedup`` mode merges nodes within
    ``grid_res`` after each step, keeping the largest weight; its levels are
    marked non-summable.
    """
    if mode == EXACT:
        return list(iter_levels(c, x, depth, node_budget, threads))
    if mode != DEDUP:
        raise ValueError(f"unknown mode {mode!r}")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    threads = threads or default_threads()
    lev = LevelNodes(0, np.array([as_complex(x)], dtype=complex), np.zeros(1), np.array([-1]),
                     False)
    levels = [lev]
    for n in range(1, depth + 1):
        w, lw, parent = step(c, lev.points, lev.logw, threads)
        lev = _dedup_level(LevelNodes(n, w, lw, parent), grid_res)
        levels.append(lev)
    return levels


def limit_set(c: Correspondence, x, depth: int, burn_in: int | None = None,
              grid_res: float = 1e-3, threads=None) -> PointCloud:
    """Approximate forward limit set: dedup union of levels ``burn_in..depth``."""
    if burn_in is None:
        burn_in = depth // 3
    if not 0 <= burn_in < depth:
        raise ValueError("need 0 <= burn_in < depth")
    levels = expand(c, x, depth, DEDUP, grid_res, threads=threads)
    pts = np.concatenate([lev.points for lev in levels[burn_in:]][::-1])
    # deepest levels first: they are closest to the limit set
    return PointCloud.from_points(pts, grid_res, depth=depth, burn_in=burn_in)


def render(cloud: PointCloud, window=(-2.0, 2.0, -2.0, 2.0), resolution=(512, 512)) -> np.ndarray:
    """Binary hit raster, ``uint8`` of shape ``(ny, nx)``, top-left origin.

    ``window = (xmin, xmax, ymin, ymax)``; row 0 is ``y = ymax``.
    """
    xmin, xmax, ymin, ymax = map(float, window)
    nx, ny = resolution
    if not (xmax > xmin and ymax > ymin) or nx < 1 or ny < 1:
        raise ValueError("degenerate window or resolution")
    img = np.zeros((ny, nx), np.uint8)
    z = cloud.finite
    if len(z) == 0:
        return img
    col = np.floor((z.real - xmin) / (xmax - xmin) * nx).astype(np.int64)
    row = np.floor((ymax - z.imag) / (ymax - ymin) * ny).astype(np.int64)
    ok = (col >= 0) & (col < nx) & (row >= 0) & (row < ny)
    img[row[ok], col[ok]] = 255
    return img
