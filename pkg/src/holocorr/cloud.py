"""Spherically deduplicated point samples."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .sphere import INF, to_sphere


def thin(points: np.ndarray, radius: float) -> np.ndarray:
    """Indices of a greedy subset with pairwise chordal distance >= ``radius``.

    Deterministic: earlier points win. Points are first bucketed into cubes
    whose diameter is below ``radius`` (two points in one cube would conflict
    anyway), then the remaining conflicts are resolved pair by pair. Every
    dropped point lies within ``2 * radius`` of a kept one.
    """
    points = np.asarray(points, dtype=complex)
    if len(points) == 0 or radius <= 0:
        return np.arange(len(points))
    X = to_sphere(points)
    h = radius / np.sqrt(3.0) * (1 - 1e-9)
    keys = np.floor((X + 1.0) / h).astype(np.int64)
    n_cells = int(np.ceil(2.0 / h)) + 2
    flat = (keys[:, 0] * n_cells + keys[:, 1]) * n_cells + keys[:, 2]
    _, first = np.unique(flat, return_index=True)
    idx = np.sort(first)
    tree = cKDTree(X[idx])
    pairs = tree.query_pairs(radius * (1 - 1e-12), output_type="ndarray")
    if len(pairs):
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
        keep = np.ones(len(idx), bool)
        for i, j in pairs:
            if keep[i] and keep[j]:
                keep[j] = False
        idx = idx[keep]
    return idx


@dataclass
class PointCloud:
    """Sample of a subset of the sphere; ``inf`` entries are the point at infinity.

    Built with :meth:`from_points`, pairwise chordal distances are at least
    ``grid_res / 2``.
    """

    points: np.ndarray
    grid_res: float
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_points(cls, points, grid_res: float, **meta) -> "PointCloud":
        points = np.asarray(points, dtype=complex).ravel()
        points = np.where(np.isfinite(points), points, INF)
        idx = thin(points, grid_res / 2)
        return cls(points[idx], float(grid_res), dict(meta))

    def __len__(self):
        return len(self.points)

    @property
    def finite(self) -> np.ndarray:
        return self.points[np.isfinite(self.points)]

    def n_infinite(self) -> int:
        return int(np.sum(~np.isfinite(self.points)))

    def tree(self) -> cKDTree:
        return cKDTree(to_sphere(self.points))

    def distance_to(self, z) -> np.ndarray:
        """Chordal distance from each of ``z`` to the nearest cloud point."""
        if len(self.points) == 0:
            return np.full(np.shape(z), np.inf)
        d, _ = self.tree().query(to_sphere(np.asarray(z, dtype=complex)))
        return d
