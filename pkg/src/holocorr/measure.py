"""Atomic Patterson-Sullivan measures and conformality diagnostics.

A measure is stored as flat arrays (points, masses, levels) so that depth-24
binary trees (about 3.4e7 atoms) fit in memory. Regions are chordal disks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .correspondence import INDIFFERENT_BAND, Correspondence
from .errors import (
    BranchError,
    HolocorrError,
    NotFixedError,
    NotIndifferentError,
    WrongDirectionError,
)
from .orbits import DEFAULT_NODE_BUDGET, iter_levels
from .sphere import SpherePoint, as_complex, chordal, to_sphere

#: Atoms processed per block in the region scans.
BLOCK = 1 << 21


@dataclass
class AtomicMeasure:
    """Probability measure supported on the exact orbit tree of ``x``.

    ``levels[i]`` is the tree depth of atom ``i``; atoms are ordered by level
    and, within a level, in tree order. Zero-mass atoms (critical branches)
    are dropped.
    """

    points: np.ndarray
    masses: np.ndarray
    levels: np.ndarray
    s: float
    depth: int
    basepoint: complex
    _X: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.points)

    @property
    def total(self) -> float:
        return float(np.sum(self.masses))

    def sphere_coords(self) -> np.ndarray:
        """Cached float32 unit-sphere embedding, used only for region membership."""
        if self._X is None:
            X = np.empty((len(self.points), 3), np.float32)
            for a in range(0, len(self.points), BLOCK):
                X[a:a + BLOCK] = to_sphere(self.points[a:a + BLOCK])
            self._X = X
        return self._X

    def in_disk(self, center, radius: float, slack: float = 1e-6) -> np.ndarray:
        """Indices of atoms within chordal ``radius`` of ``center`` (float32 prefilter, exact recheck)."""
        X = self.sphere_coords()
        cvec = to_sphere(np.array([as_complex(center)]))[0].astype(np.float32)
        # |X - c|^2 = 2 - 2 X.c for unit vectors
        thr = np.float32(1.0 - 0.5 * (radius + slack) ** 2)
        out = []
        for a in range(0, len(X), BLOCK):
            idx = np.nonzero(X[a:a + BLOCK] @ cvec >= thr)[0] + a
            if len(idx):
                d = chordal(self.points[idx], as_complex(center))
                out.append(idx[d <= radius])
        return np.concatenate(out) if out else np.zeros(0, np.int64)

    def level_masses(self) -> np.ndarray:
        return np.bincount(self.levels, weights=self.masses, minlength=self.depth + 1)

    def to_json(self) -> dict:
        atoms = []
        for z, m in zip(self.points, self.masses):
            if np.isfinite(z):
                atoms.append([float(z.real), float(z.imag), float(m)])
            else:
                atoms.append(["inf", "inf", float(m)])
        return {"s": self.s, "depth": self.depth, "atoms": atoms}


def patterson_sullivan(c: Correspondence, x, s: float, depth: int,
                       node_budget=DEFAULT_NODE_BUDGET, threads=None) -> AtomicMeasure:
    """Normalized atomic measure with mass proportional to ``|Df_{n,j}(x)|^s``.

    ``s`` should exceed the critical exponent; nothing here checks that.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    pts, lws, lev = [], [], []
    for L in iter_levels(c, x, depth, node_budget, threads):
        keep = np.isfinite(L.logw)
        if np.any(L.logw == np.inf):
            raise HolocorrError("infinite branch derivative on the orbit of the basepoint")
        pts.append(L.points[keep])
        lws.append(s * L.logw[keep])
        lev.append(np.full(int(keep.sum()), L.depth, np.uint8))
    pts = np.concatenate(pts)
    lw = np.concatenate(lws)
    del lws
    levels = np.concatenate(lev)
    if len(lw) == 0:
        raise HolocorrError("zero total weight")
    m = float(np.max(lw))
    np.subtract(lw, m, out=lw)
    np.exp(lw, out=lw)
    lw /= np.sum(lw)
    keep = lw > 0
    if not keep.all():
        pts, lw, levels = pts[keep], lw[keep], levels[keep]
    return AtomicMeasure(pts, lw, levels, float(s), int(depth), as_complex(x))


@dataclass
class ConformalityReport:
    center: complex
    radius: float
    branch: int
    branch_value: complex
    delta: float
    lhs: float
    rhs: float
    rel_residual: float
    n_atoms_in_region: int
    n_atoms_in_image: int
    floor: float = 1e-12

    def to_json(self) -> dict:
        return {
            "region": {"center": SpherePoint.from_complex(self.center).to_json(),
                       "radius": self.radius, "metric": "chordal"},
            "branch": {"index": self.branch,
                       "value_at_center": SpherePoint.from_complex(self.branch_value).to_json()},
            "delta": self.delta,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "rel_residual": self.rel_residual,
            "atoms_in_region": self.n_atoms_in_region,
            "atoms_in_image": self.n_atoms_in_image,
            "special_pair": "approximated: image atoms must have an f-preimage in the region",
        }


class DiskBranch:
    """Single-valued forward branch over a chordal disk, by continuation.

    The branch is fixed by its value at the centre (``index`` into the sorted
    forward images). Reference points are continued along chart segments from
    the centre; any other point takes the forward image closest to the value
    at its nearest reference.
    """

    STEPS = 32

    def __init__(self, c: Correspondence, center, radius: float, index: int = 0,
                 ref_points=None):
        self.c = c
        self.center = as_complex(center)
        self.radius = float(radius)
        if not 0 < radius < 2:
            raise BranchError("radius must lie in (0, 2)")
        for sp in c.singular_points():
            if chordal(sp.z, self.center) <= radius:
                raise BranchError(
                    f"the region contains the singular point {sp.z}; no single-valued branch"
                )
        W0 = c.forward_many(np.array([self.center]))[0]
        if not 0 <= index < len(W0):
            raise BranchError(f"branch index {index} out of range")
        self.index = index
        self.value = W0[index]
        # chart in which the disk is convex: avoid the point at infinity
        far_inf = chordal(self.center, complex(math.inf, 0)) > radius
        far_zero = chordal(self.center, 0j) > radius
        if not (far_inf or far_zero):
            raise BranchError("the region contains both 0 and infinity")
        self.flip = not far_inf or (abs(self.center) > 1 and far_zero)
        self._refs = np.zeros(0, complex)
        self._vals = np.zeros(0, complex)
        self._tree = None
        self.add_references(self._default_refs() if ref_points is None else ref_points)

    def _chart(self, z):
        z = np.asarray(z, complex)
        if not self.flip:
            return z
        with np.errstate(all="ignore"):
            return np.where(z == 0, complex(math.inf, 0),
                            np.where(np.isfinite(z), 1.0 / z, 0j))

    def _unchart(self, u):
        return self._chart(u)  # the inversion is an involution

    def _default_refs(self):
        # a rough polar net of the disk, good enough for clouds that fill it
        X0 = to_sphere(np.array([self.center]))[0]
        a = np.array([1.0, 0, 0]) if abs(X0[0]) < 0.9 else np.array([0, 1.0, 0])
        e1 = np.cross(X0, a)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(X0, e1)
        out = [self.center]
        # chordal radius rho corresponds to angle 2 asin(rho/2)
        for k in range(1, 9):
            ang = 2 * math.asin(min(1.0, self.radius * k / 8 / 2))
            for t in np.linspace(0, 2 * np.pi, 8 * k, endpoint=False):
                v = math.cos(ang) * X0 + math.sin(ang) * (math.cos(t) * e1 + math.sin(t) * e2)
                x, y, zz = v
                out.append(complex(math.inf, 0) if zz >= 1 - 1e-15
                           else complex(x, y) / (1 - zz))
        return np.array(out)

    def add_references(self, pts):
        pts = np.asarray(pts, complex).ravel()
        if len(pts) == 0:
            return
        pts = pts[chordal(pts, self.center) <= self.radius * (1 + 1e-9)]
        u0 = self._chart(np.array([self.center]))[0]
        u1 = self._chart(pts)
        val = np.full(len(pts), self.value, complex)
        for k in range(1, self.STEPS + 1):
            t = k / self.STEPS
            zk = self._unchart(u0 + t * (u1 - u0))
            W = self.c.forward_many(zk)
            val = _nearest_root(W, val)
        self._refs = np.concatenate([self._refs, pts])
        self._vals = np.concatenate([self._vals, val])
        u = self._chart(self._refs)
        self._tree = cKDTree(np.column_stack([u.real, u.imag]))

    def __call__(self, z) -> np.ndarray:
        """Branch values at points ``z`` inside the disk."""
        z = np.asarray(z, complex).ravel()
        if len(z) == 0:
            return np.zeros(0, complex)
        u = self._chart(z)
        _, j = self._tree.query(np.column_stack([u.real, u.imag]))
        W = self.c.forward_many(z)
        return _nearest_root(W, self._vals[j])


def _nearest_root(W, guess):
    d = chordal(W, guess[:, None])
    return W[np.arange(len(W)), np.argmin(d, axis=1)]


def conformality_residual(m: AtomicMeasure, c: Correspondence, center, radius: float,
                          delta: float, branch: int = 0, floor: float = 1e-12,
                          tol: float = 1e-6) -> ConformalityReport:
    """Compare ``m(f(A))`` with ``sum_{a in A} m(a) |Df(a)|^delta`` on a chordal disk A."""
    return conformality_residuals(m, c, center, radius, [delta], branch, floor, tol)[0]


def conformality_residuals(m: AtomicMeasure, c: Correspondence, center, radius: float,
                           deltas, branch: int = 0, floor: float = 1e-12,
                           tol: float = 1e-6) -> list:
    """:func:`conformality_residual` for several exponents sharing one pass over the atoms."""
    center = as_complex(center)
    deltas = [float(d) for d in deltas]
    f = DiskBranch(c, center, radius, branch)
    A_idx = m.in_disk(center, radius)
    rhs = np.zeros(len(deltas))
    img_ref = [f._vals]
    for a in range(0, len(A_idx), BLOCK):
        idx = A_idx[a:a + BLOCK]
        z = m.points[idx]
        w = f(z)
        with np.errstate(all="ignore"):
            lw = c.log_branch_derivative_many(z, w)
        for k, d in enumerate(deltas):
            rhs[k] += float(np.sum(m.masses[idx] * np.exp(d * lw)))
        img_ref.append(w[:: max(1, len(w) // 4096)])
    # f(A) lies in a ball around f(centre); only atoms there can count
    img_ref = np.concatenate(img_ref)
    R = min(2.0, 1.25 * float(np.max(chordal(img_ref, f.value))) + 1e-3)
    cand = m.in_disk(f.value, R)
    lhs = 0.0
    n_img = 0
    for a in range(0, len(cand), BLOCK):
        idx = cand[a:a + BLOCK]
        y = m.points[idx]
        Z = c.backward_many(y)
        hit = np.zeros(len(y), bool)
        for k in range(Z.shape[1]):
            zk = Z[:, k]
            sel = np.nonzero(~hit & ~np.isnan(zk) & (chordal(zk, center) <= radius))[0]
            if len(sel) == 0:
                continue
            ok = chordal(f(zk[sel]), y[sel]) <= tol
            hit[sel[ok]] = True
        lhs += float(np.sum(m.masses[idx][hit]))
        n_img += int(hit.sum())
    return [
        ConformalityReport(center, float(radius), branch, complex(f.value), d, lhs, float(r),
                           float(abs(lhs - r) / max(lhs, r, floor)), int(len(A_idx)), n_img,
                           floor)
        for d, r in zip(deltas, rhs)
    ]


def parabolic_mass(m: AtomicMeasure, omega, radius: float) -> float:
    """Total mass within chordal ``radius`` of ``omega``."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    idx = m.in_disk(as_complex(omega), radius, slack=0.0) if radius > 0 else np.nonzero(
        chordal(m.points, as_complex(omega)) == 0)[0]
    return float(np.sum(m.masses[idx]))


def _fixing_germ(c: Correspondence, omega: complex):
    W = c.forward_many(np.array([omega]))[0]
    d = chordal(W, omega)
    k = int(np.argmin(d))
    if d[k] > 1e-7:
        raise NotFixedError(f"{omega} is not fixed by any branch (nearest image at {d[k]:.2e})")
    return W[k]


def parabolic_order(c: Correspondence, omega, n_max: int = 4000, seed_radius: float = 0.05,
                    n_dirs: int = 16) -> dict:
    """Petal number ``p`` from the rate ``|T^n z0 - omega| ~ n^(-1/p)``.

    ``T`` is the forward branch fixing ``omega``, followed by nearest-root
    continuation. Seeds are tried on ``n_dirs`` rotated directions; those that
    wander off are discarded.
    """
    omega = as_complex(omega)
    if not math.isfinite(abs(omega)):
        raise HolocorrError("parabolic_order works in the finite chart; conjugate omega first")
    _fixing_germ(c, omega)
    d = c.branch_derivative(omega, omega, tol=1e-6)
    if not abs(d - 1) <= INDIFFERENT_BAND:
        raise NotIndifferentError(f"|multiplier| = {d:.6g} at {omega} is not indifferent")
    ang = 2 * np.pi * (np.arange(n_dirs) + 0.5) / n_dirs
    z = omega + seed_radius * np.exp(1j * ang)
    alive = np.ones(n_dirs, bool)
    dist = np.empty((n_max + 1, n_dirs))
    dist[0] = seed_radius
    for n in range(1, n_max + 1):
        W = c.forward_many(z)
        z = _nearest_root(W, z)
        dist[n] = np.abs(z - omega)
        alive &= dist[n] < 2 * seed_radius
    n = np.arange(n_max // 10, n_max + 1)
    best = None
    for j in np.nonzero(alive)[0]:
        y = np.log(dist[n, j])
        if not np.all(np.isfinite(y)) or dist[-1, j] >= dist[n_max // 10, j]:
            continue
        slope, icpt = np.polyfit(np.log(n), y, 1)
        resid = y - (slope * np.log(n) + icpt)
        ss = float(np.sum((y - y.mean()) ** 2))
        r2 = 1 - float(np.sum(resid**2)) / ss if ss > 0 else 0.0
        if best is None or r2 > best[1]:
            best = (slope, r2, ang[j])
    if best is None:
        raise WrongDirectionError("no seed direction converged to the fixed point")
    slope, r2, a = best
    p = max(1, int(round(-1.0 / slope))) if slope < 0 else None
    if p is None:
        raise WrongDirectionError("orbits do not approach the fixed point")
    return {"p": p, "slope": float(slope), "fit_quality": float(r2),
            "seed_angle": float(a), "n_max": int(n_max)}


def dirac_conformality_check(c: Correspondence, omega, delta: float, trials: int = 20,
                             seed: int = 0) -> dict:
    """Check that the point mass at a fixed point ``omega`` behaves conformally.

    Reports which branches at ``omega`` are critical and evaluates both sides
    of the conformality identity for random disk pairs avoiding ``omega``.
    """
    omega = as_complex(omega)
    _fixing_germ(c, omega)
    W = c.forward_many(np.array([omega]))[0]
    branches = []
    for w in W:
        dv = float(c.branch_derivative_many(np.array([omega]), np.array([w]))[0])
        branches.append({"image": SpherePoint.from_complex(w).to_json(),
                         "fixes": bool(chordal(w, omega) <= 1e-7),
                         "derivative": dv if math.isfinite(dv) else None,
                         "critical": bool(dv <= 1e-6)})
    critical = [b for b in branches if b["critical"]]
    rng = np.random.default_rng(seed)
    sing = [p.z for p in c.singular_points()]
    pairs = []
    while len(pairs) < trials:
        ctr = complex(*rng.uniform(-2, 2, 2))
        r = float(rng.uniform(0.02, 0.3))
        if chordal(ctr, omega) <= r or any(chordal(ctr, s) <= r for s in sing):
            continue
        try:
            f = DiskBranch(c, ctr, r, int(rng.integers(c.dw)))
        except BranchError:
            continue
        # omega must also avoid f(A): no f-preimage of omega inside A
        pre = c.backward_many(np.array([omega]))[0]
        pre = pre[chordal(pre, ctr) <= r]
        if len(pre) and np.any(chordal(f(pre), omega) <= 1e-7):
            continue
        lhs = 0.0  # delta_omega(f(A))
        rhs = 0.0  # delta_omega(A) |Df|^delta, omega not in A
        pairs.append({"center": [ctr.real, ctr.imag], "radius": r, "branch": f.index,
                      "lhs": lhs, "rhs": rhs, "residual": 0.0})
    return {
        "omega": SpherePoint.from_complex(omega).to_json(),
        "delta": float(delta),
        "branches": branches,
        "critical_branch": bool(critical),
        "pairs": pairs,
        "max_residual": max((p["residual"] for p in pairs), default=0.0),
        "seed": int(seed),
    }
