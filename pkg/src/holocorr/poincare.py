"""Poincare series level sums and critical-exponent estimation.

The critical exponent is located as the root of ``rho(s) = 1``, where
``rho`` is the exponential growth rate of the level sums ``a[n](s)``
fitted over the deep levels. Partial sums alone cannot witness divergence;
the growth rate can.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .correspondence import Correspondence
from .errors import DegenerateGrowthError, HolocorrError, InvalidBracketError, NonMonotoneError
from .orbits import DEFAULT_NODE_BUDGET, iter_levels
from .sphere import chordal

DEFAULT_DEPTH = 18


@dataclass
class LevelSums:
    """``a[n] = sum_j |Df_{n,j}(x)|^s`` for n = 0..depth."""

    s: float
    a: np.ndarray

    @property
    def depth(self) -> int:
        return len(self.a) - 1

    def partial_sum(self) -> float:
        return float(np.sum(self.a))


@dataclass
class DeltaEstimate:
    delta: float
    bracket: tuple
    rho_at_delta: float
    depth: int
    r2: float
    samples: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "bracket": list(self.bracket),
            "rho_at_delta": self.rho_at_delta,
            "depth": self.depth,
            "fit_r2": self.r2,
        }


class LevelWeights:
    """Sorted log-weights of every exact level, reusable across exponents."""

    def __init__(self, logw_levels, points_levels=None):
        self.levels = [np.sort(np.asarray(lw, dtype=float)) for lw in logw_levels]
        if any(np.any(lw == np.inf) for lw in self.levels):
            raise HolocorrError(
                "infinite branch derivative on the orbit: the basepoint lies on the "
                "backward postcritical set"
            )
        self.points_levels = points_levels

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def log_sums(self, s) -> np.ndarray:
        """``log a[n](s)``; sums run over sorted terms, so node order is irrelevant."""
        if callable(s):
            exps = [float(s(n)) for n in range(len(self.levels))]
        else:
            exps = [float(s)] * len(self.levels)
        out = np.empty(len(self.levels))
        for n, (lw, t) in enumerate(zip(self.levels, exps)):
            with np.errstate(all="ignore"):
                v = t * lw if t > 0 else np.where(np.isfinite(lw), t * lw, -np.inf if t > 0 else 0.0)
            if t == 0:
                # |Df|^0 = 1 for every branch, critical ones included
                v = np.zeros_like(lw)
            m = np.max(v) if len(v) else -np.inf
            if not np.isfinite(m):
                out[n] = -np.inf
                continue
            out[n] = m + math.log(float(np.sum(np.exp(v - m))))
        return out

    def sums(self, s) -> np.ndarray:
        return np.exp(self.log_sums(s))


def level_weights(c: Correspondence, x, depth: int, node_budget=DEFAULT_NODE_BUDGET,
                  threads=None, keep_points: bool = False) -> LevelWeights:
    lws, pts = [], []
    for lev in iter_levels(c, x, depth, node_budget, threads):
        lws.append(lev.logw)
        if keep_points:
            pts.append(lev.points)
    return LevelWeights(lws, pts if keep_points else None)


def level_sums(c: Correspondence, x, s: float, depth: int, threads=None) -> LevelSums:
    if s <= 0:
        raise ValueError("s must be positive")
    return LevelSums(float(s), level_weights(c, x, depth, threads=threads).sums(s))


def poincare_partial_sum(c: Correspondence, x, s: float, depth: int, threads=None) -> float:
    return level_sums(c, x, s, depth, threads).partial_sum()


def _fit(log_a: np.ndarray, tail_fraction: float):
    N = len(log_a) - 1
    n0 = min(max(1, int(math.floor(N * (1 - tail_fraction)))), N - 3)
    n = np.arange(n0, N + 1)
    y = log_a[n0:]
    if n0 < 0 or len(n) < 4:
        raise DegenerateGrowthError("need at least 4 tail levels")
    if not np.all(np.isfinite(y)):
        raise DegenerateGrowthError("zero level sums in the tail")
    slope, icpt = np.polyfit(n, y, 1)
    resid = y - (slope * n + icpt)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 1e-300 else (1.0 if ss_res < 1e-20 else 0.0)
    return math.exp(slope), r2


def growth_fit(ls: LevelSums, tail_fraction: float = 0.5):
    """``(rho, r2)`` from a least-squares fit of ``log a[n]`` against n over the tail."""
    with np.errstate(divide="ignore"):
        return _fit(np.log(ls.a), tail_fraction)


def growth_rate(ls: LevelSums, tail_fraction: float = 0.5) -> float:
    """Exponential growth rate ``rho(s)`` of the level sums; ``rho < 1`` means convergence."""
    return growth_fit(ls, tail_fraction)[0]


def parabolic_points(c: Correspondence) -> list:
    """Period-one points whose multiplier is a root of unity."""
    out = []
    for fp in c.fixed_points():
        if fp.cls != "indifferent":
            continue
        if c.anti or fp.root_of_unity_order is not None:
            out.append(fp.point.z)
    return out


def check_orbit_avoids(points_levels, omegas, tol: float = 1e-9):
    for n, pts in enumerate(points_levels):
        for om in omegas:
            if len(pts) and np.min(chordal(pts, om)) <= tol:
                raise HolocorrError(
                    f"the forward orbit reaches the parabolic point {om} at level {n}; "
                    "the Poincare series diverges for every s"
                )


def critical_exponent(c: Correspondence, x, s_lo: float = 0.25, s_hi: float = 2.5,
                      tol: float = 1e-3, depth: int = DEFAULT_DEPTH,
                      tail_fraction: float = 0.5, margin: float = 1e-3,
                      threads=None, weights: LevelWeights | None = None) -> DeltaEstimate:
    """Bisection for the exponent where the fitted growth rate crosses one."""
    if not 0 < s_lo < s_hi:
        raise ValueError("need 0 < s_lo < s_hi")
    if weights is None:
        weights = level_weights(c, x, depth, threads=threads, keep_points=True)
    if weights.points_levels is not None:
        check_orbit_avoids(weights.points_levels, parabolic_points(c))
    samples = {}

    def rho(s):
        if s not in samples:
            samples[s] = _fit(weights.log_sums(s), tail_fraction)
        return samples[s][0]

    r_lo, r_hi = rho(s_lo), rho(s_hi)
    if abs(r_lo - 1) <= margin and abs(r_hi - 1) <= margin:
        raise DegenerateGrowthError(
            "level sums neither grow nor decay across the bracket: the Poincare series "
            "diverges for every s (critical exponent +inf)"
        )
    if not (r_lo > 1 + margin and r_hi < 1 - margin):
        raise InvalidBracketError(
            f"rho({s_lo}) = {r_lo:.6g}, rho({s_hi}) = {r_hi:.6g}; need rho(s_lo) > 1 > rho(s_hi)"
        )
    lo, hi = s_lo, s_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        r = rho(mid)
        if not (rho(lo) >= r >= rho(hi)):
            raise NonMonotoneError(
                "growth rate is not monotone in s", sorted((s, v[0]) for s, v in samples.items())
            )
        if r > 1:
            lo = mid
        else:
            hi = mid
    delta = 0.5 * (lo + hi)
    r_d = rho(delta)
    return DeltaEstimate(
        delta, (lo, hi), r_d, weights.depth, samples[delta][1],
        sorted((s, v[0]) for s, v in samples.items()),
    )


def exponent_schedule(s: float, delta: float, h):
    """``t(n) = 2 delta - s`` below the threshold ``h(1/(s - delta))``, else ``s``."""
    if s == delta:
        return lambda n: s
    thresh = h(1.0 / (s - delta))
    return lambda n: (2 * delta - s) if n < thresh else s


def modified_level_sums(c: Correspondence, x, s: float, depth: int, h, delta: float,
                        threads=None) -> LevelSums:
    """Level sums with the divergence-forcing exponent schedule."""
    w = level_weights(c, x, depth, threads=threads)
    return LevelSums(float(s), w.sums(exponent_schedule(s, delta, h)))
