"""Riemann-sphere numerics.

Scalar points are :class:`SpherePoint` values. Bulk code works on plain
``complex128`` arrays in which the point at infinity is ``complex(inf, 0)``;
:func:`as_complex` and :meth:`SpherePoint.from_complex` convert between the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Points with modulus above this are stored in the ``1/z`` chart.
CHART_SWITCH = 1e8

INF = complex(math.inf, 0.0)


@dataclass(frozen=True)
class SpherePoint:
    """A point of the Riemann sphere.

    ``chart == 0`` stores ``value = z``; ``chart == 1`` stores ``value = 1/z``
    (so ``value == 0`` in chart 1 is the point at infinity).
    """

    value: complex = 0j
    chart: int = 0

    def __post_init__(self):
        if self.chart not in (0, 1):
            raise ValueError("chart must be 0 or 1")
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError("chart value must be finite; use SpherePoint.infinity()")
        # normalise -0.0 so that equality and hashing are chart-canonical
        object.__setattr__(self, "value", complex(v.real + 0.0, v.imag + 0.0))

    @classmethod
    def from_complex(cls, z) -> "SpherePoint":
        if isinstance(z, SpherePoint):
            return z
        if isinstance(z, str):
            if z.strip().lower() in ("inf", "infinity", "oo"):
                return cls.infinity()
            z = complex(z.replace(" ", "").replace("i", "j"))
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return cls.infinity()
        if abs(z) > CHART_SWITCH:
            return cls(1.0 / z, 1)
        return cls(z, 0)

    @classmethod
    def infinity(cls) -> "SpherePoint":
        return cls(0j, 1)

    @property
    def at_infinity(self) -> bool:
        return self.chart == 1 and self.value == 0

    @property
    def z(self) -> complex:
        """Finite-chart coordinate; ``inf`` at infinity."""
        if self.chart == 0:
            return self.value
        if self.value == 0:
            return INF
        return 1.0 / self.value

    def conjugate(self) -> "SpherePoint":
        return SpherePoint(self.value.conjugate(), self.chart)

    def __complex__(self):
        return self.z

    def to_json(self):
        if self.at_infinity:
            return "inf"
        z = self.z
        return [z.real, z.imag]

    @classmethod
    def from_json(cls, obj) -> "SpherePoint":
        if isinstance(obj, str):
            if obj == "inf":
                return cls.infinity()
            raise ValueError(f"unrecognised sphere point {obj!r}")
        re, im = obj
        return cls.from_complex(complex(re, im))

    def __repr__(self):
        if self.at_infinity:
            return "SpherePoint(inf)"
        return f"SpherePoint({self.z!r})"


def as_complex(p) -> complex:
    """Finite-chart coordinate of a point given as SpherePoint or number."""
    if isinstance(p, SpherePoint):
        return p.z
    z = complex(p)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return INF
    return z


def to_sphere(z) -> np.ndarray:
    """Embed points in the unit sphere of R^3 (inverse stereographic projection).

    Returns an array of shape ``z.shape + (3,)``; infinity maps to the north
    pole. Chordal distance is the Euclidean distance of the embeddings.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape + (3,))
    with np.errstate(all="ignore"):
        finite = np.isfinite(z)
        small = finite & (np.abs(z) <= 1.0)
        big = ~small
        zs = z[small]
        r2 = zs.real**2 + zs.imag**2
        out[small, 0] = 2 * zs.real / (1 + r2)
        out[small, 1] = 2 * zs.imag / (1 + r2)
        out[small, 2] = (r2 - 1) / (1 + r2)
        u = np.where(np.isfinite(z[big]), 1.0 / z[big], 0)
        u2 = u.real**2 + u.imag**2
        # 2z/(1+|z|^2) = 2 conj(u)/(1+|u|^2) with u = 1/z
        out[big, 0] = 2 * u.real / (1 + u2)
        out[big, 1] = -2 * u.imag / (1 + u2)
        out[big, 2] = (1 - u2) / (1 + u2)
    return out


def from_sphere(X) -> np.ndarray:
    """Inverse of :func:`to_sphere` (points are renormalised onto the sphere)."""
    X = np.asarray(X, dtype=float)
    X = X / np.linalg.norm(X, axis=-1, keepdims=True)
    x, y, t = X[..., 0], X[..., 1], X[..., 2]
    with np.errstate(all="ignore"):
        # near the north pole use (1 + t) / (x - iy), which avoids 1 - t cancelling
        z = np.where(t <= 0, (x + 1j * y) / (1 - t), (1 + t) / (x - 1j * y))
    return np.where(t >= 1 - 1e-300, INF, z)


def chordal(a, b) -> np.ndarray:
    """Vectorised chordal distance ``2|a-b| / sqrt((1+|a|^2)(1+|b|^2))``.

    When both points lie outside the unit disk the formula is evaluated in
    the inverted chart, where it has the same form.
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    with np.errstate(all="ignore"):
        aa, ab = np.abs(a), np.abs(b)
        flip = (aa > 1.0) & (ab > 1.0)
        a = np.where(flip, np.where(np.isfinite(a), 1.0 / a, 0j), a)
        b = np.where(flip, np.where(np.isfinite(b), 1.0 / b, 0j), b)
        aa, ab = np.abs(a), np.abs(b)
        d = 2 * np.abs(a - b) / (np.hypot(1.0, aa) * np.hypot(1.0, ab))
        # exactly one of the pair at infinity
        d = np.where(np.isinf(aa), 2 / np.hypot(1.0, ab), d)
        d = np.where(np.isinf(ab), 2 / np.hypot(1.0, aa), d)
    return d


def chordal_distance(p, q) -> float:
    return float(chordal(as_complex(p), as_complex(q)))


def log_chart_factor(z) -> np.ndarray:
    """``log(1 + |z|^2)`` without overflow; ``+inf`` at infinity."""
    z = np.asarray(z, dtype=complex)
    a = np.abs(z)
    with np.errstate(all="ignore"):
        out = np.where(a <= 1.0, np.log1p(a * a), 2 * np.log(a) + np.log1p(1.0 / (a * a)))
    return out


def spherical_scale(z, w, euclid_deriv: float) -> float:
    """Spherical magnitude of a derivative given in the finite chart.

    ``euclid_deriv * (1+|z|^2) / (1+|w|^2)``. When either point is at infinity
    the Euclidean derivative is not meaningful; use
    :meth:`holocorr.correspondence.Correspondence.branch_derivative`, which
    works in the appropriate chart pair.
    """
    z, w = as_complex(z), as_complex(w)
    if euclid_deriv == 0:
        return 0.0
    if math.isinf(euclid_deriv):
        return math.inf
    if not (math.isfinite(abs(z)) and math.isfinite(abs(w))):
        raise ValueError("spherical_scale needs finite points; work in the inverted chart")
    lf = float(log_chart_factor(z) - log_chart_factor(w))
    return float(euclid_deriv * math.exp(lf))


def invert_chart(p) -> SpherePoint:
    """Image of ``p`` under ``z -> 1/z`` (0 and infinity swap)."""
    p = SpherePoint.from_complex(p)
    if p.chart == 1:
        # 1/z = value
        return SpherePoint.from_complex(p.value)
    if p.value == 0:
        return SpherePoint.infinity()
    return SpherePoint.from_complex(1.0 / p.value)


def points_to_json(points):
    return [SpherePoint.from_complex(z).to_json() for z in np.asarray(points).ravel()]
