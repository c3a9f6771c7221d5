"""Multivalued maps defined by ``P(z, w) = 0`` or ``P(conj z, w) = 0``.

Vectorised primitives (``*_many``) work on complex arrays with ``inf`` for
the point at infinity and are what the orbit code uses. The scalar
operations return :class:`~holocorr.sphere.SpherePoint` lists and use the
Aberth solver, so they double as an independent check on the batch path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cloud import PointCloud
from .errors import (
    DegenerateResultantError,
    HolocorrError,
    NotOnCurveError,
    SingularPointError,
)
from .polyalg import BiPoly, UniPoly, batch_roots, resultant_w, resultant_z, roots, square_free
from .sphere import INF, SpherePoint, as_complex, chordal, log_chart_factor, to_sphere

HOLO = "holo"
ANTI = "anti"

#: Multipliers with modulus within this band of 1 are indifferent.
INDIFFERENT_BAND = 1e-6
#: Largest denominator tried when matching a multiplier to a root of unity.
MAX_ROOT_OF_UNITY_ORDER = 64


def _sph(points):
    return [SpherePoint.from_complex(z) for z in np.asarray(points, dtype=complex).ravel()]


def dedupe(points, tol: float = 1e-6) -> list:
    """Merge points closer than ``tol`` chordally; order of first appearance kept."""
    out = []
    for z in points:
        if all(chordal(z, y) > tol for y in out):
            out.append(z)
    return out


@dataclass
class FixedPoint:
    point: SpherePoint
    multiplier_deriv: float
    cls: str
    multiplier: complex | None = None
    multiplicity: int = 1
    root_of_unity_order: int | None = None

    def to_json(self) -> dict:
        m = self.multiplier
        return {
            "point": self.point.to_json(),
            "multiplier_deriv": _json_float(self.multiplier_deriv),
            "class": self.cls,
            "multiplier": None if m is None else [_json_float(m.real), _json_float(m.imag)],
            "multiplicity": self.multiplicity,
            "root_of_unity_order": self.root_of_unity_order,
        }


def _json_float(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


class Correspondence:
    """An (anti)holomorphic correspondence ``F: z -> w``.

    ``kind == "anti"`` means the first variable of ``P`` receives ``conj(z)``.
    ``P`` is reduced to its square-free part on construction; the reduction
    is recorded in ``metadata["square_free_reduced"]``.
    """

    def __init__(self, P: BiPoly, kind: str = HOLO, family: str = "custom", params=None,
                 metadata=None):
        if kind not in (HOLO, ANTI):
            raise ValueError(f"kind must be {HOLO!r} or {ANTI!r}")
        P = P if isinstance(P, BiPoly) else BiPoly(P)
        if P.dz < 1 or P.dw < 1:
            raise ValueError(f"need d_z >= 1 and d_w >= 1, got ({P.dz}, {P.dw})")
        P, reduced = square_free(P)
        self.P = P
        self.kind = kind
        self.family = family
        self.params = dict(params or {})
        self.metadata = dict(metadata or {})
        self.metadata["square_free_reduced"] = reduced
        self._charts = {}
        for fz in (0, 1):
            for fw in (0, 1):
                Q = P
                if fz:
                    Q = Q.flip_z(P.dz)
                if fw:
                    Q = Q.flip_w(P.dw)
                self._charts[fz, fw] = (Q, Q.partial_z(), Q.partial_w())
        self._backward_poly = (P.swap(),)

    # ------------------------------------------------------------ basics
    @property
    def dz(self) -> int:
        return self.P.dz

    @property
    def dw(self) -> int:
        return self.P.dw

    @property
    def anti(self) -> bool:
        return self.kind == ANTI

    def _first(self, z):
        """Value fed to the first variable of ``P``."""
        return np.conj(z) if self.anti else z

    def to_json(self) -> dict:
        return {"kind": self.kind, "poly": self.P.to_json(), "family": self.family,
                "params": _jsonable(self.params)}

    @classmethod
    def from_json(cls, obj) -> "Correspondence":
        return cls(BiPoly.from_json(obj["poly"]), obj.get("kind", HOLO), obj.get("family", "custom"),
                   obj.get("params", {}))

    def __repr__(self):
        return f"Correspondence({self.family!r}, kind={self.kind!r}, dz={self.dz}, dw={self.dw})"

    # -------------------------------------------------- vectorised primitives
    def forward_many(self, z) -> np.ndarray:
        """Shape ``(N, d_w)`` array of forward images, rows sorted by (re, im)."""
        zs = self._first(np.asarray(z, dtype=complex).ravel())
        out = np.empty((len(zs), self.dw), complex)
        small = np.abs(zs) <= 1.0
        if small.any():
            out[small] = batch_roots(self.P.slice_coeffs_w(zs[small]))
        big = ~small
        if big.any():
            with np.errstate(all="ignore"):
                u = np.where(np.isfinite(zs[big]), 1.0 / zs[big], 0)
            out[big] = batch_roots(self._charts[1, 0][0].slice_coeffs_w(u))
        return out

    def backward_many(self, w) -> np.ndarray:
        """Shape ``(N, d_z)`` array of backward images."""
        w = np.asarray(w, dtype=complex).ravel()
        out = np.empty((len(w), self.dz), complex)
        small = np.abs(w) <= 1.0
        Pt = self._backward_poly[0]
        if small.any():
            out[small] = batch_roots(Pt.slice_coeffs_w(w[small]))
        big = ~small
        if big.any():
            with np.errstate(all="ignore"):
                u = np.where(np.isfinite(w[big]), 1.0 / w[big], 0)
            out[big] = batch_roots(self._charts[0, 1][0].swap().slice_coeffs_w(u))
        if self.anti:
            out = np.conj(out)
        return out

    def _chart_partials(self, z, w):
        """Charted partials ``(P, P_1, P_w, log chart factor ratio)`` at (z, w)."""
        zs = self._first(np.asarray(z, dtype=complex))
        w = np.asarray(w, dtype=complex)
        zs, w = np.broadcast_arrays(zs, w)
        fz = ~(np.abs(zs) <= 1.0)
        fw = ~(np.abs(w) <= 1.0)
        with np.errstate(all="ignore"):
            zc = np.where(fz, np.where(np.isfinite(zs), 1.0 / zs, 0), zs)
            wc = np.where(fw, np.where(np.isfinite(w), 1.0 / w, 0), w)
        val = np.empty(zs.shape, complex)
        pz = np.empty(zs.shape, complex)
        pw = np.empty(zs.shape, complex)
        sc = np.empty(zs.shape)
        szz = np.empty(zs.shape)
        sww = np.empty(zs.shape)
        for (a, b), (Q, Qz, Qw) in self._charts.items():
            m = (fz == a) & (fw == b)
            if not m.any():
                continue
            val[m] = Q(zc[m], wc[m])
            pz[m] = Qz(zc[m], wc[m])
            pw[m] = Qw(zc[m], wc[m])
            sc[m] = Q.abs_scale(zc[m], wc[m])
            szz[m] = Qz.abs_scale(zc[m], wc[m])
            sww[m] = Qw.abs_scale(zc[m], wc[m])
        lf = log_chart_factor(zc) - log_chart_factor(wc)
        return val, pz, pw, lf, sc, szz, sww

    def branch_derivative_many(self, z, w) -> np.ndarray:
        """Spherical ``|Df|`` at many germs; 0 at critical germs, ``inf`` where ``P_w = 0``."""
        _, pz, pw, lf, *_ = self._chart_partials(z, w)
        with np.errstate(all="ignore"):
            d = np.abs(pz) / np.abs(pw) * np.exp(lf)
        d = np.where(np.abs(pz) == 0, 0.0, d)
        return d

    def log_branch_derivative_many(self, z, w) -> np.ndarray:
        _, pz, pw, lf, *_ = self._chart_partials(z, w)
        with np.errstate(all="ignore"):
            return np.log(np.abs(pz)) - np.log(np.abs(pw)) + lf

    def curve_residual(self, z, w) -> np.ndarray:
        """``|P| / sum |c_ij||z|^i|w|^j`` in the appropriate chart."""
        val, *_, sc, _, _ = self._chart_partials(z, w)
        return np.abs(val) / np.maximum(sc, 1e-300)

    # ---------------------------------------------------- scalar operations
    def forward(self, z) -> list:
        """Forward images with multiplicity (``d_w`` points, sorted)."""
        zs = as_complex(z)
        zs = zs.conjugate() if self.anti else zs
        return _sph(self._slice_roots(self._charts[0, 0][0], self._charts[1, 0][0], zs))

    def backward(self, w) -> list:
        w = as_complex(w)
        Pt = self.P.swap()
        Pt_flip = self._charts[0, 1][0].swap()
        r = self._slice_roots(Pt, Pt_flip, w)
        if self.anti:
            r = np.conj(r)
        return _sph(r)

    @staticmethod
    def _slice_roots(Q, Q_flip, x) -> np.ndarray:
        if math.isfinite(abs(x)) and abs(x) <= 1.0:
            p, drop = Q.slice_w_drop(x)
        else:
            u = 0j if not math.isfinite(abs(x)) else 1.0 / x
            p, drop = Q_flip.slice_w_drop(u)
        if p.is_zero():
            raise HolocorrError("slice vanishes identically: the curve contains a vertical line")
        finite = roots(p) if p.degree > 0 else np.zeros(0, complex)
        return np.concatenate([finite, np.full(drop, INF)])

    def branch_derivative(self, z, w, tol: float = 1e-8) -> float:
        """Spherical derivative magnitude of the branch through ``(z, w)``."""
        z, w = as_complex(z), as_complex(w)
        val, pz, pw, lf, sc, szz, sww = (np.asarray(a).item() for a in self._chart_partials(z, w))
        if abs(val) > tol * max(sc, 1e-300):
            raise NotOnCurveError(f"({z}, {w}) is not on the curve (residual {abs(val) / sc:.2e})")
        if abs(pz) <= 1e-10 * max(szz, 1e-300) and abs(pw) <= 1e-10 * max(sww, 1e-300):
            raise SingularPointError(f"({z}, {w}) is a singular point of the curve")
        if pz == 0:
            return 0.0
        if pw == 0:
            return math.inf
        return float(abs(pz) / abs(pw) * math.exp(lf))

    def multiplier(self, z, w) -> complex:
        """Complex derivative ``dw/dz`` (``dw/d conj z`` for anti kind), finite charts."""
        z, w = as_complex(z), as_complex(w)
        zs = z.conjugate() if self.anti else z
        pz = complex(self.P.partial_z()(zs, w))
        pw = complex(self.P.partial_w()(zs, w))
        if pw == 0:
            return complex(math.inf, 0)
        return -pz / pw

    # ---------------------------------------------------- critical data
    def _projected_ramification(self, eliminate: str) -> list:
        """Values of the surviving variable over which the other one ramifies.

        ``eliminate == "z"`` gives the critical values of F (in w);
        ``"w"`` gives those of F^-1 (in the first variable of P).
        Every chart pair is searched and candidate roots are validated
        against an actual multiple root of the slice.
        """
        found = []
        for (fz, fw), (Q, Qz, Qw) in self._charts.items():
            if eliminate == "z":
                A, dA, flip_out = Q, Qz, fw
            else:
                A, dA, flip_out = Q.swap(), Qw.swap(), fz
            if A.dz == 0:
                continue
            try:
                R = resultant_z(A, dA)
            except DegenerateResultantError as e:
                raise DegenerateResultantError(f"degenerate curve: {e}") from e
            cand = roots(R, tol=1e-10) if R.degree > 0 else np.zeros(0, complex)
            for v in cand:
                if abs(v) > 1.0 + 1e-6:
                    continue
                sl = A.slice_z(v)
                if sl.degree < 1:
                    # ramification sits at the eliminated variable's infinity;
                    # the flipped chart finds it
                    continue
                rr = roots(sl, tol=1e-12)
                ok = False
                for r in rr:
                    if abs(r) > 1.0 + 1e-6:
                        continue
                    g = abs(complex(dA(r, v))) / max(float(dA.abs_scale(r, v)), 1e-300)
                    if g <= 1e-6:
                        ok = True
                        break
                if ok:
                    found.append(INF if (flip_out and v == 0) else (1.0 / v if flip_out else v))
        return dedupe(found)

    def critical_values_forward(self) -> list:
        return _sph(self._projected_ramification("z"))

    def critical_values_backward(self) -> list:
        pts = self._projected_ramification("w")
        if self.anti:
            pts = [np.conj(p) for p in pts]
        return _sph(pts)

    def singular_points(self) -> list:
        """``Sing_F``: backward critical values plus finite z over which a sheet escapes to infinity."""
        pts = [p.z for p in self.critical_values_backward()]
        lp = UniPoly(self.P.coeffs[:, self.dw])
        extra = list(roots(lp, tol=1e-12)) if lp.degree >= 1 else []
        if self.anti:
            extra = [np.conj(e) for e in extra]
        return _sph(dedupe(pts + extra))

    def postcritical_backward(self, depth: int, grid_res: float = 1e-6) -> PointCloud:
        """``F^{-i}(CV_{F^-1})`` for ``i <= depth``, deduplicated."""
        if depth < 0:
            raise ValueError("depth must be >= 0")
        level = np.array([p.z for p in self.critical_values_backward()], dtype=complex)
        acc = [level]
        for _ in range(depth):
            if len(level) == 0:
                break
            level = self.backward_many(level).ravel()
            level = PointCloud.from_points(level, grid_res).points
            acc.append(level)
        return PointCloud.from_points(np.concatenate(acc) if acc else [], grid_res, depth=depth)

    # ---------------------------------------------------- fixed points
    def fixed_points(self) -> list:
        """Period-one points with their multipliers and classification."""
        if self.anti:
            pts = self._anti_fixed_points()
        else:
            D = self.P.diagonal()
            if D.is_zero():
                raise HolocorrError("the curve contains the diagonal: every point is fixed")
            deficit = self.dz + self.dw - D.degree
            pts = list(roots(D, tol=1e-12)) if D.degree > 0 else []
            pts += [INF] * deficit
        # group multiplicities
        groups = []
        for z in pts:
            for g in groups:
                if chordal(g[0], z) <= 1e-6:
                    g[1] += 1
                    break
            else:
                groups.append([z, 1])
        out = []
        for z, mult in groups:
            out.append(self._classify_fixed(z, mult))
        return out

    def _classify_fixed(self, z, mult) -> FixedPoint:
        try:
            d = self.branch_derivative(z, z, tol=1e-6)
        except SingularPointError:
            return FixedPoint(SpherePoint.from_complex(z), math.nan, "singular", None, mult)
        m = None
        order = None
        if not self.anti and math.isfinite(abs(z)):
            m = self.multiplier(z, z)
        if math.isinf(d) or d > 1 + INDIFFERENT_BAND:
            cls = "repelling"
        elif d < 1 - INDIFFERENT_BAND:
            cls = "attracting"
        else:
            cls = "indifferent"
            if m is not None and math.isfinite(abs(m)):
                order = root_of_unity_order(m)
        return FixedPoint(SpherePoint.from_complex(z), d, cls, m, mult, order)

    def _anti_fixed_points(self, n_grid: int = 13, extent: float = 3.0) -> list:
        """Solutions of ``P(conj z, z) = 0`` by damped Newton on the real 2x2 system."""
        P, P1, Pw = self.P, self.P.partial_z(), self.P.partial_w()
        sols = []
        for chart in (0, 1):
            if chart == 0:
                G, G1, G2 = P, P1, Pw
            else:
                Q = P.flip_z(P.dz).flip_w(P.dw)
                G, G1, G2 = Q, Q.partial_z(), Q.partial_w()
            xs = np.linspace(-extent, extent, n_grid) if chart == 0 else np.linspace(-1, 1, 7)
            for x0 in xs:
                for y0 in xs:
                    z = complex(x0, y0) + 1e-3j * 0.37
                    z = _damped_newton_anti(G, G1, G2, z)
                    if z is None:
                        continue
                    if chart == 0:
                        sols.append(z)
                    elif chart == 1 and abs(z) <= 1.0:
                        sols.append(INF if abs(z) < 1e-12 else 1.0 / z)
        out = []
        for z in sols:
            if all(chordal(z, y) > 1e-5 for y in out):
                out.append(z)
        return sorted(out, key=lambda v: (v.real, v.imag))

    # ---------------------------------------------------- diagnostics
    def inverse_like_check(self, cloud: PointCloud, tol: float) -> dict:
        """Fraction of cloud points with exactly one backward image near the cloud."""
        if len(cloud) == 0:
            raise ValueError("cloud must be nonempty")
        pts = cloud.points
        back = self.backward_many(pts)
        d = cloud.distance_to(back.ravel()).reshape(back.shape)
        counts = np.sum(d <= tol, axis=1)
        viol = [
            {"w": SpherePoint.from_complex(w).to_json(), "count": int(c)}
            for w, c in zip(pts, counts)
            if c != 1
        ]
        return {"fraction_unique": float(np.mean(counts == 1)), "violations": viol}


def _damped_newton_anti(G, G1, G2, z, maxiter: int = 200):
    """Newton for g(z) = G(conj z, z) = 0 on R^2 with backtracking."""

    def g(v):
        return complex(G(np.conj(v), v))

    val = g(z)
    for _ in range(maxiter):
        a = complex(G1(np.conj(z), z))
        b = complex(G2(np.conj(z), z))
        # d/dx = a + b ; d/dy = -i a + i b
        gx, gy = a + b, 1j * (b - a)
        J = np.array([[gx.real, gy.real], [gx.imag, gy.imag]])
        try:
            step = np.linalg.solve(J, [-val.real, -val.imag])
        except np.linalg.LinAlgError:
            return None
        dz = complex(step[0], step[1])
        t = 1.0
        while t > 1e-4:
            cand = z + t * dz
            cv = g(cand)
            if abs(cv) < abs(val) or abs(cv) == 0:
                break
            t *= 0.5
        else:
            break
        z, val = cand, cv
        if abs(val) <= 1e-15 * max(float(G.abs_scale(np.conj(z), z)), 1e-300) or abs(dz) < 1e-15:
            break
    if abs(val) <= 1e-10 * max(float(G.abs_scale(np.conj(z), z)), 1e-300):
        return z
    return None


def root_of_unity_order(m: complex, tol: float = 1e-6) -> int | None:
    """Order q if ``m`` is within ``tol`` of a primitive q-th root of unity (q <= 64)."""
    if abs(abs(m) - 1) > INDIFFERENT_BAND * 10:
        return None
    t = (np.angle(m) / (2 * np.pi)) % 1.0
    fr = Fraction(t).limit_denominator(MAX_ROOT_OF_UNITY_ORDER)
    if abs(t - float(fr)) <= tol or abs(t - float(fr) - 1) <= tol:
        return fr.denominator
    return None


def _jsonable(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


# module-level aliases matching the operation names
def forward(c: Correspondence, z):
    return c.forward(z)


def backward(c: Correspondence, w):
    return c.backward(w)


def branch_derivative(c: Correspondence, z, w):
    return c.branch_derivative(z, w)


def critical_values_forward(c: Correspondence):
    return c.critical_values_forward()


def critical_values_backward(c: Correspondence):
    return c.critical_values_backward()


def singular_points(c: Correspondence):
    return c.singular_points()


def postcritical_backward(c: Correspondence, depth: int, grid_res: float = 1e-6):
    return c.postcritical_backward(depth, grid_res)


def fixed_points(c: Correspondence):
    return c.fixed_points()


def inverse_like_check(c: Correspondence, cloud: PointCloud, tol: float):
    return c.inverse_like_check(cloud, tol)
