"""Univariate and bivariate complex polynomials.

Coefficients are stored in ascending degree. ``BiPoly.coeffs[i, j]``
multiplies ``z**i * w**j``; the first variable is called ``z`` throughout
even when a caller feeds it ``conj(z)``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateResultantError, NotDivisibleError, RootSolveError

#: Relative size below which a leading coefficient counts as vanished.
LEAD_EPS = 1e-13


def _as_coeffs(c) -> np.ndarray:
    return np.atleast_1d(np.asarray(c, dtype=complex)).copy()


class UniPoly:
    """Univariate polynomial, ascending coefficients.

    The zero polynomial has an empty coefficient array.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = _as_coeffs(coeffs) if len(np.atleast_1d(coeffs)) else np.zeros(0, complex)
        nz = np.nonzero(c)[0]
        self.coeffs = c[: nz[-1] + 1] if len(nz) else np.zeros(0, complex)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        out = np.zeros_like(x)
        for c in self.coeffs[::-1]:
            out = out * x + c
        return out

    def deriv(self) -> "UniPoly":
        n = len(self.coeffs)
        return UniPoly(self.coeffs[1:] * np.arange(1, n)) if n > 1 else UniPoly()

    def trimmed(self, rel: float = LEAD_EPS) -> "UniPoly":
        """Drop leading coefficients that are negligible relative to the scale."""
        c = self.coeffs
        s = self.scale()
        k = len(c)
        while k > 0 and abs(c[k - 1]) <= rel * s:
            k -= 1
        return UniPoly(c[:k])

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero() or other.is_zero():
            return UniPoly()
        return UniPoly(np.convolve(self.coeffs, other.coeffs))

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        out = np.zeros(n, complex)
        out[: len(self.coeffs)] += self.coeffs
        out[: len(other.coeffs)] += other.coeffs
        return UniPoly(out)

    def __neg__(self) -> "UniPoly":
        return UniPoly(-self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, UniPoly) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"UniPoly({self.coeffs.tolist()})"


def uni_gcd_degree(p: UniPoly, q: UniPoly, tol: float = 1e-9) -> int:
    """Numerical degree of gcd(p, q) from the rank of their Sylvester matrix."""
    m, n = p.degree, q.degree
    if m <= 0 or n <= 0:
        return 0
    S = sylvester_matrix(p.coeffs / p.scale(), q.coeffs / q.scale())
    sv = np.linalg.svd(S, compute_uv=False)
    return int(np.sum(sv <= tol * sv[0]))


def sylvester_matrix(p, q) -> np.ndarray:
    """Sylvester matrix of ascending coefficient vectors ``p`` (deg m), ``q`` (deg n)."""
    p = np.asarray(p)[::-1]
    q = np.asarray(q)[::-1]
    m, n = len(p) - 1, len(q) - 1
    S = np.zeros((m + n, m + n), dtype=complex)
    for k in range(n):
        S[k, k : k + m + 1] = p
    for k in range(m):
        S[n + k, k : k + n + 1] = q
    return S


# --------------------------------------------------------------------- roots


def _horner_with_deriv(c, x):
    """p(x), p'(x) and the backward-error scale sum|c_i||x|^i; ascending c."""
    p = np.zeros_like(x)
    dp = np.zeros_like(x)
    s = np.zeros(x.shape)
    ax = np.abs(x)
    for a in c[::-1]:
        dp = dp * x + p
        p = p * x + a
        s = s * ax + abs(a)
    return p, dp, s


def _initial_guesses(c):
    n = len(c) - 1
    # radius from the geometric mean of the root moduli, with a phase offset
    # that avoids symmetric stagnation
    r = abs(c[0] / c[-1]) ** (1.0 / n) if c[0] != 0 else 1.0
    if not np.isfinite(r) or r == 0:
        r = 1.0
    k = np.arange(n)
    return r * np.exp(1j * (2 * np.pi * k / n + 0.4))


def _aberth(c, tol, maxiter):
    n = len(c) - 1
    z = _initial_guesses(c)
    converged = np.zeros(n, bool)
    for _ in range(maxiter):
        p, dp, s = _horner_with_deriv(c, z)
        small = np.abs(p) <= tol * s
        converged |= small
        if converged.all():
            break
        with np.errstate(all="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            corr = ratio / (1.0 - ratio * inv.sum(axis=1))
        corr = np.where(np.isfinite(corr), corr, 0.0)
        corr[converged] = 0.0
        z = z - corr
        if np.all(np.abs(corr) <= 1e-16 * np.maximum(np.abs(z), 1e-300)):
            break
    p, _, s = _horner_with_deriv(c, z)
    return z, np.abs(p) / np.maximum(s, 1e-300)


def _companion_roots(c):
    n = len(c) - 1
    C = np.zeros((n, n), dtype=complex)
    C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -c[:-1] / c[-1]
    return np.linalg.eigvals(C)


def _polish(c, z, steps=2):
    for _ in range(steps):
        p, dp, _ = _horner_with_deriv(c, z)
        with np.errstate(all="ignore"):
            step = p / dp
        z = np.where(np.isfinite(step), z - step, z)
    return z


def _cluster(z, tol, c=None):
    """Snap clustered roots to their centroid.

    An m-fold root splits under rounding into m roots within about
    ``tol**(1/m)`` of each other; scanning m from high to low, any root with
    exactly m unassigned roots (itself included) inside that radius starts a
    cluster.
    """
    n = len(z)
    out = z.copy()
    free = np.ones(n, bool)
    for m in range(n, 1, -1):
        for i in range(n):
            if not free[i]:
                continue
            rad = 2.0 * max(1.0, abs(z[i])) * tol ** (1.0 / m)
            near = np.nonzero(free & (np.abs(z - z[i]) <= rad))[0]
            if len(near) == m:
                centre = np.mean(z[near])
                if c is not None:
                    centre = _refine_multiple(c, centre, m)
                out[near] = centre
                free[near] = False
    return out


def _refine_multiple(c, x, m, steps=3):
    """Newton on the (m-1)-th derivative, which has a simple root at an m-fold root."""
    d = np.asarray(c)
    for _ in range(m - 1):
        d = d[1:] * np.arange(1, len(d))
    dd = d[1:] * np.arange(1, len(d))
    for _ in range(steps):
        num = np.polyval(d[::-1], x)
        den = np.polyval(dd[::-1], x) if len(dd) else 0
        if den == 0 or not np.isfinite(num / den):
            break
        step = num / den
        if abs(step) > 1e-2 * max(1.0, abs(x)):
            break
        x = x - step
    return x


def sort_roots(r) -> np.ndarray:
    r = np.asarray(r, dtype=complex)
    return r[np.lexsort((r.imag, r.real))]


def roots(p, tol: float = 1e-12, maxiter: int = 500) -> np.ndarray:
    """All roots of ``p`` with multiplicity, sorted by (re, im).

    Aberth-Ehrlich simultaneous iteration; falls back to companion-matrix
    eigenvalues when the iteration stalls. Near-multiple roots are clustered.
    Raises :class:`RootSolveError` for the zero polynomial or if neither
    method reaches backward error ``tol``.
    """
    p = p if isinstance(p, UniPoly) else UniPoly(p)
    if p.is_zero():
        raise RootSolveError("zero polynomial has no well-defined root set")
    c = p.coeffs
    nz = np.nonzero(c)[0][0]
    zeros = np.zeros(nz, complex)
    c = c[nz:] / c[-1]
    n = len(c) - 1
    if n == 0:
        return sort_roots(zeros)
    if n == 1:
        return sort_roots(np.concatenate([zeros, [-c[0]]]))
    # residual acceptance uses a looser bound than the stopping test: multiple
    # roots only reach sqrt-eps accuracy
    accept = max(tol, 1e-9)
    z, res = _aberth(c, tol, maxiter)
    zp = _polish(c, z, 1)
    resp = np.abs(_horner_with_deriv(c, zp)[0]) / np.maximum(_horner_with_deriv(c, zp)[2], 1e-300)
    better = resp < res
    z, res = np.where(better, zp, z), np.where(better, resp, res)
    if not np.all(res <= accept):
        z2 = _polish(c, _companion_roots(c))
        _, _, s = _horner_with_deriv(c, z2)
        res2 = np.abs(_horner_with_deriv(c, z2)[0]) / np.maximum(s, 1e-300)
        if np.max(res2) < np.max(res):
            z, res = z2, res2
    if not np.all(res <= accept):
        raise RootSolveError(
            f"root iteration did not converge (max residual {np.max(res):.3e})", residuals=res
        )
    z = _cluster(z, tol, c)
    return sort_roots(np.concatenate([zeros, z]))


def batch_roots(C: np.ndarray) -> np.ndarray:
    """Roots of many polynomials at once.

    ``C`` has shape ``(N, d+1)`` with ascending coefficients. Returns shape
    ``(N, d)``; a leading coefficient that vanishes relative to the row scale
    contributes a root at ``inf`` (degree drop). Roots in each row are sorted
    by (re, im), infinite ones last.
    """
    C = np.asarray(C, dtype=complex)
    N, d1 = C.shape
    d = d1 - 1
    out = np.full((N, d), complex(np.inf, 0))
    if N == 0 or d == 0:
        return out
    scale = np.max(np.abs(C), axis=1)
    # effective degree per row
    mag = np.abs(C) > LEAD_EPS * scale[:, None]
    eff = np.where(mag.any(axis=1), d1 - 1 - np.argmax(mag[:, ::-1], axis=1), -1)
    for k in range(1, d + 1):
        rows = np.nonzero(eff == k)[0]
        if len(rows) == 0:
            continue
        c = C[rows, : k + 1]
        out[rows, :k] = _batch_roots_exact_degree(c)
    # constant rows keep all roots at infinity; identically zero rows signal
    # a vertical line in the curve and are left to the caller
    re = np.where(np.isfinite(out.real), out.real, np.inf)
    im = np.where(np.isfinite(out.imag), out.imag, np.inf)
    order = np.lexsort((im, re))  # sorts along the last axis, row by row
    return np.take_along_axis(out, order, axis=1)


def _batch_roots_exact_degree(c: np.ndarray) -> np.ndarray:
    k = c.shape[1] - 1
    if k == 1:
        return (-c[:, 0] / c[:, 1])[:, None]
    if k == 2:
        a, b, cc = c[:, 2], c[:, 1], c[:, 0]
        disc = np.sqrt(b * b - 4 * a * cc)
        sgn = np.where((b.conj() * disc).real >= 0, 1.0, -1.0)
        q = -0.5 * (b + sgn * disc)
        with np.errstate(all="ignore"):
            r1 = q / a
            r2 = np.where(q != 0, cc / q, 0.0)
        r = np.stack([r1, r2], axis=1)
        return _batch_polish(c, r, 1)
    n = c.shape[0]
    M = np.zeros((n, k, k), dtype=complex)
    M[:, 1:, :-1] = np.eye(k - 1)
    M[:, :, -1] = -c[:, :-1] / c[:, -1:]
    r = np.linalg.eigvals(M)
    return _batch_polish(c, r, 2)


def _batch_polish(c, r, steps):
    for _ in range(steps):
        p = np.zeros_like(r)
        dp = np.zeros_like(r)
        for j in range(c.shape[1] - 1, -1, -1):
            dp = dp * r + p
            p = p * r + c[:, j : j + 1]
        with np.errstate(all="ignore"):
            step = p / dp
            new = r - step
        # only accept steps that do not move roots wildly (multiple roots)
        ok = np.isfinite(new) & (np.abs(step) <= 1e-3 * np.maximum(np.abs(r), 1.0))
        r = np.where(ok, new, r)
    return r


# ------------------------------------------------------------------ bivariate


class BiPoly:
    """Bivariate polynomial ``sum c[i, j] z**i w**j`` with tight degrees."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_2d(np.asarray(coeffs, dtype=complex)).copy()
        rows = np.nonzero(np.any(c != 0, axis=1))[0]
        cols = np.nonzero(np.any(c != 0, axis=0))[0]
        if len(rows) == 0:
            c = np.zeros((1, 1), complex)
        else:
            c = c[: rows[-1] + 1, : cols[-1] + 1]
        self.coeffs = c

    @property
    def dz(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def dw(self) -> int:
        return self.coeffs.shape[1] - 1

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        out = np.zeros(np.broadcast(z, w).shape, complex)
        for i in range(self.dz, -1, -1):
            row = np.zeros_like(out)
            for cij in self.coeffs[i, ::-1]:
                row = row * w + cij
            out = out * z + row
        return out

    def abs_scale(self, z, w):
        """``sum |c_ij| |z|^i |w|^j``, the backward-error reference size."""
        az = np.abs(np.asarray(z, dtype=complex))
        aw = np.abs(np.asarray(w, dtype=complex))
        out = np.zeros(np.broadcast(az, aw).shape)
        A = np.abs(self.coeffs)
        for i in range(self.dz, -1, -1):
            row = np.zeros_like(out)
            for a in A[i, ::-1]:
                row = row * aw + a
            out = out * az + row
        return out

    def slice_w(self, z0) -> UniPoly:
        """The polynomial ``w -> P(z0, w)``.

        A degree drop relative to ``dw`` means ``dw - degree`` roots at
        infinity; see :meth:`slice_w_drop`.
        """
        z0 = complex(z0)
        powers = z0 ** np.arange(self.dz + 1)
        return UniPoly(powers @ self.coeffs)

    def slice_w_drop(self, z0, rel: float = LEAD_EPS):
        """``(slice, drop)`` where ``drop`` counts roots at infinity."""
        p = self.slice_w(z0)
        full = (complex(z0) ** np.arange(self.dz + 1)) @ self.coeffs
        s = float(np.max(np.abs(full))) if len(full) else 0.0
        k = len(full)
        while k > 0 and abs(full[k - 1]) <= rel * s:
            k -= 1
        p = UniPoly(full[:k])
        return p, self.dw - p.degree if k else self.dw

    def slice_z(self, w0) -> UniPoly:
        w0 = complex(w0)
        return UniPoly(self.coeffs @ (w0 ** np.arange(self.dw + 1)))

    def slice_coeffs_w(self, z) -> np.ndarray:
        """Row-wise w-coefficients of ``P(z_k, .)`` for an array of ``z``."""
        z = np.asarray(z, dtype=complex).ravel()
        V = z[:, None] ** np.arange(self.dz + 1)
        return V @ self.coeffs

    def slice_coeffs_z(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=complex).ravel()
        V = w[:, None] ** np.arange(self.dw + 1)
        return V @ self.coeffs.T

    def partial_z(self) -> "BiPoly":
        if self.dz == 0:
            return BiPoly(np.zeros((1, 1)))
        return BiPoly(self.coeffs[1:] * np.arange(1, self.dz + 1)[:, None])

    def partial_w(self) -> "BiPoly":
        if self.dw == 0:
            return BiPoly(np.zeros((1, 1)))
        return BiPoly(self.coeffs[:, 1:] * np.arange(1, self.dw + 1)[None, :])

    def flip_z(self, dz: int | None = None) -> "BiPoly":
        """``z^dz P(1/z, w)``: the polynomial in the inverted z-chart."""
        dz = self.dz if dz is None else dz
        c = np.zeros((dz + 1, self.dw + 1), complex)
        c[dz - self.dz :] = self.coeffs[::-1]
        return BiPoly(c)

    def flip_w(self, dw: int | None = None) -> "BiPoly":
        dw = self.dw if dw is None else dw
        c = np.zeros((self.dz + 1, dw + 1), complex)
        c[:, dw - self.dw :] = self.coeffs[:, ::-1]
        return BiPoly(c)

    def swap(self) -> "BiPoly":
        """Exchange the roles of the two variables."""
        return BiPoly(self.coeffs.T)

    def diagonal(self) -> UniPoly:
        """``z -> P(z, z)``."""
        out = np.zeros(self.dz + self.dw + 1, complex)
        for i in range(self.dz + 1):
            out[i : i + self.dw + 1] += self.coeffs[i]
        return UniPoly(out)

    def normalized(self) -> "BiPoly":
        """Scaled so the largest coefficient has modulus one and is real positive."""
        c = self.coeffs
        k = np.unravel_index(np.argmax(np.abs(c)), c.shape)
        return BiPoly(c / c[k])

    def trimmed(self, rel: float = 1e-13) -> "BiPoly":
        c = self.coeffs.copy()
        c[np.abs(c) <= rel * self.scale()] = 0
        return BiPoly(c)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        a, b = self.coeffs, other.coeffs
        out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), complex)
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                if a[i, j] != 0:
                    out[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
        return BiPoly(out)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        a, b = self.coeffs, other.coeffs
        out = np.zeros((max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1])), complex)
        out[: a.shape[0], : a.shape[1]] += a
        out[: b.shape[0], : b.shape[1]] -= b
        return BiPoly(out)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        return self - BiPoly(-other.coeffs)

    def __eq__(self, other):
        return isinstance(other, BiPoly) and np.array_equal(self.coeffs, other.coeffs)

    def allclose(self, other: "BiPoly", atol: float = 1e-12) -> bool:
        d = self - other
        return bool(np.max(np.abs(d.coeffs)) <= atol)

    def to_json(self) -> dict:
        return {
            "dz": self.dz,
            "dw": self.dw,
            "coeffs": [[[float(c.real), float(c.imag)] for c in row] for row in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj) -> "BiPoly":
        c = np.array([[complex(re, im) for re, im in row] for row in obj["coeffs"]])
        p = cls(c)
        if (p.dz, p.dw) != (obj.get("dz", p.dz), obj.get("dw", p.dw)):
            raise ValueError("declared degrees do not match the coefficient grid")
        return p

    def __repr__(self):
        return f"BiPoly(dz={self.dz}, dw={self.dw}, coeffs={self.coeffs.tolist()})"


def partial_z(P: BiPoly) -> BiPoly:
    return P.partial_z()


def partial_w(P: BiPoly) -> BiPoly:
    return P.partial_w()


def slice_w(P: BiPoly, z0) -> UniPoly:
    return P.slice_w(z0)


def divide_exact(N: BiPoly, tol: float = 1e-10) -> BiPoly:
    """Quotient of ``N(u, w)`` by ``w - u``; ``u`` is the first variable.

    Synthetic division in ``w`` with coefficients in ``u``. Raises
    :class:`NotDivisibleError` when the remainder ``N(u, u)`` is not zero
    relative to the scale of ``N``.
    """
    c = N.coeffs
    du, dw = N.dz, N.dw
    if dw == 0:
        raise NotDivisibleError("numerator has no w dependence")
    # columns are polynomials in u (length du + 2 to hold the u-shift)
    cols = [np.concatenate([c[:, j], [0]]) for j in range(dw + 1)]
    Q = [None] * dw
    carry = np.zeros(du + 2, complex)
    for j in range(dw, 0, -1):
        q = cols[j] + carry
        Q[j - 1] = q
        carry = np.concatenate([[0], q[:-1]])  # u * q
    rem = cols[0] + carry
    if np.max(np.abs(rem)) > tol * max(N.scale(), 1e-300):
        raise NotDivisibleError(
            f"remainder of size {np.max(np.abs(rem)):.3e} after dividing by (w - u)"
        )
    return BiPoly(np.stack(Q, axis=1))


# ----------------------------------------------------------------- resultants


def _resultant_values(Pc_list, Qc_list):
    """Sylvester determinants for stacks of (z-coefficient) vectors."""
    vals = []
    for p, q in zip(Pc_list, Qc_list):
        vals.append(np.linalg.det(sylvester_matrix(p, q)) if len(p) + len(q) > 2 else 1.0)
    return np.array(vals, dtype=complex)


def resultant_z(P: BiPoly, Q: BiPoly, rel_zero: float = 1e-11) -> UniPoly:
    """``Res_z(P, Q)`` as a polynomial in ``w``.

    Evaluation-interpolation: Sylvester determinants (formal z-degrees) at
    roots of unity in ``w``, then an inverse DFT. Raises
    :class:`DegenerateResultantError` if the resultant vanishes identically.
    """
    if P.is_zero() or Q.is_zero():
        raise DegenerateResultantError("zero polynomial in resultant")
    m, n = P.dz, Q.dz
    if m == 0 and n == 0:
        return UniPoly([1.0])
    Pn, Qn = P.normalized(), Q.normalized()
    bound = m * Qn.dw + n * Pn.dw
    M = bound + 1
    ws = np.exp(2j * np.pi * np.arange(M) / M)
    Pc = Pn.slice_coeffs_z(ws)  # (M, m+1) ascending in z
    Qc = Qn.slice_coeffs_z(ws)
    vals = _resultant_values(Pc, Qc)
    # Hadamard-type size reference for the zero test
    ref = max(1.0, float(np.max(np.abs(Pc)))) ** n * max(1.0, float(np.max(np.abs(Qc)))) ** m
    if np.max(np.abs(vals)) <= rel_zero * ref:
        raise DegenerateResultantError("resultant vanishes identically: common factor")
    # samples on roots of unity: value_k = sum_j c_j ws_k^j, so c = ifft(values)
    coeffs = np.fft.ifft(vals)
    coeffs[np.abs(coeffs) <= 1e-12 * np.max(np.abs(coeffs))] = 0
    return UniPoly(coeffs)


def resultant_w(P: BiPoly, Q: BiPoly, rel_zero: float = 1e-11) -> UniPoly:
    """``Res_w(P, Q)`` as a polynomial in ``z``."""
    return resultant_z(P.swap(), Q.swap(), rel_zero)


# ---------------------------------------------------------------- square-free


def repeated_factor_degree(P: BiPoly, n_slices: int = 5, seed: int = 12345) -> int:
    """Generic w-degree of ``gcd(P, dP/dw)``, estimated at random z slices."""
    if P.dw <= 1:
        return 0
    rng = np.random.default_rng(seed)
    Pw = P.partial_w()
    degs = []
    for _ in range(n_slices):
        z0 = complex(*rng.normal(size=2)) * 0.7
        p, q = P.slice_w(z0), Pw.slice_w(z0)
        if p.degree < P.dw:
            continue
        degs.append(uni_gcd_degree(p, q))
    return min(degs) if degs else 0


def square_free(P: BiPoly, n_slices: int = 8, seed: int = 2024):
    """Square-free part of ``P`` with respect to ``w``.

    Returns ``(Q, reduced)``. When ``P`` has a repeated factor the square-free
    part is recovered as the null vector of the linear conditions
    ``Q(z_k, r) = 0`` over the distinct roots ``r`` of sampled slices.
    """
    g = repeated_factor_degree(P)
    if g == 0:
        return P, False
    dwq = P.dw - g
    rng = np.random.default_rng(seed)
    samples = []
    while len(samples) < (P.dz + 1) * (dwq + 1) + 4:
        z0 = complex(*rng.normal(size=2))
        r = roots(P.slice_w(z0), tol=1e-12)
        distinct = []
        for x in r:
            if all(abs(x - y) > 1e-5 * max(1, abs(x)) for y in distinct):
                distinct.append(x)
        samples.extend((z0, x) for x in distinct)
    for dzq in range(P.dz + 1):
        A = np.array(
            [[z**i * w**j for i in range(dzq + 1) for j in range(dwq + 1)] for z, w in samples]
        )
        _, sv, vh = np.linalg.svd(A)
        if sv[-1] <= 1e-8 * sv[0]:
            q = vh[-1].conj().reshape(dzq + 1, dwq + 1)
            Q = BiPoly(q).trimmed(1e-10).normalized()
            return Q, True
    raise RootSolveError("could not recover the square-free part")
