"""Constructors for the bundled correspondence families."""

from __future__ import annotations

import numpy as np

from .correspondence import ANTI, HOLO, Correspondence
from .errors import HolocorrError, NotDivisibleError
from .polyalg import BiPoly, UniPoly, divide_exact, roots, uni_gcd_degree


def _uni(p) -> UniPoly:
    return p if isinstance(p, UniPoly) else UniPoly(p)


def remove_line_factors(P: BiPoly, z_loci=(), w_loci=(), tol: float = 1e-12):
    """Divide out factors ``(z - a)`` and ``(w - b)`` that vanish identically.

    Clearing denominators can introduce such vertical or horizontal lines.
    Returns the reduced polynomial and the removed loci.
    """
    removed = []
    for axis, loci in (("z", z_loci), ("w", w_loci)):
        for a in loci:
            while True:
                Q = P if axis == "z" else P.swap()
                sl = Q.slice_coeffs_w(np.array([a]))[0]
                if Q.dz == 0 or np.max(np.abs(sl)) > tol * Q.scale():
                    break
                # synthetic division of each column by (z - a)
                c = Q.coeffs
                out = np.zeros((c.shape[0] - 1, c.shape[1]), complex)
                carry = np.zeros(c.shape[1], complex)
                for i in range(c.shape[0] - 1, 0, -1):
                    carry = c[i] + a * carry
                    out[i - 1] = carry
                Q = BiPoly(out)
                P = Q if axis == "z" else Q.swap()
                removed.append({"variable": axis, "value": [complex(a).real, complex(a).imag]})
    return P, removed


def _strip_monomial_z(P: BiPoly):
    """Remove a power of the first variable dividing every coefficient."""
    c = P.coeffs
    k = 0
    while k < c.shape[0] - 1 and not np.any(c[k]):
        k += 1
    return BiPoly(c[k:]), k


def from_rational_inverse(p, q=(1.0,)) -> Correspondence:
    """Correspondence whose forward map is ``R^{-1}`` for ``R = p/q``.

    ``P(z, w) = p(w) - z q(w)``.
    """
    p, q = _uni(p), _uni(q)
    if p.is_zero() or q.is_zero():
        raise ValueError("p and q must be nonzero")
    deg = max(p.degree, q.degree)
    if deg < 1:
        raise ValueError("R must be nonconstant")
    if uni_gcd_degree(p, q) > 0:
        raise HolocorrError("p and q share a common factor")
    c = np.zeros((2, deg + 1), complex)
    c[0, : len(p.coeffs)] = p.coeffs
    c[1, : len(q.coeffs)] = -q.coeffs
    return Correspondence(
        BiPoly(c), HOLO, "rational-inverse",
        {"p": p.coeffs.tolist(), "q": q.coeffs.tolist()},
    )


def bullett_penrose_poly(a: complex) -> BiPoly:
    """The cleared Bullett-Penrose relation for parameter ``a``."""
    a = complex(a)
    A = BiPoly([[-1, a]])  # a w - 1
    W1 = BiPoly([[-1, 1]])  # w - 1
    B = BiPoly([[1], [a]])  # a z + 1
    Z1 = BiPoly([[1], [1]])  # z + 1
    three = BiPoly([[3]])
    return A * A * Z1 * Z1 + A * W1 * B * Z1 + B * B * W1 * W1 - three * W1 * W1 * Z1 * Z1


def bullett_penrose(a: complex) -> Correspondence:
    """The 2-to-2 Bullett-Penrose correspondence ``F_a``."""
    P = bullett_penrose_poly(a)
    P, removed = remove_line_factors(P, z_loci=(-1,), w_loci=(1,))
    P = P.trimmed(1e-14)
    if P.dz != 2 or P.dw != 2:
        raise HolocorrError(f"degree collapse for a={a}: got ({P.dz}, {P.dw})")
    return Correspondence(P, HOLO, "bullett-penrose", {"a": complex(a)},
                          {"removed_loci": removed})


def bullett_penrose_relation(a, z, w):
    """Original rational relation (before clearing denominators); zero on the curve."""
    A = (a * w - 1) / (w - 1)
    B = (a * z + 1) / (z + 1)
    return A * A + A * B + B * B - 3


def llmm(p, q=(1.0,)) -> Correspondence:
    """Antiholomorphic correspondence ``(f(w) - f(eta z)) / (w - eta z) = 0``.

    ``f = p/q`` with ``eta(z) = 1/conj(z)``. Univalence of ``f`` on the closed
    disk is the caller's responsibility; see :func:`univalence_diagnostic`.
    """
    p, q = _uni(p), _uni(q)
    deg = max(p.degree, q.degree)
    if deg < 2:
        raise ValueError("f must have degree at least 2")
    if uni_gcd_degree(p, q) > 0:
        raise HolocorrError("p and q share a common factor")
    pc = np.zeros(deg + 1, complex)
    qc = np.zeros(deg + 1, complex)
    pc[: len(p.coeffs)] = p.coeffs
    qc[: len(q.coeffs)] = q.coeffs
    # N(u, w) = p(w) q(u) - p(u) q(w), first index u
    N = BiPoly(np.outer(qc, pc) - np.outer(pc, qc))
    try:
        Q = divide_exact(N)
    except NotDivisibleError as e:
        raise HolocorrError(f"malformed f: {e}") from e
    # u = 1/zbar, cleared by zbar^deg_u
    P = Q.flip_z(Q.dz).trimmed(1e-14)
    P, k = _strip_monomial_z(P)
    removed = [{"variable": "zbar", "value": [0.0, 0.0], "power": k}] if k else []
    return Correspondence(P, ANTI, "llmm", {"p": p.coeffs.tolist(), "q": q.coeffs.tolist()},
                          {"removed_loci": removed})


def univalence_diagnostic(p, q=(1.0,), n: int = 720) -> dict:
    """Sampling check that ``f = p/q`` is injective on the closed unit disk.

    Checks for poles in the closed disk, critical points in the open disk
    (boundary critical points are allowed) and self-intersections of the
    sampled boundary image. Not a proof.
    """
    p, q = _uni(p), _uni(q)
    poles = roots(q) if q.degree > 0 else np.zeros(0)
    num = p.deriv() * q - p * q.deriv()
    crit = roots(num) if num.degree > 0 else np.zeros(0)
    t = np.exp(2j * np.pi * np.arange(n) / n)
    img = p(t) / q(t)
    seg_a, seg_b = img, np.roll(img, -1)
    crossings = 0
    for k in range(n):
        a, b = seg_a[k], seg_b[k]
        c, d = seg_a, seg_b
        # proper segment intersections, skipping neighbours
        mask = np.ones(n, bool)
        mask[[k, (k - 1) % n, (k + 1) % n]] = False
        crossings += int(np.sum(mask & _segments_cross(a, b, c, d)))
    n_poles = int(np.sum(np.abs(poles) <= 1))
    n_crit = int(np.sum(np.abs(crit) < 1 - 1e-9))
    return {
        "poles_in_disk": n_poles,
        "critical_points_in_disk": n_crit,
        "boundary_self_crossings": crossings // 2,
        "injective_on_samples": n_poles == 0 and n_crit == 0 and crossings == 0,
    }


def _segments_cross(a, b, c, d):
    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    d1 = cross(b - a, c - a)
    d2 = cross(b - a, d - a)
    d3 = cross(d - c, a - c)
    d4 = cross(d - c, b - c)
    return (d1 * d2 < 0) & (d3 * d4 < 0)


def conjugation() -> Correspondence:
    """Complex conjugation ``w = conj(z)`` as a one-to-one antiholomorphic correspondence."""
    return Correspondence(BiPoly([[0, 1], [-1, 0]]), ANTI, "conjugation", {})
