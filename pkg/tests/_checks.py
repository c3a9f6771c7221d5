"""Property checks shared by the hypothesis tests and the acceptance suite.

Each check takes a correspondence and a sample point and returns ``None`` on
success or a short failure message. ``draw_case`` produces generic samples:
points where forward images are well separated and derivatives are moderate,
because the properties are statements about non-critical germs.
"""

import numpy as np

from holocorr.correspondence import Correspondence
from holocorr.families import bullett_penrose, conjugation, from_rational_inverse, llmm
from holocorr.polyalg import BiPoly
from holocorr.sphere import chordal, spherical_scale


def pool(rng):
    a = 4 + rng.normal() + 1j * rng.normal()
    P = BiPoly(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    return [
        from_rational_inverse([0, 0, 1]),
        from_rational_inverse([0.25, 0, 1]),
        from_rational_inverse([1, 2, 0, 1], [1, 0, 3]),
        bullett_penrose(a),
        llmm([0, 1, 0.5]),
        llmm([0, 1, 0, 1 / 3]),
        conjugation(),
        Correspondence(P, "holo", "random"),
        Correspondence(P, "anti", "random"),
    ]


def draw_point(rng):
    r = 10 ** rng.uniform(-2, 2)
    return r * np.exp(2j * np.pi * rng.random())


def generic(c, z, sep=1e-3):
    W = c.forward_many(np.array([z]))[0]
    if not np.all(np.isfinite(W)):
        return False
    if len(W) > 1:
        d = chordal(W[:, None], W[None, :])
        np.fill_diagonal(d, 9)
        if d.min() < sep:
            return False
    D = c.branch_derivative_many(np.full(len(W), z), W)
    return bool(np.all((D > 1e-4) & (D < 1e4)))


def draw_case(rng, cases):
    while True:
        c = cases[rng.integers(len(cases))]
        z = draw_point(rng)
        if generic(c, z):
            return c, z


def check_multiplicity(c, z):
    fw = c.forward(z)
    if len(fw) != c.dw:
        return f"{len(fw)} forward images, expected {c.dw}"
    bw = c.backward(z)
    if len(bw) != c.dz:
        return f"{len(bw)} backward images, expected {c.dz}"
    W = np.array([p.z for p in fw])
    res = c.curve_residual(np.full(len(W), z), W)
    if np.max(res) > 1e-9:
        return f"curve residual {np.max(res):.2e}"
    return None


def check_duality(c, z):
    for p in c.forward(z):
        pre = np.array([q.z for q in c.backward(p.z)])
        if np.min(chordal(pre, z)) > 1e-7:
            return f"{z} not among the preimages of its image {p.z}"
    return None


def _continue(c, z_new, w_old):
    W = c.forward_many(np.array([z_new]))[0]
    return W[np.argmin(chordal(W, w_old))]


def check_chain_rule(c, z, h=1e-6):
    """Two-step branch: product of spherical derivatives vs a finite difference."""
    w = c.forward_many(np.array([z]))[0][0]
    if not generic(c, w):
        return None
    v = c.forward_many(np.array([w]))[0][0]
    prod = c.branch_derivative(z, w) * c.branch_derivative(w, v)
    # a step of chordal length about h
    step = h * (1 + abs(z) ** 2) / 2 * np.exp(0.37j)
    z2 = z + step
    w2 = _continue(c, z2, w)
    v2 = _continue(c, w2, v)
    fd = float(chordal(v, v2) / chordal(z, z2))
    if abs(fd / prod - 1) > 1e-4:
        return f"chain rule {prod:.8g} vs finite difference {fd:.8g}"
    return None


def check_chart_independence(c, z):
    """|Df| in the original chart equals |Df| of the correspondence conjugated by 1/z."""
    Q = Correspondence(c.P.flip_z(c.P.dz).flip_w(c.P.dw), c.kind, "inverted")
    for p in c.forward(z):
        w = p.z
        d0 = c.branch_derivative(z, w)
        d1 = Q.branch_derivative(1 / z, 1 / w)
        if abs(d1 / d0 - 1) > 1e-8:
            return f"inverted chart gives {d1:.12g}, original {d0:.12g}"
        # and the Euclidean multiplier rescaled by the chart factors
        m = abs(c.multiplier(z, w))
        d2 = spherical_scale(z, w, m)
        if abs(d2 / d0 - 1) > 1e-8:
            return f"spherical_scale gives {d2:.12g}, branch_derivative {d0:.12g}"
    return None


CHECKS = {
    "multiplicity conservation": check_multiplicity,
    "forward/backward duality": check_duality,
    "chain rule vs finite differences": check_chain_rule,
    "chart independence": check_chart_independence,
}


def run_suite(seed=2024, n=1000):
    """Failures per property over ``n`` seeded generic samples each."""
    rng = np.random.default_rng(seed)
    out = {}
    for name, check in CHECKS.items():
        fails = []
        for k in range(n):
            if k % 100 == 0:
                cases = pool(rng)
            c, z = draw_case(rng, cases)
            msg = check(c, z)
            if msg:
                fails.append((c.family, c.kind, z, msg))
        out[name] = fails
    return out
