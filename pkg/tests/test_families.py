import numpy as np
import pytest

from holocorr.errors import HolocorrError
from holocorr.families import (
    bullett_penrose,
    bullett_penrose_relation,
    from_rational_inverse,
    llmm,
    univalence_diagnostic,
)
from holocorr.sphere import chordal


def test_rational_inverse_polynomial():
    c = from_rational_inverse([0.25, 0, 1])
    # P = w^2 + 1/4 - z
    assert np.allclose(c.P.coeffs, [[0.25, 0, 1], [-1, 0, 0]])
    with pytest.raises(HolocorrError):
        from_rational_inverse([-1, 0, 1], [1, 1])  # common factor (w + 1)
    with pytest.raises(ValueError):
        from_rational_inverse([3])


def test_bullett_penrose_degrees_and_relation(bp4, rng):
    assert (bp4.dz, bp4.dw) == (2, 2)
    z = rng.normal(size=20) + 1j * rng.normal(size=20)
    W = bp4.forward_many(z)
    rel = bullett_penrose_relation(4.0, np.repeat(z, 2), W.ravel())
    assert np.max(np.abs(rel)) < 1e-9


def test_bullett_penrose_parabolic_point(bp4):
    w = [p.z for p in bp4.forward(0)]  # already sorted by real part
    assert w[0] == pytest.approx(0, abs=1e-12)
    assert w[1] == pytest.approx(0.5, abs=1e-12)  # 3 / (a + 2)
    assert bp4.multiplier(0, 0) == pytest.approx(1.0, abs=1e-12)
    assert bp4.branch_derivative(0, 0.5) == pytest.approx(0.0, abs=1e-12)


def test_llmm_quadratic_polynomial(llmm_quadratic):
    c = llmm_quadratic
    P = c.P.coeffs / np.max(np.abs(c.P.coeffs))
    # 1 + 2 zbar + zbar w, normalised
    assert np.allclose(P, np.array([[1, 0], [2, 1]]) / 2, atol=1e-12)
    z = 2 + 1j
    (w,) = c.forward(z)
    assert w.z == pytest.approx(-2 - 1 / np.conj(z))


def test_llmm_fixes_minus_one(llmm_quadratic):
    (w,) = llmm_quadratic.forward(-1)
    assert w.z == pytest.approx(-1, abs=1e-12)
    fps = llmm_quadratic.fixed_points()
    assert min(chordal(f.point.z, -1) for f in fps) < 1e-6


def test_llmm_cubic_is_two_to_two():
    c = llmm([0, 1, 0, 1 / 3])
    assert c.dw == 2
    assert c.anti


def test_univalence_diagnostic():
    assert univalence_diagnostic([0, 1, 0.5])["injective_on_samples"]
    # w + w^2 has a critical point at -1/2 inside the disk
    assert not univalence_diagnostic([0, 1, 1])["injective_on_samples"]


def test_llmm_rejects_low_degree():
    with pytest.raises(ValueError):
        llmm([0, 1])
