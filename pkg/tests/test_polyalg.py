import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holocorr.errors import DegenerateResultantError, NotDivisibleError
from holocorr.polyalg import (
    BiPoly,
    UniPoly,
    batch_roots,
    divide_exact,
    resultant_w,
    resultant_z,
    roots,
    square_free,
)


def test_roots_simple_and_multiple():
    assert np.allclose(roots(UniPoly([-1, 0, 1])), [-1, 1])
    assert np.allclose(roots(UniPoly([0, 0, 1])), [0, 0])
    r = roots(UniPoly([-1, 3, -3, 1]))  # (w-1)^3
    assert np.allclose(r, [1, 1, 1], atol=1e-10)


def test_roots_sorted_by_real_then_imag():
    r = roots(UniPoly([1, 0, 1]))
    assert r[0] == pytest.approx(-1j) and r[1] == pytest.approx(1j)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**31 - 1))
def test_roots_reconstruct_polynomial(deg, seed):
    rng = np.random.default_rng(seed)
    true = rng.normal(size=deg) + 1j * rng.normal(size=deg)
    coeffs = np.poly(true)[::-1]
    r = roots(UniPoly(coeffs))
    back = np.poly(r)[::-1]
    assert np.max(np.abs(back - coeffs)) <= 1e-9 * np.max(np.abs(coeffs))


def test_batch_roots_degree_drop_gives_infinity():
    C = np.array([[1, 2, 0], [-1, 0, 1]], complex)  # 1 + 2w (drop) ; w^2 - 1
    R = batch_roots(C)
    assert np.isinf(R[0]).sum() == 1
    assert R[0][np.isfinite(R[0])][0] == pytest.approx(-0.5)
    assert np.allclose(R[1], [-1, 1])


def test_divide_exact():
    # (w^2 - u^2) / (w - u) = w + u, first index is u
    N = BiPoly([[0, 0, 1], [0, 0, 0], [-1, 0, 0]])
    Q = divide_exact(N)
    assert Q.allclose(BiPoly([[0, 1], [1, 0]]))
    with pytest.raises(NotDivisibleError):
        divide_exact(BiPoly([[0, 0, 1], [-1, 0, 0]]))  # w^2 - u


def test_resultants():
    # Res_z(z - w, z - 1) = w - 1 up to sign
    P = BiPoly([[0, -1], [1, 0]])
    Q = BiPoly([[-1], [1]])
    R = resultant_z(P, Q)
    r = roots(R)
    assert len(r) == 1 and r[0] == pytest.approx(1.0)
    # discriminant of z^2 - w in z vanishes at w = 0
    P2 = BiPoly([[0, -1], [0, 0], [1, 0]])
    r2 = roots(resultant_z(P2, P2.partial_z()))
    assert np.allclose(r2, 0, atol=1e-8)
    with pytest.raises(DegenerateResultantError):
        resultant_w(P2, P2)


def test_bipoly_slices_and_json():
    P = BiPoly([[1, 2], [3, 4j]])  # 1 + 2w + 3z + 4i zw
    assert P(2, 3) == pytest.approx(1 + 6 + 6 + 24j)
    assert np.allclose(P.slice_w(2).coeffs, [7, 2 + 8j])
    Q = BiPoly.from_json(P.to_json())
    assert Q.allclose(P)
    assert P.partial_z()(0, 1) == pytest.approx(3 + 4j)
    assert P.partial_w()(1, 0) == pytest.approx(2 + 4j)


def test_square_free_removes_repeated_factor():
    base = BiPoly([[0, 0, 1], [-1, 0, 0]])  # w^2 - z
    sq = base * base
    Q, reduced = square_free(sq)
    assert reduced
    assert (Q.dz, Q.dw) == (1, 2)
    Q2, reduced2 = square_free(base)
    assert not reduced2
