import numpy as np
import pytest

from holocorr.errors import DegenerateGrowthError, HolocorrError, InvalidBracketError
from holocorr.poincare import (
    LevelSums,
    critical_exponent,
    growth_fit,
    growth_rate,
    level_sums,
    modified_level_sums,
    poincare_partial_sum,
)


def test_level_sums_closed_form(squaring):
    assert level_sums(squaring, 1, 1.0, 3).a[3] == pytest.approx(1.0, rel=1e-12)
    assert level_sums(squaring, 1, 2.0, 3).a[3] == pytest.approx(1 / 8, rel=1e-12)
    ls = level_sums(squaring, 1, 1.3, 10)
    assert ls.a[0] == 1.0
    assert np.allclose(ls.a, 2.0 ** (np.arange(11) * (1 - 1.3)), rtol=1e-12)


def test_conjugation_level_sums(conj):
    ls = level_sums(conj, 0.2 + 0.1j, 0.7, 6)
    assert np.allclose(ls.a, 1.0)


def test_partial_sums(squaring):
    assert poincare_partial_sum(squaring, 1, 2.0, 10) == pytest.approx(2 - 2.0**-10, rel=1e-12)
    assert poincare_partial_sum(squaring, 1, 1.0, 10) == pytest.approx(11, rel=1e-12)
    assert poincare_partial_sum(squaring, 1, 1.0, 0) == 1.0


def test_growth_rate(squaring):
    assert growth_rate(level_sums(squaring, 1, 1.5, 12), 0.5) == pytest.approx(2**-0.5, rel=1e-10)
    assert growth_rate(level_sums(squaring, 1, 1.0, 12), 0.5) == pytest.approx(1.0, rel=1e-10)


def test_growth_rate_zero_tail():
    with pytest.raises(DegenerateGrowthError):
        growth_rate(LevelSums(1.0, np.array([1, 1, 0, 0, 0, 0, 0, 0.0])))


def test_growth_rate_matches_tail_ratios(cauliflower):
    ls = level_sums(cauliflower, 3, 1.3, 16)
    rho, r2 = growth_fit(ls)
    assert r2 > 0.99
    ratios = ls.a[9:] / ls.a[8:-1]
    assert np.all(np.abs(ratios / rho - 1) < 0.05)


def test_critical_exponent_squaring(squaring):
    est = critical_exponent(squaring, 1, tol=1e-3, depth=14)
    assert abs(est.delta - 1) <= 2e-3
    lo, hi = est.bracket
    assert lo <= est.delta <= hi and hi - lo <= 1e-3


def test_critical_exponent_chebyshev(chebyshev):
    est = critical_exponent(chebyshev, 1j, depth=16)
    assert est.delta == pytest.approx(1.0, abs=0.05)


def test_basepoint_stability(squaring):
    x = np.exp(0.7j)
    d1 = critical_exponent(squaring, x, depth=14, tol=1e-3).delta
    d2 = critical_exponent(squaring, x * np.exp(0.01j), depth=14, tol=1e-3).delta
    assert abs(d1 - d2) <= 1e-3


def test_conjugation_diverges_everywhere(conj):
    with pytest.raises(DegenerateGrowthError):
        critical_exponent(conj, 0.3 + 0.2j, depth=8)


def test_invalid_bracket(squaring):
    with pytest.raises(InvalidBracketError):
        critical_exponent(squaring, 1, s_lo=1.5, s_hi=2.5, depth=10)


def test_orbit_through_parabolic_rejected(cauliflower):
    # the basepoint is the parabolic point itself, fixed by one branch
    with pytest.raises(HolocorrError):
        critical_exponent(cauliflower, 0.5, depth=8)


def test_modified_level_sums(squaring):
    plain = level_sums(squaring, 1, 1.1, 8)
    same = modified_level_sums(squaring, 1, 1.1, 8, lambda t: 0, 1.0)
    assert np.allclose(plain.a, same.a)
    collapsed = modified_level_sums(squaring, 1, 1.0, 8, lambda t: 100, 1.0)
    assert np.allclose(collapsed.a, 1.0)
    mod = modified_level_sums(squaring, 1, 1.1, 8, lambda t: 5, 1.0)
    n = np.arange(9)
    expect = np.where(n < 5, 2.0 ** (n * (1 - 0.9)), 2.0 ** (n * (1 - 1.1)))
    assert np.allclose(mod.a, expect, rtol=1e-12)
