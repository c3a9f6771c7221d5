import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holocorr.sphere import (
    INF,
    SpherePoint,
    as_complex,
    chordal,
    chordal_distance,
    from_sphere,
    invert_chart,
    spherical_scale,
    to_sphere,
)

finite = st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)


def test_chordal_known_values():
    assert chordal_distance(0, INF) == pytest.approx(2.0, abs=1e-15)
    assert chordal_distance(1, -1) == pytest.approx(2.0, abs=1e-15)
    assert chordal_distance(1j, 1j) == 0.0
    # 2|a-b| / sqrt((1+|a|^2)(1+|b|^2)) with a=0, b=1
    assert chordal_distance(0, 1) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_chordal_matches_embedding():
    rng = np.random.default_rng(1)
    a = rng.normal(size=500) * 10 ** rng.uniform(-3, 3, 500) * np.exp(2j * np.pi * rng.random(500))
    b = rng.normal(size=500) * 10 ** rng.uniform(-3, 3, 500) * np.exp(2j * np.pi * rng.random(500))
    emb = np.linalg.norm(to_sphere(a) - to_sphere(b), axis=-1)
    assert np.allclose(chordal(a, b), emb, atol=1e-14)


def test_sphere_point_chart_switch():
    p = SpherePoint.from_complex(1e9)
    assert p.chart == 1
    assert p.z == pytest.approx(1e9)
    assert SpherePoint.from_complex("inf").at_infinity
    assert SpherePoint.infinity().to_json() == "inf"
    assert SpherePoint.from_json([1.5, -2.0]).z == complex(1.5, -2.0)
    assert as_complex(SpherePoint.infinity()) == INF


def test_spherical_scale_oracle():
    # w^2 = z at (4, 2): |dw/dz| = 1/4, times (1+16)/(1+4)
    assert spherical_scale(4, 2, 0.25) == pytest.approx(0.85, rel=1e-14)


def test_invert_chart():
    assert invert_chart(2).z == pytest.approx(0.5)
    assert invert_chart(0).at_infinity
    assert invert_chart(1j).z == pytest.approx(-1j)


def test_from_sphere_roundtrip():
    z = np.array([0, 1, -1j, 3 + 4j, 1e-7, 1e7, INF])
    back = from_sphere(to_sphere(z))
    assert np.all(chordal(back, z) < 1e-12)


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite)
def test_chordal_is_a_metric(a, b, c):
    ab, bc, ac = chordal(a, b), chordal(b, c), chordal(a, c)
    assert 0 <= ab <= 2 + 1e-12
    assert ab == pytest.approx(float(chordal(b, a)), abs=1e-15)
    assert ac <= ab + bc + 1e-12


@settings(max_examples=200, deadline=None)
@given(finite, finite)
def test_inversion_is_an_isometry(a, b):
    ia, ib = invert_chart(a).z, invert_chart(b).z
    assert float(chordal(ia, ib)) == pytest.approx(float(chordal(a, b)), abs=1e-12)
