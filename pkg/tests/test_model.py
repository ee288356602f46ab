"""Model-surface trigonometry tests."""

import math

import numpy as np
import pytest

from warpcurv import model
from warpcurv.spaces import rng


def test_varpi():
    assert model.varpi(1.0) == math.pi
    assert model.varpi(4.0) == math.pi / 2.0
    assert model.varpi(0.0) == math.inf
    assert model.varpi(-1.0) == math.inf


def test_sn_cs_basic():
    assert model.sn(0.0, 0.7) == pytest.approx(0.7, abs=1e-15)
    assert model.sn(1.0, math.pi / 2) == pytest.approx(1.0, abs=1e-12)
    assert model.sn(-1.0, 1.0) == pytest.approx(math.sinh(1.0), abs=1e-12)
    assert model.cs(1.0, math.pi) == pytest.approx(-1.0, abs=1e-12)
    # series branch agrees with the closed form near zero
    for k in (1.0, -1.0):
        t = 1e-5
        exact = math.sin(t) if k > 0 else math.sinh(t)
        assert model.sn(k, t) == pytest.approx(exact, rel=1e-12)


def test_known_angles():
    # equilateral Euclidean
    assert model.angle_from_sides(0.0, 1.0, 1.0, 1.0) == pytest.approx(math.pi / 3, abs=1e-12)
    # spherical octant: all angles right
    q = math.pi / 2
    assert model.angle_from_sides(1.0, q, q, q) == pytest.approx(q, abs=1e-12)
    # 3-4-5 right angle
    assert model.angle_from_sides(0.0, 3.0, 4.0, 5.0) == pytest.approx(math.pi / 2, abs=1e-12)


def test_degenerate_angles_exact():
    # collinear: apex angle pi, base angles 0, with exact values
    assert model.angle_from_sides(0.0, 1.0, 2.0, 3.0) == math.pi
    assert model.angle_from_sides(0.0, 1.0, 3.0, 2.0) == 0.0
    assert model.angle_from_sides(0.0, 2.0, 3.0, 1.0) == 0.0
    tri = model.ModelTriangle(0.0, (3.0, 1.0, 2.0))
    assert tri.angle(0) == math.pi
    assert tri.angle(1) == 0.0


def test_undefined_cases():
    # triangle inequality failure
    assert math.isnan(model.angle_from_sides(0.0, 1.0, 1.0, 3.0))
    # kappa > 0 perimeter at least 2 varpi
    assert math.isnan(model.angle_from_sides(1.0, 2.0, 2.0, 2.4))
    # side exceeding varpi
    assert math.isnan(model.angle_from_sides(1.0, 3.2, 1.0, 2.5))
    assert not model.ModelTriangle(1.0, (2.0, 2.0, 2.4)).is_defined()
    assert model.ModelTriangle(1.0, (2.0, 2.0, 2.2)).is_defined()


def test_strict_flag():
    # perimeter between varpi and 2 varpi: defined by default, not strictly
    tri = model.ModelTriangle(1.0, (1.5, 1.5, 1.5))
    assert tri.is_defined()
    assert not model.ModelTriangle(1.0, (1.5, 1.5, 1.5), strict=True).is_defined()


def _random_triples(kappa, n, seed):
    g = rng(seed, stream=11)
    if kappa > 0:
        # two sides and the enclosed angle stay safely inside the sphere
        a = g.uniform(0.01, 1.2, n)
        b = g.uniform(0.01, 1.2, n)
    else:
        a = g.uniform(0.01, 3.0, n)
        b = g.uniform(0.01, 3.0, n)
    ang = g.uniform(0.01, math.pi - 0.01, n)
    c = model.side_from_angle(kappa, a, b, ang)
    return a, b, c, ang


@pytest.mark.parametrize("kappa", [-1.0, 0.0, 1.0])
def test_roundtrip(kappa):
    a, b, c, ang = _random_triples(kappa, 10000, seed=42)
    back = model.angle_from_sides(kappa, a, b, c)
    assert np.all(np.isfinite(back))
    assert np.max(np.abs(back - ang)) <= 1e-9


def test_angle_monotone_in_kappa():
    a, b, c, _ = _random_triples(1.0, 2000, seed=7)
    lo = model.angle_from_sides(-1.0, a, b, c)
    mid = model.angle_from_sides(0.0, a, b, c)
    hi = model.angle_from_sides(1.0, a, b, c)
    assert np.all(lo <= mid + 1e-12)
    assert np.all(mid <= hi + 1e-12)


def test_model_distance_charts():
    # Euclidean
    assert model.model_distance(0.0, [0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)
    # sphere of curvature 1: north pole to equator point is pi/2
    d = model.model_distance(1.0, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0])
    assert d == pytest.approx(math.pi / 2, abs=1e-12)
    # hyperboloid: distance along a line of the model
    t = 0.8
    p = [1.0, 0.0, 0.0]
    q = [math.cosh(t), math.sinh(t), 0.0]
    assert model.model_distance(-1.0, p, q) == pytest.approx(t, abs=1e-12)
    with pytest.raises(ValueError):
        model.model_distance(1.0, [0.0, 0.0, 2.0], [1.0, 0.0, 0.0])


def test_side_from_angle_limits():
    # angle 0 and pi reduce to |a-b| and a+b
    assert model.side_from_angle(0.0, 2.0, 1.5, 0.0) == pytest.approx(0.5, abs=1e-12)
    assert model.side_from_angle(0.0, 2.0, 1.5, math.pi) == pytest.approx(3.5, abs=1e-12)
    assert model.side_from_angle(1.0, 1.0, 1.0, math.pi) == pytest.approx(2.0, abs=1e-12)
