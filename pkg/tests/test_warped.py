"""Warped-product distance engine tests."""

import math

import numpy as np
import pytest

from warpcurv import spaces, warped
from warpcurv.warped import (WarpFunction, WarpedTriple, clairaut_check,
                             recover_warp, warped_distance, warped_geodesic)


def cone_triple(extent=2.0):
    base = spaces.Ray(sample_extent=extent)
    f = WarpFunction.linear(1.0)
    return WarpedTriple(base, f, spaces.Circle(2 * math.pi))


def suspension_triple():
    base = spaces.Interval(0.0, math.pi)
    f = WarpFunction.sin()
    return WarpedTriple(base, f, spaces.Circle(2 * math.pi))


def product_triple(c=1.0):
    base = spaces.Interval(0.0, 4.0)
    return WarpedTriple(base, WarpFunction.constant(c), spaces.Circle(20.0))


def unrolled_cone(r1, r2, dtheta):
    """Flat-cone oracle by unrolling into the plane."""
    if dtheta >= math.pi:
        return r1 + r2
    return math.sqrt(r1 * r1 + r2 * r2 - 2 * r1 * r2 * math.cos(dtheta))


def test_warp_function_validation():
    with pytest.raises(ValueError):
        WarpedTriple(spaces.Interval(0, 1), WarpFunction.constant(0.0),
                     spaces.Circle(1.0))
    f = WarpFunction.from_expression("sin(t)", 1.0, zeros=(0.0, math.pi))
    assert f(math.pi / 2) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        WarpFunction.from_expression("__import__('os')", 1.0)


def test_cone_basic_distances():
    t = cone_triple()
    assert warped_distance(t, (1.0, 0.0), (1.0, math.pi / 2), tol=1e-3) == pytest.approx(
        math.sqrt(2.0), abs=2e-3)
    # through the apex
    assert warped_distance(t, (1.0, 0.0), (2.0, math.pi), tol=1e-3) == pytest.approx(
        3.0, abs=2e-3)
    # apex itself: fiber coordinate is immaterial
    assert warped_distance(t, (0.0, 1.0), (1.5, 2.0), tol=1e-3) == pytest.approx(
        1.5, abs=1e-9)


def test_cone_against_unrolling():
    t = cone_triple()
    g = spaces.rng(3, stream=31)
    for _ in range(5):
        r1, r2 = g.uniform(0.3, 1.8, 2)
        s1, s2 = g.uniform(0.0, 2 * math.pi, 2)
        dth = abs(s1 - s2)
        dth = min(dth, 2 * math.pi - dth)
        expect = unrolled_cone(r1, r2, dth)
        got = warped_distance(t, (r1, s1), (r2, s2), tol=1e-3)
        assert got == pytest.approx(expect, abs=3e-3)


def test_product_pythagoras():
    t = product_triple(1.0)
    d = warped_distance(t, (0.0, 0.0), (3.0, 4.0), tol=1e-3)
    assert d == pytest.approx(5.0, abs=2e-3)


def test_suspension_matches_sphere():
    t = suspension_triple()
    # poles
    assert warped_distance(t, (0.0, 0.0), (math.pi, 1.0), tol=1e-3) == pytest.approx(
        math.pi, abs=2e-3)
    # generic pair vs the spherical law of cosines
    t1, t2, dphi = 1.1, 2.0, 1.3
    expect = math.acos(math.cos(t1) * math.cos(t2)
                       + math.sin(t1) * math.sin(t2) * math.cos(dphi))
    got = warped_distance(t, (t1, 0.0), (t2, dphi), tol=1e-3)
    assert got == pytest.approx(expect, abs=3e-3)


def test_two_piece_through_zero():
    base = spaces.Interval(-1.0, 1.0)
    t = WarpedTriple(base, WarpFunction.abs_t(), spaces.Circle(2 * math.pi))
    # opposite fiber points: the join passes through Z = {0}
    d = warped_distance(t, (-1.0, 0.0), (1.0, math.pi), tol=1e-3)
    assert d == pytest.approx(2.0, abs=2e-3)


def test_zero_warp_endpoint_collapses_fiber():
    t = suspension_triple()
    # f vanishes at the pole: distance ignores the fiber there exactly
    d1 = warped_distance(t, (0.0, 0.0), (1.0, 2.0), tol=1e-3)
    d2 = warped_distance(t, (0.0, 5.0), (1.0, 2.0), tol=1e-3)
    assert d1 == d2 == pytest.approx(1.0, abs=1e-9)


def test_horizontal_leaf_is_base_distance():
    t = suspension_triple()
    # same fiber point: distance equals the base distance exactly
    assert warped_distance(t, (0.4, 1.0), (2.0, 1.0), tol=1e-3) == pytest.approx(
        1.6, abs=1e-9)


def test_symmetry_and_bounds():
    t = suspension_triple()
    u, v = (0.7, 0.3), (2.2, 2.9)
    d_uv = warped_distance(t, u, v, tol=1e-3)
    d_vu = warped_distance(t, v, u, tol=1e-3)
    assert d_uv == pytest.approx(d_vu, abs=1e-6)
    d_B = abs(u[0] - v[0])
    ell = t.fiber.distance(u[1], v[1])
    fmin = min(float(t.warp(u[0])), float(t.warp(v[0])))
    assert d_uv >= d_B - 1e-12
    assert d_uv <= d_B + fmin * ell + 1e-12


def test_circle_base_seam():
    base = spaces.Circle(2 * math.pi)
    f = WarpFunction.from_expression("2.0 + sin(t)", 1.0)
    t = WarpedTriple(base, f, spaces.Circle(2 * math.pi))
    # same fiber point across the seam
    d = warped_distance(t, (0.2, 1.0), (2 * math.pi - 0.2, 1.0), tol=1e-3)
    assert d == pytest.approx(0.4, abs=1e-9)


def test_fiber_independence():
    # fibers with matched endpoint separation give identical distances
    base = spaces.Interval(0.0, 2.0)
    f = WarpFunction.from_expression("1.0 + 0.5*t", 0.5)
    ell = 1.3
    ds = []
    for fiber, u, v in [
        (spaces.Interval(0.0, 2.0), 0.0, ell),
        (spaces.Circle(10.0), 1.0, 1.0 + ell),
        (spaces.FiniteMetric([[0.0, ell], [ell, 0.0]]), 0, 1),
    ]:
        t = WarpedTriple(base, f, fiber)
        ds.append(warped_distance(t, (0.3, u), (1.7, v), tol=1e-3))
    assert max(ds) - min(ds) <= 2e-3


def test_geodesic_and_clairaut():
    t = cone_triple()
    theta0 = 2.0
    poly = warped_geodesic(t, (1.0, 0.0), (1.0, theta0), resolution=1e-3)
    # unrolled chord length
    assert poly.total_length == pytest.approx(2 * math.sin(theta0 / 2), abs=2e-3)
    rep = clairaut_check(poly, t)
    # Clairaut constant of the unrolled chord is the apex distance
    assert rep.constant_estimate == pytest.approx(math.cos(theta0 / 2), abs=1e-3)
    assert rep.max_drift <= 1e-3
    assert rep.speed_residual <= 2e-3
    # minimum base coordinate equals the Clairaut constant (f = id)
    assert float(np.min(poly.base_points)) == pytest.approx(
        math.cos(theta0 / 2), abs=2e-3)


def test_vertical_geodesic_zero_clairaut_speed():
    # purely radial geodesic: fiber parameter constant, c = 0
    t = cone_triple()
    poly = warped_geodesic(t, (0.2, 1.0), (1.8, 1.0), resolution=1e-3)
    rep = clairaut_check(poly, t)
    assert abs(rep.constant_estimate) <= 1e-9
    assert np.allclose(poly.fiber_params, poly.fiber_params[0])


def test_recover_warp():
    eps = 1e-2
    t = product_triple(2.0)
    assert recover_warp(t, 1.5, 0.0, eps) == pytest.approx(2.0, abs=3 * eps)
    t = cone_triple()
    assert recover_warp(t, 1.0, 0.0, eps) == pytest.approx(1.0, abs=3 * eps)
    t = suspension_triple()
    assert recover_warp(t, math.pi / 2, 1.0, eps) == pytest.approx(1.0, abs=3 * eps)


def test_leaf_extrinsic_curvature_cone():
    t = cone_triple()
    a_est = warped.leaf_extrinsic_curvature(t, 1.0, max_scale=0.4)
    assert a_est == pytest.approx(1.0, abs=0.05)


def test_leaf_extrinsic_curvature_product_flat():
    t = product_triple(1.0)
    a_est = warped.leaf_extrinsic_curvature(t, 2.0, max_scale=0.4)
    assert abs(a_est) <= 0.05


def test_refinement_monotone_constant_warp():
    # constant warp on nested grids: raw lattice values are nonincreasing
    # under refinement and stay above the true distance
    t = product_triple(1.0)
    ell = 4.0
    vals = []
    for n in (8, 16, 32, 64):
        coords = warped._grid_coords(0.0, 3.0, n, [0.0, 3.0])
        fine = warped._f_on_grid(t, coords, [])
        raw, _, _ = warped._grid_dijkstra(t, coords, fine, ell, n, 0,
                                          len(coords) - 1)
        vals.append(raw)
    assert all(vals[i] >= vals[i + 1] - 1e-12 for i in range(len(vals) - 1))
    assert vals[-1] >= 5.0 - 1e-9


def test_convergence_error_reports_bracket():
    t = suspension_triple()
    with pytest.raises(warped.ConvergenceError) as info:
        warped.reduced_distance(t, 0.3, 2.8, math.pi, tol=1e-13,
                                max_refinements=1)
    assert len(info.value.bracket) == 2


def test_grid_oracle_sampling_interface():
    t = product_triple(1.0)
    oracle = warped.GridWarpedOracle(t, tol=1e-2)
    pts = oracle.sample(6, seed=4)
    d = oracle.distance(pts[0], pts[1])
    assert d >= 0.0
    assert oracle.distance(pts[0], pts[0]) == pytest.approx(0.0, abs=1e-9)
