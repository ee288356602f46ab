"""Geodesics in warped products and the Clairaut invariant.

Along a unit-speed warped-product geodesic the quantity f(b)^2 * ds/dt
is constant, and the base speed satisfies v_B^2 + (c/f)^2 = a^2. Both
are checked numerically on extracted geodesic polylines.
"""

import math

from warpcurv import (Circle, Interval, Ray, WarpFunction, WarpedTriple,
                      clairaut_check, warped_geodesic)


def main():
    cone = WarpedTriple(Ray(2.0), WarpFunction.linear(1.0), Circle(2 * math.pi))
    poly = warped_geodesic(cone, (1.0, 0.0), (1.0, 2.0), resolution=1e-3)
    rep = clairaut_check(poly, cone)
    print("cone geodesic, radius 1 to radius 1 across angle 2:")
    print("  nodes=%d  length=%.6f" % (len(poly), poly.total_length))
    print("  Clairaut constant c=%.6f (exact cos(1) = %.6f)"
          % (rep.constant_estimate, math.cos(1.0)))
    print("  max drift %.2e, speed residual %.2e" % (rep.max_drift, rep.speed_residual))
    rmin = min(poly.base_points)
    print("  closest approach to apex %.6f (exact %.6f)" % (rmin, math.cos(1.0)))

    susp = WarpedTriple(Interval(0.0, math.pi), WarpFunction.sin(),
                        Circle(2 * math.pi))
    poly = warped_geodesic(susp, (1.2, 0.0), (2.0, 1.5), resolution=1e-3)
    rep = clairaut_check(poly, susp)
    print("sphere geodesic (suspension coordinates):")
    print("  length %.6f" % poly.total_length)
    print("  Clairaut drift %.2e, speed residual %.2e"
          % (rep.max_drift, rep.speed_residual))

    # a vertical start (pure fiber direction) has c = f(b0)^2 * v_F
    poly = warped_geodesic(susp, (math.pi / 2, 0.0), (math.pi / 2, 0.4),
                           resolution=1e-3)
    rep = clairaut_check(poly, susp)
    print("equatorial geodesic: c=%.6f (exact 1)" % rep.constant_estimate)


if __name__ == "__main__":
    main()
