"""Warp convexity tests and the induced fiber curvature bound kappa_F.

A curvature bound for B x_f F needs f to be kappa-convex (upper bounds)
or kappa-concave (lower bounds) along base geodesics, and the fiber to
satisfy a bound kappa_F determined by f near its zero set Z (or by
inf f when Z is empty).
"""

import math

from warpcurv import (Circle, Interval, Ray, WarpFunction, WarpedTriple,
                      kappa_F, sinusoidal_test, zero_set)


def main():
    base = Interval(0.0, math.pi)
    f = WarpFunction.sin()
    print("f = sin on [0, pi] at kappa = 1:")
    for mode in ("convex", "concave"):
        v = sinusoidal_test(f, base, 1.0, mode=mode, seed=0)
        print("  kappa-%-8s %s (worst violation %.2e)"
              % (mode, "PASS" if v.passed else "FAIL", v.worst_violation))
    kind, roots = zero_set(f, base)
    print("  zero set: %s at %s" % (kind, [round(r, 6) for r in roots]))

    print("f = |t| on [-1, 1] at kappa = 0:")
    f = WarpFunction.abs_t()
    base = Interval(-1.0, 1.0)
    for mode in ("convex", "concave"):
        v = sinusoidal_test(f, base, 0.0, mode=mode, seed=0)
        print("  kappa-%-8s %s" % (mode, "PASS" if v.passed else "FAIL"))

    # kappa_F for the cone family Ray x_{a t} Circle: the fiber must be
    # CBB(a^2) (after rescaling, a circle of length <= 2 pi / a)
    print("cone family kappa_F (foot formula gives a^2):")
    for a in (0.5, 1.0, 2.0):
        t = WarpedTriple(Ray(2.0), WarpFunction.linear(a), Circle(6.0))
        rep = kappa_F("CBB", t, 0.0)
        print("  a=%-4g kappa_F=%.6f  branch=%s" % (a, rep.kappa_F, rep.branch))

    # empty zero set: kappa_F = kappa * (inf f)^2, since the fiber copy
    # at the infimum is scaled by inf f inside the product
    t = WarpedTriple(Interval(0.0, 2.0), WarpFunction.constant(2.0), Circle(6.0))
    rep = kappa_F("CAT", t, -1.0)
    print("constant warp 2, kappa=-1: kappa_F=%.6f (exact %.6f)"
          % (rep.kappa_F, -4.0))


if __name__ == "__main__":
    main()
