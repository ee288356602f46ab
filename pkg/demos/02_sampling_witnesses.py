"""Distance-only curvature testing by quadruple sampling.

Four points and their six distances are enough to contradict a
curvature bound. sample_comparisons draws seeded quadruples, checks
the one-against-three test (lower bounds) or the two-pairs test (upper
bounds), and returns a shrunk witness when the bound fails.
"""

import math

from warpcurv import sample_comparisons, spaces, tripod


def report(name, v):
    print("  %-28s %s  margin=%.3e  tested=%d"
          % (name, "PASS" if v.passed else "FAIL", v.margin, v.n_tested))
    if not v.passed and v.witness is not None and v.witness.points is not None:
        print("    witness points:",
              [round(float(p), 4) for p in v.witness.points])


def main():
    plane = spaces.ModelDisk(0.0, 2.0)
    print("flat disk, both bounds at kappa = 0:")
    v = sample_comparisons(plane, 0.0, "CBB", 2000, seed=1)
    print("  CBB(0) sampling %s, margin %.2e" % ("PASS" if v.passed else "FAIL", v.margin))
    v = sample_comparisons(plane, 0.0, "CAT", 2000, seed=1)
    print("  CAT(0) sampling %s, margin %.2e" % ("PASS" if v.passed else "FAIL", v.margin))

    print("circle of length 2pi - 0.1:")
    circ = spaces.Circle(2 * math.pi - 0.1)
    report("CBB(0)", sample_comparisons(circ, 0.0, "CBB", 2000, seed=2))
    # no circle is CAT(0): antipodal midpoints branch
    report("CAT(0)", sample_comparisons(circ, 0.0, "CAT", 2000, seed=2))
    # a circle is CAT(1) iff its length is at least 2pi (a shorter one
    # is itself a closed geodesic of length below 2pi)
    report("CAT(1)", sample_comparisons(circ, 1.0, "CAT", 2000, seed=2))
    long_circ = spaces.Circle(2 * math.pi + 0.1)
    report("CAT(1) len 2pi+0.1", sample_comparisons(long_circ, 1.0, "CAT",
                                                    2000, seed=2))

    print("tripod (three unit legs glued at a point):")
    tri = tripod(1.0)
    report("CBB(0)", sample_comparisons(tri, 0.0, "CBB", 2000, seed=3))
    report("CAT(0)", sample_comparisons(tri, 0.0, "CAT", 2000, seed=3))


if __name__ == "__main__":
    main()
