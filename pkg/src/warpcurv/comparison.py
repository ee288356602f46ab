"""Distance-only curvature comparisons.

(1+3)-point and (2+2)-point kappa-comparisons, a sampling harness that
certifies or refutes CBB/CAT empirically with shrunk witnesses, and the
point-side comparison along explicit geodesics.

Undefined model angles make a comparison hold vacuously; a vacuous
quadruple contributes margin +inf.
"""

import itertools
import math

import numpy as np

from .model import angle_from_sides, side_from_angle
from .spaces import rng

TWO_PI = 2.0 * math.pi


class Quadruple:
    """Four points with their six pairwise distances (4x4 matrix)."""

    def __init__(self, dmat, points=None):
        d = np.asarray(dmat, dtype=float)
        if d.shape != (4, 4):
            raise ValueError("distance matrix must be 4x4")
        if not np.allclose(d, d.T, atol=1e-9) or np.any(d < 0) or np.any(np.abs(np.diag(d)) > 1e-12):
            raise ValueError("invalid quadruple distances")
        self.dmat = d
        self.points = points

    def __repr__(self):
        return "Quadruple(dmat=%s)" % np.array2string(self.dmat, precision=6)


class ComparisonVerdict:
    def __init__(self, passed, witness, margin, n_tested, slack_used, warnings=()):
        self.passed = bool(passed)
        self.witness = witness
        self.margin = float(margin)
        self.n_tested = int(n_tested)
        self.slack_used = float(slack_used)
        self.warnings = tuple(warnings)

    def __repr__(self):
        return ("ComparisonVerdict(passed=%s, margin=%.6g, n_tested=%d, slack=%.3g)"
                % (self.passed, self.margin, self.n_tested, self.slack_used))


def _angles(kappa, D, v, p, q):
    """Model angles at vertex v between points p and q, batched over D."""
    return angle_from_sides(kappa, D[..., v, p], D[..., v, q], D[..., p, q])


def batch_1plus3(D, kappa):
    """Margins of the (1+3)-point comparison for a (m,4,4) distance stack.

    Margin of one labeling is 2*pi minus the angle sum at the
    distinguished point; undefined angles make the labeling vacuous
    (margin +inf); the quadruple margin is the min over the 4 labelings.
    """
    D = np.asarray(D, dtype=float)
    margins = np.full(D.shape[:-2], np.inf)
    for i in range(4):
        j, k, l = [x for x in range(4) if x != i]
        total = (_angles(kappa, D, i, j, k)
                 + _angles(kappa, D, i, k, l)
                 + _angles(kappa, D, i, l, j))
        m_i = TWO_PI - total
        m_i = np.where(np.isnan(m_i), np.inf, m_i)
        margins = np.minimum(margins, m_i)
    return margins


def batch_2plus2(D, kappa):
    """Margins of the (2+2)-point comparison for a (m,4,4) distance stack.

    For each of the 6 choices of distinguished pair, the split margin is
    the better of the two disjunct slacks; any undefined angle makes the
    split vacuous.  The quadruple margin is the min over splits.
    """
    D = np.asarray(D, dtype=float)
    margins = np.full(D.shape[:-2], np.inf)
    for u, w in itertools.combinations(range(4), 2):
        p, q = [x for x in range(4) if x not in (u, w)]
        a_u = _angles(kappa, D, u, p, w) + _angles(kappa, D, u, w, q) - _angles(kappa, D, u, p, q)
        a_w = _angles(kappa, D, w, p, u) + _angles(kappa, D, w, u, q) - _angles(kappa, D, w, p, q)
        split = np.fmax(a_u, a_w)            # fmax ignores one-sided nan
        split = np.where(np.isnan(split), np.inf, split)
        margins = np.minimum(margins, split)
    return margins


def test_1plus3(q, kappa, slack=1e-9):
    """CBB-side quadruple test. Returns (passed, margin)."""
    m = float(batch_1plus3(q.dmat[None], kappa)[0])
    return m >= -slack, m


def test_2plus2(q, kappa, slack=1e-9):
    """CAT-side quadruple test. Returns (passed, margin)."""
    m = float(batch_2plus2(q.dmat[None], kappa)[0])
    return m >= -slack, m


def _batch_for(kind):
    if kind == "CBB":
        return batch_1plus3
    if kind == "CAT":
        return batch_2plus2
    raise ValueError("kind must be CBB or CAT")


def _dmat_stack(space, groups):
    """Distance stack for point groups of shape (m, 4) in batch encoding."""
    m = len(groups)
    D = np.zeros((m, 4, 4))
    for i in range(4):
        for j in range(i + 1, 4):
            d = space.dist_pairs(groups[:, i], groups[:, j])
            D[:, i, j] = d
            D[:, j, i] = d
    return D


def _quadruple_margin(space, pts, kappa, kind):
    batch = _batch_for(kind)
    g = space._batch(pts)
    g = g.reshape((1, 4) + g.shape[1:])
    return float(batch(_dmat_stack(space, g), kappa)[0])


def shrink_witness(space, pts, kappa, kind, slack, max_rounds=20):
    """Greedy bisection of a violating quadruple toward its first point.

    Each accepted move halves a point's distance to the anchor while the
    quadruple still violates; stops when no move preserves the violation.
    """
    cur = [p for p in pts]
    if space.interpolate(cur[0], cur[0], 0.5) is None:
        return cur
    # a move must keep a fixed fraction of the original violation, so
    # shrinking cannot decay a real witness into a roundoff artifact
    m0 = _quadruple_margin(space, cur, kappa, kind)
    floor = min(-slack, 0.25 * m0)
    for _ in range(max_rounds):
        moved = False
        for i in range(1, 4):
            cand = space.interpolate(cur[i], cur[0], 0.5)
            trial = list(cur)
            trial[i] = cand
            if _quadruple_margin(space, trial, kappa, kind) < floor:
                cur = trial
                moved = True
        if not moved:
            break
    return cur


def sample_comparisons(space, kappa, kind, n, seed, slack=1e-9, adversarial_fraction=0.25):
    """Quadruple comparison battery on a sampled space.

    Draws n quadruples: a uniform part (independent points) and an
    adversarial part built from exhaustive combinations over a small
    point pool plus near-collinear configurations along geodesics.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    n_adv = int(round(n * adversarial_fraction))
    n_uni = n - n_adv

    groups = []
    if n_uni > 0:
        pts = space._batch(space.sample(4 * n_uni, seed))
        groups.append(pts.reshape((n_uni, 4) + pts.shape[1:]))

    if n_adv > 0:
        # exhaustive quadruples over a pool: catches structured violations
        # (apex configurations, antipodal midpoints) that independent
        # sampling hits only with tiny probability
        pool_m = 8
        while math.comb(pool_m, 4) < n_adv and pool_m < 64:
            pool_m += 1
        pool = space._batch(space.sample(pool_m, seed + 1))
        combos = np.array(list(itertools.combinations(range(pool_m), 4))[:n_adv])
        adv = pool[combos]
        # bend a third of them toward collinearity when the space can
        # interpolate: replace the 3rd point by a near-midpoint of 1-2
        probe = space.interpolate(pool[0], pool[1], 0.5)
        if probe is not None:
            k = len(adv) // 3
            us = 0.45 + 0.1 * rng(seed + 2).random(k)
            for t in range(k):
                mid = space.interpolate(adv[t][0], adv[t][1], float(us[t]))
                adv[t][2] = space._batch([mid])[0]
        groups.append(adv)

    groups = np.concatenate(groups, axis=0) if len(groups) > 1 else groups[0]
    D = _dmat_stack(space, groups)
    batch = _batch_for(kind)
    margins = batch(D, kappa)

    overall = float(np.min(margins)) if len(margins) else np.inf
    passed = overall >= -slack
    witness = None
    if not passed:
        first = int(np.argmax(margins < -slack))
        pts = [groups[first][i] for i in range(4)]
        pts = shrink_witness(space, pts, kappa, kind, slack)
        g = space._batch(pts).reshape((1, 4) + space._batch(pts).shape[1:])
        witness = Quadruple(_dmat_stack(space, g)[0], points=pts)
    return ComparisonVerdict(passed, witness, overall, len(groups), slack)


def point_side_test(space, kappa, kind, x1, polyline, slack=1e-9):
    """Compare distances from x1 to geodesic nodes against the model.

    CBB requires actual >= model, CAT requires actual <= model; an
    undefined model triangle passes vacuously with margin +inf.
    """
    x2 = polyline.points[0]
    x3 = polyline.points[-1]
    d12 = space.distance(x1, x2)
    d13 = space.distance(x1, x3)
    d23 = space.distance(x2, x3)
    ang2 = float(angle_from_sides(kappa, d12, d23, d13))
    if math.isnan(ang2):
        return True, math.inf
    ts = polyline.params - polyline.params[0]
    margin = math.inf
    for t, node in zip(ts, polyline.points):
        actual = space.distance(x1, node)
        modeld = float(side_from_angle(kappa, d12, float(t), ang2))
        diff = actual - modeld
        if kind == "CAT":
            diff = -diff
        margin = min(margin, diff)
    return margin >= -slack, margin
