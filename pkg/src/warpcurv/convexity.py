"""Sinusoidal convexity testing, gradient norms, and the kappa_F formulas.

Sinusoidal kappa-convexity of f along a geodesic gamma means f(gamma)
lies below the two-point support y solving y'' + kappa y = 0 through
the endpoint values; concavity means it lies above.
"""

import math

import numpy as np

from . import model, spaces
from .spaces import rng
from .warped import ZERO_THRESHOLD

INF = math.inf


class ConvexityVerdict:
    def __init__(self, classification, worst_violation, geodesics_tested,
                 worst_convex=None, worst_concave=None, skipped=0, tol=0.0):
        self.classification = classification
        self.worst_violation = float(worst_violation)
        self.geodesics_tested = int(geodesics_tested)
        self.worst_convex = worst_convex
        self.worst_concave = worst_concave
        self.skipped = int(skipped)
        self.tol = float(tol)

    @property
    def passed(self):
        return self.worst_violation <= self.tol

    def __repr__(self):
        return ("ConvexityVerdict(%s, worst=%.3g, geodesics=%d)"
                % (self.classification, self.worst_violation, self.geodesics_tested))


class GradientEstimate:
    def __init__(self, point, value, directions_sampled, derivatives=()):
        self.point = point
        self.value = float(value)
        self.directions_sampled = int(directions_sampled)
        self.derivatives = tuple(derivatives)

    def __repr__(self):
        return "GradientEstimate(value=%.6g, dirs=%d)" % (self.value, self.directions_sampled)


class KappaFReport:
    def __init__(self, side, branch, kappa_F, kappa_foot=INF, kappa_far=INF,
                 gradient_form=None, cross_check_diff=None, shells=(), warnings=(),
                 sample_density=None):
        self.side = side
        self.branch = branch
        self.kappa_F = kappa_F
        self.kappa_foot = kappa_foot
        self.kappa_far = kappa_far
        self.gradient_form = gradient_form
        self.cross_check_diff = cross_check_diff
        self.shells = tuple(shells)
        self.warnings = tuple(warnings)
        self.sample_density = sample_density

    def __repr__(self):
        return ("KappaFReport(%s, %s, kappa_F=%s, foot=%s, far=%s)"
                % (self.side, self.branch, self.kappa_F, self.kappa_foot, self.kappa_far))


def _eval_f(f, base, pts):
    """Evaluate a warp function on base points of either arity."""
    pts = np.asarray(pts, dtype=float)
    if getattr(f, "arity", 1) == 2 or isinstance(base, spaces.ModelDisk):
        pts = pts.reshape(-1, 2)
        return np.asarray(f(pts[:, 0], pts[:, 1]), float)
    return np.asarray(f(pts), float)


def _sample_geodesics(base, n_geodesics, seed, n_nodes=65):
    """Seeded geodesics of the base as (arclength grid, node points)."""
    out = []
    xs = base.sample(2 * n_geodesics, seed)
    xs = base._batch(xs)
    for k in range(n_geodesics):
        x, y = xs[2 * k], xs[2 * k + 1]
        d = float(base.distance(x, y))
        if d < 1e-9:
            continue
        if isinstance(base, spaces.Circle) and d > base.length / 2.0 - 1e-9:
            continue
        ts = np.linspace(0.0, 1.0, n_nodes)
        pts = np.array([base.interpolate(x, y, t) for t in ts], dtype=float)
        out.append((d * ts, pts))
    return out


def _support(kappa, s, f1, f2):
    """Two-point sinusoidal support through (0, f1), (L, f2) on grid s.

    Returns None when the endpoint interpolation is singular
    (sn(L) = 0, which happens for L >= varpi at kappa > 0).
    """
    L = s[-1]
    snl = float(model.sn(kappa, L))
    if kappa > 0 and (L >= model.varpi(kappa) - 1e-12 or abs(snl) < 1e-12):
        return None
    beta = (f2 - f1 * float(model.cs(kappa, L))) / snl
    return f1 * model.cs(kappa, s) + beta * model.sn(kappa, s)


def sinusoidal_test(f, base, kappa, mode="convex", n_geodesics=24, seed=0, tol=1e-9,
                    n_sub=12):
    """Classify f along sampled base geodesics and subintervals.

    mode selects which violation worst_violation reports; the verdict
    classification always covers both directions.
    """
    if mode not in ("convex", "concave"):
        raise ValueError("mode must be convex or concave")
    geos = _sample_geodesics(base, n_geodesics, seed)
    worst_cv = 0.0
    worst_cc = 0.0
    tested = 0
    skipped = 0
    g = rng(seed, stream=5)
    for s, pts in geos:
        vals = _eval_f(f, base, pts)
        n = len(s)
        subs = [(0, n - 1)]
        for _ in range(n_sub):
            i1, i2 = sorted(g.integers(0, n, size=2))
            if i2 - i1 >= 2:
                subs.append((int(i1), int(i2)))
        for i1, i2 in subs:
            ss = s[i1:i2 + 1] - s[i1]
            y = _support(kappa, ss, vals[i1], vals[i2])
            if y is None:
                skipped += 1
                continue
            interior = slice(1, len(ss) - 1)
            worst_cv = max(worst_cv, float(np.max(vals[i1:i2 + 1][interior] - y[interior],
                                                  initial=0.0)))
            worst_cc = max(worst_cc, float(np.max(y[interior] - vals[i1:i2 + 1][interior],
                                                  initial=0.0)))
        tested += 1
    convex_ok = worst_cv <= tol
    concave_ok = worst_cc <= tol
    if convex_ok and concave_ok:
        classification = "both"
    elif convex_ok:
        classification = "kappa-convex"
    elif concave_ok:
        classification = "kappa-concave"
    else:
        classification = "neither"
    worst = worst_cv if mode == "convex" else worst_cc
    return ConvexityVerdict(classification, worst, tested,
                            worst_convex=worst_cv, worst_concave=worst_cc,
                            skipped=skipped, tol=tol)


def _directions(base, p):
    """Admissible unit directions at p, as step functions h -> point."""
    if isinstance(base, spaces.ModelDisk):
        dirs = []
        n = 16
        targets = [base.boundary_point(2.0 * math.pi * k / n) for k in range(n)]
        targets.append(np.array([0.0, 0.0]))  # radial inward
        for target in targets:
            d = float(base.distance(p, target))
            if d < 1e-9:
                continue
            dirs.append(lambda h, t=target, d=d: base.interpolate(p, t, min(h / d, 1.0)))
        return dirs
    p = float(np.asarray(p, float).reshape(()))
    dirs = []
    if isinstance(base, spaces.Circle):
        return [lambda h: (p + h) % base.length, lambda h: (p - h) % base.length]
    if isinstance(base, spaces.Interval):
        lo, hi = base.a, base.b
    else:
        lo, hi = 0.0, INF
    if p + 1e-9 < hi:
        dirs.append(lambda h: min(p + h, hi))
    if p - 1e-9 > lo:
        dirs.append(lambda h: max(p - h, lo))
    return dirs


def _one_sided_derivative(f, base, p, step, h0, k_max=6):
    """Richardson-extrapolated one-sided derivative of f along a step map."""
    f0 = float(_eval_f(f, base, [np.asarray(p, float)])[0])
    hs = [h0 * 2.0 ** (-k) for k in range(k_max + 1)]
    ds = []
    for h in hs:
        q = step(h)
        fq = float(_eval_f(f, base, [np.asarray(q, float)])[0])
        ds.append((fq - f0) / h)
    # first-order Richardson on the halving sequence
    ext = [2.0 * ds[k + 1] - ds[k] for k in range(len(ds) - 1)]
    return ext[-1]


def gradient_norm(f, base, p, side="up", n_dirs=16, h0=1e-3):
    """|grad_p f| (side up) or |grad_p(-f)| (side down) by sampling.

    The norm of the (downward) gradient is the positive part of the
    supremum of one-sided directional derivatives.
    """
    if side not in ("up", "down"):
        raise ValueError("side must be up or down")
    sgn = 1.0 if side == "up" else -1.0
    dirs = _directions(base, p)
    if isinstance(base, spaces.ModelDisk):
        dirs = dirs[:n_dirs]
    derivs = []
    for step in dirs:
        d = _one_sided_derivative(f, base, p, step, h0)
        derivs.append(sgn * d)
    value = max(0.0, max(derivs, default=0.0))
    return GradientEstimate(p, value, len(dirs), derivatives=derivs)


def zero_set(f, base, warn=None):
    """Roots of f on the base, from hints when available.

    Returns ("boundary", None) for a hinted boundary zero set on disks,
    else ("points", [roots]).
    """
    if getattr(f, "zeros", None) == "boundary":
        return "boundary", None
    if isinstance(base, spaces.ModelDisk):
        # scan the boundary and the interior radially
        roots = []
        rs = np.linspace(0, base.radius, 257)
        ths = np.linspace(0, 2 * math.pi, 257)
        rr, tt = np.meshgrid(rs, ths, indexing="ij")
        vals = np.asarray(f(rr, tt), float)
        if np.min(vals) < ZERO_THRESHOLD:
            ii = np.argwhere(vals < ZERO_THRESHOLD)
            roots = [np.array([rs[i], ths[j]]) for i, j in ii[:64]]
            if warn is not None and not getattr(f, "zeros", None):
                warn.append("zero set detected by thresholding")
        return "points", roots
    if isinstance(base, spaces.Interval):
        lo, hi = base.a, base.b
    elif isinstance(base, spaces.Ray):
        lo, hi = 0.0, base.sample_extent
    elif isinstance(base, spaces.Circle):
        lo, hi = 0.0, base.length
    else:
        raise ValueError("unsupported base")
    if getattr(f, "zeros", ()):
        return "points", [z for z in f.zeros if lo - 1e-12 <= z <= hi + 1e-12]
    ts = np.linspace(lo, hi, 4097)
    vals = np.asarray(f(ts), float)
    roots = list(ts[vals < ZERO_THRESHOLD])
    if roots and warn is not None:
        warn.append("zero set detected by thresholding")
    return "points", roots


def dist_Z(f, base, p):
    """Distance from p to the zero set of f."""
    kind, roots = zero_set(f, base)
    if kind == "boundary":
        return base.radius - float(np.asarray(p, float).reshape(2)[0])
    if not roots:
        return INF
    if isinstance(base, spaces.ModelDisk):
        return min(float(base.distance(p, z)) for z in roots)
    return min(float(base.distance(p, z)) for z in roots)


def dist_Z_realizers(f, base, n_footpoints=8, h0=1e-4):
    """Footpoints on Z with inward realizer directions and (f o alpha)'(0).

    Returns a list of (footpoint, direction sample, derivative).
    Directions are encoded as step maps h -> base point at distance h
    along the realizer.
    """
    kind, roots = zero_set(f, base)
    out = []
    if kind == "boundary":
        for k in range(n_footpoints):
            alpha = 2.0 * math.pi * k / n_footpoints
            z = base.boundary_point(alpha)

            def step(h, alpha=alpha):
                return np.array([base.radius - h, alpha])
            d = _one_sided_derivative(f, base, z, step, h0)
            out.append((z, step, d))
        return out
    if not roots:
        raise ValueError("zero set is empty")
    for z in roots:
        for step in _directions(base, z):
            # realizers of dist_Z point away from Z; both base directions
            # at an isolated root qualify when they stay in the domain
            d = _one_sided_derivative(f, base, z, step, h0)
            out.append((z, step, d))
    return out


def _inf_f(f, base, n=4097):
    if isinstance(base, spaces.ModelDisk):
        rs = np.linspace(0, base.radius, 257)
        ths = np.linspace(0, 2 * math.pi, 257)
        rr, tt = np.meshgrid(rs, ths, indexing="ij")
        return float(np.min(np.asarray(f(rr, tt), float)))
    lo, hi = _domain_of(base)
    return float(np.min(np.asarray(f(np.linspace(lo, hi, n)), float)))


def _domain_of(base):
    if isinstance(base, spaces.Interval):
        return base.a, base.b
    if isinstance(base, spaces.Ray):
        return 0.0, base.sample_extent
    if isinstance(base, spaces.Circle):
        return 0.0, base.length
    raise ValueError("unsupported base")


def kappa_F(side, triple, kappa, eps0=0.1, n_shells=5, h0=1e-4):
    """Fiber curvature bound of Theorems 2.2/2.3 with the gradient
    cross-check of Theorem 2.4."""
    if side not in ("CAT", "CBB"):
        raise ValueError("side must be CAT or CBB")
    f = triple.warp
    base = triple.base
    warnings = []
    kind, roots = zero_set(f, base, warn=warnings)
    z_empty = (kind == "points" and not roots)
    if z_empty:
        inf_f = _inf_f(f, base)
        val = kappa * inf_f ** 2
        return KappaFReport(side, "Z-empty", val, warnings=warnings)

    realizers = dist_Z_realizers(f, base, h0=h0)
    derivs2 = [d * d for _, _, d in realizers]

    if side == "CBB":
        foot = max(derivs2)
        # gradient form: sup over footpoints of |grad_q f|^2
        grads = []
        seen = []
        for z, _, _ in realizers:
            key = tuple(np.atleast_1d(np.asarray(z, float)))
            if key in seen:
                continue
            seen.append(key)
            grads.append(gradient_norm(f, base, z, side="up", h0=h0).value ** 2)
        gform = max(grads) if grads else 0.0
        return KappaFReport(side, "Z-nonempty", foot, kappa_foot=foot,
                            gradient_form=gform,
                            cross_check_diff=abs(foot - gform),
                            warnings=warnings)

    foot = min(derivs2)
    # gradient form: liminf over shells of inf |grad_p(-f)|^2
    shells = []
    if isinstance(base, spaces.ModelDisk):
        samples = base._batch(base.sample(256, 97))
    else:
        lo, hi = _domain_of(base)
        samples = np.linspace(lo, hi, 513)
    for k in range(n_shells):
        eps = eps0 * 2.0 ** (-k)
        vals = []
        for p in np.atleast_1d(samples) if not isinstance(base, spaces.ModelDisk) else samples:
            dz = dist_Z(f, base, p)
            if 0.0 < dz <= eps:
                vals.append(gradient_norm(f, base, p, side="down", h0=min(h0, eps / 4)).value ** 2)
        shells.append(min(vals) if vals else INF)
    finite = [v for v in shells if v < INF]
    gform = finite[-1] if finite else INF

    w = model.varpi(kappa)
    far = INF
    if kappa > 0 and w < INF:
        if isinstance(base, spaces.ModelDisk):
            pts = samples
            fvals = np.asarray(f(pts[:, 0], pts[:, 1]), float)
            dzs = np.array([dist_Z(f, base, p) for p in pts])
        else:
            pts = samples
            fvals = np.asarray(f(pts), float)
            dzs = np.array([dist_Z(f, base, p) for p in pts])
        mask = dzs >= w / 2.0 - 1e-12
        if np.any(mask):
            far = float(kappa * np.min(fvals[mask] ** 2))
    val = min(foot, far)
    return KappaFReport(side, "Z-nonempty", val, kappa_foot=foot, kappa_far=far,
                        gradient_form=gform,
                        cross_check_diff=abs(foot - gform) if gform < INF else None,
                        shells=shells, warnings=warnings,
                        sample_density=len(np.atleast_1d(samples)))
