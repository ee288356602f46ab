"""Cones, suspensions, scalings, and the partial-boundary double B-dagger.

Cone and suspension oracles use closed-form distance laws (the grid
engine agrees with them within grid error); doubling produces explicit
catalog spaces for 1-D bases and a two-sheet grid oracle for disks.
"""

import math

import numpy as np

from . import model, spaces
from .convexity import zero_set
from .spaces import MetricOracle, rng
from .warped import WarpFunction


class ConeSpace(MetricOracle):
    """Cone over a fiber: R>=0 x_{a*id} F with the closed-form cone law.

    Points are rows (r, fiber coordinate).
    """

    def __init__(self, fiber, a=1.0, r_max=2.0):
        if a <= 0:
            raise ValueError("slope a must be positive")
        self.fiber = fiber
        self.a = float(a)
        self.r_max = float(r_max)
        self.tol_metric = 1e-9

    def _batch(self, pts):
        return np.asarray(pts, dtype=float).reshape(-1, 2)

    def _fiber_coords(self, col):
        if isinstance(self.fiber, spaces.FiniteMetric):
            return np.asarray(np.round(col), dtype=int)
        return col

    def dist_pairs(self, xs, ys):
        xs = self._batch(xs)
        ys = self._batch(ys)
        df = self.fiber.dist_pairs(self._fiber_coords(xs[:, 1]), self._fiber_coords(ys[:, 1]))
        delta = np.minimum(self.a * np.asarray(df, float), math.pi)
        if isinstance(self.fiber, spaces.FiniteMetric):
            # discrete fibers carry no rectifiable fiber paths: distinct
            # fiber points connect through the apex only (glued rays)
            delta = np.where(np.asarray(df, float) > 0, math.pi, 0.0)
        r1, r2 = xs[:, 0], ys[:, 0]
        d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * np.cos(delta)
        return np.sqrt(np.maximum(d2, 0.0))

    def sample(self, n, seed):
        g = rng(seed)
        rs = self.r_max * g.random(n)
        fs = np.asarray(self.fiber.sample(n, seed + 10), float)
        return np.stack([rs, fs], axis=1)

    def interpolate(self, x, y, t):
        x = np.asarray(x, float).reshape(2)
        y = np.asarray(y, float).reshape(2)
        df = float(self.fiber.distance(self._fiber_coords(np.array([x[1]]))[0],
                                       self._fiber_coords(np.array([y[1]]))[0]))
        delta = self.a * df
        r1, r2 = x[0], y[0]
        if delta >= math.pi - 1e-12 or self.fiber.interpolate(x[1], y[1], 0.5) is None:
            # through the apex (or fiber not interpolable): radial pieces
            total = r1 + r2
            s = t * total
            if s <= r1:
                return np.array([r1 - s, x[1]])
            return np.array([s - r1, y[1]])
        # unroll into the plane
        p1 = np.array([r1, 0.0])
        p2 = np.array([r2 * math.cos(delta), r2 * math.sin(delta)])
        q = (1.0 - t) * p1 + t * p2
        r = float(np.hypot(q[0], q[1]))
        if r < 1e-15:
            return np.array([0.0, x[1]])
        alpha = math.atan2(q[1], q[0])
        u = min(max(alpha / delta, 0.0), 1.0) if delta > 1e-15 else 0.0
        fib = self.fiber.interpolate(x[1], y[1], u)
        return np.array([r, float(fib)])

    def geodesic(self, x, y, resolution):
        d = self.distance(x, y)
        m = max(2, int(math.ceil(d / max(resolution, 1e-12))) + 1)
        ts = np.linspace(0.0, 1.0, m)
        pts = np.array([self.interpolate(x, y, t) for t in ts])
        return spaces.GeodesicPolyline(ts * max(d, 1e-300), pts, total_length=d)

    def __repr__(self):
        return "ConeSpace(a=%g, fiber=%r)" % (self.a, self.fiber)


def make_cone(fiber, a=1.0, r_max=2.0):
    return ConeSpace(fiber, a=a, r_max=r_max)


class SuspensionSpace(MetricOracle):
    """Spherical suspension [0, pi] x_sin F via the law of cosines."""

    def __init__(self, fiber):
        self.fiber = fiber
        self.diameter_hint = math.pi
        self.tol_metric = 1e-9

    def _batch(self, pts):
        return np.asarray(pts, dtype=float).reshape(-1, 2)

    def _fiber_coords(self, col):
        if isinstance(self.fiber, spaces.FiniteMetric):
            return np.asarray(np.round(col), dtype=int)
        return col

    def dist_pairs(self, xs, ys):
        xs = self._batch(xs)
        ys = self._batch(ys)
        df = self.fiber.dist_pairs(self._fiber_coords(xs[:, 1]), self._fiber_coords(ys[:, 1]))
        delta = np.minimum(np.asarray(df, float), math.pi)
        t1, t2 = xs[:, 0], ys[:, 0]
        cosd = np.cos(t1) * np.cos(t2) + np.sin(t1) * np.sin(t2) * np.cos(delta)
        return np.arccos(np.clip(cosd, -1.0, 1.0))

    def sample(self, n, seed):
        g = rng(seed)
        ts = math.pi * g.random(n)
        fs = np.asarray(self.fiber.sample(n, seed + 10), float)
        return np.stack([ts, fs], axis=1)

    def interpolate(self, x, y, t):
        x = np.asarray(x, float).reshape(2)
        y = np.asarray(y, float).reshape(2)
        df = float(self.fiber.distance(self._fiber_coords(np.array([x[1]]))[0],
                                       self._fiber_coords(np.array([y[1]]))[0]))
        delta = min(df, math.pi)
        if self.fiber.interpolate(x[1], y[1], 0.5) is None and df > 1e-12:
            return None
        # slerp on the unit sphere in lune coordinates (polar t, azimuth)
        p1 = np.array([math.sin(x[0]), 0.0, math.cos(x[0])])
        p2 = np.array([math.sin(y[0]) * math.cos(delta), math.sin(y[0]) * math.sin(delta),
                       math.cos(y[0])])
        d = float(self.distance(x, y))
        if d < 1e-15:
            return x.copy()
        v = (p2 - math.cos(d) * p1) / math.sin(d)
        q = math.cos(t * d) * p1 + math.sin(t * d) * v
        tt = math.acos(min(max(q[2], -1.0), 1.0))
        az = math.atan2(q[1], q[0])
        u = min(max(az / delta, 0.0), 1.0) if delta > 1e-15 else 0.0
        fib = self.fiber.interpolate(x[1], y[1], u) if df > 1e-15 else x[1]
        return np.array([tt, float(fib)])

    def geodesic(self, x, y, resolution):
        d = self.distance(x, y)
        m = max(2, int(math.ceil(d / max(resolution, 1e-12))) + 1)
        ts = np.linspace(0.0, 1.0, m)
        pts = []
        for t in ts:
            p = self.interpolate(x, y, t)
            if p is None:
                return None
            pts.append(p)
        return spaces.GeodesicPolyline(ts * max(d, 1e-300), np.array(pts), total_length=d)

    def __repr__(self):
        return "SuspensionSpace(fiber=%r)" % (self.fiber,)


def make_suspension(fiber):
    return SuspensionSpace(fiber)


class ScaledSpace(MetricOracle):
    """All distances of the wrapped space multiplied by lam."""

    def __init__(self, space, lam):
        if lam <= 0:
            raise ValueError("scale factor must be positive")
        self.space = space
        self.lam = float(lam)
        if space.diameter_hint is not None:
            self.diameter_hint = self.lam * space.diameter_hint
        self.tol_metric = space.tol_metric * self.lam

    def _batch(self, pts):
        return self.space._batch(pts)

    def dist_pairs(self, xs, ys):
        return self.lam * self.space.dist_pairs(xs, ys)

    def sample(self, n, seed):
        return self.space.sample(n, seed)

    def interpolate(self, x, y, t):
        return self.space.interpolate(x, y, t)

    def geodesic(self, x, y, resolution):
        g = self.space.geodesic(x, y, resolution / self.lam)
        if g is None:
            return None
        return spaces.GeodesicPolyline(self.lam * g.params, g.points,
                                       total_length=self.lam * g.total_length)

    def __repr__(self):
        return "ScaledSpace(%g, %r)" % (self.lam, self.space)


def scale_space(space, lam):
    if lam == 1.0:
        return space
    return ScaledSpace(space, lam)


class DoubledDisk(MetricOracle):
    """Two copies of a model disk glued along boundary arcs.

    Points are rows (sheet, r, theta); distance runs one shortest-path
    query on the disjoint-union grid graph with zero-cost crossing
    edges along the glue set.
    """

    def __init__(self, disk, glue_arcs, n_rings=64, n_spokes=128):
        self.disk = disk
        self.glue_arcs = tuple(glue_arcs)  # list of (theta_lo, theta_hi)
        self.n_rings = n_rings
        self.n_spokes = n_spokes
        self.diameter_hint = 4.0 * disk.radius
        self.tol_metric = 4.0 * disk.radius / n_rings

    def _batch(self, pts):
        return np.asarray(pts, dtype=float).reshape(-1, 3)

    def _in_glue(self, theta):
        th = theta % (2.0 * math.pi)
        return any(lo - 1e-12 <= th <= hi + 1e-12 for lo, hi in self.glue_arcs)

    def dist_pairs(self, xs, ys):
        xs = self._batch(xs)
        ys = self._batch(ys)
        out = np.empty(len(xs))
        for i, (x, y) in enumerate(zip(xs, ys)):
            if int(round(x[0])) == int(round(y[0])):
                # same sheet: the convex disk geodesic is already shortest
                out[i] = self.disk.distance(x[1:], y[1:])
            else:
                out[i] = self._cross_distance(x, y)
        return out

    def _cross_distance(self, x, y):
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import dijkstra

        nr, ns = self.n_rings, self.n_spokes
        rs = np.linspace(0.0, self.disk.radius, nr + 1)
        ths = np.linspace(0.0, 2.0 * math.pi, ns, endpoint=False)
        n_sheet = (nr + 1) * ns

        def node(sheet, ir, ith):
            return sheet * n_sheet + ir * ns + ith

        src, dst, ws = [], [], []
        for dr, dth in ((0, 1), (1, 0), (1, 1), (1, -1), (1, 2), (1, -2), (2, 1), (2, -1)):
            ir = np.arange(nr + 1 - dr)
            ii, tt = np.meshgrid(ir, np.arange(ns), indexing="ij")
            tt2 = (tt + dth) % ns
            dtheta = 2.0 * math.pi / ns * abs(dth)
            w = np.asarray(model.side_from_angle(self.disk.kappa, rs[ii], rs[ii + dr], dtheta),
                           float).ravel()
            for sheet in (0, 1):
                src.append(node(sheet, ii, tt).ravel())
                dst.append(node(sheet, ii + dr, tt2).ravel())
                ws.append(w)
        # zero-cost crossings on the glue arcs (boundary ring)
        glue_idx = [k for k in range(ns) if self._in_glue(ths[k])]
        if glue_idx:
            gi = np.array(glue_idx)
            src.append(node(0, np.full(len(gi), nr), gi))
            dst.append(node(1, np.full(len(gi), nr), gi))
            ws.append(np.zeros(len(gi)))
        # query points
        total = 2 * n_sheet
        extra_edges = []
        for qi, q in ((total, x), (total + 1, y)):
            sheet = int(round(q[0]))
            i0 = int(np.clip(round(q[1] / self.disk.radius * nr), 0, nr))
            j0 = int(round(q[2] / (2 * math.pi) * ns)) % ns
            for di in range(-2, 3):
                for dj in range(-2, 3):
                    i = i0 + di
                    if not 0 <= i <= nr:
                        continue
                    j = (j0 + dj) % ns
                    w = self.disk.distance(q[1:], np.array([rs[i], ths[j]]))
                    src.append(np.array([qi]))
                    dst.append(np.array([node(sheet, i, j)]))
                    ws.append(np.array([w]))
        g = coo_matrix((np.concatenate(ws), (np.concatenate(src), np.concatenate(dst))),
                       shape=(total + 2, total + 2))
        dd = dijkstra(g, directed=False, indices=[total])
        return float(dd[0, total + 1])

    def sample(self, n, seed):
        g = rng(seed)
        sheets = g.integers(0, 2, size=n).astype(float)
        pts = self.disk.sample(n, seed + 1)
        return np.column_stack([sheets, pts])

    def swap_sheets(self, pts):
        pts = self._batch(pts).copy()
        pts[:, 0] = 1.0 - pts[:, 0]
        return pts

    def __repr__(self):
        return "DoubledDisk(%r, arcs=%r)" % (self.disk, self.glue_arcs)


def make_doubled(base, f):
    """Double B along cl(boundary - Z) with the tautological warp f-dagger.

    1-D bases produce explicit catalog spaces; disks produce a two-sheet
    oracle.  Z must be contained in the boundary of B.
    """
    kind, roots = zero_set(f, base)

    if isinstance(base, spaces.Interval):
        a, b = base.a, base.b
        roots = sorted(set(round(float(z), 12) for z in (roots or [])))
        at_a = any(abs(z - a) < 1e-9 for z in roots)
        at_b = any(abs(z - b) < 1e-9 for z in roots)
        if any(not (abs(z - a) < 1e-9 or abs(z - b) < 1e-9) for z in roots):
            raise ValueError("Z is not contained in the boundary of B")
        if at_a and at_b:
            # Z = boundary: glue set empty, B-dagger = B by convention
            return base, f
        if not roots:
            # full double: circle of length 2(b - a)
            L = 2.0 * (b - a)
            circ = spaces.Circle(L)

            def fd(x, a=a, b=b, L=L):
                x = np.mod(np.asarray(x, float), L)
                folded = np.where(x <= (b - a), x, L - x)
                return np.asarray(f(a + folded), float)
            fdag = WarpFunction(fd, f.lipschitz, zeros=(),
                                expr="double(%s)" % (f.expr or "f"))
            return circ, fdag
        if at_b:
            # glue at a: reflect across a
            dom = spaces.Interval(2.0 * a - b, b)

            def fd(x, a=a):
                return np.asarray(f(a + np.abs(np.asarray(x, float) - a)), float)
            zeros = (2.0 * a - b, b)
            fdag = WarpFunction(fd, f.lipschitz, zeros=zeros,
                                expr="reflect(%s)" % (f.expr or "f"))
            return dom, fdag
        # at_a: glue at b, reflect across b
        dom = spaces.Interval(a, 2.0 * b - a)

        def fd(x, b=b):
            return np.asarray(f(b - np.abs(np.asarray(x, float) - b)), float)
        zeros = (a, 2.0 * b - a)
        fdag = WarpFunction(fd, f.lipschitz, zeros=zeros,
                            expr="reflect(%s)" % (f.expr or "f"))
        return dom, fdag

    if isinstance(base, spaces.Ray):
        roots = sorted(set(float(z) for z in (roots or [])))
        if any(abs(z) > 1e-9 for z in roots):
            raise ValueError("Z is not contained in the boundary of B")
        if roots:
            # Z = {0} = boundary: B-dagger = B
            return base, f
        # full double of the ray: the line, truncated to the sample window
        L = base.sample_extent

        def fd(x):
            return np.asarray(f(np.abs(np.asarray(x, float))), float)
        fdag = WarpFunction(fd, f.lipschitz, zeros=(),
                            expr="double(%s)" % (f.expr or "f"))
        return spaces.Interval(-L, L), fdag

    if isinstance(base, spaces.ModelDisk):
        if kind == "boundary":
            return base, f
        if roots:
            raise ValueError("disk doubling supports Z empty or Z = boundary")
        dd = DoubledDisk(base, [(0.0, 2.0 * math.pi)])

        def fd(sheet_r, theta):
            return np.asarray(f(sheet_r, theta), float)
        fdag = WarpFunction(fd, f.lipschitz, zeros=(), arity=2,
                            expr="double(%s)" % (f.expr or "f"))
        return dd, fdag

    raise ValueError("unsupported base for doubling: %r" % (base,))
