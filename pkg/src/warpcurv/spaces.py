"""Metric oracle interface and the catalog of concrete spaces.

Points are encoded per kind: a real for 1-D spaces, an integer index
for finite metrics, polar (r, theta) pairs for model disks.  Batch
points are numpy arrays with one row (or entry) per point, so that
pairwise distances vectorize.
"""

import math

import numpy as np

from . import model


def rng(seed, stream=0):
    """Deterministic counter-based generator; identical on every platform."""
    return np.random.Generator(np.random.Philox(key=[int(seed), int(stream)]))


class GeodesicPolyline:
    """Discrete curve with per-node parameter and optional speed data.

    params are strictly increasing.  For warped-product curves the
    nodes carry (base point, fiber parameter) and per-node speed
    estimates v_B and v_F-bar.
    """

    def __init__(self, params, points, base_points=None, fiber_params=None,
                 speed_base=None, speed_fiber=None, total_length=None):
        self.params = np.asarray(params, dtype=float)
        if np.any(np.diff(self.params) <= 0):
            raise ValueError("params must be strictly increasing")
        self.points = points
        self.base_points = base_points
        self.fiber_params = fiber_params
        self.speed_base = speed_base
        self.speed_fiber = speed_fiber
        self.total_length = total_length

    def __len__(self):
        return len(self.params)


class MetricOracle:
    """Uniform distance-oracle interface."""

    tol_metric = 1e-9
    diameter_hint = None

    def distance(self, x, y):
        return float(self.dist_pairs(self._batch([x]), self._batch([y]))[0])

    def dist_pairs(self, xs, ys):
        """Elementwise distances between two equal-length point batches."""
        raise NotImplementedError

    def sample(self, n, seed):
        raise NotImplementedError

    def geodesic(self, x, y, resolution):
        return None

    def interpolate(self, x, y, t):
        """Point at fraction t along some geodesic x -> y, or None."""
        return None

    def contains(self, x):
        return True

    def _batch(self, pts):
        return np.asarray(pts, dtype=float)

    def pdist_matrix(self, pts):
        pts = self._batch(pts)
        n = len(pts)
        i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        return self.dist_pairs(pts[i.ravel()], pts[j.ravel()]).reshape(n, n)


class Interval(MetricOracle):
    kind = "Interval"

    def __init__(self, a, b):
        if not a < b:
            raise ValueError("need a < b")
        self.a = float(a)
        self.b = float(b)
        self.diameter_hint = self.b - self.a

    def contains(self, x):
        return self.a - 1e-12 <= float(x) <= self.b + 1e-12

    def dist_pairs(self, xs, ys):
        return np.abs(np.asarray(xs, float) - np.asarray(ys, float))

    def sample(self, n, seed):
        return self.a + (self.b - self.a) * rng(seed).random(n)

    def interpolate(self, x, y, t):
        return (1.0 - t) * float(x) + t * float(y)

    def geodesic(self, x, y, resolution):
        d = abs(float(y) - float(x))
        m = max(2, int(math.ceil(d / max(resolution, 1e-12))) + 1)
        ts = np.linspace(0.0, 1.0, m)
        pts = (1.0 - ts) * float(x) + ts * float(y)
        return GeodesicPolyline(ts * max(d, 1e-300), pts, total_length=d)

    def __repr__(self):
        return "Interval(%g, %g)" % (self.a, self.b)


class Ray(MetricOracle):
    """The half line [0, inf); samples are drawn from [0, sample_extent]."""

    kind = "Ray"

    def __init__(self, sample_extent=2.0):
        self.sample_extent = float(sample_extent)
        self.diameter_hint = None

    def contains(self, x):
        return float(x) >= -1e-12

    def dist_pairs(self, xs, ys):
        return np.abs(np.asarray(xs, float) - np.asarray(ys, float))

    def sample(self, n, seed):
        return self.sample_extent * rng(seed).random(n)

    def interpolate(self, x, y, t):
        return (1.0 - t) * float(x) + t * float(y)

    def geodesic(self, x, y, resolution):
        d = abs(float(y) - float(x))
        m = max(2, int(math.ceil(d / max(resolution, 1e-12))) + 1)
        ts = np.linspace(0.0, 1.0, m)
        pts = (1.0 - ts) * float(x) + ts * float(y)
        return GeodesicPolyline(ts * max(d, 1e-300), pts, total_length=d)

    def __repr__(self):
        return "Ray()"


class Circle(MetricOracle):
    """Circle of length L, coordinates taken mod L."""

    kind = "Circle"

    def __init__(self, length):
        if not length > 0:
            raise ValueError("circle length must be positive")
        self.length = float(length)
        self.diameter_hint = self.length / 2.0

    def dist_pairs(self, xs, ys):
        d = np.abs(np.asarray(xs, float) - np.asarray(ys, float)) % self.length
        return np.minimum(d, self.length - d)

    def sample(self, n, seed):
        return self.length * rng(seed).random(n)

    def interpolate(self, x, y, t):
        x = float(x) % self.length
        y = float(y) % self.length
        delta = (y - x) % self.length
        if delta > self.length / 2.0:
            delta -= self.length
        return (x + t * delta) % self.length

    def geodesic(self, x, y, resolution):
        d = self.distance(x, y)
        m = max(2, int(math.ceil(d / max(resolution, 1e-12))) + 1)
        ts = np.linspace(0.0, 1.0, m)
        pts = np.array([self.interpolate(x, y, t) for t in ts])
        return GeodesicPolyline(ts * max(d, 1e-300), pts, total_length=d)

    def __repr__(self):
        return "Circle(%g)" % self.length


class PointSpace(MetricOracle):
    kind = "Point"
    diameter_hint = 0.0

    def dist_pairs(self, xs, ys):
        return np.zeros(len(np.atleast_1d(xs)))

    def sample(self, n, seed):
        return np.zeros(n)

    def interpolate(self, x, y, t):
        return 0.0

    def __repr__(self):
        return "PointSpace()"


class FiniteMetric(MetricOracle):
    """Finite metric space given by its distance matrix; points are indices."""

    kind = "FiniteMetric"

    def __init__(self, matrix, check=True):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        if check:
            if not np.allclose(m, m.T, atol=1e-12):
                raise ValueError("matrix must be symmetric")
            if np.any(np.abs(np.diag(m)) > 1e-12) or np.any(m < 0):
                raise ValueError("matrix must have zero diagonal and be nonnegative")
            if np.any(m[:, :, None] > m[:, None, :] + m[None, :, :] + 1e-12):
                raise ValueError("matrix violates the triangle inequality")
        self.matrix = m
        self.n = m.shape[0]
        self.diameter_hint = float(m.max())

    @classmethod
    def from_file(cls, path):
        """Plain text: first line n, then n lines of n space-separated reals."""
        with open(path) as fh:
            tokens = fh.read().split()
        if not tokens:
            raise ValueError("empty matrix file")
        n = int(tokens[0])
        vals = [float(t) for t in tokens[1:]]
        if len(vals) != n * n:
            raise ValueError("expected %d matrix entries, got %d" % (n * n, len(vals)))
        return cls(np.array(vals).reshape(n, n))

    def contains(self, x):
        return 0 <= int(x) < self.n

    def _batch(self, pts):
        return np.asarray(pts, dtype=int)

    def dist_pairs(self, xs, ys):
        return self.matrix[np.asarray(xs, int), np.asarray(ys, int)]

    def sample(self, n, seed):
        return rng(seed).integers(0, self.n, size=n)

    def __repr__(self):
        return "FiniteMetric(n=%d)" % self.n


def tripod(leg=1.0, n_leaves=3):
    """Star metric: center index 0 plus leaves at distance leg."""
    n = n_leaves + 1
    m = np.full((n, n), 2.0 * leg)
    m[0, :] = leg
    m[:, 0] = leg
    np.fill_diagonal(m, 0.0)
    return FiniteMetric(m)


class ModelDisk(MetricOracle):
    """Closed metric disk of radius R about a point of the model surface.

    Points are polar pairs (r, theta).  For kappa > 0 the disk must
    have R < varpi; distances use the ambient model metric, which is
    intrinsic whenever the disk is convex (R < varpi/2 for kappa > 0).
    Non-convex spherical disks fall back to a polar-grid shortest path.
    """

    kind = "ModelDisk"

    def __init__(self, kappa, radius):
        if radius <= 0:
            raise ValueError("radius must be positive")
        if kappa > 0 and radius >= model.varpi(kappa):
            raise ValueError("spherical disk radius must be < varpi")
        self.kappa = float(kappa)
        self.radius = float(radius)
        self.convex = not (kappa > 0 and radius >= model.varpi(kappa) / 2.0)
        self.diameter_hint = 2.0 * radius

    def contains(self, x):
        r = float(np.asarray(x, float).reshape(2)[0])
        return -1e-12 <= r <= self.radius + 1e-12

    def _batch(self, pts):
        return np.asarray(pts, dtype=float).reshape(-1, 2)

    def dist_pairs(self, xs, ys):
        xs = self._batch(xs)
        ys = self._batch(ys)
        dth = np.abs(xs[:, 1] - ys[:, 1]) % (2.0 * math.pi)
        dth = np.minimum(dth, 2.0 * math.pi - dth)
        d = model.side_from_angle(self.kappa, xs[:, 0], ys[:, 0], dth)
        d = np.atleast_1d(np.asarray(d, float))
        if not self.convex:
            for i in range(len(d)):
                d[i] = self._grid_distance(xs[i], ys[i])
        return d

    def _grid_distance(self, x, y, n_rings=96, n_spokes=192):
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import dijkstra

        rs = np.linspace(0.0, self.radius, n_rings + 1)
        ths = np.linspace(0.0, 2.0 * math.pi, n_spokes, endpoint=False)
        rr, tt = np.meshgrid(rs, ths, indexing="ij")
        nodes = np.stack([rr.ravel(), tt.ravel()], axis=1)
        nodes = np.vstack([nodes, [x, y]])
        idx = np.arange((n_rings + 1) * n_spokes).reshape(n_rings + 1, n_spokes)
        src, dst = [], []
        for di, dj in ((0, 1), (1, 0), (1, 1), (1, -1), (1, 2), (1, -2), (2, 1), (2, -1)):
            ii = idx[: n_rings + 1 - di if di else None]
            jj = np.roll(idx, -dj, axis=1)[di:]
            src.append(ii.ravel())
            dst.append(jj.ravel())
        src = np.concatenate(src)
        dst = np.concatenate(dst)
        # connect the two query points to their nearest grid ring/spoke cell
        extra_s, extra_d = [], []
        for qi, q in ((len(nodes) - 2, x), (len(nodes) - 1, y)):
            i0 = int(np.clip(round(q[0] / self.radius * n_rings), 0, n_rings))
            j0 = int(round(q[1] / (2.0 * math.pi) * n_spokes)) % n_spokes
            for di in range(-2, 3):
                for dj in range(-2, 3):
                    i = i0 + di
                    if 0 <= i <= n_rings:
                        extra_s.append(qi)
                        extra_d.append(idx[i, (j0 + dj) % n_spokes])
        src = np.concatenate([src, np.array(extra_s, int)])
        dst = np.concatenate([dst, np.array(extra_d, int)])
        a, b = nodes[src], nodes[dst]
        dth = np.abs(a[:, 1] - b[:, 1]) % (2.0 * math.pi)
        dth = np.minimum(dth, 2.0 * math.pi - dth)
        w = np.asarray(model.side_from_angle(self.kappa, a[:, 0], b[:, 0], dth), float)
        n = len(nodes)
        g = coo_matrix((w, (src, dst)), shape=(n, n))
        dd = dijkstra(g, directed=False, indices=[n - 2])
        return float(dd[0, n - 1])

    def _embed(self, pts):
        """Chart embedding of polar points for interpolation."""
        pts = self._batch(pts)
        r, th = pts[:, 0], pts[:, 1]
        if self.kappa == 0:
            return np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
        if self.kappa > 0:
            s = math.sqrt(self.kappa)
            R = 1.0 / s
            return np.stack([
                R * np.sin(s * r) * np.cos(th),
                R * np.sin(s * r) * np.sin(th),
                R * np.cos(s * r),
            ], axis=1)
        s = math.sqrt(-self.kappa)
        R = 1.0 / s
        return np.stack([
            R * np.cosh(s * r),
            R * np.sinh(s * r) * np.cos(th),
            R * np.sinh(s * r) * np.sin(th),
        ], axis=1)

    def _unembed(self, v):
        if self.kappa == 0:
            return np.array([math.hypot(v[0], v[1]), math.atan2(v[1], v[0]) % (2 * math.pi)])
        if self.kappa > 0:
            s = math.sqrt(self.kappa)
            R = 1.0 / s
            r = R * math.acos(min(max(v[2] / R, -1.0), 1.0))
            return np.array([r, math.atan2(v[1], v[0]) % (2 * math.pi)])
        s = math.sqrt(-self.kappa)
        R = 1.0 / s
        r = R * math.acosh(max(v[0] / R, 1.0))
        return np.array([r, math.atan2(v[2], v[1]) % (2 * math.pi)])

    def interpolate(self, x, y, t):
        if not self.convex:
            return None
        ex = self._embed([x])[0]
        ey = self._embed([y])[0]
        if self.kappa == 0:
            return self._unembed((1.0 - t) * ex + t * ey)
        d = self.distance(x, y)
        if d < 1e-15:
            return np.asarray(x, float).reshape(2)
        # slerp on the sphere / hyperboloid through sn/cs coefficients
        sd = model.sn(self.kappa, d)
        v = (ey - model.cs(self.kappa, d) * ex) / sd
        p = model.cs(self.kappa, t * d) * ex + model.sn(self.kappa, t * d) * v
        return self._unembed(p)

    def geodesic(self, x, y, resolution):
        if not self.convex:
            return None
        d = self.distance(x, y)
        m = max(2, int(math.ceil(d / max(resolution, 1e-12))) + 1)
        ts = np.linspace(0.0, 1.0, m)
        pts = np.array([self.interpolate(x, y, t) for t in ts])
        return GeodesicPolyline(ts * max(d, 1e-300), pts, total_length=d)

    def sample(self, n, seed):
        g = rng(seed)
        r = self.radius * np.sqrt(g.random(n))
        th = 2.0 * math.pi * g.random(n)
        return np.stack([r, th], axis=1)

    def boundary_point(self, theta):
        """Boundary parameterized by angle."""
        return np.array([self.radius, theta % (2.0 * math.pi)])

    def __repr__(self):
        return "ModelDisk(kappa=%g, R=%g)" % (self.kappa, self.radius)


def catalog_distance(space, x, y):
    """Closed-form intrinsic distance on a catalog space."""
    if not (space.contains(x) and space.contains(y)):
        raise ValueError("point outside space")
    return space.distance(x, y)


def verify_metric_axioms(space, n_samples, seed):
    """Check symmetry, identity and the triangle inequality on a sample.

    Returns (passed, witness, worst) where witness is the first
    violating triple of points, or None.
    """
    if n_samples < 3:
        raise ValueError("need at least 3 samples")
    pts = space.sample(n_samples, seed)
    d = space.pdist_matrix(pts)
    tol = space.tol_metric
    n = len(d)
    worst = 0.0

    asym = np.abs(d - d.T)
    if asym.max() > tol:
        i, j = np.unravel_index(np.argmax(asym), asym.shape)
        return False, (pts[i], pts[j], None), float(asym.max())
    diag = np.abs(np.diag(d))
    if diag.max() > tol:
        i = int(np.argmax(diag))
        return False, (pts[i], pts[i], None), float(diag.max())
    # triangle: d[i,j] <= d[i,k] + d[k,j]
    viol = d[:, None, :] - (d[:, :, None] + d.T[None, :, :])
    # viol[i,k,j] = d[i,j] - d[i,k] - d[k,j]
    worst = float(viol.max())
    if worst > tol:
        i, k, j = np.unravel_index(np.argmax(viol), viol.shape)
        return False, (pts[i], pts[k], pts[j]), worst
    return True, None, max(worst, float(asym.max()), float(diag.max()))
