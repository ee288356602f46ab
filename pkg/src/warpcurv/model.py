"""Trigonometry of the constant-curvature model surfaces.

Everything here is a pure function of its inputs.  Angles are reals in
[0, pi]; the distinguished value Undefined is represented by nan so that
the batch routines can stay fully vectorized.
"""

import math

import numpy as np

UNDEFINED = float("nan")

# Relative tolerance for clamping arccos/arcosh arguments and for
# validating chart coordinates.
CLAMP_TOL = 1e-12
CHART_TOL = 1e-9

# Below this value of |kappa| * scale^2 the Euclidean branch is used;
# the stable half-angle formulas make the switch seamless.
SERIES_CUT = 1e-14


def is_defined(angle):
    """True if a model angle (or an array of them) is not Undefined."""
    return ~np.isnan(angle) if isinstance(angle, np.ndarray) else not math.isnan(angle)


def varpi(kappa):
    """pi / sqrt(kappa) for kappa > 0, +inf otherwise."""
    if kappa > 0:
        return math.pi / math.sqrt(kappa)
    return math.inf


def sn(kappa, t):
    """Solution of y'' + kappa y = 0 with y(0)=0, y'(0)=1."""
    t = np.asarray(t, dtype=float)
    scale2 = kappa * np.max(np.abs(t), initial=0.0) ** 2
    if abs(scale2) < 1e-8:
        out = t * (1.0 - kappa * t * t / 6.0 + kappa * kappa * t ** 4 / 120.0)
    elif kappa > 0:
        s = math.sqrt(kappa)
        out = np.sin(s * t) / s
    else:
        s = math.sqrt(-kappa)
        out = np.sinh(s * t) / s
    return out if out.ndim else float(out)


def cs(kappa, t):
    """Derivative of sn: cos-type solution with y(0)=1, y'(0)=0."""
    t = np.asarray(t, dtype=float)
    scale2 = kappa * np.max(np.abs(t), initial=0.0) ** 2
    if abs(scale2) < 1e-8:
        out = 1.0 - kappa * t * t / 2.0 + kappa * kappa * t ** 4 / 24.0
    elif kappa > 0:
        out = np.cos(math.sqrt(kappa) * t)
    else:
        out = np.cosh(math.sqrt(-kappa) * t)
    return out if out.ndim else float(out)


def _clamp(x, lo, hi, tol):
    """Clip x into [lo, hi]; values beyond tol outside become nan."""
    x = np.asarray(x, dtype=float)
    bad = (x < lo - tol) | (x > hi + tol)
    out = np.clip(x, lo, hi)
    if np.any(bad):
        out = np.where(bad, np.nan, out)
    return out


def angle_from_sides(kappa, a, b, c, strict=False):
    """Model angle between sides a and b, opposite side c.

    Vectorized; returns nan where the model triangle is not unique:
    triangle-inequality failure, or for kappa > 0 a perimeter of at
    least 2*varpi or a side exceeding varpi.  With strict=True the
    perimeter bound tightens to varpi (the literal one-line reading;
    see the strictness note in the docs).

    Uses the half-angle law of cosines in product form,
    tan^2(C/2) = g(c+a-b) g(c+b-a) / (g(a+b+c) g(a+b-c)), with g the
    half-argument sin/identity/sinh of the branch.  This is free of
    cancellation for thin triangles in both the C -> 0 and C -> pi
    regimes and agrees with the Euclidean formula as kappa -> 0.
    Triangle-inequality residuals within 1e-12 of zero (relative to the
    perimeter) are snapped to exact degeneracy, so collinear quadruples
    produce exact angles 0 and pi.
    """
    a, b, c = np.broadcast_arrays(
        np.asarray(a, dtype=float), np.asarray(b, dtype=float), np.asarray(c, dtype=float)
    )
    perim = a + b + c
    snap = 1e-12 * np.maximum(perim, 1.0)

    def _snapped(x):
        return np.where(np.abs(x) < snap, 0.0, x)

    m1 = _snapped(c + a - b)
    m2 = _snapped(c + b - a)
    m3 = _snapped(a + b - c)
    bad = (m1 < 0) | (m2 < 0) | (m3 < 0)
    bad = bad | (a <= 0.0) | (b <= 0.0) | (c < 0.0)
    if kappa > 0:
        w = varpi(kappa)
        bad = bad | (perim >= (w if strict else 2.0 * w))
        bad = bad | (a > w) | (b > w) | (c > w)

    with np.errstate(invalid="ignore", divide="ignore"):
        big = np.max(perim, initial=0.0)
        if abs(kappa) * big * big < SERIES_CUT:
            num = 0.25 * m1 * m2
            den = 0.25 * perim * m3
        elif kappa > 0:
            s = math.sqrt(kappa)
            num = np.sin(0.5 * s * m1) * np.sin(0.5 * s * m2)
            den = np.sin(0.5 * s * perim) * np.sin(0.5 * s * m3)
        else:
            s = math.sqrt(-kappa)
            num = np.sinh(0.5 * s * m1) * np.sinh(0.5 * s * m2)
            den = np.sinh(0.5 * s * perim) * np.sinh(0.5 * s * m3)
        ang = 2.0 * np.arctan2(np.sqrt(np.maximum(num, 0.0)), np.sqrt(np.maximum(den, 0.0)))
    out = np.where(bad, np.nan, ang)
    return out if out.ndim else float(out)


def side_from_angle(kappa, a, b, angle):
    """Opposite side from two adjacent sides and the enclosed angle."""
    a, b, angle = np.broadcast_arrays(
        np.asarray(a, dtype=float), np.asarray(b, dtype=float), np.asarray(angle, dtype=float)
    )
    h = np.sin(0.5 * angle) ** 2
    big = max(np.max(a, initial=0.0), np.max(b, initial=0.0))
    if abs(kappa) * big * big < SERIES_CUT:
        out = np.sqrt((a - b) ** 2 + 4.0 * a * b * h)
    elif kappa > 0:
        s = math.sqrt(kappa)
        hc = np.sin(0.5 * s * (a - b)) ** 2 + np.sin(s * a) * np.sin(s * b) * h
        out = 2.0 / s * np.arcsin(np.sqrt(_clamp(hc, 0.0, 1.0, CLAMP_TOL)))
    else:
        s = math.sqrt(-kappa)
        hc = np.sinh(0.5 * s * (a - b)) ** 2 + np.sinh(s * a) * np.sinh(s * b) * h
        out = 2.0 / s * np.arcsinh(np.sqrt(hc))
    return out if out.ndim else float(out)


class ModelTriangle:
    """Triangle in the model surface of curvature kappa.

    sides[i] is the side opposite vertex i.
    """

    def __init__(self, kappa, sides, strict=False):
        sides = tuple(float(s) for s in sides)
        if len(sides) != 3:
            raise ValueError("a triangle has three sides")
        if any(s < 0 for s in sides):
            raise ValueError("negative side length")
        self.kappa = float(kappa)
        self.sides = sides
        self.strict = strict

    def is_defined(self):
        a, b, c = self.sides
        if a + b < c or b + c < a or c + a < b:
            return False
        if self.kappa > 0:
            w = varpi(self.kappa)
            bound = w if self.strict else 2.0 * w
            if a + b + c >= bound or max(self.sides) > w:
                return False
        return True

    def angle(self, vertex_index):
        return model_angle(self, vertex_index)

    def __repr__(self):
        return "ModelTriangle(kappa=%g, sides=%r)" % (self.kappa, self.sides)


def model_angle(tri, vertex_index):
    """Angle of the model triangle at the given vertex, or Undefined (nan)."""
    if vertex_index not in (0, 1, 2):
        raise ValueError("vertex_index must be 0, 1 or 2")
    opp = tri.sides[vertex_index]
    adj1 = tri.sides[(vertex_index + 1) % 3]
    adj2 = tri.sides[(vertex_index + 2) % 3]
    if min(tri.sides) < 0:
        raise ValueError("negative side length")
    return float(angle_from_sides(tri.kappa, adj1, adj2, opp, strict=tri.strict))


def model_distance(kappa, a, b):
    """Geodesic distance between chart points of the model surface.

    Charts: kappa = 0 takes Cartesian vectors of any dimension;
    kappa > 0 takes vectors in R^3 of norm 1/sqrt(kappa); kappa < 0
    takes hyperboloid points (t, x, y) with t^2 - x^2 - y^2 = 1/(-kappa)
    and t > 0.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if kappa == 0:
        return float(np.linalg.norm(a - b))
    if kappa > 0:
        r = 1.0 / math.sqrt(kappa)
        for v in (a, b):
            if v.shape != (3,) or abs(np.linalg.norm(v) - r) > CHART_TOL * max(r, 1.0):
                raise ValueError("point is not on the model sphere")
        u = _clamp(kappa * float(a @ b), -1.0, 1.0, CLAMP_TOL)
        if math.isnan(u):
            raise ValueError("inner product out of range")
        return r * math.acos(u)
    r = 1.0 / math.sqrt(-kappa)
    for v in (a, b):
        if v.shape != (3,) or v[0] <= 0:
            raise ValueError("point is not on the model hyperboloid")
        q = v[0] ** 2 - v[1] ** 2 - v[2] ** 2
        if abs(q - r * r) > CHART_TOL * max(r * r, 1.0):
            raise ValueError("point is not on the model hyperboloid")
    m = float(a[0] * b[0] - a[1] * b[1] - a[2] * b[2]) / (r * r)
    if m < 1.0 - CLAMP_TOL:
        raise ValueError("inner product out of range")
    return r * math.acosh(max(m, 1.0))
