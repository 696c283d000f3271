"""Planar primitives: convex hulls, shoelace areas, support and radial functions.

Points are carried as ``(n, 2)`` float arrays. Hulls use Andrew's monotone
chain with exact cross-product signs (collinear points are dropped), so the
output depends only on the input point set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np


class Point2(NamedTuple):
    x: float
    y: float


def as_points(points) -> np.ndarray:
    """Coerce to a C-contiguous ``(n, 2)`` float64 array of finite points."""
    arr = np.ascontiguousarray(points, dtype=np.float64)
    if arr.ndim == 1 and arr.shape[0] == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite coordinate in input points")
    return arr


@dataclass(frozen=True)
class PolygonalPath:
    """Ordered vertices of a piecewise-linear trajectory."""

    vertices: np.ndarray

    def __post_init__(self):
        arr = as_points(self.vertices)
        if arr.shape[0] < 1:
            raise ValueError("a path needs at least one vertex")
        arr.setflags(write=False)
        object.__setattr__(self, "vertices", arr)

    def __len__(self):
        return self.vertices.shape[0]


@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise hull vertices; 1 or 2 vertices for degenerate hulls."""

    vertices: np.ndarray

    def __post_init__(self):
        arr = as_points(self.vertices)
        arr.setflags(write=False)
        object.__setattr__(self, "vertices", arr)

    def __len__(self):
        return self.vertices.shape[0]

    @property
    def area(self) -> float:
        return polygon_area(self)

    @property
    def perimeter(self) -> float:
        return polygon_perimeter(self)


# --- kernels ----------------------------------------------------------------


@numba.njit(cache=True, inline="always")
def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


@numba.njit(cache=True)
def _monotone_chain(pts):
    """Hull of lexicographically sorted points, counterclockwise from the
    smallest point. Duplicates and collinear boundary points are dropped."""
    n = pts.shape[0]
    # de-duplicate consecutive equal points
    uniq = np.empty((n, 2))
    m = 0
    for i in range(n):
        if m == 0 or pts[i, 0] != uniq[m - 1, 0] or pts[i, 1] != uniq[m - 1, 1]:
            uniq[m, 0] = pts[i, 0]
            uniq[m, 1] = pts[i, 1]
            m += 1
    if m <= 2:
        return uniq[:m].copy()
    hull = np.empty((2 * m, 2))
    k = 0
    for i in range(m):
        while k >= 2 and _cross(hull[k - 2, 0], hull[k - 2, 1], hull[k - 1, 0], hull[k - 1, 1],
                                uniq[i, 0], uniq[i, 1]) <= 0.0:
            k -= 1
        hull[k, 0] = uniq[i, 0]
        hull[k, 1] = uniq[i, 1]
        k += 1
    lower = k + 1
    for i in range(m - 2, -1, -1):
        while k >= lower and _cross(hull[k - 2, 0], hull[k - 2, 1], hull[k - 1, 0], hull[k - 1, 1],
                                    uniq[i, 0], uniq[i, 1]) <= 0.0:
            k -= 1
        hull[k, 0] = uniq[i, 0]
        hull[k, 1] = uniq[i, 1]
        k += 1
    # last point repeats the first; collinear input leaves the two extremes
    return hull[: k - 1].copy()


@numba.njit(cache=True)
def _octagon_filter(pts):
    """Drop points strictly inside the polygon spanned by the extreme points
    in the eight directions k * pi / 4. Such points are never hull vertices."""
    n = pts.shape[0]
    if n < 16:
        return pts
    idx = np.zeros(8, dtype=np.int64)
    best = np.full(8, -np.inf)
    for i in range(n):
        x = pts[i, 0]
        y = pts[i, 1]
        # directions ordered counterclockwise: 0, 45, ..., 315 degrees
        vals = (x, x + y, y, y - x, -x, -x - y, -y, x - y)
        for d in range(8):
            if vals[d] > best[d]:
                best[d] = vals[d]
                idx[d] = i
    ex = np.empty((8, 2))
    q = 0
    for d in range(8):
        px = pts[idx[d], 0]
        py = pts[idx[d], 1]
        if q == 0 or px != ex[q - 1, 0] or py != ex[q - 1, 1]:
            ex[q, 0] = px
            ex[q, 1] = py
            q += 1
    if q > 1 and ex[q - 1, 0] == ex[0, 0] and ex[q - 1, 1] == ex[0, 1]:
        q -= 1
    if q < 3:
        return pts
    keep = np.empty(n, dtype=np.bool_)
    count = 0
    for i in range(n):
        inside = True
        for e in range(q):
            f = (e + 1) % q
            if _cross(ex[e, 0], ex[e, 1], ex[f, 0], ex[f, 1], pts[i, 0], pts[i, 1]) <= 0.0:
                inside = False
                break
        keep[i] = not inside
        if not inside:
            count += 1
    out = np.empty((count, 2))
    j = 0
    for i in range(n):
        if keep[i]:
            out[j, 0] = pts[i, 0]
            out[j, 1] = pts[i, 1]
            j += 1
    return out


def _hull_array(pts: np.ndarray, prefilter: bool = True) -> np.ndarray:
    if prefilter:
        pts = _octagon_filter(pts)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    return _monotone_chain(np.ascontiguousarray(pts[order]))


def convex_hull(points) -> ConvexPolygon:
    """Smallest convex polygon containing ``points``.

    Collinear inputs give the 2-vertex segment between the extremes, a
    single distinct point gives a 1-vertex polygon.
    """
    arr = as_points(points)
    if arr.shape[0] == 0:
        raise ValueError("convex_hull needs at least one point")
    return ConvexPolygon(_hull_array(arr))


@numba.njit(cache=True)
def _shoelace(v):
    n = v.shape[0]
    if n < 3:
        return 0.0
    s = 0.0
    for i in range(n):
        j = (i + 1) % n
        s += v[i, 0] * v[j, 1] - v[j, 0] * v[i, 1]
    return 0.5 * s


@numba.njit(cache=True)
def _perimeter(v):
    n = v.shape[0]
    if n < 2:
        return 0.0
    s = 0.0
    for i in range(n):
        j = (i + 1) % n
        s += math.hypot(v[j, 0] - v[i, 0], v[j, 1] - v[i, 1])
    return s


def polygon_area(p: ConvexPolygon) -> float:
    return float(_shoelace(p.vertices))


def polygon_perimeter(p: ConvexPolygon) -> float:
    """Closed-loop edge sum; a 2-vertex hull counts its segment twice."""
    return float(_perimeter(p.vertices))


def _path_vertices(path) -> np.ndarray:
    return path.vertices if isinstance(path, PolygonalPath) else as_points(path)


def directional_max(theta: float, path) -> tuple[float, int]:
    """Support value max_i <w_i, e_theta> and the first index attaining it."""
    v = _path_vertices(path)
    proj = v[:, 0] * math.cos(theta) + v[:, 1] * math.sin(theta)
    i = int(np.argmax(proj))
    return float(proj[i]), i


_DET_TOL = 1e-14
_ON_RAY_TOL = 1e-12


def ray_polyline_max_intersection(theta: float, path) -> float:
    """Furthest distance from the origin at which the ray at angle ``theta``
    meets the polyline, i.e. the radial function r(theta) of the trace.

    Each segment is intersected by solving rho e = (1 - s) w_i + s w_{i+1}.
    Nearly parallel segments (|det| < 1e-14) only count through endpoints
    lying on the ray within 1e-12.
    """
    v = _path_vertices(path)
    c, s_ = math.cos(theta), math.sin(theta)
    best = 0.0
    # endpoints on the ray
    along = v[:, 0] * c + v[:, 1] * s_
    off = v[:, 1] * c - v[:, 0] * s_
    on_ray = (np.abs(off) <= _ON_RAY_TOL) & (along >= 0.0)
    if np.any(on_ray):
        best = max(best, float(along[on_ray].max()))
    if v.shape[0] >= 2:
        w = v[:-1]
        d = v[1:] - v[:-1]
        cross_ed = c * d[:, 1] - s_ * d[:, 0]
        ok = np.abs(cross_ed) >= _DET_TOL
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = (w[:, 0] * d[:, 1] - w[:, 1] * d[:, 0]) / cross_ed
            s = -(c * w[:, 1] - s_ * w[:, 0]) / cross_ed
        ok &= (rho >= 0.0) & (s >= 0.0) & (s <= 1.0)
        if np.any(ok):
            best = max(best, float(rho[ok].max()))
    return best


@numba.njit(cache=True)
def _segment_rho(c, s_, wx, wy, dx, dy):
    """rho of the ray/segment intersection, or -1 if inadmissible."""
    cross_ed = c * dy - s_ * dx
    if abs(cross_ed) < _DET_TOL:
        return -1.0
    rho = (wx * dy - wy * dx) / cross_ed
    s = -(c * wy - s_ * wx) / cross_ed
    if rho >= 0.0 and s >= 0.0 and s <= 1.0:
        return rho
    return -1.0


@numba.njit(cache=True)
def _radial_sweep(v, m):
    """r(theta_k) for theta_k = 2 pi k / m over all k, visiting for each
    segment only the rays inside its angular span (plus one on each side)."""
    r = np.zeros(m)
    h = 2.0 * math.pi / m
    cosk = np.empty(m)
    sink = np.empty(m)
    for k in range(m):
        cosk[k] = math.cos(k * h)
        sink[k] = math.sin(k * h)
    n = v.shape[0]
    phi = np.empty(n)
    for i in range(n):
        phi[i] = math.atan2(v[i, 1], v[i, 0])
    # endpoint rule
    for i in range(n):
        x = v[i, 0]
        y = v[i, 1]
        if x == 0.0 and y == 0.0:
            continue
        k0 = int(math.floor(phi[i] / h))
        for kk in range(k0 - 1, k0 + 3):
            k = kk % m
            if abs(y * cosk[k] - x * sink[k]) <= _ON_RAY_TOL:
                along = x * cosk[k] + y * sink[k]
                if along >= 0.0 and along > r[k]:
                    r[k] = along
    for i in range(n - 1):
        wx = v[i, 0]
        wy = v[i, 1]
        dx = v[i + 1, 0] - wx
        dy = v[i + 1, 1] - wy
        if dx == 0.0 and dy == 0.0:
            continue
        cw = wx * v[i + 1, 1] - wy * v[i + 1, 0]
        if cw == 0.0:
            # segment on a line through the origin: check every ray
            for k in range(m):
                rho = _segment_rho(cosk[k], sink[k], wx, wy, dx, dy)
                if rho > r[k]:
                    r[k] = rho
            continue
        lo = phi[i]
        span = phi[i + 1] - lo
        if span > math.pi:
            span -= 2.0 * math.pi
        elif span < -math.pi:
            span += 2.0 * math.pi
        if span < 0.0:
            lo = lo + span
            span = -span
        k_first = int(math.ceil(lo / h)) - 1
        k_last = int(math.floor((lo + span) / h)) + 1
        for kk in range(k_first, k_last + 1):
            k = kk % m
            rho = _segment_rho(cosk[k], sink[k], wx, wy, dx, dy)
            if rho > r[k]:
                r[k] = rho
    return r


def radial_function(path, m: int) -> np.ndarray:
    """r(2 pi k / m) for k = 0..m-1, equal to calling
    :func:`ray_polyline_max_intersection` at every angle."""
    if m < 1:
        raise ValueError("m must be positive")
    return _radial_sweep(_path_vertices(path), int(m))


def star_area_riemann(path, m: int) -> tuple[float, float]:
    """Polar Riemann sum (1/2) sum r_k^2 (2 pi / m) and max r_k."""
    r = radial_function(path, m)
    return 0.5 * float(np.dot(r, r)) * (2.0 * math.pi / m), float(r.max())


def point_in_convex_polygon(p: ConvexPolygon, points, tol: float = 1e-12) -> np.ndarray:
    """True where every edge sees the point on its left (within ``tol``)."""
    pts = as_points(points)
    v = p.vertices
    n = v.shape[0]
    if n == 1:
        return np.hypot(pts[:, 0] - v[0, 0], pts[:, 1] - v[0, 1]) <= tol
    ok = np.ones(pts.shape[0], dtype=bool)
    edges = [(0, 1)] if n == 2 else [(i, (i + 1) % n) for i in range(n)]
    for i, j in edges:
        cr = (v[j, 0] - v[i, 0]) * (pts[:, 1] - v[i, 1]) - (v[j, 1] - v[i, 1]) * (pts[:, 0] - v[i, 0])
        if n == 2:
            ok &= np.abs(cr) <= tol
        else:
            ok &= cr >= -tol
    if n == 2:
        t = (pts - v[0]) @ (v[1] - v[0])
        ok &= (t >= -tol) & (t <= float((v[1] - v[0]) @ (v[1] - v[0])) + tol)
    return ok

