"""Origin-symmetric convex bodies and their gauge (Minkowski functional).

A body is stored origin-centred and acts as the unit ball of a norm,
``gauge(x) = min{t >= 0 : x in tK}``.  Three variants are supported: a
symmetric V-polytope, the Euclidean ball, and an affine image ``A B_2^d``.

All equality and boundary tests use an absolute tolerance (``TOL``).  This is
meaningful for bodies whose circumradius lies roughly in [1/2, 2], which is
the case for every builtin and generated body.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull
from scipy.spatial import QhullError

TOL = 1e-9
BISECT_MAX_ITER = 200
BISECT_INTERVAL = 1e-12
BALL_POLYGON_SAMPLES = 256

POLYTOPE = "polytope"
BALL = "ball"
AFFINE_BALL = "affine_ball"


class BodyError(ValueError):
    """Invalid or degenerate body, or a dimension mismatch."""


@dataclass(frozen=True, eq=False)
class ConvexBody:
    kind: str
    dim: int
    vertices: np.ndarray | None = None
    matrix: np.ndarray | None = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def polytope(cls, vertices, tol: float = TOL) -> "ConvexBody":
        V = np.array(vertices, dtype=float)
        if V.ndim != 2 or V.shape[0] == 0 or V.shape[1] == 0:
            raise BodyError("vertex list must be a nonempty (n, d) array")
        if not np.all(np.isfinite(V)):
            raise BodyError("vertex coordinates must be finite")
        d = V.shape[1]
        if np.linalg.matrix_rank(V, tol=1e-10) < d:
            raise BodyError("vertices are not full-dimensional")
        # central symmetry: every vertex has a partner within tol of its negation
        dist = np.linalg.norm(V[:, None, :] + V[None, :, :], axis=2)
        if not np.all(dist.min(axis=1) <= tol):
            raise BodyError("vertex list is not centrally symmetric")
        V.setflags(write=False)
        return cls(POLYTOPE, d, vertices=V)

    @classmethod
    def ball(cls, dim: int) -> "ConvexBody":
        if int(dim) < 1:
            raise BodyError("dimension must be >= 1")
        return cls(BALL, int(dim))

    @classmethod
    def affine_ball(cls, matrix) -> "ConvexBody":
        A = np.array(matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
            raise BodyError("affine ball needs a square matrix")
        if not np.all(np.isfinite(A)) or abs(np.linalg.det(A)) < 1e-12:
            raise BodyError("affine ball matrix is singular")
        A.setflags(write=False)
        return cls(AFFINE_BALL, A.shape[0], matrix=A)

    # -- derived data -----------------------------------------------------

    @cached_property
    def facets(self) -> np.ndarray:
        """Rows ``a`` with ``K = {x : a.x <= 1}`` (polytopes only)."""
        if self.kind != POLYTOPE:
            raise BodyError("facets are only defined for polytopes")
        V = self.vertices
        if self.dim == 1:
            r = np.abs(V).max()
            return np.array([[1.0 / r], [-1.0 / r]])
        try:
            hull = ConvexHull(V)
        except QhullError as exc:
            raise BodyError(f"degenerate polytope: {exc}") from None
        normals, offsets = hull.equations[:, :-1], hull.equations[:, -1]
        if np.any(offsets >= -1e-12):
            raise BodyError("origin is not an interior point")
        A = normals / (-offsets)[:, None]
        # qhull triangulates non-simplicial facets; drop repeated normals
        _, idx = np.unique(np.round(A, 10), axis=0, return_index=True)
        return A[np.sort(idx)]

    @cached_property
    def hull_vertices(self) -> np.ndarray:
        """Extreme points; counter-clockwise when ``dim == 2``."""
        if self.kind != POLYTOPE:
            raise BodyError("hull vertices are only defined for polytopes")
        if self.dim == 2:
            return convex_hull_2d(self.vertices)
        if self.dim == 1:
            r = np.abs(self.vertices).max()
            return np.array([[-r], [r]])
        return self.vertices[ConvexHull(self.vertices).vertices]

    @cached_property
    def inverse_matrix(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)

    @cached_property
    def circumradius(self) -> float:
        if self.kind == BALL:
            return 1.0
        if self.kind == AFFINE_BALL:
            return float(np.linalg.norm(self.matrix, 2))
        return float(np.linalg.norm(self.vertices, axis=1).max())

    @cached_property
    def half_widths(self) -> np.ndarray:
        """Half side lengths of the axis-aligned bounding box."""
        if self.kind == BALL:
            return np.ones(self.dim)
        if self.kind == AFFINE_BALL:
            return np.linalg.norm(self.matrix, axis=1)
        return np.abs(self.vertices).max(axis=0)

    @cached_property
    def is_strictly_convex(self) -> bool:
        return self.kind != POLYTOPE

    def gauge(self, x) -> np.ndarray | float:
        return gauge(self, x)

    def __repr__(self) -> str:
        if self.kind == POLYTOPE:
            return f"ConvexBody(polytope, dim={self.dim}, n_vertices={len(self.vertices)})"
        if self.kind == AFFINE_BALL:
            return f"ConvexBody(affine_ball, matrix={self.matrix.tolist()})"
        return f"ConvexBody(ball, dim={self.dim})"


@dataclass(frozen=True)
class BoundaryPoint2D:
    theta: float
    point: np.ndarray


# -- builtin bodies ----------------------------------------------------------

def cube(d: int) -> ConvexBody:
    corners = np.array(np.meshgrid(*[[-1.0, 1.0]] * d, indexing="ij")).reshape(d, -1).T
    return ConvexBody.polytope(corners)


def square() -> ConvexBody:
    return cube(2)


def regular_polygon(n: int, radius: float = 1.0, phase: float = 0.0) -> ConvexBody:
    """Regular ``n``-gon (``n`` even) with vertices at angles ``phase + 2 pi k / n``."""
    if n < 4 or n % 2:
        raise BodyError("a centrally symmetric regular polygon needs an even n >= 4")
    ang = phase + 2 * np.pi * np.arange(n) / n
    V = radius * np.column_stack([np.cos(ang), np.sin(ang)])
    # exact negation pairs so symmetry holds bit-for-bit
    V[n // 2:] = -V[: n // 2]
    return ConvexBody.polytope(V)


def hexagon() -> ConvexBody:
    return regular_polygon(6)


def disc() -> ConvexBody:
    return ConvexBody.ball(2)


def prism(base: ConvexBody, half_height: float = 1.0) -> ConvexBody:
    """Right prism over a planar polygon, used as the 3-d analogue of a polygon."""
    V = base.hull_vertices
    top = np.column_stack([V, np.full(len(V), half_height)])
    bottom = np.column_stack([V, np.full(len(V), -half_height)])
    return ConvexBody.polytope(np.vstack([top, bottom]))


def random_symmetric_polygon(rng, n_dirs: int | None = None,
                             rmin: float = 0.5, rmax: float = 1.5) -> ConvexBody:
    """Symmetrize ``n_dirs`` random directions into a polygon ``conv{+-p_i}``."""
    if n_dirs is None:
        n_dirs = 3 + int(rng.uniform() * 6)
    while True:
        ang = np.sort(rng.uniform(n_dirs, 0.0, np.pi))
        gaps = np.diff(np.concatenate([ang, [ang[0] + np.pi]]))
        if gaps.min() > 0.05 and gaps.max() < np.pi - 0.05:
            break
    r = rng.uniform(n_dirs, rmin, rmax)
    P = r[:, None] * np.column_stack([np.cos(ang), np.sin(ang)])
    return ConvexBody.polytope(np.vstack([P, -P]))


# -- core operations ---------------------------------------------------------

def _as_points(body: ConvexBody, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (body.dim,):
        raise BodyError(f"expected vectors of dimension {body.dim}, got shape {x.shape}")
    return x


def gauge(body: ConvexBody, x):
    """Minkowski functional of ``body`` at ``x``; vectorized over leading axes."""
    x = _as_points(body, x)
    if body.kind == BALL:
        g = np.linalg.norm(x, axis=-1)
    elif body.kind == AFFINE_BALL:
        g = np.linalg.norm(x @ body.inverse_matrix.T, axis=-1)
    else:
        g = np.maximum((x @ body.facets.T).max(axis=-1), 0.0)
    return float(g) if np.ndim(g) == 0 else g


def gauge_gradient(body: ConvexBody, x) -> np.ndarray:
    """A subgradient of the gauge at ``x`` (exact gradient where it is smooth)."""
    x = _as_points(body, x)
    if body.kind == BALL:
        n = np.linalg.norm(x)
        return x / n if n > 0 else np.zeros_like(x)
    if body.kind == AFFINE_BALL:
        Ainv = body.inverse_matrix
        y = Ainv @ x
        n = np.linalg.norm(y)
        return Ainv.T @ y / n if n > 0 else np.zeros_like(x)
    A = body.facets
    return A[np.argmax(A @ x)]


def polytope_gauge_lp(vertices, x) -> float:
    """Gauge of ``conv(vertices)`` at ``x`` as a linear program.

    Minimizes ``t = sum(alpha)`` subject to ``V^T alpha = x``, ``alpha >= 0``,
    i.e. ``x`` is a convex combination of ``t * vertices``.
    """
    V = np.asarray(vertices, dtype=float)
    x = np.asarray(x, dtype=float)
    n = len(V)
    res = linprog(np.ones(n), A_eq=V.T, b_eq=x, bounds=[(0, None)] * n, method="highs")
    if res.status != 0:
        raise BodyError(f"gauge LP failed: {res.message}")
    return float(res.fun)


def support_point(body: ConvexBody, direction, tol: float = TOL):
    """Maximizer of ``<direction, .>`` over the body and whether it is unique."""
    u = _as_points(body, direction)
    nu = np.linalg.norm(u)
    if nu == 0:
        raise BodyError("support direction must be nonzero")
    if body.kind == BALL:
        return u / nu, True
    if body.kind == AFFINE_BALL:
        y = body.matrix.T @ u
        return body.matrix @ (y / np.linalg.norm(y)), True
    V = body.vertices
    h = V @ (u / nu)
    top = h.max()
    at_max = np.flatnonzero(h >= top - tol)
    # repeated vertices in the input list are not distinct maximizers
    distinct = np.unique(np.round(V[at_max], 12), axis=0)
    return V[at_max[0]].copy(), len(distinct) == 1


def boundary_point_2d(body: ConvexBody, theta: float) -> BoundaryPoint2D:
    if body.dim != 2:
        raise BodyError("boundary_point_2d needs a planar body")
    u = np.array([math.cos(theta), math.sin(theta)])
    return BoundaryPoint2D(float(theta), u / gauge(body, u))


def boundary_polygon(body: ConvexBody, samples: int = BALL_POLYGON_SAMPLES) -> np.ndarray:
    """Counter-clockwise boundary polygon; exact for polytopes, inscribed ``samples``-gon otherwise."""
    if body.dim != 2:
        raise BodyError("boundary polygon needs a planar body")
    if body.kind == POLYTOPE:
        return body.hull_vertices
    t = 2 * np.pi * np.arange(samples) / samples
    U = np.column_stack([np.cos(t), np.sin(t)])
    if body.kind == AFFINE_BALL:
        P = U @ body.matrix.T
        return P if np.linalg.det(body.matrix) > 0 else P[::-1]
    return U


def bisect(f, lo: float, hi: float, max_iter: int = BISECT_MAX_ITER,
           interval: float = BISECT_INTERVAL, leftmost: bool = False) -> float:
    """Root of ``f`` on ``[lo, hi]`` given ``f(lo) <= 0 <= f(hi)``.

    If ``f`` vanishes on a whole interval the right end is returned, or the
    left end with ``leftmost=True``.
    """
    flo, fhi = f(lo), f(hi)
    if flo > 0 or fhi < 0:
        raise BodyError(f"bisection not bracketed: f({lo})={flo}, f({hi})={fhi}")
    for _ in range(max_iter):
        if abs(hi - lo) < interval:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm < 0 or (fm == 0 and not leftmost):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def inscribe_hexagon_by_gauge(g2) -> tuple[np.ndarray, np.ndarray]:
    """Affine-regular hexagon inscribed in the unit ball of the planar gauge ``g2``.

    ``g2`` maps a 2-vector to its gauge.  Returns ``(w, v)`` with
    ``g2(w) = g2(v) = g2(v - w) = 1``; vertices are ``+-w, +-v, +-(v - w)``.
    """
    def bp(theta):
        u = np.array([math.cos(theta), math.sin(theta)])
        return u / g2(u)

    w = bp(0.0)
    # first crossing, so a flat stretch of roots (polygon edges) resolves the same way every time
    theta = bisect(lambda t: g2(bp(t) - w) - 1.0, 0.0, math.pi, leftmost=True)
    return w, bp(theta)


def inscribe_affine_regular_hexagon(body: ConvexBody) -> tuple[np.ndarray, np.ndarray]:
    if body.dim != 2:
        raise BodyError("hexagon inscription needs a planar body")
    return inscribe_hexagon_by_gauge(lambda x: gauge(body, x))


def hexagon_vertices(w, v) -> np.ndarray:
    """Hexagon ``w, v, v-w, -w, -v, w-v`` in cyclic order."""
    w, v = np.asarray(w), np.asarray(v)
    return np.array([w, v, v - w, -w, -v, w - v])


def convex_hull_2d(points) -> np.ndarray:
    """Counter-clockwise hull (monotone chain) without collinear vertices."""
    P = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(P) < 3:
        return P

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def chain(pts):
        out = []
        for p in pts:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(tuple(p))
        return out

    lower = chain(P)
    upper = chain(P[::-1])
    hull = lower[:-1] + upper[:-1]
    return np.array(hull)


def polygon_area(polygon) -> float:
    P = np.asarray(polygon, dtype=float)
    if len(P) < 3:
        return 0.0
    x, y = P[:, 0], P[:, 1]
    return abs(0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))
