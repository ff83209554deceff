"""Witness arrangements: cube grids, the planar seven, the 2d + 3 axis
extension, four pairwise touching homothets and random spherical codes.

Every builder verifies its output before returning it and raises
``ConstructionError`` rather than hand back an invalid arrangement.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .arrangement import Arrangement, Homothet, verify
from .geometry import (
    POLYTOPE,
    TOL,
    BodyError,
    ConvexBody,
    bisect,
    boundary_point_2d,
    cube,
    gauge,
    gauge_gradient,
    hexagon_vertices,
    inscribe_affine_regular_hexagon,
    inscribe_hexagon_by_gauge,
    support_point,
)
from .rng import CounterRNG

CONSTRUCTION_TOL = 1e-6
INNER_STARTS = 32
INNER_ROUNDS = 200
INNER_STEP_FLOOR = 1e-14
NEWTON_MAX_ITER = 100
SPHERE_BATCH = 8192


class ConstructionError(RuntimeError):
    """A construction produced an arrangement that fails verification."""


def _checked(arr: Arrangement, tol: float, what: str) -> Arrangement:
    report = verify(arr, tol)
    if not report.valid:
        worst = report.violations[0]
        raise ConstructionError(
            f"{what}: pair ({worst.i}, {worst.j}) {worst.kind}, "
            f"gauge {worst.measured_gauge!r} vs {worst.threshold!r}")
    return arr


def parallelotope_grid(d: int) -> Arrangement:
    """The 3**d translates of ``[-1, 1]**d`` centred at ``{-1, 0, 1}**d``."""
    if not 1 <= d <= 6:
        raise ValueError("parallelotope_grid supports 1 <= d <= 6")
    centers = np.array(list(itertools.product((-1.0, 0.0, 1.0), repeat=d)))
    return _checked(Arrangement.translates(cube(d), centers, 0.0), TOL, "parallelotope grid")


def hexagon_seven(body: ConvexBody, tol: float = CONSTRUCTION_TOL) -> Arrangement:
    """Origin plus the six vertices of an inscribed affine-regular hexagon."""
    if body.dim != 2:
        raise BodyError("hexagon_seven needs a planar body")
    w, v = inscribe_affine_regular_hexagon(body)
    centers = np.vstack([np.zeros(2), hexagon_vertices(w, v)])
    return _checked(Arrangement.translates(body, centers, 0.0), tol, "hexagon seven")


def _margin(g) -> np.ndarray:
    return np.minimum(np.asarray(g) - 1.0, 2.0 - np.asarray(g))


def _axis_direction(body: ConvexBody, k: int, existing: np.ndarray, tol: float):
    """Boundary point along ``e_k``, or the best direction in span(e1, e2, e_k)."""
    d = body.dim
    e = np.zeros(d)
    e[k] = 1.0
    p = e / gauge(body, e)
    if _margin(gauge(body, p - existing)).min() >= -tol:
        return p

    # ±p stays symmetric with the existing set, so checking +p suffices
    def point(phi, psi):
        u = np.zeros(phi.shape + (d,))
        u[..., k] = np.cos(phi)
        u[..., 0] = np.sin(phi) * np.cos(psi)
        u[..., 1] = np.sin(phi) * np.sin(psi)
        return u / np.asarray(gauge(body, u))[..., None]

    phi, psi = np.meshgrid(np.linspace(0, np.pi / 2, 65), np.linspace(0, 2 * np.pi, 129),
                           indexing="ij")
    P = point(phi, psi)
    score = _margin(gauge(body, P[..., None, :] - existing)).min(axis=-1)
    a, b = np.unravel_index(np.argmax(score), score.shape)
    best = (phi[a, b], psi[a, b], score[a, b])
    h = np.pi / 64
    while h > 1e-10:
        steps = np.array([[h, 0], [-h, 0], [0, h], [0, -h], [h, h], [-h, -h], [h, -h], [-h, h]])
        cand = np.array(best[:2]) + steps
        Q = point(cand[:, 0], cand[:, 1])
        s = _margin(gauge(body, Q[:, None, :] - existing)).min(axis=-1)
        j = int(np.argmax(s))
        if s[j] > best[2]:
            best = (cand[j, 0], cand[j, 1], s[j])
        else:
            h /= 2
    if best[2] < -tol:
        raise ConstructionError(
            f"axis {k + 1}: no direction in the (e{k + 1}, x1x2) slice keeps gauge distances "
            f"in [1, 2]; best margin {best[2]!r}")
    return point(np.array(best[0]), np.array(best[1]))


def axis_extension(body: ConvexBody, tol: float = CONSTRUCTION_TOL) -> Arrangement:
    """``2d + 3`` translates: the planar seven in the x1x2 section plus ``+-p_k`` per extra axis."""
    d = body.dim
    if d < 2:
        raise BodyError("axis_extension needs d >= 2")

    def section_gauge(x2):
        x = np.zeros(d)
        x[:2] = x2
        return gauge(body, x)

    w, v = inscribe_hexagon_by_gauge(section_gauge)
    centers = np.zeros((7, d))
    centers[1:, :2] = hexagon_vertices(w, v)
    for k in range(2, d):
        p = _axis_direction(body, k, centers, tol)
        centers = np.vstack([centers, p, -p])
    return _checked(Arrangement.translates(body, centers, 0.0), tol, "axis extension")


# -- four pairwise touching homothets ---------------------------------------

def _unique_support_directions(body: ConvexBody):
    """Directions whose support points in both ``u`` and ``-u`` are single points."""
    if body.kind != POLYTOPE:
        for a in np.arange(8) * np.pi / 8:
            yield np.array([math.cos(a), math.sin(a)])
        return
    V = body.hull_vertices
    n = len(V)
    for k in range(n):
        e_prev = V[k] - V[k - 1]
        e_next = V[(k + 1) % n] - V[k]
        n1 = np.array([e_prev[1], -e_prev[0]]) / np.linalg.norm(e_prev)
        n2 = np.array([e_next[1], -e_next[0]]) / np.linalg.norm(e_next)
        u = n1 + n2
        u /= np.linalg.norm(u)
        if support_point(body, u)[1] and support_point(body, -u)[1]:
            yield u


def _third_translates(body: ConvexBody, c2: np.ndarray):
    """Centers ``t`` with ``gauge(t) = gauge(t - c2) = 2`` on either side of the line through 0 and c2."""
    theta0 = math.atan2(c2[1], c2[0])

    def g(theta):
        return gauge(body, 2.0 * boundary_point_2d(body, theta).point - c2) - 2.0

    angles = (theta0 + bisect(lambda s: g(theta0 + s), 0.0, math.pi),
              theta0 - bisect(lambda s: g(theta0 - s), 0.0, math.pi))
    return [2.0 * boundary_point_2d(body, a).point for a in angles]


def _in_triangle(T: np.ndarray, pts: np.ndarray, slack: float = 1e-12) -> np.ndarray:
    a, b, c = T
    M = np.column_stack([b - a, c - a])
    lam = np.linalg.solve(M, (np.atleast_2d(pts) - a).T).T
    return (lam[:, 0] >= -slack) & (lam[:, 1] >= -slack) & (lam.sum(axis=1) <= 1 + slack)


def _newton_equal_gauges(body, centers, t0, max_iter=NEWTON_MAX_ITER):
    """Solve ``gauge(t - c_i) - 1 = s`` for ``i = 1..3`` by damped Newton."""
    z = np.array([t0[0], t0[1], gauge(body, t0 - centers).min() - 1.0])

    def residual(z):
        return gauge(body, z[:2] - centers) - 1.0 - z[2]

    r = residual(z)
    for _ in range(max_iter):
        if np.abs(r).max() < 1e-14:
            break
        J = np.column_stack([
            np.array([gauge_gradient(body, z[:2] - c) for c in centers]),
            -np.ones(3),
        ])
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            return None
        a = 1.0
        while a > 1e-6:
            zn = z + a * step
            rn = residual(zn)
            if np.abs(rn).max() < np.abs(r).max():
                break
            a /= 2
        else:
            break
        z, r = zn, rn
    return z, float(np.abs(r).max())


def largest_inner_homothet(body: ConvexBody, centers, seed: int = 0):
    """Largest homothet in the hole left by three pairwise touching translates.

    Maximizes ``min_i gauge(t - c_i) - 1`` over the triangle of the three
    canonical touch points, which contains the hole.  Multi-start compass
    search locates the maximum; Newton on the equal-gauge system polishes it.
    Returns ``(t, ratio)``.
    """
    C = np.asarray(centers, dtype=float)
    T = np.array([(C[0] + C[1]) / 2, (C[0] + C[2]) / 2, (C[1] + C[2]) / 2])

    def F(pts):
        pts = np.atleast_2d(pts)
        val = gauge(body, pts[:, None, :] - C[None, :, :]).min(axis=1) - 1.0
        return np.where(_in_triangle(T, pts), val, -np.inf)

    rng = CounterRNG(seed, stream=0x7E1)
    side = int(math.ceil(math.sqrt(2 * INNER_STARTS)))
    starts = []
    for i in range(side):
        for j in range(side - i):
            a, b = (i + 0.5) / side, (j + 0.5) / side
            if a + b < 1:
                starts.append((a, b))
    starts = np.array(starts[:INNER_STARTS])
    starts = np.clip(starts + rng.uniform(starts.shape, -0.25, 0.25) / side, 0.01, 0.98)
    over = starts.sum(axis=1) > 0.99
    starts[over] *= 0.99 / starts[over].sum(axis=1)[:, None]
    P0 = T[0] + starts[:, :1] * (T[1] - T[0]) + starts[:, 1:] * (T[2] - T[0])

    angles = np.arange(8) * np.pi / 4
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    h0 = 0.25 * max(np.linalg.norm(T[1] - T[0]), np.linalg.norm(T[2] - T[0]),
                    np.linalg.norm(T[2] - T[1]))
    ends = []
    for p in P0:
        fp = F(p)[0]
        h = h0
        for _ in range(INNER_ROUNDS):
            if h < INNER_STEP_FLOOR:
                break
            cand = p + h * dirs
            fc = F(cand)
            j = int(np.argmax(fc))
            if fc[j] > fp:
                p, fp = cand[j], fc[j]
            else:
                h /= 2
        ends.append((fp, p))
    ends.sort(key=lambda e: -e[0])

    best_t, best_val, best_res = ends[0][1], ends[0][0], np.inf
    for fp, p in ends[:8]:
        out = _newton_equal_gauges(body, C, p)
        if out is None:
            continue
        z, res = out
        t = z[:2]
        val = F(t)[0]
        # accept the polished point when it equalizes the gauges without losing size
        if res < best_res and val >= best_val - 1e-9 and val > 0:
            best_t, best_val, best_res = t, val, res
    return best_t, float(best_val)


def four_touching_homothets(body: ConvexBody, tol: float = CONSTRUCTION_TOL) -> Arrangement:
    """Four pairwise touching positive homothets of a planar body."""
    if body.dim != 2:
        raise BodyError("four_touching_homothets needs a planar body")
    zero = np.zeros(2)
    failures = []
    for u in _unique_support_directions(body):
        x2, _ = support_point(body, u)
        x1, _ = support_point(body, -u)
        c2 = x2 - x1
        t_left, t_right = _third_translates(body, c2)
        has_x2 = [gauge(body, x2 - t) <= 1.0 + tol for t in (t_left, t_right)]
        if all(has_x2):
            arr = Arrangement.translates(body, [zero, c2, t_left, t_right], 1.0)
            report = verify(arr, tol)
            if report.valid:
                return arr
            failures.append(f"shared-point branch at u={u.tolist()}: {report.violations[0]}")
            continue
        t3 = t_left if not has_x2[0] else t_right
        t4, lam4 = largest_inner_homothet(body, [zero, c2, t3])
        if not lam4 > 0:
            failures.append(f"empty inner region at u={u.tolist()}")
            continue
        arr = Arrangement(body, 1.0, [Homothet(zero), Homothet(c2), Homothet(t3),
                                       Homothet(t4, lam4)])
        report = verify(arr, tol)
        if report.valid:
            return arr
        failures.append(f"inner homothet at u={u.tolist()}: {report.violations[0]}")
    raise ConstructionError("no touching quadruple found; " + "; ".join(failures))


# -- random spherical codes --------------------------------------------------

def sphere_code_arrangement(d: int, mu: float, attempts: int, seed: int = 0) -> Arrangement:
    """Greedy random code on the unit sphere with minimum distance ``1 + mu``.

    Unit balls centred at the kept points pairwise intersect (distances are at
    most 2) and avoid each other's mu-kernels.
    """
    if d < 2:
        raise ValueError("sphere codes need d >= 2")
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    rng = CounterRNG(seed, stream=d)
    # |x - y|^2 = 2 - 2 x.y >= (1 + mu)^2  <=>  x.y <= 1 - (1 + mu)^2 / 2
    max_dot = 1.0 - (1.0 + mu) ** 2 / 2.0
    kept = np.empty((0, d))
    done = 0
    while done < attempts:
        batch = rng.unit_vectors(min(SPHERE_BATCH, attempts - done), d)
        done += len(batch)
        if len(kept):
            batch = batch[(batch @ kept.T).max(axis=1) <= max_dot]
        for x in batch:
            if not len(kept) or (kept @ x).max() <= max_dot:
                kept = np.vstack([kept, x])
    body = ConvexBody.ball(d)
    return _checked(Arrangement.translates(body, kept, mu), TOL, "sphere code")
