"""Stochastic search for large order-mu arrangements of translates.

Each restart owns the substream ``CounterRNG(seed, restart)``, so restarts
can run in any order (or in parallel) and merge deterministically: largest
count wins, ties go to the lowest restart index.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .arrangement import Arrangement, verify
from .bounds import cardinality_cap
from .geometry import ConvexBody, gauge
from .rng import CounterRNG

log = logging.getLogger(__name__)

SAMPLE_BATCH = 512
PROPOSAL_CHUNK = 16
BISECT_STEPS = 60
# gauge distances this close to an end of the band count as exact contacts
TIGHT = 1e-7
IMPROVE_STREAM = 1 << 32
# local_improve's step scale decays to this fraction over the budget
FINAL_STEP_FRACTION = 1e-3
INSERT_EVERY = 10
INSERT_TRIES = 8


class BoundViolation(AssertionError):
    """A verified arrangement exceeded the theoretical cardinality cap."""


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    restarts: int = 4
    iterations: int = 2000
    step_scale: float = 0.1
    tol: float = 1e-9

    def __post_init__(self):
        if self.restarts < 1 or self.iterations < 1:
            raise ValueError("restarts and iterations must be positive")
        if not (self.step_scale > 0 and self.tol > 0):
            raise ValueError("step_scale and tol must be positive")


def sample_gauge_ball(body: ConvexBody, rng: CounterRNG, n: int, radius: float = 2.0) -> np.ndarray:
    """``n`` uniform points of ``radius * K`` by rejection from its bounding box."""
    box = radius * body.half_widths
    out = []
    have = 0
    while have < n:
        P = rng.uniform((SAMPLE_BATCH, body.dim), -1.0, 1.0) * box
        P = P[gauge(body, P) <= radius]
        out.append(P)
        have += len(P)
    return np.vstack(out)[:n]


def _shell_radii(mu: float, rng: CounterRNG, n: int) -> np.ndarray:
    """Radii in [1 + mu, 2]; half of them snapped to an endpoint so exact contacts occur."""
    u = rng.uniform((n, 2))
    r = 1.0 + mu + (1.0 - mu) * u[:, 0]
    r = np.where(u[:, 1] < 0.25, 1.0 + mu, r)
    return np.where(u[:, 1] > 0.75, 2.0, r)


def _two_shell_points(body, a, b, r1, r2, e2) -> np.ndarray:
    """Points ``t`` with ``gauge(t - a) = r1`` and ``gauge(t - b) = r2`` in the plane spanned by ``b - a`` and ``e2``.

    Vectorized bisection over the rows.  Along the ray from ``a`` towards ``b``
    the residual is ``|r1 - gauge(b - a)| - r2 <= 0`` and on the opposite ray
    it is ``r1 + gauge(b - a) - r2 >= 0``, so ``[0, pi]`` always brackets.
    """
    e1 = b - a
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)

    def point(theta):
        u = np.cos(theta)[:, None] * e1 + np.sin(theta)[:, None] * e2
        return a + r1[:, None] * u / gauge(body, u)[:, None]

    lo = np.zeros(len(a))
    hi = np.full(len(a), np.pi)
    for _ in range(BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        below = gauge(body, point(mid) - b) - r2 <= 0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return point(0.5 * (lo + hi))


def propose(body: ConvexBody, mu: float, centers: np.ndarray, rng: CounterRNG, n: int) -> np.ndarray:
    """Mix of candidate centers given the current kept set.

    * uniform in the gauge ball of radius 2 around the centroid;
    * on a random shell ``gauge(t - c) = r`` of one kept center;
    * on the intersection of shells of two kept centers (needs two kept);
    * a point reflection ``2 a - b`` of one kept center through another;
    * a parallelogram completion ``a + b - c`` of three kept centers.

    The last two reproduce lattice-like structure such as grids and the
    hexagonal seven.
    """
    d = body.dim
    m = len(centers)
    kinds = (rng.uniform(n) * 5).astype(int)
    if m < 2:
        kinds = np.minimum(kinds, 1)
    elif d < 2:
        kinds = np.where(kinds == 2, 1, kinds)
    if m < 3:
        kinds = np.where(kinds == 4, 3, kinds)
    out = np.empty((n, d))

    def pick(k, upto):
        return np.minimum((rng.uniform(k) * upto).astype(int), upto - 1)

    ball = np.flatnonzero(kinds == 0)
    if len(ball):
        out[ball] = centers.mean(axis=0) + sample_gauge_ball(body, rng, len(ball))

    one = np.flatnonzero(kinds == 1)
    if len(one):
        u = rng.unit_vectors(len(one), d)
        base = centers[pick(len(one), m)]
        r = _shell_radii(mu, rng, len(one))
        out[one] = base + r[:, None] * u / gauge(body, u)[:, None]

    two = np.flatnonzero(kinds == 2)
    if len(two):
        k = len(two)
        i = pick(k, m)
        j = pick(k, m - 1)
        j = j + (j >= i)
        a, b = centers[i], centers[j]
        # random unit vector orthogonal to b - a
        e1 = (b - a) / np.linalg.norm(b - a, axis=1, keepdims=True)
        e2 = rng.unit_vectors(k, d)
        e2 -= (e2 * e1).sum(axis=1, keepdims=True) * e1
        e2 /= np.maximum(np.linalg.norm(e2, axis=1, keepdims=True), 1e-300)
        r1 = _shell_radii(mu, rng, k)
        r2 = _shell_radii(mu, rng, k)
        out[two] = _two_shell_points(body, a, b, r1, r2, e2)

    refl = np.flatnonzero(kinds == 3)
    if len(refl):
        i = pick(len(refl), m)
        j = pick(len(refl), m - 1)
        j = j + (j >= i)
        out[refl] = 2.0 * centers[i] - centers[j]

    para = np.flatnonzero(kinds == 4)
    if len(para):
        k = len(para)
        i, j, l = pick(k, m), pick(k, m), pick(k, m)
        out[para] = centers[i] + centers[j] - centers[l]
    return out


def _admissible(body, mu: float, kept: np.ndarray, cand: np.ndarray, tol: float) -> np.ndarray:
    """Mask of candidates whose gauge distance to every kept center lies in [1 + mu, 2] up to ``tol``."""
    if not len(kept):
        return np.ones(len(cand), dtype=bool)
    g = gauge(body, cand[:, None, :] - kept[None, :, :])
    return np.all((g >= 1.0 + mu - tol) & (g <= 2.0 + tol), axis=1)


def _insert_best(body, mu, centers: np.ndarray, cand: np.ndarray, tol: float) -> np.ndarray:
    """Insert the best admissible candidate, if any.

    Best means most exact contacts (gauge distance at either end of the
    admissible band), then smallest gauge distance to the centroid.
    """
    g = gauge(body, cand[:, None, :] - centers[None, :, :])
    ok = np.all((g >= 1.0 + mu - tol) & (g <= 2.0 + tol), axis=1)
    if not ok.any():
        return centers
    cand, g = cand[ok], g[ok]
    tight = ((np.abs(g - (1.0 + mu)) <= TIGHT) | (np.abs(g - 2.0) <= TIGHT)).sum(axis=1)
    spread = gauge(body, cand - centers.mean(axis=0))
    j = np.lexsort((spread, -tight))[0]
    return np.vstack([centers, cand[j]])


def _greedy_restart(body: ConvexBody, mu: float, config: SearchConfig, restart: int) -> np.ndarray:
    rng = CounterRNG(config.seed, stream=restart)
    centers = np.zeros((1, body.dim))
    used = 0
    while used < config.iterations:
        m = min(PROPOSAL_CHUNK, config.iterations - used)
        cand = propose(body, mu, centers, rng, m)
        centers = _insert_best(body, mu, centers, cand, config.tol)
        used += m
    return centers


def _best(results):
    # max count, ties by restart index
    return max(enumerate(results), key=lambda e: (len(e[1]), -e[0]))


def greedy_insert(body: ConvexBody, d: int, mu: float, config: SearchConfig = SearchConfig()) -> Arrangement:
    """Best greedy random insertion over ``config.restarts`` restarts."""
    if d != body.dim:
        raise ValueError(f"dimension {d} does not match body dimension {body.dim}")
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    runs = [_greedy_restart(body, mu, config, r) for r in range(config.restarts)]
    _, centers = _best(runs)
    return _emit(Arrangement.translates(body, centers, mu), config.tol)


def _min_margin(body, mu, centers: np.ndarray) -> float:
    n = len(centers)
    if n < 2:
        return np.inf
    g = gauge(body, centers[:, None, :] - centers[None, :, :])[np.triu_indices(n, 1)]
    return float(np.minimum(2.0 - g, g - (1.0 + mu)).min())


def _point_margin(body, mu, centers: np.ndarray, k: int, p: np.ndarray) -> float:
    others = np.delete(centers, k, axis=0)
    if not len(others):
        return np.inf
    g = gauge(body, others - p)
    return float(np.minimum(2.0 - g, g - (1.0 + mu)).min())


def _swap_one(body, mu, centers: np.ndarray, cand: np.ndarray, tol: float) -> np.ndarray:
    g = gauge(body, cand[:, None, :] - centers[None, :, :])
    bad = (g < 1.0 + mu - tol) | (g > 2.0 + tol)
    single = np.flatnonzero(bad.sum(axis=1) == 1)
    if not len(single):
        return centers
    j = single[0]
    out = centers.copy()
    out[np.flatnonzero(bad[j])[0]] = cand[j]
    return out


def local_improve(arr: Arrangement, config: SearchConfig = SearchConfig(), stream: int = 0) -> Arrangement:
    """Jiggle centers to widen the minimum margin and retry insertions.

    A move of center ``k`` is accepted when it keeps every pair admissible,
    does not shrink the global minimum margin and strictly widens the margin
    of ``k`` itself.  Every ``INSERT_EVERY`` iterations a few proposals are
    offered for insertion; when none fits, a proposal that clashes with a
    single kept center replaces it (a count-neutral move off jammed
    plateaus) and fresh proposals around the swapped set get one more try.
    """
    if not verify(arr, config.tol).valid:
        raise ValueError("local_improve needs a valid arrangement")
    if not np.allclose(arr.ratios, 1.0):
        raise ValueError("local_improve works on translates with ratio 1")
    body, mu = arr.body, arr.mu
    rng = CounterRNG(config.seed, stream=IMPROVE_STREAM + stream)
    centers = arr.centers.copy()
    decay = FINAL_STEP_FRACTION ** (1.0 / config.iterations)
    scale = config.step_scale
    for it in range(config.iterations):
        if it % INSERT_EVERY == 0:
            cand = propose(body, mu, centers, rng, INSERT_TRIES)
            grown = _insert_best(body, mu, centers, cand, config.tol)
            if len(grown) == len(centers) and len(centers) > 1:
                grown = _swap_one(body, mu, centers, cand, config.tol)
                if grown is not centers:
                    # a swap lands on a tight contact; insert before jiggling loosens it
                    cand = propose(body, mu, grown, rng, INSERT_TRIES)
                    grown = _insert_best(body, mu, grown, cand, config.tol)
            centers = grown
        elif len(centers) > 1:
            k = min(int(rng.uniform() * len(centers)), len(centers) - 1)
            p = centers[k] + scale * rng.normal(body.dim)
            others = np.delete(centers, k, axis=0)
            if _admissible(body, mu, others, p[None, :], config.tol)[0]:
                old_global = _min_margin(body, mu, centers)
                old_local = _point_margin(body, mu, centers, k, centers[k])
                trial = centers.copy()
                trial[k] = p
                if (_point_margin(body, mu, trial, k, p) > old_local
                        and _min_margin(body, mu, trial) >= old_global):
                    centers = trial
        scale *= decay
    return _emit(Arrangement.translates(body, centers, mu), config.tol)


def _emit(arr: Arrangement, tol: float) -> Arrangement:
    report = verify(arr, tol)
    if not report.valid:
        raise AssertionError(f"search emitted an invalid arrangement: {report.violations[:3]}")
    cap = cardinality_cap(arr.body.dim, arr.mu)
    if len(arr) > cap:
        log.error("verified arrangement of %d translates exceeds cap %d", len(arr), cap)
        raise BoundViolation(f"{len(arr)} translates exceed the cap {cap} at mu={arr.mu}")
    return arr


def run_search(body: ConvexBody, mu: float, config: SearchConfig = SearchConfig(),
               improve: bool = True):
    """Greedy insertion followed by ``local_improve`` per restart.

    Returns the best arrangement and a stats dict with per-restart counts.
    """
    results = []
    for r in range(config.restarts):
        arr = Arrangement.translates(body, _greedy_restart(body, mu, config, r), mu)
        arr = _emit(arr, config.tol)
        greedy_count = len(arr)
        if improve:
            arr = local_improve(arr, config, stream=r)
        results.append((arr, greedy_count))
    idx, (best, _) = max(enumerate(results), key=lambda e: (len(e[1][0]), -e[0]))
    stats = {
        "restart_counts": [len(a) for a, _ in results],
        "greedy_counts": [g for _, g in results],
        "best_restart": idx,
        "best_count": len(best),
        "cap": cardinality_cap(body.dim, mu),
    }
    return best, stats


SIX_PROBE_MUS = (0.001, 0.005, 0.01, 0.02, 0.05)


def six_translate_probe(bodies: dict, config: SearchConfig = SearchConfig(), mus=SIX_PROBE_MUS):
    """Record the best count found for each planar body and small mu; exploratory only."""
    rows = []
    for name, body in bodies.items():
        for mu in mus:
            arr, stats = run_search(body, mu, config)
            rows.append({"body": name, "mu": mu, "count": len(arr),
                         "found_six": len(arr) >= 6, "cap": stats["cap"]})
    return rows
