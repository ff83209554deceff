"""Arrangements of positive homothets and their order-mu verifier.

For homothets ``l_i K + c_i`` of an origin-symmetric body and
``g = gauge(c_i - c_j)``:

* the two bodies intersect iff ``g <= l_i + l_j``;
* the interior of ``l_i K + c_i`` misses the kernel ``mu l_j K + c_j``
  iff ``g >= l_i + mu l_j``.

With all ratios equal to one these reduce to ``1 + mu <= g <= 2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    POLYTOPE,
    TOL,
    BodyError,
    ConvexBody,
    boundary_polygon,
    convex_hull_2d,
    gauge,
    polygon_area,
)

DISJOINT = "disjoint"
KERNEL_OVERLAP = "kernel_overlap"
# certificate tolerance when a ball is replaced by its inscribed polygon
APPROX_CERTIFICATE_TOL = 1e-3


class CertificateError(AssertionError):
    """The volume certificate inequality chain was violated."""


@dataclass(frozen=True)
class Homothet:
    center: np.ndarray
    ratio: float = 1.0

    def __post_init__(self):
        c = np.array(self.center, dtype=float).reshape(-1)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "ratio", float(self.ratio))
        if not self.ratio > 0:
            raise ValueError(f"homothet ratio must be positive, got {self.ratio}")


@dataclass(frozen=True, eq=False)
class Arrangement:
    body: ConvexBody
    mu: float
    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "items", tuple(self.items))
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must lie in [0, 1], got {self.mu}")
        for h in self.items:
            if h.center.shape != (self.body.dim,):
                raise BodyError(
                    f"center {h.center.tolist()} does not match body dimension {self.body.dim}")

    @classmethod
    def translates(cls, body: ConvexBody, centers, mu: float = 0.0) -> "Arrangement":
        return cls(body, mu, [Homothet(c, 1.0) for c in np.asarray(centers, dtype=float)])

    @property
    def centers(self) -> np.ndarray:
        if not self.items:
            return np.empty((0, self.body.dim))
        return np.array([h.center for h in self.items])

    @property
    def ratios(self) -> np.ndarray:
        return np.array([h.ratio for h in self.items])

    def __len__(self) -> int:
        return len(self.items)

    def with_mu(self, mu: float) -> "Arrangement":
        return Arrangement(self.body, mu, self.items)


@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    kind: str
    measured_gauge: float
    threshold: float


@dataclass
class VerificationReport:
    valid: bool
    violations: list = field(default_factory=list)
    translates_only: bool = True
    all_ratios_one: bool = True

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [
                {"i": v.i, "j": v.j, "kind": v.kind,
                 "measured_gauge": v.measured_gauge, "threshold": v.threshold}
                for v in self.violations
            ],
            "translates_only": self.translates_only,
            "all_ratios_one": self.all_ratios_one,
        }


def pairwise_gauges(body: ConvexBody, centers) -> np.ndarray:
    C = np.asarray(centers, dtype=float)
    return gauge(body, C[:, None, :] - C[None, :, :])


def verify(arr: Arrangement, tol: float = TOL) -> VerificationReport:
    """Check every pair for intersection and mutual kernel avoidance."""
    n = len(arr)
    lam = arr.ratios
    report = VerificationReport(
        valid=True,
        translates_only=bool(n == 0 or np.all(np.abs(lam - lam[0]) <= tol)),
        all_ratios_one=bool(np.all(np.abs(lam - 1.0) <= tol)),
    )
    if n < 2:
        return report
    G = pairwise_gauges(arr.body, arr.centers)
    iu, ju = np.triu_indices(n, k=1)
    g = G[iu, ju]
    li, lj = lam[iu], lam[ju]
    upper = li + lj
    lower = np.maximum(li + arr.mu * lj, lj + arr.mu * li)
    for k in np.flatnonzero((g > upper + tol) | (g < lower - tol)):
        if g[k] > upper[k] + tol:
            v = Violation(int(iu[k]), int(ju[k]), DISJOINT, float(g[k]), float(upper[k]))
        else:
            v = Violation(int(iu[k]), int(ju[k]), KERNEL_OVERLAP, float(g[k]), float(lower[k]))
        report.violations.append(v)
    report.valid = not report.violations
    return report


def touch_point(body: ConvexBody, hi: Homothet, hj: Homothet, tol: float = TOL) -> np.ndarray:
    """Canonical contact point of two touching homothets.

    For a body that is not strictly convex the contact set can be a segment;
    this returns the point on the ray between the centers.
    """
    diff = hj.center - hi.center
    g = gauge(body, diff)
    if abs(g - (hi.ratio + hj.ratio)) > tol:
        raise ValueError(
            f"homothets do not touch: gauge distance {g}, sum of ratios {hi.ratio + hj.ratio}")
    return hi.center + hi.ratio * diff / g


def contains(body: ConvexBody, h: Homothet, p, tol: float = TOL) -> bool:
    return bool(gauge(body, (np.asarray(p) - h.center) / h.ratio) <= 1.0 + tol)


def triple_point_check(arr: Arrangement, tol: float = TOL) -> list:
    """Triples ``(i, j, k)`` sharing a point, with a witness.

    For pairwise touching bodies any common point of three lies in each
    pairwise contact set, so canonical touch points are the candidates.
    """
    report = verify(arr.with_mu(1.0), tol)
    if not report.valid:
        raise ValueError("triple_point_check needs a pairwise touching arrangement")
    items = arr.items
    hits = []
    for i, j, k in itertools.combinations(range(len(items)), 3):
        for a, b, c in ((i, j, k), (i, k, j), (j, k, i)):
            p = touch_point(arr.body, items[a], items[b], tol)
            if contains(arr.body, items[c], p, tol):
                hits.append((i, j, k, p))
                break
    return hits


def volume_certificate(arr: Arrangement, lam_max: float, tol: float | None = None):
    """Area chain ``n |K| / 4 <= |conv U (c_i + K/2)| <= ((lam_max + 1) / 2)^2 |K|``.

    Planar translates only.  A ball is replaced by its inscribed polygon and
    the tolerance widened to ``APPROX_CERTIFICATE_TOL``.
    """
    body = arr.body
    if body.dim != 2:
        raise BodyError("volume certificate is planar")
    if not np.allclose(arr.ratios, 1.0, atol=TOL, rtol=0):
        raise ValueError("volume certificate needs translates with ratio 1")
    if tol is None:
        tol = TOL if body.kind == POLYTOPE else APPROX_CERTIFICATE_TOL
    n = len(arr)
    if n >= 2:
        G = pairwise_gauges(body, arr.centers)[np.triu_indices(n, k=1)]
        if G.min() < 1.0 - tol or G.max() > lam_max + tol:
            raise ValueError(
                f"pairwise gauge distances [{G.min()}, {G.max()}] leave [1, {lam_max}]")
    P = boundary_polygon(body)
    area_k = polygon_area(P)
    cloud = (arr.centers[:, None, :] + 0.5 * P[None, :, :]).reshape(-1, 2)
    lhs = n * area_k / 4.0
    mid = polygon_area(convex_hull_2d(cloud))
    rhs = ((lam_max + 1.0) / 2.0) ** 2 * area_k
    if lhs > mid + tol or mid > rhs + tol:
        raise CertificateError(f"certificate chain broken: {lhs} <= {mid} <= {rhs}")
    return lhs, mid, rhs
