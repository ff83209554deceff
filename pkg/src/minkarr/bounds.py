"""Closed-form cardinality bounds for order-mu arrangements of translates."""

from __future__ import annotations

import math

import numpy as np

from .arrangement import Arrangement

# guards floor() against representation error, e.g. (7/3)**2 or 3.0**d
_FLOOR_EPS = 1e-9


def _check_mu(mu: float) -> None:
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")


def upper_bound(d: int, mu: float) -> float:
    """Largest possible number of translates, ``(1 + 2 / (1 + mu))**d``."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    _check_mu(mu)
    return (1.0 + 2.0 / (1.0 + mu)) ** d


def packing_bound(d: int, lam: float) -> float:
    """Points with pairwise gauge distances in ``[1, lam]`` number at most ``(lam + 1)**d``."""
    if lam < 1.0:
        raise ValueError("lam must be >= 1")
    return (lam + 1.0) ** d


def cardinality_cap(d: int, mu: float) -> int:
    return int(math.floor(upper_bound(d, mu) + _FLOOR_EPS))


def lower_bound_translates(d: int) -> int:
    if d < 2:
        raise ValueError("the 2d + 3 lower bound is stated for d >= 2")
    return 2 * d + 3


def check_dominance(arr: Arrangement) -> bool:
    if not np.allclose(arr.ratios, 1.0):
        raise ValueError("dominance is checked for translates with ratio 1")
    return len(arr) <= cardinality_cap(arr.body.dim, arr.mu)
