"""Minkowski arrangements of order mu for centrally symmetric convex bodies."""

from .arrangement import Arrangement, Homothet, VerificationReport, verify
from .bounds import cardinality_cap, check_dominance, upper_bound
from .geometry import ConvexBody, gauge

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "ConvexBody",
    "Homothet",
    "VerificationReport",
    "cardinality_cap",
    "check_dominance",
    "gauge",
    "upper_bound",
    "verify",
]
