"""JSON interchange for bodies, arrangements and verification reports.

Output is canonical: fixed key order and every float written with 17
significant digits, so equal values always serialize to equal bytes and
parse back bit-identically.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .arrangement import Arrangement, Homothet, VerificationReport
from .geometry import AFFINE_BALL, BALL, POLYTOPE, ConvexBody


class FormatError(ValueError):
    """Malformed body or arrangement document."""


def body_to_dict(body: ConvexBody) -> dict:
    if body.kind == POLYTOPE:
        return {"type": POLYTOPE, "vertices": body.vertices.tolist()}
    if body.kind == AFFINE_BALL:
        return {"type": AFFINE_BALL, "matrix": body.matrix.tolist()}
    return {"type": BALL, "dim": body.dim}


def body_from_dict(doc) -> ConvexBody:
    if not isinstance(doc, dict) or "type" not in doc:
        raise FormatError("body must be an object with a 'type' field")
    kind = doc["type"]
    try:
        if kind == POLYTOPE:
            return ConvexBody.polytope(_float_matrix(doc["vertices"], "vertices"))
        if kind == BALL:
            dim = doc["dim"]
            if isinstance(dim, bool) or not isinstance(dim, (int, float)) or dim != int(dim):
                raise FormatError("ball 'dim' must be an integer")
            return ConvexBody.ball(int(dim))
        if kind == AFFINE_BALL:
            return ConvexBody.affine_ball(_float_matrix(doc["matrix"], "matrix"))
    except KeyError as exc:
        raise FormatError(f"body of type {kind!r} is missing {exc}") from None
    raise FormatError(f"unknown body type {kind!r}")


def _float_matrix(rows, name) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise FormatError(f"'{name}' must be a nonempty list of lists")
    try:
        M = np.array(rows, dtype=float)
    except (TypeError, ValueError):
        raise FormatError(f"'{name}' must contain numbers of consistent length") from None
    if M.ndim != 2:
        raise FormatError(f"'{name}' rows must have equal length")
    return M


def arrangement_to_dict(arr: Arrangement) -> dict:
    return {
        "body": body_to_dict(arr.body),
        "mu": arr.mu,
        "items": [{"center": h.center.tolist(), "ratio": h.ratio} for h in arr.items],
    }


def arrangement_from_dict(doc) -> Arrangement:
    if not isinstance(doc, dict):
        raise FormatError("arrangement must be a JSON object")
    for key in ("body", "mu", "items"):
        if key not in doc:
            raise FormatError(f"arrangement is missing '{key}'")
    body = body_from_dict(doc["body"])
    items = doc["items"]
    if not isinstance(items, list):
        raise FormatError("'items' must be a list")
    homs = []
    for k, it in enumerate(items):
        if not isinstance(it, dict) or "center" not in it:
            raise FormatError(f"item {k} needs a 'center'")
        center = it["center"]
        if not isinstance(center, list):
            raise FormatError(f"item {k}: 'center' must be a list")
        try:
            homs.append(Homothet(np.array(center, dtype=float), float(it.get("ratio", 1.0))))
        except (TypeError, ValueError) as exc:
            raise FormatError(f"item {k}: {exc}") from None
    try:
        mu = float(doc["mu"])
    except (TypeError, ValueError):
        raise FormatError("'mu' must be a number") from None
    return Arrangement(body, mu, homs)


def report_to_dict(report: VerificationReport) -> dict:
    return report.to_dict()


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"cannot serialize non-finite number {x}")
        if x == 0.0 and math.copysign(1.0, x) < 0:
            return "-0.0"  # bare "-0" would parse back as the integer 0
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical JSON text for dicts produced by the ``*_to_dict`` helpers."""
    return _encode(obj)


def dump_arrangement(arr: Arrangement, extra: dict | None = None) -> str:
    doc = arrangement_to_dict(arr)
    if extra:
        doc.update(extra)
    return dumps(doc)


def loads_arrangement(text: str) -> Arrangement:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return arrangement_from_dict(doc)


def load_arrangement(path) -> Arrangement:
    with open(path) as fh:
        return loads_arrangement(fh.read())


def load_body(path) -> ConvexBody:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from None
    return body_from_dict(doc)
