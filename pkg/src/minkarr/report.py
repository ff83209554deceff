"""Tabular experiment runs: bounds, construction checks, sphere-code growth.

``write_report`` saves each table as CSV next to matplotlib figures of the
planar witnesses and the sphere-code growth curve.
"""

from __future__ import annotations

import csv
import os
import statistics

from . import geometry as geo
from .arrangement import verify, volume_certificate
from .bounds import cardinality_cap, lower_bound_translates, upper_bound
from .constructions import (
    axis_extension,
    four_touching_homothets,
    hexagon_seven,
    parallelotope_grid,
    sphere_code_arrangement,
)

PLANAR_BODIES = {
    "square": geo.square,
    "hexagon": geo.hexagon,
    "disc": geo.disc,
    "octagon": lambda: geo.regular_polygon(8),
}


def bounds_table(dims=range(1, 7), mus=(0.0, 0.25, 0.5, 1.0)):
    rows = []
    for d in dims:
        for mu in mus:
            rows.append({
                "d": d,
                "mu": mu,
                "upper_bound": upper_bound(d, mu),
                "floor": cardinality_cap(d, mu),
                "lower_bound_2d_plus_3": lower_bound_translates(d) if d >= 2 else 3,
            })
    return rows


def construction_table():
    """Every construction on the standard bodies, with count, cap and verdict."""
    rows = []

    def record(name, body_name, arr, certificate=None):
        rows.append({
            "construction": name,
            "body": body_name,
            "d": arr.body.dim,
            "mu": arr.mu,
            "count": len(arr),
            "cap": cardinality_cap(arr.body.dim, arr.mu),
            "valid": verify(arr, 1e-6).valid,
            "certificate": "" if certificate is None else " <= ".join(f"{v:.6g}" for v in certificate),
        })

    for d in range(1, 5):
        arr = parallelotope_grid(d)
        record("grid", f"cube{d}", arr, volume_certificate(arr, 2.0) if d == 2 else None)
    for name, make in PLANAR_BODIES.items():
        arr = hexagon_seven(make())
        record("hexagon7", name, arr, volume_certificate(arr, 2.0))
        record("touching4", name, four_touching_homothets(make()))
    for d in range(2, 7):
        record("axes", f"cube{d}", axis_extension(geo.cube(d)))
        record("axes", f"ball{d}", axis_extension(geo.ConvexBody.ball(d)))
    return rows


def sphere_code_trend(dims=range(3, 10), mus=(0.2, 0.5), attempts=200_000, seeds=range(5)):
    rows = []
    for mu in mus:
        for d in dims:
            counts = [len(sphere_code_arrangement(d, mu, attempts, seed)) for seed in seeds]
            rows.append({
                "d": d,
                "mu": mu,
                "counts": counts,
                "median_count": statistics.median(counts),
                "cap": cardinality_cap(d, mu),
            })
    return rows


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        for r in rows:
            w.writerow({k: (" ".join(map(str, v)) if isinstance(v, list) else v)
                        for k, v in r.items()})
    return path


def write_report(outdir, attempts=200_000, seeds=range(5)):
    """Run every table, write CSVs and PNG figures into ``outdir``; returns written paths."""
    from .plotting import arrangement_panels, sphere_code_figure

    os.makedirs(outdir, exist_ok=True)
    out = []
    out.append(write_csv(bounds_table(), os.path.join(outdir, "bounds.csv")))
    out.append(write_csv(construction_table(), os.path.join(outdir, "constructions.csv")))
    trend = sphere_code_trend(attempts=attempts, seeds=seeds)
    out.append(write_csv(trend, os.path.join(outdir, "sphere_codes.csv")))

    bodies = {name: make() for name, make in PLANAR_BODIES.items()}
    out.append(arrangement_panels(
        [(f"hexagon7 / {n}", hexagon_seven(b)) for n, b in bodies.items()],
        os.path.join(outdir, "hexagon7.png"), ncols=4))
    out.append(arrangement_panels(
        [(f"touching4 / {n}", four_touching_homothets(b)) for n, b in bodies.items()],
        os.path.join(outdir, "touching4.png"), ncols=4))
    out.append(sphere_code_figure(trend, os.path.join(outdir, "sphere_codes.png")))
    return out
