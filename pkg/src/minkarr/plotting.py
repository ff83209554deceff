"""SVG and matplotlib rendering of planar arrangements."""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

import numpy as np

from .arrangement import Arrangement
from .geometry import BodyError, boundary_polygon

SVG_BALL_SAMPLES = 128
MARGIN = 0.05


def outline(arr: Arrangement, samples: int = SVG_BALL_SAMPLES) -> np.ndarray:
    """Unit-ratio boundary polyline of the arrangement's body."""
    if arr.body.dim != 2:
        raise BodyError("only planar arrangements can be drawn")
    return boundary_polygon(arr.body, samples)


def _path_data(P: np.ndarray) -> str:
    # SVG y grows downwards
    pts = [f"{x:.6f} {-y:.6f}" for x, y in P]
    return "M " + " L ".join(pts) + " Z"


def arrangement_svg(arr: Arrangement, samples: int = SVG_BALL_SAMPLES,
                    stroke_scale: float = 0.006) -> str:
    """One closed path per homothet, a dot per center, dashed mu-kernels when 0 < mu < 1
    (at mu = 1 the kernel is the body itself)."""
    P = outline(arr, samples)
    bodies = [h.center + h.ratio * P for h in arr.items]
    kernels = [h.center + arr.mu * h.ratio * P for h in arr.items] if 0 < arr.mu < 1 else []
    allpts = np.vstack(bodies) if bodies else np.zeros((1, 2))
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    lo, hi = lo - MARGIN * span, hi + MARGIN * span
    w, h = hi - lo
    sw = stroke_scale * max(w, h)
    dot = 2.5 * sw
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{lo[0]:.6f} {-hi[1]:.6f} {w:.6f} {h:.6f}">',
        f"<title>{len(arr)} homothets, mu={arr.mu:g}</title>",
    ]
    for k, Q in enumerate(bodies):
        lines.append(f'<path class="body" id={quoteattr(f"body-{k}")} d="{_path_data(Q)}" '
                     f'fill="none" stroke="#1f4e79" stroke-width="{sw:.6f}"/>')
    for k, Q in enumerate(kernels):
        lines.append(f'<path class="kernel" id={quoteattr(f"kernel-{k}")} d="{_path_data(Q)}" '
                     f'fill="none" stroke="#c0504d" stroke-width="{sw:.6f}" '
                     f'stroke-dasharray="{4 * sw:.6f} {3 * sw:.6f}"/>')
    for h_ in arr.items:
        x, y = h_.center
        lines.append(f'<circle class="center" cx="{x:.6f}" cy="{-y:.6f}" r="{dot:.6f}" fill="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(arr: Arrangement, path) -> None:
    with open(path, "w") as fh:
        fh.write(arrangement_svg(arr))


# -- matplotlib --------------------------------------------------------------

def draw_arrangement(ax, arr: Arrangement, title: str | None = None):
    """Draw a planar arrangement on a matplotlib axes."""
    from matplotlib.patches import Polygon

    P = outline(arr)
    for h in arr.items:
        ax.add_patch(Polygon(h.center + h.ratio * P, closed=True, fill=False,
                             edgecolor="#1f4e79", lw=1.0))
        if 0 < arr.mu < 1:
            ax.add_patch(Polygon(h.center + arr.mu * h.ratio * P, closed=True, fill=False,
                                 edgecolor="#c0504d", lw=0.8, ls="--"))
    C = arr.centers
    ax.plot(C[:, 0], C[:, 1], "k.", ms=4)
    ax.autoscale_view()
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title, fontsize=9)
    return ax


def arrangement_panels(panels, path, ncols: int = 3, panel_size: float = 3.0):
    """Save a grid of ``(title, arrangement)`` panels to ``path``."""
    from matplotlib.figure import Figure

    n = len(panels)
    ncols = min(ncols, n)
    nrows = -(-n // ncols)
    fig = Figure(figsize=(panel_size * ncols, panel_size * nrows))
    axes = fig.subplots(nrows, ncols, squeeze=False)
    for ax, (title, arr) in zip(axes.flat, panels):
        draw_arrangement(ax, arr, title)
    for ax in axes.flat[n:]:
        ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    return path


def sphere_code_figure(rows, path):
    """Median greedy spherical-code size against dimension, one line per mu."""
    from matplotlib.figure import Figure

    fig = Figure(figsize=(5.0, 3.5))
    ax = fig.subplots()
    for mu in sorted({r["mu"] for r in rows}):
        sel = sorted((r for r in rows if r["mu"] == mu), key=lambda r: r["d"])
        ax.semilogy([r["d"] for r in sel], [r["median_count"] for r in sel], "o-",
                    label=f"mu = {mu:g}")
        if "cap" in sel[0]:
            ax.semilogy([r["d"] for r in sel], [r["cap"] for r in sel], ":", color="gray")
    ax.set_xlabel("dimension d")
    ax.set_ylabel("translates kept")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    return path
