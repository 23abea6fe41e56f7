"""Tiling figures: dominoes drawn as rounded rectangles via matplotlib.

The ``render`` CLI subcommand feeds tiling files through here.  Output
format follows the file extension (SVG for the canonical artifacts; any
matplotlib backend extension works).  SVG output is made byte-stable by
pinning ``svg.hashsalt`` and stripping the date metadata, so identical
inputs give identical files.

Modes layer optional structure over the class coloring:

* ``polar``   - polar regions keep full saturation, the temperate zone
  is faded, and the theoretical arctic circle/ellipse is overlaid;
* ``heights`` - vertices are annotated with the height function (small
  orders), plus translucent level shading;
* ``levels``  - level-curve ellipses of the limiting placement formula
  are overlaid on the class-colored tiling.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import FancyBboxPatch

from . import __version__
from .errors import DomainError
from .regions import EAST, NORTH, SOUTH, TEMPERATE, WEST, Tiling, height_from_tiling, polar_classify

DEFAULT_PALETTE = {
    NORTH: "#4878cf",
    SOUTH: "#d65f5f",
    EAST: "#6acc65",
    WEST: "#e8bc4a",
}

__all__ = ["render_tiling", "DEFAULT_PALETTE"]


def _domino_patch(domino, color, alpha=1.0):
    (x1, y1), (x2, y2) = domino
    w = x2 - x1 + 1
    h = y2 - y1 + 1
    pad = 0.08
    return FancyBboxPatch(
        (x1 + pad, y1 + pad),
        w - 2 * pad,
        h - 2 * pad,
        boxstyle="round,pad=0,rounding_size=0.18",
        linewidth=0.4,
        edgecolor="#333333",
        facecolor=color,
        alpha=alpha,
    )


def _overlay_arctic(ax, n, bias=None, color="#111111"):
    p = 0.5 if bias is None else float(bias)
    ts = [2 * math.pi * k / 720 for k in range(721)]
    xs = [n * math.sqrt(p) * math.cos(t) for t in ts]
    ys = [n * math.sqrt(1 - p) * math.sin(t) for t in ts]
    ax.plot(xs, ys, color=color, linewidth=1.2, linestyle="--", zorder=5)


def _overlay_levels(ax, n, levels=(0.1, 0.25, 0.4)):
    from .asymptotics import level_curve

    for lv in levels:
        pts = level_curve(lv).points(720)
        if not pts:
            continue
        ax.plot(
            [n * x for x, _ in pts],
            [n * y for _, y in pts],
            linewidth=0.9,
            linestyle=":",
            color="#222222",
            zorder=5,
        )


def render_tiling(
    tiling: Tiling,
    out_path: str,
    mode: str = "classes",
    scale: float = 12.0,
    palette: dict | None = None,
    bias=None,
) -> str:
    """Draw a tiling and write it to ``out_path``; returns the path.

    ``scale`` is pixels per lattice unit.  ``mode`` is one of
    ``classes``, ``polar``, ``heights``, ``levels``.
    """
    if mode not in ("classes", "polar", "heights", "levels"):
        raise DomainError(f"unknown render mode: {mode!r}")
    palette = dict(DEFAULT_PALETTE, **(palette or {}))
    region = tiling.region
    xs = [s[0] for s in region.squares]
    ys = [s[1] for s in region.squares]
    x0, x1 = min(xs), max(xs) + 1
    y0, y1 = min(ys), max(ys) + 1
    width = (x1 - x0 + 2) * scale / 72.0
    height = (y1 - y0 + 2) * scale / 72.0

    matplotlib.rcParams["svg.hashsalt"] = "aztec-tilings"
    fig, ax = plt.subplots(figsize=(width, height))
    labels = polar_classify(tiling) if mode == "polar" else None
    for d in sorted(tiling.dominoes):
        klass = tiling.klass(d)
        alpha = 1.0
        if labels is not None and labels[d] == TEMPERATE:
            alpha = 0.25
        ax.add_patch(_domino_patch(d, palette[klass], alpha=alpha))
    n = region.order_hint
    if mode == "polar" and n is not None:
        _overlay_arctic(ax, n, bias=bias)
    if mode == "levels" and n is not None:
        _overlay_levels(ax, n)
    if mode == "heights":
        hf = height_from_tiling(tiling) if n is not None else None
        if hf is not None and n is not None and n <= 16:
            for (vx, vy), h in hf.items():
                ax.text(vx, vy, str(h), fontsize=5, ha="center", va="center", zorder=6)
    ax.set_xlim(x0 - 1, x1 + 1)
    ax.set_ylim(y0 - 1, y1 + 1)
    ax.set_aspect("equal")
    ax.set_axis_off()
    # version-stamped, date-free metadata keeps identical inputs giving
    # byte-identical files
    if out_path.endswith(".svg"):
        metadata = {"Date": None, "Creator": f"aztec-tilings {__version__}"}
    elif out_path.endswith(".png"):
        metadata = {"Software": f"aztec-tilings {__version__}"}
    else:
        metadata = None
    fig.savefig(out_path, metadata=metadata, bbox_inches="tight", pad_inches=0.05)
    plt.close(fig)
    return out_path
