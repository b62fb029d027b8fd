"""Matplotlib rendering of region scans."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import BoundaryNorm, ListedColormap  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from .presets import format_complex  # noqa: E402
from .region import Code, RegionGrid  # noqa: E402

COLORS = {
    Code.RESOLVENT: "#ffffff",
    Code.RESIDUAL: "#4c72b0",
    Code.CONTINUOUS_BOUNDARY: "#dd8452",
    Code.UNRESOLVED_R1R2: "#000000",
}


def plot_region(grid: RegionGrid, ax=None, title: str | None = None):
    """Draw the coded grid, the unit level set of the ratio, and r1, r2."""
    if ax is None:
        _, ax = plt.subplots(figsize=(6, 5.5))
    w = grid.window
    cmap = ListedColormap([COLORS[c] for c in Code])
    norm = BoundaryNorm([-0.5, 0.5, 1.5, 2.5, 3.5], cmap.N)
    extent = (w.re_min, w.re_max, w.im_min, w.im_max)
    ax.imshow(grid.codes, cmap=cmap, norm=norm, extent=extent, origin="upper",
              interpolation="nearest", aspect="equal")
    centers = w.centers()
    if grid.ratios.min() < 1.0 < grid.ratios.max():
        ax.contour(centers.real, centers.imag, grid.ratios, levels=[1.0],
                   colors="k", linewidths=0.8)
    for z, lab in ((grid.params.r1, "$r_1$"), (grid.params.r2, "$r_2$")):
        ax.plot(z.real, z.imag, "k+", ms=8)
        ax.annotate(lab, (z.real, z.imag), textcoords="offset points", xytext=(4, 4))
    ax.set_xlabel(r"Re $\lambda$")
    ax.set_ylabel(r"Im $\lambda$")
    if title is None:
        vals = grid.params.bands(original=True)
        title = "B(" + "; ".join(
            ",".join(format_complex(v) for v in vals[k:k + 2]) for k in (0, 2, 4)
        ) + f"),  p = {grid.p:g}"
    ax.set_title(title, fontsize=10)
    present = sorted({int(c) for c in grid.codes.reshape(-1)})
    ax.legend(handles=[Patch(facecolor=COLORS[Code(c)], edgecolor="k", label=Code(c).name.lower())
                       for c in present],
              loc="upper right", fontsize=8, framealpha=0.9)
    return ax


def save_region_figure(grid: RegionGrid, path, dpi: int = 150) -> None:
    fig, ax = plt.subplots(figsize=(6, 5.5))
    plot_region(grid, ax=ax)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
