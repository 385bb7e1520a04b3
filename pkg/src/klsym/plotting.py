"""Figures for the report command.  Uses the non-interactive Agg backend."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["plot_normalized_roots", "plot_factor_degrees", "plot_valuations"]

GOLDEN = (math.sqrt(5) - 1.0) / 2.0


def _figure(width: float = 6.0, height: float | None = None):
    fig, ax = plt.subplots(figsize=(width, height or width * GOLDEN))
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    return fig, ax


def plot_normalized_roots(roots_by_k: dict[int, Sequence[complex]], q: int, n: int, path: Path) -> Path:
    """Reciprocal roots of K divided by ``q^(w/2)``; purity puts them on the unit circle."""
    fig, ax = _figure(5.0, 5.0)
    theta = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(theta), np.sin(theta), color="0.7", lw=0.8)
    cmap = plt.get_cmap("viridis")
    ks = sorted(roots_by_k)
    for i, k in enumerate(ks):
        scale = float(q) ** ((k * (n - 1) + 1) / 2)
        z = np.asarray(roots_by_k[k], dtype=complex) / scale
        if z.size:
            ax.scatter(z.real, z.imag, s=18, color=cmap(i / max(1, len(ks) - 1)), label=f"k={k}")
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"normalized reciprocal roots, n={n}, q={q}")
    if any(len(v) for v in roots_by_k.values()):
        ax.legend(fontsize=7, frameon=False, loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_factor_degrees(rows: Sequence[dict], path: Path) -> Path:
    """Stacked degrees of det0, detInf and K per k."""
    fig, ax = _figure()
    ks = [r["k"] for r in rows]
    bottom = np.zeros(len(rows))
    for key, color in (("deg_det0", "#4c72b0"), ("deg_detInf", "#dd8452"), ("deg_K", "#55a868")):
        vals = np.array([r[key] for r in rows], dtype=float)
        ax.bar(ks, vals, bottom=bottom, color=color, label=key.removeprefix("deg_"))
        bottom += vals
    ax.set_xlabel("k")
    ax.set_ylabel("degree")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_valuations(ks: Sequence[int], valuations: Sequence[Sequence[int | None]], cap: int, path: Path) -> Path:
    """Heat map of p-adic valuations of successive differences of K."""
    width = max((len(v) for v in valuations), default=1)
    grid = np.full((len(valuations), width), float(cap))
    for i, row in enumerate(valuations):
        for j, v in enumerate(row):
            grid[i, j] = cap if v is None else min(v, cap)
    fig, ax = _figure()
    im = ax.imshow(grid, aspect="auto", cmap="magma", vmin=0, vmax=cap)
    ax.set_yticks(range(len(valuations)))
    ax.set_yticklabels([f"{a}->{b}" for a, b in zip(ks, ks[1:])])
    ax.set_xticks(range(width))
    ax.set_xlabel("coefficient index")
    fig.colorbar(im, ax=ax, label="valuation (capped)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
