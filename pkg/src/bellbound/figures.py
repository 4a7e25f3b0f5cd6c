"""Render the bound surfaces to image files (headless, Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .surfaces import BoundSurface  # noqa: E402


def _grids(surface: BoundSurface, attr: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = surface.resolution
    axis = np.array([p.p2 for p in surface.points[:n]])
    p2g, p1g = np.meshgrid(axis, axis)
    z = np.array([getattr(p, attr) for p in surface.points]).reshape(n, n)
    return p1g, p2g, z


def render_surface_figures(surface: BoundSurface, directory: str | Path, stem: str = "surface") -> list[Path]:
    """Write <stem>_beta_max.png and <stem>_alpha_max.png into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    jobs = (
        ("beta_max", "max CHSH score $\\beta_{max}$", "classical ceiling 3/4"),
        ("alpha_max", "max IC score $\\alpha_{max}$", "causality ceiling 1"),
    )
    paths = []
    for attr, zlabel, note in jobs:
        p1g, p2g, z = _grids(surface, attr)
        fig = plt.figure(figsize=(7.0, 5.2))
        ax = fig.add_subplot(projection="3d")
        ax.plot_surface(p1g, p2g, z, cmap="viridis", linewidth=0, antialiased=True)
        ax.set_xlabel("$P_1$")
        ax.set_ylabel("$P_2$")
        ax.set_zlabel(zlabel)
        ax.set_title(f"{zlabel} over conditional outcome probabilities ({note})", fontsize=10)
        path = directory / f"{stem}_{attr}.png"
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        paths.append(path)
    return paths
