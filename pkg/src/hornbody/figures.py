"""Figure rendering for the slice-export path.

Uses matplotlib's object-oriented API with the Agg canvas directly, so no
global backend state is touched and rendering works headless.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np


def render_slice_figure(
    path: str,
    samples: np.ndarray,
    boundary: Optional[np.ndarray] = None,
    lam: Optional[Sequence[float]] = None,
    mu: Optional[Sequence[float]] = None,
) -> None:
    """Scatter the first two components of sampled spectra, overlay the
    traced boundary when present, and write the figure to ``path``."""
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    from matplotlib.figure import Figure

    fig = Figure(figsize=(6.0, 5.0), dpi=120)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    if samples.size:
        ax.scatter(
            samples[:, 0],
            samples[:, 1],
            s=6,
            alpha=0.35,
            color="#1f77b4",
            label=f"samples ({samples.shape[0]})",
            linewidths=0,
        )
    if boundary is not None and boundary.size:
        order = np.argsort(boundary[:, 0])
        ax.plot(
            boundary[order, 0],
            boundary[order, 1],
            color="#d62728",
            linewidth=1.4,
            label="membership boundary",
        )
    title = "product spectra"
    if lam is not None and mu is not None:
        title += f"  lam={list(map(float, lam))}  mu={list(map(float, mu))}"
    ax.set_title(title, fontsize=10)
    ax.set_xlabel("first singular value")
    ax.set_ylabel("second singular value")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.25)
    fig.tight_layout()
    fig.savefig(path)
