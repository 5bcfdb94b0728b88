"""Log-log figures for sweep results."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .formats import SweepRow  # noqa: E402


def plot_sweep(rows: list[SweepRow], path, fit=None, title: str | None = None) -> None:
    """Scatter of layer number against set size on log axes, with the fitted line."""
    good = [r for r in rows if r.layers > 0]
    n = np.array([r.n for r in good], dtype=float)
    L = np.array([r.layers for r in good], dtype=float)
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.loglog(n, L, "o", ms=4, label="measured")
    if fit is not None and len(n):
        xs = np.geomspace(n.min(), n.max(), 50)
        ax.loglog(xs, np.exp(fit.intercept) * xs ** fit.slope, "-",
                  label=f"slope {fit.slope:.3f}")
    ax.set_xlabel("|X|")
    ax.set_ylabel("L(X)")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
