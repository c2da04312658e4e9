"""Convergence-history figures rendered next to the delimited reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["save_convergence_plot"]

# Floor for the log axis; exact zeros would otherwise drop out of the plot.
_RESIDUAL_FLOOR = 1e-17


def save_convergence_plot(reports, path, title: str | None = None) -> None:
    """One residual-vs-iteration line per solver, log scale, saved as PNG."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for rep in reports:
        history = [rec.residual_norm for rec in rep.trace]
        if not history:
            history = [rep.final_residual]
        values = np.maximum(np.asarray(history, dtype=float), _RESIDUAL_FLOOR)
        ax.semilogy(np.arange(1, len(values) + 1), values, marker="o",
                    markersize=3.5, linewidth=1.2, label=rep.solver_label)
    ax.set_xlabel("outer iteration")
    ax.set_ylabel("residual 2-norm")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
