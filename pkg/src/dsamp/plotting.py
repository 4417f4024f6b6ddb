"""Figure rendering for reconstructed fields (1-D and 2-D grids only).

Figures are written to files, never shown; the Agg backend is forced so
the CLI works headless.
"""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _as_real(values: np.ndarray) -> np.ndarray:
    vals = np.asarray(values)
    if np.iscomplexobj(vals):
        if np.any(vals.imag != 0):
            return np.abs(vals)
        return vals.real
    return vals


def plot_field(grid, values, path, title: str = "") -> None:
    """Render one field: a line plot for 1-D grids, a heat map for 2-D."""
    axes = [list(map(float, g)) for g in grid]
    vals = _as_real(values)
    if len(axes) == 1:
        fig, ax = plt.subplots(figsize=(7.0, 4.0))
        ax.plot(axes[0], vals, lw=1.2)
        ax.set_xlabel("x1")
        ax.set_ylabel("value")
    elif len(axes) == 2:
        fig, ax = plt.subplots(figsize=(6.0, 5.0))
        mesh = ax.pcolormesh(axes[0], axes[1], vals.T, shading="nearest")
        fig.colorbar(mesh, ax=ax)
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
    else:
        raise ValueError("figure rendering supports 1-D and 2-D grids only")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_comparison(grid, values, reference, path, labels=("reconstruction", "reference")) -> None:
    """Render a field next to a reference field plus their absolute difference."""
    axes = [list(map(float, g)) for g in grid]
    a = _as_real(values)
    b = _as_real(reference)
    diff = np.abs(np.asarray(values) - np.asarray(reference))
    if len(axes) == 1:
        fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7.0, 6.0), sharex=True)
        ax1.plot(axes[0], a, lw=1.2, label=labels[0])
        ax1.plot(axes[0], b, lw=1.0, ls="--", label=labels[1])
        ax1.legend()
        ax1.set_ylabel("value")
        ax2.semilogy(axes[0], np.maximum(diff, 1e-18), lw=1.0, color="k")
        ax2.set_ylabel("|difference|")
        ax2.set_xlabel("x1")
    elif len(axes) == 2:
        fig, axs = plt.subplots(1, 3, figsize=(13.0, 4.0))
        for ax, field, name in zip(axs, (a, b, diff), (*labels, "|difference|")):
            mesh = ax.pcolormesh(axes[0], axes[1], np.asarray(field).T, shading="nearest")
            fig.colorbar(mesh, ax=ax)
            ax.set_title(name)
            ax.set_xlabel("x1")
            ax.set_ylabel("x2")
    else:
        raise ValueError("figure rendering supports 1-D and 2-D grids only")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
