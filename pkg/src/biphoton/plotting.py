"""Static figures rendered next to the CSV/JSON outputs.

Uses the object-oriented matplotlib API so no GUI backend is ever touched.
"""

from __future__ import annotations

import textwrap

import numpy as np
from matplotlib.figure import Figure

LABELS = {
    "p_qs": r"$P_{q_s}$",
    "p_qi": r"$P_{q_i}$",
    "p_omega_s": r"$P_{\Omega_s}$",
    "p_omega_i": r"$P_{\Omega_i}$",
    "eta_s": r"$\eta_s$",
    "eta_i": r"$\eta_i$",
    "pef_signal_heralded": r"$P_{\Omega_s}\eta_i$",
    "pef_idler_heralded": r"$P_{\Omega_i}\eta_s$",
}

MASK_TITLES = {"none": "no filters", "both": "both arms", "signal": "signal only", "idler": "idler only"}


def _axis_label(path):
    return path.strip("/").replace("/", ".")


def plot_slices(grids, path, title=""):
    """One colour map per slice, side by side."""
    fig = Figure(figsize=(3.2 * len(grids), 3.2), layout="constrained")
    axes = fig.subplots(1, len(grids), squeeze=False)[0]
    for ax, grid in zip(axes, grids):
        ax.pcolormesh(grid.axis_s, grid.axis_i, grid.values.T, shading="auto", cmap="viridis", vmin=0, vmax=1)
        ax.set_title(MASK_TITLES.get(grid.mask.value, grid.mask.value), fontsize=9)
        ax.set_xlabel(grid.axis_names[0], fontsize=8)
        ax.set_ylabel(grid.axis_names[1], fontsize=8)
        ax.set_aspect("equal")
        ax.tick_params(labelsize=7)
    if title:
        fig.suptitle(textwrap.fill(title, 60), fontsize=9)
    fig.savefig(path, dpi=120)
    return path


def plot_sweep(rows, spec, path, title=""):
    """Line plot for one axis (a second axis with few values becomes line styles), contours otherwise."""
    values = {k: np.array([r.observables.get(k, np.nan) for r in rows]) for k in spec.observables}
    fig = Figure(figsize=(5.0, 3.6), layout="constrained")
    if len(spec.axes) == 1 or spec.axes[1].count <= 4:
        ax = fig.subplots()
        x = spec.axes[0].values()
        n_inner = spec.axes[1].count if len(spec.axes) == 2 else 1
        styles = ["-", "--", ":", "-."]
        for k in spec.observables:
            grid = values[k].reshape(len(x), n_inner)
            for j in range(n_inner):
                tag = ""
                if n_inner > 1:
                    tag = f" ({_axis_label(spec.axes[1].path)}={spec.axes[1].values()[j]:g})"
                ax.plot(x, grid[:, j], styles[j % 4], label=LABELS.get(k, k) + tag)
        if spec.axes[0].scale == "log":
            ax.set_xscale("log")
        ax.set_xlabel(_axis_label(spec.axes[0].path))
        ax.set_ylim(0, 1.02)
        ax.legend(fontsize=7)
    else:
        n = len(spec.observables)
        axes = fig.subplots(1, n, squeeze=False)[0]
        fig.set_size_inches(3.4 * n, 3.2)
        x, y = spec.axes[0].values(), spec.axes[1].values()
        for ax, k in zip(axes, spec.observables):
            z = values[k].reshape(len(x), len(y)).T
            cs = ax.contourf(x, y, z, levels=np.linspace(0, 1, 11), cmap="viridis")
            ax.set_title(LABELS.get(k, k), fontsize=9)
            ax.set_xlabel(_axis_label(spec.axes[0].path), fontsize=7)
            ax.set_ylabel(_axis_label(spec.axes[1].path), fontsize=7)
        fig.colorbar(cs, ax=list(axes), shrink=0.8)
    if title:
        fig.suptitle(textwrap.fill(title, 60), fontsize=9)
    fig.savefig(path, dpi=120)
    return path
