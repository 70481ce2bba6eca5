"""Figure rendering for the three plot kinds.

Inputs are never mutated and the drawn data series are a deterministic
function of the CSV contents, so re-rendering the same files reproduces
the same series (pixel-level identity is not promised across matplotlib
versions).
"""

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvdata import SchemaError, field_grid, field_parameters, read_table


def render(spec):
    """Render one figure per the spec; returns the matplotlib figure.

    The output file is written only after the figure builds, so a schema
    error never leaves a partial image behind.
    """
    if spec.kind == "trajectories":
        fig = _render_trajectories(spec)
    else:
        fig = _render_curves(spec)
    out_dir = os.path.dirname(os.path.abspath(spec.output))
    os.makedirs(out_dir, exist_ok=True)
    fig.savefig(spec.output, dpi=150, bbox_inches="tight")
    return fig


def _render_curves(spec):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for path, label in zip(spec.inputs, spec.labels):
        table = read_table(path)
        ks = table.column("k")
        values = table.column(spec.column)
        ax.plot(ks, values, label=label, linewidth=1.4)
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel("iteration")
    ax.set_ylabel(spec.column)
    ax.set_title(spec.title or spec.kind.replace("_", " "))
    ax.legend()
    ax.grid(True, alpha=0.3)
    return fig


def _render_trajectories(spec):
    table = read_table(spec.inputs[0])
    amplitudes, centers, widths, positions = field_parameters(table.meta)
    agents = table.column("agent")
    xs = table.column("x1")
    ys = table.column("x2")

    pts_x = np.concatenate([xs, [c[0] for c in centers], [p[0] for p in positions] or [np.nan]])
    pts_y = np.concatenate([ys, [c[1] for c in centers], [p[1] for p in positions] or [np.nan]])
    pad = 1.0
    xlim = (np.nanmin(pts_x) - pad, np.nanmax(pts_x) + pad)
    ylim = (np.nanmin(pts_y) - pad, np.nanmax(pts_y) + pad)

    fig, ax = plt.subplots(figsize=(6.0, 5.4))
    gx, gy, gz = field_grid(amplitudes, centers, widths, xlim, ylim)
    contours = ax.contourf(gx, gy, gz, levels=18, cmap="viridis", alpha=0.75)
    fig.colorbar(contours, ax=ax, label="concentration")

    for agent in sorted(set(int(a) for a in agents)):
        mask = agents == agent
        ax.plot(xs[mask], ys[mask], linewidth=1.4, label=f"agent {agent}")
        ax.plot(xs[mask][-1], ys[mask][-1], marker="o", markersize=4,
                color=ax.lines[-1].get_color(), label="_end")

    cx, cy = zip(*centers)
    ax.scatter(cx, cy, marker="*", s=140, color="white", edgecolor="black",
               zorder=5, label="peaks")
    if positions:
        px, py = zip(*positions)
        ax.scatter(px, py, marker="^", s=45, color="black", zorder=5, label="sensors")

    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_title(spec.title or "source-estimate trajectories")
    ax.legend(loc="upper left", fontsize=8)
    return fig


def agent_series_count(fig):
    """Number of per-agent path series in a trajectories figure."""
    ax = fig.axes[0]
    return sum(1 for line in ax.lines if str(line.get_label()).startswith("agent "))


def peak_marker_count(fig):
    """Number of peak markers in a trajectories figure."""
    ax = fig.axes[0]
    for coll in ax.collections:
        if coll.get_label() == "peaks":
            return len(coll.get_offsets())
    return 0
