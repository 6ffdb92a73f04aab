"""Static SVG figures (price paths and zone maps)."""
from __future__ import annotations

import io

import numpy as np

from .phase import ZONE_BY_CODE, PhaseGrid, Zone
from .simulation import Trajectory

ZONE_COLORS = {
    Zone.aA: "#d9f0d3",
    Zone.aB: "#f4a6a6",
    Zone.aC: "#b8e186",
    Zone.aD: "#9ecae1",
    Zone.aE: "#4292c6",
    Zone.aF: "#fdd49e",
    Zone.aG: "#fff7bc",
}


def _figure(width: float = 6.0, height: float = 4.5):
    from matplotlib.figure import Figure

    return Figure(figsize=(width, height))


def _svg(fig) -> str:
    import matplotlib

    buf = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": "pinfilab", "svg.fonttype": "none"}):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def trajectory_svg(traj: Trajectory, reference: np.ndarray | None = None) -> str:
    """Normalized price path; ``reference`` is an optional closed-form overlay."""
    fig = _figure()
    ax = fig.add_subplot()
    ax.plot(traj.time, traj.x, color="#08519c", lw=1.5, label="simulated")
    if reference is not None:
        ax.plot(traj.time, reference, color="#cb181d", lw=1.0, ls="--", label="closed form")
    ax.set_xlabel("time [h]")
    ax.set_ylabel("normalized price x")
    ax.set_title(f"terminal: {traj.terminal.value}")
    ax.legend(loc="best")
    fig.tight_layout()
    return _svg(fig)


def phase_svg(grid: PhaseGrid) -> str:
    from matplotlib.colors import ListedColormap
    from matplotlib.patches import Patch

    fig = _figure(7.0, 5.0)
    ax = fig.add_subplot()
    order = sorted(ZONE_BY_CODE)
    cmap = ListedColormap([ZONE_COLORS[ZONE_BY_CODE[c]] for c in order])
    extent = (grid.xs[0], grid.xs[-1], grid.gs[0], grid.gs[-1])
    ax.imshow(grid.codes.T, origin="lower", aspect="auto", extent=extent,
              cmap=cmap, vmin=-0.5, vmax=len(order) - 0.5, interpolation="nearest")
    ax.plot(grid.xs, grid.g_ss, color="#2171b5", lw=1.5, label="seller/LP equilibrium")
    ax.plot(grid.xs, grid.g_sb, color="#cb181d", lw=1.5, label="buyer/LP equilibrium")
    if grid.segment is not None:
        (x0, g0), (x1, g1) = grid.segment
        ax.plot([x0, x1], [g0, g1], "ko", ms=4)
    present = [z for z, n in grid.counts().items() if n]
    handles = [Patch(color=ZONE_COLORS[z], label=z.value) for z in present]
    ax.legend(handles=handles + ax.get_lines()[:2], loc="upper left", fontsize=7)
    ax.set_xlim(extent[0], extent[1])
    ax.set_ylim(extent[2], extent[3])
    ax.set_xlabel("normalized price  alpha / (beta + p theta)")
    ax.set_ylabel("normalized reward  gamma / (beta + p theta)")
    fig.tight_layout()
    return _svg(fig)
