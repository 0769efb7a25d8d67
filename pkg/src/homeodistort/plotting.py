"""Figures written next to the command-line reports.

Only the Agg backend is used, so nothing here needs a display.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from .orbits import orbit_images  # noqa: E402

__all__ = ["plot_ledger", "plot_orbits", "plot_anchors"]


def plot_ledger(ledger: list, path) -> None:
    """Reduced word lengths against the ``14n + 12`` budget."""
    ns = [row["n"] for row in ledger]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(ns, [row["reduced"] for row in ledger], color="tab:blue", label="|W_n| (reduced)")
    ax.plot(ns, [row["bound"] for row in ledger], "k--", marker="o", ms=3, label="14n + 12")
    ax.set_xlabel("n")
    ax.set_ylabel("letters")
    ax.set_xticks(ns)
    ax.legend(loc="upper left", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_orbits(system, path, depth: int = 3, hi=None) -> None:
    """Interval layout: one row per power, ``S``-images above ``T``-images."""
    rows = list(range(-depth, depth + 1))
    fig, ax = plt.subplots(figsize=(8, 0.45 * len(rows) * 2 + 1))
    right = 0.0
    colors = plt.get_cmap("tab10")
    for k, iv in enumerate(system.intervals):
        s_im = orbit_images(system.S, iv, depth)
        t_im = orbit_images(system.T, iv, depth)
        for p in rows:
            for off, ims in ((0.2, s_im), (-0.2, t_im)):
                lo, hi_ = (float(v) for v in ims[p])
                if hi is not None and lo > hi:
                    continue
                right = max(right, hi_)
                w = max(hi_ - lo, 0.02)
                ax.add_patch(Rectangle((lo, p + off - 0.12), w, 0.24, color=colors(k % 10)))
    ax.axvline(1, color="grey", lw=0.6, ls=":")
    ax.axvline(2, color="grey", lw=0.6, ls=":")
    ax.set_xlim(0, (float(hi) if hi is not None else right) + 0.5)
    ax.set_ylim(rows[0] - 0.6, rows[-1] + 0.6)
    ax.set_yticks(rows)
    ax.set_ylabel("power (upper: S, lower: T)")
    ax.set_xlabel("x")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_anchors(anchors, path, count: int | None = None) -> None:
    """The blocks of ``X`` and the cells of ``Y`` on the positive half-line."""
    m = len(anchors.x_minus) if count is None else min(count, len(anchors.x_minus))
    fig, ax = plt.subplots(figsize=(8, 1.8))
    for i in range(m):
        a, b = float(anchors.x_minus[i]), float(anchors.x_plus[i])
        ax.add_patch(Rectangle((a, 0.55), b - a, 0.3, color="tab:orange"))
        if i and anchors.z[i] is not None:
            ax.plot([float(anchors.z[i])] * 2, [0.1, 0.9], color="k", lw=0.8)
    ax.set_xlim(0, float(anchors.x_plus[m - 1]) + 1)
    ax.set_ylim(0, 1)
    ax.set_yticks([])
    ax.set_xlabel("x  (orange: blocks of X, black: z_n)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
