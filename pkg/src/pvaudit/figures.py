"""Matplotlib rendering of p-value plots for report output.

The deterministic, diffable SVG lives in ``pvaudit.pvplot``; this module
produces the human-facing figures written next to the delimited tables by
the command-line report path.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .corrstats import Sign
from .pvplot import PValuePlot

__all__ = ["render_figure"]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_FIG_WIDTH = 6.4

_PARAMS = {
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.titlesize": 12,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "legend.fontsize": 9,
    "figure.figsize": (_FIG_WIDTH, _FIG_WIDTH * _GOLDEN),
}


def render_figure(plot: PValuePlot, path: str, title: str = "") -> None:
    """Write a rank-vs-p scatter with the 45-degree reference line.

    Positive (and neutral) entries are filled circles, negative entries
    downward triangles; the dashed line is the uniform-null reference
    p_(i) = i/k.
    """
    with plt.rc_context(_PARAMS):
        fig, ax = plt.subplots()
        pos = [(e.rank, e.p) for e in plot.entries if e.sign is not Sign.NEGATIVE]
        neg = [(e.rank, e.p) for e in plot.entries if e.sign is Sign.NEGATIVE]
        if pos:
            ax.scatter(*zip(*pos), marker="o", s=18, color="black",
                       label="positive correlation")
        if neg:
            ax.scatter(*zip(*neg), marker="v", s=22, facecolors="white",
                       edgecolors="black", label="negative correlation")
        k = plot.k
        ax.plot([1, k], [1.0 / k, 1.0], linestyle="--", linewidth=1,
                color="gray", label="uniform reference")
        ax.set_xlim(0, k + 1)
        ax.set_ylim(0.0, 1.05)
        ax.set_xlabel("p-value rank")
        ax.set_ylabel("p-value")
        if title:
            ax.set_title(title)
        if neg:
            ax.legend(loc="upper left", frameon=False)
        fig.tight_layout()
        fig.savefig(path, dpi=150)
        plt.close(fig)
