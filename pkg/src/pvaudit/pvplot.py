"""Rank-ordered p-value plots with uniformity diagnostics.

The central object is a sequence of p-values sorted ascending and plotted
against their integer ranks.  Under a global null the points hug the
45-degree reference line p_(i) = i/k; the plot records the machine-checkable
proxies for that judgement (negative-correlation count, count below alpha,
and the exact Kolmogorov-Smirnov distance from Uniform(0,1)) and leaves the
interpretation to the caller.

Rendering is deliberately dual: ``render_svg`` emits a hand-built SVG 1.1
document that is byte-identical for identical inputs (diffable, goldenable),
and ``render_table`` emits the delimited table form.  Prettier raster/vector
output for reports lives in ``pvaudit.figures``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

from .corrstats import Sign, correlation_p
from .dataset import Dataset
from .errors import DomainError, UsageError

__all__ = [
    "PValueEntry",
    "PValuePlot",
    "PlotStyle",
    "ks_distance",
    "build_plot",
    "plot_from_pvalues",
    "render_svg",
    "render_table",
]


@dataclass(frozen=True)
class PValueEntry:
    """One plotted point; ``record_ref`` indexes the source dataset's records
    (or the caller's input order when the plot was built from bare p-values)."""

    p: float
    rank: int
    sign: Sign
    record_ref: int


@dataclass(frozen=True)
class PValuePlot:
    """Rank-ordered p-values plus uniformity diagnostics.

    The reference line is p_(i) = i/k, drawn from (1, 1/k) to (k, 1).
    Entries built from bare p-values (no dataset) carry ``Sign.ZERO`` as a
    neutral direction placeholder.
    """

    entries: tuple[PValueEntry, ...]
    k: int
    n_negative: int
    n_below_alpha: int
    alpha: float
    ks_d: float
    source: Dataset | None = None
    labels: tuple[str, ...] | None = None


def ks_distance(sorted_ps: Sequence[float]) -> float:
    """Exact Kolmogorov-Smirnov distance between a sample and Uniform(0,1).

    D = max_i max(|i/k - p_(i)|, |(i-1)/k - p_(i)|) over the ascending
    values; both one body of the step and the jump foot are checked.
    """
    k = len(sorted_ps)
    if k == 0:
        raise UsageError("KS distance needs at least one value")
    d = 0.0
    for i, p in enumerate(sorted_ps, start=1):
        d = max(d, abs(i / k - p), abs((i - 1) / k - p))
    return d


def _assemble(
    ps: Sequence[float],
    signs: Sequence[Sign],
    alpha: float,
    source: Dataset | None,
    labels: tuple[str, ...] | None,
) -> PValuePlot:
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    k = len(ps)
    order = sorted(range(k), key=ps.__getitem__)  # stable: ties keep input order
    entries = tuple(
        PValueEntry(p=ps[idx], rank=rank0 + 1, sign=signs[idx], record_ref=idx)
        for rank0, idx in enumerate(order)
    )
    sorted_ps = [e.p for e in entries]
    return PValuePlot(
        entries=entries,
        k=k,
        n_negative=sum(1 for s in signs if s is Sign.NEGATIVE),
        n_below_alpha=sum(1 for p in ps if p < alpha),
        alpha=alpha,
        ks_d=ks_distance(sorted_ps),
        source=source,
        labels=labels,
    )


def build_plot(dataset: Dataset, alpha: float = 0.05) -> PValuePlot:
    """Run the correlation test on every record and assemble the plot."""
    if len(dataset) == 0:
        raise UsageError("cannot build a p-value plot from an empty dataset")
    tests = [correlation_p(rec.effect) for rec in dataset.records]
    return _assemble(
        ps=[t.p_two_sided for t in tests],
        signs=[t.sign for t in tests],
        alpha=alpha,
        source=dataset,
        labels=None,
    )


def plot_from_pvalues(
    ps: Sequence[float],
    signs: Sequence[Sign] | None = None,
    alpha: float = 0.05,
    labels: Sequence[str] | None = None,
) -> PValuePlot:
    """Assemble a plot directly from p-values (e.g. transcribed tables)."""
    if len(ps) == 0:
        raise UsageError("cannot build a p-value plot from zero p-values")
    checked = []
    for i, p in enumerate(ps):
        p = float(p)
        if not (math.isfinite(p) and 0.0 < p <= 1.0):
            raise DomainError(f"p-values must lie in (0, 1]; entry {i} is {p!r}")
        checked.append(p)
    if signs is None:
        signs = [Sign.ZERO] * len(checked)
    if len(signs) != len(checked):
        raise UsageError(f"{len(signs)} signs supplied for {len(checked)} p-values")
    if labels is not None and len(labels) != len(checked):
        raise UsageError(f"{len(labels)} labels supplied for {len(checked)} p-values")
    return _assemble(checked, list(signs), alpha, None,
                     tuple(labels) if labels is not None else None)


@dataclass(frozen=True)
class PlotStyle:
    """Styling knobs for the deterministic SVG renderer."""

    width: int = 640
    height: int = 480
    margin_left: int = 56
    margin_right: int = 16
    margin_top: int = 40
    margin_bottom: int = 44
    marker_radius: float = 3.5
    title: str = ""
    x_label: str = "p-value rank"
    y_label: str = "p-value"
    show_reference: bool = True


def _x_ticks(k: int) -> list[int]:
    if k <= 6:
        return list(range(1, k + 1))
    step = 1
    for candidate in (1, 2, 5, 10, 20, 25, 50, 100, 200, 500, 1000):
        step = candidate
        if k / candidate <= 6:
            break
    return list(range(step, k + 1, step))


def render_svg(plot: PValuePlot, style: PlotStyle = PlotStyle()) -> str:
    """Render the plot as a deterministic SVG 1.1 document.

    Positive (and neutral) entries are filled circles, negative entries are
    downward triangles (the only <polygon> elements in the output), and the
    dashed reference line runs from (1, 1/k) to (k, 1).  Identical plot and
    style always produce byte-identical text.
    """
    s = style
    area_w = s.width - s.margin_left - s.margin_right
    area_h = s.height - s.margin_top - s.margin_bottom
    if area_w <= 0 or area_h <= 0:
        raise UsageError("plot area is empty; enlarge width/height or shrink margins")
    k = plot.k

    def px(rank: float) -> float:
        return s.margin_left + area_w * rank / (k + 1)

    def py(p: float) -> float:
        return s.margin_top + area_h * (1.0 - p)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s.width}" height="{s.height}" '
        f'viewBox="0 0 {s.width} {s.height}">',
        f'<rect x="0" y="0" width="{s.width}" height="{s.height}" fill="#ffffff"/>',
    ]
    if s.title:
        lines.append(
            f'<text x="{s.width / 2:.2f}" y="{s.margin_top / 2 + 5:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{_escape(s.title)}</text>'
        )
    # axes
    x0, y0 = s.margin_left, s.margin_top + area_h
    x1, y1 = s.margin_left + area_w, s.margin_top
    lines.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="#000000" stroke-width="1"/>')
    lines.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="#000000" stroke-width="1"/>')
    for tick in _x_ticks(k):
        tx = px(tick)
        lines.append(f'<line x1="{tx:.2f}" y1="{y0}" x2="{tx:.2f}" y2="{y0 + 5}" stroke="#000000" stroke-width="1"/>')
        lines.append(
            f'<text x="{tx:.2f}" y="{y0 + 18}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{tick}</text>'
        )
    for i in range(6):
        yv = i / 5.0
        ty = py(yv)
        lines.append(f'<line x1="{x0 - 5}" y1="{ty:.2f}" x2="{x0}" y2="{ty:.2f}" stroke="#000000" stroke-width="1"/>')
        lines.append(
            f'<text x="{x0 - 8}" y="{ty + 4:.2f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{yv:.1f}</text>'
        )
    lines.append(
        f'<text x="{s.margin_left + area_w / 2:.2f}" y="{s.height - 8}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{_escape(s.x_label)}</text>'
    )
    lines.append(
        f'<text x="14" y="{s.margin_top + area_h / 2:.2f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12" transform="rotate(-90 14 {s.margin_top + area_h / 2:.2f})">{_escape(s.y_label)}</text>'
    )
    if s.show_reference:
        lines.append(
            f'<line x1="{px(1):.2f}" y1="{py(1.0 / k):.2f}" x2="{px(k):.2f}" y2="{py(1.0):.2f}" '
            f'stroke="#666666" stroke-width="1" stroke-dasharray="5 4"/>'
        )
    r = s.marker_radius
    for entry in plot.entries:
        cx, cy = px(entry.rank), py(entry.p)
        if entry.sign is Sign.NEGATIVE:
            pts = f"{cx - r:.2f},{cy - r:.2f} {cx + r:.2f},{cy - r:.2f} {cx:.2f},{cy + r:.2f}"
            lines.append(f'<polygon class="neg" points="{pts}" fill="#000000"/>')
        else:
            lines.append(f'<circle class="pos" cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" fill="#000000"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_table(plot: PValuePlot, adj, delimiter: str = ",") -> str:
    """Render the plot's entries as a delimited table.

    Columns: rank, criterion, r, n, p_unadjusted, p_fdr_adjusted, with the
    p columns in 6-decimal fixed format.  ``adj`` must cover the plot's
    smallest entries (its unadjusted values must equal theirs); ranks past
    the adjustment carry an empty adjusted cell.
    """
    if delimiter not in (",", "\t"):
        raise UsageError(r"delimiter must be ',' or '\t'")
    ranked = adj.by_rank()
    if len(ranked) > plot.k:
        raise UsageError(
            f"adjustment covers {len(ranked)} values but the plot has only {plot.k}"
        )
    for a, entry in zip(ranked, plot.entries):
        if a.p != entry.p:
            raise UsageError(
                "adjustment does not match the plot: expected the plot's "
                f"rank-{entry.rank} p {entry.p!r}, adjustment has {a.p!r}"
            )
    adjusted_by_rank = {i + 1: a.p_adjusted for i, a in enumerate(ranked)}

    out = io.StringIO()
    writer = csv.writer(out, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["rank", "criterion", "r", "n", "p_unadjusted", "p_fdr_adjusted"])
    for i, entry in enumerate(plot.entries):
        criterion = ""
        r_text = ""
        n_text = ""
        if plot.labels is not None:
            criterion = plot.labels[entry.record_ref]
        elif plot.source is not None:
            criterion = plot.source.records[entry.record_ref].criterion
        if plot.source is not None:
            effect = plot.source.records[entry.record_ref].effect
            r_text = repr(effect.r)
            n_text = str(effect.n)
        adjusted = adjusted_by_rank.get(i + 1)
        writer.writerow(
            [
                entry.rank,
                criterion,
                r_text,
                n_text,
                f"{entry.p:.6f}",
                f"{adjusted:.6f}" if adjusted is not None else "",
            ]
        )
    return out.getvalue()
