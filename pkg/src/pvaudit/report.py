"""Audit report assembly.

The report is a plain JSON-ready dict; the console summary is printed from
the same dict so every number a user sees on screen is also in
``report.json`` at full precision.
"""

from __future__ import annotations

from typing import Any

from .dataset import Dataset
from .multiplicity import AdjustmentResult, CombinedTestResult
from .pvplot import PValuePlot

SCHEMA_VERSION = 1


def build_report(
    dataset: Dataset,
    plot: PValuePlot,
    combined: CombinedTestResult,
    adjustment: AdjustmentResult,
    *,
    input_path: str,
    artifacts: dict[str, str],
    alpha: float,
) -> dict[str, Any]:
    tests_by_ref = {e.record_ref: e for e in plot.entries}
    records = []
    for idx, rec in enumerate(dataset.records):
        entry = tests_by_ref[idx]
        records.append(
            {
                "study": rec.study,
                "criterion": rec.criterion,
                "instrument": rec.instrument.value,
                "category": rec.category,
                "r": rec.effect.r,
                "n": rec.effect.n,
                "p": entry.p,
                "sign": entry.sign.value,
                "rank": entry.rank,
            }
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "input": input_path,
        "source": dataset.source,
        "records": records,
        "plot": {
            "k": plot.k,
            "n_negative": plot.n_negative,
            "n_below_alpha": plot.n_below_alpha,
            "alpha": alpha,
            "ks_d": plot.ks_d,
        },
        "combined": {
            "chi_square": combined.chi_square,
            "df": combined.df,
            "p": combined.p,
            "k": combined.k,
            "warning": combined.warning,
        },
        "adjustment": {
            "m": adjustment.m,
            "entries": [
                {"rank": a.rank, "p": a.p, "p_adjusted": a.p_adjusted}
                for a in adjustment.by_rank()
            ],
        },
        "artifacts": artifacts,
    }


def format_summary(report: dict[str, Any]) -> str:
    """Human-readable summary; prints only numbers present in the report."""
    plot = report["plot"]
    combined = report["combined"]
    adjustment = report["adjustment"]
    lines = [
        f"records: {plot['k']}",
        f"negative correlations: {plot['n_negative']}",
        f"p < {plot['alpha']:g}: {plot['n_below_alpha']}",
        f"KS distance from uniform: {plot['ks_d']:.6f}",
        f"combined chi-square: {combined['chi_square']:.6f} on {combined['df']} df, "
        f"p = {combined['p']:.6f}",
        f"  warning: {combined['warning']}",
        f"FDR adjustment (family m = {adjustment['m']}):",
        "  rank  p_unadjusted  p_fdr_adjusted",
    ]
    for a in adjustment["entries"]:
        lines.append(f"  {a['rank']:>4}  {a['p']:>12.6f}  {a['p_adjusted']:>14.6f}")
    for name, path in report["artifacts"].items():
        lines.append(f"wrote {name}: {path}")
    return "\n".join(lines)
