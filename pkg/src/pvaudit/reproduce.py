"""Regenerate the bundled reference tables and figures, diffing each cell.

Tolerance policy, pinned up front:

- Pipeline p-values recomputed from printed (r, n) match the printed
  6-decimal values within 2e-5 absolute; the slack absorbs the 3-4
  significant digits the source tables keep for r.
- FDR-adjusted values whose step-up minimum falls inside the printed subset
  are reproduced to the printed precision (5e-7) when full-precision
  unadjusted values are available (table3/table4), and to the input-rounding
  propagation bound (m / rank * 5e-7) when only the printed 6-decimal
  unadjusted column exists (table1).
- Adjusted values whose minimum needs the unpublished family tail
  (``fixtures.TAIL_DEPENDENT_RANKS``) can only be checked for consistency:
  a subset minimum is never below the full-family value.
- One-sample -log10(p) values match within 0.01 using the printed standard
  error column.
- Whole-figure checks (counts, combined chi-square) need the user-supplied
  full dataset: chi-square within 0.5, exact-p figures within 0.005, and
  "< bound" figures strictly below their bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import fixtures
from .corrstats import correlation_p, one_sample_neglog10
from .dataset import Dataset, parse_correlation_csv
from .errors import FixtureUnavailableError, UsageError, ValidationError
from .multiplicity import bh_adjust, fisher_combine
from .pvplot import PlotStyle, build_plot, plot_from_pvalues, render_svg, render_table

UNADJUSTED_TOL = 2e-5
ADJUSTED_PRINT_TOL = 5e-7
NEG_LOG10_TOL = 0.01
CHI_SQUARE_TOL = 0.5
COMBINED_P_TOL = 0.005
# full mode: user transcriptions of the supplemental data may round r more
# aggressively than the bundled tables; adjusted values amplify by m/rank
FULL_MODE_ADJUSTED_TOL = 5e-4

TARGETS = fixtures.TABLE_IDS + fixtures.FIGURE_IDS


@dataclass
class ReproductionResult:
    target: str
    lines: list[str] = field(default_factory=list)
    matched: int = 0
    checked: int = 0
    skipped: list[str] = field(default_factory=list)
    artifacts: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.matched == self.checked

    def check(self, label: str, computed: float, printed: float, tol: float) -> None:
        self.checked += 1
        diff = computed - printed
        good = abs(diff) <= tol
        self.matched += good
        verdict = "ok" if good else "MISMATCH"
        self.lines.append(
            f"{label}: computed {computed:.6f} printed {printed:.6f} "
            f"diff {diff:+.2e} (tol {tol:.0e}) {verdict}"
        )

    def check_count(self, label: str, computed: int, printed: int) -> None:
        self.checked += 1
        good = computed == printed
        self.matched += good
        self.lines.append(
            f"{label}: computed {computed} printed {printed} "
            f"{'ok' if good else 'MISMATCH'}"
        )

    def check_below(self, label: str, computed: float, bound: float) -> None:
        self.checked += 1
        good = computed < bound
        self.matched += good
        self.lines.append(
            f"{label}: computed {computed:.3e} printed < {bound:g} "
            f"{'ok' if good else 'MISMATCH'}"
        )

    def check_consistent(self, label: str, computed: float, printed: float) -> None:
        # subset step-up minimum must sit at or above the printed full-family
        # value; equality is not expected without the unpublished tail
        self.checked += 1
        good = computed >= printed - ADJUSTED_PRINT_TOL
        self.matched += good
        self.lines.append(
            f"{label}: computed {computed:.6f} >= printed {printed:.6f} "
            f"(needs unpublished family tail for equality) "
            f"{'ok' if good else 'MISMATCH'}"
        )


def reproduce(target: str, data_path: str | None = None, out_dir: str | Path = ".") -> ReproductionResult:
    """Regenerate ``target`` (table1..table5, fig1..fig4) and diff every cell.

    Figures, and full-mode table checks, need ``data_path`` pointing at the
    corresponding user-supplied ``correlations.csv``.
    """
    if target not in TARGETS:
        raise UsageError(f"unknown reproduction target {target!r}; expected one of {', '.join(TARGETS)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if target == "table5":
        return _reproduce_table5(out)
    if target in fixtures.TABLE_IDS:
        return _reproduce_fdr_table(target, data_path, out)
    return _reproduce_figure(target, data_path, out)


def _load_user_dataset(data_path: str, expectation: fixtures.FigureExpectation):
    with open(data_path, "r", encoding="utf-8") as handle:
        dataset = parse_correlation_csv(handle, source=data_path)
    wanted = [
        rec
        for rec in dataset.records
        if rec.instrument is expectation.instrument and rec.category == expectation.category
    ]
    # a file holding just the figure's records is fine too
    if len(wanted) == 0:
        wanted = list(dataset.records)
    return Dataset(records=tuple(wanted), source=dataset.source)


def _reproduce_fdr_table(target: str, data_path: str | None, out: Path) -> ReproductionResult:
    result = ReproductionResult(target=target)
    rows = fixtures.load_fdr_table(target)
    m = fixtures.FDR_FAMILY_SIZES[target]
    tail_ranks = set(fixtures.TAIL_DEPENDENT_RANKS[target])

    if data_path is not None:
        return _reproduce_fdr_table_full(target, data_path, out, result, rows, m)

    have_effects = all(row.effect is not None for row in rows)
    if have_effects:
        # full-precision unadjusted values from the printed (r, n) pairs
        unadjusted = [correlation_p(row.effect).p_two_sided for row in rows]
        for row, p in zip(rows, unadjusted):
            result.check(f"rank {row.rank} unadjusted", p, row.p_unadjusted, UNADJUSTED_TOL)
        adjusted_tol = lambda rank: ADJUSTED_PRINT_TOL
    else:
        # only the printed 6-decimal column exists; rounding propagates
        # through the step-up minimum scaled by m/rank
        result.lines.append(
            f"partial mode: verifying the printed pairs with family m = {m}"
        )
        unadjusted = [row.p_unadjusted for row in rows]
        adjusted_tol = lambda rank: (m / rank) * ADJUSTED_PRINT_TOL

    adjustment = bh_adjust(unadjusted, m=m)
    for row, entry in zip(rows, adjustment.by_rank()):
        if row.rank in tail_ranks:
            result.check_consistent(
                f"rank {row.rank} adjusted", entry.p_adjusted, row.p_fdr_adjusted
            )
        else:
            result.check(
                f"rank {row.rank} adjusted",
                entry.p_adjusted,
                row.p_fdr_adjusted,
                adjusted_tol(row.rank),
            )

    if have_effects:
        dataset = fixtures.table_dataset(target)
        plot = build_plot(dataset)
        table_text = render_table(plot, adjustment)
        svg_text = render_svg(plot, PlotStyle(title=f"{target} fixture"))
        result.artifacts[f"{target}.csv"] = _write(out / f"{target}.csv", table_text)
        result.artifacts[f"{target}.svg"] = _write(out / f"{target}.svg", svg_text)
    else:
        labels = [row.criterion or "" for row in rows]
        plot = plot_from_pvalues(unadjusted, labels=labels)
        table_text = render_table(plot, adjustment)
        result.artifacts[f"{target}.csv"] = _write(out / f"{target}.csv", table_text)
    return result


def _reproduce_fdr_table_full(
    target: str,
    data_path: str,
    out: Path,
    result: ReproductionResult,
    rows,
    m: int,
) -> ReproductionResult:
    figure = next(f for f in fixtures.FIGURES.values() if f.fdr_table == target)
    dataset = _load_user_dataset(data_path, figure)
    if len(dataset) != m:
        raise ValidationError(
            f"{target} expects the full family of {m} records, got {len(dataset)} "
            f"matching records in {data_path}"
        )
    plot = build_plot(dataset)
    adjustment = bh_adjust([e.p for e in plot.entries], m=m)
    ranked = adjustment.by_rank()
    for row in rows:
        entry = plot.entries[row.rank - 1]
        result.check(f"rank {row.rank} unadjusted", entry.p, row.p_unadjusted, UNADJUSTED_TOL)
        result.check(
            f"rank {row.rank} adjusted",
            ranked[row.rank - 1].p_adjusted,
            row.p_fdr_adjusted,
            FULL_MODE_ADJUSTED_TOL,
        )
    top = bh_adjust([e.p for e in plot.entries[: len(rows)]], m=m)
    result.artifacts[f"{target}.csv"] = _write(
        out / f"{target}.csv", render_table(plot, top)
    )
    return result


def _reproduce_table5(out: Path) -> ReproductionResult:
    result = ReproductionResult(target="table5")
    rows = fixtures.load_one_sample_table()
    report_lines = ["study,year,computed_neg_log10_p,printed_neg_log10_p"]
    for row in rows:
        rec = row.record
        label = f"{rec.study} {rec.year}"
        if rec.summary is None or row.neg_log10_p is None:
            result.skipped.append(f"{label}: no summary")
            report_lines.append(f"{rec.study},{rec.year},,")
            continue
        computed = one_sample_neglog10(rec.summary).neg_log10_p
        result.check(label, computed, row.neg_log10_p, NEG_LOG10_TOL)
        report_lines.append(f"{rec.study},{rec.year},{computed!r},{row.neg_log10_p!r}")
    result.artifacts["table5.csv"] = _write(out / "table5.csv", "\n".join(report_lines) + "\n")
    return result


def _reproduce_figure(target: str, data_path: str | None, out: Path) -> ReproductionResult:
    expectation = fixtures.FIGURES[target]
    if data_path is None:
        raise FixtureUnavailableError(
            f"fixture incomplete: {target} needs the full {expectation.k}-record dataset "
            f"({expectation.instrument.value} x {expectation.category}), which is not "
            f"published as a table; supply it with --data correlations.csv"
        )
    result = ReproductionResult(target=target)
    dataset = _load_user_dataset(data_path, expectation)
    plot = build_plot(dataset)
    result.check_count(f"{target} k", plot.k, expectation.k)
    result.check_count(f"{target} negative correlations", plot.n_negative, expectation.n_negative)
    if expectation.n_below_alpha is not None:
        result.check_count(
            f"{target} p-values below 0.05", plot.n_below_alpha, expectation.n_below_alpha
        )
    combined = fisher_combine([e.p for e in plot.entries])
    result.check(f"{target} chi-square", combined.chi_square, expectation.chi_square, CHI_SQUARE_TOL)
    result.check_count(f"{target} df", combined.df, expectation.df)
    if expectation.p is not None:
        result.check(f"{target} combined p", combined.p, expectation.p, COMBINED_P_TOL)
    else:
        result.check_below(f"{target} combined p", combined.p, expectation.p_upper_bound)

    adjustment = bh_adjust([e.p for e in plot.entries[: expectation.top]], m=expectation.k)
    result.artifacts[f"{target}.svg"] = _write(
        out / f"{target}.svg", render_svg(plot, PlotStyle(title=target))
    )
    from .figures import render_figure

    png = out / f"{target}.png"
    render_figure(plot, str(png), title=target)
    result.artifacts[f"{target}.png"] = str(png)
    result.artifacts[f"{target}.csv"] = _write(
        out / f"{target}.csv", render_table(plot, adjustment)
    )
    return result


def _write(path: Path, text: str) -> str:
    path.write_text(text, encoding="utf-8")
    return str(path)
