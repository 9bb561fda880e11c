"""Command-line interface.

Subcommands: audit, tail, simulate, reproduce, adjust, combine.  Exit codes
are stable: 0 success, 1 validation failure (the message names the row),
2 usage error, 3 reproduction target needs data that is not bundled.
Output directory resolution: --out flag, else $PVAUDIT_OUT, else
./pvaudit_out.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .corrstats import (
    EffectSize,
    OneSampleSummary,
    correlation_neglog10,
    correlation_p,
    one_sample_neglog10,
    one_sided_p,
)
from .dataset import parse_correlation_csv, serialize_correlation_csv
from .errors import (
    DomainError,
    FixtureUnavailableError,
    PvauditError,
    UsageError,
    ValidationError,
)
from .multiplicity import bh_adjust, fisher_combine
from .numerics import chisq_sf
from .pvplot import PlotStyle, build_plot, render_svg, render_table
from .report import build_report, format_summary
from .reproduce import TARGETS, reproduce
from .simulate import SimSpec, generate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_FIXTURE_INCOMPLETE = 3

_DELIMITERS = {"comma": ",", "tab": "\t"}


def _out_dir(flag_value: str | None) -> Path:
    return Path(flag_value or os.environ.get("PVAUDIT_OUT") or "pvaudit_out")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pvaudit",
        description="Audit the statistical reproducibility of correlation meta-analyses "
        "with rank-ordered p-value plots, combined tests and FDR adjustment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_audit = sub.add_parser("audit", help="run the full audit pipeline on a correlations.csv")
    p_audit.add_argument("input", help="path to a correlations.csv file")
    p_audit.add_argument("--alpha", type=float, default=0.05, help="small-p threshold (default 0.05)")
    p_audit.add_argument("--family", type=int, default=None,
                         help="FDR family size m (default: number of records)")
    p_audit.add_argument("--top", type=int, default=10,
                         help="how many smallest p-values to adjust (default 10)")
    p_audit.add_argument("--delimiter", choices=sorted(_DELIMITERS), default="comma",
                         help="delimiter for pvalues.csv")
    p_audit.add_argument("--title", default="", help="title for the plot artifacts")
    p_audit.add_argument("--out", default=None, help="output directory")
    p_audit.set_defaults(func=_cmd_audit)

    p_tail = sub.add_parser("tail", help="print one tail probability")
    p_tail.add_argument("--r", type=float, help="correlation (pair with --n)")
    p_tail.add_argument("--n", type=int, help="sample size (pair with --r)")
    p_tail.add_argument("--mean", type=float, help="group mean (pair with --se)")
    p_tail.add_argument("--se", type=float, help="standard error (pair with --mean)")
    p_tail.add_argument("--x", type=float, help="chi-square statistic (pair with --df)")
    p_tail.add_argument("--df", type=int, help="degrees of freedom (pair with --x)")
    p_tail.add_argument("--log10", action="store_true",
                        help="print -log10(p) via the log-domain path")
    p_tail.add_argument("--one-sided", action="store_true",
                        help="upper-tail p for the --r/--n pair (default is two-sided)")
    p_tail.set_defaults(func=_cmd_tail)

    p_sim = sub.add_parser("simulate", help="generate a synthetic correlations.csv")
    p_sim.add_argument("--k", type=int, required=True, help="number of studies")
    p_sim.add_argument("--n", required=True,
                       help="sample sizes: one integer, a comma list (cycled), or lo:hi (sampled)")
    p_sim.add_argument("--rho", type=float, required=True, help="true correlation in (-1, 1)")
    p_sim.add_argument("--cluster-size", type=int, default=1,
                       help="studies per cluster sharing a latent draw (default 1)")
    p_sim.add_argument("--seed", type=int, required=True, help="unsigned 64-bit seed")
    p_sim.add_argument("--out", default=None,
                       help="output CSV path (default <outdir>/simulated.csv)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_rep = sub.add_parser("reproduce", help="regenerate a bundled table or figure and diff it")
    p_rep.add_argument("target", help=f"one of: {', '.join(TARGETS)}")
    p_rep.add_argument("--data", default=None,
                       help="user-supplied correlations.csv (required for fig1..fig4)")
    p_rep.add_argument("--out", default=None, help="output directory")
    p_rep.set_defaults(func=_cmd_reproduce)

    p_adj = sub.add_parser("adjust", help="step-up FDR adjustment of p-values")
    p_adj.add_argument("p", nargs="*", type=float, help="p-values")
    p_adj.add_argument("--input", default=None, help="CSV file to read p-values from")
    p_adj.add_argument("--column", default="p", help="CSV column holding p-values (default 'p')")
    p_adj.add_argument("--family", type=int, default=None,
                       help="family size m (default: number of values)")
    p_adj.set_defaults(func=_cmd_adjust)

    p_comb = sub.add_parser("combine", help="pool p-values into one chi-square test")
    p_comb.add_argument("p", nargs="*", type=float, help="p-values")
    p_comb.add_argument("--input", default=None, help="CSV file to read p-values from")
    p_comb.add_argument("--column", default="p", help="CSV column holding p-values (default 'p')")
    p_comb.set_defaults(func=_cmd_combine)

    return parser


def _cmd_audit(args: argparse.Namespace) -> int:
    with open(args.input, "r", encoding="utf-8") as handle:
        dataset = parse_correlation_csv(handle, source=args.input)
    plot = build_plot(dataset, alpha=args.alpha)
    sorted_ps = [e.p for e in plot.entries]
    combined = fisher_combine(sorted_ps)
    top = min(args.top, plot.k)
    if top < 1:
        raise UsageError(f"--top must be >= 1, got {args.top}")
    family = args.family if args.family is not None else plot.k
    adjustment = bh_adjust(sorted_ps[:top], m=family)

    out = _out_dir(args.out)
    out.mkdir(parents=True, exist_ok=True)
    delimiter = _DELIMITERS[args.delimiter]
    pvalues_path = out / "pvalues.csv"
    pvalues_path.write_text(render_table(plot, adjustment, delimiter=delimiter), encoding="utf-8")
    svg_path = out / "plot.svg"
    svg_path.write_text(render_svg(plot, PlotStyle(title=args.title)), encoding="utf-8")
    from .figures import render_figure  # lazy: matplotlib is slow to import

    png_path = out / "plot.png"
    render_figure(plot, str(png_path), title=args.title)
    report_path = out / "report.json"
    report = build_report(
        dataset,
        plot,
        combined,
        adjustment,
        input_path=args.input,
        alpha=args.alpha,
        artifacts={
            "pvalues.csv": str(pvalues_path),
            "plot.svg": str(svg_path),
            "plot.png": str(png_path),
            "report.json": str(report_path),
        },
    )
    report_path.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    print(format_summary(report))
    return EXIT_OK


def _cmd_tail(args: argparse.Namespace) -> int:
    pairs = {
        "r/n": args.r is not None or args.n is not None,
        "mean/se": args.mean is not None or args.se is not None,
        "x/df": args.x is not None or args.df is not None,
    }
    chosen = [name for name, present in pairs.items() if present]
    if len(chosen) != 1:
        raise UsageError(
            "supply exactly one argument pair: --r with --n, --mean with --se, or --x with --df"
        )
    pair = chosen[0]
    if pair == "r/n":
        if args.r is None or args.n is None:
            raise UsageError("--r and --n must be supplied together")
        effect = EffectSize(r=args.r, n=args.n)
        if args.log10:
            if args.one_sided:
                raise UsageError("--one-sided and --log10 cannot be combined")
            value = correlation_neglog10(effect).neg_log10_p
        elif args.one_sided:
            value = one_sided_p(effect)
        else:
            value = correlation_p(effect).p_two_sided
    elif pair == "mean/se":
        if args.mean is None or args.se is None:
            raise UsageError("--mean and --se must be supplied together")
        if args.one_sided:
            raise UsageError("--one-sided applies to the --r/--n pair only")
        summary = OneSampleSummary(mean=args.mean, se=args.se)
        if args.log10:
            value = one_sample_neglog10(summary).neg_log10_p
        else:
            value = one_sample_neglog10(summary).p
    else:
        if args.x is None or args.df is None:
            raise UsageError("--x and --df must be supplied together")
        if args.one_sided:
            raise UsageError("--one-sided applies to the --r/--n pair only")
        if args.log10:
            raise UsageError("log-domain output is available for the normal-tail pairs only")
        value = chisq_sf(args.x, args.df)
    print(f"{value:.6f}")
    return EXIT_OK


def _parse_sizes(spec: str) -> dict:
    spec = spec.strip()
    try:
        if ":" in spec:
            lo, hi = spec.split(":", 1)
            return {"sample_size_range": (int(lo), int(hi))}
        return {"sample_sizes": tuple(int(part) for part in spec.split(","))}
    except ValueError:
        raise UsageError(
            f"--n must be an integer, a comma list, or lo:hi, got {spec!r}"
        ) from None


def _cmd_simulate(args: argparse.Namespace) -> int:
    spec = SimSpec(
        k=args.k,
        rho=args.rho,
        seed=args.seed,
        cluster_size=args.cluster_size,
        **_parse_sizes(args.n),
    )
    dataset = generate(spec)
    if args.out is not None:
        out_path = Path(args.out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
    else:
        out_dir = _out_dir(None)
        out_dir.mkdir(parents=True, exist_ok=True)
        out_path = out_dir / "simulated.csv"
    out_path.write_text(serialize_correlation_csv(dataset), encoding="utf-8")
    print(f"wrote {len(dataset)} simulated records: {out_path}")
    return EXIT_OK


def _cmd_reproduce(args: argparse.Namespace) -> int:
    result = reproduce(args.target, data_path=args.data, out_dir=_out_dir(args.out))
    for line in result.lines:
        print(line)
    for note in result.skipped:
        print(f"skipped {note}")
    summary = f"{result.target}: {result.matched} of {result.checked} checks matched"
    if result.skipped:
        summary += f" ({len(result.skipped)} row(s) skipped)"
    print(summary)
    for name, path in result.artifacts.items():
        print(f"wrote {name}: {path}")
    return EXIT_OK if result.ok else EXIT_VALIDATION


def _read_pvalues(args: argparse.Namespace) -> list[float]:
    if args.input is not None:
        if args.p:
            raise UsageError("supply p-values either positionally or with --input, not both")
        with open(args.input, "r", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or args.column not in reader.fieldnames:
                raise ValidationError(
                    f"{args.input}: no column named {args.column!r}"
                )
            values = []
            for row_number, row in enumerate(reader, start=2):
                raw = (row.get(args.column) or "").strip()
                if not raw:
                    raise ValidationError(f"row {row_number}: empty value in column {args.column!r}")
                try:
                    values.append(float(raw))
                except ValueError:
                    raise ValidationError(
                        f"row {row_number}: {args.column} must be a decimal number, got {raw!r}"
                    ) from None
            return values
    if not args.p:
        raise UsageError("no p-values supplied (positionally or via --input)")
    return list(args.p)


def _cmd_adjust(args: argparse.Namespace) -> int:
    values = _read_pvalues(args)
    adjustment = bh_adjust(values, m=args.family)
    print(f"family m = {adjustment.m}")
    print("rank,p_unadjusted,p_fdr_adjusted")
    for entry in adjustment.by_rank():
        print(f"{entry.rank},{entry.p:.6f},{entry.p_adjusted:.6f}")
    return EXIT_OK


def _cmd_combine(args: argparse.Namespace) -> int:
    values = _read_pvalues(args)
    result = fisher_combine(values)
    print(f"chi_square = {result.chi_square:.6f}")
    print(f"df = {result.df}")
    print(f"p = {result.p:.6f}")
    print(f"warning: {result.warning}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FixtureUnavailableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIXTURE_INCOMPLETE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except PvauditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
