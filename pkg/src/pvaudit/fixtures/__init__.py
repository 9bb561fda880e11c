"""Bundled reference tables from the audited meta-analysis case study.

The package ships exactly what the published tables print: the 10 (or 5)
smallest unadjusted/FDR-adjusted p-value pairs per figure, the (r, n) pairs
where the tables include them, and the one-sample physician-review rows.
The underlying full datasets (87/83/75/79 correlations) are not published
as tables and therefore are not bundled; reproduction targets that need
them accept a user-supplied ``correlations.csv`` instead.

Note on step-up adjustment over these truncated fixtures: an adjusted value
whose step-up minimum falls outside the printed subset cannot be recomputed
from the fixture alone (the minimum over a subset can only be larger).
``tail_dependent`` flags below mark the printed values with that property;
reproduction checks them for consistency rather than equality.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

from ..corrstats import EffectSize
from ..dataset import (
    CorrelationRecord,
    Dataset,
    Instrument,
    OneSampleRecord,
    parse_one_sample_csv,
)

__all__ = [
    "FdrTableRow",
    "OneSampleTableRow",
    "FigureExpectation",
    "FIGURES",
    "FDR_FAMILY_SIZES",
    "TABLE_IDS",
    "FIGURE_IDS",
    "load_fdr_table",
    "load_one_sample_table",
    "table_dataset",
]

TABLE_IDS = ("table1", "table2", "table3", "table4", "table5")
FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4")

# full family size behind each truncated FDR table
FDR_FAMILY_SIZES = {"table1": 87, "table2": 83, "table3": 75, "table4": 79}

# 1-based ranks whose printed adjusted value requires the unpublished tail
# of the family (see module docstring)
TAIL_DEPENDENT_RANKS = {
    "table1": (10,),
    "table2": (1, 2, 3, 4, 5),
    "table3": (3, 4, 5, 6, 7, 8, 9, 10),
    "table4": (),
}


@dataclass(frozen=True)
class FdrTableRow:
    """One printed row of a truncated FDR table."""

    rank: int
    p_unadjusted: float
    p_fdr_adjusted: float
    criterion: str | None = None
    effect: EffectSize | None = None


@dataclass(frozen=True)
class OneSampleTableRow:
    """One printed row of the one-sample review table."""

    record: OneSampleRecord
    neg_log10_p: float | None
    printed_rank: int | None


@dataclass(frozen=True)
class FigureExpectation:
    """Printed whole-figure diagnostics; checkable only against the full
    (user-supplied) dataset."""

    figure: str
    instrument: Instrument
    category: str
    k: int
    n_negative: int
    n_below_alpha: int | None
    chi_square: float
    df: int
    p: float | None            # printed tail, when given exactly
    p_upper_bound: float | None  # printed as "< bound" otherwise
    fdr_table: str
    top: int


FIGURES = {
    "fig1": FigureExpectation(
        figure="fig1", instrument=Instrument.IAT, category="microbehavior",
        k=87, n_negative=30, n_below_alpha=21,
        chi_square=322.51, df=174, p=None, p_upper_bound=0.0001,
        fdr_table="table1", top=10,
    ),
    "fig2": FigureExpectation(
        figure="fig2", instrument=Instrument.EXPLICIT, category="microbehavior",
        k=83, n_negative=33, n_below_alpha=None,
        chi_square=160.63, df=166, p=0.603, p_upper_bound=None,
        fdr_table="table2", top=5,
    ),
    "fig3": FigureExpectation(
        figure="fig3", instrument=Instrument.IAT, category="person perception",
        k=75, n_negative=26, n_below_alpha=None,
        chi_square=249.82, df=150, p=None, p_upper_bound=0.0001,
        fdr_table="table3", top=10,
    ),
    "fig4": FigureExpectation(
        figure="fig4", instrument=Instrument.EXPLICIT, category="person perception",
        k=79, n_negative=22, n_below_alpha=None,
        chi_square=186.54, df=158, p=0.0600, p_upper_bound=None,
        fdr_table="table4", top=5,
    ),
}

_FDR_FILES = {
    "table1": "table1_fdr.csv",
    "table2": "table2_fdr.csv",
    "table3": "table3_fdr.csv",
    "table4": "table4_fdr.csv",
}


def _read(name: str) -> str:
    return (resources.files(__package__) / "data" / name).read_text(encoding="utf-8")


def load_fdr_table(table: str) -> list[FdrTableRow]:
    """Load one of table1..table4 as validated rows, ascending by p."""
    if table not in _FDR_FILES:
        raise KeyError(f"unknown FDR table {table!r}; expected one of {sorted(_FDR_FILES)}")
    rows = []
    reader = csv.DictReader(_read(_FDR_FILES[table]).splitlines())
    for i, row in enumerate(reader, start=1):
        effect = None
        if "r" in row:
            effect = EffectSize(r=float(row["r"]), n=int(row["n"]))
        rows.append(
            FdrTableRow(
                rank=int(row["rank"]) if "rank" in row else i,
                p_unadjusted=float(row["p_unadjusted"]),
                p_fdr_adjusted=float(row["p_fdr_adjusted"]),
                criterion=row.get("criterion"),
                effect=effect,
            )
        )
    return rows


def load_one_sample_table() -> list[OneSampleTableRow]:
    """Load table5 (one-sample physician review) with its printed extras."""
    text = _read("table5_one_sample.csv")
    records = parse_one_sample_csv(text)
    extras = list(csv.DictReader(text.splitlines()))
    rows = []
    for record, extra in zip(records, extras):
        printed = extra["neg_log10_p"].strip()
        printed_rank = extra["rank"].strip()
        rows.append(
            OneSampleTableRow(
                record=record,
                neg_log10_p=float(printed) if printed else None,
                printed_rank=int(printed_rank) if printed_rank else None,
            )
        )
    return rows


def table_dataset(table: str) -> Dataset:
    """Build a Dataset from a fixture table that prints (r, n) pairs.

    Only table3 and table4 carry effect sizes; their rows become records
    labelled by printed rank.
    """
    rows = load_fdr_table(table)
    if any(row.effect is None for row in rows):
        raise KeyError(f"{table} does not print (r, n) pairs; no dataset can be built")
    instrument = FIGURES["fig3"].instrument if table == "table3" else FIGURES["fig4"].instrument
    category = "person perception"
    records = tuple(
        CorrelationRecord(
            study=f"rank {row.rank}",
            criterion=f"rank {row.rank}",
            instrument=instrument,
            category=category,
            effect=row.effect,
        )
        for row in rows
    )
    return Dataset(records=records, source=f"bundled fixture {table}")
