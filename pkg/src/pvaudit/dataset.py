"""CSV ingestion and validation for correlation and one-sample datasets.

Two file formats, both comma-separated with a header row, '.' decimals,
quoted fields allowed, and empty fields for missing values (never sentinel
numbers):

``correlations.csv``
    study,criterion,instrument,category,r,n
    - study       nonempty label of the source study
    - criterion   nonempty description of the behavioral outcome
    - instrument  one of: iat, explicit
    - category    free-text grouping (e.g. microbehavior)
    - r           correlation, strictly inside (-1, 1)
    - n           integer sample size >= 4

``one_sample.csv``
    study,year,n,mean,sd,se,association
    - study        nonempty label
    - year         integer (may be empty)
    - n            integer >= 2 (may be empty)
    - mean         group mean score (may be empty)
    - sd           positive standard deviation (may be empty)
    - se           positive standard error (may be empty; when empty it is
                   derived as sd/sqrt(n) if both are present)
    - association  s / significant, ns / non_significant, or empty

Unknown extra columns are ignored; validation errors always name the
offending row (the header is row 1).
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

from .corrstats import EffectSize, OneSampleSummary
from .errors import DomainError, SchemaError, ValidationError

__all__ = [
    "Instrument",
    "Association",
    "CorrelationRecord",
    "Dataset",
    "OneSampleRecord",
    "CORRELATION_COLUMNS",
    "ONE_SAMPLE_COLUMNS",
    "parse_correlation_csv",
    "serialize_correlation_csv",
    "parse_one_sample_csv",
]

CORRELATION_COLUMNS = ("study", "criterion", "instrument", "category", "r", "n")
ONE_SAMPLE_COLUMNS = ("study", "year", "n", "mean", "sd", "se", "association")


class Instrument(enum.Enum):
    IAT = "iat"
    EXPLICIT = "explicit"


class Association(enum.Enum):
    SIGNIFICANT = "significant"
    NON_SIGNIFICANT = "non_significant"
    UNKNOWN = "unknown"


_ASSOCIATION_ALIASES = {
    "s": Association.SIGNIFICANT,
    "significant": Association.SIGNIFICANT,
    "ns": Association.NON_SIGNIFICANT,
    "non_significant": Association.NON_SIGNIFICANT,
    "": Association.UNKNOWN,
    "unknown": Association.UNKNOWN,
}


@dataclass(frozen=True)
class CorrelationRecord:
    """One study-level correlation between an instrument score and a criterion."""

    study: str
    criterion: str
    instrument: Instrument
    category: str
    effect: EffectSize

    def __post_init__(self) -> None:
        if not self.study:
            raise ValidationError("study label must be nonempty")
        if not self.criterion:
            raise ValidationError("criterion description must be nonempty")


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of correlation records; order is preserved from
    the input and ranks are only assigned downstream."""

    records: tuple[CorrelationRecord, ...]
    source: str = ""

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[CorrelationRecord]:
        return iter(self.records)


@dataclass(frozen=True)
class OneSampleRecord:
    """A one-sample summary row; ``summary`` is None when the row lacks the
    numbers needed to run the test (mean plus a resolvable standard error)."""

    study: str
    year: int | None
    n: int | None
    summary: OneSampleSummary | None
    association: Association = Association.UNKNOWN


def _reader(text: str | TextIO) -> csv.DictReader:
    stream = io.StringIO(text) if isinstance(text, str) else text
    return csv.DictReader(stream)


def _check_header(reader: csv.DictReader, required: tuple[str, ...], kind: str) -> None:
    header = reader.fieldnames
    if header is None:
        raise SchemaError(f"{kind}: empty input, expected a header row with columns "
                          + ",".join(required))
    missing = [c for c in required if c not in header]
    if missing:
        raise SchemaError(
            f"{kind}: missing required column(s) {', '.join(missing)}; "
            f"expected header {','.join(required)}"
        )


def _parse_float(raw: str, row: int, column: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(f"row {row}: {column} must be a decimal number, got {raw!r}") from None


def _parse_int(raw: str, row: int, column: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"row {row}: {column} must be an integer, got {raw!r}") from None


def parse_correlation_csv(text: str | TextIO, source: str = "") -> Dataset:
    """Parse and validate a ``correlations.csv`` stream into a Dataset."""
    reader = _reader(text)
    _check_header(reader, CORRELATION_COLUMNS, "correlations.csv")
    records = []
    for row_number, row in enumerate(reader, start=2):
        raw = {c: (row.get(c) or "").strip() for c in CORRELATION_COLUMNS}
        r = _parse_float(raw["r"], row_number, "r")
        n = _parse_int(raw["n"], row_number, "n")
        try:
            effect = EffectSize(r=r, n=n)
        except DomainError as exc:
            raise ValidationError(f"row {row_number}: {exc}") from None
        try:
            instrument = Instrument(raw["instrument"].lower())
        except ValueError:
            allowed = ", ".join(i.value for i in Instrument)
            raise ValidationError(
                f"row {row_number}: instrument must be one of {allowed}, got {raw['instrument']!r}"
            ) from None
        try:
            records.append(
                CorrelationRecord(
                    study=raw["study"],
                    criterion=raw["criterion"],
                    instrument=instrument,
                    category=raw["category"],
                    effect=effect,
                )
            )
        except ValidationError as exc:
            raise ValidationError(f"row {row_number}: {exc}") from None
    return Dataset(records=tuple(records), source=source)


def serialize_correlation_csv(dataset: Dataset) -> str:
    """Render a Dataset back to ``correlations.csv`` text; parsing the output
    reproduces the records exactly (floats use shortest round-trip repr)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CORRELATION_COLUMNS)
    for rec in dataset.records:
        writer.writerow(
            [
                rec.study,
                rec.criterion,
                rec.instrument.value,
                rec.category,
                repr(rec.effect.r),
                rec.effect.n,
            ]
        )
    return out.getvalue()


def parse_one_sample_csv(text: str | TextIO) -> list[OneSampleRecord]:
    """Parse and validate a ``one_sample.csv`` stream.

    Rows missing the mean or any resolvable standard error come back with
    ``summary=None`` so callers can report them as skipped rather than fail.
    """
    reader = _reader(text)
    _check_header(reader, ONE_SAMPLE_COLUMNS, "one_sample.csv")
    records = []
    for row_number, row in enumerate(reader, start=2):
        raw = {c: (row.get(c) or "").strip() for c in ONE_SAMPLE_COLUMNS}
        if not raw["study"]:
            raise ValidationError(f"row {row_number}: study label must be nonempty")
        year = _parse_int(raw["year"], row_number, "year") if raw["year"] else None
        n = _parse_int(raw["n"], row_number, "n") if raw["n"] else None
        if n is not None and n < 2:
            raise ValidationError(f"row {row_number}: n must be an integer >= 2, got {n}")
        mean = _parse_float(raw["mean"], row_number, "mean") if raw["mean"] else None
        sd = _parse_float(raw["sd"], row_number, "sd") if raw["sd"] else None
        se = _parse_float(raw["se"], row_number, "se") if raw["se"] else None
        for column, value in (("sd", sd), ("se", se)):
            if value is not None and value <= 0.0:
                raise ValidationError(
                    f"row {row_number}: {column} must be positive, got {value}"
                )
        association = _ASSOCIATION_ALIASES.get(raw["association"].lower())
        if association is None:
            raise ValidationError(
                f"row {row_number}: association must be s, ns, significant, "
                f"non_significant or empty, got {raw['association']!r}"
            )
        summary = None
        if mean is not None and (se is not None or (sd is not None and n is not None)):
            try:
                summary = OneSampleSummary(mean=mean, se=se, sd=sd, n=n)
            except DomainError as exc:
                raise ValidationError(f"row {row_number}: {exc}") from None
        records.append(
            OneSampleRecord(study=raw["study"], year=year, n=n, summary=summary,
                            association=association)
        )
    return records
