"""Family-level evidence aggregation.

Two classic tools: pooling a family of p-values into one chi-square test
(-2 * sum(ln p) on 2k degrees of freedom), and step-up false-discovery-rate
adjustment of the individual values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, UsageError
from .numerics import chisq_sf

__all__ = [
    "INDEPENDENCE_WARNING",
    "CombinedTestResult",
    "AdjustedPValue",
    "AdjustmentResult",
    "fisher_combine",
    "bh_adjust",
]

INDEPENDENCE_WARNING = (
    "the combined chi-square assumes the p-values are mutually independent; "
    "when several values come from the same study that assumption fails and "
    "the statistic can be badly miscalibrated"
)


@dataclass(frozen=True)
class CombinedTestResult:
    """Pooled chi-square over k p-values: chi_square = -2 sum(ln p), df = 2k."""

    chi_square: float
    df: int
    p: float
    k: int
    warning: str = INDEPENDENCE_WARNING


@dataclass(frozen=True)
class AdjustedPValue:
    """One entry of an adjustment: index is the position in the caller's input."""

    index: int
    p: float
    p_adjusted: float
    rank: int


@dataclass(frozen=True)
class AdjustmentResult:
    """Step-up adjusted p-values over a family of size m.

    ``entries`` keeps the caller's input order; ``rank`` is the 1-based
    ascending-p rank with ties resolved by input order.
    """

    entries: tuple[AdjustedPValue, ...]
    m: int

    def by_rank(self) -> tuple[AdjustedPValue, ...]:
        return tuple(sorted(self.entries, key=lambda e: e.rank))


def _validated(ps: Sequence[float], what: str) -> list[float]:
    if len(ps) == 0:
        raise UsageError(f"{what} requires at least one p-value")
    out = []
    for i, p in enumerate(ps):
        p = float(p)
        if not (math.isfinite(p) and 0.0 < p <= 1.0):
            hint = "; exact zeros usually mean an upstream underflow - use the log-domain tail instead" if p == 0.0 else ""
            raise DomainError(f"p-values must lie in (0, 1]; entry {i} is {p!r}{hint}")
        out.append(p)
    return out


def fisher_combine(ps: Sequence[float]) -> CombinedTestResult:
    """Pool a family of p-values into a single chi-square test.

    chi_square = -2 * sum(ln p_i) is chi-square distributed on 2k degrees
    of freedom when the k values are independent and uniform under the
    null.  A single p-value round-trips exactly (chisq_sf(x, 2) = e^(-x/2)).
    The result always carries the independence warning; see
    ``INDEPENDENCE_WARNING``.
    """
    values = _validated(ps, "fisher_combine")
    chi_square = max(0.0, -2.0 * math.fsum(math.log(p) for p in values))
    df = 2 * len(values)
    return CombinedTestResult(
        chi_square=chi_square,
        df=df,
        p=chisq_sf(chi_square, df),
        k=len(values),
    )


def bh_adjust(ps: Sequence[float], m: int | None = None) -> AdjustmentResult:
    """Step-up FDR-adjusted p-values over a family of size m.

    With p_(1) <= ... <= p_(k) the sorted inputs,

        adjusted_(i) = min(1, min_{j >= i} p_(j) * m / j),

    the inner minimum running over the supplied values.  m defaults to k;
    passing m > k supports adjusting the k smallest members of a larger
    family (the supplied values are then assumed to be that family's k
    smallest, and the minimum can only be conservative: values the true
    tail might lower are not available).
    """
    values = _validated(ps, "bh_adjust")
    k = len(values)
    if m is None:
        m = k
    if not isinstance(m, int) or m < k:
        raise UsageError(f"family size m must be an integer >= the {k} supplied values, got {m!r}")

    order = sorted(range(k), key=values.__getitem__)  # stable: ties keep input order
    adjusted_sorted = [0.0] * k
    running = 1.0
    for j in range(k, 0, -1):
        running = min(running, values[order[j - 1]] * m / j)
        adjusted_sorted[j - 1] = running

    entries: list[AdjustedPValue | None] = [None] * k
    for rank0, idx in enumerate(order):
        entries[idx] = AdjustedPValue(
            index=idx,
            p=values[idx],
            p_adjusted=adjusted_sorted[rank0],
            rank=rank0 + 1,
        )
    return AdjustmentResult(entries=tuple(entries), m=m)
