"""Correlation effect sizes to p-values via the z-transform of r.

A correlation r from a study of n subjects maps to z = arctanh(r), which is
approximately normal with standard error 1/sqrt(n - 3); the two-sided tail
of z/se is the study's p-value.  The same normal machinery also covers
one-sample tests of a group mean against zero, reported as -log10(p) so
extreme results survive intact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .numerics import LogTail, normal_sf, normal_sf_log10

__all__ = [
    "Sign",
    "EffectSize",
    "CorrelationTest",
    "OneSampleSummary",
    "fisher_z",
    "fisher_se",
    "correlation_p",
    "one_sided_p",
    "correlation_neglog10",
    "one_sample_neglog10",
]

_LOG10_2 = math.log10(2.0)
_LOG_TAIL_SWITCH = 8.0

# Two-sided tails below ~1e-308 cannot be represented as a double; they are
# clamped to the smallest positive float so p stays inside (0, 1].
_SMALLEST_P = math.ulp(0.0)


class Sign(enum.Enum):
    """Direction of a correlation; p-values are direction-blind."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"

    @classmethod
    def of(cls, value: float) -> "Sign":
        if value > 0.0:
            return cls.POSITIVE
        if value < 0.0:
            return cls.NEGATIVE
        return cls.ZERO


@dataclass(frozen=True)
class EffectSize:
    """One study-level effect: correlation r with its sample size n."""

    r: float
    n: int

    def __post_init__(self) -> None:
        r = self.r
        if not (isinstance(r, (int, float)) and math.isfinite(r) and -1.0 < r < 1.0):
            raise DomainError(
                f"correlation must lie strictly inside (-1, 1); the z-transform "
                f"0.5*ln((1+r)/(1-r)) diverges at |r| = 1 (got {r!r})"
            )
        n = self.n
        if not isinstance(n, int) or isinstance(n, bool) or n < 4:
            raise DomainError(
                f"sample size must be an integer >= 4 so the standard error "
                f"1/sqrt(n-3) is finite (got {n!r})"
            )


@dataclass(frozen=True)
class CorrelationTest:
    """Result of testing one correlation against zero."""

    z: float
    se: float
    z_ratio: float
    p_two_sided: float
    sign: Sign


@dataclass(frozen=True)
class OneSampleSummary:
    """Group mean with its standard error.

    When both a standard error and (sd, n) are supplied, the explicit
    standard error wins; sd/sqrt(n) is only a fallback for rows that
    report the spread but not the standard error itself.
    """

    mean: float
    se: float | None = None
    sd: float | None = None
    n: int | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.mean):
            raise DomainError(f"mean must be finite, got {self.mean!r}")
        if self.se is not None and not (math.isfinite(self.se) and self.se > 0.0):
            raise DomainError(f"standard error must be positive, got {self.se!r}")
        if self.sd is not None and not (math.isfinite(self.sd) and self.sd > 0.0):
            raise DomainError(f"standard deviation must be positive, got {self.sd!r}")
        if self.n is not None and (not isinstance(self.n, int) or self.n < 2):
            raise DomainError(f"sample size must be an integer >= 2, got {self.n!r}")

    def resolved_se(self) -> float:
        """Standard error to use for the test: explicit se, else sd/sqrt(n)."""
        if self.se is not None:
            return self.se
        if self.sd is not None and self.n is not None:
            return self.sd / math.sqrt(self.n)
        raise DomainError("no standard error available: supply se, or sd plus n")


def fisher_z(r: float) -> float:
    """z-transform of a correlation: 0.5 * ln((1+r)/(1-r)) = arctanh(r)."""
    if not (isinstance(r, (int, float)) and math.isfinite(r) and -1.0 < r < 1.0):
        raise DomainError(
            f"correlation must lie strictly inside (-1, 1), got {r!r}"
        )
    return math.atanh(r)


def fisher_se(n: int) -> float:
    """Standard error of the z-transform: 1/sqrt(n - 3); needs n >= 4."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 4:
        raise DomainError(
            f"sample size must be an integer >= 4 so 1/sqrt(n-3) is finite, got {n!r}"
        )
    return 1.0 / math.sqrt(n - 3)


def correlation_p(effect: EffectSize) -> CorrelationTest:
    """Two-sided test of a correlation against zero.

    The p-value is computed from |r| and is therefore identical for +r and
    -r; the direction is carried separately in ``sign``.
    """
    z = fisher_z(effect.r)
    se = fisher_se(effect.n)
    ratio = z / se
    p = min(1.0, 2.0 * normal_sf(abs(ratio)))
    if p == 0.0:
        p = _SMALLEST_P
    return CorrelationTest(z=z, se=se, z_ratio=ratio, p_two_sided=p, sign=Sign.of(effect.r))


def one_sided_p(effect: EffectSize) -> float:
    """Upper-tail (r > 0) alternative; opt-in only, never the default."""
    ratio = fisher_z(effect.r) / fisher_se(effect.n)
    p = min(1.0, normal_sf(ratio))
    return p if p > 0.0 else _SMALLEST_P


def correlation_neglog10(effect: EffectSize) -> LogTail:
    """-log10 of the two-sided correlation p, via the log-domain tail."""
    return _two_sided_neglog10(fisher_z(effect.r) / fisher_se(effect.n))


def _two_sided_neglog10(ratio: float) -> LogTail:
    z = abs(ratio)
    if z <= _LOG_TAIL_SWITCH:
        return LogTail(max(0.0, -math.log10(2.0 * normal_sf(z))))
    return LogTail(normal_sf_log10(z).neg_log10_p - _LOG10_2)


def one_sample_neglog10(summary: OneSampleSummary) -> LogTail:
    """-log10 of the two-sided p for a group mean tested against zero.

    z = mean/se; for |z| past the log-domain switch the tail is evaluated
    entirely in log space, so a mean 30 standard errors from zero reports
    ~190 orders of magnitude without underflow.  A zero mean gives exactly 0
    (p = 1).
    """
    se = summary.resolved_se()
    if se <= 0.0:
        raise DomainError(f"standard error must be positive, got {se!r}")
    return _two_sided_neglog10(summary.mean / se)
