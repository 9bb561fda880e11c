"""pvaudit: statistical reproducibility auditing for correlation meta-analyses.

The pipeline: correlation effect sizes (r, n) become two-sided p-values via
the z-transform of r; the p-values are rank-ordered into a p-value plot with
uniformity diagnostics; the family is pooled with a combined chi-square test
and adjusted with step-up FDR; extreme one-sample tails are reported as
-log10(p).  Bundled reference tables let every shipped number be
regenerated and diffed (``pvaudit reproduce --help``).
"""

from .corrstats import (
    CorrelationTest,
    EffectSize,
    OneSampleSummary,
    Sign,
    correlation_neglog10,
    correlation_p,
    fisher_se,
    fisher_z,
    one_sample_neglog10,
    one_sided_p,
)
from .dataset import (
    Association,
    CorrelationRecord,
    Dataset,
    Instrument,
    OneSampleRecord,
    parse_correlation_csv,
    parse_one_sample_csv,
    serialize_correlation_csv,
)
from .errors import (
    DomainError,
    FixtureUnavailableError,
    PvauditError,
    SchemaError,
    UsageError,
    ValidationError,
)
from .multiplicity import (
    INDEPENDENCE_WARNING,
    AdjustedPValue,
    AdjustmentResult,
    CombinedTestResult,
    bh_adjust,
    fisher_combine,
)
from .numerics import LogTail, chisq_sf, normal_sf, normal_sf_log10
from .pvplot import (
    PlotStyle,
    PValueEntry,
    PValuePlot,
    build_plot,
    ks_distance,
    plot_from_pvalues,
    render_svg,
    render_table,
)
from .simulate import SimSpec, generate

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "PvauditError", "DomainError", "UsageError", "ValidationError",
    "SchemaError", "FixtureUnavailableError",
    # numerics
    "LogTail", "normal_sf", "normal_sf_log10", "chisq_sf",
    # correlation statistics
    "Sign", "EffectSize", "CorrelationTest", "OneSampleSummary",
    "fisher_z", "fisher_se", "correlation_p", "one_sided_p",
    "correlation_neglog10", "one_sample_neglog10",
    # multiplicity
    "INDEPENDENCE_WARNING", "CombinedTestResult", "AdjustedPValue",
    "AdjustmentResult", "fisher_combine", "bh_adjust",
    # datasets
    "Instrument", "Association", "CorrelationRecord", "Dataset",
    "OneSampleRecord", "parse_correlation_csv", "serialize_correlation_csv",
    "parse_one_sample_csv",
    # plots
    "PValueEntry", "PValuePlot", "PlotStyle", "ks_distance", "build_plot",
    "plot_from_pvalues", "render_svg", "render_table",
    # simulation
    "SimSpec", "generate",
]
