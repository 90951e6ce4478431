"""Gaussian hypothesis-testing study: conjugate model, six release
mechanisms, two adversary targets, and the evaluators behind them."""

from .model import (
    Full,
    GaussianMechanism,
    GaussianModel,
    NoisyFull,
    NoisyMean,
    NoisyMedian,
    Null,
    NumericsConfig,
    OneBit,
    PosteriorParams,
    TARGETS,
    one_bit_threshold,
)
from .risks import (
    CLOSED_FORM,
    MONTE_CARLO,
    QUADRATURE,
    RiskEstimate,
    mechanism_risks,
    median_risks,
    risk_bob,
    risk_eve,
)
from .study import (
    CSV_COLUMNS,
    FAMILIES,
    SweepResult,
    SweepRow,
    TableResult,
    TableRow,
    default_grid,
    optimize_param,
    result_to_dict,
    sweep,
    sweep_to_csv,
    table,
    table_to_csv,
)

__all__ = [
    "Full", "Null", "NoisyFull", "NoisyMean", "NoisyMedian", "OneBit",
    "GaussianMechanism", "GaussianModel", "NumericsConfig", "PosteriorParams",
    "TARGETS", "one_bit_threshold",
    "RiskEstimate", "risk_bob", "risk_eve", "mechanism_risks", "median_risks",
    "CLOSED_FORM", "QUADRATURE", "MONTE_CARLO",
    "CSV_COLUMNS", "FAMILIES", "SweepRow", "SweepResult", "TableRow", "TableResult",
    "default_grid", "sweep", "optimize_param", "table",
    "sweep_to_csv", "table_to_csv", "result_to_dict",
]
