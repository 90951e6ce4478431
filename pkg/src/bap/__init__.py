"""Release mechanisms scored by the risks of two competing agents.

A designer publishes a randomised function of sensitive data. A
statistician uses the release to answer an inference question; an
adversary uses it to recover a protected feature of the data. Both act
as exact Bayesians, and every mechanism is scored ex ante by

    combined risk = inference risk - weight * privacy risk,

averaged over the joint prior model. The package evaluates these risks
exactly for finite games, in closed form or by quadrature and Monte
Carlo for the Gaussian study, finds globally optimal finite mechanisms
by linear programming, and calibrates the weight so the trivial
mechanisms (release everything / release nothing) tie.
"""

__version__ = "0.1.0"

from .framework import (
    CalibrationError,
    FiniteGame,
    FiniteMechanism,
    GameValidationError,
    RiskTriple,
    RiskWeights,
    ZeroMassReleaseError,
    bayes_decision,
    calibrate_lambda,
    evaluate_mechanism,
    posterior_over_data,
)
from .numerics import (
    HistogramRegressor,
    QuadratureRule,
    RandomSource,
    bayes_risk_01,
    expect_gaussian,
    gauss_hermite,
    histogram_estimate,
    normal_cdf,
    normal_quantile,
)

__all__ = [
    "__version__",
    "FiniteGame", "FiniteMechanism", "RiskWeights", "RiskTriple",
    "GameValidationError", "ZeroMassReleaseError", "CalibrationError",
    "posterior_over_data", "bayes_decision", "evaluate_mechanism", "calibrate_lambda",
    "QuadratureRule", "RandomSource", "HistogramRegressor",
    "normal_cdf", "normal_quantile", "gauss_hermite", "expect_gaussian",
    "bayes_risk_01", "histogram_estimate",
]
