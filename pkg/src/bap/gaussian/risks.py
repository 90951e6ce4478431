"""Integrated-risk evaluators for the Gaussian study.

Each (mechanism, agent, target) combination is evaluated by the cheapest
faithful method: closed form where the conditional law is explicit,
one-dimensional (or nested) Gauss-Hermite quadrature for conjugate
releases, and seeded Monte Carlo with histogram regression where no
tractable conditional exists. Monte Carlo estimates carry a plug-in
standard error; deterministic ones report zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .. import kernels
from ..numerics import HistogramRegressor, RandomSource, gauss_hermite, normal_cdf
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
    one_bit_threshold,
    validate_target,
)

__all__ = [
    "RiskEstimate",
    "risk_bob",
    "risk_eve",
    "median_risks",
    "family_stream",
    "CLOSED_FORM",
    "QUADRATURE",
    "MONTE_CARLO",
]

CLOSED_FORM = "closed-form"
QUADRATURE = "quadrature"
MONTE_CARLO = "monte-carlo"

# Stream ids per mechanism family: rows of one parameter sweep share the
# family stream so that within-family comparisons are free of
# between-row sampling noise, while different families (and anything
# else keyed off the same seed) stay independent.
_FAMILY_STREAMS = {NoisyFull: 2, NoisyMean: 3, NoisyMedian: 4, OneBit: 5}

_TINY = 1e-300


@dataclass(frozen=True)
class RiskEstimate:
    """One integrated risk with its provenance."""

    value: float
    se: float
    method: str


def family_stream(mechanism_type: type) -> int:
    return _FAMILY_STREAMS.get(mechanism_type, 1)


def _default_source(cfg: NumericsConfig, mechanism_type: type) -> RandomSource:
    return RandomSource(cfg.seed, family_stream(mechanism_type))


def _risk01(p: np.ndarray) -> np.ndarray:
    return np.minimum(p, 1.0 - p)


def _mc_summary(per_sample_risk: np.ndarray) -> RiskEstimate:
    m = per_sample_risk.shape[0]
    value = float(per_sample_risk.mean())
    se = float(per_sample_risk.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    return RiskEstimate(value, se, MONTE_CARLO)


# --- statistician ----------------------------------------------------------

def _bob_location_test(pred_var: float, post_var: float, post_slope: float,
                       cut: float, order: int) -> float:
    """E[r(P(parameter > cut | release))] when the release average is
    Gaussian with predictive variance ``pred_var`` and the parameter
    posterior is N(post_slope * release, post_var)."""
    rule = gauss_hermite(order)
    release = math.sqrt(pred_var) * rule.nodes
    p = ndtr((post_slope * release - cut) / math.sqrt(post_var))
    return rule.expect(_risk01(p))


def _bob_one_bit(model: GaussianModel, threshold: float, order: int) -> float:
    rule = gauss_hermite(order)
    cut = one_bit_threshold(model, threshold)
    theta = model.prior_sd * rule.nodes
    emit_one = ndtr(math.sqrt(model.sample_size) * (theta - cut))
    above = (theta > model.statistician_cut).astype(float)
    value = 0.0
    for given, joint in (
        (emit_one, above * emit_one),
        (1.0 - emit_one, above * (1.0 - emit_one)),
    ):
        mass = rule.expect(given)
        if mass > _TINY:
            p = rule.expect(joint) / mass
            value += mass * min(p, 1.0 - p)
    return value


def risk_bob(model: GaussianModel, mechanism: GaussianMechanism,
             cfg: NumericsConfig | None = None,
             source: RandomSource | None = None) -> RiskEstimate:
    """Statistician's integrated risk for one release mechanism."""
    cfg = cfg or NumericsConfig()

    if isinstance(mechanism, Null):
        p = normal_cdf(-model.statistician_cut / model.prior_sd)
        return RiskEstimate(min(p, 1.0 - p), 0.0, CLOSED_FORM)

    if isinstance(mechanism, Full) or (
            isinstance(mechanism, NoisyFull) and mechanism.noise_sd == 0.0):
        value = _bob_location_test(
            model.mean_pred_var, model.data_posterior_var,
            model.data_posterior_var * model.sample_size,
            model.statistician_cut, cfg.quad_order)
        return RiskEstimate(value, 0.0, QUADRATURE)

    if isinstance(mechanism, NoisyFull):
        pp = PosteriorParams.for_noise(model, mechanism.noise_sd)
        value = _bob_location_test(
            pp.noisy_vector_pred_var, pp.noisy_vector_var, pp.noisy_vector_slope,
            model.statistician_cut, cfg.quad_order)
        return RiskEstimate(value, 0.0, QUADRATURE)

    if isinstance(mechanism, NoisyMean):
        pp = PosteriorParams.for_noise(model, mechanism.noise_sd)
        value = _bob_location_test(
            pp.noisy_mean_pred_var, pp.noisy_mean_var, pp.noisy_mean_slope,
            model.statistician_cut, cfg.quad_order)
        return RiskEstimate(value, 0.0, QUADRATURE)

    if isinstance(mechanism, NoisyMedian):
        estimate, _ = median_risks(model, mechanism.noise_sd, "mean", cfg,
                                   source or _default_source(cfg, NoisyMedian))
        return estimate

    if isinstance(mechanism, OneBit):
        if mechanism.threshold in (0.0, 1.0):
            return risk_bob(model, Null(), cfg)
        value = _bob_one_bit(model, mechanism.threshold, cfg.quad_order)
        return RiskEstimate(value, 0.0, QUADRATURE)

    raise TypeError(f"unknown mechanism {mechanism!r}")


# --- adversary -------------------------------------------------------------

def _eve_null(model: GaussianModel, target: str, order: int) -> RiskEstimate:
    if target == "mean":
        p = 1.0 - normal_cdf(model.adversary_cut / math.sqrt(model.mean_pred_var))
        return RiskEstimate(min(p, 1.0 - p), 0.0, CLOSED_FORM)
    rule = gauss_hermite(order)
    theta = model.prior_sd * rule.nodes
    below = rule.expect(ndtr(model.adversary_cut - theta) ** model.sample_size)
    p = 1.0 - below
    return RiskEstimate(min(p, 1.0 - p), 0.0, QUADRATURE)


def _eve_noisy_mean_max(model: GaussianModel, noise_sd: float, order: int) -> float:
    pp = PosteriorParams.for_noise(model, noise_sd)
    rule = gauss_hermite(order)
    release = math.sqrt(pp.noisy_mean_pred_var) * rule.nodes
    post_mean = pp.noisy_mean_slope * release
    post_sd = math.sqrt(pp.noisy_mean_var)
    theta = post_mean[:, None] + post_sd * rule.nodes[None, :]
    below = ndtr(model.adversary_cut - theta) ** model.sample_size @ rule.weights
    return rule.expect(_risk01(1.0 - below))


_MAX_KERNEL_CHUNK = 1_000_000


def _eve_noisy_full_max(model: GaussianModel, noise_sd: float, cfg: NumericsConfig,
                        source: RandomSource) -> RiskEstimate:
    pp = PosteriorParams.for_noise(model, noise_sd)
    rule = gauss_hermite(cfg.quad_order)
    s2 = pp.shrink_var
    s = math.sqrt(s2)
    pred_sd = math.sqrt(model.prior_sd ** 2 + 1.0 + noise_sd ** 2)

    gen = source.generator()
    released = pred_sd * gen.standard_normal((cfg.mc_samples, model.sample_size))
    offsets = (model.adversary_cut - (1.0 - s2) * released) / s
    shifts = (s2 / s) * pp.noisy_vector_slope * released.mean(axis=1)
    node_scale = (s2 / s) * math.sqrt(pp.noisy_vector_var)

    probs = np.empty(cfg.mc_samples)
    for lo in range(0, cfg.mc_samples, _MAX_KERNEL_CHUNK):
        hi = min(lo + _MAX_KERNEL_CHUNK, cfg.mc_samples)
        probs[lo:hi] = kernels.max_exceedance_probs(
            np.ascontiguousarray(offsets[lo:hi]), shifts[lo:hi],
            node_scale, rule.nodes, rule.weights)
    return _mc_summary(_risk01(probs))


def _eve_one_bit_mean(model: GaussianModel, threshold: float) -> float:
    cut = one_bit_threshold(model, threshold)
    sd = math.sqrt(model.mean_pred_var)
    c = model.adversary_cut
    mass_one = 1.0 - normal_cdf(cut / sd) if math.isfinite(cut) else (
        1.0 if cut == -math.inf else 0.0)
    mass_zero = 1.0 - mass_one
    value = 0.0
    if mass_one > _TINY:
        high = max(c, cut) if math.isfinite(cut) else c
        p = (1.0 - normal_cdf(high / sd)) / mass_one
        value += mass_one * min(p, 1.0 - p)
    if mass_zero > _TINY:
        upper = normal_cdf(cut / sd) if math.isfinite(cut) else 1.0
        p = max(upper - normal_cdf(c / sd), 0.0) / mass_zero
        value += mass_zero * min(p, 1.0 - p)
    return value


def _eve_one_bit_max(model: GaussianModel, threshold: float, cfg: NumericsConfig,
                     source: RandomSource) -> RiskEstimate:
    cut = one_bit_threshold(model, threshold)
    gen = source.generator()
    theta = model.prior_sd * gen.standard_normal(cfg.mc_samples)
    data = theta[:, None] + gen.standard_normal((cfg.mc_samples, model.sample_size))
    emitted = data.mean(axis=1) > cut
    exceed = data.max(axis=1) > model.adversary_cut

    class_risk = np.zeros(2)
    for j, mask in enumerate((~emitted, emitted)):
        count = int(mask.sum())
        if count:
            p = float(exceed[mask].mean())
            class_risk[j] = min(p, 1.0 - p)
    per_sample = class_risk[emitted.astype(int)]
    return _mc_summary(per_sample)


def risk_eve(model: GaussianModel, mechanism: GaussianMechanism, target: str,
             cfg: NumericsConfig | None = None,
             source: RandomSource | None = None) -> RiskEstimate:
    """Adversary's integrated risk for one release mechanism and target."""
    cfg = cfg or NumericsConfig()
    validate_target(target)

    if isinstance(mechanism, Full):
        return RiskEstimate(0.0, 0.0, CLOSED_FORM)

    if isinstance(mechanism, Null):
        return _eve_null(model, target, cfg.quad_order)

    if isinstance(mechanism, NoisyFull):
        if mechanism.noise_sd == 0.0:
            return RiskEstimate(0.0, 0.0, CLOSED_FORM)
        pp = PosteriorParams.for_noise(model, mechanism.noise_sd)
        if target == "mean":
            slope = pp.mean_given_avg_slope
            value = _eve_conditional_mean(model, pp.noisy_vector_pred_var, slope,
                                          cfg.quad_order)
            return RiskEstimate(value, 0.0, QUADRATURE)
        return _eve_noisy_full_max(model, mechanism.noise_sd, cfg,
                                   source or _default_source(cfg, NoisyFull))

    if isinstance(mechanism, NoisyMean):
        if target == "mean":
            if mechanism.noise_sd == 0.0:
                return RiskEstimate(0.0, 0.0, CLOSED_FORM)
            pp = PosteriorParams.for_noise(model, mechanism.noise_sd)
            value = _eve_conditional_mean(model, pp.noisy_mean_pred_var,
                                          pp.mean_given_release_slope, cfg.quad_order)
            return RiskEstimate(value, 0.0, QUADRATURE)
        value = _eve_noisy_mean_max(model, mechanism.noise_sd, cfg.quad_order)
        return RiskEstimate(value, 0.0, QUADRATURE)

    if isinstance(mechanism, NoisyMedian):
        _, estimate = median_risks(model, mechanism.noise_sd, target, cfg,
                                   source or _default_source(cfg, NoisyMedian))
        return estimate

    if isinstance(mechanism, OneBit):
        if mechanism.threshold in (0.0, 1.0):
            return _eve_null(model, target, cfg.quad_order)
        if target == "mean":
            return RiskEstimate(_eve_one_bit_mean(model, mechanism.threshold),
                                0.0, CLOSED_FORM)
        return _eve_one_bit_max(model, mechanism.threshold, cfg,
                                source or _default_source(cfg, OneBit))

    raise TypeError(f"unknown mechanism {mechanism!r}")


def mechanism_risks(model: GaussianModel, mechanism: GaussianMechanism, target: str,
                    cfg: NumericsConfig, source: RandomSource | None = None
                    ) -> tuple[RiskEstimate, RiskEstimate]:
    """Both agents' risks; the median release shares one draw batch."""
    if isinstance(mechanism, NoisyMedian):
        return median_risks(model, mechanism.noise_sd, target, cfg,
                            source or _default_source(cfg, NoisyMedian))
    return (risk_bob(model, mechanism, cfg, source),
            risk_eve(model, mechanism, target, cfg, source))


def _eve_conditional_mean(model: GaussianModel, pred_var: float, slope: float,
                          order: int) -> float:
    """Mean-target risk when (sample mean, release) are jointly Gaussian
    with conditional slope ``slope`` against the released average."""
    rule = gauss_hermite(order)
    release = math.sqrt(pred_var) * rule.nodes
    cond_sd = math.sqrt(model.mean_pred_var * (1.0 - slope))
    p = 1.0 - ndtr((model.adversary_cut - slope * release) / cond_sd)
    return rule.expect(_risk01(p))


# --- joint Monte Carlo path for the median release ---------------------------

def median_risks(model: GaussianModel, noise_sd: float, target: str,
                 cfg: NumericsConfig, source: RandomSource
                 ) -> tuple[RiskEstimate, RiskEstimate]:
    """Both agents' risks for the noisy median release from one batch of
    prior-predictive draws, via histogram regression on the release."""
    validate_target(target)
    gen = source.generator()
    theta = model.prior_sd * gen.standard_normal(cfg.mc_samples)
    data = theta[:, None] + gen.standard_normal((cfg.mc_samples, model.sample_size))
    noise = gen.standard_normal(cfg.mc_samples)
    release = np.median(data, axis=1) + noise_sd * noise

    stat = data.mean(axis=1) if target == "mean" else data.max(axis=1)
    proxy = math.pi / (2.0 * model.sample_size)
    half_width = cfg.range_multiplier * math.sqrt(
        model.prior_sd ** 2 + proxy + noise_sd ** 2)

    out = []
    for success in (theta > model.statistician_cut, stat > model.adversary_cut):
        regressor = HistogramRegressor(cfg.bins_for(target), half_width, cfg.smoothing)
        regressor.record_batch(release, success)
        cell_risk = _risk01(regressor.cell_estimates())
        totals = regressor.totals
        m = cfg.mc_samples
        value = float(np.dot(totals, cell_risk) / m)
        var = float(np.dot(totals, (cell_risk - value) ** 2) / max(m - 1, 1))
        out.append(RiskEstimate(value, math.sqrt(var / m), MONTE_CARLO))
    return out[0], out[1]
