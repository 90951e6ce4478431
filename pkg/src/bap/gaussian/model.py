"""Model, mechanism and configuration types for the Gaussian study.

The generative model is conjugate: a normal prior on the location
parameter and unit-variance normal observations. The statistician tests
whether the parameter exceeds its threshold; the adversary tests whether
a data statistic (sample mean or sample maximum) exceeds hers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "GaussianModel",
    "TARGETS",
    "validate_target",
    "Full",
    "Null",
    "NoisyFull",
    "NoisyMean",
    "NoisyMedian",
    "OneBit",
    "GaussianMechanism",
    "PosteriorParams",
    "NumericsConfig",
    "one_bit_threshold",
]

TARGETS = ("mean", "max")


def validate_target(target: str) -> str:
    if target not in TARGETS:
        raise ValueError(f"adversary target must be one of {TARGETS}, got {target!r}")
    return target


@dataclass(frozen=True)
class GaussianModel:
    sample_size: int = 5
    prior_sd: float = 1.0
    statistician_cut: float = 0.0
    adversary_cut: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.sample_size, int) or self.sample_size < 1:
            raise ValueError(f"sample size must be a positive integer, got {self.sample_size!r}")
        if not self.prior_sd > 0.0:
            raise ValueError(f"prior standard deviation must be positive, got {self.prior_sd!r}")

    @property
    def data_posterior_var(self) -> float:
        """Posterior variance of the parameter given the raw data."""
        return 1.0 / (self.prior_sd ** -2 + self.sample_size)

    @property
    def mean_pred_var(self) -> float:
        """Predictive variance of the sample mean."""
        return self.prior_sd ** 2 + 1.0 / self.sample_size


def _positive_noise(sd: float) -> float:
    if sd < 0.0 or not math.isfinite(sd):
        raise ValueError(f"noise standard deviation must be finite and >= 0, got {sd!r}")
    return float(sd)


@dataclass(frozen=True)
class Full:
    """Release the data vector itself."""


@dataclass(frozen=True)
class Null:
    """Release a constant symbol."""


@dataclass(frozen=True)
class NoisyFull:
    """Release the data vector with iid normal noise on each entry."""

    noise_sd: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "noise_sd", _positive_noise(self.noise_sd))


@dataclass(frozen=True)
class NoisyMean:
    """Release the sample mean with additive normal noise."""

    noise_sd: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "noise_sd", _positive_noise(self.noise_sd))


@dataclass(frozen=True)
class NoisyMedian:
    """Release the sample median with additive normal noise."""

    noise_sd: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "noise_sd", _positive_noise(self.noise_sd))


@dataclass(frozen=True)
class OneBit:
    """Release whether the posterior probability of the statistician's
    alternative exceeds ``threshold``; equivalent to cutting the sample
    mean at a deterministic point."""

    threshold: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"one-bit threshold must lie in [0, 1], got {self.threshold!r}")


GaussianMechanism = Full | Null | NoisyFull | NoisyMean | NoisyMedian | OneBit


@dataclass(frozen=True)
class PosteriorParams:
    """Conjugate-update quantities for one model and noise level.

    ``noisy_vector_*`` fields describe the parameter posterior after a
    per-entry noisy release; ``noisy_mean_*`` after a noisy sample-mean
    release. Slopes multiply the (averaged) release to give posterior or
    conditional means.
    """

    data_posterior_var: float     # parameter | raw data
    mean_pred_var: float          # predictive variance of the sample mean
    noisy_vector_var: float       # parameter | noisy vector
    noisy_vector_slope: float     #   posterior mean per unit of released average
    noisy_vector_pred_var: float  # predictive variance of the released average
    release_var: float            # sample mean + noise, given the parameter
    noisy_mean_var: float         # parameter | noisy mean
    noisy_mean_slope: float
    noisy_mean_pred_var: float    # predictive variance of the noisy mean
    mean_given_avg_slope: float   # sample mean | released average
    mean_given_release_slope: float  # sample mean | noisy mean
    shrink_var: float             # data entry | parameter and its noisy copy
    median_var_proxy: float       # large-sample variance proxy of the median

    @classmethod
    def for_noise(cls, model: GaussianModel, noise_sd: float) -> "PosteriorParams":
        n = model.sample_size
        s2 = noise_sd ** 2
        v_x = model.data_posterior_var
        v_bar = model.mean_pred_var
        noisy_vec_var = 1.0 / (model.prior_sd ** -2 + n / (1.0 + s2))
        release_var = 1.0 / n + s2
        noisy_mean_var = 1.0 / (model.prior_sd ** -2 + 1.0 / release_var)
        return cls(
            data_posterior_var=v_x,
            mean_pred_var=v_bar,
            noisy_vector_var=noisy_vec_var,
            noisy_vector_slope=noisy_vec_var * n / (1.0 + s2),
            noisy_vector_pred_var=model.prior_sd ** 2 + (1.0 + s2) / n,
            release_var=release_var,
            noisy_mean_var=noisy_mean_var,
            noisy_mean_slope=noisy_mean_var / release_var,
            noisy_mean_pred_var=model.prior_sd ** 2 + release_var,
            mean_given_avg_slope=v_bar / (v_bar + s2 / n),
            mean_given_release_slope=v_bar / (v_bar + s2),
            shrink_var=s2 / (1.0 + s2),
            median_var_proxy=math.pi / (2.0 * n),
        )


def one_bit_threshold(model: GaussianModel, threshold: float) -> float:
    """Cut on the sample mean equivalent to the one-bit release.

    Endpoints map to infinite cuts: threshold 0 means the released bit is
    almost surely 1 and threshold 1 almost surely 0, both information-free.
    """
    from ..numerics import normal_quantile

    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"one-bit threshold must lie in [0, 1], got {threshold!r}")
    if threshold == 0.0:
        return -math.inf
    if threshold == 1.0:
        return math.inf
    v_x = model.data_posterior_var
    return (model.statistician_cut
            - math.sqrt(v_x) * normal_quantile(1.0 - threshold)) / (model.sample_size * v_x)


@dataclass(frozen=True)
class NumericsConfig:
    """Numerical knobs for the Gaussian evaluators.

    ``histogram_bins`` of None resolves to 500 for the max target and 200
    otherwise. ``grid_size`` controls the default parameter grids used by
    the optimiser (log-spaced noise levels in [sigma_lo, sigma_hi] plus
    zero; uniform one-bit thresholds in [0.01, 0.99]).
    """

    quad_order: int = 80
    mc_samples: int = 200_000
    seed: int = 0
    histogram_bins: int | None = None
    range_multiplier: float = 6.0
    smoothing: float = 0.5
    grid_size: int = 61
    sigma_lo: float = 0.01
    sigma_hi: float = 3.0

    def __post_init__(self) -> None:
        if not isinstance(self.quad_order, int) or self.quad_order < 1:
            raise ValueError(f"quadrature order must be a positive integer, got {self.quad_order!r}")
        if not isinstance(self.mc_samples, int) or self.mc_samples < 1:
            raise ValueError(f"sample count must be a positive integer, got {self.mc_samples!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.histogram_bins is not None and (
                not isinstance(self.histogram_bins, int) or self.histogram_bins < 1):
            raise ValueError(f"histogram_bins must be a positive integer, got {self.histogram_bins!r}")
        if not self.range_multiplier > 0.0:
            raise ValueError(f"range multiplier must be positive, got {self.range_multiplier!r}")
        if self.smoothing < 0.0:
            raise ValueError(f"smoothing must be nonnegative, got {self.smoothing!r}")
        if not isinstance(self.grid_size, int) or self.grid_size < 2:
            raise ValueError(f"grid size must be an integer >= 2, got {self.grid_size!r}")
        if not 0.0 < self.sigma_lo < self.sigma_hi:
            raise ValueError("need 0 < sigma_lo < sigma_hi")

    def bins_for(self, target: str | None) -> int:
        if self.histogram_bins is not None:
            return self.histogram_bins
        return 500 if target == "max" else 200

    def with_seed(self, seed: int) -> "NumericsConfig":
        return replace(self, seed=seed)
