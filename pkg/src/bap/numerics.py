"""Normal-distribution special functions, Gauss-Hermite quadrature and
seeded randomness.

Everything in this module is expressed as expectations against the
*standard normal* measure: quadrature rules are normalised so that the
weights sum to one, which makes ``sum(w * f(node))`` a plain expectation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "QuadratureRule",
    "RandomSource",
    "HistogramRegressor",
    "normal_cdf",
    "normal_quantile",
    "gauss_hermite",
    "expect_gaussian",
    "bayes_risk_01",
    "histogram_estimate",
]

_SQRT2 = math.sqrt(2.0)

MAX_QUADRATURE_ORDER = 512


def normal_cdf(x: float) -> float:
    """Standard normal CDF, clamped to [0, 1]."""
    if math.isnan(x):
        raise ValueError("normal_cdf requires a finite argument")
    p = 0.5 * math.erfc(-x / _SQRT2)
    return min(max(p, 0.0), 1.0)


# Rational approximation coefficients (central and tail regions) for the
# inverse normal CDF, refined below by one Newton step on normal_cdf.
_QUANT_A = (
    -3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00,
)
_QUANT_B = (
    -5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
    6.680131188771972e01, -1.328068155288572e01,
)
_QUANT_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00,
)
_QUANT_D = (
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
    3.754408661907416e00,
)


def normal_quantile(p: float) -> float:
    """Inverse of :func:`normal_cdf` on the open interval (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"normal_quantile requires 0 < p < 1, got {p!r}")
    a, b, c, d = _QUANT_A, _QUANT_B, _QUANT_C, _QUANT_D
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    elif p <= 1.0 - p_low:
        q = p - 0.5
        r = q * q
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    else:
        q = math.sqrt(-2.0 * math.log1p(-p))
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    # One Newton step against the high-accuracy CDF.
    err = 0.5 * math.erfc(-x / _SQRT2) - p
    dens = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    if dens > 0.0:
        x -= err / dens
    return x


@dataclass(frozen=True)
class QuadratureRule:
    """Expectation rule for the standard normal: E[f(Z)] ~= sum w_i f(z_i)."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != (self.order,) or weights.shape != (self.order,):
            raise ValueError("nodes/weights must both have length equal to order")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def expect(self, values: np.ndarray) -> float:
        """Weighted sum of per-node integrand values."""
        return float(np.dot(self.weights, values))


@lru_cache(maxsize=None)
def gauss_hermite(order: int) -> QuadratureRule:
    """Gauss-Hermite rule normalised as an expectation over N(0, 1).

    Nodes and weights are obtained by the Golub-Welsch eigen-decomposition
    of the symmetric Jacobi matrix of the (probabilists') Hermite
    polynomials; the first eigenvector components already give weights
    summing to one. Exact for polynomials up to degree 2*order - 1.
    """
    if not isinstance(order, int) or order < 1:
        raise ValueError(f"quadrature order must be a positive integer, got {order!r}")
    if order > MAX_QUADRATURE_ORDER:
        raise ValueError(f"quadrature order {order} exceeds cap {MAX_QUADRATURE_ORDER}")
    if order == 1:
        return QuadratureRule(np.zeros(1), np.ones(1), 1)
    off_diag = np.sqrt(np.arange(1.0, order))
    jacobi = np.diag(off_diag, 1) + np.diag(off_diag, -1)
    nodes, vectors = np.linalg.eigh(jacobi)
    weights = vectors[0] ** 2
    # eigh already sorts the nodes; symmetrise against roundoff
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    weights = weights / weights.sum()
    return QuadratureRule(nodes, weights, order)


def expect_gaussian(f, mean: float, variance: float, rule: QuadratureRule) -> float:
    """E[f(W)] for W ~ N(mean, variance), evaluated on the rule's nodes."""
    if not variance > 0.0:
        raise ValueError(f"variance must be positive, got {variance!r}")
    scale = math.sqrt(variance)
    values = [f(mean + scale * z) for z in rule.nodes]
    return float(np.dot(rule.weights, values))


def bayes_risk_01(p: float) -> float:
    """Minimal error probability min(p, 1-p) of a binary 0-1 decision."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p!r}")
    return min(p, 1.0 - p)


@dataclass(frozen=True)
class RandomSource:
    """Addressable randomness: (seed, stream) pins the draw sequence.

    Streams are implemented with numpy's counter-based Philox generator
    keyed through SeedSequence spawn keys, so equal (seed, stream) pairs
    reproduce bit-identical sequences and distinct stream ids give
    statistically independent streams.
    """

    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if not isinstance(v, int) or not 0 <= v < 2**64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(ss))

    def with_stream(self, stream: int) -> "RandomSource":
        return RandomSource(self.seed, stream)


@dataclass
class HistogramRegressor:
    """Binned regression estimate of P(success | value) with additive
    smoothing.

    ``bins`` interior cells cover [-half_width, half_width); values
    outside the range land in two overflow cells so that averages over
    recorded samples stay unbiased. Cell estimates are
    (successes + smoothing) / (total + 2 * smoothing).
    """

    bins: int
    half_width: float
    smoothing: float = 0.5
    successes: np.ndarray = field(init=False, repr=False)
    totals: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.bins, int) or self.bins < 1:
            raise ValueError(f"bins must be a positive integer, got {self.bins!r}")
        if not self.half_width > 0.0:
            raise ValueError(f"half_width must be positive, got {self.half_width!r}")
        if self.smoothing < 0.0:
            raise ValueError(f"smoothing must be nonnegative, got {self.smoothing!r}")
        # slots 1..bins are interior; 0 and bins+1 catch out-of-range values
        self.successes = np.zeros(self.bins + 2)
        self.totals = np.zeros(self.bins + 2)

    @property
    def scale(self) -> float:
        return self.bins / (2.0 * self.half_width)

    def cell_index(self, value: float) -> int:
        raw = math.floor((value + self.half_width) * self.scale)
        return min(max(int(raw), -1), self.bins) + 1

    def record(self, value: float, success: bool) -> None:
        i = self.cell_index(value)
        self.totals[i] += 1.0
        if success:
            self.successes[i] += 1.0

    def record_batch(self, values: np.ndarray, successes: np.ndarray) -> None:
        from . import kernels

        tot, suc = kernels.binned_counts(
            np.asarray(values, dtype=float),
            np.asarray(successes, dtype=np.uint8),
            self.half_width,
            self.bins,
        )
        self.totals += tot
        self.successes += suc

    def sample_count(self) -> int:
        return int(self.totals.sum())

    def cell_estimates(self) -> np.ndarray:
        denom = self.totals + 2.0 * self.smoothing
        with np.errstate(invalid="ignore"):
            est = (self.successes + self.smoothing) / denom
        return np.where(denom > 0.0, est, 0.5)

    def estimate(self, value: float) -> float:
        i = self.cell_index(value)
        denom = self.totals[i] + 2.0 * self.smoothing
        if denom == 0.0:
            return 0.5
        return float((self.successes[i] + self.smoothing) / denom)


def histogram_estimate(regressor: HistogramRegressor, value: float) -> float:
    """Smoothed success-rate estimate for the cell containing ``value``."""
    if regressor.sample_count() < 1:
        raise ValueError("histogram regressor has no recorded samples")
    return regressor.estimate(value)
