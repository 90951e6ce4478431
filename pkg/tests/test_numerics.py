import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bap.numerics import (
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

# Independently verified with a 40-digit erf series.
PHI_AT_ONE = 0.8413447460685429


class TestNormalCdf:
    def test_center(self):
        assert normal_cdf(0.0) == 0.5

    def test_tail_limit(self):
        assert abs(normal_cdf(10.0) - 1.0) <= 1e-15
        assert normal_cdf(-40.0) == 0.0

    def test_reference_value(self):
        assert abs(normal_cdf(1.0) - PHI_AT_ONE) <= 1e-15

    def test_monotone(self):
        xs = np.linspace(-8.0, 8.0, 400)
        values = [normal_cdf(float(x)) for x in xs]
        assert all(a <= b for a, b in zip(values, values[1:]))

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            normal_cdf(float("nan"))


class TestNormalQuantile:
    def test_median(self):
        assert normal_quantile(0.5) == pytest.approx(0.0, abs=1e-15)

    def test_inverse_of_reference(self):
        assert normal_quantile(PHI_AT_ONE) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("x", [-3.0, -1.0, 0.0, 2.0])
    def test_round_trip(self, x):
        assert normal_quantile(normal_cdf(x)) == pytest.approx(x, abs=1e-9)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.1])
    def test_domain_errors(self, p):
        with pytest.raises(ValueError):
            normal_quantile(p)

    def test_residual_after_refinement(self):
        for p in np.geomspace(1e-10, 0.5, 50):
            assert abs(normal_cdf(normal_quantile(float(p))) - p) <= 1e-12

    def test_mutual_inverse_across_range(self):
        for p in np.linspace(1e-10, 1 - 1e-10, 101):
            x = normal_quantile(float(p))
            assert normal_quantile(normal_cdf(x)) == pytest.approx(x, abs=1e-8)


def _analytic_moment(k: int) -> float:
    if k % 2 == 1:
        return 0.0
    return float(np.prod(np.arange(k - 1, 0, -2, dtype=float))) if k else 1.0


class TestGaussHermite:
    def test_single_node(self):
        rule = gauss_hermite(1)
        assert rule.nodes.tolist() == [0.0]
        assert rule.weights.tolist() == [1.0]

    def test_fourth_moment_order_five(self):
        rule = gauss_hermite(5)
        assert np.dot(rule.weights, rule.nodes**4) == pytest.approx(3.0, abs=1e-10)

    def test_ninth_moment_order_five(self):
        rule = gauss_hermite(5)
        assert np.dot(rule.weights, rule.nodes**9) == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("order", [0, -3, 513])
    def test_order_bounds(self, order):
        with pytest.raises(ValueError):
            gauss_hermite(order)

    @pytest.mark.parametrize("order", [2, 5, 10, 20, 80])
    def test_rule_invariants(self, order):
        rule = gauss_hermite(order)
        assert abs(rule.weights.sum() - 1.0) <= 1e-12
        assert np.all(np.abs(rule.nodes + rule.nodes[::-1]) <= 1e-12)
        assert abs(np.dot(rule.weights, rule.nodes)) <= 1e-10
        assert abs(np.dot(rule.weights, rule.nodes**2) - 1.0) <= 1e-10

    @pytest.mark.parametrize("order", [2, 5, 10, 20])
    def test_moment_exactness_to_degree(self, order):
        # compensated summation, and odd moments judged against the
        # cancellation scale sum w|z|^k: at degree 37 the cancelling terms
        # reach 1e19, where a fixed 1e-10 slack is below one ulp
        rule = gauss_hermite(order)
        for k in range(2 * order):
            got = math.fsum(rule.weights * rule.nodes**k)
            want = _analytic_moment(k)
            if k % 2 == 1:
                scale = math.fsum(rule.weights * np.abs(rule.nodes) ** k)
                assert abs(got) <= 1e-10 * max(1.0, scale)
            else:
                assert got == pytest.approx(want, rel=1e-9)

    def test_rule_shape_validation(self):
        with pytest.raises(ValueError):
            QuadratureRule(np.zeros(3), np.ones(2), 3)


class TestExpectGaussian:
    def test_linearity(self):
        rule = gauss_hermite(20)
        assert expect_gaussian(lambda t: t, 2.0, 5.0, rule) == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("order", [40, 80])
    def test_uniform_fifth_moment(self, order):
        # Phi(-T) is uniform for standard normal T, so E equals 1/6
        rule = gauss_hermite(order)
        got = expect_gaussian(lambda t: normal_cdf(-t) ** 5, 0.0, 1.0, rule)
        assert got == pytest.approx(1.0 / 6.0, abs=1e-6)

    def test_constant(self):
        rule = gauss_hermite(7)
        assert expect_gaussian(lambda t: 7.0, 0.3, 2.0, rule) == 7.0

    def test_rejects_nonpositive_variance(self):
        rule = gauss_hermite(5)
        with pytest.raises(ValueError):
            expect_gaussian(lambda t: t, 0.0, 0.0, rule)


class TestBayesRisk01:
    @pytest.mark.parametrize("p,want", [(0.5, 0.5), (0.0, 0.0), (1.0, 0.0),
                                        (5.0 / 6.0, 1.0 / 6.0)])
    def test_values(self, p, want):
        assert bayes_risk_01(p) == pytest.approx(want, abs=1e-15)

    @pytest.mark.parametrize("p", [-0.01, 1.01])
    def test_rejects_out_of_range(self, p):
        with pytest.raises(ValueError):
            bayes_risk_01(p)

    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_symmetry(self, p):
        assert bayes_risk_01(p) == pytest.approx(bayes_risk_01(1.0 - p), abs=1e-15)


class TestRandomSource:
    def test_equal_addresses_reproduce(self):
        a = RandomSource(12345, 7).generator().standard_normal(1000)
        b = RandomSource(12345, 7).generator().standard_normal(1000)
        assert np.array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = RandomSource(12345, 1).generator().standard_normal(100)
        b = RandomSource(12345, 2).generator().standard_normal(100)
        assert not np.array_equal(a, b)

    @pytest.mark.parametrize("bad", [-1, 2**64, 1.5])
    def test_validation(self, bad):
        with pytest.raises(ValueError):
            RandomSource(bad)

    def test_with_stream(self):
        src = RandomSource(9).with_stream(4)
        assert (src.seed, src.stream) == (9, 4)


class TestHistogramRegressor:
    def test_empty_cell_returns_prior(self):
        reg = HistogramRegressor(10, 1.0, smoothing=0.5)
        reg.record(0.95, True)  # populate so estimates are defined
        assert reg.estimate(-0.95) == 0.5

    def test_all_successes(self):
        reg = HistogramRegressor(4, 2.0, smoothing=0.5)
        for _ in range(10):
            reg.record(0.1, True)
        assert histogram_estimate(reg, 0.1) == pytest.approx(10.5 / 11.0)

    def test_partial_successes(self):
        reg = HistogramRegressor(4, 2.0, smoothing=0.5)
        for i in range(9):
            reg.record(-1.7, i < 3)
        assert histogram_estimate(reg, -1.7) == pytest.approx(3.5 / 10.0)

    def test_requires_samples(self):
        reg = HistogramRegressor(4, 2.0)
        with pytest.raises(ValueError):
            histogram_estimate(reg, 0.0)

    def test_overflow_cells_count(self):
        reg = HistogramRegressor(4, 1.0)
        reg.record(5.0, True)
        reg.record(-5.0, False)
        reg.record(0.0, True)
        assert reg.sample_count() == 3
        assert reg.totals[0] == 1.0 and reg.totals[-1] == 1.0

    def test_every_sample_lands_in_one_cell(self):
        rng = np.random.default_rng(0)
        values = rng.normal(0.0, 3.0, size=5000)
        reg = HistogramRegressor(50, 2.0)
        reg.record_batch(values, np.ones(5000, dtype=bool))
        assert reg.sample_count() == 5000

    def test_estimates_interior_when_smoothed(self):
        rng = np.random.default_rng(1)
        reg = HistogramRegressor(20, 1.0, smoothing=0.5)
        reg.record_batch(rng.uniform(-1, 1, 1000), rng.random(1000) < 0.9)
        est = reg.cell_estimates()
        assert np.all(est > 0.0) and np.all(est < 1.0)

    def test_batch_matches_scalar_recording(self):
        rng = np.random.default_rng(2)
        values = rng.normal(0.0, 1.5, size=400)
        hits = rng.random(400) < 0.3
        batch = HistogramRegressor(16, 2.0)
        batch.record_batch(values, hits)
        scalar = HistogramRegressor(16, 2.0)
        for v, s in zip(values, hits):
            scalar.record(float(v), bool(s))
        assert np.array_equal(batch.totals, scalar.totals)
        assert np.array_equal(batch.successes, scalar.successes)

    def test_converges_to_within_cell_rate(self):
        # smoothing vanishes against the empirical rate as samples grow
        rng = np.random.default_rng(3)
        values = rng.uniform(-1.0, 1.0, size=200_000)
        prob = 0.5 + 0.4 * np.sin(values * 2.0)
        hits = rng.random(values.size) < prob
        reg = HistogramRegressor(20, 1.0, smoothing=0.5)
        reg.record_batch(values, hits)
        for cell in range(1, 21):
            n = reg.totals[cell]
            if n < 100:
                continue
            empirical = reg.successes[cell] / n
            se = math.sqrt(max(empirical * (1.0 - empirical), 1e-12) / n)
            est = (reg.successes[cell] + 0.5) / (n + 1.0)
            assert abs(est - empirical) <= 2.0 * se
