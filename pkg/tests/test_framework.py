import itertools

import numpy as np
import pytest

from bap.cointoss import coin_game, randomized_response_mechanism
from bap.framework import (
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
    game_from_dict,
    game_to_dict,
    mechanism_from_dict,
    mechanism_to_dict,
    posterior_over_data,
)

THIRD = 1.0 / 3.0


def random_game(rng: np.random.Generator) -> FiniteGame:
    nt = int(rng.integers(2, 4))
    nx = int(rng.integers(2, 4))
    nb = int(rng.integers(2, 4))
    ne = int(rng.integers(2, 4))
    prior = rng.random(nt) + 0.1
    prior /= prior.sum()
    lik = rng.random((nt, nx)) + 0.05
    lik /= lik.sum(axis=1, keepdims=True)
    return FiniteGame(
        parameter_values=tuple(range(nt)),
        prior=prior,
        data_values=tuple(range(nx)),
        likelihood=lik,
        statistician_decisions=tuple(range(nb)),
        adversary_decisions=tuple(range(ne)),
        statistician_loss=rng.random((nt, nb)) * 3.0,
        adversary_loss=rng.random((nx, ne)) * 3.0,
    )


def random_mechanism(rng: np.random.Generator, game: FiniteGame, nh: int) -> FiniteMechanism:
    table = rng.random((len(game.data_values), nh)) + 0.05
    table /= table.sum(axis=1, keepdims=True)
    return FiniteMechanism(tuple(range(nh)), table)


class TestPosteriorOverData:
    def test_full_release_collapses(self):
        game = coin_game()
        mech = FiniteMechanism.full_release(game)
        assert posterior_over_data(game, mech, 0).tolist() == [1.0, 0.0]
        assert posterior_over_data(game, mech, 1).tolist() == [0.0, 1.0]

    def test_null_release_is_prior_predictive(self):
        game = coin_game()
        mech = FiniteMechanism.null_release(game)
        post = posterior_over_data(game, mech, "†")
        assert post == pytest.approx([0.75, 0.25])

    def test_randomized_response_quarter(self):
        # flip probability 1/4, release 1: hand Bayes gives exactly 1/2
        game = coin_game()
        mech = randomized_response_mechanism(0.25)
        post = posterior_over_data(game, mech, 1)
        assert post == pytest.approx([0.5, 0.5], abs=1e-15)

    def test_zero_mass_release_rejected(self):
        game = coin_game()
        mech = FiniteMechanism((0, 1, "never"),
                               [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        with pytest.raises(ZeroMassReleaseError):
            posterior_over_data(game, mech, "never")


class TestBayesDecision:
    def test_point_mass_zero_one_loss(self):
        decision, loss = bayes_decision([0.0, 1.0], [[0, 1], [1, 0]], ("a", "b"))
        assert decision == "b" and loss == 0.0

    def test_coin_adversary_under_prior(self):
        game = coin_game()
        decision, loss = bayes_decision([0.75, 0.25], game.adversary_loss,
                                        game.adversary_decisions)
        assert decision == 1
        assert loss == pytest.approx(0.75)

    def test_tie_breaks_to_lowest_index(self):
        decision, loss = bayes_decision([0.5, 0.5], [[0, 1], [1, 0]], (0.0, 0.5))
        assert decision == 0.0 and loss == pytest.approx(0.5)

    def test_empty_decisions_rejected(self):
        with pytest.raises(ValueError):
            bayes_decision([1.0], [[1]], ())

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            bayes_decision([0.5, 0.5], [[0, 1]], ("a", "b"))


class TestEvaluateMechanism:
    def test_coin_full(self):
        game = coin_game()
        t = evaluate_mechanism(game, FiniteMechanism.full_release(game), RiskWeights(THIRD))
        assert (t.inference, t.privacy, t.combined) == pytest.approx((0.25, 0.0, 0.25), abs=1e-12)

    def test_coin_null(self):
        game = coin_game()
        t = evaluate_mechanism(game, FiniteMechanism.null_release(game), RiskWeights(THIRD))
        assert (t.inference, t.privacy, t.combined) == pytest.approx((0.5, 0.75, 0.25), abs=1e-12)

    def test_coin_randomized_at_adversary_threshold(self):
        game = coin_game()
        t = evaluate_mechanism(game, randomized_response_mechanism(3.0 / 13.0),
                               RiskWeights(THIRD))
        assert t.inference == pytest.approx(19.0 / 52.0, abs=1e-12)
        assert t.privacy == pytest.approx(0.75, abs=1e-12)
        assert t.combined == pytest.approx(3.0 / 26.0, abs=1e-12)

    def test_incompatible_mechanism_rejected(self):
        game = coin_game()
        mech = FiniteMechanism((0,), [[1.0], [1.0], [1.0]])
        with pytest.raises(GameValidationError):
            evaluate_mechanism(game, mech, RiskWeights(1.0))

    def test_risks_bounded_by_loss_range(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            game = random_game(rng)
            mech = random_mechanism(rng, game, int(rng.integers(1, 5)))
            t = evaluate_mechanism(game, mech, RiskWeights(0.7))
            assert game.statistician_loss.min() - 1e-12 <= t.inference \
                <= game.statistician_loss.max() + 1e-12
            assert game.adversary_loss.min() - 1e-12 <= t.privacy \
                <= game.adversary_loss.max() + 1e-12

    def test_relabeling_invariance(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            game = random_game(rng)
            mech = random_mechanism(rng, game, 3)
            perm = rng.permutation(3)
            shuffled = FiniteMechanism(tuple(mech.alphabet[i] for i in perm),
                                       mech.table[:, perm])
            a = evaluate_mechanism(game, mech, RiskWeights(0.4))
            b = evaluate_mechanism(game, shuffled, RiskWeights(0.4))
            assert a.inference == pytest.approx(b.inference, abs=1e-12)
            assert a.privacy == pytest.approx(b.privacy, abs=1e-12)

    def test_null_release_matches_prior_decisions(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            game = random_game(rng)
            t = evaluate_mechanism(game, FiniteMechanism.null_release(game),
                                   RiskWeights(1.0))
            predictive = game.prior_predictive()
            _, stat_loss = bayes_decision(game.parameter_posterior() @ predictive,
                                          game.statistician_loss,
                                          game.statistician_decisions)
            _, adv_loss = bayes_decision(predictive, game.adversary_loss,
                                         game.adversary_decisions)
            assert t.inference == pytest.approx(stat_loss, abs=1e-12)
            assert t.privacy == pytest.approx(adv_loss, abs=1e-12)

    def test_full_release_adversary_risk_is_pointwise_minimum(self):
        rng = np.random.default_rng(14)
        for _ in range(10):
            game = random_game(rng)
            t = evaluate_mechanism(game, FiniteMechanism.full_release(game),
                                   RiskWeights(1.0))
            want = float(np.dot(game.prior_predictive(),
                                game.adversary_loss.min(axis=1)))
            assert t.privacy == pytest.approx(want, abs=1e-12)

    def test_merging_posterior_equivalent_data_weakly_helps(self):
        # data values 1 and 2 induce the same parameter posterior, so
        # merging them keeps the statistician's risk and can only raise
        # the adversary's
        game = FiniteGame(
            parameter_values=("a", "b"),
            prior=(0.5, 0.5),
            data_values=(0, 1, 2),
            likelihood=((0.5, 0.25, 0.25), (0.2, 0.4, 0.4)),
            statistician_decisions=("a", "b"),
            adversary_decisions=(0, 1, 2),
            statistician_loss=((0.0, 1.0), (1.0, 0.0)),
            adversary_loss=((0.0, 1.0, 1.0), (1.0, 0.0, 1.0), (1.0, 1.0, 0.0)),
        )
        full = FiniteMechanism.full_release(game)
        merged = FiniteMechanism((0, "12"), [[1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
        t_full = evaluate_mechanism(game, full, RiskWeights(1.0))
        t_merged = evaluate_mechanism(game, merged, RiskWeights(1.0))
        assert t_merged.inference == pytest.approx(t_full.inference, abs=1e-12)
        assert t_merged.privacy >= t_full.privacy - 1e-12

    def test_tie_break_choice_does_not_change_risks(self):
        # under the null release the statistician is indifferent; flipping
        # the decision order flips the tie-break but not the risks
        game = coin_game()
        flipped = FiniteGame(
            parameter_values=game.parameter_values,
            prior=game.prior,
            data_values=game.data_values,
            likelihood=game.likelihood,
            statistician_decisions=game.statistician_decisions[::-1],
            adversary_decisions=game.adversary_decisions,
            statistician_loss=game.statistician_loss[:, ::-1],
            adversary_loss=game.adversary_loss,
        )
        null = FiniteMechanism.null_release(game)
        a = evaluate_mechanism(game, null, RiskWeights(THIRD))
        b = evaluate_mechanism(flipped, null, RiskWeights(THIRD))
        assert a.inference == pytest.approx(b.inference, abs=1e-15)
        assert a.privacy == pytest.approx(b.privacy, abs=1e-15)


class TestCalibrateLambda:
    def test_coin_value(self):
        assert calibrate_lambda((0.25, 0.0), (0.5, 0.75)) == pytest.approx(THIRD, abs=1e-15)

    def test_undefined_when_adversary_indifferent(self):
        with pytest.raises(CalibrationError):
            calibrate_lambda((0.2, 0.3), (0.5, 0.3))


class TestRiskTypes:
    def test_weights_reject_negative(self):
        with pytest.raises(ValueError):
            RiskWeights(-0.1)

    def test_triple_consistency_enforced(self):
        with pytest.raises(ValueError):
            RiskTriple(0.3, 0.1, 0.0, 1.0)

    def test_triple_of(self):
        t = RiskTriple.of(0.3, 0.1, 0.5)
        assert t.combined == pytest.approx(0.25)


class TestValidation:
    def test_prior_must_sum_to_one(self):
        with pytest.raises(GameValidationError, match="prior"):
            FiniteGame(("a",), (0.9,), (0,), ((1.0,),), ("d",), ("e",),
                       ((0.0,),), ((0.0,),))

    def test_likelihood_row_message_names_row(self):
        with pytest.raises(GameValidationError, match=r"likelihood\[0\]"):
            FiniteGame(("a", "b"), (0.5, 0.5), (0, 1),
                       ((0.6, 0.3), (0.5, 0.5)),
                       ("d",), ("e",), ((0.0,), (0.0,)), ((0.0,), (0.0,)))

    def test_negative_loss_rejected(self):
        with pytest.raises(GameValidationError, match="adversary_loss"):
            FiniteGame(("a",), (1.0,), (0,), ((1.0,),), ("d",), ("e",),
                       ((0.0,),), ((-1.0,),))

    def test_mechanism_rows_stochastic(self):
        with pytest.raises(GameValidationError, match=r"table\[1\]"):
            FiniteMechanism((0, 1), [[0.5, 0.5], [0.5, 0.4]])


class TestJsonDocuments:
    def test_game_round_trip(self):
        game = coin_game()
        doc = game_to_dict(game)
        back = game_from_dict(doc)
        assert game_to_dict(back) == doc

    def test_mechanism_round_trip_with_pair_labels(self):
        mech = FiniteMechanism(((0.0, 1), (0.5, 1)), [[0.3, 0.7], [1.0, 0.0]])
        back = mechanism_from_dict(mechanism_to_dict(mech))
        assert back.alphabet == mech.alphabet
        assert np.array_equal(back.table, mech.table)

    def test_missing_field_reported_with_path(self):
        doc = game_to_dict(coin_game())
        del doc["likelihood"]
        with pytest.raises(GameValidationError, match="likelihood"):
            game_from_dict(doc)

    def test_unknown_field_rejected(self):
        doc = game_to_dict(coin_game())
        doc["extra"] = 1
        with pytest.raises(GameValidationError, match="extra"):
            game_from_dict(doc)

    def test_bad_row_sum_reported_with_index(self):
        doc = game_to_dict(coin_game())
        doc["likelihood"] = [[0.6, 0.3], [0.5, 0.5]]
        with pytest.raises(GameValidationError, match=r"likelihood\[0\]"):
            game_from_dict(doc)


def test_adversary_indifferent_game_has_constant_privacy_risk():
    # identical loss rows: every decision costs the same, any mechanism
    # leaves the adversary at that constant
    game = FiniteGame(("a", "b"), (0.5, 0.5), (0, 1),
                      ((0.7, 0.3), (0.4, 0.6)),
                      ("d0", "d1"), ("e0", "e1"),
                      ((0.0, 1.0), (1.0, 0.0)),
                      ((0.25, 0.25), (0.25, 0.25)))
    rng = np.random.default_rng(15)
    for nh in (1, 2, 4):
        mech = random_mechanism(rng, game, nh)
        t = evaluate_mechanism(game, mech, RiskWeights(1.0))
        assert t.privacy == pytest.approx(0.25, abs=1e-12)
