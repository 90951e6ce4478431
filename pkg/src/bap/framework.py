"""Finite release games: priors, losses, mechanisms and integrated risks.

The central object is :class:`FiniteGame`, a fully enumerated decision
problem between a statistician (who infers the parameter) and an
adversary (who infers the realised data). A :class:`FiniteMechanism`
maps data values to a distribution over release labels;
:func:`evaluate_mechanism` scores it by exact enumeration, which doubles
as the brute-force oracle for the closed-form and LP modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

__all__ = [
    "GameValidationError",
    "ZeroMassReleaseError",
    "CalibrationError",
    "FiniteGame",
    "FiniteMechanism",
    "RiskWeights",
    "RiskTriple",
    "NULL_SYMBOL",
    "posterior_over_data",
    "bayes_decision",
    "evaluate_mechanism",
    "calibrate_lambda",
    "game_to_dict",
    "game_from_dict",
    "mechanism_to_dict",
    "mechanism_from_dict",
]

NULL_SYMBOL = "†"  # the information-free release label

_ATOL = 1e-12


class GameValidationError(ValueError):
    """A game or mechanism document violates its schema; message carries
    the offending field path."""


class ZeroMassReleaseError(ValueError):
    """Conditioning on a release label with zero marginal probability."""


class CalibrationError(ValueError):
    """Weight calibration undefined: the two reference mechanisms give
    the adversary identical risk."""


def _as_matrix(name: str, rows: Any, nrows: int, ncols: int) -> np.ndarray:
    m = np.asarray(rows, dtype=float)
    if m.shape != (nrows, ncols):
        raise GameValidationError(f"{name}: expected shape {(nrows, ncols)}, got {m.shape}")
    if not np.all(np.isfinite(m)):
        bad = np.argwhere(~np.isfinite(m))[0]
        raise GameValidationError(f"{name}[{bad[0]}][{bad[1]}]: entry is not finite")
    return m


def _check_rows_stochastic(name: str, m: np.ndarray) -> None:
    if np.any(m < -_ATOL):
        i, j = np.argwhere(m < -_ATOL)[0]
        raise GameValidationError(f"{name}[{i}][{j}]: negative entry {m[i, j]!r}")
    sums = m.sum(axis=1)
    bad = np.where(np.abs(sums - 1.0) > _ATOL)[0]
    if bad.size:
        i = int(bad[0])
        raise GameValidationError(f"{name}[{i}]: row sums to {sums[i]!r}, expected 1")


@dataclass(frozen=True)
class FiniteGame:
    """Enumerated prior, likelihood and loss tables for both agents."""

    parameter_values: tuple
    prior: np.ndarray
    data_values: tuple
    likelihood: np.ndarray            # (parameters, data)
    statistician_decisions: tuple
    adversary_decisions: tuple
    statistician_loss: np.ndarray     # (parameters, statistician decisions)
    adversary_loss: np.ndarray        # (data, adversary decisions)

    def __post_init__(self) -> None:
        params = tuple(self.parameter_values)
        data = tuple(self.data_values)
        dec_b = tuple(self.statistician_decisions)
        dec_e = tuple(self.adversary_decisions)
        if not params or not data or not dec_b or not dec_e:
            raise GameValidationError("all label lists must be nonempty")

        prior = np.asarray(self.prior, dtype=float)
        if prior.shape != (len(params),):
            raise GameValidationError(
                f"prior: expected length {len(params)}, got shape {prior.shape}")
        if np.any(prior < -_ATOL):
            raise GameValidationError(
                f"prior[{int(np.argmin(prior))}]: negative weight")
        if abs(prior.sum() - 1.0) > _ATOL:
            raise GameValidationError(f"prior: weights sum to {prior.sum()!r}, expected 1")

        lik = _as_matrix("likelihood", self.likelihood, len(params), len(data))
        _check_rows_stochastic("likelihood", lik)

        loss_b = _as_matrix("statistician_loss", self.statistician_loss,
                            len(params), len(dec_b))
        loss_e = _as_matrix("adversary_loss", self.adversary_loss, len(data), len(dec_e))
        for name, loss in (("statistician_loss", loss_b), ("adversary_loss", loss_e)):
            if np.any(loss < 0.0):
                i, j = np.argwhere(loss < 0.0)[0]
                raise GameValidationError(f"{name}[{i}][{j}]: losses must be nonnegative")

        for arr in (prior, lik, loss_b, loss_e):
            arr.setflags(write=False)
        object.__setattr__(self, "parameter_values", params)
        object.__setattr__(self, "data_values", data)
        object.__setattr__(self, "statistician_decisions", dec_b)
        object.__setattr__(self, "adversary_decisions", dec_e)
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "likelihood", lik)
        object.__setattr__(self, "statistician_loss", loss_b)
        object.__setattr__(self, "adversary_loss", loss_e)

    def prior_predictive(self) -> np.ndarray:
        """Marginal distribution of the data under the prior."""
        return self.prior @ self.likelihood

    def parameter_posterior(self) -> np.ndarray:
        """Matrix of posteriors pi(parameter | data), one column per data
        value; columns with zero marginal mass are left as zeros."""
        joint = self.prior[:, None] * self.likelihood
        marginal = joint.sum(axis=0)
        out = np.zeros_like(joint)
        positive = marginal > 0.0
        out[:, positive] = joint[:, positive] / marginal[positive]
        return out


@dataclass(frozen=True)
class FiniteMechanism:
    """Row-stochastic release kernel q(release | data)."""

    alphabet: tuple
    table: np.ndarray                 # (data, alphabet)

    def __post_init__(self) -> None:
        alphabet = tuple(self.alphabet)
        if not alphabet:
            raise GameValidationError("mechanism alphabet must be nonempty")
        table = np.asarray(self.table, dtype=float)
        if table.ndim != 2 or table.shape[1] != len(alphabet):
            raise GameValidationError(
                f"table: expected {len(alphabet)} columns, got shape {table.shape}")
        if np.any(table > 1.0 + _ATOL):
            i, j = np.argwhere(table > 1.0 + _ATOL)[0]
            raise GameValidationError(f"table[{i}][{j}]: entry above 1")
        _check_rows_stochastic("table", table)
        table.setflags(write=False)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "table", table)

    @classmethod
    def full_release(cls, game: FiniteGame) -> "FiniteMechanism":
        """Release the data value itself."""
        return cls(game.data_values, np.eye(len(game.data_values)))

    @classmethod
    def null_release(cls, game: FiniteGame, symbol=NULL_SYMBOL) -> "FiniteMechanism":
        """Release a constant, information-free symbol."""
        return cls((symbol,), np.ones((len(game.data_values), 1)))

    def release_index(self, release) -> int:
        try:
            return self.alphabet.index(release)
        except ValueError:
            raise GameValidationError(
                f"release label {release!r} not in alphabet") from None


@dataclass(frozen=True)
class RiskWeights:
    """Relative weight of privacy against inference quality."""

    privacy_weight: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.privacy_weight) and self.privacy_weight >= 0.0):
            raise ValueError(
                f"privacy weight must be finite and nonnegative, got {self.privacy_weight!r}")


@dataclass(frozen=True)
class RiskTriple:
    """Integrated risks of one mechanism: statistician, adversary and
    the designer's combination inference - weight * privacy."""

    inference: float
    privacy: float
    combined: float
    weight: float

    def __post_init__(self) -> None:
        expected = self.inference - self.weight * self.privacy
        scale = max(1.0, abs(self.inference) + abs(self.weight * self.privacy))
        if abs(self.combined - expected) > _ATOL * scale:
            raise ValueError(
                f"combined risk {self.combined!r} inconsistent with components "
                f"(expected {expected!r})")

    @classmethod
    def of(cls, inference: float, privacy: float, weight: float) -> "RiskTriple":
        inference, privacy, weight = float(inference), float(privacy), float(weight)
        return cls(inference, privacy, inference - weight * privacy, weight)


def posterior_over_data(game: FiniteGame, mechanism: FiniteMechanism, release) -> np.ndarray:
    """Distribution of the data given an observed release label."""
    h = mechanism.release_index(release)
    weights = mechanism.table[:, h] * game.prior_predictive()
    total = weights.sum()
    if total <= 0.0:
        raise ZeroMassReleaseError(
            f"release {release!r} has zero probability under the prior predictive")
    return weights / total


def bayes_decision(posterior: Sequence[float], loss_table: np.ndarray,
                   decisions: Sequence) -> tuple[Any, float]:
    """Decision minimising posterior expected loss, ties to the lowest
    index. Returns (decision label, minimal expected loss)."""
    decisions = tuple(decisions)
    if not decisions:
        raise ValueError("decision set must be nonempty")
    posterior = np.asarray(posterior, dtype=float)
    loss_table = np.asarray(loss_table, dtype=float)
    if loss_table.shape != (posterior.shape[0], len(decisions)):
        raise ValueError(
            f"loss table shape {loss_table.shape} incompatible with "
            f"{posterior.shape[0]} states x {len(decisions)} decisions")
    costs = posterior @ loss_table
    best = int(np.argmin(costs))
    return decisions[best], float(costs[best])


def evaluate_mechanism(game: FiniteGame, mechanism: FiniteMechanism,
                       weights: RiskWeights) -> RiskTriple:
    """Integrated risks of a mechanism by exact enumeration.

    Sums both agents' optimal posterior losses over every release label
    with positive marginal mass; labels the mechanism can never emit are
    skipped rather than producing 0/0 posteriors.
    """
    if mechanism.table.shape[0] != len(game.data_values):
        raise GameValidationError(
            f"mechanism table has {mechanism.table.shape[0]} rows; "
            f"game has {len(game.data_values)} data values")
    predictive = game.prior_predictive()
    param_post = game.parameter_posterior()     # (parameters, data)

    inference = 0.0
    privacy = 0.0
    for h in range(len(mechanism.alphabet)):
        data_weights = mechanism.table[:, h] * predictive
        mass = data_weights.sum()
        if mass <= 0.0:
            continue
        data_post = data_weights / mass
        theta_post = param_post @ data_post
        _, stat_loss = bayes_decision(theta_post, game.statistician_loss,
                                      game.statistician_decisions)
        _, adv_loss = bayes_decision(data_post, game.adversary_loss,
                                     game.adversary_decisions)
        inference += mass * stat_loss
        privacy += mass * adv_loss
    return RiskTriple.of(inference, privacy, weights.privacy_weight)


def calibrate_lambda(full: Sequence[float], null: Sequence[float]) -> float:
    """Privacy weight placing the full and null releases at indifference.

    Arguments are (inference risk, privacy risk) pairs for the two
    reference mechanisms.
    """
    rb_full, re_full = float(full[0]), float(full[1])
    rb_null, re_null = float(null[0]), float(null[1])
    denom = re_null - re_full
    if denom == 0.0:
        raise CalibrationError(
            "calibration undefined: adversary risk identical under full and null releases")
    return (rb_null - rb_full) / denom


# --- JSON document mapping -------------------------------------------------

_GAME_FIELDS = (
    "parameter_values", "prior", "data_values", "likelihood",
    "statistician_decisions", "adversary_decisions",
    "statistician_loss", "adversary_loss",
)


def _require(doc: dict, key: str) -> Any:
    if key not in doc:
        raise GameValidationError(f"{key}: missing required field")
    return doc[key]


def game_to_dict(game: FiniteGame) -> dict:
    return {
        "parameter_values": list(game.parameter_values),
        "prior": game.prior.tolist(),
        "data_values": list(game.data_values),
        "likelihood": game.likelihood.tolist(),
        "statistician_decisions": list(game.statistician_decisions),
        "adversary_decisions": list(game.adversary_decisions),
        "statistician_loss": game.statistician_loss.tolist(),
        "adversary_loss": game.adversary_loss.tolist(),
    }


def game_from_dict(doc: dict) -> FiniteGame:
    if not isinstance(doc, dict):
        raise GameValidationError("game document must be a JSON object")
    unknown = set(doc) - set(_GAME_FIELDS)
    if unknown:
        raise GameValidationError(f"{sorted(unknown)[0]}: unknown field")
    return FiniteGame(*(_require(doc, k) for k in _GAME_FIELDS))


def mechanism_to_dict(mechanism: FiniteMechanism) -> dict:
    return {
        "alphabet": [list(a) if isinstance(a, tuple) else a for a in mechanism.alphabet],
        "table": mechanism.table.tolist(),
    }


def mechanism_from_dict(doc: dict) -> FiniteMechanism:
    if not isinstance(doc, dict):
        raise GameValidationError("mechanism document must be a JSON object")
    unknown = set(doc) - {"alphabet", "table"}
    if unknown:
        raise GameValidationError(f"{sorted(unknown)[0]}: unknown field")
    alphabet = [tuple(a) if isinstance(a, list) else a for a in _require(doc, "alphabet")]
    return FiniteMechanism(tuple(alphabet), _require(doc, "table"))
