"""Closed forms for the fixed-versus-fair coin study.

A double-tailed coin (parameter 0) and a fair coin (parameter 1/2) are
equally likely a priori; one toss is observed. The statistician guesses
the coin under 0-1 loss, the adversary guesses the toss under an
asymmetric loss where missing a sensitive outcome (1) costs ten times a
false alarm. The randomized-response family flips the released toss with
probability ``flip_prob``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .framework import FiniteGame, FiniteMechanism

__all__ = [
    "coin_game",
    "RandomizedResponse",
    "randomized_response_mechanism",
    "rr_bob_decision",
    "rr_eve_decision",
    "rr_risks",
    "rr_optimal_omega",
    "EVE_LOW_THRESHOLD",
    "EVE_HIGH_THRESHOLD",
    "WEIGHT_BREAKPOINT",
]

# Flip probabilities where the adversary's decision changes, and the
# weight above which randomisation beats the full release.
EVE_LOW_THRESHOLD = 3.0 / 13.0
EVE_HIGH_THRESHOLD = 10.0 / 13.0
WEIGHT_BREAKPOINT = 2.0 / 13.0

MISS_COST = 10.0     # adversary declares 0 while the toss was 1
FALSE_ALARM_COST = 1.0


def coin_game() -> FiniteGame:
    """The canonical finite game for the coin study."""
    return FiniteGame(
        parameter_values=(0.0, 0.5),
        prior=(0.5, 0.5),
        data_values=(0, 1),
        likelihood=((1.0, 0.0), (0.5, 0.5)),
        statistician_decisions=(0.0, 0.5),
        adversary_decisions=(0, 1),
        statistician_loss=((0.0, 1.0), (1.0, 0.0)),
        adversary_loss=((0.0, FALSE_ALARM_COST), (MISS_COST, 0.0)),
    )


@dataclass(frozen=True)
class RandomizedResponse:
    """Release the toss flipped with probability ``flip_prob``."""

    flip_prob: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.flip_prob <= 1.0:
            raise ValueError(f"flip probability must lie in [0, 1], got {self.flip_prob!r}")

    def mechanism(self) -> FiniteMechanism:
        w = self.flip_prob
        return FiniteMechanism((0, 1), np.array([[1.0 - w, w], [w, 1.0 - w]]))


def randomized_response_mechanism(flip_prob: float) -> FiniteMechanism:
    return RandomizedResponse(flip_prob).mechanism()


def rr_bob_decision(release: int, flip_prob: float):
    """Statistician's optimal guess of the coin given one released bit.

    Follows the signal when flips are the exception, reverses it when
    they are the rule; at flip_prob exactly 1/2 the stated boundary
    convention applies (either choice has equal risk there).
    """
    fair = (release == 1 and flip_prob >= 0.5) or (release == 0 and flip_prob < 0.5)
    return 0.5 if fair else 0.0


def rr_eve_decision(release: int, flip_prob: float) -> int:
    """Adversary's optimal guess of the toss given one released bit."""
    one = (release == 1 and flip_prob >= EVE_LOW_THRESHOLD) or \
          (release == 0 and flip_prob <= EVE_HIGH_THRESHOLD)
    return 1 if one else 0


def rr_risks(flip_prob: float) -> tuple[float, float]:
    """(inference risk, privacy risk) of the randomized response."""
    w = flip_prob
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"flip probability must lie in [0, 1], got {w!r}")
    inference = 0.25 + 0.5 * min(w, 1.0 - w)
    if w < EVE_LOW_THRESHOLD:
        privacy = 13.0 * w / 4.0
    elif w <= EVE_HIGH_THRESHOLD:
        privacy = 0.75
    else:
        privacy = 13.0 * (1.0 - w) / 4.0
    return inference, privacy


def rr_optimal_omega(weight: float) -> tuple[float, float]:
    """Best flip probability for a given privacy weight.

    The optimal set can be an interval or a pair; the smallest element is
    returned as the representative, with the attained combined risk.
    """
    if weight < 0.0:
        raise ValueError(f"weight must be nonnegative, got {weight!r}")
    if weight <= WEIGHT_BREAKPOINT:
        return 0.0, 0.25
    return EVE_LOW_THRESHOLD, 19.0 / 52.0 - 0.75 * weight
