"""Globally optimal mechanisms for finite games via linear programming.

A mechanism whose output directly encodes the pair of agent decisions is
parameterised by the joint probabilities rho[(i, j), k] of emitting the
decision pair (i, j) while the data equals k. :func:`build_mechanism_lp`
assembles the cost vector and the simplex/optimality constraints over
these variables, and :func:`simplex_solve` is a small dense two-phase
simplex (Bland's rule) adequate for the tiny programs this produces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .framework import (
    FiniteGame,
    FiniteMechanism,
    RiskTriple,
    RiskWeights,
    evaluate_mechanism,
)

__all__ = [
    "LinearProgram",
    "LPSolution",
    "MechanismLP",
    "LPError",
    "InfeasibleProgramError",
    "simplex_solve",
    "build_mechanism_lp",
    "solve_optimal_mechanism",
    "format_mechanism_lp",
]

PIVOT_TOL = 1e-9


class LPError(ValueError):
    """Malformed linear program."""


class InfeasibleProgramError(RuntimeError):
    """No feasible point exists (or the program is unbounded) where the
    caller requires an optimum."""


@dataclass(frozen=True)
class LinearProgram:
    """min cost . x  s.t.  a_eq x = b_eq,  a_le x <= b_le,  x >= 0."""

    cost: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    a_le: np.ndarray
    b_le: np.ndarray

    def __post_init__(self) -> None:
        cost = np.atleast_1d(np.asarray(self.cost, dtype=float))
        n = cost.shape[0]
        a_eq = np.asarray(self.a_eq, dtype=float).reshape(-1, n) \
            if np.size(self.a_eq) else np.zeros((0, n))
        a_le = np.asarray(self.a_le, dtype=float).reshape(-1, n) \
            if np.size(self.a_le) else np.zeros((0, n))
        b_eq = np.atleast_1d(np.asarray(self.b_eq, dtype=float)) \
            if np.size(self.b_eq) else np.zeros(0)
        b_le = np.atleast_1d(np.asarray(self.b_le, dtype=float)) \
            if np.size(self.b_le) else np.zeros(0)
        if a_eq.shape[0] != b_eq.shape[0]:
            raise LPError(f"{a_eq.shape[0]} equality rows but {b_eq.shape[0]} right-hand sides")
        if a_le.shape[0] != b_le.shape[0]:
            raise LPError(f"{a_le.shape[0]} inequality rows but {b_le.shape[0]} right-hand sides")
        for name, arr in (("cost", cost), ("a_eq", a_eq), ("b_eq", b_eq),
                          ("a_le", a_le), ("b_le", b_le)):
            if not np.all(np.isfinite(arr)):
                raise LPError(f"{name} contains non-finite entries")
            arr.setflags(write=False)
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "a_eq", a_eq)
        object.__setattr__(self, "b_eq", b_eq)
        object.__setattr__(self, "a_le", a_le)
        object.__setattr__(self, "b_le", b_le)

    @property
    def num_variables(self) -> int:
        return self.cost.shape[0]


@dataclass(frozen=True)
class LPSolution:
    x: np.ndarray
    objective: float
    status: str                       # "optimal" | "infeasible" | "unbounded"

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


def _pivot(tableau: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for r in range(tableau.shape[0]):
        if r != row and tableau[r, col] != 0.0:
            tableau[r] -= tableau[r, col] * tableau[row]
    basis[row] = col


def _run_simplex(tableau: np.ndarray, basis: np.ndarray, cost: np.ndarray,
                 ncols: int) -> str:
    """Iterate Bland-rule pivots until optimal or unbounded.

    ``tableau`` is (m, ncols + 1) with the right-hand side in the last
    column; ``cost`` covers the first ncols columns.
    """
    m = tableau.shape[0]
    while True:
        reduced = cost.copy()
        for r in range(m):
            cb = cost[basis[r]]
            if cb != 0.0:
                reduced -= cb * tableau[r, :ncols]
        entering = -1
        for j in range(ncols):
            if reduced[j] < -PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return "optimal"
        leaving = -1
        best_ratio = np.inf
        for r in range(m):
            a = tableau[r, entering]
            if a > PIVOT_TOL:
                ratio = tableau[r, -1] / a
                if ratio < best_ratio - PIVOT_TOL or (
                        abs(ratio - best_ratio) <= PIVOT_TOL
                        and (leaving < 0 or basis[r] < basis[leaving])):
                    best_ratio = ratio
                    leaving = r
        if leaving < 0:
            return "unbounded"
        _pivot(tableau, basis, leaving, entering)


def simplex_solve(lp: LinearProgram) -> LPSolution:
    """Two-phase dense simplex; returns a vertex optimum when one exists."""
    n = lp.num_variables
    n_slack = lp.a_le.shape[0]
    m = lp.a_eq.shape[0] + n_slack

    if m == 0:
        # No constraints: the origin is optimal unless some cost is negative.
        if np.any(lp.cost < 0.0):
            return LPSolution(np.zeros(n), -np.inf, "unbounded")
        return LPSolution(np.zeros(n), 0.0, "optimal")

    a = np.zeros((m, n + n_slack))
    b = np.zeros(m)
    a[:lp.a_eq.shape[0], :n] = lp.a_eq
    b[:lp.a_eq.shape[0]] = lp.b_eq
    a[lp.a_eq.shape[0]:, :n] = lp.a_le
    a[lp.a_eq.shape[0]:, n:] = np.eye(n_slack)
    b[lp.a_eq.shape[0]:] = lp.b_le
    negative = b < 0.0
    a[negative] *= -1.0
    b[negative] *= -1.0

    # Phase 1: artificial variables form the starting basis.
    ncols = n + n_slack
    tableau = np.zeros((m, ncols + m + 1))
    tableau[:, :ncols] = a
    tableau[:, ncols:ncols + m] = np.eye(m)
    tableau[:, -1] = b
    basis = np.arange(ncols, ncols + m)
    phase1_cost = np.zeros(ncols + m)
    phase1_cost[ncols:] = 1.0
    status = _run_simplex(tableau, basis, phase1_cost, ncols + m)
    if status != "optimal":
        raise AssertionError("phase 1 cannot be unbounded")
    infeasibility = float(np.dot(phase1_cost[basis], tableau[:, -1]))
    if infeasibility > 1e-7:
        return LPSolution(np.zeros(n), np.nan, "infeasible")

    # Drive remaining artificials out of the basis (or drop redundant rows).
    keep = np.ones(m, dtype=bool)
    for r in range(m):
        if basis[r] >= ncols:
            pivot_col = -1
            for j in range(ncols):
                if abs(tableau[r, j]) > PIVOT_TOL:
                    pivot_col = j
                    break
            if pivot_col >= 0:
                _pivot(tableau, basis, r, pivot_col)
            else:
                keep[r] = False
    tableau = tableau[keep]
    basis = basis[keep]

    # Phase 2 on the original columns only.
    tableau = np.hstack([tableau[:, :ncols], tableau[:, -1:]])
    phase2_cost = np.zeros(ncols)
    phase2_cost[:n] = lp.cost
    status = _run_simplex(tableau, basis, phase2_cost, ncols)
    if status == "unbounded":
        return LPSolution(np.zeros(n), -np.inf, "unbounded")

    x = np.zeros(ncols)
    x[basis] = tableau[:, -1]
    solution = x[:n]
    return LPSolution(solution, float(lp.cost @ solution), "optimal")


@dataclass(frozen=True)
class MechanismLP:
    """The decision-pair mechanism program for one game and weight."""

    program: LinearProgram
    game: FiniteGame
    weight: float
    posterior_statistician_loss: np.ndarray   # (data, statistician decisions)

    @property
    def num_variables(self) -> int:
        return self.program.num_variables

    def variable_index(self, i: int, j: int, k: int) -> int:
        """Flat index of rho for statistician decision i, adversary
        decision j, data value k."""
        ne = len(self.game.adversary_decisions)
        nx = len(self.game.data_values)
        return (i * ne + j) * nx + k

    def variable_label(self, flat: int) -> tuple:
        ne = len(self.game.adversary_decisions)
        nx = len(self.game.data_values)
        ij, k = divmod(flat, nx)
        i, j = divmod(ij, ne)
        return (self.game.statistician_decisions[i],
                self.game.adversary_decisions[j],
                self.game.data_values[k])


def build_mechanism_lp(game: FiniteGame, weight: float) -> MechanismLP:
    """Assemble the joint-probability program for a finite game.

    Variables rho[(i, j), k] >= 0 satisfy one simplex equality per data
    value and, for every emitted pair, the linear inequalities stating
    that i and j are optimal responses to that release. The cost of a
    unit of rho is the posterior-averaged statistician loss minus the
    weighted adversary loss.
    """
    if weight < 0.0 or not np.isfinite(weight):
        raise LPError(f"weight must be finite and nonnegative, got {weight!r}")
    nb = len(game.statistician_decisions)
    ne = len(game.adversary_decisions)
    nx = len(game.data_values)
    n = nb * ne * nx

    predictive = game.prior_predictive()
    # posterior-averaged statistician loss per (data value, decision);
    # rows with zero predictive mass never carry probability, leave zero
    post_loss = game.parameter_posterior().T @ game.statistician_loss
    adv_loss = game.adversary_loss

    def vid(i: int, j: int, k: int) -> int:
        return (i * ne + j) * nx + k

    cost = np.zeros(n)
    for i in range(nb):
        for j in range(ne):
            for k in range(nx):
                cost[vid(i, j, k)] = post_loss[k, i] - weight * adv_loss[k, j]

    a_eq = np.zeros((nx, n))
    for k in range(nx):
        for i in range(nb):
            for j in range(ne):
                a_eq[k, vid(i, j, k)] = 1.0
    b_eq = predictive.copy()

    rows = []
    for i in range(nb):
        for j in range(ne):
            for alt in range(nb):
                if alt == i:
                    continue
                row = np.zeros(n)
                for k in range(nx):
                    row[vid(i, j, k)] = post_loss[k, i] - post_loss[k, alt]
                rows.append(row)
            for alt in range(ne):
                if alt == j:
                    continue
                row = np.zeros(n)
                for k in range(nx):
                    row[vid(i, j, k)] = adv_loss[k, j] - adv_loss[k, alt]
                rows.append(row)
    a_le = np.array(rows) if rows else np.zeros((0, n))
    b_le = np.zeros(len(rows))

    program = LinearProgram(cost, a_eq, b_eq, a_le, b_le)
    return MechanismLP(program, game, float(weight), post_loss)


def solve_optimal_mechanism(game: FiniteGame, weight: float) -> tuple[FiniteMechanism, RiskTriple]:
    """Globally optimal mechanism over decision-pair releases.

    The optimal joint probabilities are decoded into a release kernel
    over the alphabet of decision pairs and re-scored with the exact
    enumerator; by construction the enumerated combined risk equals the
    program optimum. Infeasibility cannot occur for a valid game (the
    encoding of the null release is always feasible) and is surfaced as
    an error.
    """
    mlp = build_mechanism_lp(game, weight)
    solution = simplex_solve(mlp.program)
    if not solution.is_optimal:
        raise InfeasibleProgramError(f"mechanism program ended with status {solution.status!r}")

    nb = len(game.statistician_decisions)
    ne = len(game.adversary_decisions)
    nx = len(game.data_values)
    predictive = game.prior_predictive()
    rho = np.clip(solution.x, 0.0, None).reshape(nb * ne, nx)

    table = np.zeros((nx, nb * ne))
    for k in range(nx):
        if predictive[k] > 0.0:
            table[k] = rho[:, k] / predictive[k]
            table[k] /= table[k].sum()
        else:
            table[k, 0] = 1.0          # never emitted; any row works
    alphabet = tuple(
        (bi, ej) for bi in game.statistician_decisions for ej in game.adversary_decisions)
    mechanism = FiniteMechanism(alphabet, table)
    triple = evaluate_mechanism(game, mechanism, RiskWeights(weight))
    return mechanism, triple


def format_mechanism_lp(mlp: MechanismLP) -> str:
    """Human-readable dump: cost row plus labelled constraint rows."""
    labels = [mlp.variable_label(v) for v in range(mlp.num_variables)]
    header = ["variables (statistician decision, adversary decision, data value):"]
    header += [f"  rho[{v}] = {lab}" for v, lab in enumerate(labels)]

    def row_text(coeffs, rel, rhs):
        terms = " + ".join(
            f"{c:+.6g}*rho[{v}]" for v, c in enumerate(coeffs) if c != 0.0)
        return f"  {terms or '0'} {rel} {rhs:.6g}"

    lines = header
    lines.append("cost:")
    lines.append(row_text(mlp.program.cost, "->", 0.0).replace(" -> 0", ""))
    lines.append("equalities (release mass per data value):")
    for r in range(mlp.program.a_eq.shape[0]):
        lines.append(row_text(mlp.program.a_eq[r], "=", mlp.program.b_eq[r]))
    lines.append("optimality inequalities:")
    for r in range(mlp.program.a_le.shape[0]):
        lines.append(row_text(mlp.program.a_le[r], "<=", mlp.program.b_le[r]))
    return "\n".join(lines) + "\n"
