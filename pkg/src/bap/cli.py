"""Command-line front end.

Three command groups: ``cointoss`` reproduces the coin study (summary
table, flip-probability sweep, LP optimum), ``gaussian`` reproduces the
Gaussian study (comparison tables, parameter sweeps, per-family
optimisation), and ``game`` evaluates or optimises user-supplied finite
games loaded from JSON.

File outputs are written atomically (write-then-rename) so a failed run
never leaves truncated artifacts. ``BAP_SEED`` overrides the default
seed when ``--seed`` is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__, cointoss, gaussian
from .framework import (
    FiniteMechanism,
    GameValidationError,
    RiskTriple,
    RiskWeights,
    calibrate_lambda,
    evaluate_mechanism,
    game_from_dict,
    mechanism_from_dict,
    mechanism_to_dict,
)
from .gaussian import NumericsConfig
from .lp import build_mechanism_lp, format_mechanism_lp, solve_optimal_mechanism

TABLE_COLUMNS = ("mechanism", "param", "R_B", "R_E", "R_A", "se_B", "se_E", "method")


@dataclass(frozen=True)
class RunReport:
    """What a command did and what it produced; JSON round-trippable."""

    command: str
    config: dict
    weight: float
    rows: list
    seed: int
    duration_ms: float
    version: str

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "lambda": self.weight,
            "rows": self.rows,
            "seed": self.seed,
            "duration_ms": self.duration_ms,
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RunReport":
        return cls(doc["command"], doc["config"], doc["lambda"], doc["rows"],
                   doc["seed"], doc["duration_ms"], doc["version"])


def _write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".part")
    tmp.write_text(text, encoding="utf-8", newline="\n")
    os.replace(tmp, path)


def _write_report(path: str | None, report: RunReport) -> None:
    if path:
        _write_text(path, json.dumps(report.to_dict(), indent=2) + "\n")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _rows_to_csv(columns: tuple[str, ...], rows: list[dict]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def _print_rows(columns: tuple[str, ...], rows: list[dict]) -> None:
    display = []
    for row in rows:
        cells = []
        for c in columns:
            v = row.get(c)
            if v is None:
                cells.append("-")
            elif isinstance(v, float):
                cells.append(f"{v:.2f}")
            else:
                cells.append(str(v))
        display.append(cells)
    widths = [max(len(columns[i]), *(len(r[i]) for r in display)) if display
              else len(columns[i]) for i in range(len(columns))]
    print("  ".join(c.ljust(w) for c, w in zip(columns, widths)))
    for r in display:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


def _parse_grid(text: str) -> np.ndarray:
    try:
        start, stop, step = (float(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"grid must look like start:stop:step, got {text!r}") from None
    if step <= 0.0 or stop < start:
        raise argparse.ArgumentTypeError(f"bad grid bounds {text!r}")
    count = int(round((stop - start) / step)) + 1
    return np.linspace(start, start + step * (count - 1), count)


def _default_seed() -> int:
    return int(os.environ.get("BAP_SEED", "0"))


def _triple_row(name: str, param: float | None, triple: RiskTriple,
                method: str = "closed-form") -> dict:
    return {
        "mechanism": name,
        "param": param,
        "R_B": triple.inference,
        "R_E": triple.privacy,
        "R_A": triple.combined,
        "se_B": 0.0,
        "se_E": 0.0,
        "method": method,
    }


# --- cointoss ---------------------------------------------------------------

def _cointoss_weight(args: argparse.Namespace) -> float:
    if args.weight is not None:
        return args.weight
    full = cointoss.rr_risks(0.0)
    null = cointoss.rr_risks(0.5)
    return calibrate_lambda(full, null)


def _cointoss_rows(weight: float) -> list[dict]:
    game = cointoss.coin_game()
    w = RiskWeights(weight)
    rows = []
    for name, mech in (("full", FiniteMechanism.full_release(game)),
                       ("null", FiniteMechanism.null_release(game))):
        rows.append(_triple_row(name, None, evaluate_mechanism(game, mech, w)))
    omega, _ = cointoss.rr_optimal_omega(weight)
    rb, re = cointoss.rr_risks(omega)
    rows.append(_triple_row("randomized", omega, RiskTriple.of(rb, re, weight)))
    _, triple = solve_optimal_mechanism(game, weight)
    rows.append(_triple_row("lp-optimum", None, triple))
    return rows


def cmd_cointoss(args: argparse.Namespace) -> int:
    started = time.monotonic()
    weight = _cointoss_weight(args)
    config: dict[str, Any] = {"lambda_given": args.weight is not None}

    if args.subcommand == "table":
        rows = _cointoss_rows(weight)
        _print_rows(TABLE_COLUMNS, rows)
        if args.out:
            _write_text(args.out, _rows_to_csv(TABLE_COLUMNS, rows))
    elif args.subcommand == "sweep":
        grid = args.grid if args.grid is not None else _parse_grid("0:1:0.01")
        rows = []
        for omega in grid:
            rb, re = cointoss.rr_risks(float(omega))
            rows.append({
                "param": float(omega), "R_B": rb, "R_E": re,
                "R_A": rb - weight * re, "se_B": 0.0, "se_E": 0.0,
                "method": "closed-form",
            })
        game = cointoss.coin_game()
        _, lp_triple = solve_optimal_mechanism(game, weight)
        full_triple = evaluate_mechanism(
            game, FiniteMechanism.full_release(game), RiskWeights(weight))
        null_triple = evaluate_mechanism(
            game, FiniteMechanism.null_release(game), RiskWeights(weight))
        config["reference_levels"] = {
            "full": full_triple.combined,
            "null": null_triple.combined,
            "lp_optimum": lp_triple.combined,
        }
        if args.out:
            _write_text(args.out, _rows_to_csv(gaussian.CSV_COLUMNS, rows))
        else:
            _print_rows(gaussian.CSV_COLUMNS, rows)
    else:  # lp
        game = cointoss.coin_game()
        if args.dump_lp:
            _write_text(args.dump_lp, format_mechanism_lp(build_mechanism_lp(game, weight)))
        mechanism, triple = solve_optimal_mechanism(game, weight)
        rows = [_triple_row("lp-optimum", None, triple)]
        rows[0]["release_table"] = mechanism_to_dict(mechanism)
        _print_rows(TABLE_COLUMNS, rows)
        if args.out:
            _write_text(args.out, _rows_to_csv(TABLE_COLUMNS, rows))

    duration = (time.monotonic() - started) * 1000.0
    report = RunReport(f"cointoss {args.subcommand}", config, weight, rows,
                       _default_seed(), duration, __version__)
    _write_report(args.json, report)
    return 0


# --- gaussian ---------------------------------------------------------------

def _gaussian_model(args: argparse.Namespace) -> gaussian.GaussianModel:
    return gaussian.GaussianModel(args.n, args.sigma0, args.cb, args.ce)


def _gaussian_cfg(args: argparse.Namespace) -> NumericsConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    return NumericsConfig(quad_order=args.quad_order, mc_samples=args.mc_samples,
                          seed=seed)


def _gaussian_weight(args: argparse.Namespace, model, target, cfg) -> float:
    if args.weight is not None:
        return args.weight
    full = (gaussian.risk_bob(model, gaussian.Full(), cfg).value,
            gaussian.risk_eve(model, gaussian.Full(), target, cfg).value)
    null = (gaussian.risk_bob(model, gaussian.Null(), cfg).value,
            gaussian.risk_eve(model, gaussian.Null(), target, cfg).value)
    return calibrate_lambda(full, null)


def cmd_gaussian(args: argparse.Namespace) -> int:
    started = time.monotonic()
    model = _gaussian_model(args)
    cfg = _gaussian_cfg(args)
    config = {"model": asdict(model), "numerics": asdict(cfg)}

    if args.subcommand == "table":
        result = gaussian.table(model, args.target, cfg)
        weight = result.weight
        rows = [row.as_dict() for row in result.rows]
        _print_rows(TABLE_COLUMNS, rows)
        if args.out:
            _write_text(args.out, gaussian.table_to_csv(result))
    else:
        weight = _gaussian_weight(args, model, args.target, cfg)
        result = gaussian.sweep(model, args.mechanism, args.target, weight, cfg,
                                grid=args.grid)
        config["family"] = args.mechanism
        if args.subcommand == "sweep":
            rows = [row.as_dict() for row in result.rows]
            if args.out:
                _write_text(args.out, gaussian.sweep_to_csv(result))
            else:
                _print_rows(gaussian.CSV_COLUMNS, rows)
        else:  # optimize
            best = result.best_row()
            rows = [dict(best.as_dict(), mechanism=args.mechanism)]
            _print_rows(TABLE_COLUMNS, rows)
            if args.out:
                _write_text(args.out, _rows_to_csv(TABLE_COLUMNS, rows))

    duration = (time.monotonic() - started) * 1000.0
    report = RunReport(f"gaussian {args.subcommand}", config, weight, rows,
                       cfg.seed, duration, __version__)
    _write_report(args.json, report)
    return 0


# --- user-defined games -----------------------------------------------------

def _load_json(path: str, what: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise GameValidationError(f"{what} file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise GameValidationError(f"{what} file {path}: invalid JSON ({exc})") from None


def cmd_game(args: argparse.Namespace) -> int:
    started = time.monotonic()
    game = game_from_dict(_load_json(args.game, "game"))
    weight = args.weight
    config: dict[str, Any] = {"game_file": args.game}

    if args.optimal:
        if args.dump_lp:
            _write_text(args.dump_lp, format_mechanism_lp(build_mechanism_lp(game, weight)))
        mechanism, triple = solve_optimal_mechanism(game, weight)
        rows = [_triple_row("lp-optimum", None, triple)]
        rows[0]["release_table"] = mechanism_to_dict(mechanism)
    else:
        mechanism = mechanism_from_dict(_load_json(args.mechanism, "mechanism"))
        triple = evaluate_mechanism(game, mechanism, RiskWeights(weight))
        rows = [_triple_row("user-mechanism", None, triple)]
        config["mechanism_file"] = args.mechanism

    _print_rows(TABLE_COLUMNS, rows)
    duration = (time.monotonic() - started) * 1000.0
    report = RunReport("game", config, weight, rows, _default_seed(),
                       duration, __version__)
    _write_report(args.json, report)
    return 0


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bap",
        description="Evaluate and optimise data-release mechanisms by their "
                    "inference and privacy risks.")
    parser.add_argument("--version", action="version", version=f"bap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    coin = sub.add_parser("cointoss", help="two-coin release study")
    coin_sub = coin.add_subparsers(dest="subcommand", required=True)
    for name, helptext in (("table", "summary table of the four mechanisms"),
                           ("sweep", "risk curve over the flip probability"),
                           ("lp", "globally optimal mechanism")):
        p = coin_sub.add_parser(name, help=helptext)
        p.add_argument("--lambda", dest="weight", type=float, default=None,
                       help="privacy weight (default: calibrated)")
        p.add_argument("--out", help="CSV output path")
        p.add_argument("--json", help="JSON run-report path")
        if name == "sweep":
            p.add_argument("--grid", type=_parse_grid, default=None,
                           help="flip probabilities as start:stop:step (default 0:1:0.01)")
        if name == "lp":
            p.add_argument("--dump-lp", help="write the program in text form")
        p.set_defaults(handler=cmd_cointoss)

    gauss = sub.add_parser("gaussian", help="Gaussian hypothesis-testing study")
    gauss_sub = gauss.add_subparsers(dest="subcommand", required=True)
    for name, helptext in (("table", "comparison table at the calibrated weight"),
                           ("sweep", "risk curve over a mechanism parameter"),
                           ("optimize", "grid optimum within one family")):
        p = gauss_sub.add_parser(name, help=helptext)
        p.add_argument("--target", required=True, choices=gaussian.TARGETS,
                       help="adversary's statistic")
        p.add_argument("--n", type=int, default=5, help="sample size")
        p.add_argument("--sigma0", type=float, default=1.0, help="prior standard deviation")
        p.add_argument("--cb", type=float, default=0.0, help="statistician's threshold")
        p.add_argument("--ce", type=float, default=0.0, help="adversary's threshold")
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (default: BAP_SEED or 0)")
        p.add_argument("--mc-samples", type=int, default=200_000)
        p.add_argument("--quad-order", type=int, default=80)
        p.add_argument("--out", help="CSV output path")
        p.add_argument("--json", help="JSON run-report path")
        if name != "table":
            p.add_argument("--mechanism", required=True, choices=sorted(gaussian.FAMILIES),
                           help="mechanism family")
            p.add_argument("--lambda", dest="weight", type=float, default=None,
                           help="privacy weight (default: calibrated)")
            p.add_argument("--grid", type=_parse_grid, default=None,
                           help="parameter grid as start:stop:step")
        p.set_defaults(handler=cmd_gaussian)

    game = sub.add_parser("game", help="evaluate a user-defined finite game")
    game.add_argument("--game", required=True, help="game JSON file")
    mx = game.add_mutually_exclusive_group(required=True)
    mx.add_argument("--mechanism", help="mechanism JSON file")
    mx.add_argument("--optimal", action="store_true",
                    help="solve for the globally optimal mechanism")
    game.add_argument("--lambda", dest="weight", type=float, required=True,
                      help="privacy weight")
    game.add_argument("--json", help="JSON run-report path")
    game.add_argument("--dump-lp", help="write the program in text form (with --optimal)")
    game.set_defaults(handler=cmd_game)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (GameValidationError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
