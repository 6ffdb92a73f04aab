"""Command-line entry point: ``analyze``, ``simulate`` and ``phase``.

Exit codes: 0 success, 2 invalid configuration, 3 model infeasibility.
Outputs are computed fully in memory first, so a failing command writes
nothing but its diagnostic on stderr.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import analytics as an
from .config import RunConfig, load_config
from .errors import InfeasibleBand, InsufficientDepth, InvalidConfig, NoArbitrage, PinfiError
from .export import curves_csv, phase_csv, to_json, trajectory_csv
from .params import (
    MarketParams,
    break_even_price,
    feasible_band,
    min_depth,
    min_depth_ok,
    normalize,
    normalized_price,
    normalized_reward,
)
from .phase import sweep
from .simulation import run

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3


class Infeasible(Exception):
    pass


def _opt(fn, *args):
    """Value of ``fn(*args)``, or None outside its domain."""
    try:
        return fn(*args)
    except (an.DomainError, NoArbitrage, InfeasibleBand, InsufficientDepth):
        return None


def _seller_side(params: MarketParams) -> dict:
    try:
        rep = an.ss_report(params)
    except NoArbitrage as exc:
        return {"status": "NoArbitrage", "reason": str(exc)}
    return {
        "status": "active",
        "cessation_time": rep.cessation_time,
        "seller_gain": rep.seller_gain,
        "lp_gain": rep.lp_gain,
        "reward_accrual": rep.reward_accrual,
        "impermanent_loss": rep.impermanent_loss,
    }


def _buyer_side(params: MarketParams) -> dict:
    try:
        rep = an.sb_report(params)
    except NoArbitrage as exc:
        return {"status": "NoArbitrage", "reason": str(exc)}
    return {
        "status": "active",
        "cessation_time": rep.cessation_time,
        "lp_rational_gain": rep.lp_rational_gain,
        "lp_gain": rep.lp_gain,
        "reward_accrual": rep.reward_accrual,
        "impermanent_loss": rep.impermanent_loss,
    }


def analyze_report(params: MarketParams, bounds: bool = True) -> dict:
    """Everything the closed forms say about one parameter set.

    Raises :class:`Infeasible` when ``bounds`` is set and the reward band
    does not exist.
    """
    nz = normalize(params)
    x = normalized_price(params)
    g = normalized_reward(params)
    report = {
        "params": {name: getattr(params, name) for name in MarketParams.field_names()},
        "normalized": {"A": nz.A, "B": nz.B, "C": nz.C, "inv_depth": nz.inv_depth},
        "break_even_price": break_even_price(params),
        "x": x,
        "g": g,
        "checks": {
            "min_depth": min_depth(params),
            "min_depth_ok": min_depth_ok(params),
            "feasible_band": feasible_band(params),
            "identity_residual": nz.identity_residual(params.fill_rate),
        },
        "seller_side": _seller_side(params),
        "buyer_side": _buyer_side(params),
        "genuine_buyer_cessation_time": _opt(an.gb_cessation_time, params),
        "equilibrium_rewards": {
            "ss_at_x": _opt(an.ss_equilibrium_reward, x, nz.A, nz.inv_depth),
            "sb_at_x": _opt(an.sb_equilibrium_reward, x, nz.A, nz.B, nz.inv_depth),
            "ss_limit_at_1": an.ss_reward_limit_at_one(nz.A, nz.inv_depth),
            "sb_limit_at_0": an.sb_reward_limit_at_zero(nz.A),
            "sb_limit_at_B": an.sb_reward_limit_at_b(nz.A, nz.B, nz.inv_depth),
            "sb_limit_at_B_stated": an.sb_reward_limit_at_b_stated(nz.A, nz.inv_depth),
        },
        "normalized_profits": {
            "sl": an.normalized_profit_sl(x, nz.A) if x > 0 else None,
            "bl": an.normalized_profit_bl(x, nz.A, nz.B) if x > 0 and nz.B > 0 else None,
        },
        "reward_bounds": None,
        "resting_price": None,
    }
    if bounds:
        try:
            band = an.reward_bounds(nz)
        except (InfeasibleBand, InsufficientDepth) as exc:
            raise Infeasible(f"{type(exc).__name__}: {exc}") from exc
        report["reward_bounds"] = {"lower": band.lower, "upper": band.upper}
        report["resting_price"] = an.resting_price(g, nz)
    return report


def _out_dir(args, cfg: RunConfig) -> Path:
    return Path(args.out) if args.out else Path(cfg.output.directory)


def _write_all(directory: Path, files: dict[str, str]) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (directory / name).write_text(text)


def _closed_form_times(cfg) -> dict:
    at_start = cfg.params.replace(alpha=cfg.initial_price)
    return {
        "ss_cessation_time": _opt(an.ss_cessation_time, at_start),
        "sb_cessation_time": _opt(an.sb_cessation_time, at_start),
        "gb_cessation_time": _opt(an.gb_cessation_time, at_start),
    }


def cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    report = analyze_report(cfg.require_market(), bounds=not args.no_bounds)
    text = to_json(report)
    if args.out:
        _write_all(Path(args.out), {"report.json": text})
    sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    sim_cfg = cfg.sim_config()
    traj = run(sim_cfg)
    nz = sim_cfg.normalized
    led = traj.final_ledgers
    resting = None
    if nz.C > 1.0:
        resting = an.resting_price(sim_cfg.reward, nz)
    summary = {
        "terminal": traj.terminal.value,
        "samples": len(traj),
        "x0": sim_cfg.x0,
        "g": sim_cfg.reward,
        "final_time": traj.final_time,
        "final_price": traj.final_price,
        "final_x": traj.final_x,
        "ledgers": {
            "seller_profit": led.seller_profit,
            "sb_surplus": led.sb_surplus,
            "gb_surplus": led.gb_surplus,
            "buyer_surplus": led.buyer_surplus,
            "lp_reward": led.lp_reward,
            "lp_imperm_loss": led.lp_imperm_loss,
        },
        "closed_form": _closed_form_times(sim_cfg),
        "resting_price": resting,
    }
    files = {"trajectory.csv": trajectory_csv(traj), "summary.json": to_json(summary)}
    if args.svg or "svg" in cfg.output.formats:
        from .plots import trajectory_svg

        reference = None
        events = traj.events[1:]
        if events.size and np.all(events == 1):
            reference = sim_cfg.x0 * np.exp(-traj.time / sim_cfg.params.depth)
        elif events.size and np.all(events == 2):
            reference = sim_cfg.x0 * np.exp(traj.time / sim_cfg.params.depth)
        files["trajectory.svg"] = trajectory_svg(traj, reference)
    _write_all(_out_dir(args, cfg), files)
    return EXIT_OK


def cmd_phase(args) -> int:
    cfg = load_config(args.config)
    nz = cfg.normalized()
    grid = sweep(cfg.require_grid(), nz)
    segment = None
    if grid.segment is not None:
        (x0, g0), (x1, g1) = grid.segment
        segment = {"pD": {"x": x0, "g": g0}, "pB_prime": {"x": x1, "g": g1}}
    meta = {
        "normalized": {"A": nz.A, "B": nz.B, "C": nz.C, "inv_depth": nz.inv_depth},
        "stable_segment": segment,
        "zone_counts": {z.value: n for z, n in grid.counts().items()},
    }
    files = {
        "phase.csv": phase_csv(grid),
        "curves.csv": curves_csv(grid),
        "segment.json": to_json(meta),
    }
    if args.svg or "svg" in cfg.output.formats:
        from .plots import phase_svg

        files["phase.svg"] = phase_svg(grid)
    _write_all(_out_dir(args, cfg), files)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pinfilab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="closed-form report for one parameter set")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="also write report.json into this directory")
    p.add_argument("--no-bounds", action="store_true", help="skip the block-reward band")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="run the threshold-agent simulator")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("phase", help="classify a grid of the (x, g) plane")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_phase)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Infeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InvalidConfig, PinfiError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
