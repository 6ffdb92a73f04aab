"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run ``python tests/test_acceptance.py`` for the bare list, or under pytest
(the lines are repeated in the terminal summary).
"""
import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import random_feasible_market, random_market  # noqa: E402
from oracles import (  # noqa: E402
    buyer_balance_reward,
    lp_rational_quadrature,
    seller_balance_reward,
    ss_gain_quadrature,
)
from pinfilab import analytics as an  # noqa: E402
from pinfilab.export import read_trajectory_csv, trajectory_csv  # noqa: E402
from pinfilab.params import NormalizedParams, break_even_price, market_from_normalized, normalize  # noqa: E402
from pinfilab.phase import BAND_CASES, CoarseZone, GridSpec, Zone, classify_coarse, sweep  # noqa: E402
from pinfilab.pool import PoolState, apply_buy, apply_expiry, apply_replenish, apply_sell, buy_map, sell_map  # noqa: E402
from pinfilab.simulation import Arbitration, Role, RoleModel, SimConfig, Terminal, detect_rest, run  # noqa: E402

RESULTS: list[str] = []


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_01_closed_form_vs_quadrature():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        base = random_feasible_market(rng)
        while base.fill_rate * base.theta - base.delta <= 0:
            base = random_feasible_market(rng)  # no speculating-buyer scenario
        s = break_even_price(base)
        seller = base.replace(alpha=s * float(rng.uniform(1.001, 4.0)))
        q = ss_gain_quadrature(seller.alpha, seller.beta, s, seller.depth)
        worst = max(worst, abs(an.ss_gain(seller) - q) / abs(q))
        exit_price = base.fill_rate * base.theta - base.delta
        buyer = base.replace(alpha=exit_price * float(rng.uniform(0.05, 0.999)))
        q = lp_rational_quadrature(buyer.fill_rate * buyer.theta, buyer.delta, buyer.alpha, buyer.depth)
        worst = max(worst, abs(an.lp_rational_gain(buyer) - q) / abs(q))
    elapsed = time.perf_counter() - start
    report(1, "closed form vs quadrature", worst <= 1e-6 and elapsed < 5.0,
           f"max rel err {worst:.2e} (tol 1e-6), {elapsed:.2f} s (limit 5 s)")


def test_02_closed_form_vs_root_finding():
    A, B, N = 0.3, 0.7, 1000.0
    start = time.perf_counter()
    xs = np.concatenate([np.linspace(1.0, 5.0, 101)[1:], 1.0 + np.array([1e-9, 1e-8, 1e-7, 5e-7, 9.9e-7, 2e-6])])
    worst_ss = max(abs(an.ss_equilibrium_reward(float(x), A, 1 / N) - seller_balance_reward(float(x), A, N)) for x in xs)
    xb = np.concatenate([np.linspace(0.0, B, 101)[1:-1], B * (1 - np.array([1e-9, 1e-8, 1e-7, 5e-7, 9.9e-7, 2e-6]))])
    worst_sb = max(abs(an.sb_equilibrium_reward(float(x), A, B, 1 / N) - buyer_balance_reward(float(x), A, B, N)) for x in xb)
    elapsed = time.perf_counter() - start
    worst = max(worst_ss, worst_sb)
    report(2, "closed form vs root finding", worst <= 1e-9 and elapsed < 5.0,
           f"max abs err ss {worst_ss:.2e}, sb {worst_sb:.2e} (tol 1e-9), {elapsed:.2f} s (limit 5 s)")


def _ode_run(roles, x0, dt, sign):
    nz = NormalizedParams(0.3, 0.7, 1.3, 0.001)
    cfg = SimConfig(market_from_normalized(nz, x=x0), x0, dt, 2000.0, roles=frozenset(roles))
    traj = run(cfg)
    ref = x0 * np.exp(sign * traj.time / 1000.0)
    return traj, float(np.max(np.abs(traj.x - ref) / ref))


def test_03_simulation_vs_ode():
    N, dt = 1000.0, 0.1  # dt/N = 1e-4
    T = N * math.log(1.3)
    start = time.perf_counter()
    parts, ok = [], True
    for label, roles, x0, sign in (("SS", {Role.SS}, 1.3, -1), ("GB", {Role.GB}, 1.0, 1)):
        traj, err = _ode_run(roles, x0, dt, sign)
        _, err_half = _ode_run(roles, x0, dt / 2, sign)
        t_err = abs(traj.final_time - T) / T
        ratio = err / err_half
        ok &= err <= 1e-3 and t_err <= 1e-3 and ratio >= 2.0
        parts.append(f"{label}: max rel err {err:.3e}, T err {t_err:.2e}, halving ratio {ratio:.6f}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30.0
    report(3, "simulation vs ODE", ok, "; ".join(parts) + f" (need err<=1e-3, T<=0.1%, ratio>=2), {elapsed:.2f} s")


def test_04_two_party_boundary():
    nz = NormalizedParams(0.3, 1.0, 2.0, 0.001)
    edge = an.ss_equilibrium_reward(1.0 + 1e-9, 0.3, 0.001)
    xs = np.linspace(1.001, 3.0, 200)
    gs = np.linspace(0.0, 2.0, 4001)
    boundary = []
    for x in xs:
        labels = [classify_coarse(float(x), float(g), nz) for g in gs]
        k = labels.index(CoarseZone.LP)
        two_zones = all(z is CoarseZone.SS for z in labels[:k]) and all(z is CoarseZone.LP for z in labels[k:])
        boundary.append(gs[k] if two_zones else np.nan)
    boundary = np.array(boundary)
    monotone = bool(np.all(np.isfinite(boundary)) and np.all(np.diff(boundary) >= 0))
    ok = abs(edge - 0.701) <= 1e-6 and monotone
    report(4, "two-party boundary", ok, f"g at x->1+ = {edge:.9f} (0.701 +- 1e-6), boundary monotone in x: {monotone}")


def test_05_band_sweeps():
    spec = GridSpec(0.1, 2.0, 200, 0.0, 1.5, 200)
    grids = {k: sweep(spec, nz) for k, nz in BAND_CASES.items()}
    n_closed = grids["closed"].count(Zone.aG)
    n_degen = grids["degenerate"].count(Zone.aG)
    n_open = grids["open"].count(Zone.aG)
    # C = 1: the band 1 <= x < C has zero width
    degenerate = n_degen == 0 and an.reward_bounds(NormalizedParams(0.3, 0.7, 1.0 + 1e-12, 0.001)).width < 1e-9
    seg = grids["open"].segment
    (x0, g0), (x1, g1) = seg
    endpoints = x0 == 1.0 and abs(g0 - 0.701) <= 1e-5 and x1 == 1.3 and abs(g1 - 0.84466) <= 1e-5
    ok = n_closed == 0 and degenerate and n_open > 0 and endpoints
    report(5, "closed/degenerate/open band sweeps", ok,
           f"aG cells C=0.7: {n_closed}, C=1.0: {n_degen}, C=1.3: {n_open}; segment ({x0}, {g0:.6f})-({x1}, {g1:.8f}) "
           f"vs (1, 0.701)-(1.3, 0.84466 +- 1e-5), upper diff {abs(g1 - 0.84466):.2e}")


def test_06_parameter_identity():
    rng = np.random.default_rng(606)
    worst = 0.0
    for _ in range(100_000):
        params = random_market(rng)
        worst = max(worst, normalize(params).identity_residual(params.fill_rate))
    report(6, "parameter identity", worst <= 1e-12, f"max rel residual {worst:.2e} over 1e5 sets (tol 1e-12)")


def test_07_curve_ordering():
    rng = np.random.default_rng(707)
    failures = 0
    for _ in range(100_000):
        nz = normalize(random_market(rng))
        sup_sb = an.sb_reward_limit_at_zero(nz.A)
        inf_ss = an.ss_reward_limit_at_one(nz.A, nz.inv_depth)
        failures += not sup_sb < inf_ss
    report(7, "curve ordering", failures == 0, f"{failures} violations of 1-A < 1+1/N-A over 1e5 sets")


def test_08_constant_product_engine():
    rng = np.random.default_rng(808)
    m = 1_000_000
    n = 10 ** rng.uniform(-2, 6, m)
    y = n * 10 ** rng.uniform(-3, 3, m)
    size = n * rng.uniform(1e-9, 0.999, m)
    k = n * y
    ns, ys = sell_map(n, y, size)
    nb, yb = buy_map(n, y, size)
    worst = max(float(np.max(np.abs(ns * ys - k) / k)), float(np.max(np.abs(nb * yb - k) / k)))
    exact = True
    for i in range(20_000):
        pool = PoolState(float(n[i]), float(y[i]))
        d = float(size[i])
        for op in (apply_sell, apply_buy):
            after = op(pool, d)
            worst = max(worst, abs(after.invariant - pool.invariant) / pool.invariant)
        exact &= apply_expiry(pool, d).numeraire_reserve == pool.numeraire_reserve
        exact &= apply_replenish(pool, d).numeraire_reserve == pool.numeraire_reserve
    report(8, "constant-product engine", worst <= 1e-12 and exact,
           f"max rel product drift {worst:.2e} over 1e6 trades (tol 1e-12); numeraire exact on expiry/replenish: {exact}")


def test_09_rewardaware_convergence():
    nz = BAND_CASES["open"]
    band = an.reward_bounds(nz)
    rng = np.random.default_rng(909)
    dt, N = 0.1, 1000.0
    worst, all_rest = 0.0, True
    for _ in range(20):
        g = float(rng.uniform(band.lower, band.upper))
        while not band.lower < g < band.upper:
            g = float(rng.uniform(band.lower, band.upper))
        x_star = an.resting_price(g, nz)
        x0 = float(rng.uniform(1.0, x_star))  # on or above the curve: zone aG
        assert sweep(GridSpec(x0, x0, 1, g, g, 1), nz).label(0, 0) is Zone.aG
        cfg = SimConfig(market_from_normalized(nz, x=x0, g=g), x0, dt, 5000.0,
                        arbitration=Arbitration.ALTERNATE, role_model=RoleModel.REWARD_AWARE)
        traj = run(cfg)
        all_rest &= traj.terminal is Terminal.REST
        worst = max(worst, abs(detect_rest(traj, cfg) - x_star))
    tol = 2 * dt / N
    report(9, "reward-aware convergence", worst <= tol and all_rest,
           f"max |x_rest - x*| = {worst:.2e} (tol {tol:.0e}) over 20 aG points, all Rest: {all_rest}")


def test_10_determinism_and_round_trip():
    nz = BAND_CASES["open"]
    ok = True
    for policy in Arbitration:
        cfg = SimConfig(market_from_normalized(nz, x=1.05, g=0.72), 1.05, 0.1, 3000.0,
                        arbitration=policy, role_model=RoleModel.REWARD_AWARE, seed=12345)
        a, b = run(cfg), run(cfg)
        text_a, text_b = trajectory_csv(a), trajectory_csv(b)
        ok &= text_a.encode() == text_b.encode()
        parsed = read_trajectory_csv(text_a)
        for name in ("time", "price", "x", "seller_profit_cum", "lp_reward_cum", "lp_imperm_loss"):
            ok &= bool(np.array_equal(parsed[name], getattr(a, name)))
        ok &= bool(np.array_equal(parsed["buyer_surplus_cum"], a.buyer_surplus_cum))
        ok &= bool(np.array_equal(parsed["ss_active"], a.ss_active))
    report(10, "determinism and round trip", ok, f"byte-identical CSVs and exact re-parse for {len(Arbitration)} policies: {ok}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
