"""Pure-Python tick loop and grid classifier.

Reference implementation of the compiled kernel in ``_ckernel.pyx``.  Both
perform the same floating-point operations in the same order, so their
outputs agree bit for bit.
"""
from __future__ import annotations

import numpy as np

from ..analytics import sb_equilibrium_reward, ss_equilibrium_reward
from ._constants import (
    EV_BUY,
    EV_SELL,
    N_FLOAT_COLS,
    N_FLAG_COLS,
    POLICY_ALTERNATE,
    POLICY_BUYER,
    POLICY_RANDOM,
    POLICY_SELLER,
    ROLE_GB,
    ROLE_SB,
    ROLE_SS,
    TERM_CESSATION,
    TERM_EXODUS,
    TERM_HORIZON,
    TERM_REST,
    ZONE_AA,
    ZONE_AB,
    ZONE_AC,
    ZONE_AD,
    ZONE_AE,
    ZONE_AF,
    ZONE_AG,
)

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea & Flood 2014); 64-bit state, portable."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)


def flags_at(x, g, A, B, C, inv_depth, roles, reward_aware):
    ss = bool(roles & ROLE_SS) and x > 1.0
    if ss and reward_aware:
        ss = g < ss_equilibrium_reward(x, A, inv_depth)
    sb = bool(roles & ROLE_SB) and x < B
    gb = bool(roles & ROLE_GB) and x < C
    lp = not (x < B and g < sb_equilibrium_reward(x, A, B, inv_depth))
    return ss, sb, gb, lp


def run_kernel(depth, price0, beta, gamma, delta, theta, fill_rate,
               A, B, C, inv_depth, g, dt, max_ticks, roles, reward_aware,
               policy, seed):
    s = beta + fill_rate * theta
    sb_exit = fill_rate * theta - delta
    gb_exit = theta - delta
    n = depth
    y = price0 * depth
    rng = SplitMix64(seed)

    floats = []
    flags = []
    price = y / n
    x = price / s
    ss, sb, gb, lp = flags_at(x, g, A, B, C, inv_depth, roles, reward_aware)
    cum_sell = cum_sb = cum_gb = cum_lp = 0.0
    floats.append((0.0, price, x, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0))
    flags.append((ss, sb, gb, lp, 0))

    ticks = 0
    prev_dir = 0
    while True:
        if not lp:
            terminal = TERM_EXODUS
            break
        seller = ss
        buyer = sb or gb
        if not (seller or buyer):
            terminal = TERM_CESSATION if ticks > 0 else TERM_REST
            break
        if ticks >= max_ticks:
            terminal = TERM_HORIZON
            break
        do_sell = seller
        do_buy = buyer
        if seller and buyer:
            if policy == POLICY_SELLER:
                do_buy = False
            elif policy == POLICY_BUYER:
                do_sell = False
            elif policy == POLICY_RANDOM:
                if rng.next() >> 63:
                    do_sell = False
                else:
                    do_buy = False
            elif policy != POLICY_ALTERNATE:
                raise ValueError(f"unknown arbitration policy {policy}")

        inc_sell = inc_sb = inc_gb = 0.0
        events = 0
        if do_sell:
            inc_sell = (price - beta) * dt
            y = n / (n + dt) * y
            events |= EV_SELL
        if do_buy:
            price = y / n
            if sb:
                inc_sb = (sb_exit - price) * dt
            else:
                inc_gb = (gb_exit - price) * dt
            y = n / (n - dt) * y
            events |= EV_BUY
        inc_lp = gamma * depth * dt
        ticks += 1
        cum_sell += inc_sell
        cum_sb += inc_sb
        cum_gb += inc_gb
        cum_lp += inc_lp
        price = y / n
        x = price / s
        il = (price - price0) * depth
        ss, sb, gb, lp = flags_at(x, g, A, B, C, inv_depth, roles, reward_aware)
        floats.append((ticks * dt, price, x, inc_sell, inc_sb, inc_gb, inc_lp,
                       cum_sell, cum_sb, cum_gb, cum_lp, il))
        flags.append((ss, sb, gb, lp, events))

        direction = 0
        if events == EV_SELL:
            direction = -1
        elif events == EV_BUY:
            direction = 1
        if direction == 0 or direction == -prev_dir:
            terminal = TERM_REST
            break
        prev_dir = direction

    fl = np.array(floats, dtype=np.float64).reshape(-1, N_FLOAT_COLS)
    fg = np.array(flags, dtype=np.uint8).reshape(-1, N_FLAG_COLS)
    return fl, fg, terminal


def classify_grid(xs, gs, A, B, C, inv_depth):
    """Zone codes, shape ``(len(xs), len(gs))``, x-major."""
    xs = np.asarray(xs, dtype=np.float64)
    gs = np.asarray(gs, dtype=np.float64)
    out = np.empty((xs.shape[0], gs.shape[0]), dtype=np.uint8)
    for i in range(xs.shape[0]):
        x = float(xs[i])
        if x < B:
            curve = sb_equilibrium_reward(x, A, B, inv_depth)
            below, above = ZONE_AB, ZONE_AC
        elif x < 1.0:
            out[i, :] = ZONE_AA
            continue
        else:
            curve = ss_equilibrium_reward(x, A, inv_depth)
            if x < C:
                below, above = ZONE_AD, ZONE_AG
            else:
                below, above = ZONE_AE, ZONE_AF
        for j in range(gs.shape[0]):
            out[i, j] = below if float(gs[j]) < curve else above
    return out
