"""Closed-form trajectories, gains and equilibrium reward curves.

Normalized prices ``x`` and rewards ``g`` are in units of the seller
break-even price ``beta + p*theta``.  Two removable singularities appear in
the equilibrium curves, both of the form ``(u - 1)/ln u`` at ``u = 1``; they
are evaluated through :func:`log_mean_ratio`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InfeasibleBand, InsufficientDepth, NoArbitrage
from .params import MarketParams, NormalizedParams, break_even_price, normalize, validate

__all__ = [
    "SERIES_WINDOW",
    "GainReport",
    "RewardRange",
    "log_mean_ratio",
    "price_decay",
    "price_growth",
    "ss_cessation_time",
    "sb_cessation_time",
    "gb_cessation_time",
    "ss_gain",
    "lp_gain_vs_ss",
    "lp_rational_gain",
    "lp_gain_vs_sb",
    "ss_report",
    "sb_report",
    "ss_equilibrium_reward",
    "sb_equilibrium_reward",
    "ss_reward_limit_at_one",
    "sb_reward_limit_at_zero",
    "sb_reward_limit_at_b",
    "sb_reward_limit_at_b_stated",
    "normalized_profit_sl",
    "normalized_profit_bl",
    "reward_bounds",
    "resting_price",
]

# |u - 1| below which (u - 1)/ln u is taken from its Taylor series
SERIES_WINDOW = 1e-6
RESTING_PRICE_TOL = 1e-10


@dataclass(frozen=True)
class GainReport:
    cessation_time: float
    seller_gain: float | None
    lp_gain: float
    lp_rational_gain: float | None
    reward_accrual: float
    impermanent_loss: float


@dataclass(frozen=True)
class RewardRange:
    lower: float
    upper: float

    def __contains__(self, g: float) -> bool:
        return self.lower <= g <= self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower


def log_mean_ratio(u: float) -> float:
    """``(u - 1)/ln u`` for ``u > 0``, continuous through ``u = 1``."""
    if not u > 0:
        raise DomainError(f"log_mean_ratio needs u > 0, got {u}")
    d = u - 1.0
    if abs(d) < SERIES_WINDOW:
        return 1.0 + d / 2.0 - d * d / 12.0
    return d / math.log(u)


def price_decay(t: float, params: MarketParams) -> float:
    if t < 0:
        raise DomainError("t must be non-negative")
    return params.alpha * math.exp(-t / params.depth)


def price_growth(t: float, params: MarketParams) -> float:
    if t < 0:
        raise DomainError("t must be non-negative")
    return params.alpha * math.exp(t / params.depth)


def _log_ratio(num: float, den: float) -> float:
    if den <= 0 or num <= 0:
        raise DomainError(f"log of non-positive price ratio {num}/{den}")
    return math.log(num / den)


def ss_cessation_time(params: MarketParams) -> float:
    """Time for selling pressure to bring the price down to ``beta + p*theta``."""
    validate(params)
    s = break_even_price(params)
    if params.alpha < s:
        raise NoArbitrage(f"alpha={params.alpha} is below the seller break-even {s}")
    return params.depth * _log_ratio(params.alpha, s)


def sb_cessation_time(params: MarketParams) -> float:
    """Time for speculative buying to lift the price up to ``p*theta - delta``."""
    validate(params)
    target = params.fill_rate * params.theta - params.delta
    if params.alpha > target or target <= 0:
        raise NoArbitrage(f"alpha={params.alpha} is above the buyer exit price {target}")
    return params.depth * _log_ratio(target, params.alpha)


def gb_cessation_time(params: MarketParams) -> float:
    """Time for genuine buying to lift the price up to ``theta - delta``."""
    validate(params)
    target = params.theta - params.delta
    if params.alpha > target or target <= 0:
        raise NoArbitrage(f"alpha={params.alpha} is above the genuine-buyer limit {target}")
    return params.depth * _log_ratio(target, params.alpha)


def ss_gain(params: MarketParams) -> float:
    ss_cessation_time(params)
    s = break_even_price(params)
    x = params.alpha / s
    A = params.beta / s
    return params.depth * s * ((x - 1.0) - A * math.log(x))


def _ss_reward_and_loss(params: MarketParams) -> tuple[float, float, float]:
    T = ss_cessation_time(params)
    reward = params.gamma * params.depth * T
    loss = (break_even_price(params) - params.alpha) * params.depth
    return T, reward, loss


def lp_gain_vs_ss(params: MarketParams) -> float:
    _, reward, loss = _ss_reward_and_loss(params)
    return reward + loss


def lp_rational_gain(params: MarketParams) -> float:
    """Value LPs forgo by not selling their stock externally while SBs trade."""
    T = sb_cessation_time(params)
    return params.fill_rate * params.theta * params.depth * T


def _sb_reward_and_loss(params: MarketParams) -> tuple[float, float, float]:
    T = sb_cessation_time(params)
    reward = params.gamma * params.depth * T
    target = params.fill_rate * params.theta - params.delta
    loss = (target - params.alpha) * params.depth
    return T, reward, loss


def lp_gain_vs_sb(params: MarketParams) -> float:
    _, reward, loss = _sb_reward_and_loss(params)
    return reward + loss


def ss_report(params: MarketParams) -> GainReport:
    T, reward, loss = _ss_reward_and_loss(params)
    return GainReport(
        cessation_time=T,
        seller_gain=ss_gain(params),
        lp_gain=reward + loss,
        lp_rational_gain=None,
        reward_accrual=reward,
        impermanent_loss=loss,
    )


def sb_report(params: MarketParams) -> GainReport:
    T, reward, loss = _sb_reward_and_loss(params)
    return GainReport(
        cessation_time=T,
        seller_gain=None,
        lp_gain=reward + loss,
        lp_rational_gain=lp_rational_gain(params),
        reward_accrual=reward,
        impermanent_loss=loss,
    )


def ss_equilibrium_reward(x: float, A: float, inv_depth: float) -> float:
    """Normalized reward at which LPs and speculating sellers gain equally."""
    if not x >= 1.0:
        raise DomainError(f"seller equilibrium curve is defined for x >= 1, got {x}")
    return (1.0 + inv_depth) * log_mean_ratio(x) - A


def sb_equilibrium_reward(x: float, A: float, B: float, inv_depth: float) -> float:
    """Normalized reward at which LPs stay rather than sell externally."""
    if not 0.0 < x <= B:
        raise DomainError(f"buyer equilibrium curve is defined for 0 < x <= B={B}, got {x}")
    # (B - x)/(ln B - ln x) == B * (u - 1)/ln u with u = x/B
    return (1.0 - A) - inv_depth * B * log_mean_ratio(x / B)


def ss_reward_limit_at_one(A: float, inv_depth: float) -> float:
    return 1.0 + inv_depth - A


def sb_reward_limit_at_zero(A: float) -> float:
    return 1.0 - A


def sb_reward_limit_at_b(A: float, B: float, inv_depth: float) -> float:
    """Continuous limit of the buyer curve as ``x -> B``."""
    return (1.0 - A) - B * inv_depth


def sb_reward_limit_at_b_stated(A: float, inv_depth: float) -> float:
    """The ``x -> B`` limit in the simplified form ``1 - A - 1/N``; equal to
    :func:`sb_reward_limit_at_b` only when ``B == 1``."""
    return 1.0 - A - inv_depth


def normalized_profit_sl(x: float, A: float) -> float:
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    if x <= 1.0:
        return 0.0
    return (x - 1.0) - A * math.log(x)


def normalized_profit_bl(x: float, A: float, B: float) -> float:
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    if x >= B:
        return 0.0
    return (1.0 - A) * (math.log(B) - math.log(x))


def _require_band(normalized: NormalizedParams) -> None:
    if not normalized.C > 1.0:
        raise InfeasibleBand(f"C={normalized.C} <= 1: no price band where sellers and genuine buyers coexist")
    if not normalized.min_depth_ok():
        raise InsufficientDepth(
            f"1 - 1/N - A = {1.0 - normalized.inv_depth - normalized.A} < 0: pool too shallow"
        )


def reward_bounds(normalized: NormalizedParams | MarketParams) -> RewardRange:
    if isinstance(normalized, MarketParams):
        normalized = normalize(normalized)
    _require_band(normalized)
    A, C, inv_n = normalized.A, normalized.C, normalized.inv_depth
    return RewardRange(
        lower=ss_reward_limit_at_one(A, inv_n),
        upper=ss_equilibrium_reward(C, A, inv_n),
    )


def resting_price(g: float, normalized: NormalizedParams) -> float:
    """Price in ``[1, C]`` where the seller equilibrium curve meets reward ``g``.

    Clipped to 1 below the reward band and to ``C`` above it.  Bisection is
    enough: the curve is strictly increasing for ``x >= 1``.
    """
    if g < 0:
        raise DomainError("normalized reward must be non-negative")
    if not normalized.C > 1.0:
        raise InfeasibleBand(f"C={normalized.C} <= 1")
    A, C, inv_n = normalized.A, normalized.C, normalized.inv_depth
    if g <= ss_reward_limit_at_one(A, inv_n):
        return 1.0
    if g >= ss_equilibrium_reward(C, A, inv_n):
        return C
    lo, hi = 1.0, C
    while hi - lo > RESTING_PRICE_TOL:
        mid = 0.5 * (lo + hi)
        if ss_equilibrium_reward(mid, A, inv_n) < g:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
