"""Quasi-static threshold-agent simulator.

Each tick the active roles trade one quantum ``step_size`` against the pool:
speculating sellers (SS) sell while ``x > 1``, speculating buyers (SB) buy
while ``x < B`` and genuine buyers (GB) buy while ``x < C``.  A sold unit
expires and a bought unit is replenished before the next tick, so the pool's
dissipative reserve stays at the depth ``N``.

A run stops when

* no role is active (``CESSATION``, or ``REST`` if nothing ever traded),
* flow becomes two-sided: a tick carries both a sell and a buy, or reverses
  the previous tick's direction.  The price is then pinned between
  opposing flows (``REST``),
* LPs would rather sell externally (``LP_EXODUS_FLAGGED``; recorded only,
  the depth is held constant),
* or the horizon is reached (``HORIZON_CAP``).

Opposing SS and GB flows meet only on ``1 < x < C``; ``Arbitration`` decides
what happens there.  When both buyer types are active the buy is booked to
the speculating buyer.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernel
from ._kernel import _constants as K
from ._kernel._pykernel import SplitMix64
from .analytics import sb_equilibrium_reward, ss_equilibrium_reward
from .errors import InvalidConfig, NotTerminated, PinfiError
from .params import (
    MarketParams,
    NormalizedParams,
    break_even_price,
    min_depth_ok,
    normalize,
    normalized_reward,
)
from .pool import PoolState, TradeEvent, TradeKind, quasi_static_buy_step, quasi_static_sell_step

__all__ = [
    "Role",
    "Arbitration",
    "RoleModel",
    "Terminal",
    "SimConfig",
    "ActivityFlags",
    "Ledgers",
    "SimState",
    "Trajectory",
    "activity_flags",
    "initial_state",
    "step",
    "run",
    "detect_rest",
]


class Role(enum.Enum):
    SS = "SS"
    SB = "SB"
    GB = "GB"


ALL_ROLES = frozenset(Role)
_ROLE_BITS = {Role.SS: K.ROLE_SS, Role.SB: K.ROLE_SB, Role.GB: K.ROLE_GB}


class Arbitration(enum.Enum):
    ALTERNATE = "Alternate"
    SELLER_PRIORITY = "SellerPriority"
    BUYER_PRIORITY = "BuyerPriority"
    SEEDED_RANDOM = "SeededRandom"


_POLICY_CODES = {
    Arbitration.ALTERNATE: K.POLICY_ALTERNATE,
    Arbitration.SELLER_PRIORITY: K.POLICY_SELLER,
    Arbitration.BUYER_PRIORITY: K.POLICY_BUYER,
    Arbitration.SEEDED_RANDOM: K.POLICY_RANDOM,
}


class RoleModel(enum.Enum):
    THRESHOLD_ONLY = "ThresholdOnly"
    # sellers also require the block reward to sit below the seller equilibrium curve
    REWARD_AWARE = "RewardAware"


class Terminal(enum.Enum):
    REST = "Rest"
    CESSATION = "Cessation"
    HORIZON_CAP = "HorizonCap"
    LP_EXODUS_FLAGGED = "LpExodusFlagged"


_TERMINAL_CODES = {
    K.TERM_REST: Terminal.REST,
    K.TERM_CESSATION: Terminal.CESSATION,
    K.TERM_HORIZON: Terminal.HORIZON_CAP,
    K.TERM_EXODUS: Terminal.LP_EXODUS_FLAGGED,
}


@dataclass(frozen=True)
class SimConfig:
    params: MarketParams
    x0: float
    step_size: float
    max_time: float
    arbitration: Arbitration = Arbitration.ALTERNATE
    role_model: RoleModel = RoleModel.THRESHOLD_ONLY
    seed: int = 0
    roles: frozenset = ALL_ROLES

    def validated(self) -> "SimConfig":
        try:
            normalize(self.params)
        except PinfiError as exc:
            raise InvalidConfig(f"market parameters: {exc}") from exc
        for name in ("x0", "step_size", "max_time"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidConfig(f"{name} must be finite")
        if not self.x0 > 0:
            raise InvalidConfig("x0 must be positive")
        if not self.step_size > 0:
            raise InvalidConfig("step_size must be positive")
        if not self.step_size < self.params.depth:
            raise InvalidConfig("step_size must be smaller than the pool depth")
        if not self.max_time >= self.step_size:
            raise InvalidConfig("max_time must be at least step_size")
        if not isinstance(self.arbitration, Arbitration):
            raise InvalidConfig(f"unknown arbitration policy {self.arbitration!r}")
        if not isinstance(self.role_model, RoleModel):
            raise InvalidConfig(f"unknown role model {self.role_model!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise InvalidConfig("seed must be an integer in [0, 2**64)")
        if not self.roles or not set(self.roles) <= ALL_ROLES:
            raise InvalidConfig(f"roles must be a non-empty subset of {sorted(r.value for r in Role)}")
        if not min_depth_ok(self.params):
            raise InvalidConfig("pool depth is below the minimum 1 + beta/(p*theta)")
        return self

    @property
    def normalized(self) -> NormalizedParams:
        return normalize(self.params)

    @property
    def reward(self) -> float:
        return normalized_reward(self.params)

    @property
    def initial_price(self) -> float:
        return self.x0 * break_even_price(self.params)

    @property
    def max_ticks(self) -> int:
        return int(math.floor(self.max_time / self.step_size + 1e-9))

    @property
    def role_bits(self) -> int:
        bits = 0
        for role in self.roles:
            bits |= _ROLE_BITS[role]
        return bits


@dataclass(frozen=True)
class ActivityFlags:
    ss_active: bool
    sb_active: bool
    gb_active: bool
    lp_retention: bool


def activity_flags(
    x: float,
    g: float,
    normalized: NormalizedParams,
    role_model: RoleModel = RoleModel.THRESHOLD_ONLY,
    roles: frozenset = ALL_ROLES,
) -> ActivityFlags:
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    A, B, C, inv_n = normalized.A, normalized.B, normalized.C, normalized.inv_depth
    ss = Role.SS in roles and x > 1.0
    if ss and role_model is RoleModel.REWARD_AWARE:
        ss = g < ss_equilibrium_reward(x, A, inv_n)
    return ActivityFlags(
        ss_active=ss,
        sb_active=Role.SB in roles and x < B,
        gb_active=Role.GB in roles and x < C,
        lp_retention=not (x < B and g < sb_equilibrium_reward(x, A, B, inv_n)),
    )


@dataclass(frozen=True)
class Ledgers:
    seller_profit: float = 0.0
    sb_surplus: float = 0.0
    gb_surplus: float = 0.0
    lp_reward: float = 0.0
    lp_imperm_loss: float = 0.0

    @property
    def buyer_surplus(self) -> float:
        return self.sb_surplus + self.gb_surplus


@dataclass(frozen=True)
class SimState:
    pool: PoolState
    tick: int = 0
    time: float = 0.0
    ledgers: Ledgers = field(default_factory=Ledgers)
    last_direction: int = 0
    rng_state: int = 0


def initial_state(config: SimConfig) -> SimState:
    config.validated()
    return SimState(
        pool=PoolState.initial(config.params.depth, config.initial_price),
        rng_state=config.seed,
    )


def step(state: SimState, config: SimConfig) -> tuple[SimState, tuple[TradeEvent, ...]]:
    """Advance one tick through the pool engine.

    Returns the new state and the trade events applied (sell and/or buy;
    each quasi-static trade is a sell+expiry or buy+replenish pair).  With no
    active role the state is returned unchanged with no events.
    """
    params = config.params
    dt = config.step_size
    normalized = config.normalized
    s = break_even_price(params)
    price = state.pool.price
    flags = activity_flags(price / s, config.reward, normalized, config.role_model, config.roles)
    seller = flags.ss_active
    buyer = flags.sb_active or flags.gb_active
    if not (seller or buyer):
        return state, ()

    do_sell, do_buy = seller, buyer
    rng_state = state.rng_state
    if seller and buyer:
        if config.arbitration is Arbitration.SELLER_PRIORITY:
            do_buy = False
        elif config.arbitration is Arbitration.BUYER_PRIORITY:
            do_sell = False
        elif config.arbitration is Arbitration.SEEDED_RANDOM:
            rng = SplitMix64(rng_state)
            if rng.next() >> 63:
                do_sell = False
            else:
                do_buy = False
            rng_state = rng.state

    pool = state.pool
    led = state.ledgers
    inc_sell = inc_sb = inc_gb = 0.0
    events = []
    if do_sell:
        inc_sell = (price - params.beta) * dt
        pool = quasi_static_sell_step(pool, dt)
        events += [TradeEvent(TradeKind.SELL, dt), TradeEvent(TradeKind.EXPIRY, dt)]
    if do_buy:
        price = pool.price
        if flags.sb_active:
            inc_sb = (params.fill_rate * params.theta - params.delta - price) * dt
        else:
            inc_gb = (params.theta - params.delta - price) * dt
        pool = quasi_static_buy_step(pool, dt)
        events += [TradeEvent(TradeKind.BUY, dt), TradeEvent(TradeKind.REPLENISH, dt)]
    tick = state.tick + 1
    ledgers = Ledgers(
        seller_profit=led.seller_profit + inc_sell,
        sb_surplus=led.sb_surplus + inc_sb,
        gb_surplus=led.gb_surplus + inc_gb,
        lp_reward=led.lp_reward + params.gamma * params.depth * dt,
        lp_imperm_loss=(pool.price - config.initial_price) * params.depth,
    )
    direction = (1 if do_buy else 0) - (1 if do_sell else 0)
    new_state = replace(
        state,
        pool=pool,
        tick=tick,
        time=tick * dt,
        ledgers=ledgers,
        last_direction=direction,
        rng_state=rng_state,
    )
    return new_state, tuple(events)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Column-oriented sample record of one run.

    Row ``k`` is the state after ``k`` ticks; ``*_inc`` columns hold the
    ledger increments of the tick that produced the row, and the ``*_cum``
    columns are their running sums in tick order.
    """

    time: np.ndarray
    price: np.ndarray
    x: np.ndarray
    ss_active: np.ndarray
    sb_active: np.ndarray
    gb_active: np.ndarray
    lp_retention: np.ndarray
    events: np.ndarray
    seller_profit_inc: np.ndarray
    sb_surplus_inc: np.ndarray
    gb_surplus_inc: np.ndarray
    lp_reward_inc: np.ndarray
    seller_profit_cum: np.ndarray
    sb_surplus_cum: np.ndarray
    gb_surplus_cum: np.ndarray
    lp_reward_cum: np.ndarray
    lp_imperm_loss: np.ndarray
    terminal: Terminal

    def __len__(self) -> int:
        return self.time.shape[0]

    @property
    def buyer_surplus_cum(self) -> np.ndarray:
        return self.sb_surplus_cum + self.gb_surplus_cum

    def flags(self, k: int) -> ActivityFlags:
        return ActivityFlags(
            bool(self.ss_active[k]), bool(self.sb_active[k]),
            bool(self.gb_active[k]), bool(self.lp_retention[k]),
        )

    @property
    def final_time(self) -> float:
        return float(self.time[-1])

    @property
    def final_x(self) -> float:
        return float(self.x[-1])

    @property
    def final_price(self) -> float:
        return float(self.price[-1])

    @property
    def final_ledgers(self) -> Ledgers:
        return Ledgers(
            seller_profit=float(self.seller_profit_cum[-1]),
            sb_surplus=float(self.sb_surplus_cum[-1]),
            gb_surplus=float(self.gb_surplus_cum[-1]),
            lp_reward=float(self.lp_reward_cum[-1]),
            lp_imperm_loss=float(self.lp_imperm_loss[-1]),
        )

    def equals(self, other: "Trajectory") -> bool:
        """Sample-for-sample bitwise equality."""
        if self.terminal is not other.terminal or len(self) != len(other):
            return False
        for name in _ARRAY_FIELDS:
            if not np.array_equal(getattr(self, name), getattr(other, name)):
                return False
        return True


_ARRAY_FIELDS = (
    "time", "price", "x", "ss_active", "sb_active", "gb_active", "lp_retention", "events",
    "seller_profit_inc", "sb_surplus_inc", "gb_surplus_inc", "lp_reward_inc",
    "seller_profit_cum", "sb_surplus_cum", "gb_surplus_cum", "lp_reward_cum", "lp_imperm_loss",
)


def run(config: SimConfig, backend: str | None = None) -> Trajectory:
    """Simulate until a terminal condition; deterministic in ``config``.

    ``backend`` selects "cython" or "python" explicitly; by default the
    compiled kernel is used when available.
    """
    config.validated()
    impl = _kernel if backend is None else _select_backend(backend)
    p = config.params
    nz = config.normalized
    fl, fg, code = impl.run_kernel(
        p.depth, config.initial_price, p.beta, p.gamma, p.delta, p.theta, p.fill_rate,
        nz.A, nz.B, nz.C, nz.inv_depth, config.reward,
        config.step_size, config.max_ticks, config.role_bits,
        config.role_model is RoleModel.REWARD_AWARE, _POLICY_CODES[config.arbitration],
        config.seed,
    )
    return Trajectory(
        time=fl[:, 0], price=fl[:, 1], x=fl[:, 2],
        ss_active=fg[:, 0].astype(bool), sb_active=fg[:, 1].astype(bool),
        gb_active=fg[:, 2].astype(bool), lp_retention=fg[:, 3].astype(bool),
        events=fg[:, 4].copy(),
        seller_profit_inc=fl[:, 3], sb_surplus_inc=fl[:, 4],
        gb_surplus_inc=fl[:, 5], lp_reward_inc=fl[:, 6],
        seller_profit_cum=fl[:, 7], sb_surplus_cum=fl[:, 8],
        gb_surplus_cum=fl[:, 9], lp_reward_cum=fl[:, 10],
        lp_imperm_loss=fl[:, 11],
        terminal=_TERMINAL_CODES[code],
    )


def _select_backend(name: str):
    found = _kernel.backends()
    if name not in found:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(found)}")
    return found[name]


def detect_rest(trajectory: Trajectory, config: SimConfig | None = None) -> float:
    """Normalized price at which a terminated run came to rest."""
    if trajectory.terminal not in (Terminal.REST, Terminal.CESSATION):
        raise NotTerminated(f"run ended with {trajectory.terminal.value}, not at rest")
    return trajectory.final_x
