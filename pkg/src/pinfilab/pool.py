"""Constant-product pool over a dissipative / non-dissipative asset pair.

The pool is a pure state machine: every operation returns a new
:class:`PoolState`.  Sells and buys move along the constant-product curve;
expiry and replenishment change only the dissipative reserve.  Composing a
trade with the matching expiry/replenishment gives the quasi-static price
maps ``price * N/(N+dt)`` and ``price * N/(N-dt)``.

The ``*_map`` helpers hold the arithmetic and accept numpy arrays as well as
floats; the simulator kernels use the same expressions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidPoolState, NonPositiveSize, SizeExceedsReserve

__all__ = [
    "PoolState",
    "TradeKind",
    "TradeEvent",
    "spot_price",
    "apply_sell",
    "apply_buy",
    "apply_expiry",
    "apply_replenish",
    "apply_event",
    "quasi_static_sell_step",
    "quasi_static_buy_step",
    "sell_map",
    "buy_map",
]


@dataclass(frozen=True)
class PoolState:
    dissipative_reserve: float
    numeraire_reserve: float

    def __post_init__(self) -> None:
        n, y = self.dissipative_reserve, self.numeraire_reserve
        if not (math.isfinite(n) and math.isfinite(y)) or n <= 0 or y <= 0:
            raise InvalidPoolState(f"reserves must be finite and positive, got ({n}, {y})")

    @classmethod
    def initial(cls, depth: float, price: float) -> "PoolState":
        """Pool holding ``depth`` power*hours at exchange rate ``price``."""
        return cls(depth, price * depth)

    @property
    def price(self) -> float:
        return self.numeraire_reserve / self.dissipative_reserve

    @property
    def invariant(self) -> float:
        return self.dissipative_reserve * self.numeraire_reserve


class TradeKind(enum.Enum):
    SELL = "Sell"
    BUY = "Buy"
    EXPIRY = "Expiry"
    REPLENISH = "Replenish"


@dataclass(frozen=True)
class TradeEvent:
    kind: TradeKind
    size: float


def sell_map(n, y, size):
    """Reserves after ``size`` units of the dissipative asset are sold in."""
    return n + size, n / (n + size) * y


def buy_map(n, y, size):
    """Reserves after ``size`` units of the dissipative asset are bought out."""
    return n - size, n / (n - size) * y


def _positive(size: float) -> None:
    if not size > 0:
        raise NonPositiveSize(f"trade size must be positive, got {size}")


def spot_price(pool: PoolState) -> float:
    return pool.price


def apply_sell(pool: PoolState, size: float) -> PoolState:
    _positive(size)
    return PoolState(*sell_map(pool.dissipative_reserve, pool.numeraire_reserve, size))


def apply_buy(pool: PoolState, size: float) -> PoolState:
    _positive(size)
    if size >= pool.dissipative_reserve:
        raise SizeExceedsReserve(
            f"buy of {size} would exhaust the dissipative reserve {pool.dissipative_reserve}"
        )
    return PoolState(*buy_map(pool.dissipative_reserve, pool.numeraire_reserve, size))


def apply_expiry(pool: PoolState, size: float) -> PoolState:
    """Remove expired dissipative units; value leaves the pool, the product drops."""
    _positive(size)
    if size >= pool.dissipative_reserve:
        raise SizeExceedsReserve(
            f"expiry of {size} exceeds the dissipative reserve {pool.dissipative_reserve}"
        )
    return PoolState(pool.dissipative_reserve - size, pool.numeraire_reserve)


def apply_replenish(pool: PoolState, size: float) -> PoolState:
    _positive(size)
    return PoolState(pool.dissipative_reserve + size, pool.numeraire_reserve)


_DISPATCH = {
    TradeKind.SELL: apply_sell,
    TradeKind.BUY: apply_buy,
    TradeKind.EXPIRY: apply_expiry,
    TradeKind.REPLENISH: apply_replenish,
}


def apply_event(pool: PoolState, event: TradeEvent) -> PoolState:
    return _DISPATCH[event.kind](pool, event.size)


def quasi_static_sell_step(pool: PoolState, size: float) -> PoolState:
    """Sell ``size`` and let it expire at once.

    The dissipative reserve is restored to its pre-step value by
    construction rather than by ``(n + size) - size``, which can be off by
    one ulp.
    """
    expired = apply_expiry(apply_sell(pool, size), size)
    return PoolState(pool.dissipative_reserve, expired.numeraire_reserve)


def quasi_static_buy_step(pool: PoolState, size: float) -> PoolState:
    """Buy ``size`` and have LPs replenish it at once."""
    replenished = apply_replenish(apply_buy(pool, size), size)
    return PoolState(pool.dissipative_reserve, replenished.numeraire_reserve)
