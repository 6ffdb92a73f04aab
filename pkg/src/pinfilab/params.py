"""Economic parameters of a dissipative-asset pool and their dimensionless form.

All prices and fees are in USD per power*hour; the pool depth is in
power*hours.  Every quantity downstream is expressed in units of the seller
break-even price ``beta + p*theta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .errors import InvalidParameter

__all__ = [
    "MarketParams",
    "NormalizedParams",
    "validate",
    "normalize",
    "break_even_price",
    "normalized_price",
    "normalized_reward",
    "min_depth_ok",
    "min_depth",
    "feasible_band",
    "alpha_band",
    "market_from_normalized",
]


@dataclass(frozen=True)
class MarketParams:
    alpha: float
    beta: float
    gamma: float
    delta: float
    theta: float
    fill_rate: float
    depth: float

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def replace(self, **changes: float) -> "MarketParams":
        data = {name: getattr(self, name) for name in self.field_names()}
        data.update(changes)
        return MarketParams(**data)


@dataclass(frozen=True)
class NormalizedParams:
    """The dimensionless vector ``(A, B, C, 1/N)``.

    ``A`` is the seller fee share, ``B`` the speculating-buyer exit price,
    ``C`` the genuine-buyer exit price, all in units of ``beta + p*theta``.
    Built from :func:`normalize` the vector also satisfies
    ``(1-p)(1-A) = p(C-B)``; building it directly (e.g. to sweep a chosen
    vector) only enforces the ordering constraints.
    """

    A: float
    B: float
    C: float
    inv_depth: float

    def __post_init__(self) -> None:
        for name in ("A", "B", "C", "inv_depth"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameter(name, "must be finite")
        if not 0.0 <= self.A < 1.0:
            raise InvalidParameter("A", f"must lie in [0, 1), got {self.A}")
        if self.C < self.B:
            raise InvalidParameter("C", f"must be >= B ({self.B}), got {self.C}")
        if self.inv_depth <= 0.0:
            raise InvalidParameter("inv_depth", "must be positive")

    @property
    def depth(self) -> float:
        return 1.0 / self.inv_depth

    def identity_residual(self, fill_rate: float) -> float:
        """Relative residual of ``(1-p)(1-A) - p(C-B)``."""
        lhs = (1.0 - fill_rate) * (1.0 - self.A)
        rhs = fill_rate * (self.C - self.B)
        scale = max(abs(lhs), abs(rhs), 1e-300)
        return abs(lhs - rhs) / scale

    @property
    def implied_fill_rate(self) -> float:
        # p solving the identity; equals 1 only for the degenerate C == B
        return (1.0 - self.A) / ((1.0 - self.A) + (self.C - self.B))

    def min_depth_ok(self) -> bool:
        return 1.0 - self.inv_depth - self.A >= 0.0

    def feasible_band(self) -> bool:
        return self.C > 1.0


def _check_finite(raw: MarketParams) -> None:
    for name in MarketParams.field_names():
        value = getattr(raw, name)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InvalidParameter(name, f"must be a real number, got {value!r}")
        if not math.isfinite(value):
            raise InvalidParameter(name, "must be finite")


def validate(raw: MarketParams) -> MarketParams:
    """Return ``raw`` unchanged if it is a valid parameter set.

    Violations raise :class:`InvalidParameter`; nothing is clamped.
    """
    _check_finite(raw)
    for name in ("alpha", "beta", "gamma", "delta"):
        if getattr(raw, name) < 0:
            raise InvalidParameter(name, "must be non-negative")
    if raw.theta <= 0:
        raise InvalidParameter("theta", "must be positive")
    if not 0.0 < raw.fill_rate < 1.0:
        raise InvalidParameter("fill_rate", f"must lie in the open interval (0, 1), got {raw.fill_rate}")
    if raw.depth <= 0:
        raise InvalidParameter("depth", "must be positive")
    if raw.beta + raw.fill_rate * raw.theta <= 0:
        raise InvalidParameter("beta", "beta + fill_rate*theta must be positive")
    return raw


def break_even_price(params: MarketParams) -> float:
    return params.beta + params.fill_rate * params.theta


def normalize(params: MarketParams) -> NormalizedParams:
    validate(params)
    s = break_even_price(params)
    p_theta = params.fill_rate * params.theta
    return NormalizedParams(
        A=params.beta / s,
        B=(p_theta - params.delta) / s,
        C=(params.theta - params.delta) / s,
        inv_depth=1.0 / params.depth,
    )


def normalized_price(params: MarketParams) -> float:
    """Pool price in units of the seller break-even price."""
    return params.alpha / break_even_price(params)


def normalized_reward(params: MarketParams) -> float:
    return params.gamma / break_even_price(params)


def min_depth(params: MarketParams) -> float:
    return 1.0 + params.beta / (params.fill_rate * params.theta)


def min_depth_ok(params: MarketParams) -> bool:
    validate(params)
    return params.depth >= min_depth(params)


def alpha_band(params: MarketParams) -> tuple[float, float]:
    """(lower, upper) initial prices bracketing the seller/genuine-buyer overlap."""
    return break_even_price(params), params.theta - params.delta


def feasible_band(params: MarketParams) -> bool:
    validate(params)
    return params.beta + params.delta < (1.0 - params.fill_rate) * params.theta


def market_from_normalized(
    normalized: NormalizedParams,
    break_even: float = 1.0,
    x: float = 1.0,
    g: float = 0.0,
) -> MarketParams:
    """Raw parameters realizing ``normalized`` at normalized price ``x`` and reward ``g``.

    The fill rate is the one implied by the identity; requires ``B <= 1 - A``
    so that the buyer fee comes out non-negative.
    """
    p = normalized.implied_fill_rate
    if not 0.0 < p < 1.0:
        raise InvalidParameter("C", "C == B cannot be realized with a fill rate below 1")
    if normalized.B > 1.0 - normalized.A:
        raise InvalidParameter("B", "B > 1 - A would need a negative buyer fee")
    s = break_even
    theta = (1.0 - normalized.A) * s / p
    params = MarketParams(
        alpha=x * s,
        beta=normalized.A * s,
        gamma=g * s,
        delta=max(theta - normalized.C * s, 0.0),
        theta=theta,
        fill_rate=p,
        depth=normalized.depth,
    )
    return validate(params)
