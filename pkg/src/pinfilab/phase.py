"""Zone classification of the (normalized price, normalized reward) plane.

Zones are cut by the two equilibrium curves and the verticals ``x = B``,
``x = 1`` and ``x = C``::

    x < B        g <  g_sb(x) -> aB    g >= g_sb(x) -> aC
    B <= x < 1   any g        -> aA
    1 <= x < C   g <  g_ss(x) -> aD    g >= g_ss(x) -> aG
    x >= C       g <  g_ss(x) -> aE    g >= g_ss(x) -> aF

Ties on a curve go to the LP-retaining zone.  For ``C <= 1`` the band
``1 <= x < C`` is empty and so is aG.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernel
from ._kernel import _constants as K
from .analytics import (
    RewardRange,
    reward_bounds,
    sb_equilibrium_reward,
    ss_equilibrium_reward,
)
from .errors import InfeasibleBand, InsufficientDepth, InvalidGridSpec
from .params import NormalizedParams

__all__ = [
    "Zone",
    "CoarseZone",
    "GridSpec",
    "PhaseGrid",
    "classify",
    "classify_coarse",
    "sweep",
    "stable_segment",
    "sample_curves",
    "BAND_CASES",
]

X_MAX = 10.0
G_MAX = 5.0


class Zone(enum.Enum):
    aA = "aA"
    aB = "aB"
    aC = "aC"
    aD = "aD"
    aE = "aE"
    aF = "aF"
    aG = "aG"


class CoarseZone(enum.Enum):
    SS = "SS"
    LP = "LP"
    SB = "SB"


ZONE_BY_CODE = {
    K.ZONE_AA: Zone.aA, K.ZONE_AB: Zone.aB, K.ZONE_AC: Zone.aC, K.ZONE_AD: Zone.aD,
    K.ZONE_AE: Zone.aE, K.ZONE_AF: Zone.aF, K.ZONE_AG: Zone.aG,
}
CODE_BY_ZONE = {zone: code for code, zone in ZONE_BY_CODE.items()}

# A = 0.3, B = 0.7, 1/N = 0.001 with the genuine-buyer limit below, at and above x = 1
BAND_CASES = {
    "closed": NormalizedParams(A=0.3, B=0.7, C=0.7, inv_depth=0.001),
    "degenerate": NormalizedParams(A=0.3, B=0.7, C=1.0, inv_depth=0.001),
    "open": NormalizedParams(A=0.3, B=0.7, C=1.3, inv_depth=0.001),
}


def classify(x: float, g: float, normalized: NormalizedParams) -> Zone:
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    if g < 0:
        raise ValueError(f"g must be non-negative, got {g}")
    A, B, C, inv_n = normalized.A, normalized.B, normalized.C, normalized.inv_depth
    if x < B:
        return Zone.aB if g < sb_equilibrium_reward(x, A, B, inv_n) else Zone.aC
    if x < 1.0:
        return Zone.aA
    below = g < ss_equilibrium_reward(x, A, inv_n)
    if x < C:
        return Zone.aD if below else Zone.aG
    return Zone.aE if below else Zone.aF


def classify_coarse(x: float, g: float, normalized: NormalizedParams) -> CoarseZone:
    """Two-party label: which role a resource holder prefers."""
    A, B, inv_n = normalized.A, normalized.B, normalized.inv_depth
    if x > 1.0 and g < ss_equilibrium_reward(x, A, inv_n):
        return CoarseZone.SS
    if x < B and g < sb_equilibrium_reward(x, A, B, inv_n):
        return CoarseZone.SB
    return CoarseZone.LP


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    x_steps: int
    g_min: float
    g_max: float
    g_steps: int

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        for name in ("x_steps", "g_steps"):
            n = getattr(self, name)
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise InvalidGridSpec(f"{name} must be a positive integer")
        if not 0.0 < self.x_min <= self.x_max <= X_MAX:
            raise InvalidGridSpec(f"x axis must satisfy 0 < x_min <= x_max <= {X_MAX}")
        if not 0.0 <= self.g_min <= self.g_max <= G_MAX:
            raise InvalidGridSpec(f"g axis must satisfy 0 <= g_min <= g_max <= {G_MAX}")
        if (self.x_steps > 1 and self.x_min == self.x_max) or (self.g_steps > 1 and self.g_min == self.g_max):
            raise InvalidGridSpec("an axis with several steps needs a non-empty range")
        return (np.linspace(self.x_min, self.x_max, self.x_steps),
                np.linspace(self.g_min, self.g_max, self.g_steps))


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    """Classified grid; ``codes[i, j]`` labels ``(xs[i], gs[j])``."""

    xs: np.ndarray
    gs: np.ndarray
    codes: np.ndarray
    g_ss: np.ndarray
    g_sb: np.ndarray
    normalized: NormalizedParams
    segment: tuple[tuple[float, float], tuple[float, float]] | None

    def label(self, i: int, j: int) -> Zone:
        return ZONE_BY_CODE[int(self.codes[i, j])]

    def counts(self) -> dict[Zone, int]:
        values, counts = np.unique(self.codes, return_counts=True)
        found = {ZONE_BY_CODE[int(v)]: int(c) for v, c in zip(values, counts)}
        return {zone: found.get(zone, 0) for zone in Zone}

    def count(self, zone: Zone) -> int:
        return int(np.count_nonzero(self.codes == CODE_BY_ZONE[zone]))


def sample_curves(xs: np.ndarray, normalized: NormalizedParams) -> tuple[np.ndarray, np.ndarray]:
    """Both equilibrium curves on ``xs``; NaN outside each curve's domain."""
    A, B, inv_n = normalized.A, normalized.B, normalized.inv_depth
    g_ss = np.full(xs.shape, np.nan)
    g_sb = np.full(xs.shape, np.nan)
    for i, x in enumerate(xs):
        x = float(x)
        if x >= 1.0:
            g_ss[i] = ss_equilibrium_reward(x, A, inv_n)
        if 0.0 < x <= B:
            g_sb[i] = sb_equilibrium_reward(x, A, B, inv_n)
    return g_ss, g_sb


def stable_segment(normalized: NormalizedParams) -> tuple[tuple[float, float], tuple[float, float]]:
    """Endpoints (pD, pB') of the stable stretch of the seller equilibrium curve."""
    band: RewardRange = reward_bounds(normalized)
    return (1.0, band.lower), (normalized.C, band.upper)


def sweep(spec: GridSpec, normalized: NormalizedParams, backend: str | None = None) -> PhaseGrid:
    xs, gs = spec.axes()
    impl = _kernel if backend is None else _kernel.backends()[backend]
    codes = impl.classify_grid(xs, gs, normalized.A, normalized.B, normalized.C, normalized.inv_depth)
    g_ss, g_sb = sample_curves(xs, normalized)
    try:
        segment = stable_segment(normalized)
    except (InfeasibleBand, InsufficientDepth):
        segment = None
    return PhaseGrid(xs=xs, gs=gs, codes=codes, g_ss=g_ss, g_sb=g_sb,
                     normalized=normalized, segment=segment)
