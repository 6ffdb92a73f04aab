"""TOML run configuration.

::

    [market]        # alpha, beta, gamma, delta, theta, fill_rate, depth
    [normalized]    # A, B, C, inv_depth -- phase only, instead of [market]
    [sim]           # x0, step_size, max_time, arbitration, role_model, seed, roles
    [grid]          # x_min, x_max, x_steps, g_min, g_max, g_steps
    [output]        # directory, formats

Unknown blocks or keys are rejected.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import InvalidConfig, PinfiError
from .params import MarketParams, NormalizedParams, normalize, normalized_price
from .phase import GridSpec
from .simulation import Arbitration, Role, RoleModel, SimConfig

__all__ = ["RunConfig", "SimBlock", "OutputBlock", "load_config", "parse_config"]

_SIM_KEYS = {"x0", "step_size", "max_time", "arbitration", "role_model", "seed", "roles"}
_GRID_KEYS = {"x_min", "x_max", "x_steps", "g_min", "g_max", "g_steps"}
_NORM_KEYS = {"A", "B", "C", "inv_depth"}
_OUTPUT_KEYS = {"directory", "formats"}
_FORMATS = {"csv", "svg"}
_BLOCKS = {"market", "normalized", "sim", "grid", "output"}


@dataclass(frozen=True)
class SimBlock:
    step_size: float
    max_time: float
    x0: float | None = None
    arbitration: Arbitration = Arbitration.ALTERNATE
    role_model: RoleModel = RoleModel.THRESHOLD_ONLY
    seed: int = 0
    roles: frozenset = frozenset(Role)


@dataclass(frozen=True)
class OutputBlock:
    directory: str = "out"
    formats: tuple[str, ...] = ("csv",)


@dataclass(frozen=True)
class RunConfig:
    market: MarketParams | None = None
    normalized_block: NormalizedParams | None = None
    sim: SimBlock | None = None
    grid: GridSpec | None = None
    output: OutputBlock = field(default_factory=OutputBlock)

    def require_market(self) -> MarketParams:
        if self.market is None:
            raise InvalidConfig("a [market] block is required")
        return self.market

    def normalized(self) -> NormalizedParams:
        if self.normalized_block is not None:
            return self.normalized_block
        return normalize(self.require_market())

    def sim_config(self) -> SimConfig:
        params = self.require_market()
        if self.sim is None:
            raise InvalidConfig("a [sim] block is required")
        x0 = self.sim.x0 if self.sim.x0 is not None else normalized_price(params)
        return SimConfig(
            params=params,
            x0=x0,
            step_size=self.sim.step_size,
            max_time=self.sim.max_time,
            arbitration=self.sim.arbitration,
            role_model=self.sim.role_model,
            seed=self.sim.seed,
            roles=self.sim.roles,
        ).validated()

    def require_grid(self) -> GridSpec:
        if self.grid is None:
            raise InvalidConfig("a [grid] block is required")
        return self.grid


def _check_keys(block: str, data: Any, allowed: set[str], required: set[str] = frozenset()) -> dict:
    if not isinstance(data, dict):
        raise InvalidConfig(f"[{block}] must be a table")
    unknown = set(data) - allowed
    if unknown:
        raise InvalidConfig(f"[{block}] has unknown keys: {', '.join(sorted(unknown))}")
    missing = set(required) - set(data)
    if missing:
        raise InvalidConfig(f"[{block}] is missing keys: {', '.join(sorted(missing))}")
    return data


def _number(block: str, key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidConfig(f"[{block}] {key} must be a number, got {value!r}")
    return float(value)


def _integer(block: str, key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidConfig(f"[{block}] {key} must be an integer, got {value!r}")
    return value


def _enum(block: str, key: str, value: Any, kind):
    try:
        return kind(value)
    except ValueError:
        choices = ", ".join(m.value for m in kind)
        raise InvalidConfig(f"[{block}] {key} must be one of {choices}, got {value!r}") from None


def parse_config(data: dict) -> RunConfig:
    unknown = set(data) - _BLOCKS
    if unknown:
        raise InvalidConfig(f"unknown blocks: {', '.join(sorted(unknown))}")
    market = normalized = sim = grid = None
    try:
        if "market" in data:
            names = set(MarketParams.field_names())
            block = _check_keys("market", data["market"], names, names)
            market = MarketParams(**{k: _number("market", k, v) for k, v in block.items()})
            normalize(market)
        if "normalized" in data:
            if market is not None:
                raise InvalidConfig("give either [market] or [normalized], not both")
            block = _check_keys("normalized", data["normalized"], _NORM_KEYS, _NORM_KEYS)
            normalized = NormalizedParams(**{k: _number("normalized", k, v) for k, v in block.items()})
    except InvalidConfig:
        raise
    except PinfiError as exc:
        raise InvalidConfig(str(exc)) from exc

    if "sim" in data:
        block = _check_keys("sim", data["sim"], _SIM_KEYS, {"step_size", "max_time"})
        roles = block.get("roles", [r.value for r in Role])
        if not isinstance(roles, list):
            raise InvalidConfig("[sim] roles must be a list")
        sim = SimBlock(
            x0=_number("sim", "x0", block["x0"]) if "x0" in block else None,
            step_size=_number("sim", "step_size", block["step_size"]),
            max_time=_number("sim", "max_time", block["max_time"]),
            arbitration=_enum("sim", "arbitration", block.get("arbitration", "Alternate"), Arbitration),
            role_model=_enum("sim", "role_model", block.get("role_model", "ThresholdOnly"), RoleModel),
            seed=_integer("sim", "seed", block.get("seed", 0)),
            roles=frozenset(_enum("sim", "roles", r, Role) for r in roles),
        )
    if "grid" in data:
        block = _check_keys("grid", data["grid"], _GRID_KEYS, _GRID_KEYS)
        grid = GridSpec(
            x_min=_number("grid", "x_min", block["x_min"]),
            x_max=_number("grid", "x_max", block["x_max"]),
            x_steps=_integer("grid", "x_steps", block["x_steps"]),
            g_min=_number("grid", "g_min", block["g_min"]),
            g_max=_number("grid", "g_max", block["g_max"]),
            g_steps=_integer("grid", "g_steps", block["g_steps"]),
        )
        try:
            grid.axes()
        except PinfiError as exc:
            raise InvalidConfig(str(exc)) from exc
    output = OutputBlock()
    if "output" in data:
        block = _check_keys("output", data["output"], _OUTPUT_KEYS)
        directory = block.get("directory", output.directory)
        formats = block.get("formats", list(output.formats))
        if not isinstance(directory, str) or not directory:
            raise InvalidConfig("[output] directory must be a non-empty string")
        if not isinstance(formats, list) or not set(formats) <= _FORMATS:
            raise InvalidConfig(f"[output] formats must be a list drawn from {sorted(_FORMATS)}")
        output = OutputBlock(directory=directory, formats=tuple(formats))
    return RunConfig(market=market, normalized_block=normalized, sim=sim, grid=grid, output=output)


def load_config(path: str | Path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise InvalidConfig(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise InvalidConfig(f"{path} is not valid TOML: {exc}") from exc
    return parse_config(data)
