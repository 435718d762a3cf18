"""Run configuration read from a flat JSON object."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    scenario: str
    alpha: float | None = None
    beta: float | None = None
    dt: float | None = None
    m: int | None = None
    h: float | None = None
    t_end: float | None = None
    iter_tol: float = 1e-12
    cg_tol: float = 1e-12
    max_outer: int = 100
    guard_mode: str = "error"
    output_dir: str = "."
    snapshot_every: int = 0
    checkpoints: list[float] | None = None

    def __post_init__(self):
        if self.guard_mode not in ("error", "warn"):
            raise ConfigError(f"guard_mode must be 'error' or 'warn', got {self.guard_mode!r}")
        if not (self.iter_tol > 0 and self.cg_tol > 0):
            raise ConfigError("tolerances must be positive")
        for key in ("dt", "t_end", "h"):
            val = getattr(self, key)
            if val is not None and not val > 0:
                raise ConfigError(f"{key} must be positive")
        if self.m is not None and self.h is not None:
            raise ConfigError("give at most one of m and h")
        if self.max_outer < 1 or self.snapshot_every < 0:
            raise ConfigError("max_outer must be >= 1 and snapshot_every >= 0")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "scenario" not in data:
            raise ConfigError("config must name a scenario")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return RunConfig.from_dict(data)
