"""Error norms against exact solutions and refinement studies."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .grid import Field, GridSpec
from .ops import grad_norm2_sq, norm2
from .scenarios import Scenario
from .stepper import SimState, StepStats, run

DEFAULT_CHECKPOINTS = (1.0, 2.0, 3.0, 4.0, 5.0)


@dataclass(frozen=True)
class ErrorReport:
    t: float
    err_u: float
    err_v: float
    err_grad_u: float


@dataclass
class ConvergenceRow:
    level: int
    dt: float
    h: float
    errors: dict[float, ErrorReport]
    observed_order_u: dict[float, float] = field(default_factory=dict)
    observed_order_v: dict[float, float] = field(default_factory=dict)


def error_norms(state: SimState, scenario: Scenario, grid: GridSpec) -> ErrorReport:
    ue, ve = scenario.exact_state(grid, state.t)
    eu = Field(grid, ue.values - state.u.values)
    ev = Field(grid, ve.values - state.v.values)
    return ErrorReport(state.t, norm2(eu), norm2(ev), math.sqrt(grad_norm2_sq(eu)))


def observed_order(err_coarse: float, err_fine: float) -> float:
    """Base-2 log of the error ratio between a run and its twice-refined companion."""
    if not (err_coarse > 0 and err_fine > 0):
        raise ValueError("errors must be positive to form an order")
    return math.log2(err_coarse / err_fine)


def checkpoint_steps(checkpoints: Iterable[float], dt: float) -> dict[int, float]:
    """Map each checkpoint time to the nearest step index."""
    return {int(round(t / dt)): float(t) for t in checkpoints}


def run_with_checkpoints(scenario: Scenario, dt: float, M: int,
                         checkpoints: Iterable[float], **param_kw) -> dict[float, ErrorReport]:
    grid = scenario.grid(M)
    params = scenario.params(grid, dt, **param_kw)
    state = scenario.initial_state(grid)
    wanted = checkpoint_steps(checkpoints, dt)
    reports: dict[float, ErrorReport] = {}

    def record(s: SimState, stats: StepStats | None = None) -> None:
        if s.n in wanted:
            reports[wanted[s.n]] = error_norms(s, scenario, grid)

    record(state)
    run(state, params, grid, scenario.boundary, n_steps=max(wanted, default=0),
        observers=[record])
    return reports


def convergence_study(scenario: Scenario, base_dt: float, base_h: float, levels: int,
                      checkpoints: Iterable[float] = DEFAULT_CHECKPOINTS,
                      **param_kw) -> list[ConvergenceRow]:
    """Run at (base_dt / 2^k, base_h / 2^k) for k < levels and compare consecutive levels."""
    if not scenario.has_exact:
        raise ValueError(f"scenario {scenario.name!r} has no exact solution")
    if levels < 2:
        raise ValueError("a convergence study needs at least two levels")
    checkpoints = sorted(float(t) for t in checkpoints)
    base_M = scenario.grid_for_h(base_h).M
    rows: list[ConvergenceRow] = []
    for k in range(levels):
        dt, M = base_dt / 2**k, base_M * 2**k
        errors = run_with_checkpoints(scenario, dt, M, checkpoints, **param_kw)
        row = ConvergenceRow(k, dt, scenario.length / M, errors)
        if rows:
            prev = rows[-1].errors
            for t in checkpoints:
                row.observed_order_u[t] = _order_or_nan(prev[t].err_u, errors[t].err_u)
                row.observed_order_v[t] = _order_or_nan(prev[t].err_v, errors[t].err_v)
        rows.append(row)
    return rows


def _order_or_nan(a: float, b: float) -> float:
    return observed_order(a, b) if a > 0 and b > 0 else math.nan
