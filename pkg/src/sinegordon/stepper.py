"""Semi-implicit conservative time stepping with the lagged-nonlinearity iteration.

Each step solves

    (2/dt^2 + beta/dt) u' - (alpha/2) Lap_h u'
        = phi * psi(u, u') + (beta/dt) u + (alpha/2) Lap_h u + kappa(u, v) + F(t + dt/2)

for u' by repeatedly solving the constant SPD system with the quotient
``psi`` frozen at the previous iterate, then sets v' = 2 (u' - u)/dt - v.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .grid import BC, BoundaryData, Field, GridSpec
from .linsolve import SolveStats, cg_arrays, default_max_iter
from .nonlinearity import psi
from .ops import OperatorCoeffs, apply_A_array, lap_array


Forcing = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


class SolverError(RuntimeError):
    """Base class for failures while advancing a simulation."""


class GuardViolation(SolverError, ValueError):
    """The time step breaks the contraction condition of the linear iteration."""


class ConvergenceError(SolverError):
    """Outer fixed-point iteration or inner CG solve did not converge."""


def timestep_bound(beta: float, phi0: float) -> float:
    """Largest time step for which the lagged iteration is a contraction.

    Returns ``inf`` when ``phi0 == 0``.
    """
    if beta < 0 or phi0 < 0:
        raise ValueError("beta and phi0 must be non-negative")
    if phi0 == 0:
        return math.inf
    return (beta + math.sqrt(beta * beta + 8.0 * phi0)) / (2.0 * phi0)


@dataclass
class SchemeParams:
    alpha: float
    beta: float
    dt: float
    phi: Field
    forcing: Forcing | None = None
    iter_tol: float = 1e-12
    max_outer: int = 100
    cg_tol: float = 1e-12
    cg_max_iter: int | None = None
    guard_mode: str = "error"
    phi0: float = field(init=False)

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if not (self.iter_tol > 0 and self.cg_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.guard_mode not in ("error", "warn"):
            raise ValueError(f"guard_mode must be 'error' or 'warn', got {self.guard_mode!r}")
        if np.any(self.phi.values < 0):
            raise ValueError("phi must be non-negative")
        self.phi0 = float(np.max(self.phi.values))
        bound = timestep_bound(self.beta, self.phi0)
        if not self.dt < bound:
            msg = (f"dt = {self.dt:g} violates the contraction bound dt < {bound:.10g} "
                   f"(beta = {self.beta:g}, phi0 = {self.phi0:g})")
            if self.guard_mode == "error":
                raise GuardViolation(msg)
            warnings.warn(msg, RuntimeWarning, stacklevel=2)

    @property
    def coeffs(self) -> OperatorCoeffs:
        return OperatorCoeffs.from_scheme(self.alpha, self.beta, self.dt)


def contraction_rate_bound(params: SchemeParams) -> float:
    """Per-sweep contraction factor of the iteration error in the l2 norm."""
    phi0 = params.phi0
    if phi0 == 0:
        return 0.0
    denom = 2.0 / params.dt**2 + params.beta / params.dt - 0.5 * phi0
    if denom <= 0.5 * phi0:
        raise GuardViolation("time step outside the contraction regime")
    return math.sqrt(0.5 * phi0 / denom)


@dataclass
class SimState:
    u: Field
    v: Field
    n: int = 0
    t: float = 0.0


@dataclass
class StepStats:
    outer_iterations: int
    contraction_ratios: list[float]
    cg_stats: list[SolveStats]
    fixed_point_residual: float = math.nan


def _boundary_field(grid: GridSpec, g: BoundaryData, t: float) -> np.ndarray:
    out = np.zeros(grid.shape)
    mask = grid.boundary_mask()
    X, Y = grid.mesh()
    out[mask] = np.broadcast_to(np.asarray(g(X[mask], Y[mask], t), dtype=float), X[mask].shape)
    return out


def _zero_ring(a: np.ndarray) -> None:
    a[0, :] = a[-1, :] = a[:, 0] = a[:, -1] = 0.0


def _norm(a: np.ndarray, h: float) -> float:
    return h * math.sqrt(float(np.dot(a.ravel(), a.ravel())))


def step(state: SimState, params: SchemeParams, grid: GridSpec,
         boundary_data: BoundaryData | None = None) -> tuple[SimState, StepStats]:
    """Advance ``state`` by one time step."""
    dt, h, periodic = params.dt, grid.h, grid.periodic
    coeffs = params.coeffs
    u, v = state.u.values, state.v.values
    phi = params.phi.values
    t_new = (state.n + 1) * dt
    if boundary_data is None and grid.bc is BC.DIRICHLET:
        raise ValueError("Dirichlet grid needs boundary data")

    rhs_fixed = (params.beta / dt) * u + coeffs.c_lap * lap_array(u, h, periodic) \
        + (2.0 * u / dt + 2.0 * v) / dt
    if params.forcing is not None:
        X, Y = grid.mesh()
        rhs_fixed = rhs_fixed + params.forcing(X, Y, (state.n + 0.5) * dt)

    w = u.copy()
    mask = grid.boundary_mask()
    if not periodic:
        if boundary_data is not None:
            bd = _boundary_field(grid, boundary_data, t_new)
        else:
            bd = np.zeros(grid.shape)
        # boundary neighbours of the implicit Laplacian move to the right side
        rhs_fixed = rhs_fixed + coeffs.c_lap * lap_array(bd, h, False)
        _zero_ring(rhs_fixed)
        w = np.where(mask, bd, u)

    max_iter = params.cg_max_iter or default_max_iter(grid)
    ratios: list[float] = []
    cg_stats: list[SolveStats] = []
    prev_diff = None
    for sweep in range(1, params.max_outer + 1):
        rhs = rhs_fixed + phi * psi(u, w)
        # defect-correction form: solve for the update so CG's relative
        # tolerance applies to the update itself
        interior = w if periodic else np.where(mask, 0.0, w)
        defect = rhs - apply_A_array(interior, coeffs, h, periodic)
        if not periodic:
            _zero_ring(defect)
        delta, stats = cg_arrays(coeffs, h, periodic, defect, np.zeros_like(defect),
                                 params.cg_tol, max_iter)
        cg_stats.append(stats)
        if not stats.converged:
            raise ConvergenceError(
                f"CG did not converge at step {state.n + 1}, sweep {sweep} "
                f"(relative residual {stats.final_residual:.3e})")
        diff = _norm(delta, h)
        scale = max(1.0, _norm(w, h))
        w = w + delta
        if prev_diff is not None:
            ratios.append(diff / prev_diff if prev_diff > 0 else 0.0)
        prev_diff = diff
        if diff <= params.iter_tol * scale:
            break
    else:
        raise ConvergenceError(
            f"outer iteration did not converge in {params.max_outer} sweeps at step "
            f"{state.n + 1}; last update norm {prev_diff:.3e}")

    res = apply_A_array(w if periodic else np.where(mask, 0.0, w),
                        coeffs, h, periodic) - rhs_fixed - phi * psi(u, w)
    if not periodic:
        _zero_ring(res)
    v_new = 2.0 * (w - u) / dt - v
    new = SimState(Field(grid, w), Field(grid, v_new), state.n + 1, t_new)
    return new, StepStats(sweep, ratios, cg_stats, _norm(res, h))


def run(initial: SimState, params: SchemeParams, grid: GridSpec,
        boundary_data: BoundaryData | None = None, t_end: float | None = None,
        observers: Iterable[Callable[[SimState, StepStats], None]] = (),
        n_steps: int | None = None) -> SimState:
    """Step until the first ``n`` with ``n * dt >= t_end`` (or for ``n_steps`` steps).

    Each observer is called as ``observer(state, stats)`` after every step.
    """
    if n_steps is None:
        if t_end is None:
            raise ValueError("give t_end or n_steps")
        if t_end < initial.t:
            raise ValueError("t_end lies before the initial time")
        # tolerate rounding in t_end / dt so that e.g. 1.0 / 0.1 gives 10 steps
        n_final = math.ceil(t_end / params.dt - 1e-9)
        n_steps = max(0, n_final - initial.n)
    observers = list(observers)
    state = initial
    for _ in range(n_steps):
        state, stats = step(state, params, grid, boundary_data)
        for obs in observers:
            obs(state, stats)
    return state
