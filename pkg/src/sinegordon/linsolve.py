"""Matrix-free conjugate gradients for the implicit operator A = c0 I - c_lap Lap_h."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Field, GridSpec
from .ops import OperatorCoeffs, apply_A_array, restrict


@dataclass
class SolveStats:
    iterations: int
    final_residual: float
    converged: bool


def unknown_count(grid: GridSpec) -> int:
    return grid.M * grid.M if grid.periodic else (grid.M - 1) ** 2


def default_max_iter(grid: GridSpec) -> int:
    return int(10 * math.sqrt(unknown_count(grid))) + 100


def _dot(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.dot(a.ravel(), b.ravel()))


def cg_arrays(coeffs, h, periodic, rhs, x0, tol, max_iter):
    """CG on raw arrays. ``rhs`` and ``x0`` must vanish on any Dirichlet boundary."""
    def A(u):
        return apply_A_array(u, coeffs, h, periodic)

    x = x0.copy()
    bnorm = math.sqrt(_dot(rhs, rhs))
    if bnorm == 0.0:
        return np.zeros_like(rhs), SolveStats(0, 0.0, True)
    target = tol * bnorm

    r = rhs - A(x)
    rr = _dot(r, r)
    p = r.copy()
    it = 0
    while True:
        if not math.isfinite(rr):
            raise FloatingPointError("non-finite residual in CG; check dt and coefficients")
        if math.sqrt(rr) <= target:
            # guard against drift of the recursive residual
            r = rhs - A(x)
            rr = _dot(r, r)
            if math.sqrt(rr) <= target:
                return x, SolveStats(it, math.sqrt(rr) / bnorm, True)
            p = r.copy()
        if it >= max_iter:
            return x, SolveStats(it, math.sqrt(rr) / bnorm, False)
        Ap = A(p)
        pAp = _dot(p, Ap)
        if not (math.isfinite(pAp) and pAp > 0):
            raise FloatingPointError("operator is not positive definite on the search direction")
        step = rr / pAp
        x += step * p
        r -= step * Ap
        rr_new = _dot(r, r)
        p = r + (rr_new / rr) * p
        rr = rr_new
        it += 1


def cg_solve(coeffs: OperatorCoeffs, grid: GridSpec, rhs: Field, x0: Field | None = None,
             tol: float = 1e-12, max_iter: int | None = None) -> tuple[Field, SolveStats]:
    """Solve ``A x = rhs`` on the unknown set.

    Returns the solution (zero on the Dirichlet boundary) and a
    :class:`SolveStats` whose ``final_residual`` is the true relative residual
    ``||rhs - A x|| / ||rhs||``. Non-convergence is reported, not raised.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iter is None:
        max_iter = default_max_iter(grid)
    b = restrict(rhs.values, grid)
    x = np.zeros(grid.shape) if x0 is None else restrict(x0.values, grid)
    if not (np.all(np.isfinite(b)) and np.all(np.isfinite(x))):
        raise FloatingPointError("non-finite input to CG")
    sol, stats = cg_arrays(coeffs, grid.h, grid.periodic, b, x, tol, max_iter)
    return Field(grid, sol), stats
