"""Second-order difference operators, discrete inner product and the implicit operator.

All sums run over the grid's full node set: (M+1)^2 nodes for Dirichlet
grids and M^2 nodes for periodic grids. The implicit operator acts on the
unknown set, which is the interior for Dirichlet grids and every node for
periodic ones.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, GridSpec


@dataclass(frozen=True)
class OperatorCoeffs:
    """Coefficients of ``A = c0 I - c_lap Lap_h``."""

    c0: float
    c_lap: float

    def __post_init__(self):
        if not self.c0 > 0:
            raise ValueError(f"c0 must be positive, got {self.c0}")
        if not self.c_lap >= 0:
            raise ValueError(f"c_lap must be non-negative, got {self.c_lap}")

    @classmethod
    def from_scheme(cls, alpha: float, beta: float, dt: float) -> "OperatorCoeffs":
        return cls(2.0 / dt**2 + beta / dt, 0.5 * alpha)


def lap_array(u: np.ndarray, h: float, periodic: bool) -> np.ndarray:
    # x- and y-neighbour sums are formed separately so that sx + sy is
    # bitwise symmetric under transposition
    if periodic:
        sx = np.roll(u, -1, axis=0) + np.roll(u, 1, axis=0)
        sy = np.roll(u, -1, axis=1) + np.roll(u, 1, axis=1)
        return (sx + sy - 4.0 * u) / (h * h)
    out = np.zeros_like(u)
    c = u[1:-1, 1:-1]
    sx = u[2:, 1:-1] + u[:-2, 1:-1]
    sy = u[1:-1, 2:] + u[1:-1, :-2]
    out[1:-1, 1:-1] = (sx + sy - 4.0 * c) / (h * h)
    return out


def laplacian(field: Field, grid: GridSpec | None = None) -> Field:
    grid = _grid_of(field, grid)
    return Field(grid, lap_array(field.values, grid.h, grid.periodic))


def inner(f: Field, g: Field, grid: GridSpec | None = None) -> float:
    grid = _grid_of(f, grid)
    if g.grid != grid:
        raise ValueError("fields live on different grids")
    return grid.h * grid.h * float(np.dot(f.values.ravel(), g.values.ravel()))


def norm2(f: Field, grid: GridSpec | None = None) -> float:
    return float(np.sqrt(inner(f, f, grid)))


def grad_norm2_sq(f: Field, grid: GridSpec | None = None) -> float:
    """Squared discrete gradient norm from forward differences.

    The h^2 weight and the 1/h^2 of each squared difference cancel, leaving
    the plain sum of squared neighbour differences.
    """
    grid = _grid_of(f, grid)
    return _grad_sq(f.values, grid.periodic)


def _grad_sq(u: np.ndarray, periodic: bool) -> float:
    if periodic:
        dx = np.roll(u, -1, axis=0) - u
        dy = np.roll(u, -1, axis=1) - u
    else:
        dx = u[1:, :] - u[:-1, :]
        dy = u[:, 1:] - u[:, :-1]
    return float(np.sum(dx * dx) + np.sum(dy * dy))


def grad_inner(f: Field, g: Field, grid: GridSpec | None = None) -> float:
    """Discrete gradient pairing <grad_h f, grad_h g>."""
    grid = _grid_of(f, grid)
    a, b = f.values, g.values
    if grid.periodic:
        terms = [(np.roll(a, -1, k) - a) * (np.roll(b, -1, k) - b) for k in (0, 1)]
    else:
        terms = [(a[1:, :] - a[:-1, :]) * (b[1:, :] - b[:-1, :]),
                 (a[:, 1:] - a[:, :-1]) * (b[:, 1:] - b[:, :-1])]
    return float(sum(np.sum(t) for t in terms))


def apply_A_array(u: np.ndarray, coeffs: OperatorCoeffs, h: float, periodic: bool) -> np.ndarray:
    # u must vanish on the Dirichlet boundary; the output does too
    out = coeffs.c0 * u - coeffs.c_lap * lap_array(u, h, periodic)
    if not periodic:
        out[0, :] = out[-1, :] = out[:, 0] = out[:, -1] = 0.0
    return out


def apply_A(field: Field, coeffs: OperatorCoeffs, grid: GridSpec | None = None) -> Field:
    """Apply ``c0 f - c_lap Lap_h f`` on the unknown set.

    On Dirichlet grids the boundary values of ``field`` are treated as zero;
    boundary data belongs on the right-hand side.
    """
    grid = _grid_of(field, grid)
    u = restrict(field.values, grid)
    return Field(grid, apply_A_array(u, coeffs, grid.h, grid.periodic))


def restrict(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Copy of ``values`` with the Dirichlet boundary ring zeroed."""
    u = values.copy()
    if not grid.periodic:
        u[0, :] = u[-1, :] = u[:, 0] = u[:, -1] = 0.0
    return u


def _grid_of(field: Field, grid: GridSpec | None) -> GridSpec:
    if grid is not None and grid != field.grid:
        raise ValueError("field does not live on the given grid")
    return field.grid
