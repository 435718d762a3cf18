"""Uniform square grids, boundary kinds and the scalar field container."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

BoundaryData = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


class BC(str, enum.Enum):
    DIRICHLET = "dirichlet"
    HOMOGENEOUS = "homogeneous"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    M: int
    h: float
    bc: BC

    @property
    def periodic(self) -> bool:
        return self.bc is BC.PERIODIC

    @property
    def n(self) -> int:
        """Nodes per axis: M + 1 for Dirichlet kinds, M for periodic."""
        return self.M if self.periodic else self.M + 1

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n, self.n)

    @property
    def node_count(self) -> int:
        return self.n * self.n

    @property
    def x(self) -> np.ndarray:
        return self.x_min + np.arange(self.n) * self.h

    @property
    def y(self) -> np.ndarray:
        return self.y_min + np.arange(self.n) * self.h

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays indexed ``[i, j]`` (i along x)."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        if not self.periodic:
            mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = True
        return mask


def make_grid(x_min, x_max, y_min, y_max, M, bc="dirichlet") -> GridSpec:
    bc = BC(bc)
    if int(M) != M or M < 2:
        raise ValueError(f"need an integer M >= 2, got {M!r}")
    if not (x_max > x_min and y_max > y_min):
        raise ValueError("empty domain")
    if not np.isclose(x_max - x_min, y_max - y_min, rtol=1e-12, atol=0.0):
        raise ValueError(
            f"domain must be square, got [{x_min}, {x_max}] x [{y_min}, {y_max}]"
        )
    M = int(M)
    return GridSpec(float(x_min), float(x_max), float(y_min), float(y_max), M,
                    (x_max - x_min) / M, bc)


@dataclass
class Field:
    """Nodal values on a grid, stored as an ``(n, n)`` array indexed ``[i, j]``."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values of shape {self.values.shape} do not fit grid {self.grid.shape}"
            )

    @classmethod
    def zeros(cls, grid: GridSpec) -> "Field":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: GridSpec, c: float) -> "Field":
        return cls(grid, np.full(grid.shape, float(c)))

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())

    def transpose(self) -> "Field":
        return Field(self.grid, self.values.T.copy())


def _check_finite(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{what} produced non-finite values")


def sample(f, grid: GridSpec) -> Field:
    """Evaluate ``f(x, y)`` (vectorised over arrays) at every node of ``grid``."""
    X, Y = grid.mesh()
    values = np.broadcast_to(np.asarray(f(X, Y), dtype=float), grid.shape).copy()
    _check_finite(values, "sampled function")
    return Field(grid, values)


def set_boundary(field: Field, g: BoundaryData, t: float) -> Field:
    """Overwrite the boundary ring of ``field`` in place with ``g(x, y, t)``."""
    grid = field.grid
    if grid.periodic:
        raise ValueError("periodic grids have no boundary nodes")
    mask = grid.boundary_mask()
    X, Y = grid.mesh()
    gv = np.broadcast_to(np.asarray(g(X[mask], Y[mask], t), dtype=float), X[mask].shape)
    _check_finite(gv, "boundary function")
    field.values[mask] = gv
    return field
