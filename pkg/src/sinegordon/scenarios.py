"""Ready-made problem definitions: manufactured solution, energy test, ring soliton."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import BC, Field, GridSpec, make_grid, sample, set_boundary
from .stepper import SchemeParams, SimState

Fn2 = Callable[[np.ndarray, np.ndarray], np.ndarray]
Fn3 = Callable[[np.ndarray, np.ndarray, float], np.ndarray]


@dataclass
class Scenario:
    name: str
    domain: tuple[float, float, float, float]
    bc: BC
    alpha: float
    beta: float
    phi: Fn2
    initial_u: Fn2
    initial_v: Fn2
    forcing: Fn3 | None = None
    boundary: Fn3 | None = None
    exact_u: Fn3 | None = None
    exact_v: Fn3 | None = None
    display: Callable[[np.ndarray], np.ndarray] | None = None
    defaults: dict = field(default_factory=dict)

    @property
    def has_exact(self) -> bool:
        return self.exact_u is not None and self.exact_v is not None

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    def grid(self, M: int) -> GridSpec:
        return make_grid(*self.domain, M, self.bc)

    def grid_for_h(self, h: float) -> GridSpec:
        M = self.length / h
        if abs(M - round(M)) > 1e-9 * M:
            raise ValueError(f"h = {h} does not divide the domain length {self.length}")
        return self.grid(int(round(M)))

    def params(self, grid: GridSpec, dt: float, alpha: float | None = None,
               beta: float | None = None, **kw) -> SchemeParams:
        return SchemeParams(
            alpha=self.alpha if alpha is None else alpha,
            beta=self.beta if beta is None else beta,
            dt=dt, phi=sample(self.phi, grid), forcing=self.forcing, **kw)

    def initial_state(self, grid: GridSpec) -> SimState:
        u = sample(self.initial_u, grid)
        if self.boundary is not None and not grid.periodic:
            set_boundary(u, self.boundary, 0.0)
        return SimState(u, sample(self.initial_v, grid), 0, 0.0)

    def exact_state(self, grid: GridSpec, t: float) -> tuple[Field, Field]:
        if not self.has_exact:
            raise ValueError(f"scenario {self.name!r} has no exact solution")
        return (sample(lambda x, y: self.exact_u(x, y, t), grid),
                sample(lambda x, y: self.exact_v(x, y, t), grid))


def _ones(x, y):
    return np.ones(np.broadcast(x, y).shape)


def _zeros(x, y):
    return np.zeros(np.broadcast(x, y).shape)


def _zeros3(x, y, t):
    return np.zeros(np.broadcast(x, y).shape)


def manufactured() -> Scenario:
    """u = cos(pi x) cos(pi y) cos t on [-1/2, 1/2]^2 with alpha = 1/(2 pi^2).

    With that alpha, u_tt and alpha * Lap u cancel, so the forcing reduces to
    sin(u). The exact velocity is v = -cos(pi x) cos(pi y) sin t.
    """
    def shape(x, y):
        return np.cos(np.pi * x) * np.cos(np.pi * y)

    def exact_u(x, y, t):
        return shape(x, y) * np.cos(t)

    def exact_v(x, y, t):
        return -shape(x, y) * np.sin(t)

    def forcing(x, y, t):
        return np.sin(exact_u(x, y, t))

    return Scenario(
        name="manufactured", domain=(-0.5, 0.5, -0.5, 0.5), bc=BC.DIRICHLET,
        alpha=1.0 / (2.0 * np.pi**2), beta=0.0, phi=_ones,
        initial_u=shape, initial_v=_zeros, forcing=forcing, boundary=_zeros3,
        exact_u=exact_u, exact_v=exact_v,
        defaults={"dt": 0.1, "h": 0.05, "t_end": 5.0},
    )


def energy_test() -> Scenario:
    def initial_u(x, y):
        return np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y)

    return Scenario(
        name="energy", domain=(0.0, 1.0, 0.0, 1.0), bc=BC.HOMOGENEOUS,
        alpha=1.0, beta=0.0, phi=_ones, initial_u=initial_u, initial_v=_zeros,
        defaults={"dt": 0.001, "h": 0.025, "t_end": 1.0},
    )


def sin_half(u):
    return np.sin(0.5 * u)


def ring_soliton() -> Scenario:
    def initial_u(x, y):
        return 2.0 * np.arctan(np.exp(3.0 - 5.0 * np.sqrt(x * x + y * y)))

    return Scenario(
        name="soliton", domain=(-4.0, 4.0, -4.0, 4.0), bc=BC.PERIODIC,
        alpha=1.0, beta=0.0, phi=_ones, initial_u=initial_u, initial_v=_zeros,
        display=sin_half,
        defaults={"dt": 0.1, "h": 0.1, "t_end": 50.0},
    )


SCENARIOS: dict[str, Callable[[], Scenario]] = {
    "manufactured": manufactured,
    "energy": energy_test,
    "soliton": ring_soliton,
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]()
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}") from None
