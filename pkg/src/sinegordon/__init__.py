"""Conservative semi-implicit finite differences for the 2D sine-Gordon equation

    u_tt + beta u_t - alpha Lap u = -phi(x, y) sin u + F(x, y, t).
"""
from .energy import EnergySample, discrete_energy, energy_drift
from .grid import BC, Field, GridSpec, make_grid, sample, set_boundary
from .harness import ConvergenceRow, ErrorReport, convergence_study, error_norms, observed_order
from .linsolve import SolveStats, cg_solve
from .nonlinearity import psi, psi_field
from .ops import OperatorCoeffs, apply_A, grad_norm2_sq, inner, laplacian, norm2
from .scenarios import Scenario, energy_test, get_scenario, manufactured, ring_soliton
from .stepper import (ConvergenceError, GuardViolation, SchemeParams, SimState, SolverError,
                      StepStats, contraction_rate_bound, run, step, timestep_bound)

__version__ = "0.1.0"
