"""Exit criteria: reproduction of the published tables plus the scheme's structural properties.

Each test records a one-line verdict; the lines are printed in the pytest
terminal summary (see conftest.py).
"""
import math

import mpmath
import numpy as np
import pytest

from sinegordon import (Field, OperatorCoeffs, apply_A, cg_solve,
                        contraction_rate_bound, convergence_study, discrete_energy,
                        energy_drift, energy_test, inner, laplacian, make_grid, manufactured,
                        psi, ring_soliton, run, step)
from sinegordon.cli import main as cli_main
from sinegordon.ops import grad_inner
from sinegordon.writers import read_vtk_snapshot, write_vtk_snapshot

from conftest import random_homogeneous
from test_linsolve import dense_operator, gauss_solve

RESULTS: list[str] = []


def verdict(num: int, ok: bool, detail: str) -> None:
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    assert ok, detail


# published errors, keyed by (dt, t): (||u_e - u||, ||v_e - v||)
TABLE1 = {
    (0.2, 1): (3.6332417e-3, 4.1077748e-3), (0.1, 1): (9.1807718e-4, 1.0275471e-3),
    (0.05, 1): (2.3013872e-4, 2.5692078e-4),
    (0.2, 2): (5.3736869e-3, 5.7848266e-3), (0.1, 2): (1.3423090e-3, 1.4826793e-3),
    (0.05, 2): (3.3549256e-4, 3.7298456e-4),
    (0.2, 3): (4.8006248e-3, 1.4044778e-2), (0.1, 3): (1.2425939e-3, 3.5219515e-3),
    (0.05, 3): (3.1334248e-4, 8.8112076e-4),
    (0.2, 4): (1.5080860e-2, 1.8066820e-3), (0.1, 4): (3.7880320e-3, 3.6020681e-4),
    (0.05, 4): (9.4806730e-4, 8.4218108e-5),
    (0.2, 5): (6.3731025e-3, 2.1098154e-2), (0.1, 5): (1.5032623e-3, 5.3465660e-3),
    (0.05, 5): (3.7005127e-4, 1.3410308e-3),
}

# discrete energy of the sampled initial data of the energy test at h = 0.025,
# summed in 40-digit arithmetic (independent of the package)
ENERGY0_ORACLE = 9.968601944787210519401130


@pytest.fixture(scope="module")
def study():
    return convergence_study(manufactured(), 0.2, 0.1, 3, checkpoints=[1, 2, 3, 4, 5])


def test_criterion_1_table1(study):
    worst = 0.0
    for row in study:
        for t in range(1, 6):
            ref_u, ref_v = TABLE1[(row.dt, t)]
            e = row.errors[float(t)]
            worst = max(worst, abs(e.err_u / ref_u - 1), abs(e.err_v / ref_v - 1))
    verdict(1, worst <= 0.25, f"Table 1 errors, worst relative deviation {worst:.2e} (tol 0.25)")


def test_criterion_2_orders(study):
    orders = []
    ok = True
    for row in study[1:]:
        for t in range(1, 6):
            for kind, val in (("u", row.observed_order_u[float(t)]),
                              ("v", row.observed_order_v[float(t)])):
                orders.append(val)
                hi = 2.4 if (kind == "v" and t == 4 and row.dt == 0.1) else 2.2
                ok &= 1.8 <= val <= hi
    verdict(2, ok, f"observed orders in [{min(orders):.4f}, {max(orders):.4f}] "
                   "(tol [1.8, 2.2], t=4 v outlier up to 2.4)")


def _energy_oracle(grid, u, v, alpha, phi):
    mpmath.mp.dps = 40
    n = grid.n
    h = mpmath.mpf(grid.h)
    U = [[mpmath.mpf(float(u[i, j])) for j in range(n)] for i in range(n)]
    kin = h * h * mpmath.fsum(mpmath.mpf(float(x)) ** 2 for x in v.ravel()) / 2
    grad = mpmath.fsum((U[i + 1][j] - U[i][j]) ** 2 for i in range(n - 1) for j in range(n)) \
        + mpmath.fsum((U[i][j + 1] - U[i][j]) ** 2 for i in range(n) for j in range(n - 1))
    pot = h * h * mpmath.fsum(phi * (1 - mpmath.cos(U[i][j])) for i in range(n) for j in range(n))
    return float(kin + alpha * grad / 2 + pot)


def test_criterion_3_energy_conservation():
    sc = energy_test()
    grid = sc.grid_for_h(0.025)
    params = sc.params(grid, 0.001, iter_tol=1e-12, cg_tol=1e-12)
    state = sc.initial_state(grid)
    series = [discrete_energy(state, params, grid)]
    final = run(state, params, grid, t_end=1.0,
                observers=[lambda s, st: series.append(discrete_energy(s, params, grid))])
    e0 = series[0].total
    oracle = _energy_oracle(grid, state.u.values, state.v.values, 1.0, 1)
    _, rel = energy_drift(series)  # E0 > 1, so this is |E - E0| / E0
    ok = (final.n == 1000 and rel <= 1e-8 and 9.8 <= e0 <= 10.2
          and abs(oracle - ENERGY0_ORACLE) <= 1e-14 * ENERGY0_ORACLE
          and abs(e0 - oracle) <= 1e-12 * oracle)
    verdict(3, ok, f"{final.n} steps, relative drift {rel:.2e} (tol 1e-8), "
                   f"E0 = {e0:.12f}, oracle deviation {abs(e0 - oracle) / oracle:.1e} (tol 1e-12)")


def test_criterion_4_contraction(tmp_path):
    sc = manufactured()
    grid = sc.grid_for_h(0.05)
    params = sc.params(grid, 0.1, iter_tol=1e-12)
    bound = contraction_rate_bound(params)
    worst_ratio, most_sweeps = 0.0, 0
    state = sc.initial_state(grid)
    for _ in range(50):
        state, stats = step(state, params, grid, sc.boundary)
        worst_ratio = max([worst_ratio] + stats.contraction_ratios[1:])
        most_sweeps = max(most_sweeps, stats.outer_iterations)
    cfg = tmp_path / "guard.json"
    cfg.write_text('{"scenario": "manufactured", "dt": 1.5, "m": 10, "guard_mode": "error", '
                   f'"output_dir": "{tmp_path}"}}')
    code = cli_main(["run", "--config", str(cfg)])
    ok = (abs(bound - 0.050063) < 5e-7 and worst_ratio <= 1.05 * bound and most_sweeps <= 8
          and code == 2)
    verdict(4, ok, f"max ratio {worst_ratio:.3e} <= {1.05 * bound:.3e}, "
                   f"max sweeps {most_sweeps} (<= 8), guard exit code {code}")


def test_criterion_5_operator_identities():
    rng = np.random.default_rng(5)
    worst = 0.0
    coeffs = OperatorCoeffs.from_scheme(1.0 / (2 * math.pi ** 2), 0.0, 0.1)
    for bc in ("homogeneous", "periodic"):
        g = make_grid(0, 1, 0, 1, 16, bc)
        for _ in range(100):
            f = Field(g, random_homogeneous(g, rng))
            w = Field(g, random_homogeneous(g, rng))
            gi = grad_inner(f, w)
            worst = max(worst, abs(inner(laplacian(f), w) + gi) / (1 + abs(gi)))
            a, b = inner(apply_A(f, coeffs), w), inner(f, apply_A(w, coeffs))
            worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
    g = make_grid(0, 1, 0, 1, 4, "homogeneous")
    c = OperatorCoeffs(3.0, 2.5)
    mat, idx = dense_operator(c, g)
    rhs = Field(g, random_homogeneous(g, rng))
    exact = gauss_solve(mat, rhs.values[tuple(idx.T)])
    x, _ = cg_solve(c, g, rhs, None, 1e-14)
    cg_err = np.max(np.abs(x.values[tuple(idx.T)] - exact)) / np.max(np.abs(exact))
    verdict(5, worst <= 1e-12 and cg_err <= 1e-12,
            f"SBP/symmetry worst relative {worst:.1e}, CG vs elimination {cg_err:.1e} (tol 1e-12)")


def test_criterion_6_nonlinearity():
    rng = np.random.default_rng(6)
    n = 1_000_000
    a, b, b2 = (rng.uniform(-20, 20, n) for _ in range(3))
    p = psi(a, b)
    bounded = bool(np.all(np.abs(p) <= 1))
    symmetric = bool(np.all(p == psi(b, a)))
    midpoint = bool(np.all(np.abs(p + np.sin(0.5 * (a + b))) <= (b - a) ** 2 / 24))
    lipschitz = bool(np.all(np.abs(p - psi(a, b2)) <= np.abs(b - b2) * (1 + 1e-12)))
    verdict(6, bounded and symmetric and midpoint and lipschitz,
            f"1e6 pairs: bound {bounded}, symmetry {symmetric}, midpoint {midpoint}, "
            f"Lipschitz {lipschitz}")


def test_criterion_7_soliton(tmp_path):
    sc = ring_soliton()
    grid = sc.grid_for_h(0.1)
    params = sc.params(grid, 0.1)
    state = sc.initial_state(grid)
    e0 = discrete_energy(state, params, grid).total
    track = {"umax": float(np.max(np.abs(state.u.values))), "asym": 0.0, "drift": 0.0}
    snaps = {0: 0.0, 20: 2.0, 40: 4.0, 60: 6.0}
    paths = []

    def snap(s):
        p = tmp_path / f"soliton_{s.n:06d}.vtk"
        write_vtk_snapshot(p, sc.display(s.u.values), grid, s.t, name="sin_half_u")
        paths.append(p)

    def observe(s, stats):
        track["umax"] = max(track["umax"], float(np.max(np.abs(s.u.values))))
        track["asym"] = max(track["asym"], float(np.max(np.abs(s.u.values - s.u.values.T))))
        e = discrete_energy(s, params, grid).total
        track["drift"] = max(track["drift"], abs(e - e0) / e0)
        if s.n in snaps:
            snap(s)

    snap(state)
    final = run(state, params, grid, t_end=50.0, observers=[observe])
    parsed = [read_vtk_snapshot(p) for p in paths]
    vtk_ok = len(parsed) == 4 and all(d["dimensions"] == [80, 80, 1] for d in parsed)
    ok = (final.n == 500 and track["umax"] <= 2 * math.pi + 1 and track["asym"] <= 1e-6
          and track["drift"] <= 1e-6 and vtk_ok)
    verdict(7, ok, f"{final.n} steps, max|u| {track['umax']:.4f}, x<->y asymmetry "
                   f"{track['asym']:.1e}, energy drift {track['drift']:.1e}, "
                   f"{len(parsed)} VTK snapshots parsed")
