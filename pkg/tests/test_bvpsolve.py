import functools

import numpy as np
import pytest

from pseudoanalytic import bvpsolve, elliptic, formalpowers, genpair
from pseudoanalytic.numfield import Grid, constant, real_field

from helpers import exp_y, unit_weight, yukawa_weight

LAPLACE = elliptic.EquationDescriptor.schrodinger(constant(0.0), constant(1.0))
YUKAWA = elliptic.EquationDescriptor.schrodinger(constant(1.0), exp_y())
INTERIOR = Grid.disk(0j, 0.95, 15)


def laplace_system(N):
    basis = formalpowers.FormalPowerBasis(genpair.generating_sequence(unit_weight()), 0j, N)
    return elliptic.complete_system(LAPLACE, basis, N)


@functools.cache
def yukawa_system(N=10):
    basis = formalpowers.FormalPowerBasis(genpair.generating_sequence(yukawa_weight()), 0j, N)
    return elliptic.complete_system(YUKAWA, basis, N)


def problem(eq, g, exact=None, boundary=None):
    return bvpsolve.BoundaryValueProblem(eq, boundary or bvpsolve.disk_boundary(), g, INTERIOR, exact)


def re_x():
    return real_field(lambda z: np.asarray(z).real)


def exp_x():
    return real_field(lambda z: np.exp(np.asarray(z).real))


def test_laplace_exact_representation():
    sol = bvpsolve.collocate(problem(LAPLACE, re_x(), re_x()), laplace_system(3))
    assert sol.boundary_residual < 1e-10
    assert sol.max_interior_error < 1e-10
    assert abs(bvpsolve.evaluate_solution(sol, 0.3 + 0.4j) - 0.3) < 1e-10
    assert abs(sol(0.3 + 0.4j) - 0.3) < 1e-10


def test_zero_data():
    sol = bvpsolve.collocate(problem(YUKAWA, constant(0.0)), yukawa_system())
    assert np.all(sol.coefficients == 0)
    assert sol.boundary_residual == 0
    assert bvpsolve.evaluate_solution(sol, 0.2j) == 0


def test_yukawa_dirichlet():
    sys_ = yukawa_system()
    assert len(sys_) == 21
    sol = bvpsolve.collocate(problem(YUKAWA, exp_x(), exp_x()), sys_, M=84)
    assert sol.max_interior_error <= 1e-5
    assert abs(sol(0j) - 1) < 1e-5
    lo, hi = sol.singular_value_range
    assert 0 < lo <= hi


def test_local_optimality():
    sys_ = yukawa_system()
    bvp = problem(YUKAWA, exp_x())
    sol = bvpsolve.collocate(bvp, sys_)
    A = sys_.evaluate(sol.collocation_points)
    b = bvp.data(sol.collocation_points)

    def sse(c):
        return np.sum((A @ c - b) ** 2)

    base = sse(sol.coefficients)
    for k in range(len(sys_)):
        for d in (1e-6, -1e-6):
            c = sol.coefficients.copy()
            c[k] += d
            assert sse(c) >= base * (1 - 1e-12)


def test_linearity():
    sys_ = yukawa_system()
    g1 = exp_x()
    g2 = real_field(lambda z: np.cos(3 * np.angle(z)))
    g12 = real_field(lambda z: g1(z) + g2(z))
    s1, s2, s12 = (bvpsolve.collocate(problem(YUKAWA, g), sys_) for g in (g1, g2, g12))
    z = INTERIOR.points
    assert np.max(np.abs(s12(z) - s1(z) - s2(z))) < 1e-10


def test_interior_residual_any_data():
    sys_ = yukawa_system(6)
    g = real_field(lambda z: np.sign(np.asarray(z).real))
    sol = bvpsolve.collocate(problem(YUKAWA, g), sys_)
    u = real_field(sol)
    assert elliptic.equation_residual(YUKAWA, u, Grid.disk(0j, 0.5, 5), step=1e-4).max_abs < 1e-3


@pytest.mark.slow
def test_yukawa_convergence():
    rows = bvpsolve.convergence_table(problem(YUKAWA, exp_x(), exp_x()), yukawa_weight(), [2, 4, 6, 8, 10])
    assert bvpsolve.strictly_decreasing(rows)
    assert rows[-1].max_interior_error <= 1e-5
    assert [r.size for r in rows] == [5, 9, 13, 17, 21]


def test_laplace_polynomial_plateau():
    g = real_field(lambda z: (np.asarray(z) ** 3 + np.asarray(z)).real)
    rows = bvpsolve.convergence_table(problem(LAPLACE, g, g), unit_weight(), [1, 2, 3, 4, 5])
    assert rows[0].max_interior_error > 1e-3
    assert all(r.max_interior_error < 1e-10 for r in rows[2:])


def test_convergence_needs_exact():
    with pytest.raises(ValueError):
        bvpsolve.convergence_table(problem(LAPLACE, re_x()), unit_weight(), [2])


def test_too_few_points():
    sys_ = laplace_system(3)
    with pytest.raises(ValueError):
        bvpsolve.collocate(problem(LAPLACE, re_x()), sys_, M=2 * len(sys_) - 1)


def test_rank_collapse():
    with pytest.raises(bvpsolve.RankCollapseError):
        bvpsolve.least_squares(np.zeros((8, 3)), np.ones(8))


def test_boundary_failure():
    bvp = problem(LAPLACE, re_x(), boundary=lambda t: np.full(np.shape(t), np.nan))
    with pytest.raises(bvpsolve.BoundaryError):
        bvpsolve.collocate(bvp, laplace_system(1))


def test_rectangle_boundary():
    curve = bvpsolve.rectangle_boundary(-1, 1, -0.5, 0.5)
    pts = curve(np.arange(12) / 12)
    assert pts[0] == -1 - 0.5j
    on_edge = (np.isclose(np.abs(pts.real), 1) | np.isclose(np.abs(pts.imag), 0.5))
    assert on_edge.all()
    assert np.isclose(curve(0.5), 1 + 0.5j)


def test_deterministic():
    sys_ = yukawa_system()
    a = bvpsolve.collocate(problem(YUKAWA, exp_x()), sys_).coefficients
    b = bvpsolve.collocate(problem(YUKAWA, exp_x()), sys_).coefficients
    assert np.array_equal(a, b)
