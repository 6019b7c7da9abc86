import functools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudoanalytic import coords, formalpowers, genpair, pacalc
from pseudoanalytic.numfield import Grid, Path, field

from helpers import exp_y, unit_weight, yukawa_weight


def z1_exact(z):
    x, y = z.real, z.imag
    return x * np.exp(y) + 1j * np.sinh(y)


def z2_exact(z):
    x, y = z.real, z.imag
    return (x**2 - y) * np.exp(y) + np.sinh(y) + 2j * x * np.sinh(y)


def yukawa_seq():
    return genpair.generating_sequence(yukawa_weight())


def test_order_zero_exp_y():
    seq = yukawa_seq()
    z = np.array([0.3 + 0.4j, -0.2 - 0.7j])
    h1 = formalpowers.order_zero(seq, 0, 1.0, 0j)
    hi = formalpowers.order_zero(seq, 0, 1j, 0j)
    assert np.allclose(h1(z), np.exp(z.imag), atol=1e-14)
    assert np.allclose(hi(z), 1j * np.exp(-z.imag), atol=1e-14)


def test_order_zero_coefficients_exp_y():
    lam, mu = formalpowers.order_zero_coefficients(1.0 + 0j, 1j, 1.0)
    assert (lam, mu) == pytest.approx((1.0, 0.0))


def test_order_zero_constant():
    seq = genpair.generating_sequence(unit_weight())
    h = formalpowers.order_zero(seq, 0, 2 + 3j, 0j)
    assert np.allclose(h(np.array([0.1, 0.5j, -0.3 + 0.2j])), 2 + 3j)


def test_order_zero_degenerate():
    with pytest.raises(genpair.DegeneratePairError):
        formalpowers.order_zero_coefficients(1.0 + 0j, 2.0 + 0j, 1.0)


def test_first_power_exp_y(yukawa_basis):
    z = 0.5 + 0.5j
    expected = 0.5 * np.exp(0.5) + 1j * np.sinh(0.5)
    assert abs(formalpowers.formal_power(yukawa_basis, 1, 1.0, z) - expected) < 1e-6


def test_second_power_exp_y(yukawa_basis):
    z = 0.3 + 0.2j
    assert abs(formalpowers.formal_power(yukawa_basis, 2, 1.0, z) - z2_exact(z)) < 1e-5


def test_monomials(unit_basis):
    z = Grid.disk(0j, 0.9, 12).points
    for n in range(9):
        assert np.max(np.abs(formalpowers.formal_power(unit_basis, n, 1.0, z) - z**n)) < 1e-10
        assert np.max(np.abs(formalpowers.formal_power(unit_basis, n, 1j, z) - 1j * z**n)) < 1e-10


def test_order_beyond_max_raises(yukawa_basis):
    with pytest.raises(formalpowers.OrderError):
        formalpowers.formal_power(yukawa_basis, 7, 1.0, 0.1j)
    with pytest.raises(formalpowers.OrderError):
        formalpowers.FormalPowerBasis(yukawa_seq(), 0j, -1)


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 6),
       st.floats(-0.8, 0.8), st.floats(-0.8, 0.8))
def test_linearity(alpha, beta, n, x, y):
    basis = _shared_basis()
    z = complex(x, y)
    lhs = formalpowers.formal_power(basis, n, complex(alpha, beta), z)
    rhs = alpha * formalpowers.formal_power(basis, n, 1.0, z) + beta * formalpowers.formal_power(basis, n, 1j, z)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


@functools.cache
def _shared_basis():
    return formalpowers.FormalPowerBasis(yukawa_seq(), 0j, 6)


def test_differential_relation(yukawa_basis, rng):
    seq = yukawa_basis.sequence
    pts = Grid.random_disk(50, 0j, 0.7, seed=7).points
    for m in range(3):
        for n in range(1, 4):
            for a in (1.0, 1j):
                W = yukawa_basis.power(n, a, m)
                lower = yukawa_basis.power(n - 1, a, m + 1)
                d = pacalc.fg_derivative(seq.pair(m), W, 1e-4)
                assert np.max(np.abs(d(pts) - n * lower(pts))) < 1e-4


def test_path_independence():
    seq = yukawa_seq()
    tol = 1e-12
    straight = formalpowers.FormalPowerBasis(seq, 0j, 4, quad_tol=tol)

    def corner(z0, z):
        return Path.polyline(z0, complex(z.real, z0.imag), z)

    bent = formalpowers.FormalPowerBasis(seq, 0j, 4, quad_tol=tol, path_builder=corner)
    z = np.array([0.6 + 0.5j, -0.4 + 0.3j, 0.2 - 0.7j])
    diff = np.abs(straight.values(z) - bent.values(z))
    assert np.max(diff) <= 5 * tol


def test_vekua_residual(yukawa_basis):
    f = exp_y()
    sample = Grid.disk(0j, 0.6, 8)
    for n in range(5):
        for a in (1.0, 1j):
            report = pacalc.vekua_residual(f, yukawa_basis.power(n, a), sample)
            assert report.max_abs < 1e-4


def test_basis_on_grid_single_point(yukawa_basis):
    z = 0.25 - 0.4j
    table = formalpowers.basis_on_grid(yukawa_basis, np.array([z]))
    for n in range(yukawa_basis.max_order + 1):
        assert table.values[0, n, 0] == formalpowers.formal_power(yukawa_basis, n, 1.0, z)
        assert table.values[0, n, 1] == formalpowers.formal_power(yukawa_basis, n, 1j, z)


def test_basis_on_grid_monomials(unit_basis):
    grid = Grid.rectangle(-0.6, 0.6, -0.6, 0.6, 10)
    table = formalpowers.basis_on_grid(unit_basis, grid)
    assert table.ok.all() and not table.failures
    n = np.arange(unit_basis.max_order + 1)
    expected = grid.points[:, None] ** n[None, :]
    assert np.max(np.abs(table.values[..., 0] - expected)) < 1e-10


def test_basis_on_grid_exp_y_closed_forms():
    basis = formalpowers.FormalPowerBasis(yukawa_seq(), 0j, 2)
    grid = Grid.rectangle(-0.8, 0.8, -0.8, 0.8, 5)
    table = formalpowers.basis_on_grid(basis, grid)
    z = grid.points
    assert np.max(np.abs(table.values[:, 0, 0] - np.exp(z.imag))) < 1e-5
    assert np.max(np.abs(table.values[:, 1, 0] - z1_exact(z))) < 1e-5
    assert np.max(np.abs(table.values[:, 2, 0] - z2_exact(z))) < 1e-5


def test_basis_on_grid_collects_failures():
    w = genpair.SeparableWeight(np.ones_like, lambda v: 1.0 / v, coords.cartesian(), "1/y",
                                lambda z: np.asarray(z).imag > 0)
    basis = formalpowers.FormalPowerBasis(genpair.generating_sequence(w), 1j, 2)
    table = formalpowers.basis_on_grid(basis, np.array([1.2j, 1.0 - 0.5j]))
    assert table.ok[0] and not table.ok[1]
    assert [fl.index for fl in table.failures] == [1]


def test_asymptotics_unit(unit_basis):
    rep = formalpowers.asymptotic_check(unit_basis, 3, 1.0, [1e-1, 1e-2], np.linspace(0, 2 * np.pi, 8))
    assert np.max(rep.ratios) < 1e-12 and rep.passed


def test_asymptotics_exp_y(yukawa_basis):
    dirs = np.linspace(0, 2 * np.pi, 12, endpoint=False) + 0.1
    rep = formalpowers.asymptotic_check(yukawa_basis, 1, 1.0, [1e-1, 1e-2, 1e-3], dirs)
    assert rep.passed
    assert np.all(np.diff(rep.max_per_radius) < 0)
    rep2 = formalpowers.asymptotic_check(yukawa_basis, 2, 1.0, [1e-3], dirs)
    assert rep2.max_per_radius[0] < 5e-3


def test_higher_derivative_of_generator():
    seq = yukawa_seq()
    ders = formalpowers.higher_derivative(seq, seq.pair(0).F, 1, 0.2 + 0.1j)
    assert abs(ders[1]) < 1e-6


def test_higher_derivative_cubic():
    seq = genpair.generating_sequence(unit_weight())
    ders = formalpowers.higher_derivative(seq, field(lambda z: np.asarray(z) ** 3), 3, 0j)
    assert np.allclose(ders, [0, 0, 0, 6], atol=1e-3)


def test_higher_derivative_second_power(yukawa_basis):
    ders = formalpowers.higher_derivative(yukawa_basis.sequence, yukawa_basis.power(2, 1.0), 2, 0j)
    assert abs(ders[1]) < 5e-3
    assert abs(ders[2] - 2) < 5e-3


def test_taylor_coefficients(yukawa_basis):
    seq = yukawa_basis.sequence
    coeffs = formalpowers.taylor_coefficients(seq, yukawa_basis.power(2, 1.0), 0j, count=3)
    assert np.allclose(coeffs, [0, 0, 1], atol=5e-3)
    a0 = formalpowers.taylor_coefficients(seq, yukawa_basis.power(0, 1j), 0j, count=1)
    assert abs(a0[0] - 1j) < 1e-12


def test_taylor_exponential():
    seq = genpair.generating_sequence(unit_weight())
    coeffs = formalpowers.taylor_coefficients(seq, field(np.exp), 0j, count=4)
    assert np.allclose(coeffs, [1 / math.factorial(n) for n in range(4)], atol=1e-3)


def test_derivative_order_limit():
    seq = yukawa_seq()
    with pytest.raises(formalpowers.OrderError):
        formalpowers.higher_derivative(seq, seq.pair(0).F, 4, 0j)
    with pytest.raises(formalpowers.OrderError):
        formalpowers.taylor_coefficients(seq, seq.pair(0).F, 0j, count=5)


def test_cache_reproducible(yukawa_basis):
    z = np.array([0.11 + 0.37j])
    first = yukawa_basis.values(z).copy()
    fresh = formalpowers.FormalPowerBasis(yukawa_basis.sequence, 0j, yukawa_basis.max_order)
    assert np.max(np.abs(fresh.values(z) - first)) <= 2e-12


def test_noisy_derivative_warning():
    seq = genpair.generating_sequence(unit_weight())
    with pytest.warns(formalpowers.NoisyDerivativeWarning):
        formalpowers.higher_derivative(seq, field(np.exp), 3, 0j, step=1e-7)
    with pytest.raises(ValueError):
        formalpowers.higher_derivative(seq, field(np.exp), 3, 0j, step=1e-9)
