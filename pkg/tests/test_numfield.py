import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pseudoanalytic import numfield as nf
from pseudoanalytic.numfield import Path, field, real_field

from helpers import exp_y

identity = field(lambda z: z)
conj = field(np.conj)


@pytest.mark.parametrize("z", [0j, 0.3 - 0.7j, 2 + 1j])
def test_wirtinger_of_z_and_conj(z):
    assert abs(nf.wirtinger_dz(identity, z) - 1) < 1e-9
    assert abs(nf.wirtinger_dz(conj, z)) < 1e-9
    assert abs(nf.wirtinger_dzbar(identity, z)) < 1e-9
    assert abs(nf.wirtinger_dzbar(conj, z) - 1) < 1e-9


def test_wirtinger_of_exp_y():
    assert abs(nf.wirtinger_dz(exp_y(), 0j) + 0.5j) < 1e-8
    assert abs(nf.wirtinger_dzbar(exp_y(), 0j) - 0.5j) < 1e-8


def test_stencil_outside_domain_names_point():
    h = field(lambda z: z, domain=lambda z: np.asarray(z).real > 0)
    with pytest.raises(nf.StencilError) as info:
        nf.wirtinger_dz(h, 0j)
    assert "0" in str(info.value)


def test_laplacian_examples():
    assert abs(nf.laplacian(real_field(lambda z: np.abs(z) ** 2), 0.3 + 0.1j) - 4) < 1e-6
    assert abs(nf.laplacian(real_field(lambda z: (z * z).real), 0.3 + 0.1j)) < 1e-6
    assert abs(nf.laplacian(exp_y(), 0j) - 1) < 1e-6


coef = st.floats(-2, 2, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(coef, coef, coef, coef, st.floats(-1, 1), st.floats(-1, 1))
def test_cubic_polynomial_wirtinger(a, b, c, d, x, y):
    # h = a z^3 + b z zbar + c zbar^2 + d zbar ; dz h = 3a z^2 + b zbar
    z = complex(x, y)
    h = field(lambda w: a * w**3 + b * w * np.conj(w) + c * np.conj(w) ** 2 + d * np.conj(w))
    step = 1e-3
    bound = 100 * step**2 * max(1, abs(z)) ** 2 * (1 + abs(a) + abs(b) + abs(c) + abs(d))
    assert abs(nf.wirtinger_dz(h, z, step) - (3 * a * z**2 + b * np.conj(z))) < bound
    assert abs(nf.wirtinger_dzbar(h, z, step) - (b * z + 2 * c * np.conj(z) + d)) < bound


def test_path_validation():
    with pytest.raises(ValueError):
        Path([0j])
    with pytest.raises(ValueError):
        Path([0j, 0j, 1j])
    with pytest.raises(ValueError):
        Path([0j, complex(np.inf, 0)])


def test_line_integral_examples():
    one = nf.constant(1.0)
    assert abs(nf.line_integral(one, Path.segment(0, 1 + 1j)) - (1 + 1j)) < 1e-14
    square = Path.polyline(0, 1, 1 + 1j, 1j, 0)
    assert abs(nf.line_integral(identity, square)) < 1e-10
    inv = field(lambda z: 1 / z)
    assert abs(nf.line_integral(inv, nf.circle_path(0, 1, 256)) - 2j * np.pi) < 1e-3


def test_cumulative_examples():
    one = nf.constant(1.0)
    got = nf.cumulative_line_integrals(one, Path.polyline(0, 1, 1 + 1j))
    assert np.allclose(got, [0, 1, 1 + 1j], atol=1e-14)
    got = nf.cumulative_line_integrals(identity, Path.polyline(0, 1, 2))
    assert np.allclose(got, [0, 0.5, 2], atol=1e-14)


def test_quadrature_failure_reports_estimate():
    rough = field(lambda z: np.abs(np.asarray(z).real - 0.37) ** 0.1)
    with pytest.raises(nf.QuadratureError) as info:
        nf.line_integral(rough, Path.segment(0, 1), tol=1e-15)
    assert info.value.estimate > 0


def _smooth(k):
    return field(lambda z: np.exp(k * z) * np.cos(np.asarray(z).real))


@settings(max_examples=50, deadline=None)
@given(st.floats(-2, 2), st.lists(st.complex_numbers(max_magnitude=2), min_size=2, max_size=5, unique=True))
def test_cumulative_matches_whole_path(k, nodes):
    nodes = [0j] + [n for n in nodes if abs(n) > 1e-3]
    if len(nodes) < 2 or any(abs(a - b) < 1e-6 for a, b in zip(nodes, nodes[1:])):
        return
    path = Path(nodes)
    h = _smooth(k)
    tol = 1e-10
    whole = nf.line_integral(h, path, tol)
    assert abs(nf.cumulative_line_integrals(h, path, tol)[-1] - whole) < 2 * tol * max(1, abs(whole))
    assert abs(nf.line_integral(h, path.reversed(), tol) + whole) < 2 * tol * max(1, abs(whole))


def test_additivity_over_concatenation():
    h = _smooth(0.7)
    p, q = Path.polyline(0, 1 + 0.5j), Path.polyline(1 + 0.5j, -0.3 + 1j, 0.2j)
    tol = 1e-10
    assert abs(nf.line_integral(h, p + q, tol) - nf.line_integral(h, p, tol) - nf.line_integral(h, q, tol)) < 2 * tol


def test_straight_integrals_agree_with_adaptive():
    h = _smooth(1.3)
    ends = np.array([0.5 + 0.5j, -0.8 + 0.1j, 0.3 - 0.9j])
    fast = nf.straight_integrals(h, np.zeros(3, complex), ends, 1e-12)
    slow = [nf.line_integral(h, Path.segment(0, e), 1e-12) for e in ends]
    assert np.allclose(fast, slow, atol=1e-11)


def test_field_arithmetic_realness():
    r = real_field(lambda z: np.asarray(z).real)
    assert isinstance(r * r, nf.RealFieldHandle)
    assert not isinstance(r * identity, nf.RealFieldHandle)
    assert (r + 1)(2 + 3j) == 3


def test_domain_checked_on_call():
    h = field(lambda z: z, domain=lambda z: np.abs(z) < 1)
    with pytest.raises(nf.DomainError):
        h(2.0)
    assert h.contains(np.array([0.5, 1.5])).tolist() == [True, False]


def test_grids():
    g = nf.Grid.disk(0, 0.9, 15)
    assert np.all(np.abs(g.points) <= 0.9 + 1e-12)
    r = nf.Grid.rectangle(-1, 1, -2, 2, 5)
    assert r.shape == (5, 5) and len(r) == 25
    assert len(r.filter(lambda z: z.real > 0)) == 10
