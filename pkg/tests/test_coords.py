import numpy as np
import pytest

from pseudoanalytic import coords as C
from pseudoanalytic.numfield import DomainError, gradient, real_field, wirtinger_dz, wirtinger_dzbar

ALL = [C.cartesian(), C.polar(), C.parabolic(), C.elliptic(1.5), C.bipolar(0.8)]


def valid_sample(cs, n=200, seed=3):
    rng = np.random.default_rng(seed)
    z = rng.uniform(-2, 2, 4 * n) + 1j * rng.uniform(-2, 2, 4 * n)
    # keep a margin from cuts and branch points: difference truncation grows like |Phi'''|
    params = dict(cs.params, eps0=0.25) if cs.name != "cartesian" else {}
    return z[C.by_name(cs.name, **params).validity(z)][:n]


def test_cartesian():
    cs = C.cartesian()
    assert cs.phi(3 + 4j) == 3 + 4j
    assert cs.phi_z(0.7 - 2j) == 1
    assert cs.validity(np.array([1e6 + 1e6j]))[0]


def test_polar():
    cs = C.polar()
    assert abs(cs.u(1.0)) < 1e-15
    assert abs(cs.v(1j) - np.pi / 2) < 1e-15
    assert cs.phi_z(2.0) == pytest.approx(0.5)
    assert not cs.validity(np.array([0j]))[0]
    with pytest.raises(DomainError):
        cs.phi(-1.0)


def test_parabolic():
    cs = C.parabolic()
    assert cs.phi(1.0) == pytest.approx(np.sqrt(2))
    assert cs.phi_z(1.0) == pytest.approx(1 / np.sqrt(2))
    assert not cs.validity(np.array([0j]))[0]
    z = 0.3 + 0.8j
    r = abs(z)
    assert cs.u(z) == pytest.approx(np.sqrt(r + z.real))
    assert cs.v(z) == pytest.approx(np.sqrt(r - z.real))


def test_elliptic():
    assert C.elliptic(1.0).phi(0j) == 0
    assert C.elliptic(2.0).phi_z(0j) == pytest.approx(0.5)
    assert not C.elliptic(1.0).validity(np.array([1 + 0j]))[0]
    with pytest.raises(C.CoordinateError):
        C.elliptic(0.0)


def test_bipolar():
    cs = C.bipolar(1.0)
    assert cs.phi(0j) == 0
    assert cs.phi_z(0j) == pytest.approx(2.0)
    with pytest.raises(C.CoordinateError):
        C.bipolar(-1.0)
    alpha = 1.3
    cs = C.bipolar(alpha)
    z = valid_sample(cs, 20)
    expected = 2 * alpha * z.real / (alpha**2 + np.abs(z) ** 2)
    assert np.max(np.abs(np.tanh(cs.u(z)) - expected)) < 1e-10


@pytest.mark.parametrize("cs", ALL, ids=lambda c: c.name)
def test_analytic_and_derivative(cs):
    z = valid_sample(cs)
    assert np.max(np.abs(wirtinger_dzbar(cs.phi, z))) < 1e-8
    scale = 1 + np.abs(cs.phi_z(z))
    assert np.max(np.abs(wirtinger_dz(cs.phi, z) - cs.phi_z(z)) / scale) < 1e-6
    assert np.all(np.abs(cs.phi_z(z)) > 0)


@pytest.mark.parametrize("cs", ALL, ids=lambda c: c.name)
def test_level_curves_orthogonal(cs):
    z = valid_sample(cs)
    u = real_field(lambda w: cs.phi.raw(w).real, cs.validity)
    v = real_field(lambda w: cs.phi.raw(w).imag, cs.validity)
    gu, gv = gradient(u, z), gradient(v, z)
    dot = gu.real * gv.real + gu.imag * gv.imag
    assert np.max(np.abs(dot) / (1 + np.abs(gu) * np.abs(gv))) < 1e-8


@pytest.mark.parametrize("cs", ALL, ids=lambda c: c.name)
def test_inverse_round_trip(cs):
    z = valid_sample(cs)
    assert np.max(np.abs(cs.to_plane(cs.phi(z)) - z)) < 1e-10


def test_polar_exp_identity():
    cs = C.polar()
    z = valid_sample(cs)
    assert np.max(np.abs(np.exp(cs.phi(z)) - z)) < 1e-12


def test_catalog_lookup():
    assert C.by_name("elliptic", alpha=2.0).describe()["alpha"] == 2.0
    with pytest.raises(C.CoordinateError):
        C.by_name("spherical")
