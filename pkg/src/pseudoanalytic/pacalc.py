"""Pseudoanalytic calculus for the main Vekua equation ``W_zbar = (f_zbar/f) conj(W)``.

(F, G)-derivatives and integrals, the antigradient operators ``A`` and
``Abar``, the factorization operators ``P`` and ``S``, conjugate
metaharmonic / conductivity functions, and finite-difference residual
verifiers.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .genpair import GeneratingPair, adjoint, characteristic_coefficients
from .numfield import (
    DEFAULT_STEP,
    DEFAULT_TOL,
    FieldHandle,
    Grid,
    Path,
    RealFieldHandle,
    as_points,
    laplacian,
    line_integral,
    partials,
    straight_integrals,
    wirtinger_dz,
    wirtinger_dzbar,
)

COMPAT_THRESHOLD = 1e-4
COMPAT_SAMPLES = 20


class CompatibilityError(ValueError):
    """The field is not a Wirtinger gradient of a real function."""


@dataclass
class VekuaResidualReport:
    max_abs: float
    mean_abs: float
    sample: Grid
    step: float

    @classmethod
    def from_values(cls, values, sample, step):
        a = np.abs(np.asarray(values)).ravel()
        return cls(float(a.max(initial=0.0)), float(a.mean()) if a.size else 0.0, sample, step)


def _grid(sample) -> Grid:
    return sample if isinstance(sample, Grid) else Grid(as_points(sample))


# ---------------------------------------------------------------------------
# (F, G)-derivative and integral


def fg_derivative(p: GeneratingPair, W: FieldHandle, step: float = DEFAULT_STEP) -> FieldHandle:
    """``W_z - A W - B conj(W)`` with numerically computed ``A, B``."""
    coeffs = characteristic_coefficients(p)

    def func(z):
        _, _, A, B = coeffs.all(z)
        w = W.raw(z)
        return wirtinger_dz(W, z, step) - A * w - B * np.conj(w)

    return FieldHandle(func, lambda z: p.domain(z) & W.contains(z), "fg_derivative")


def fg_integral(p: GeneratingPair, w: FieldHandle, path: Path, tol: float = DEFAULT_TOL) -> complex:
    """``F(z1) Re ∫ G* w dz + G(z1) Re ∫ F* w dz`` along ``path``."""
    star = adjoint(p)
    i_g = line_integral(star.G * w, path, tol)
    i_f = line_integral(star.F * w, path, tol)
    F1, G1 = (complex(v) for v in p.values(path.end))
    return F1 * i_g.real + G1 * i_f.real


# ---------------------------------------------------------------------------
# antigradients


def _check_compatibility(Phi: FieldHandle, base: complex, sign: int, radius: float, step: float):
    """``d_y Phi1 + sign * d_x Phi2 = 0`` (sign +1 for A, -1 for Abar) at random points."""
    rng = np.random.default_rng(12345)
    r = radius * np.sqrt(rng.uniform(0, 1, 4 * COMPAT_SAMPLES))
    pts = base + r * np.exp(1j * rng.uniform(0, 2 * np.pi, r.size))
    margin = 2 * step * np.maximum(1, np.abs(pts))
    ok = Phi.contains(pts)
    for d in (margin, -margin, 1j * margin, -1j * margin):
        ok &= Phi.contains(pts + d)
    pts = pts[ok][:COMPAT_SAMPLES]
    if pts.size == 0:
        return 0.0
    px, py = partials(Phi, pts, step)
    resid = np.abs(py.real + sign * px.imag)
    scale = 1.0 + np.abs(Phi.raw(pts))
    worst = float(np.max(resid / scale))
    if worst > COMPAT_THRESHOLD:
        raise CompatibilityError(f"compatibility residual {worst:.3e} exceeds {COMPAT_THRESHOLD:.0e}")
    return worst


def _antigradient(Phi, base, path_builder, tol, conjugate, check, check_radius, step):
    base = complex(base)
    if check:
        _check_compatibility(Phi, base, -1 if conjugate else 1, check_radius, max(step, 1e-4))
    integrand = Phi.conj() if conjugate else Phi

    def func(z):
        z = np.asarray(z, dtype=complex)
        if path_builder is None:
            vals = straight_integrals(integrand, np.full(z.shape, base), z, tol)
            return 2 * vals.real
        out = np.empty(z.shape)
        for idx, t in np.ndenumerate(z):
            out[idx] = 0.0 if t == base else 2 * line_integral(integrand, path_builder(base, t), tol).real
        return out

    return RealFieldHandle(func, Phi.domain, "antigradient_bar" if conjugate else "antigradient")


def antigradient(Phi: FieldHandle, base, path_builder: Callable | None = None, tol: float = 1e-11,
                 check: bool = True, check_radius: float = 0.5, step: float = 1e-4) -> RealFieldHandle:
    """Real ``phi`` with ``phi_z = Phi`` and ``phi(base) = 0``: ``2 ∫ (Phi1 dx - Phi2 dy)``."""
    return _antigradient(Phi, base, path_builder, tol, False, check, check_radius, step)


def antigradient_bar(Phi: FieldHandle, base, path_builder: Callable | None = None, tol: float = 1e-11,
                     check: bool = True, check_radius: float = 0.5, step: float = 1e-4) -> RealFieldHandle:
    """Real ``phi`` with ``phi_zbar = Phi`` and ``phi(base) = 0``: ``2 ∫ (Phi1 dx + Phi2 dy)``."""
    return _antigradient(Phi, base, path_builder, tol, True, check, check_radius, step)


# ---------------------------------------------------------------------------
# factorization operators


def op_P(f: RealFieldHandle, g: RealFieldHandle, step: float = DEFAULT_STEP) -> FieldHandle:
    """``P g = f d_z (g / f)``."""
    ratio = g / f
    return FieldHandle(lambda z: f.raw(z) * wirtinger_dz(ratio, z, step), ratio.domain, "P")


def op_S(f: RealFieldHandle, w: FieldHandle, base, tol: float = 1e-11, **kwargs) -> RealFieldHandle:
    """``S w = f A[w / f]``."""
    phi = antigradient(w / f, base, tol=tol, **kwargs)
    return RealFieldHandle(lambda z: f.raw(z) * phi.raw(z), phi.domain, "S")


def _check_step(step, kwargs):
    # the compatibility probe differentiates a difference quotient; keep its step well above the inner one
    kwargs.setdefault("step", max(1e-4, 10 * step))
    return kwargs


def conjugate_metaharmonic(f: RealFieldHandle, W1: RealFieldHandle, base, tol: float = 1e-11,
                           step: float = DEFAULT_STEP, **kwargs) -> RealFieldHandle:
    """``W2 = f^-1 Abar(i f^2 d_zbar(f^-1 W1))`` so that ``W1 + i W2`` solves the main Vekua equation."""
    phi = W1 / f
    integrand = FieldHandle(lambda z: 1j * f.raw(z) ** 2 * wirtinger_dzbar(phi, z, step), phi.domain)
    psi = antigradient_bar(integrand, base, tol=tol, **_check_step(step, kwargs))
    return RealFieldHandle(lambda z: psi.raw(z) / f.raw(z), psi.domain, "W2")


def conjugate_metaharmonic_inverse(f: RealFieldHandle, W2: RealFieldHandle, base, tol: float = 1e-11,
                                   step: float = DEFAULT_STEP, **kwargs) -> RealFieldHandle:
    """``W1 = -f Abar(i f^-2 d_zbar(f W2))``.

    When ``W2`` is itself defined by quadrature, pass ``step=1e-4`` or larger
    so that differencing does not amplify its rounding noise.
    """
    chi = W2 * f
    integrand = FieldHandle(lambda z: 1j * wirtinger_dzbar(chi, z, step) / f.raw(z) ** 2, chi.domain)
    phi = antigradient_bar(integrand, base, tol=tol, **_check_step(step, kwargs))
    return RealFieldHandle(lambda z: -f.raw(z) * phi.raw(z), phi.domain, "W1")


def conjugate_conductivity(f: RealFieldHandle, U: RealFieldHandle, base, tol: float = 1e-11,
                           step: float = DEFAULT_STEP, **kwargs) -> RealFieldHandle:
    """``V = Abar(i f^2 U_zbar)``: ``f U + i V / f`` solves the main Vekua equation."""
    integrand = FieldHandle(lambda z: 1j * f.raw(z) ** 2 * wirtinger_dzbar(U, z, step),
                            lambda z: f.contains(z) & U.contains(z))
    return antigradient_bar(integrand, base, tol=tol, **_check_step(step, kwargs))


def conjugate_conductivity_inverse(f: RealFieldHandle, V: RealFieldHandle, base, tol: float = 1e-11,
                                   step: float = DEFAULT_STEP, **kwargs) -> RealFieldHandle:
    """``U = -Abar(i f^-2 V_zbar)``."""
    integrand = FieldHandle(lambda z: 1j * wirtinger_dzbar(V, z, step) / f.raw(z) ** 2,
                            lambda z: f.contains(z) & V.contains(z))
    phi = antigradient_bar(integrand, base, tol=tol, **_check_step(step, kwargs))
    return RealFieldHandle(lambda z: -phi.raw(z), phi.domain, "U")


# ---------------------------------------------------------------------------
# residual verifiers


def vekua_residual(f: RealFieldHandle, W: FieldHandle, sample, step: float = DEFAULT_STEP) -> VekuaResidualReport:
    """Statistics of ``|W_zbar - (f_zbar / f) conj(W)|`` over ``sample``."""
    g = _grid(sample)
    z = g.points
    r = wirtinger_dzbar(W, z, step) - wirtinger_dzbar(f, z, step) / f.raw(z) * np.conj(W.raw(z))
    return VekuaResidualReport.from_values(r, g, step)


def panalytic_residual(f: RealFieldHandle, W: FieldHandle, sample, step: float = DEFAULT_STEP) -> VekuaResidualReport:
    """Residuals of ``phi_x = psi_y / f^2``, ``phi_y = -psi_x / f^2`` with
    ``phi = Re W / f`` and ``psi = f Im W``."""
    g = _grid(sample)
    z = g.points
    phi = RealFieldHandle(lambda t: W.raw(t).real / f.raw(t), W.domain)
    psi = RealFieldHandle(lambda t: W.raw(t).imag * f.raw(t), W.domain)
    phx, phy = partials(phi, z, step)
    psx, psy = partials(psi, z, step)
    f2 = f.raw(z) ** 2
    r1 = np.abs(phx.real - psy.real / f2)
    r2 = np.abs(phy.real + psx.real / f2)
    return VekuaResidualReport.from_values(np.maximum(r1, r2), g, step)


def second_kind_residual(f: RealFieldHandle, W: FieldHandle, sample, step: float = DEFAULT_STEP) -> VekuaResidualReport:
    """For ``w = phi + i psi`` with ``W = phi f + i psi / f``: residual of
    ``w_zbar = ((1 - f^2) / (1 + f^2)) conj(w)_zbar``."""
    g = _grid(sample)
    z = g.points
    w = FieldHandle(lambda t: W.raw(t).real / f.raw(t) + 1j * W.raw(t).imag * f.raw(t), W.domain)
    f2 = f.raw(z) ** 2
    r = wirtinger_dzbar(w, z, step) - (1 - f2) / (1 + f2) * wirtinger_dzbar(w.conj(), z, step)
    return VekuaResidualReport.from_values(r, g, step)


def factorization_residual(f: RealFieldHandle, nu: RealFieldHandle, phi: RealFieldHandle, sample,
                           step: float = DEFAULT_STEP) -> float:
    """``max |(Δ - ν) φ / 4 - (d_zbar + (f_z/f) C)(d_z - (f_z/f) C) φ|``."""
    z = _grid(sample).points
    outer = max(np.sqrt(step), 10 * step)
    fz_over_f = FieldHandle(lambda t: wirtinger_dz(f, t, step) / f.raw(t), f.domain)
    inner = FieldHandle(lambda t: wirtinger_dz(phi, t, step) - fz_over_f.raw(t) * phi.raw(t),
                        lambda t: f.contains(t) & phi.contains(t))
    rhs = wirtinger_dzbar(inner, z, outer) + fz_over_f.raw(z) * np.conj(inner.raw(z))
    lhs = 0.25 * (laplacian(phi, z, outer) - nu.raw(z) * phi.raw(z))
    return float(np.max(np.abs(lhs - rhs)))


def schrodinger_residual(nu: RealFieldHandle, g: RealFieldHandle, sample, step: float = 1e-4) -> float:
    """``max |(-Δ + ν) g|``."""
    z = _grid(sample).points
    return float(np.max(np.abs(-laplacian(g, z, step) + nu.raw(z) * g.raw(z))))


def divergence_form_residual(k: RealFieldHandle, u: RealFieldHandle, sample, step: float = 1e-4) -> float:
    """``max |div(k ∇u)|`` expanded as ``k Δu + ∇k·∇u``."""
    z = _grid(sample).points
    kx, ky = partials(k, z, step)
    ux, uy = partials(u, z, step)
    r = k.raw(z) * laplacian(u, z, step) + kx.real * ux.real + ky.real * uy.real
    return float(np.max(np.abs(r)))


@dataclass
class SplitResiduals:
    """Residuals of the four second-order equations satisfied by the parts of a main-Vekua solution."""

    conductivity: float
    associated_conductivity: float
    schrodinger_re: float
    schrodinger_im: float

    def max(self) -> float:
        return max(self.conductivity, self.associated_conductivity, self.schrodinger_re, self.schrodinger_im)


def vekua_split_residuals(f: RealFieldHandle, W: FieldHandle, sample, step: float = 1e-4) -> SplitResiduals:
    """``div(f^2 ∇(Re W / f))``, ``div(f^-2 ∇(f Im W))``, ``(-Δ + r1) Re W``, ``(-Δ + r2) Im W``."""
    from .elliptic import associated_potentials

    re = RealFieldHandle(lambda t: W.raw(t).real, W.domain)
    im = RealFieldHandle(lambda t: W.raw(t).imag, W.domain)
    f2 = f * f
    r1, r2 = associated_potentials(f, step)
    return SplitResiduals(
        divergence_form_residual(f2, re / f, sample, step),
        divergence_form_residual(RealFieldHandle(lambda t: 1 / f.raw(t) ** 2, f.domain), im * f, sample, step),
        schrodinger_residual(r1, re, sample, step),
        schrodinger_residual(r2, im, sample, step),
    )
