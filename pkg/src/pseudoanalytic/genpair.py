"""Generating pairs, their characteristic coefficients, and the explicit
generating sequence for a separable weight ``f = U(u) V(v)``."""

from __future__ import annotations

import threading
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from . import exprlang
from .coords import CoordinateSystem
from .numfield import (
    DEFAULT_STEP,
    FieldHandle,
    Grid,
    RealFieldHandle,
    as_points,
    wirtinger_dz,
    wirtinger_dzbar,
)

DEGENERATE_TOL = 1e-12


class DegeneratePairError(ValueError):
    pass


class WeightError(ValueError):
    """The weight is not positive (or not separable) where it must be."""


class SequenceRangeError(OverflowError):
    pass


@dataclass(frozen=True)
class GeneratingPair:
    F: FieldHandle
    G: FieldHandle

    def domain(self, z):
        return self.F.contains(z) & self.G.contains(z)

    def values(self, z):
        z = as_points(z)
        return self.F(z), self.G(z)

    def positivity(self, z) -> np.ndarray:
        """``Im(conj(F) G)``; positive on a genuine generating pair."""
        F, G = self.values(z)
        return np.imag(np.conj(F) * G)

    def is_generating(self, sample) -> bool:
        pts = sample.points if isinstance(sample, Grid) else as_points(sample)
        return bool(np.all(self.positivity(pts) > 0))

    def decompose(self, W, z):
        """Real ``(phi, psi)`` with ``W = phi F + psi G`` at ``z``."""
        F, G = self.values(z)
        w = np.asarray(W(z) if callable(W) else W, dtype=complex)
        det = np.imag(np.conj(F) * G)
        phi = np.imag(np.conj(w) * G) / det
        psi = np.imag(np.conj(F) * w) / det
        return phi, psi


def _denominator(F, G):
    d = F * np.conj(G) - np.conj(F) * G
    if np.any(np.abs(d) < DEGENERATE_TOL):
        raise DegeneratePairError("F conj(G) - conj(F) G vanishes (degenerate pair)")
    return d


@dataclass(frozen=True)
class CharacteristicCoefficients:
    """Handles for ``a, b`` (from z-bar derivatives) and ``A, B`` (z derivatives)."""

    pair: GeneratingPair
    step: float = DEFAULT_STEP

    def all(self, z):
        """``(a, b, A, B)`` evaluated at ``z``."""
        z = as_points(z)
        F, G = self.pair.values(z)
        d = _denominator(F, G)
        Fzb, Gzb = wirtinger_dzbar(self.pair.F, z, self.step), wirtinger_dzbar(self.pair.G, z, self.step)
        Fz, Gz = wirtinger_dz(self.pair.F, z, self.step), wirtinger_dz(self.pair.G, z, self.step)
        a = -(np.conj(F) * Gzb - Fzb * np.conj(G)) / d
        b = (F * Gzb - Fzb * G) / d
        A = -(np.conj(F) * Gz - Fz * np.conj(G)) / d
        B = (F * Gz - Fz * G) / d
        return a, b, A, B

    def _handle(self, index):
        return FieldHandle(lambda z: self.all(z)[index], self.pair.domain)

    @property
    def a(self):
        return self._handle(0)

    @property
    def b(self):
        return self._handle(1)

    @property
    def A(self):
        return self._handle(2)

    @property
    def B(self):
        return self._handle(3)


def characteristic_coefficients(p: GeneratingPair, step: float = DEFAULT_STEP) -> CharacteristicCoefficients:
    return CharacteristicCoefficients(p, step)


def adjoint(p: GeneratingPair) -> GeneratingPair:
    """``F* = -2 conj(F) / d``, ``G* = 2 conj(G) / d`` with ``d = F conj(G) - conj(F) G``."""

    def fstar(z):
        F, G = p.F.raw(z), p.G.raw(z)
        return -2 * np.conj(F) / _denominator(F, G)

    def gstar(z):
        F, G = p.F.raw(z), p.G.raw(z)
        return 2 * np.conj(G) / _denominator(F, G)

    return GeneratingPair(FieldHandle(fstar, p.domain, "F*"), FieldHandle(gstar, p.domain, "G*"))


# ---------------------------------------------------------------------------
# separable weights


def _one_dim_log_derivative(func, t, rel_step=1e-6):
    t = np.asarray(t, dtype=float)
    h = rel_step * np.maximum(1.0, np.abs(t))
    return (func(t + h) - func(t - h)) / (2 * h) / func(t)


@dataclass(frozen=True)
class SeparableWeight:
    """``f(z) = U(u(z)) V(v(z))`` over an analytic coordinate map.

    ``bigU`` and ``bigV`` are vectorized real functions of one variable.
    """

    bigU: Callable[[np.ndarray], np.ndarray]
    bigV: Callable[[np.ndarray], np.ndarray]
    coords: CoordinateSystem
    label: str = ""
    extra_domain: Callable | None = None

    @classmethod
    def from_expressions(cls, u_source, v_source, coords, params=None, domain=None):
        U = exprlang.to_function(u_source, "u", params)
        V = exprlang.to_function(v_source, "v", params)
        return cls(U, V, coords, f"U(u)={U.source}; V(v)={V.source}", domain)

    def domain(self, z):
        z = np.asarray(z, dtype=complex)
        ok = self.coords.validity(z)
        if self.extra_domain is not None:
            ok = ok & np.asarray(self.extra_domain(z), dtype=bool)
        return ok

    def _uv(self, z):
        w = self.coords.phi.raw(np.asarray(z, dtype=complex))
        return w.real, w.imag

    def f_values(self, z):
        u, v = self._uv(z)
        return self.bigU(u) * self.bigV(v)

    def U_values(self, z):
        return self.bigU(self._uv(z)[0])

    @property
    def f(self) -> RealFieldHandle:
        return RealFieldHandle(self.f_values, self.domain, "f")

    @property
    def U_field(self) -> RealFieldHandle:
        return RealFieldHandle(self.U_values, self.domain, "U")

    def log_derivatives(self, z):
        """``(U'/U)(u(z))`` and ``(V'/V)(v(z))`` by 1-D central differences."""
        u, v = self._uv(z)
        return _one_dim_log_derivative(self.bigU, u), _one_dim_log_derivative(self.bigV, v)

    def fz_over_f(self, z):
        """Closed form ``f_z / f = Phi_z (U'/U - i V'/V) / 2``."""
        lu, lv = self.log_derivatives(z)
        return 0.5 * self.coords.phi_z.raw(np.asarray(z, dtype=complex)) * (lu - 1j * lv)

    def check_positive(self, sample) -> None:
        pts = sample.points if isinstance(sample, Grid) else as_points(sample)
        vals = self.f(pts)
        if not np.all(vals > 0):
            bad = pts[np.argmin(vals)] if np.ndim(pts) else pts
            raise WeightError(f"weight is not positive at {complex(bad)} (f = {np.min(vals):.3e})")


def main_pair(w, sample=None) -> GeneratingPair:
    """The pair ``(f, i/f)`` of the main Vekua equation.

    ``w`` is a :class:`SeparableWeight` or any positive real field handle.
    """
    f = w.f if isinstance(w, SeparableWeight) else w
    if sample is not None:
        pts = sample.points if isinstance(sample, Grid) else as_points(sample)
        vals = f(pts)
        if not np.all(vals > 0):
            raise WeightError(f"nonpositive weight detected (min {np.min(vals):.3e})")
    F = FieldHandle(lambda z: f.raw(z).astype(complex), f.domain, "F")
    G = FieldHandle(lambda z: 1j / f.raw(z), f.domain, "G")
    return GeneratingPair(F, G)


def _checked(values, m):
    if not np.all(np.isfinite(values)):
        raise SequenceRangeError(f"generating pair of index {m} is not representable here")
    return values


@dataclass(frozen=True)
class GeneratingSequence:
    """Explicit generating sequence of a separable weight.

    Even ``m``: ``(Phi_z^m F, Phi_z^m G)``; odd ``m``:
    ``(Phi_z^m F / U^2, Phi_z^m U^2 G)`` with ``F = f``, ``G = i/f``.
    """

    base: SeparableWeight
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def generators(self, m: int, z):
        """Raw ``(F_m, G_m)`` at ``z`` without domain checks."""
        z = np.asarray(z, dtype=complex)
        u, v = self.base._uv(z)
        Uu = self.base.bigU(u)
        f = Uu * self.base.bigV(v)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            pz = self.base.coords.phi_z.raw(z) ** m
            if m % 2:
                F, G = pz * f / Uu**2, pz * Uu**2 * 1j / f
            else:
                F, G = pz * f, pz * 1j / f
        return _checked(F, m), _checked(G, m)

    def pair(self, m: int) -> GeneratingPair:
        m = int(m)
        cached = self._cache.get(m)
        if cached is not None:
            return cached
        dom = self.base.domain
        p = GeneratingPair(
            FieldHandle(lambda z: self.generators(m, z)[0], dom, f"F_{m}"),
            FieldHandle(lambda z: self.generators(m, z)[1], dom, f"G_{m}"),
        )
        with self._lock:
            return self._cache.setdefault(m, p)

    __getitem__ = pair


def generating_sequence(w: SeparableWeight) -> GeneratingSequence:
    return GeneratingSequence(w)


@dataclass
class SuccessorReport:
    max_a_diff: float
    max_b_plus_B: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_a_diff < self.tol and self.max_b_plus_B < self.tol


def successor_check(p: GeneratingPair, q: GeneratingPair, sample, tol: float = 1e-5,
                    step: float = DEFAULT_STEP) -> SuccessorReport:
    """Check that ``q`` is a successor of ``p``: ``a_q = a_p`` and ``b_q = -B_p``."""
    pts = sample.points if isinstance(sample, Grid) else as_points(sample)
    a_p, _, _, B_p = characteristic_coefficients(p, step).all(pts)
    a_q, b_q, _, _ = characteristic_coefficients(q, step).all(pts)
    return SuccessorReport(
        float(np.max(np.abs(a_q - a_p))), float(np.max(np.abs(b_q + B_p))), tol
    )


def weight_from_field(f: RealFieldHandle, coords: CoordinateSystem, reference, label="") -> SeparableWeight:
    """Split a (separable) positive field into ``U(u) V(v)`` through ``reference``.

    ``U(u) = f(u + i v0) / sqrt(f0)`` and ``V(v) = f(u0 + i v) / sqrt(f0)``,
    where ``(u0, v0) = Phi(reference)`` and ``f0 = f(reference)``.  The
    product equals ``f`` exactly when ``log f`` is additively separable.
    """
    z0 = complex(reference)
    w0 = complex(coords.phi(z0))
    f0 = float(f(z0))
    if not f0 > 0:
        raise WeightError(f"weight is not positive at the reference point {z0}")
    scale = np.sqrt(f0)

    def bigU(u):
        return f.raw(coords.to_plane(np.asarray(u) + 1j * w0.imag)) / scale

    def bigV(v):
        return f.raw(coords.to_plane(w0.real + 1j * np.asarray(v))) / scale

    return SeparableWeight(bigU, bigV, coords, label or f.name, f.domain)
