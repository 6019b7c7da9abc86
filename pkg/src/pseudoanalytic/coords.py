"""Orthogonal coordinate systems of the plane given by analytic maps.

Each system is ``u + iv = Phi(x + iy)`` with an explicit derivative
``Phi_z`` and an inverse map.  Principal branches are used; the validity
predicate removes an ``eps0``-neighbourhood of branch points and cuts so
that ``Phi_z`` stays bounded and nonzero.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .numfield import FieldHandle, as_points

DEFAULT_EPS0 = 1e-3


class CoordinateError(ValueError):
    pass


@dataclass(frozen=True)
class CoordinateSystem:
    name: str
    phi: FieldHandle
    phi_z: FieldHandle
    inverse: Callable[[np.ndarray], np.ndarray]
    params: tuple = ()

    def validity(self, z) -> np.ndarray:
        return self.phi.contains(z)

    def u(self, z):
        return self.phi(z).real

    def v(self, z):
        return self.phi(z).imag

    def to_plane(self, w) -> np.ndarray:
        """Point ``z`` with ``Phi(z) = w`` (on the principal sheet)."""
        return np.asarray(self.inverse(as_points(w)), dtype=complex)

    def describe(self) -> dict:
        return {"name": self.name, **dict(self.params)}


def _near_cut(z, eps0, xmin=None, xmax=None):
    """Points within eps0 of the real-axis ray(s) x <= xmax or x >= xmin."""
    near_axis = np.abs(z.imag) < eps0
    hit = np.zeros(z.shape, dtype=bool)
    if xmax is not None:
        hit |= near_axis & (z.real <= xmax)
    if xmin is not None:
        hit |= near_axis & (z.real >= xmin)
    return hit


def _make(name, phi, phi_z, inverse, domain, params=()):
    return CoordinateSystem(
        name,
        FieldHandle(phi, domain, f"{name}.phi"),
        FieldHandle(phi_z, domain, f"{name}.phi_z"),
        inverse,
        tuple(params),
    )


def cartesian() -> CoordinateSystem:
    return _make(
        "cartesian",
        lambda z: z,
        lambda z: np.ones_like(z),
        lambda w: w,
        lambda z: np.isfinite(z),
    )


def polar(eps0: float = DEFAULT_EPS0) -> CoordinateSystem:
    """``Phi = ln z``: ``u = ln r``, ``v`` the polar angle in (-pi, pi)."""

    def domain(z):
        z = np.asarray(z, dtype=complex)
        return np.isfinite(z) & (np.abs(z) > eps0) & ~_near_cut(z, eps0, xmax=0.0)

    return _make("polar", np.log, lambda z: 1.0 / z, np.exp, domain, [("eps0", eps0)])


def parabolic(eps0: float = DEFAULT_EPS0) -> CoordinateSystem:
    """``Phi = sqrt(2) sqrt(z)``, so ``u = sqrt(r + x)``, ``v = sqrt(r - x)`` for y > 0."""
    s2 = np.sqrt(2.0)

    def domain(z):
        z = np.asarray(z, dtype=complex)
        return np.isfinite(z) & (np.abs(z) > eps0) & ~_near_cut(z, eps0, xmax=0.0)

    return _make(
        "parabolic",
        lambda z: s2 * np.sqrt(z),
        lambda z: 1.0 / (s2 * np.sqrt(z)),
        lambda w: (w / s2) ** 2,
        domain,
        [("eps0", eps0)],
    )


def _check_alpha(alpha):
    if not alpha > 0:
        raise CoordinateError(f"alpha must be positive, got {alpha}")


def elliptic(alpha: float = 1.0, eps0: float = DEFAULT_EPS0) -> CoordinateSystem:
    """``Phi = arcsin(z / alpha)`` with cuts on |x| >= alpha of the real axis."""
    _check_alpha(alpha)

    def domain(z):
        z = np.asarray(z, dtype=complex)
        return (
            np.isfinite(z)
            & (np.abs(z - alpha) > eps0)
            & (np.abs(z + alpha) > eps0)
            & ~_near_cut(z, eps0, xmin=alpha, xmax=-alpha)
        )

    return _make(
        "elliptic",
        lambda z: np.arcsin(z / alpha),
        lambda z: 1.0 / np.sqrt(alpha**2 - z**2),
        lambda w: alpha * np.sin(w),
        domain,
        [("alpha", alpha), ("eps0", eps0)],
    )


def bipolar(alpha: float = 1.0, eps0: float = DEFAULT_EPS0) -> CoordinateSystem:
    """``Phi = ln((alpha + z) / (alpha - z))``; foci at ``±alpha``."""
    _check_alpha(alpha)

    def domain(z):
        z = np.asarray(z, dtype=complex)
        return (
            np.isfinite(z)
            & (np.abs(z - alpha) > eps0)
            & (np.abs(z + alpha) > eps0)
            & ~_near_cut(z, eps0, xmin=alpha, xmax=-alpha)
        )

    return _make(
        "bipolar",
        lambda z: np.log((alpha + z) / (alpha - z)),
        lambda z: 2 * alpha / (alpha**2 - z**2),
        lambda w: alpha * np.tanh(w / 2),
        domain,
        [("alpha", alpha), ("eps0", eps0)],
    )


CATALOG = {
    "cartesian": cartesian,
    "polar": polar,
    "parabolic": parabolic,
    "elliptic": elliptic,
    "bipolar": bipolar,
}


def by_name(name: str, **params) -> CoordinateSystem:
    try:
        factory = CATALOG[name]
    except KeyError:
        raise CoordinateError(f"unknown coordinate system {name!r}; known: {sorted(CATALOG)}") from None
    return factory(**params)
