"""Complete systems of solutions of second-order elliptic equations built
from formal powers, plus closed-form oracle systems and residual checks."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .coords import CoordinateSystem, cartesian
from .formalpowers import FormalPowerBasis
from .genpair import SeparableWeight, WeightError, weight_from_field
from .numfield import (
    DEFAULT_LAPLACIAN_STEP,
    FieldHandle,
    Grid,
    RealFieldHandle,
    as_points,
    constant,
    laplacian,
    partials,
)
from .pacalc import VekuaResidualReport, antigradient_bar

log = logging.getLogger(__name__)

KINDS = ("schrodinger", "conductivity", "div_p_grad_plus_q")
PARTICULAR_TOL = 1e-5
DUPLICATE_TOL = 1e-12


class EquationError(ValueError):
    pass


class NotSeparableError(WeightError):
    pass


def _points(sample):
    return sample.points if isinstance(sample, Grid) else as_points(sample).ravel()


@dataclass(frozen=True)
class EquationDescriptor:
    """One of ``(-Δ + ν) u = 0``, ``div(f² ∇u) = 0`` or ``(div p ∇ + q) u = 0``."""

    kind: str
    nu: RealFieldHandle | None = None
    f: RealFieldHandle | None = None
    p: RealFieldHandle | None = None
    q: RealFieldHandle | None = None
    u0: RealFieldHandle | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise EquationError(f"unknown equation kind {self.kind!r}")
        needed = {"schrodinger": ("nu", "f"), "conductivity": ("f",), "div_p_grad_plus_q": ("p", "q", "u0")}
        for name in needed[self.kind]:
            if getattr(self, name) is None:
                raise EquationError(f"{self.kind} equation needs {name}")

    @classmethod
    def schrodinger(cls, nu, f):
        return cls("schrodinger", nu=nu, f=f)

    @classmethod
    def conductivity(cls, f):
        return cls("conductivity", f=f)

    @classmethod
    def div_p_grad_plus_q(cls, p, q, u0):
        return cls("div_p_grad_plus_q", p=p, q=q, u0=u0)

    def particular_solution(self) -> RealFieldHandle:
        return self.u0 if self.kind == "div_p_grad_plus_q" else self.f

    def validate(self, sample, step: float = DEFAULT_LAPLACIAN_STEP) -> float:
        """Check positivity and the particular-solution residual; returns the residual."""
        z = _points(sample)
        sol = self.particular_solution()
        if not np.all(sol(z) > 0):
            raise EquationError("the particular solution must be positive on the sample")
        if self.kind == "div_p_grad_plus_q" and not np.all(self.p(z) > 0):
            raise EquationError("p must be positive on the sample")
        if self.kind == "conductivity":
            return 0.0
        res = equation_residual(self, sol, sample, step).max_abs
        if res >= PARTICULAR_TOL:
            raise EquationError(f"particular solution residual {res:.3e} exceeds {PARTICULAR_TOL:.0e}")
        return res

    def member_factor(self, z):
        """Multiplier turning ``Re Z`` into a solution of this equation."""
        if self.kind == "schrodinger":
            return np.ones(np.shape(z))
        if self.kind == "conductivity":
            return 1.0 / self.f.raw(z)
        return 1.0 / np.sqrt(self.p.raw(z))


def _mixed_log_partial(f: RealFieldHandle, coords: CoordinateSystem, z, h=1e-3):
    w = coords.phi(z)
    pts = np.stack([w + h + 1j * h, w + h - 1j * h, w - h + 1j * h, w - h - 1j * h])
    vals = np.log(f(coords.to_plane(pts)))
    return (vals[0] - vals[1] - vals[2] + vals[3]) / (4 * h * h), np.log(f(z))


def separability_residual(f: RealFieldHandle, coords: CoordinateSystem, sample) -> float:
    """Largest normalized ``|∂² log f / ∂u ∂v|`` over ``sample``."""
    mixed, logf = _mixed_log_partial(f, coords, _points(sample))
    return float(np.max(np.abs(mixed) / (1e-6 * (1 + np.abs(logf)))))


def equation_weight(eq: EquationDescriptor) -> RealFieldHandle:
    """``f`` for Schrödinger and conductivity, ``p^(1/2) u0`` for ``div p grad + q``."""
    if eq.kind != "div_p_grad_plus_q":
        return eq.f
    p, u0 = eq.p, eq.u0
    return RealFieldHandle(lambda z: np.sqrt(p.raw(z)) * u0.raw(z),
                           lambda z: p.contains(z) & u0.contains(z), "sqrt(p) u0")


def separability_sample(coords: CoordinateSystem, reference, count: int = 100, radius: float = 0.5,
                        seed: int = 2024) -> np.ndarray:
    """``count`` valid points in a disk around ``reference``."""
    rng = np.random.default_rng(seed)
    pts = np.empty(0, complex)
    while pts.size < count:
        r = radius * np.sqrt(rng.uniform(0, 1, 4 * count))
        cand = complex(reference) + r * np.exp(2j * np.pi * rng.uniform(0, 1, r.size))
        pts = np.concatenate([pts, cand[coords.validity(cand)]])
    return pts[:count]


def weight_from_equation(eq: EquationDescriptor, coords: CoordinateSystem | None = None,
                         reference=None, sample=None) -> SeparableWeight:
    """The weight of the main Vekua equation attached to ``eq``, split as ``U(u) V(v)``.

    Raises :class:`NotSeparableError` when ``∂² log f / ∂u ∂v`` is not
    negligible on ``sample`` (100 points near ``reference`` by default).
    """
    coords = cartesian() if coords is None else coords
    if reference is None:
        reference = 0j if coords.validity(np.array([0j]))[0] else 1 + 0j
    f = equation_weight(eq)
    z = separability_sample(coords, reference) if sample is None else _points(sample)
    z = z[f.contains(z)]
    if z.size == 0 or not np.all(f(z) > 0):
        raise WeightError("weight is not positive on the sample")
    ratio = separability_residual(f, coords, z)
    if ratio >= 1.0:
        raise NotSeparableError(f"log f is not additively separable in (u, v) (normalized residual {ratio:.3e})")
    return weight_from_field(f, coords, reference)


@dataclass
class CompleteSystem:
    """Real solutions ``factor * Re Z^(n)(a, z0; .)`` ordered by ``n``, then ``a = 1`` before ``a = i``."""

    basis: FormalPowerBasis
    eq: EquationDescriptor
    provenance: list[tuple[int, complex]]
    dropped: list[tuple[int, complex]] = field(default_factory=list)

    def __len__(self):
        return len(self.provenance)

    @property
    def order(self) -> int:
        return max(n for n, _ in self.provenance)

    def evaluate(self, z) -> np.ndarray:
        """Matrix of member values, shape ``z.shape + (len(self),)``."""
        z = as_points(z)
        vals = self.basis.values(z)
        cols = [vals[..., n, 0 if a == 1 else 1].real for n, a in self.provenance]
        return np.stack(cols, axis=-1) * self.eq.member_factor(z)[..., None]

    def member(self, k: int) -> RealFieldHandle:
        n, a = self.provenance[k]
        col = 0 if a == 1 else 1
        domain = self.basis.weight.domain

        def func(z):
            return self.basis.values(z)[..., n, col].real * self.eq.member_factor(z)

        return RealFieldHandle(func, domain, f"u{k}")

    @property
    def members(self) -> list[RealFieldHandle]:
        return [self.member(k) for k in range(len(self))]

    def describe(self) -> list[dict]:
        return [{"index": k, "n": n, "a": "1" if a == 1 else "i"} for k, (n, a) in enumerate(self.provenance)]


def _default_sample(basis: FormalPowerBasis, n=24):
    rng = np.random.default_rng(7)
    r = 0.25 * np.sqrt(rng.uniform(0, 1, 4 * n))
    pts = basis.center + r * np.exp(1j * rng.uniform(0, 2 * np.pi, r.size))
    pts = pts[basis.weight.domain(pts)]
    return pts[:n]


def complete_system(eq: EquationDescriptor, basis: FormalPowerBasis, N: int | None = None,
                    sample=None) -> CompleteSystem:
    """Members for ``n = 0..N`` and ``a in {1, i}``; identically vanishing ones are dropped."""
    N = basis.max_order if N is None else N
    if N > basis.max_order:
        raise EquationError(f"order {N} exceeds the basis order {basis.max_order}")
    pts = _default_sample(basis) if sample is None else _points(sample)
    vals = basis.values(pts)
    factor = eq.member_factor(pts)
    provenance, dropped = [], []
    for n in range(N + 1):
        for col, a in enumerate((1, 1j)):
            if np.max(np.abs(vals[:, n, col].real * factor)) < DUPLICATE_TOL:
                dropped.append((n, a))
                log.info("dropping identically vanishing member Re Z^(%d)(%s)", n, "1" if a == 1 else "i")
            else:
                provenance.append((n, a))
    return CompleteSystem(basis, eq, provenance, dropped)


# ---------------------------------------------------------------------------
# closed-form systems for the Yukawa and Helmholtz equations

CLOSED_FORM_KINDS = ("yukawa_exp", "yukawa_cosh", "helmholtz_cos")


@dataclass
class ClosedFormSystem:
    kind: str
    c: float
    provenance: list[tuple[int, complex]]
    members: list[RealFieldHandle]
    eq: EquationDescriptor

    def __len__(self):
        return len(self.members)

    def evaluate(self, z) -> np.ndarray:
        z = as_points(z)
        return np.stack([m(z) for m in self.members], axis=-1)


def closed_form_system(kind: str, c: float, N: int) -> ClosedFormSystem:
    """Closed-form solution systems: ``e^{cy}``-based Yukawa members up to ``n = 2``
    and the ``cosh``/``cos`` systems ``u_0..u_3``."""
    if kind not in CLOSED_FORM_KINDS:
        raise ValueError(f"unknown closed-form system {kind!r}")
    if c == 0:
        raise ValueError("c must be nonzero")
    limit = 2 if kind == "yukawa_exp" else 3
    if not 0 <= N <= limit:
        raise ValueError(f"{kind} is available up to order {limit}")

    if kind == "yukawa_exp":
        def E(z):
            return np.exp(c * z.imag)

        def sh(z):
            return np.sinh(c * z.imag)

        table = [
            ((0, 1), lambda z: E(z)),
            ((1, 1), lambda z: z.real * E(z)),
            ((1, 1j), lambda z: -sh(z) / c),
            ((2, 1), lambda z: (z.real**2 - z.imag / c) * E(z) + sh(z) / c**2),
            ((2, 1j), lambda z: -2 * z.real * sh(z) / c),
        ]
        domain = None
        f = RealFieldHandle(E)
        eq = EquationDescriptor.schrodinger(constant(c * c), f)
    else:
        even, odd = (np.cosh, np.sinh) if kind == "yukawa_cosh" else (np.cos, np.sin)
        table = [
            ((0, 1), lambda z: even(c * z.imag)),
            ((1, 1), lambda z: z.real * even(c * z.imag)),
            ((2, 1), lambda z: z.real**2 * even(c * z.imag) - z.imag / c * odd(c * z.imag)),
            ((3, 1), lambda z: z.real**3 * even(c * z.imag) - 3 * z.real * z.imag / c * odd(c * z.imag)),
        ]
        if kind == "helmholtz_cos":
            def domain(z):
                return np.abs(c * np.asarray(z).imag) < np.pi / 2

            nu = constant(-c * c)
        else:
            domain = None
            nu = constant(c * c)
        f = RealFieldHandle(lambda z: even(c * z.imag), domain or (lambda z: np.ones(np.shape(z), bool)))
        eq = EquationDescriptor.schrodinger(nu, f)

    rows = [(prov, func) for prov, func in table if prov[0] <= N]
    members = [RealFieldHandle(func, domain or (lambda z: np.ones(np.shape(z), bool)), f"u{k}")
               for k, (_, func) in enumerate(rows)]
    return ClosedFormSystem(kind, c, [prov for prov, _ in rows], members, eq)


# ---------------------------------------------------------------------------
# residuals and potentials


def equation_residual(eq: EquationDescriptor, u: RealFieldHandle, sample,
                      step: float = DEFAULT_LAPLACIAN_STEP) -> VekuaResidualReport:
    """``Δu - νu``, ``div(f² ∇u)`` or ``p Δu + ∇p·∇u + q u`` by finite differences."""
    g = sample if isinstance(sample, Grid) else Grid(_points(sample))
    z = g.points
    lap = laplacian(u, z, step)
    if eq.kind == "schrodinger":
        r = lap - eq.nu.raw(z) * u.raw(z)
    else:
        coef = eq.f * eq.f if eq.kind == "conductivity" else eq.p
        kx, ky = partials(coef, z, step)
        ux, uy = partials(u, z, step)
        r = coef.raw(z) * lap + kx.real * ux.real + ky.real * uy.real
        if eq.kind == "div_p_grad_plus_q":
            r = r + eq.q.raw(z) * u.raw(z)
    return VekuaResidualReport.from_values(r, g, step)


def associated_potentials(f: RealFieldHandle, step: float = DEFAULT_LAPLACIAN_STEP):
    """``r1 = Δf / f`` and ``r2 = 2 |∇f|² / f² - r1``."""

    def r1(z):
        return laplacian(f, z, step) / f.raw(z)

    def r2(z):
        fx, fy = partials(f, z, step)
        return 2 * (fx.real**2 + fy.real**2) / f.raw(z) ** 2 - r1(z)

    return RealFieldHandle(r1, f.domain, "r1"), RealFieldHandle(r2, f.domain, "r2")


def q1_potential(p: RealFieldHandle, q: RealFieldHandle, u0: RealFieldHandle,
                 step: float = 1e-5) -> RealFieldHandle:
    """``q1 = -(1/p) (q/p + 2 <∇p/p, ∇u0/u0> + 2 |∇u0/u0|²)``."""

    def func(z):
        px, py = partials(p, z, step)
        ux, uy = partials(u0, z, step)
        pv, uv = p.raw(z), u0.raw(z)
        gp = (px.real + 1j * py.real) / pv
        gu = (ux.real + 1j * uy.real) / uv
        inner = gp.real * gu.real + gp.imag * gu.imag
        return -(q.raw(z) / pv + 2 * inner + 2 * np.abs(gu) ** 2) / pv

    return RealFieldHandle(func, lambda z: p.contains(z) & q.contains(z) & u0.contains(z), "q1")


def associated_equation(p: RealFieldHandle, q: RealFieldHandle, u0: RealFieldHandle,
                        step: float = 1e-5) -> EquationDescriptor:
    """``(div (1/p) ∇ + q1) v = 0``, satisfied by ``p^(1/2) Im W``."""
    inv_p = RealFieldHandle(lambda z: 1.0 / p.raw(z), p.domain, "1/p")
    q1 = q1_potential(p, q, u0, step)
    u0_assoc = RealFieldHandle(lambda z: 1.0 / u0.raw(z), u0.domain, "1/u0")
    return EquationDescriptor("div_p_grad_plus_q", p=inv_p, q=q1, u0=u0_assoc)


def conjugate_solution(p: RealFieldHandle, u0: RealFieldHandle, u: RealFieldHandle, base,
                       tol: float = 1e-11, step: float = 1e-5, **kwargs) -> RealFieldHandle:
    """``v = u0^-1 Abar(i p u0² d_zbar(u / u0))`` so that ``p^(1/2) u + i p^(-1/2) v`` is main-Vekua."""
    ratio = u / u0
    integrand = FieldHandle(
        lambda z: 1j * p.raw(z) * u0.raw(z) ** 2 * _dzbar(ratio, z, step),
        lambda z: p.contains(z) & ratio.contains(z),
    )
    psi = antigradient_bar(integrand, base, tol=tol, **kwargs)
    return RealFieldHandle(lambda z: psi.raw(z) / u0.raw(z), psi.domain, "v")


def _dzbar(h, z, step):
    from .numfield import wirtinger_dzbar

    return wirtinger_dzbar(h, z, step)
