"""Formal powers ``Z_m^(n)(a, z0; z)`` of a generating sequence.

Powers are built by the recursion

    Z_m^(n+1)(z) = (n+1) [ F_m(z) Re ∫ G_m* Z_{m+1}^(n) dζ + G_m(z) Re ∫ F_m* Z_{m+1}^(n) dζ ],

with integrals taken from the center ``z0`` to ``z``.  Because every level
needs the previous level along the whole path, all levels are swept
together: the path is cut into Gauss-Legendre panels and a spectral
integration matrix gives cumulative integrals at every node, so one pass
produces ``Z_m^(n)`` for all ``m + n <= N`` at once.  Batches of targets are
swept simultaneously along straight rays from the center.
"""

from __future__ import annotations

import math
import threading
import warnings
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .genpair import (
    GeneratingSequence,
    DegeneratePairError,
    WeightError,
)
from .numfield import (
    DEFAULT_STEP,
    DomainError,
    FieldHandle,
    Grid,
    Path,
    QuadratureError,
    as_points,
    gauss_legendre,
)

PANEL_ORDER = 16
MAX_DOUBLINGS = 8


class OrderError(ValueError):
    pass


class NoisyDerivativeWarning(RuntimeWarning):
    pass


def _integration_matrix(p: int):
    """``S[i, j] = ∫_{-1}^{x_i} l_j(s) ds`` for the Lagrange basis on GL nodes."""
    x, w = gauss_legendre(p)
    V = np.polynomial.legendre.legvander(x, p - 1)
    coeffs = np.linalg.inv(V)
    S = np.empty((p, p))
    for j in range(p):
        anti = np.polynomial.legendre.legint(coeffs[:, j], lbnd=-1)
        S[:, j] = np.polynomial.legendre.legval(x, anti)
    return x, w, S


_PANEL = _integration_matrix(PANEL_ORDER)


def order_zero_coefficients(F0: complex, G0: complex, a: complex):
    """Real ``(lam, mu)`` with ``lam F0 + mu G0 = a``."""
    M = np.array([[F0.real, G0.real], [F0.imag, G0.imag]])
    det = np.linalg.det(M)
    if abs(det) < 1e-12:
        raise DegeneratePairError(f"order-zero system is singular (det={det:.3e})")
    lam, mu = np.linalg.solve(M, [a.real, a.imag])
    return float(lam), float(mu)


def order_zero(seq: GeneratingSequence, m: int, a: complex, z0) -> FieldHandle:
    """``Z_m^(0)(a, z0; .)``: the combination of ``F_m, G_m`` equal to ``a`` at ``z0``."""
    z0 = complex(z0)
    pair = seq.pair(m)
    F0, G0 = (complex(v) for v in pair.values(z0))
    lam, mu = order_zero_coefficients(F0, G0, complex(a))
    return FieldHandle(lambda z: lam * pair.F.raw(z) + mu * pair.G.raw(z), pair.domain, f"Z_{m}^(0)")


def straight_path(z0, z) -> Path:
    return Path.segment(z0, z)


@dataclass
class SweepFailure:
    index: int
    point: complex
    reason: str


class FormalPowerBasis:
    """Formal powers of orders ``0..max_order`` for ``a = 1`` and ``a = i``.

    ``values(z)`` returns an array of shape ``z.shape + (N+1, 2)`` holding
    ``Z_0^(n)(1, z0; z)`` and ``Z_0^(n)(i, z0; z)``.  Results are cached per
    target point.
    """

    def __init__(
        self,
        sequence: GeneratingSequence,
        center,
        max_order: int,
        quad_tol: float = 1e-12,
        path_builder: Callable | None = None,
        density: float = 64.0,
    ):
        if max_order < 0:
            raise OrderError("max_order must be nonnegative")
        self.sequence = sequence
        self.center = complex(center)
        self.max_order = int(max_order)
        self.quad_tol = float(quad_tol)
        self.path_builder = path_builder
        self.density = float(density)
        self._cache: dict[complex, np.ndarray] = {}
        self._lock = threading.Lock()
        w = sequence.base
        if not w.domain(np.asarray(self.center)):
            raise DomainError(self.center, f"center {self.center} outside the weight's domain")
        if not w.f_values(np.asarray(self.center)) > 0:
            raise WeightError(f"weight is not positive at the center {self.center}")
        # (lam, mu) per level m and per coefficient a in {1, i}
        self._lam_mu = np.empty((self.max_order + 1, 2, 2))
        for m in range(self.max_order + 1):
            F0, G0 = (complex(v) for v in sequence.generators(m, np.asarray(self.center)))
            for k, a in enumerate((1.0, 1j)):
                self._lam_mu[m, k] = order_zero_coefficients(F0, G0, a)

    @property
    def weight(self):
        return self.sequence.base

    # -- sweeping --------------------------------------------------------

    def _generators(self, m, z):
        F, G = self.sequence.generators(m, z)
        d = F * np.conj(G) - np.conj(F) * G
        return F, G, -2 * np.conj(F) / d, 2 * np.conj(G) / d

    def _sweep_once(self, nodes, scales, ends):
        """One pass over panels.

        ``nodes``: (B, Q, p) complex quadrature points; ``scales``: (B, Q)
        panel half-lengths (complex, include direction); ``ends``: (B,)
        targets.  Returns (B, N+1 [m], N+1 [n], 2) end values.
        """
        _, w, S = _PANEL
        N = self.max_order
        B = ends.shape[0]
        out = np.full((B, N + 1, N + 1, 2), np.nan, dtype=complex)
        gens_nodes = [self._generators(m, nodes) for m in range(N + 1)]
        gens_ends = [self._generators(m, ends) for m in range(N + 1)]

        # level n = 0: Z_m^(0) = lam F_m + mu G_m, stacked over a as leading axis
        lm = self._lam_mu
        cur_nodes = [
            np.stack([lm[m, k, 0] * gens_nodes[m][0] + lm[m, k, 1] * gens_nodes[m][1] for k in range(2)])
            for m in range(N + 1)
        ]
        for m in range(N + 1):
            for k in range(2):
                out[:, m, 0, k] = lm[m, k, 0] * gens_ends[m][0] + lm[m, k, 1] * gens_ends[m][1]

        for n in range(N):
            nxt = []
            for m in range(N - n):
                F, G, Fs, Gs = gens_nodes[m]
                Fe, Ge = gens_ends[m][0], gens_ends[m][1]
                prev = cur_nodes[m + 1]
                integrand = np.stack([Gs * prev, Fs * prev])  # (2 [G*/F*], 2 [a], B, Q, p)
                inner = (integrand @ S.T) * scales[..., None]
                totals = (integrand @ w) * scales
                offsets = np.cumsum(totals, axis=-1) - totals
                cum = inner + offsets[..., None]
                end = totals.sum(axis=-1)
                re_cum, re_end = cum.real, end.real
                nxt.append((n + 1) * (F * re_cum[0] + G * re_cum[1]))
                out[:, m, n + 1, :] = ((n + 1) * (Fe * re_end[0] + Ge * re_end[1])).T
            cur_nodes = nxt
        return out

    def _panel_layout(self, paths: list[Path], panels_per_unit: float):
        """Quadrature nodes and scales for paths with equal segment counts."""
        x = _PANEL[0]
        seg_starts = np.array([p.nodes[:-1] for p in paths])
        seg_ends = np.array([p.nodes[1:] for p in paths])
        lengths = np.abs(seg_ends - seg_starts)
        n_panels = max(1, int(math.ceil(panels_per_unit * max(float(lengths.max()), 1e-300))))
        edges = np.arange(n_panels + 1) / n_panels
        mids = 0.5 * (edges[:-1] + edges[1:])
        t = mids[:, None] + (0.5 / n_panels) * x[None, :]  # (P, p)
        d = seg_ends - seg_starts  # (B, S)
        nodes = seg_starts[:, :, None, None] + d[:, :, None, None] * t[None, None]
        scales = np.repeat((d * (0.5 / n_panels))[:, :, None], n_panels, axis=2)
        B = len(paths)
        return nodes.reshape(B, -1, x.size), scales.reshape(B, -1)

    def _sweep(self, paths: list[Path]):
        ends = np.array([p.end for p in paths])
        for p in paths:
            self._check_path(p)
        per_unit = self.density / PANEL_ORDER
        prev = None
        for _ in range(MAX_DOUBLINGS):
            nodes, scales = self._panel_layout(paths, per_unit)
            if not np.all(self.sequence.base.domain(nodes)):
                bad = nodes[~self.sequence.base.domain(nodes)].ravel()[0]
                raise DomainError(bad, f"sweep path leaves the domain at {complex(bad)}")
            fvals = self.sequence.base.f_values(nodes)
            if not np.all(fvals > 0):
                raise WeightError("weight is not positive along the sweep path")
            cur = self._sweep_once(nodes, scales, ends)
            if prev is not None:
                tri = np.isfinite(cur)
                diff = np.abs(cur[tri] - prev[tri])
                ref = np.maximum(1.0, np.abs(cur[tri]))
                if np.all(diff <= self.quad_tol * ref):
                    return cur
            prev = cur
            per_unit *= 2
        err = float(np.max(np.abs(cur[np.isfinite(cur)] - prev[np.isfinite(prev)])))
        raise QuadratureError(err, self.quad_tol)

    def _check_path(self, p: Path):
        if abs(p.start - self.center) > 0:
            raise ValueError("paths must start at the basis center")
        if not np.all(self.sequence.base.domain(p.nodes)):
            bad = p.nodes[~self.sequence.base.domain(p.nodes)][0]
            raise DomainError(bad, f"path vertex {complex(bad)} outside the domain")

    def _paths_for(self, targets):
        if self.path_builder is None:
            return [Path(np.array([self.center, t])) if t != self.center else None for t in targets]
        return [self.path_builder(self.center, t) if t != self.center else None for t in targets]

    def _compute(self, targets: np.ndarray) -> np.ndarray:
        """Triangle values for distinct targets: (B, N+1, N+1, 2)."""
        N = self.max_order
        out = np.full((targets.size, N + 1, N + 1, 2), np.nan, dtype=complex)
        paths = self._paths_for(targets)
        at_center = [i for i, p in enumerate(paths) if p is None]
        for i in at_center:
            for m in range(N + 1):
                out[i, m, 0] = (1.0, 1j)
                out[i, m, 1 : N + 1 - m] = 0.0
        groups: dict[int, list[int]] = {}
        for i, p in enumerate(paths):
            if p is not None:
                groups.setdefault(p.nodes.size, []).append(i)
        for idx in groups.values():
            out[idx] = self._sweep([paths[i] for i in idx])
        return out

    def triangle(self, z) -> np.ndarray:
        """All ``Z_m^(n)`` with ``m + n <= N`` at ``z``: shape ``z.shape + (N+1, N+1, 2)``.

        Entries with ``m + n > N`` are NaN.
        """
        z = as_points(z)
        flat = z.ravel()
        uniq, inverse = np.unique(flat, return_inverse=True)
        missing = [t for t in uniq if t not in self._cache]
        if missing:
            vals = self._compute(np.array(missing))
            with self._lock:
                for t, v in zip(missing, vals):
                    self._cache.setdefault(t, v)
        table = np.stack([self._cache[t] for t in uniq]) if uniq.size else np.empty((0,) + (self.max_order + 1,) * 2 + (2,))
        return table[inverse.ravel()].reshape(z.shape + table.shape[1:])

    def values(self, z) -> np.ndarray:
        return self.triangle(z)[..., 0, :, :]

    def clear_cache(self):
        with self._lock:
            self._cache.clear()

    def power(self, n: int, a: complex = 1.0, m: int = 0) -> FieldHandle:
        """Field handle for ``Z_m^(n)(a, z0; .)``."""
        self._check_order(n, m)
        a = complex(a)

        def func(z):
            t = self.triangle(z)[..., m, n, :]
            return a.real * t[..., 0] + a.imag * t[..., 1]

        return FieldHandle(func, self.sequence.base.domain, f"Z_{m}^({n})")

    def _check_order(self, n, m=0):
        if n < 0 or m < 0 or n + m > self.max_order:
            raise OrderError(f"order n={n} at level m={m} exceeds max_order={self.max_order}")


def formal_power(basis: FormalPowerBasis, n: int, a: complex, z, m: int = 0):
    """``Z_m^(n)(a, z0; z)``, assembled linearly from the ``a = 1`` and ``a = i`` powers."""
    basis._check_order(n, m)
    a = complex(a)
    t = basis.triangle(z)[..., m, n, :]
    out = a.real * t[..., 0] + a.imag * t[..., 1]
    return complex(out) if np.ndim(out) == 0 else out


@dataclass
class BasisTable:
    points: np.ndarray
    values: np.ndarray  # (P, N+1, 2); NaN rows for failed points
    failures: list[SweepFailure] = field(default_factory=list)

    @property
    def ok(self) -> np.ndarray:
        return np.all(np.isfinite(self.values), axis=(1, 2))


def basis_on_grid(basis: FormalPowerBasis, grid, a_set=(1.0, 1j)) -> BasisTable:
    """Bulk evaluation; per-point failures are collected rather than raised."""
    pts = grid.points if isinstance(grid, Grid) else as_points(grid).ravel()
    N = basis.max_order
    vals = np.full((pts.size, N + 1, len(a_set)), np.nan, dtype=complex)
    failures = []

    def assemble(raw):
        return np.stack([complex(a).real * raw[..., 0] + complex(a).imag * raw[..., 1] for a in a_set], axis=-1)

    try:
        vals[:] = assemble(basis.values(pts))
    except (DomainError, WeightError, QuadratureError, DegeneratePairError, FloatingPointError, OverflowError):
        for i, z in enumerate(pts):
            try:
                vals[i] = assemble(basis.values(z))
            except (DomainError, WeightError, QuadratureError, DegeneratePairError, OverflowError) as exc:
                failures.append(SweepFailure(i, complex(z), str(exc)))
    return BasisTable(pts, vals, failures)


ROUNDOFF_RATIO = 1e-12


@dataclass
class AsymptoticReport:
    radii: np.ndarray
    directions: np.ndarray
    ratios: np.ndarray  # (len(radii), len(directions))
    threshold: float = 0.05

    @property
    def max_per_radius(self) -> np.ndarray:
        return self.ratios.max(axis=1)

    @property
    def passed(self) -> bool:
        order = np.argsort(-self.radii)
        # ratios at roundoff level count as zero
        worst = np.where(self.max_per_radius[order] < ROUNDOFF_RATIO, 0.0, self.max_per_radius[order])
        decreasing = bool(np.all(np.diff(worst) <= 0))
        return decreasing and worst[-1] < self.threshold


def asymptotic_check(basis: FormalPowerBasis, n: int, a: complex, radii, directions,
                     threshold: float = 0.05) -> AsymptoticReport:
    """``|Z^(n)(a, z0; z) / (a (z - z0)^n) - 1|`` on small circles around the center."""
    radii = np.asarray(radii, dtype=float)
    directions = np.asarray(directions, dtype=float)
    dz = radii[:, None] * np.exp(1j * directions[None, :])
    z = basis.center + dz
    Z = formal_power(basis, n, a, z)
    ratios = np.abs(Z / (complex(a) * dz**n) - 1.0)
    return AsymptoticReport(radii, directions, ratios, threshold)


# ---------------------------------------------------------------------------
# higher derivatives and Taylor coefficients

MAX_DERIVATIVE_ORDER = 3


def _nested_derivatives(seq, W, m_max, z0, steps):
    from .pacalc import fg_derivative

    current = W
    values = [complex(W(z0))]
    for k in range(m_max):
        current = fg_derivative(seq.pair(k), current, steps[k])
        values.append(complex(current(z0)))
    return values


def _level_steps(step, m_max):
    # deeper nesting uses coarser steps: roundoff grows like eps / prod(steps)
    return [step * 10 ** (k / 2) for k in range(m_max)][::-1] if m_max else []


def higher_derivative(seq: GeneratingSequence, W: FieldHandle, m_max: int, z0,
                      step: float = 1e-3) -> list[complex]:
    """``W^[0](z0) .. W^[m_max](z0)`` by nested (F_k, G_k)-derivatives."""
    if m_max > MAX_DERIVATIVE_ORDER:
        raise OrderError(f"higher derivatives are limited to order {MAX_DERIVATIVE_ORDER}")
    if step < 1e-8:
        raise ValueError("step too small for nested differences")
    z0 = complex(z0)
    coarse = _nested_derivatives(seq, W, m_max, z0, _level_steps(step, m_max))
    fine = _nested_derivatives(seq, W, m_max, z0, _level_steps(step / 2, m_max))
    floor = 1e-3 * max(1.0, max(abs(v) for v in fine))
    for k, (c, f) in enumerate(zip(coarse, fine)):
        scale = max(abs(c), abs(f))
        if scale > floor and abs(c - f) > 0.1 * scale:
            warnings.warn(f"derivative of order {k} changes by more than 10% under step refinement",
                          NoisyDerivativeWarning, stacklevel=2)
    return fine


def taylor_coefficients(seq: GeneratingSequence, W: FieldHandle, z0, count: int = 4,
                        step: float = 1e-3) -> list[complex]:
    """``a_n = W^[n](z0) / n!`` for ``n < count``."""
    if count > MAX_DERIVATIVE_ORDER + 1:
        raise OrderError(f"at most {MAX_DERIVATIVE_ORDER + 1} Taylor coefficients are available")
    ders = higher_derivative(seq, W, count - 1, z0, step)
    return [d / math.factorial(n) for n, d in enumerate(ders)]
