"""Dirichlet problems by least-squares collocation over a complete system."""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .elliptic import EquationDescriptor, complete_system
from .formalpowers import FormalPowerBasis
from .genpair import SeparableWeight, generating_sequence
from .numfield import Grid, RealFieldHandle, as_points

SV_CUTOFF = 1e-13
OVERSAMPLING = 4


class RankCollapseError(ArithmeticError):
    pass


class BoundaryError(ValueError):
    pass


def disk_boundary(center=0j, radius: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    center = complex(center)

    def curve(t):
        return center + radius * np.exp(2j * np.pi * np.asarray(t, dtype=float))

    return curve


def rectangle_boundary(x0, x1, y0, y1) -> Callable[[np.ndarray], np.ndarray]:
    """Counter-clockwise perimeter parameterized by arc length fraction."""
    corners = np.array([x0 + 1j * y0, x1 + 1j * y0, x1 + 1j * y1, x0 + 1j * y1, x0 + 1j * y0])
    lengths = np.abs(np.diff(corners))
    cum = np.concatenate([[0.0], np.cumsum(lengths)]) / lengths.sum()

    def curve(t):
        t = np.mod(np.asarray(t, dtype=float), 1.0)
        k = np.clip(np.searchsorted(cum, t, side="right") - 1, 0, 3)
        s = (t - cum[k]) / (cum[k + 1] - cum[k])
        return corners[k] + s * (corners[k + 1] - corners[k])

    return curve


@dataclass
class BoundaryValueProblem:
    eq: EquationDescriptor
    boundary: Callable[[np.ndarray], np.ndarray]
    data: RealFieldHandle
    interior_grid: Grid
    exact_solution: RealFieldHandle | None = None

    def collocation_points(self, M: int) -> np.ndarray:
        t = np.arange(M) / M
        try:
            pts = np.asarray(self.boundary(t), dtype=complex)
        except Exception as exc:  # noqa: BLE001 - any user-supplied curve failure
            raise BoundaryError(f"boundary evaluation failed: {exc}") from exc
        if pts.shape != (M,) or not np.all(np.isfinite(pts)):
            raise BoundaryError("boundary curve returned invalid points")
        return pts


@dataclass
class CollocationSolution:
    coefficients: np.ndarray
    system: object
    boundary_residual: float
    max_interior_error: float | None
    singular_values: np.ndarray
    rank: int
    collocation_points: np.ndarray

    @property
    def singular_value_range(self) -> tuple[float, float]:
        return float(self.singular_values.min()), float(self.singular_values.max())

    def __call__(self, z):
        return evaluate_solution(self, z)


def least_squares(A: np.ndarray, b: np.ndarray, cutoff: float = SV_CUTOFF):
    """Truncated-SVD least squares; returns ``(x, singular_values, rank)``."""
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0 or not np.all(np.isfinite(s)):
        raise RankCollapseError("collocation matrix has no usable singular values")
    keep = s > cutoff * s[0]
    coef = Vt[keep].T @ ((U[:, keep].T @ b) / s[keep])
    return coef, s, int(keep.sum())


def collocate(bvp: BoundaryValueProblem, system, M: int | None = None,
              cutoff: float = SV_CUTOFF) -> CollocationSolution:
    """Fit ``sum_n a_n u_n`` to the boundary data at ``M`` equispaced curve points."""
    size = len(system)
    M = OVERSAMPLING * size if M is None else int(M)
    if M < 2 * size:
        raise ValueError(f"need at least {2 * size} collocation points, got {M}")
    pts = bvp.collocation_points(M)
    A = system.evaluate(pts)
    b = np.asarray(bvp.data(pts), dtype=float)
    if not np.all(np.isfinite(A)):
        raise BoundaryError("a system member is not finite on the boundary")
    coef, s, rank = least_squares(A, b, cutoff)
    resid = float(np.max(np.abs(A @ coef - b)))
    sol = CollocationSolution(coef, system, resid, None, s, rank, pts)
    if bvp.exact_solution is not None:
        z = bvp.interior_grid.points
        sol.max_interior_error = float(np.max(np.abs(evaluate_solution(sol, z) - bvp.exact_solution(z))))
    return sol


def evaluate_solution(sol: CollocationSolution, z):
    z = as_points(z)
    out = sol.system.evaluate(z) @ sol.coefficients
    return out if np.ndim(out) else float(out)


@dataclass
class ConvergenceRow:
    N: int
    size: int
    max_interior_error: float
    boundary_residual: float
    runtime: float


def convergence_table(bvp: BoundaryValueProblem, weight: SeparableWeight, N_list, center=0j,
                      M_factor: int = OVERSAMPLING, quad_tol: float = 1e-12) -> list[ConvergenceRow]:
    """Solve at each order in ``N_list`` (fresh basis per order) and record errors and wall time."""
    if bvp.exact_solution is None:
        raise ValueError("convergence_table needs an exact solution")
    N_list = [int(n) for n in N_list]
    seq = generating_sequence(weight)
    rows = []
    for N in N_list:
        t0 = time.perf_counter()
        basis = FormalPowerBasis(seq, center, N, quad_tol=quad_tol)
        system = complete_system(bvp.eq, basis, N)
        sol = collocate(bvp, system, M_factor * len(system))
        rows.append(ConvergenceRow(N, len(system), sol.max_interior_error, sol.boundary_residual,
                                   time.perf_counter() - t0))
    return rows


def strictly_decreasing(rows: list[ConvergenceRow]) -> bool:
    errs = [r.max_interior_error for r in rows]
    return all(b < a for a, b in zip(errs, errs[1:]))
