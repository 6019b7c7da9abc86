"""Complex-plane calculus primitives.

Points of the plane are represented as Python/numpy complex numbers
``z = x + iy``.  Every field handle is vectorized: it accepts a complex
array of any shape and returns an array of the same shape.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field as dc_field

import numpy as np

DEFAULT_STEP = 1e-5
DEFAULT_LAPLACIAN_STEP = 1e-4
DEFAULT_TOL = 1e-10
GL_ORDER = 8
MAX_DEPTH = 20


class StencilError(ValueError):
    """A finite-difference stencil point fell outside a field's domain."""

    def __init__(self, point, message=None):
        self.point = complex(point)
        super().__init__(message or f"stencil point {self.point} outside domain")


class DomainError(ValueError):
    """A field was evaluated at a point outside its domain."""

    def __init__(self, point, message=None):
        self.point = complex(point)
        super().__init__(message or f"point {self.point} outside domain")


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, estimate, tol):
        self.estimate = float(estimate)
        self.tol = float(tol)
        super().__init__(
            f"quadrature did not converge: estimated error {self.estimate:.3e} > tol {self.tol:.3e}"
        )


def as_points(z) -> np.ndarray:
    """Coerce a complex scalar, a pair (x, y) or an array to a complex ndarray."""
    if isinstance(z, tuple) and len(z) == 2:
        return np.asarray(complex(z[0], z[1]))
    return np.asarray(z, dtype=complex)


def point(x: float, y: float) -> complex:
    z = complex(x, y)
    if not np.isfinite(z):
        raise ValueError(f"non-finite point ({x}, {y})")
    return z


def _everywhere(z):
    return np.ones(np.shape(z), dtype=bool)


@dataclass(frozen=True)
class FieldHandle:
    """A complex-valued field on (part of) the plane.

    ``func`` must be vectorized over complex arrays.  ``domain`` returns a
    boolean mask; calling the handle outside it raises :class:`DomainError`.
    """

    func: Callable[[np.ndarray], np.ndarray]
    domain: Callable[[np.ndarray], np.ndarray] = _everywhere
    name: str = ""

    def __call__(self, z):
        z = as_points(z)
        self.check_domain(z)
        return self.raw(z)

    def raw(self, z):
        """Evaluate without the domain check."""
        out = np.asarray(self.func(z), dtype=complex)
        return np.broadcast_to(out, np.shape(z)).copy() if out.shape != np.shape(z) else out

    def check_domain(self, z, error=DomainError):
        ok = np.asarray(self.domain(z), dtype=bool)
        if not np.all(ok):
            bad = np.asarray(z)[~np.broadcast_to(ok, np.shape(z))].ravel()[0]
            raise error(bad)

    def contains(self, z) -> np.ndarray:
        return np.asarray(self.domain(as_points(z)), dtype=bool)

    # small algebra used when composing fields
    def _combine(self, other, op, name):
        if isinstance(other, FieldHandle):
            kind = RealFieldHandle if _is_real(self) and _is_real(other) else FieldHandle
            dom_a, dom_b = self.domain, other.domain
            return kind(
                lambda z: op(self.raw(z), other.raw(z)),
                lambda z: np.logical_and(dom_a(z), dom_b(z)),
                name,
            )
        kind = RealFieldHandle if _is_real(self) and np.isrealobj(other) else FieldHandle
        return kind(lambda z: op(self.raw(z), other), self.domain, name)

    def __add__(self, other):
        return self._combine(other, np.add, "add")

    def __sub__(self, other):
        return self._combine(other, np.subtract, "sub")

    def __mul__(self, other):
        return self._combine(other, np.multiply, "mul")

    __radd__ = __add__
    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._combine(other, np.divide, "div")

    def conj(self) -> FieldHandle:
        return FieldHandle(lambda z: np.conj(self.raw(z)), self.domain, "conj")

    def restrict(self, predicate) -> FieldHandle:
        """Same values, smaller domain."""
        dom = self.domain
        return type(self)(self.func, lambda z: np.logical_and(dom(z), predicate(z)), self.name)


@dataclass(frozen=True)
class RealFieldHandle(FieldHandle):
    """A real-valued field; evaluation returns float arrays."""

    def raw(self, z):
        out = np.asarray(self.func(z))
        if np.iscomplexobj(out):
            out = out.real
        out = np.asarray(out, dtype=float)
        return np.broadcast_to(out, np.shape(z)).copy() if out.shape != np.shape(z) else out

    def conj(self):
        return self


def _is_real(h) -> bool:
    return isinstance(h, RealFieldHandle)


def field(func, domain=None, name="") -> FieldHandle:
    return FieldHandle(func, domain or _everywhere, name)


def real_field(func, domain=None, name="") -> RealFieldHandle:
    return RealFieldHandle(func, domain or _everywhere, name)


def constant(value, domain=None) -> FieldHandle:
    if np.isrealobj(value):
        return real_field(lambda z: np.full(np.shape(z), float(value)), domain, "const")
    return field(lambda z: np.full(np.shape(z), complex(value)), domain, "const")


@dataclass(frozen=True)
class Path:
    """Polyline from ``nodes[0]`` to ``nodes[-1]``."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=complex).ravel()
        if nodes.size < 2:
            raise ValueError("a path needs at least 2 nodes")
        if not np.all(np.isfinite(nodes)):
            raise ValueError("path nodes must be finite")
        if np.any(np.diff(nodes) == 0):
            raise ValueError("consecutive path nodes must be distinct")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def segment(cls, start, end) -> Path:
        return cls(np.array([complex(start), complex(end)]))

    @classmethod
    def polyline(cls, *points) -> Path:
        return cls(np.array([complex(p) for p in points]))

    @property
    def start(self) -> complex:
        return complex(self.nodes[0])

    @property
    def end(self) -> complex:
        return complex(self.nodes[-1])

    @property
    def length(self) -> float:
        return float(np.sum(np.abs(np.diff(self.nodes))))

    def reversed(self) -> Path:
        return Path(self.nodes[::-1])

    def __add__(self, other: Path) -> Path:
        if abs(self.end - other.start) > 0:
            raise ValueError("paths do not join")
        return Path(np.concatenate([self.nodes, other.nodes[1:]]))

    def refined(self, per_segment: int) -> Path:
        """Insert equispaced nodes so every original segment has ``per_segment`` pieces."""
        t = np.arange(per_segment) / per_segment
        a, b = self.nodes[:-1], self.nodes[1:]
        inner = (a[:, None] + (b - a)[:, None] * t[None, :]).ravel()
        return Path(np.append(inner, self.nodes[-1]))


def circle_path(center=0j, radius=1.0, n=256) -> Path:
    """Closed polyline inscribed in a circle (first node repeated at the end)."""
    t = 2 * np.pi * np.arange(n) / n
    pts = complex(center) + radius * np.exp(1j * t)
    return Path(np.append(pts, pts[0]))


@dataclass(frozen=True)
class Grid:
    points: np.ndarray
    shape: tuple | None = None
    spacing: tuple | None = None
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=complex).ravel())

    def __len__(self):
        return self.points.size

    @classmethod
    def rectangle(cls, xmin, xmax, ymin, ymax, nx, ny=None) -> Grid:
        ny = nx if ny is None else ny
        xs = np.linspace(xmin, xmax, nx)
        ys = np.linspace(ymin, ymax, ny)
        X, Y = np.meshgrid(xs, ys)
        dx = xs[1] - xs[0] if nx > 1 else 0.0
        dy = ys[1] - ys[0] if ny > 1 else 0.0
        return cls((X + 1j * Y).ravel(), (ny, nx), (dx, dy))

    @classmethod
    def disk(cls, center=0j, radius=1.0, n=15) -> Grid:
        """``n``x``n`` grid over the bounding square, clipped to the closed disk."""
        c = complex(center)
        g = cls.rectangle(c.real - radius, c.real + radius, c.imag - radius, c.imag + radius, n)
        keep = np.abs(g.points - c) <= radius * (1 + 1e-12)
        return cls(g.points[keep], None, g.spacing, {"clipped_from": g.shape})

    @classmethod
    def random_disk(cls, n, center=0j, radius=1.0, seed=0) -> Grid:
        rng = np.random.default_rng(seed)
        r = radius * np.sqrt(rng.uniform(0, 1, n))
        t = rng.uniform(0, 2 * np.pi, n)
        return cls(complex(center) + r * np.exp(1j * t))

    @classmethod
    def random_rectangle(cls, n, xmin, xmax, ymin, ymax, seed=0) -> Grid:
        rng = np.random.default_rng(seed)
        return cls(rng.uniform(xmin, xmax, n) + 1j * rng.uniform(ymin, ymax, n))

    def filter(self, predicate) -> Grid:
        keep = np.asarray(predicate(self.points), dtype=bool)
        return Grid(self.points[keep], None, self.spacing, dict(self.meta))


# ---------------------------------------------------------------------------
# finite differences


def _scaled_step(z, step):
    return step * np.maximum(1.0, np.abs(z))


def _stencil(h: FieldHandle, pts):
    h.check_domain(pts, StencilError)
    return h.raw(pts)


def partials(h: FieldHandle, z, step: float = DEFAULT_STEP):
    """Central-difference ``(h_x, h_y)``."""
    z = as_points(z)
    s = _scaled_step(z, step)
    pts = np.stack([z + s, z - s, z + 1j * s, z - 1j * s])
    v = _stencil(h, pts)
    return (v[0] - v[1]) / (2 * s), (v[2] - v[3]) / (2 * s)


def wirtinger_dz(h: FieldHandle, z, step: float = DEFAULT_STEP):
    """``0.5 * (d/dx - i d/dy) h`` by central differences."""
    hx, hy = partials(h, z, step)
    return 0.5 * (hx - 1j * hy)


def wirtinger_dzbar(h: FieldHandle, z, step: float = DEFAULT_STEP):
    """``0.5 * (d/dx + i d/dy) h`` by central differences."""
    hx, hy = partials(h, z, step)
    return 0.5 * (hx + 1j * hy)


def laplacian(h: FieldHandle, z, step: float = DEFAULT_LAPLACIAN_STEP):
    """Five-point Laplacian; real for real handles."""
    z = as_points(z)
    s = _scaled_step(z, step)
    pts = np.stack([z, z + s, z - s, z + 1j * s, z - 1j * s])
    v = _stencil(h, pts)
    return (v[1] + v[2] + v[3] + v[4] - 4 * v[0]) / s**2


def gradient(h: RealFieldHandle, z, step: float = DEFAULT_STEP):
    """Real gradient packed as the complex number ``h_x + i h_y``."""
    hx, hy = partials(h, z, step)
    return np.real(hx) + 1j * np.real(hy)


def dz_field(h: FieldHandle, step: float = DEFAULT_STEP) -> FieldHandle:
    return field(lambda z: wirtinger_dz(h, z, step), h.domain, "dz")


def dzbar_field(h: FieldHandle, step: float = DEFAULT_STEP) -> FieldHandle:
    return field(lambda z: wirtinger_dzbar(h, z, step), h.domain, "dzbar")


# ---------------------------------------------------------------------------
# line quadrature

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _gl_segment(h: FieldHandle, a: complex, b: complex):
    x, w = gauss_legendre(GL_ORDER)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    pts = mid + half * x
    h.check_domain(pts)
    return half * np.dot(w, h.raw(pts))


def _adaptive_segment(h, a, b, tol, depth, max_depth):
    whole = _gl_segment(h, a, b)
    m = 0.5 * (a + b)
    left, right = _gl_segment(h, a, m), _gl_segment(h, m, b)
    err = abs(left + right - whole)
    if err <= tol:
        return left + right, err
    if depth >= max_depth:
        raise QuadratureError(err, tol)
    l_val, l_err = _adaptive_segment(h, a, m, tol / 2, depth + 1, max_depth)
    r_val, r_err = _adaptive_segment(h, m, b, tol / 2, depth + 1, max_depth)
    return l_val + r_val, l_err + r_err


def segment_integrals(h: FieldHandle, path: Path, tol: float = DEFAULT_TOL,
                      max_depth: int = MAX_DEPTH) -> np.ndarray:
    """Integral of ``h dz`` over each segment of ``path``."""
    nodes = path.nodes
    n_seg = nodes.size - 1
    out = np.empty(n_seg, dtype=complex)
    seg_tol = tol / n_seg
    for k in range(n_seg):
        out[k], _ = _adaptive_segment(h, nodes[k], nodes[k + 1], seg_tol, 0, max_depth)
    return out


def line_integral(h: FieldHandle, path: Path, tol: float = DEFAULT_TOL) -> complex:
    """``∫_path h(ζ) dζ`` by adaptive 8-point Gauss-Legendre on each segment."""
    return complex(np.sum(segment_integrals(h, path, tol)))


def cumulative_line_integrals(h: FieldHandle, path: Path, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Integrals from the path start to every node (first entry 0)."""
    return np.concatenate([[0j], np.cumsum(segment_integrals(h, path, tol))])


# ---------------------------------------------------------------------------
# batched straight-segment quadrature


STRAIGHT_CHUNK = 1024


def straight_integrals(h: FieldHandle, starts, ends, tol: float = DEFAULT_TOL,
                       max_panels: int = 4096) -> np.ndarray:
    """Vectorized ``∫ h dζ`` over many straight segments ``starts[k] -> ends[k]``.

    Composite 16-point Gauss-Legendre with the panel count doubled until the
    largest change falls below ``tol``.  Segments are processed in chunks so
    that nested use (an integrand that itself integrates) stays bounded in
    memory.
    """
    starts, ends = np.broadcast_arrays(as_points(starts), as_points(ends))
    shape = starts.shape
    a, b = starts.ravel(), ends.ravel()
    out = np.empty(a.shape, dtype=complex)
    for lo in range(0, a.size, STRAIGHT_CHUNK):
        sl = slice(lo, lo + STRAIGHT_CHUNK)
        out[sl] = _straight_chunk(h, a[sl], b[sl], tol, max_panels)
    return out.reshape(shape)


def _straight_chunk(h, a, b, tol, max_panels):
    x, w = gauss_legendre(16)
    prev, prev_err = None, np.inf
    panels = 1
    while True:
        edges = np.arange(panels + 1) / panels
        t = (0.5 * (edges[:-1, None] + edges[1:, None]) + 0.5 / panels * x[None, :]).ravel()
        pts = a[:, None] + (b - a)[:, None] * t[None, :]
        h.check_domain(pts)
        vals = h.raw(pts)
        cur = (b - a) * (vals @ np.tile(w, panels)) * (0.5 / panels)
        if prev is not None:
            err = np.max(np.abs(cur - prev), initial=0.0)
            if err <= tol:
                return cur
            # a 16-point rule on smooth data converges fast; stalling means a noise floor above tol
            if panels >= max_panels or (panels >= 64 and err > 0.5 * prev_err):
                raise QuadratureError(err, tol)
            prev_err = err
        prev = cur
        panels *= 2
