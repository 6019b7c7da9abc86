"""Command-line driver: ``basis``, ``solve``, ``verify`` and ``convergence``.

A run is described by one JSON config.  Expressions are strings in the
:mod:`pseudoanalytic.exprlang` grammar over ``x, y, u, v`` and the entries
of ``params``.  Example::

    {
      "coords": {"name": "cartesian"},
      "params": {"c": 1.0},
      "weight": {"U": "1", "V": "exp(c*v)"},
      "equation": {"kind": "schrodinger", "nu": "c^2", "f": "exp(c*y)"},
      "center": [0, 0],
      "order": 10,
      "domain": {"type": "disk", "center": [0, 0], "radius": 1.0},
      "boundary_data": "exp(x)",
      "exact_solution": "exp(x)"
    }

Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 rank collapse,
5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path as FsPath

import numpy as np

from . import bvpsolve, coords as coordmod, elliptic, exprlang, formalpowers, genpair, pacalc
from .numfield import (
    DomainError,
    Grid,
    Path,
    QuadratureError,
    RealFieldHandle,
    StencilError,
    wirtinger_dzbar,
)

log = logging.getLogger("pseudoanalytic")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_RANK, EXIT_VERIFY = 0, 2, 3, 4, 5
DEFAULT_GRID = 41
DEFAULT_ORDERS = (2, 4, 6, 8, 10)


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration


def _as_complex(value, what) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"{what} must be a number or an [x, y] pair")


@dataclass
class Domain:
    kind: str
    center: complex = 0j
    radius: float = 1.0
    xs: tuple[float, float] = (-1.0, 1.0)
    ys: tuple[float, float] = (-1.0, 1.0)

    @classmethod
    def from_config(cls, conf: dict) -> Domain:
        kind = conf.get("type", "disk")
        if kind == "disk":
            radius = float(conf.get("radius", 1.0))
            if radius <= 0:
                raise ConfigError("disk radius must be positive")
            return cls("disk", _as_complex(conf.get("center", 0), "domain center"), radius)
        if kind == "rectangle":
            xs, ys = tuple(map(float, conf["x"])), tuple(map(float, conf["y"]))
        elif kind == "strip":
            h = float(conf["halfwidth"])
            yc = float(conf.get("y_center", 0.0))
            xs, ys = tuple(map(float, conf.get("x", (-1.0, 1.0)))), (yc - h, yc + h)
        else:
            raise ConfigError(f"unknown domain type {kind!r}")
        if not (xs[0] < xs[1] and ys[0] < ys[1]):
            raise ConfigError("domain bounds must be increasing")
        return cls(kind, xs=xs, ys=ys)

    def inside(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == "disk":
            return np.abs(z - self.center) < self.radius
        return (z.real > self.xs[0]) & (z.real < self.xs[1]) & (z.imag > self.ys[0]) & (z.imag < self.ys[1])

    def grid(self, n: int) -> Grid:
        """``n``x``n`` grid over the bounding box, kept strictly inside."""
        if self.kind == "disk":
            g = Grid.disk(self.center, self.radius, n)
        else:
            g = Grid.rectangle(*self.xs, *self.ys, n)
        return g.filter(self.inside)

    def boundary(self):
        if self.kind == "disk":
            return bvpsolve.disk_boundary(self.center, self.radius)
        return bvpsolve.rectangle_boundary(*self.xs, *self.ys)

    def describe(self) -> dict:
        if self.kind == "disk":
            return {"type": "disk", "center": [self.center.real, self.center.imag], "radius": self.radius}
        return {"type": self.kind, "x": list(self.xs), "y": list(self.ys)}


@dataclass
class RunConfig:
    raw: dict
    coords: coordmod.CoordinateSystem
    params: dict
    eq: elliptic.EquationDescriptor
    weight_conf: dict | None
    center: complex
    order: int
    domain: Domain
    grid_n: int
    quad_tol: float
    residual_tol: float
    collocation_factor: int
    boundary_data: RealFieldHandle | None = None
    exact_solution: RealFieldHandle | None = None
    orders: list[int] = field(default_factory=lambda: list(DEFAULT_ORDERS))

    def field(self, source: str, what: str) -> RealFieldHandle:
        try:
            return exprlang.to_field(source, self.coords, self.params)
        except exprlang.ExprError as exc:
            raise ConfigError(f"{what}: {exc}") from exc


def _parse_expr(cfg: RunConfig, conf: dict, key: str, what: str) -> RealFieldHandle:
    if key not in conf:
        raise ConfigError(f"{what} is missing {key!r}")
    return cfg.field(str(conf[key]), f"{what}.{key}")


def load_config(path, overrides: dict | None = None) -> RunConfig:
    try:
        raw = json.loads(FsPath(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    return build_config(raw, overrides)


def build_config(raw: dict, overrides: dict | None = None) -> RunConfig:
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    try:
        cs = raw.get("coords", {"name": "cartesian"})
        cs_params = {k: float(v) for k, v in cs.get("params", {}).items()}
        coords = coordmod.by_name(cs.get("name", "cartesian"), **cs_params)
        params = {k: float(v) for k, v in raw.get("params", {}).items()}
        tols = raw.get("tolerances", {})
        cfg = RunConfig(
            raw=raw,
            coords=coords,
            params=params,
            eq=None,  # filled below
            weight_conf=raw.get("weight"),
            center=_as_complex(raw.get("center", 0), "center"),
            order=int(overrides.get("order", raw.get("order", 4))),
            domain=Domain.from_config(raw.get("domain", {"type": "disk"})),
            grid_n=int(overrides.get("grid", raw.get("grid", DEFAULT_GRID))),
            quad_tol=float(overrides.get("tol", tols.get("quad_tol", 1e-12))),
            residual_tol=float(tols.get("residual", 1e-3)),
            collocation_factor=int(raw.get("collocation_factor", bvpsolve.OVERSAMPLING)),
            orders=[int(n) for n in overrides.get("orders", raw.get("orders", DEFAULT_ORDERS))],
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config: {exc}") from exc
    if cfg.order < 0 or any(n < 0 for n in cfg.orders) or not cfg.orders:
        raise ConfigError("orders must be nonnegative")
    if cfg.grid_n < 2:
        raise ConfigError("grid must have at least 2 points per axis")
    if not cfg.domain.inside(np.array([cfg.center]))[0]:
        raise ConfigError("the basis center must lie inside the domain (star-shapedness)")

    eq_conf = raw.get("equation")
    if not isinstance(eq_conf, dict):
        raise ConfigError("config needs an 'equation' object")
    kind = eq_conf.get("kind")
    if kind == "schrodinger":
        f = _parse_expr(cfg, eq_conf, "f", "equation") if "f" in eq_conf else _weight_field(cfg)
        cfg.eq = elliptic.EquationDescriptor.schrodinger(_parse_expr(cfg, eq_conf, "nu", "equation"), f)
    elif kind == "conductivity":
        f = _parse_expr(cfg, eq_conf, "f", "equation") if "f" in eq_conf else _weight_field(cfg)
        cfg.eq = elliptic.EquationDescriptor.conductivity(f)
    elif kind == "div_p_grad_plus_q":
        cfg.eq = elliptic.EquationDescriptor.div_p_grad_plus_q(
            *(_parse_expr(cfg, eq_conf, k, "equation") for k in ("p", "q", "u0"))
        )
    else:
        raise ConfigError(f"unknown equation kind {kind!r}")

    if "boundary_data" in raw:
        cfg.boundary_data = cfg.field(str(raw["boundary_data"]), "boundary_data")
    if "exact_solution" in raw:
        cfg.exact_solution = cfg.field(str(raw["exact_solution"]), "exact_solution")
    if cfg.weight_conf is not None:
        _weight_field(cfg)  # parse early so syntax errors are config errors
    return cfg


def _weight_field(cfg: RunConfig) -> RealFieldHandle:
    if cfg.weight_conf is None:
        raise ConfigError("equation has no 'f' and config has no 'weight'")
    try:
        w = genpair.SeparableWeight.from_expressions(
            str(cfg.weight_conf["U"]), str(cfg.weight_conf["V"]), cfg.coords, cfg.params)
    except KeyError as exc:
        raise ConfigError(f"weight is missing {exc}") from exc
    except exprlang.ExprError as exc:
        raise ConfigError(f"weight: {exc}") from exc
    return w.f


def build_weight(cfg: RunConfig) -> genpair.SeparableWeight:
    if cfg.weight_conf is not None:
        return genpair.SeparableWeight.from_expressions(
            str(cfg.weight_conf["U"]), str(cfg.weight_conf["V"]), cfg.coords, cfg.params)
    return elliptic.weight_from_equation(cfg.eq, cfg.coords, cfg.center)


def build_basis(cfg: RunConfig, order: int | None = None) -> formalpowers.FormalPowerBasis:
    weight = build_weight(cfg)
    seq = genpair.generating_sequence(weight)
    return formalpowers.FormalPowerBasis(seq, cfg.center, cfg.order if order is None else order,
                                         quad_tol=cfg.quad_tol)


def working_grid(cfg: RunConfig, basis: formalpowers.FormalPowerBasis) -> Grid:
    g = cfg.domain.grid(cfg.grid_n)
    return g.filter(basis.weight.domain)


def residual_grid(cfg: RunConfig, basis) -> Grid:
    return working_grid(cfg, basis) if cfg.grid_n <= 12 else cfg.domain.grid(12).filter(basis.weight.domain)


# ---------------------------------------------------------------------------
# output helpers


def _fmt(v) -> str:
    return format(float(v), ".17g")


def write_csv(path: FsPath, columns: list[tuple[str, str]], data: list[np.ndarray]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([name for name, _ in columns])
        for row in zip(*data):
            w.writerow([_fmt(v) for v in row])


def write_json(path: FsPath, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o)}")


def _columns_manifest(columns):
    return [{"name": n, "description": d} for n, d in columns]


def _common_manifest(cfg: RunConfig, basis) -> dict:
    return {
        "coords": cfg.coords.describe(),
        "params": cfg.params,
        "weight": basis.weight.label or basis.weight.f.name,
        "equation": cfg.eq.kind,
        "center": [cfg.center.real, cfg.center.imag],
        "order": basis.max_order,
        "domain": cfg.domain.describe(),
        "tolerances": {"quad_tol": cfg.quad_tol, "residual": cfg.residual_tol},
    }


def _a_label(a) -> str:
    return "1" if a == 1 else "i"


# ---------------------------------------------------------------------------
# commands


def cmd_basis(cfg: RunConfig, out: FsPath) -> int:
    basis = build_basis(cfg)
    grid = working_grid(cfg, basis)
    system = elliptic.complete_system(cfg.eq, basis)
    z = grid.points
    vals = basis.values(z)
    members = system.evaluate(z)
    columns = [("x", "Cartesian x"), ("y", "Cartesian y")]
    data = [z.real, z.imag]
    for n in range(basis.max_order + 1):
        for col, a in enumerate((1, 1j)):
            for part, fn in (("re", np.real), ("im", np.imag)):
                columns.append((f"{part}_Z{n}_{_a_label(a)}",
                                f"{'real' if part == 're' else 'imaginary'} part of Z^({n})({_a_label(a)}, z0; z)"))
                data.append(fn(vals[:, n, col]))
    rgrid = residual_grid(cfg, basis)
    residuals = []
    for k, (n, a) in enumerate(system.provenance):
        columns.append((f"u{k}", f"complete-system member {k}: factor * Re Z^({n})({_a_label(a)}, z0; z)"))
        data.append(members[:, k])
        residuals.append(elliptic.equation_residual(cfg.eq, system.member(k), rgrid).max_abs)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "basis.csv", columns, data)
    manifest = _common_manifest(cfg, basis)
    manifest.update({
        "columns": _columns_manifest(columns),
        "members": [dict(d, equation_residual=r) for d, r in zip(system.describe(), residuals)],
        "dropped": [{"n": n, "a": _a_label(a)} for n, a in system.dropped],
        "points": int(z.size),
    })
    write_json(out / "basis.json", manifest)
    print(f"wrote {z.size} points x {len(columns)} columns to {out / 'basis.csv'}")
    return EXIT_OK


def _bvp(cfg: RunConfig, basis) -> bvpsolve.BoundaryValueProblem:
    if cfg.boundary_data is None:
        raise ConfigError("solve needs 'boundary_data'")
    return bvpsolve.BoundaryValueProblem(cfg.eq, cfg.domain.boundary(), cfg.boundary_data,
                                         working_grid(cfg, basis), cfg.exact_solution)


def cmd_solve(cfg: RunConfig, out: FsPath) -> int:
    t0 = time.perf_counter()
    basis = build_basis(cfg)
    system = elliptic.complete_system(cfg.eq, basis)
    bvp = _bvp(cfg, basis)
    sol = bvpsolve.collocate(bvp, system, cfg.collocation_factor * len(system))
    z = bvp.interior_grid.points
    approx = bvpsolve.evaluate_solution(sol, z)
    runtime_ms = (time.perf_counter() - t0) * 1e3
    columns = [("x", "Cartesian x"), ("y", "Cartesian y"), ("u_approx", "collocation solution sum a_n u_n")]
    data = [z.real, z.imag, approx]
    if cfg.exact_solution is not None:
        exact = cfg.exact_solution(z)
        columns += [("u_exact", "exact solution from the config"), ("error", "u_approx - u_exact")]
        data += [exact, approx - exact]
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "solution.csv", columns, data)
    report = _common_manifest(cfg, basis)
    report.update({
        "coefficients": sol.coefficients.tolist(),
        "members": system.describe(),
        "collocation_points": len(sol.collocation_points),
        "boundary_residual": sol.boundary_residual,
        "singular_value_range": list(sol.singular_value_range),
        "rank": sol.rank,
        "runtime_ms": runtime_ms,
        "columns": _columns_manifest(columns),
    })
    if sol.max_interior_error is not None:
        report["max_interior_error"] = sol.max_interior_error
    write_json(out / "solution.json", report)
    msg = f"boundary residual {sol.boundary_residual:.3e}"
    if sol.max_interior_error is not None:
        msg += f", max interior error {sol.max_interior_error:.3e}"
    print(msg)
    return EXIT_OK


def cmd_convergence(cfg: RunConfig, out: FsPath) -> int:
    if cfg.exact_solution is None:
        raise ConfigError("convergence needs 'exact_solution'")
    weight = build_weight(cfg)
    probe = formalpowers.FormalPowerBasis(genpair.generating_sequence(weight), cfg.center, 0)
    bvp = _bvp(cfg, probe)
    rows = bvpsolve.convergence_table(bvp, weight, cfg.orders, cfg.center, cfg.collocation_factor, cfg.quad_tol)
    columns = [
        ("N", "order of the complete system"),
        ("size", "number of system members"),
        ("max_interior_error", "max |u_approx - u_exact| over the interior grid"),
        ("boundary_residual", "max collocation residual on the boundary"),
        ("runtime_s", "wall time for basis, system and solve"),
    ]
    data = [[r.N for r in rows], [r.size for r in rows], [r.max_interior_error for r in rows],
            [r.boundary_residual for r in rows], [r.runtime for r in rows]]
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "convergence.csv", columns, data)
    manifest = {"columns": _columns_manifest(columns), "orders": cfg.orders,
                "strictly_decreasing": bvpsolve.strictly_decreasing(rows),
                "coords": cfg.coords.describe(), "equation": cfg.eq.kind, "domain": cfg.domain.describe()}
    write_json(out / "convergence.json", manifest)
    for r in rows:
        print(f"N={r.N:3d} size={r.size:3d} error={r.max_interior_error:.3e} residual={r.boundary_residual:.3e}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites


@dataclass
class Check:
    name: str
    value: float
    threshold: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value < self.threshold)

    def as_dict(self):
        return {"name": self.name, "value": self.value, "threshold": self.threshold,
                "passed": self.passed, "note": self.note}


def _run_check(name, threshold, func, note=""):
    try:
        return Check(name, float(func()), threshold, note)
    except Exception as exc:  # noqa: BLE001 - a failing suite is reported, not raised
        return Check(name, float("inf"), threshold, f"{type(exc).__name__}: {exc}")


def verification_checks(cfg: RunConfig) -> list[Check]:
    basis = build_basis(cfg, min(cfg.order, 6))
    weight = basis.weight
    seq = basis.sequence
    z0 = cfg.center
    sample = cfg.domain.grid(10).filter(weight.domain)
    rng = np.random.default_rng(0)
    local = z0 + 0.3 * min(1.0, cfg.domain.radius if cfg.domain.kind == "disk" else 1.0) * (
        rng.uniform(-1, 1, 40) + 1j * rng.uniform(-1, 1, 40))
    local = local[weight.domain(local) & cfg.domain.inside(local)]
    checks = []

    def particular():
        return cfg.eq.validate(sample)

    checks.append(_run_check("particular_solution_residual", elliptic.PARTICULAR_TOL, particular))

    def coords_analytic():
        return np.max(np.abs(wirtinger_dzbar(cfg.coords.phi, local)))

    checks.append(_run_check("coordinate_map_analyticity", 1e-8, coords_analytic))

    def positivity():
        worst = min(np.min(seq.pair(m).positivity(local)) for m in range(-2, 4))
        return -worst  # passes when every value is positive

    checks.append(_run_check("pair_positivity", 0.0, positivity, "negated minimum of Im(conj F_m G_m)"))

    def successors():
        return max(max(r.max_a_diff, r.max_b_plus_B) for r in
                   (genpair.successor_check(seq.pair(m), seq.pair(m + 1), local) for m in range(-2, 3)))

    checks.append(_run_check("successor_identities", 1e-5, successors))

    def a_vanishing():
        return max(np.max(np.abs(genpair.characteristic_coefficients(seq.pair(m)).all(local)[0]))
                   for m in range(-2, 4))

    checks.append(_run_check("a_vanishing", 1e-7, a_vanishing))

    pair = seq.pair(0)
    W = basis.power(1, 1.0)
    start, end = local[0], local[1]

    def antiderivative():
        path = Path.segment(start, end)
        lhs = pacalc.fg_integral(pair, pacalc.fg_derivative(pair, W), path)
        phi, psi = pair.decompose(W, start)
        F1, G1 = pair.values(end)
        return abs(lhs - (W(end) - phi * F1 - psi * G1))

    checks.append(_run_check("antiderivative_identity", 1e-5, antiderivative))

    def closed_loop():
        path = Path.polyline(start, end, local[2], start)
        return abs(pacalc.fg_integral(pair, pacalc.fg_derivative(pair, W), path))

    checks.append(_run_check("closed_loop_integral", 1e-6, closed_loop))

    def vekua():
        return max(pacalc.vekua_residual(weight.f, basis.power(n, a), sample).max_abs
                   for n in range(basis.max_order + 1) for a in (1.0, 1j))

    checks.append(_run_check("formal_power_vekua_residual", 1e-4, vekua))

    def asymptotics():
        radius = 1e-3
        dirs = np.linspace(0, 2 * np.pi, 8, endpoint=False)
        return max(formalpowers.asymptotic_check(basis, n, a, [radius], dirs).ratios.max()
                   for n in range(min(3, basis.max_order) + 1) for a in (1.0, 1j))

    checks.append(_run_check("asymptotics", 5e-3, asymptotics))

    system = elliptic.complete_system(cfg.eq, basis)

    def members():
        return max(elliptic.equation_residual(cfg.eq, system.member(k), sample).max_abs
                   for k in range(len(system)))

    checks.append(_run_check("member_equation_residuals", cfg.residual_tol, members))

    def splits():
        coef = rng.normal(size=(3, len(system)))
        worst = 0.0
        for c in coef:
            combo = _combination(basis, system, c)
            worst = max(worst, pacalc.vekua_split_residuals(weight.f, combo, sample).max())
        return worst

    checks.append(_run_check("conductivity_schrodinger_splits", 1e-3, splits))

    if np.allclose(weight.f(sample.points), 1.0, atol=1e-14, rtol=0):
        def classical():
            vals = basis.values(sample.points)
            dz = sample.points - z0
            return max(np.max(np.abs(vals[:, n, 0] - dz**n)) for n in range(basis.max_order + 1))

        checks.append(_run_check("classical_reduction", 1e-10, classical))
    return checks


def _combination(basis, system, coef):
    from .numfield import FieldHandle

    def func(z):
        vals = basis.values(z)
        out = np.zeros(np.shape(z), complex)
        for c, (n, a) in zip(coef, system.provenance):
            out = out + c * vals[..., n, 0 if a == 1 else 1]
        return out

    return FieldHandle(func, basis.weight.domain, "combination")


def cmd_verify(cfg: RunConfig, out: FsPath) -> int:
    checks = verification_checks(cfg)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        extra = f" ({c.note})" if c.note and not c.passed else ""
        print(f"{status} {c.name}: {c.value:.3e} < {c.threshold:.0e}{extra}")
    out.mkdir(parents=True, exist_ok=True)
    ok = all(c.passed for c in checks)
    write_json(out / "verify.json", {"checks": [c.as_dict() for c in checks], "passed": ok})
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {"basis": cmd_basis, "solve": cmd_solve, "verify": cmd_verify, "convergence": cmd_convergence}


def _parse_orders(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad order list {text!r}") from exc


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pseudoanalytic", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--grid", type=int, help="grid points per axis")
    parser.add_argument("--order", type=int, help="order N of the basis")
    parser.add_argument("--tol", type=float, help="quadrature tolerance")
    parser.add_argument("--orders", type=_parse_orders, help="comma-separated orders for convergence")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config, {"grid": args.grid, "order": args.order, "tol": args.tol,
                                        "orders": args.orders})
        return COMMANDS[args.command](cfg, FsPath(args.out))
    except (ConfigError, exprlang.ExprError, coordmod.CoordinateError, elliptic.EquationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except bvpsolve.RankCollapseError as exc:
        print(f"rank collapse: {exc}", file=sys.stderr)
        return EXIT_RANK
    except (DomainError, StencilError, QuadratureError, genpair.WeightError, genpair.DegeneratePairError,
            genpair.SequenceRangeError, bvpsolve.BoundaryError, pacalc.CompatibilityError,
            formalpowers.OrderError, FloatingPointError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
