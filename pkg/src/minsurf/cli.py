"""Command-line front end: config parsing, runs, and serialization.

Subcommands: ``solve`` (one optimization, report JSON plus optional OBJ mesh
and dilatation grid), ``sweep`` (one-parameter family of initial
configurations plus cluster summary), ``random-search`` (seeded random
initial configurations, energy distribution CSV plus clusters) and ``grid``
(field CSV of the configured, unoptimized surface).

Configs and reports are JSON with sorted keys; floats serialize with the
shortest representation that round-trips exactly, grids are CSV with the
fixed header ``rho,theta,value`` and meshes are Wavefront OBJ with a
scalar-field sidecar CSV.  Exit codes: 0 success, 2 config error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import curves as curve_catalog
from .mfs import build_basis
from .optimizer import OptimizerSettings, SolveReport, nesterov_run
from .search import (
    SweepSpec,
    classify,
    fourier_initial,
    random_initial,
    random_search,
    sweep,
)
from .surface import ApproximateSurface, Configuration, Mesh, build_surface

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid or unknown configuration content."""


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    """Complete description of one run; round-trips through JSON."""

    curve: dict
    n: int
    radius: float = 1.5
    rho: float = 0.9
    optimizer: dict = field(default_factory=dict)
    initial: dict = field(default_factory=lambda: {"kind": "equidistant"})
    out_dir: str = "out"
    grid: dict = field(default_factory=lambda: {"n_r": 32, "n_theta": 64})
    mesh: bool = False
    dilatation_grid: bool = False
    jobs: int = 1
    sweep: dict | None = None
    random_search: dict | None = None

    _TOP_KEYS = {
        "curve",
        "n",
        "radius",
        "rho",
        "optimizer",
        "initial",
        "out_dir",
        "grid",
        "mesh",
        "dilatation_grid",
        "jobs",
        "sweep",
        "random_search",
    }
    _OPTIMIZER_KEYS = {
        "eta",
        "max_iters",
        "grad_tolerance",
        "energy_log_stride",
        "adaptive_step",
        "restart",
    }
    _INITIAL_KEYS = {
        "equidistant": set(),
        "fourier": {"s", "m"},
        "random": {"seed", "knots"},
        "explicit": {"angles"},
    }
    _GRID_KEYS = {"n_r", "n_theta"}
    _SWEEP_KEYS = {"s_values", "m", "digits"}
    _SEARCH_KEYS = {"samples", "seed", "knots", "digits"}

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        _reject_unknown(data, cls._TOP_KEYS, "config")
        for key in ("curve", "n"):
            if key not in data:
                raise ConfigError(f"config is missing required key {key!r}")
        curve = data["curve"]
        if not isinstance(curve, dict) or "name" not in curve:
            raise ConfigError("curve must be an object with a 'name'")
        _reject_unknown(curve, {"name", "params"}, "curve")

        optimizer = dict(data.get("optimizer", {}))
        _reject_unknown(optimizer, cls._OPTIMIZER_KEYS, "optimizer")

        initial = dict(data.get("initial", {"kind": "equidistant"}))
        kind = initial.get("kind")
        if kind not in cls._INITIAL_KEYS:
            raise ConfigError(
                f"initial.kind must be one of {sorted(cls._INITIAL_KEYS)}, got {kind!r}"
            )
        _reject_unknown(initial, cls._INITIAL_KEYS[kind] | {"kind"}, "initial")

        grid = dict(data.get("grid", {"n_r": 32, "n_theta": 64}))
        _reject_unknown(grid, cls._GRID_KEYS, "grid")

        sweep_section = data.get("sweep")
        if sweep_section is not None:
            sweep_section = dict(sweep_section)
            _reject_unknown(sweep_section, cls._SWEEP_KEYS, "sweep")
        search_section = data.get("random_search")
        if search_section is not None:
            search_section = dict(search_section)
            _reject_unknown(search_section, cls._SEARCH_KEYS, "random_search")

        return cls(
            curve={"name": curve["name"], "params": dict(curve.get("params", {}))},
            n=int(data["n"]),
            radius=float(data.get("radius", 1.5)),
            rho=float(data.get("rho", 0.9)),
            optimizer=optimizer,
            initial=initial,
            out_dir=str(data.get("out_dir", "out")),
            grid=grid,
            mesh=bool(data.get("mesh", False)),
            dilatation_grid=bool(data.get("dilatation_grid", False)),
            jobs=int(data.get("jobs", 1)),
            sweep=sweep_section,
            random_search=search_section,
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        if out["sweep"] is None:
            del out["sweep"]
        if out["random_search"] is None:
            del out["random_search"]
        return out

    def settings(self) -> OptimizerSettings:
        try:
            return OptimizerSettings(rho=self.rho, **self.optimizer)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    def build_curve(self):
        try:
            return curve_catalog.from_descriptor(self.curve)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    def initial_configuration(self) -> Configuration:
        kind = self.initial["kind"]
        if kind == "equidistant":
            return Configuration.equidistant(self.n)
        if kind == "fourier":
            return fourier_initial(
                self.n, float(self.initial["s"]), int(self.initial["m"])
            )
        if kind == "random":
            return random_initial(
                self.n,
                int(self.initial["seed"]),
                int(self.initial.get("knots", 12)),
            )
        angles = np.asarray(self.initial["angles"], dtype=float)
        if angles.shape != (self.n,):
            raise ConfigError(
                f"explicit initial must list exactly n={self.n} angles"
            )
        return Configuration(angles)


def _reject_unknown(section: dict, allowed: set, where: str):
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} keys: {sorted(unknown)}")


def load_config(path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return RunConfig.from_dict(raw)


# ---------------------------------------------------------------------------
# serialization


def _plain(obj):
    """Recursively convert numpy containers for JSON output."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def dump_json(payload: dict, path: Path):
    path.write_text(json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n")


def report_payload(report: SolveReport, config: RunConfig) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "report": {
            "final_config": report.final_config.angles.tolist(),
            "monotone": report.monotone,
            "final_energy": report.final_energy,
            "dilatation_sup_interior": report.dilatation_sup_interior,
            "dirichlet_energy": report.dirichlet_energy,
            "mean_curvature_sup": report.mean_curvature_sup,
            "iters_run": report.iters_run,
            "step_halvings": report.step_halvings,
            "energy_trace": [[int(i), float(e)] for i, e in report.energy_trace],
            "wall_time": report.wall_time,
            "provenance": report.provenance,
        },
    }


def write_obj(mesh: Mesh, path: Path):
    """Wavefront OBJ with vertex positions only; faces are 1-indexed."""
    lines = []
    for x, y, z in mesh.vertices:
        lines.append(f"v {float(x)!r} {float(y)!r} {float(z)!r}")
    for tri in mesh.triangles:
        lines.append("f " + " ".join(str(i + 1) for i in tri))
    for quad in mesh.quads:
        lines.append("f " + " ".join(str(i + 1) for i in quad))
    path.write_text("\n".join(lines) + "\n")


def write_mesh_scalars(mesh: Mesh, path: Path):
    lines = ["vertex,dilatation,mean_curvature"]
    for i, (d, h) in enumerate(zip(mesh.dilatation, mesh.mean_curvature)):
        lines.append(f"{i},{float(d)!r},{float(h)!r}")
    path.write_text("\n".join(lines) + "\n")


def write_field_grid(
    surface: ApproximateSurface, field_name: str, n_r: int, n_theta: int, path: Path
):
    """CSV of a scalar field over the polar grid, header rho,theta,value.

    Degenerate mean-curvature points are emitted as nan cells.
    """
    radii = np.arange(1, int(n_r) + 1) / int(n_r)
    theta = 2.0 * np.pi * np.arange(int(n_theta)) / int(n_theta)
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    if field_name == "dilatation":
        values = np.abs(surface.dilatation(z))
    elif field_name == "mean_curvature":
        values = surface.curvature_field(z)
    else:
        raise ConfigError(f"unknown field {field_name!r}")
    lines = ["rho,theta,value"]
    for i, r in enumerate(radii):
        for j, t in enumerate(theta):
            lines.append(f"{float(r)!r},{float(t)!r},{float(values[i, j])!r}")
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def _prepare(config: RunConfig):
    basis = build_basis(config.n, config.radius)
    curve = config.build_curve()
    return basis, curve


def cmd_solve(config: RunConfig) -> int:
    basis, curve = _prepare(config)
    settings = config.settings()
    report = nesterov_run(basis, curve, config.initial_configuration(), settings)
    report.provenance["initial"] = dict(config.initial)

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dump_json(report_payload(report, config), out / "report.json")
    if config.mesh or config.dilatation_grid:
        surf = build_surface(basis, curve, report.final_config)
        if config.mesh:
            mesh = surf.sample_mesh(config.grid["n_r"], config.grid["n_theta"])
            write_obj(mesh, out / "surface.obj")
            write_mesh_scalars(mesh, out / "surface_scalars.csv")
        if config.dilatation_grid:
            write_field_grid(
                surf,
                "dilatation",
                config.grid["n_r"],
                config.grid["n_theta"],
                out / "dilatation.csv",
            )
    print(f"report written to {out / 'report.json'}")
    return 0


def cmd_sweep(config: RunConfig) -> int:
    if not config.sweep or not config.sweep.get("s_values"):
        raise ConfigError("sweep requires a nonempty 's_values' grid")
    spec = SweepSpec(
        n=config.n,
        radius=config.radius,
        curve=config.curve,
        settings=config.settings(),
        s_values=tuple(float(s) for s in config.sweep["s_values"]),
        m=int(config.sweep.get("m", 2)),
    )
    digits = int(config.sweep.get("digits", 5))
    reports = sweep(spec, jobs=config.jobs)

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, report in enumerate(reports):
        dump_json(report_payload(report, config), out / f"sweep_run_{i:03d}.json")
    clusters = classify(reports, digits)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "s_values": list(spec.s_values),
        "dirichlet_energies": [r.dirichlet_energy for r in reports],
        "clusters": [
            {
                "members": c.members,
                "s_values": [spec.s_values[i] for i in c.members],
                "energy_mean": c.energy_mean,
                "energy_spread": c.energy_spread,
                "digits": c.digits,
            }
            for c in clusters
        ],
    }
    dump_json(summary, out / "sweep_summary.json")
    print(f"{len(reports)} runs, {len(clusters)} clusters -> {out / 'sweep_summary.json'}")
    return 0


def cmd_random_search(config: RunConfig) -> int:
    section = config.random_search or {}
    samples = int(section.get("samples", 0))
    seed = int(section.get("seed", 0))
    knots = int(section.get("knots", 12))
    digits = int(section.get("digits", 5))
    if samples < 0:
        raise ConfigError("samples must be nonnegative")
    reports = random_search(
        config.n,
        config.radius,
        config.curve,
        config.settings(),
        samples,
        seed,
        knots,
        jobs=config.jobs,
    )

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["sample,seed,dirichlet_energy,final_energy"]
    for i, report in enumerate(reports):
        lines.append(
            f"{i},{seed + i},{float(report.dirichlet_energy)!r},"
            f"{float(report.final_energy)!r}"
        )
    (out / "distribution.csv").write_text("\n".join(lines) + "\n")
    clusters = classify(reports, digits)
    dump_json(
        {
            "schema_version": SCHEMA_VERSION,
            "config": config.to_dict(),
            "clusters": [
                {
                    "members": c.members,
                    "energy_mean": c.energy_mean,
                    "energy_spread": c.energy_spread,
                    "digits": c.digits,
                }
                for c in clusters
            ],
        },
        out / "clusters.json",
    )
    print(f"{samples} samples, {len(clusters)} clusters -> {out / 'distribution.csv'}")
    return 0


def cmd_grid(config: RunConfig, field_name: str) -> int:
    basis, curve = _prepare(config)
    surf = build_surface(basis, curve, config.initial_configuration())
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{field_name}.csv"
    write_field_grid(surf, field_name, config.grid["n_r"], config.grid["n_theta"], path)
    print(f"grid written to {path}")
    return 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minsurf",
        description="Mesh-free minimal-surface solver and search tooling",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name in ("solve", "sweep", "random-search", "grid"):
        sub = subs.add_parser(name)
        sub.add_argument("--config", required=True, help="path to JSON run config")
        sub.add_argument("--n", type=int, help="override discretization size")
        sub.add_argument("--radius", type=float, help="override charge-circle radius")
        sub.add_argument("--rho", type=float, help="override energy sampling radius")
        sub.add_argument("--eta", type=float, help="override step size")
        sub.add_argument("--iters", type=int, help="override iteration budget")
        sub.add_argument("--seed", type=int, help="override random seeds")
        sub.add_argument("--jobs", type=int, help="parallel worker bound")
        sub.add_argument("--out", help="override output directory")
        if name == "grid":
            sub.add_argument(
                "--field",
                required=True,
                choices=["dilatation", "mean_curvature"],
                help="scalar field to sample",
            )
    return parser


def _apply_overrides(config: RunConfig, args) -> RunConfig:
    if args.n is not None:
        config.n = int(args.n)
    if args.radius is not None:
        config.radius = float(args.radius)
    if args.rho is not None:
        config.rho = float(args.rho)
    if args.eta is not None:
        config.optimizer["eta"] = float(args.eta)
    if args.iters is not None:
        config.optimizer["max_iters"] = int(args.iters)
    if args.seed is not None:
        if config.initial.get("kind") == "random":
            config.initial["seed"] = int(args.seed)
        if config.random_search is not None:
            config.random_search["seed"] = int(args.seed)
    if args.jobs is not None:
        config.jobs = int(args.jobs)
    if args.out is not None:
        config.out_dir = str(args.out)
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _apply_overrides(load_config(args.config), args)
        if args.command == "solve":
            return cmd_solve(config)
        if args.command == "sweep":
            return cmd_sweep(config)
        if args.command == "random-search":
            return cmd_random_search(config)
        return cmd_grid(config, args.field)
    except (ConfigError, ValueError) as exc:
        _emit_error(2, str(exc))
        return 2
    except ArithmeticError as exc:
        _emit_error(3, str(exc))
        return 3


def _emit_error(code: int, message: str):
    print(json.dumps({"error": {"exit_code": code, "message": message}}), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
