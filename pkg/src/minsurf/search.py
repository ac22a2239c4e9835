"""Enumeration of distinct spanning surfaces for one boundary curve.

Two protocols generate initial configurations:

* a one-parameter Fourier family, the equidistant angles perturbed by a
  single mode, phi_j(s) = 2 pi j / N + s sin(2 pi m j / N);
* seeded random draws: sorted uniform angles interpolated by a monotone
  periodic spline and resampled at N equispaced parameters.

Each initial configuration is optimized independently and the outcomes are
grouped by Dirichlet energy agreement at a fixed number of significant
digits: distinct minimizers of the same boundary curve separate by energy,
except for congruent pairs, which an optional rigid-motion-invariant shape
fingerprint (sorted pairwise distances of fixed surface samples) can split.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.spatial.distance import pdist

from . import curves as curve_catalog
from .mfs import TWO_PI, build_basis
from .optimizer import OptimizerSettings, SolveReport, nesterov_run
from .surface import ApproximateSurface, Configuration, build_surface


def fourier_initial(n: int, s: float, m: int) -> Configuration:
    """Equidistant angles perturbed by the single Fourier mode s sin(m x)."""
    j = np.arange(int(n))
    return Configuration(TWO_PI * j / n + s * np.sin(TWO_PI * m * j / n))


def random_initial(n: int, seed: int, n_knots: int) -> Configuration:
    """Random monotone configuration from a seeded counter-based generator.

    n_knots sorted uniform angles are interpolated by a periodic monotone
    (PCHIP) spline from knot parameter to angle and sampled at n equispaced
    parameters, so the result winds once around the circle without
    backtracking.
    """
    n_knots = int(n_knots)
    if n_knots < 4:
        raise ValueError("need at least 4 knots")
    rng = np.random.Generator(np.random.Philox(int(seed)))
    knots = np.sort(rng.uniform(0.0, TWO_PI, n_knots))
    u = TWO_PI * np.arange(n_knots) / n_knots
    # wrap three knots on each side so the interpolant is periodic at the seam
    xs = np.concatenate([u[-3:] - TWO_PI, u, u[:3] + TWO_PI])
    ys = np.concatenate([knots[-3:] - TWO_PI, knots, knots[:3] + TWO_PI])
    spline = PchipInterpolator(xs, ys)
    return Configuration(spline(TWO_PI * np.arange(int(n)) / int(n)))


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter family sweep: curve, discretization and s grid."""

    n: int
    radius: float
    curve: dict  # curve descriptor
    settings: OptimizerSettings
    s_values: tuple
    m: int


@dataclass
class SolutionCluster:
    """Reports grouped by Dirichlet energy at fixed significant digits."""

    representative: SolveReport
    members: list
    energy_mean: float
    energy_spread: float
    digits: int
    fingerprint: np.ndarray | None = None


def _run_fourier(spec: SweepSpec, s: float) -> SolveReport:
    basis = build_basis(spec.n, spec.radius)
    curve = curve_catalog.from_descriptor(spec.curve)
    report = nesterov_run(basis, curve, fourier_initial(spec.n, s, spec.m), spec.settings)
    report.provenance["initial"] = {"kind": "fourier", "s": float(s), "m": int(spec.m)}
    return report


def _run_random(args) -> SolveReport:
    n, radius, descriptor, settings, seed, n_knots = args
    basis = build_basis(n, radius)
    curve = curve_catalog.from_descriptor(descriptor)
    report = nesterov_run(basis, curve, random_initial(n, seed, n_knots), settings)
    report.provenance["initial"] = {
        "kind": "random",
        "seed": int(seed),
        "knots": int(n_knots),
    }
    return report


def sweep(spec: SweepSpec, jobs: int = 1) -> list:
    """One optimization per s value; results follow the input grid order."""
    tasks = [(spec, float(s)) for s in spec.s_values]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_fourier, *zip(*tasks)))
    return [_run_fourier(spec, s) for _, s in tasks]


def random_search(
    n: int,
    radius: float,
    descriptor: dict,
    settings: OptimizerSettings,
    samples: int,
    seed: int,
    n_knots: int,
    jobs: int = 1,
) -> list:
    """Independent runs from seeds seed, seed+1, ..., seed+samples-1."""
    tasks = [
        (n, radius, descriptor, settings, seed + i, n_knots) for i in range(samples)
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_random, tasks))
    return [_run_random(t) for t in tasks]


def round_significant(x: float, digits: int) -> float:
    """Round to the given number of significant decimal digits."""
    if x == 0.0 or not np.isfinite(x):
        return x
    exponent = int(np.floor(np.log10(abs(x))))
    return round(x, digits - 1 - exponent)


def shape_fingerprint(surface: ApproximateSurface, n_samples: int = 16) -> np.ndarray:
    """Sorted pairwise distances of fixed parameter samples.

    Invariant under rigid motions of the surface, but sensitive to how the
    parametrization places the samples, so congruent surfaces with
    genuinely different configurations still separate.
    """
    z = 0.7 * np.exp(1j * TWO_PI * np.arange(int(n_samples)) / int(n_samples))
    return np.sort(pdist(surface.position(z)))


def classify(
    reports,
    digits: int,
    distinguish_congruent: bool = False,
    fingerprint_tol: float = 1e-3,
) -> list:
    """Group reports whose Dirichlet energies agree at `digits` significant
    digits; clusters come back sorted by energy.

    With distinguish_congruent, each energy cluster is further split by the
    shape fingerprint (threshold fingerprint_tol), rebuilding the final
    surface of each report from its provenance.
    """
    digits = int(digits)
    if digits < 1:
        raise ValueError("digits must be positive")
    groups: dict = {}
    for idx, report in enumerate(reports):
        key = round_significant(report.dirichlet_energy, digits)
        groups.setdefault(key, []).append(idx)

    clusters = []
    for key in sorted(groups):
        members = groups[key]
        subgroups = [members]
        fingerprints = [None]
        if distinguish_congruent:
            subgroups, fingerprints = _split_by_fingerprint(
                reports, members, fingerprint_tol
            )
        for sub, fp in zip(subgroups, fingerprints):
            energies = np.array([reports[i].dirichlet_energy for i in sub])
            clusters.append(
                SolutionCluster(
                    representative=reports[sub[0]],
                    members=list(sub),
                    energy_mean=float(energies.mean()),
                    energy_spread=float(energies.max() - energies.min()),
                    digits=digits,
                    fingerprint=fp,
                )
            )
    clusters.sort(key=lambda c: c.energy_mean)
    return clusters


def _rebuild_surface(report: SolveReport) -> ApproximateSurface:
    prov = report.provenance
    basis = build_basis(prov["n"], prov["radius"])
    curve = curve_catalog.from_descriptor(prov["curve"])
    return build_surface(basis, curve, report.final_config)


def _split_by_fingerprint(reports, members, tol):
    prints = {i: shape_fingerprint(_rebuild_surface(reports[i])) for i in members}
    subgroups: list = []
    keys: list = []
    for i in members:
        for group, key in zip(subgroups, keys):
            if np.max(np.abs(prints[i] - key)) <= tol:
                group.append(i)
                break
        else:
            subgroups.append([i])
            keys.append(prints[i])
    return subgroups, keys
