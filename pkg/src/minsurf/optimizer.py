"""Dilatation-energy minimization over boundary configurations.

The objective is the discrete conformality defect

    E(phi) = sum_l |Phi(rho z_l; phi)|^2,

the squared dilatation sampled at the N collocation directions pulled onto
the circle of radius rho < 1.  Because the dilatation is holomorphic,
driving it to zero on that circle drives it to zero on the whole disk of
radius rho by the maximum principle.

The gradient is exact.  Writing A_lk = d G(rho z_l - zeta_k) for the
derivative kernel and M = G^-1 for the collocation inverse, the charge
vectors depend on phi only through the boundary samples, so

    dQ_ik / dphi_j = M_kj b_i'(phi_j),
    dPhi_l / dphi_j = 2 sum_i (d X_i)(rho z_l) * (A M)_lj * b_i'(phi_j),
    dE / dphi_j = 4 Re sum_l conj(Phi_l) (A M)_lj S_lj,

with S_lj = sum_i (d X_i)(rho z_l) b_i'(phi_j).  The matrix B = A M depends
only on the basis and rho and is assembled once per run.

Minimization uses the accelerated first-order recursion

    psi_{n+1} = phi_n - eta * grad E(phi_n)
    phi_{n+1} = psi_{n+1} + ((n - 1) / (n + 2)) * (psi_{n+1} - psi_n)

with the main sequence psi returned.  Angles stay unwrapped on the real
line throughout and are reduced mod 2*pi only in the report, which keeps
the gradient flow free of branch jumps.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .curves import BoundaryCurve
from .mfs import MfsBasis
from .surface import (
    ApproximateSurface,
    Configuration,
    build_surface,
    dilatation_disk_sup,
    mean_curvature_disk_sup,
)

MAX_STEP_HALVINGS = 60


class NumericalError(ArithmeticError):
    """Non-finite energy or gradient: the iteration cannot continue."""


@dataclass(frozen=True)
class OptimizerSettings:
    """Step size, budget, sampling radius and stopping controls.

    adaptive_step enables halving eta and redoing the step whenever the
    energy jumps by more than 10x or turns non-finite; off by default so
    runs are exactly reproducible from the settings alone.

    restart enables the function-value restart rule: whenever the energy at
    the extrapolated point exceeds its previous value, the momentum counter
    resets and the step is retaken from the main sequence.  This tames the
    late-stage orbiting of the plain recursion in flat energy valleys and
    keeps mirror-symmetric runs numerically locked; also off by default.
    """

    eta: float = 1e-2
    max_iters: int = 10_000
    rho: float = 0.9
    grad_tolerance: float = 0.0
    energy_log_stride: int = 100
    adaptive_step: bool = False
    restart: bool = False

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must lie in (0, 1)")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (0, 1)")
        if self.grad_tolerance < 0.0:
            raise ValueError("grad_tolerance must be nonnegative")
        if self.energy_log_stride < 1:
            raise ValueError("energy_log_stride must be positive")


@dataclass
class OptimizerState:
    """Loop state: unwrapped main and extrapolated angle vectors."""

    phi: np.ndarray
    lookahead: np.ndarray
    iter: int
    last_energy: float
    last_grad_norm: float


@dataclass
class SolveReport:
    """Outcome and diagnostics of one optimization run."""

    final_config: Configuration
    final_energy: float
    dilatation_sup_interior: float
    dirichlet_energy: float
    mean_curvature_sup: float
    iters_run: int
    energy_trace: list
    wall_time: float
    monotone: bool
    step_halvings: int = 0
    provenance: dict = field(default_factory=dict)


class _EnergyModel:
    """Precomputed kernels for repeated energy/gradient evaluation."""

    def __init__(self, basis: MfsBasis, curve: BoundaryCurve, rho: float):
        if not 0.0 < rho < 1.0:
            raise ValueError("rho must lie in (0, 1)")
        self.basis = basis
        self.curve = curve
        self.rho = float(rho)
        samples = self.rho * basis.collocation
        # derivative kernel at the sample ring and its contraction with G^-1
        self._deriv_kernel = 1.0 / (4.0 * np.pi * (samples[:, None] - basis.singular))
        self._grad_kernel = self._deriv_kernel @ basis.inverse_matrix()

    def _dilatation_parts(self, angles: np.ndarray):
        boundary = self.curve.eval(angles)  # (n, 3)
        charges = self.basis.solve(boundary.T)  # (3, n)
        dx = charges @ self._deriv_kernel.T  # (3, n) complex
        phi_vals = (dx**2).sum(axis=0)  # (n,)
        return dx, phi_vals

    def energy(self, angles: np.ndarray) -> float:
        _, phi_vals = self._dilatation_parts(angles)
        return float((np.abs(phi_vals) ** 2).sum())

    def energy_and_gradient(self, angles: np.ndarray):
        if self.curve.deriv is None:
            raise ValueError("boundary curve lacks derivative data")
        dx, phi_vals = self._dilatation_parts(angles)
        energy = float((np.abs(phi_vals) ** 2).sum())
        speeds = self.curve.deriv(angles)  # (n, 3)
        coupling = dx.T @ speeds.T  # S_lj = sum_i dX_i(rho z_l) b_i'(phi_j)
        grad = 4.0 * np.real(
            np.conj(phi_vals) @ (self._grad_kernel * coupling)
        )
        return energy, grad


def energy(basis: MfsBasis, curve: BoundaryCurve, config: Configuration, rho: float) -> float:
    """Dilatation energy of the surface for one configuration."""
    return _EnergyModel(basis, curve, rho).energy(np.asarray(config.angles, dtype=float))


def gradient(
    basis: MfsBasis, curve: BoundaryCurve, config: Configuration, rho: float
) -> np.ndarray:
    """Exact gradient of the energy with respect to each boundary angle."""
    _, g = _EnergyModel(basis, curve, rho).energy_and_gradient(
        np.asarray(config.angles, dtype=float)
    )
    return g


def nesterov_run(
    basis: MfsBasis,
    curve: BoundaryCurve,
    initial: Configuration,
    settings: OptimizerSettings,
) -> SolveReport:
    """Run the accelerated iteration and assemble the diagnostics report."""
    start = time.perf_counter()
    model = _EnergyModel(basis, curve, settings.rho)

    psi = np.array(initial.angles, dtype=float)  # main sequence
    phi = psi.copy()  # extrapolated sequence
    eta = settings.eta
    trace: list = []
    halvings = 0
    iters_run = 0
    prev_energy = np.inf
    grad_norm = np.inf

    n = 1
    momentum_age = 1  # drives the (k-1)/(k+2) coefficient; reset on restart
    while n <= settings.max_iters:
        e_n, grad = model.energy_and_gradient(phi)
        broken = not np.isfinite(e_n) or not np.all(np.isfinite(grad))
        if broken or (settings.adaptive_step and e_n > 10.0 * prev_energy):
            if not settings.adaptive_step:
                raise NumericalError(
                    f"energy became non-finite at iteration {n} (eta too large?)"
                )
            halvings += 1
            if halvings > MAX_STEP_HALVINGS:
                raise NumericalError("step size collapsed without recovering")
            eta *= 0.5
            phi = psi.copy()  # redo the step from the main sequence
            momentum_age = 1
            continue
        if settings.restart and e_n > prev_energy:
            momentum_age = 1
            phi = psi.copy()
            e_n, grad = model.energy_and_gradient(phi)
        prev_energy = e_n
        if n == 1 or n % settings.energy_log_stride == 0:
            trace.append((n, e_n))
        grad_norm = float(np.max(np.abs(grad)))
        if grad_norm <= settings.grad_tolerance:
            break
        psi_next = phi - eta * grad
        phi = psi_next + ((momentum_age - 1.0) / (momentum_age + 2.0)) * (psi_next - psi)
        psi = psi_next
        iters_run += 1
        n += 1
        momentum_age += 1

    final_config = Configuration(psi)
    final_energy = model.energy(final_config.angles)
    surf = build_surface(basis, curve, final_config)
    report = SolveReport(
        final_config=final_config,
        final_energy=final_energy,
        dilatation_sup_interior=dilatation_disk_sup(surf),
        dirichlet_energy=surf.dirichlet_energy(),
        mean_curvature_sup=mean_curvature_disk_sup(surf),
        iters_run=iters_run,
        energy_trace=trace,
        wall_time=time.perf_counter() - start,
        monotone=final_config.monotone,
        step_halvings=halvings,
        provenance={
            "curve": dict(curve.descriptor),
            "n": basis.n,
            "radius": basis.radius,
            "settings": {
                "eta": settings.eta,
                "max_iters": settings.max_iters,
                "rho": settings.rho,
                "grad_tolerance": settings.grad_tolerance,
                "energy_log_stride": settings.energy_log_stride,
                "adaptive_step": settings.adaptive_step,
                "restart": settings.restart,
            },
        },
    )
    return report


def surface_of(report: SolveReport, basis: MfsBasis, curve: BoundaryCurve) -> ApproximateSurface:
    """Rebuild the final surface of a report on matching basis and curve."""
    return build_surface(basis, curve, report.final_config)
