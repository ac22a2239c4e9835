"""Approximate spanning surfaces and their differential geometry.

A surface is built from a boundary curve b and a configuration of boundary
angles phi = (phi_0, ..., phi_{N-1}): each Cartesian coordinate X_i is the
charge-sum harmonic extension of the boundary samples b_i(phi_j), so the
surface interpolates b(phi_j) at the collocation points and is harmonic (and
real-analytic) on the closed disk for every configuration.

With the Wirtinger derivative d, the key derived quantities are

    complex dilatation  Phi(z) = sum_i (d X_i(z))^2,

which vanishes exactly where the parametrization is conformal and is
holomorphic because X is harmonic (so its modulus obeys the maximum
principle), and

    Dirichlet energy    D(X) = (1/2) int_B |grad X|^2 = 2 int_B sum_i |d X_i|^2,

which equals the surface area when Phi = 0.  First and second fundamental
forms come from the Cartesian derivatives recovered via

    d1 X_i = 2 Re d X_i,    d2 X_i = -2 Im d X_i,
    d1 d1 X_i = 2 Re d^2 X_i = -d2 d2 X_i,    d1 d2 X_i = -2 Im d^2 X_i,

and mean curvature is H = (g11 h22 + g22 h11 - 2 g12 h12) / (2 det g).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .curves import BoundaryCurve
from .mfs import TWO_PI, MfsBasis

DEGENERACY_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class Configuration:
    """Boundary angles phi_j, one per collocation point, reduced mod 2*pi."""

    angles: np.ndarray

    def __post_init__(self):
        a = np.mod(np.asarray(self.angles, dtype=float), TWO_PI)
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    def __len__(self) -> int:
        return self.angles.shape[0]

    @classmethod
    def equidistant(cls, n: int) -> "Configuration":
        return cls(TWO_PI * np.arange(int(n)) / int(n))

    @property
    def monotone(self) -> bool:
        """Whether the angles are cyclically strictly increasing with
        winding number one (surrogate for the boundary map being a
        homeomorphism)."""
        gaps = np.mod(np.roll(self.angles, -1) - self.angles, TWO_PI)
        if np.any(gaps <= 0.0):
            return False
        return int(round(gaps.sum() / TWO_PI)) == 1


@dataclass(frozen=True)
class FundamentalForms:
    """First and second fundamental forms and unit normal at one point."""

    g11: float
    g12: float
    g22: float
    h11: float
    h12: float
    h22: float
    normal: np.ndarray
    det_g: float


@dataclass(frozen=True)
class Mesh:
    """Polar tensor mesh of the surface with per-vertex diagnostics."""

    vertices: np.ndarray  # (V, 3)
    triangles: np.ndarray  # (T, 3) center fan
    quads: np.ndarray  # (Q, 4) ring bands
    dilatation: np.ndarray  # (V,) |Phi| per vertex
    mean_curvature: np.ndarray  # (V,) H per vertex, nan where degenerate


@dataclass(frozen=True)
class ApproximateSurface:
    """Harmonic spanning surface: three charge vectors over one basis."""

    basis: MfsBasis
    charges: np.ndarray  # (3, n) coordinate charge vectors
    curve_descriptor: dict
    config: Configuration

    # -- pointwise evaluation ------------------------------------------------

    def position(self, z) -> np.ndarray:
        """Surface point X(z) in R^3; trailing axis is the coordinate."""
        z = np.asarray(z, dtype=complex)
        diff = z[..., None] - self.basis.singular
        return np.log(np.abs(diff)) @ self.charges.T / TWO_PI

    def wirtinger(self, z) -> np.ndarray:
        """Wirtinger derivatives (d X_1, d X_2, d X_3)(z)."""
        z = np.asarray(z, dtype=complex)
        diff = z[..., None] - self.basis.singular
        return (1.0 / diff) @ self.charges.T / (2.0 * TWO_PI)

    def wirtinger2(self, z) -> np.ndarray:
        """Second Wirtinger derivatives (d^2 X_i)(z)."""
        z = np.asarray(z, dtype=complex)
        diff = z[..., None] - self.basis.singular
        return -(1.0 / diff**2) @ self.charges.T / (2.0 * TWO_PI)

    def dilatation(self, z):
        """Complex dilatation Phi(z) = sum_i (d X_i)^2."""
        return (self.wirtinger(z) ** 2).sum(axis=-1)

    def dilatation_sup(self, rho: float, m_samples: int = 1024) -> float:
        """Max of |Phi| over m equispaced samples of the circle |z| = rho."""
        if not 0.0 < rho <= 1.0:
            raise ValueError("rho must lie in (0, 1]")
        theta = TWO_PI * np.arange(int(m_samples)) / int(m_samples)
        return float(np.max(np.abs(self.dilatation(rho * np.exp(1j * theta)))))

    # -- integral and pointwise geometry --------------------------------------

    def dirichlet_energy(self, n_r: int = 64, n_theta: int = 256) -> float:
        """Dirichlet energy by Gauss-Legendre (radial) x trapezoid (angular).

        The angular rule is the equispaced periodic trapezoid, spectrally
        accurate here since the integrand is analytic on the closed disk.
        """
        n_r, n_theta = int(n_r), int(n_theta)
        if n_r < 2:
            raise ValueError("radial quadrature order must be at least 2")
        if n_theta < 4:
            raise ValueError("angular sample count must be at least 4")
        x, w = np.polynomial.legendre.leggauss(n_r)
        r = 0.5 * (x + 1.0)
        wr = 0.5 * w
        theta = TWO_PI * np.arange(n_theta) / n_theta
        z = r[:, None] * np.exp(1j * theta)[None, :]
        density = 2.0 * (np.abs(self.wirtinger(z)) ** 2).sum(axis=-1)
        return float((wr * r) @ density.sum(axis=1) * (TWO_PI / n_theta))

    def _frames(self, z):
        """Cartesian derivative frames (d1 X, d2 X, d11 X, d12 X) at z."""
        first = self.wirtinger(z)
        second = self.wirtinger2(z)
        d1 = 2.0 * first.real
        d2 = -2.0 * first.imag
        d11 = 2.0 * second.real  # harmonicity: d22 = -d11
        d12 = -2.0 * second.imag
        return d1, d2, d11, d12

    def fundamental_forms(self, z: complex) -> FundamentalForms:
        """First and second fundamental forms at an interior point."""
        d1, d2, d11, d12 = self._frames(complex(z))
        cross = np.cross(d1, d2)
        area = float(np.linalg.norm(cross))
        if area < DEGENERACY_FLOOR:
            raise ArithmeticError("degenerate tangent plane")
        e = cross / area
        g11 = float(d1 @ d1)
        g22 = float(d2 @ d2)
        g12 = float(d1 @ d2)
        h11 = float(d11 @ e)
        h12 = float(d12 @ e)
        return FundamentalForms(
            g11=g11,
            g12=g12,
            g22=g22,
            h11=h11,
            h12=h12,
            h22=-h11,
            normal=e,
            det_g=g11 * g22 - g12**2,
        )

    def mean_curvature(self, z: complex) -> float:
        """Mean curvature H(z); raises on a degenerate tangent plane."""
        f = self.fundamental_forms(z)
        return (f.g11 * f.h22 + f.g22 * f.h11 - 2.0 * f.g12 * f.h12) / (2.0 * f.det_g)

    def curvature_field(self, z) -> np.ndarray:
        """Vectorized mean curvature with nan at degenerate points."""
        d1, d2, d11, d12 = self._frames(np.asarray(z, dtype=complex))
        cross = np.cross(d1, d2)
        area = np.linalg.norm(cross, axis=-1)
        good = area >= DEGENERACY_FLOOR
        e = np.where(good[..., None], cross / np.where(good, area, 1.0)[..., None], np.nan)
        g11 = (d1 * d1).sum(-1)
        g22 = (d2 * d2).sum(-1)
        g12 = (d1 * d2).sum(-1)
        h11 = (d11 * e).sum(-1)
        h12 = (d12 * e).sum(-1)
        det = g11 * g22 - g12**2
        with np.errstate(invalid="ignore", divide="ignore"):
            h = (-g11 * h11 + g22 * h11 - 2.0 * g12 * h12) / (2.0 * det)
        return np.where(good, h, np.nan)

    def sample_mesh(self, n_r: int, n_theta: int) -> Mesh:
        """Polar tensor mesh: one center vertex plus n_r rings of n_theta.

        Faces are a fan of triangles at the center and quads between
        successive rings.  Per-vertex |Phi| and H ride along for export.
        """
        n_r, n_theta = int(n_r), int(n_theta)
        if n_r < 1 or n_theta < 3:
            raise ValueError("mesh needs n_r >= 1 and n_theta >= 3")
        radii = np.arange(1, n_r + 1) / n_r
        theta = TWO_PI * np.arange(n_theta) / n_theta
        ring_z = (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()
        z = np.concatenate([[0.0 + 0.0j], ring_z])

        vertices = self.position(z)
        dil = np.abs(self.dilatation(z))
        curv = self.curvature_field(z)

        def v(i, j):  # ring i >= 1, angular index j
            return 1 + (i - 1) * n_theta + (j % n_theta)

        triangles = np.array(
            [[0, v(1, j), v(1, j + 1)] for j in range(n_theta)], dtype=int
        )
        quads = np.array(
            [
                [v(i, j), v(i, j + 1), v(i + 1, j + 1), v(i + 1, j)]
                for i in range(1, n_r)
                for j in range(n_theta)
            ],
            dtype=int,
        ).reshape(-1, 4)
        return Mesh(
            vertices=vertices,
            triangles=triangles,
            quads=quads,
            dilatation=dil,
            mean_curvature=curv,
        )


def build_surface(
    basis: MfsBasis, curve: BoundaryCurve, config: Configuration
) -> ApproximateSurface:
    """Solve the three coordinate charge vectors for b_i(phi_j) data."""
    if len(config) != basis.n:
        raise ValueError(
            f"configuration has {len(config)} angles, basis expects {basis.n}"
        )
    if not config.monotone:
        warnings.warn("configuration is not cyclically monotone", stacklevel=2)
    boundary = curve.eval(config.angles)  # (n, 3)
    charges = basis.solve(boundary.T)
    return ApproximateSurface(
        basis=basis,
        charges=charges,
        curve_descriptor=dict(curve.descriptor),
        config=config,
    )


def dilatation_disk_sup(
    surface: ApproximateSurface,
    radius: float = 0.5,
    n_r: int = 8,
    n_theta: int = 256,
) -> float:
    """Sampled sup of |Phi| over the closed disk |z| <= radius."""
    radii = radius * np.arange(1, n_r + 1) / n_r
    theta = TWO_PI * np.arange(n_theta) / n_theta
    z = np.concatenate([[0.0 + 0.0j], (radii[:, None] * np.exp(1j * theta)).ravel()])
    return float(np.max(np.abs(surface.dilatation(z))))


def mean_curvature_disk_sup(
    surface: ApproximateSurface,
    radius: float = 0.5,
    n_r: int = 5,
    n_theta: int = 64,
) -> float:
    """Sampled sup of |H| over the closed disk |z| <= radius.

    nan (degenerate tangent plane anywhere in the sample) propagates.
    """
    radii = radius * np.arange(1, n_r + 1) / n_r
    theta = TWO_PI * np.arange(n_theta) / n_theta
    z = np.concatenate([[0.0 + 0.0j], (radii[:, None] * np.exp(1j * theta)).ravel()])
    return float(np.max(np.abs(surface.curvature_field(z))))
