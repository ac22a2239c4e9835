"""Fundamental-solution discretization of the Laplace problem on the unit disk.

A harmonic function on the closed unit disk is approximated by a charge sum

    u(z) = sum_k q_k * G(z - zeta_k),      G(z) = log|z| / (2 pi),

with the N charge (singular) points zeta_k = R * omega^k placed uniformly on
the circle of radius R > 1 and the N collocation points z_j = omega^j on the
unit circle, omega = exp(2 pi i / N).  Matching boundary data at the
collocation points gives a linear system whose matrix

    G_jk = G(z_j - zeta_k) = G(1 - R omega^(k-j))

is circulant, so it diagonalizes in the discrete Fourier basis.  Its
eigenvalues (stored as ``spectrum``) are

    lambda_p = sum_k omega^(p k) G(1 - zeta_k),    p = 0, ..., N-1,

real by conjugate symmetry of the generating sequence, with the closed form
lambda_0 = log(R^N - 1) / (2 pi).  The solve is three FFTs; the explicit
inverse matrix entries are the inverse DFT of 1/lambda.

Because the charges sit strictly outside the closed disk, the charge sum is
real-analytic on it and all derivatives are available in closed form.  With
the Wirtinger derivative d = (d/dx - i d/dy)/2:

    d G(z)   =  1 / (4 pi z),
    d^2 G(z) = -1 / (4 pi z^2),

and for a real harmonic u the second Cartesian derivatives follow from
Re(4 d^2 u) = 2 u_xx and Im(4 d^2 u) = -2 u_xy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

#: spectrum entries below this are treated as an ill-posed basis
SPECTRUM_FLOOR = 1e-14


@dataclass(frozen=True)
class MfsBasis:
    """Geometric and spectral data of one charge layout.

    Immutable after construction; evaluation methods are pure and safe to
    call concurrently.
    """

    n: int
    radius: float
    omega: complex
    collocation: np.ndarray  # (n,) complex, |z_j| = 1
    singular: np.ndarray  # (n,) complex, |zeta_k| = radius
    spectrum: np.ndarray  # (n,) real eigenvalues of the collocation matrix

    def solve(self, values) -> np.ndarray:
        """Charges reproducing the given boundary values at collocation points.

        ``values`` may be shape (n,) or (m, n) for m independent right-hand
        sides.  The solve divides the data spectrum by the matrix spectrum
        componentwise; the real-input FFT pair keeps the exact answer's
        realness structural (the half-spectrum carries the full conjugate
        symmetry), so no imaginary residue can leak into the charges.
        """
        f = np.asarray(values, dtype=float)
        if f.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} boundary values, got {f.shape[-1]}")
        if np.min(np.abs(self.spectrum)) < SPECTRUM_FLOOR:
            raise ArithmeticError(
                "ill-posed basis: collocation spectrum entry below "
                f"{SPECTRUM_FLOOR:g} (reduce radius or n)"
            )
        half = self.spectrum[: self.n // 2 + 1]
        q = np.fft.irfft(np.fft.rfft(f, axis=-1) / half, n=self.n, axis=-1)
        return np.ascontiguousarray(q)

    def evaluate(self, q, z):
        """Charge-sum value sum_k q_k G(z - zeta_k) at points of the disk."""
        q = np.asarray(q, dtype=float)
        z = np.asarray(z, dtype=complex)
        diff = z[..., None] - self.singular
        return np.log(np.abs(diff)) @ q / TWO_PI

    def evaluate_dz(self, q, z):
        """Wirtinger derivative sum_k q_k / (4 pi (z - zeta_k))."""
        q = np.asarray(q, dtype=float)
        z = np.asarray(z, dtype=complex)
        diff = z[..., None] - self.singular
        return (1.0 / diff) @ q / (2.0 * TWO_PI)

    def evaluate_dzz(self, q, z):
        """Second Wirtinger derivative -sum_k q_k / (4 pi (z - zeta_k)^2)."""
        q = np.asarray(q, dtype=float)
        z = np.asarray(z, dtype=complex)
        diff = z[..., None] - self.singular
        return -(1.0 / diff**2) @ q / (2.0 * TWO_PI)

    def inverse_matrix(self) -> np.ndarray:
        """Dense inverse of the collocation matrix from the spectral formula.

        Entry (k, j) is the inverse-DFT of 1/spectrum at offset j - k; the
        reparametrization gradient consumes its columns.
        """
        d = np.fft.ifft(1.0 / self.spectrum.astype(complex)).real
        idx = (np.arange(self.n)[None, :] - np.arange(self.n)[:, None]) % self.n
        return d[idx]


def build_basis(n: int, radius: float) -> MfsBasis:
    """Lay out collocation and charge circles and compute the spectrum.

    Rejects n < 4 (degenerate layout) and radius <= 1 (charges on or inside
    the closed disk).  The spectrum is formed by direct summation of
    G(1 - zeta_k) against the Fourier weights; conjugate symmetry makes the
    imaginary parts vanish to roundoff and the real parts are stored.
    """
    n = int(n)
    if n < 4:
        raise ValueError("n must be at least 4")
    radius = float(radius)
    if radius <= 1.0:
        raise ValueError("radius must exceed 1")

    omega = np.exp(2j * np.pi / n)
    k = np.arange(n)
    collocation = np.exp(2j * np.pi * k / n)
    singular = radius * collocation

    kernel = np.log(np.abs(1.0 - singular)) / TWO_PI
    weights = np.exp(2j * np.pi * (np.outer(k, k) % n) / n)  # omega^(p k)
    spectrum_c = weights @ kernel
    # conjugate symmetry of the kernel sequence makes these real
    if np.max(np.abs(spectrum_c.imag)) > 1e-10 * max(1.0, np.max(np.abs(spectrum_c))):
        raise ArithmeticError("spectrum has unexpected imaginary part")
    spectrum = spectrum_c.real

    basis = MfsBasis(
        n=n,
        radius=radius,
        omega=complex(omega),
        collocation=collocation,
        singular=singular,
        spectrum=spectrum,
    )
    for arr in (basis.collocation, basis.singular, basis.spectrum):
        arr.setflags(write=False)
    return basis
