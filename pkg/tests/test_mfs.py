"""Charge-basis construction, spectral solve, and evaluation oracles."""

import numpy as np
import pytest

from minsurf import build_basis
from minsurf.mfs import TWO_PI


def dense_matrix(basis):
    """Collocation matrix assembled entrywise (test oracle only)."""
    diff = basis.collocation[:, None] - basis.singular[None, :]
    return np.log(np.abs(diff)) / TWO_PI


class TestBuildBasis:
    def test_points_on_circles(self):
        b = build_basis(8, 1.5)
        assert np.allclose(np.abs(b.collocation), 1.0, atol=1e-15)
        assert np.allclose(np.abs(b.singular), 1.5, atol=1e-14)
        assert abs(b.collocation[3]) == pytest.approx(1.0, abs=1e-15)
        assert abs(b.singular[5]) == pytest.approx(1.5, abs=1e-14)

    def test_spectrum_closed_form(self):
        # leading eigenvalue equals log(R^N - 1) / (2 pi)
        b = build_basis(4, 2.0)
        assert b.spectrum[0] == pytest.approx(np.log(2.0**4 - 1.0) / TWO_PI, abs=1e-14)
        b = build_basis(32, 1.5)
        assert b.spectrum[0] == pytest.approx(np.log(1.5**32 - 1.0) / TWO_PI, rel=1e-13)

    def test_spectrum_matches_dense_eigenvalues(self):
        b = build_basis(16, 1.3)
        eig = np.sort(np.linalg.eigvals(dense_matrix(b)).real)
        assert np.allclose(np.sort(b.spectrum), eig, atol=1e-12)

    def test_spectrum_nonzero(self):
        for n, radius in [(8, 1.2), (32, 1.5), (64, 1.1)]:
            b = build_basis(n, radius)
            assert np.all(np.abs(b.spectrum) > 0)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            build_basis(3, 1.5)

    def test_rejects_bad_radius(self):
        with pytest.raises(ValueError, match="radius must exceed 1"):
            build_basis(8, 0.9)
        with pytest.raises(ValueError, match="radius must exceed 1"):
            build_basis(8, 1.0)


class TestSolve:
    def test_single_source_reproduction(self):
        b = build_basis(16, 1.5)
        m = 5
        f = np.log(np.abs(b.collocation - b.singular[m])) / TWO_PI
        q = b.solve(f)
        expected = np.zeros(16)
        expected[m] = 1.0
        assert np.max(np.abs(q - expected)) < 1e-12

    def test_constant_data(self):
        b = build_basis(16, 1.5)
        c = 3.7
        q = b.solve(np.full(16, c))
        assert np.allclose(q, c / b.spectrum[0], atol=1e-13)
        # cross-check against a dense LU solve
        q_lu = np.linalg.solve(dense_matrix(b), np.full(16, c))
        assert np.allclose(q, q_lu, atol=1e-11)

    def test_random_data_against_dense_lu(self):
        rng = np.random.default_rng(7)
        b = build_basis(16, 1.5)
        f = rng.standard_normal(16)
        q = b.solve(f)
        q_lu = np.linalg.solve(dense_matrix(b), f)
        assert np.max(np.abs(q - q_lu)) / np.max(np.abs(q_lu)) < 1e-10

    def test_batched_rhs(self):
        rng = np.random.default_rng(8)
        b = build_basis(12, 1.4)
        f = rng.standard_normal((3, 12))
        q = b.solve(f)
        assert q.shape == (3, 12)
        for i in range(3):
            assert np.allclose(q[i], b.solve(f[i]))

    def test_wrong_length_rejected(self):
        b = build_basis(8, 1.5)
        with pytest.raises(ValueError):
            b.solve(np.zeros(7))

    def test_ill_posed_spectrum_rejected(self):
        import dataclasses

        b = build_basis(8, 1.5)
        doctored = dataclasses.replace(
            b, spectrum=np.where(np.arange(8) == 4, 1e-15, b.spectrum)
        )
        with pytest.raises(ArithmeticError, match="ill-posed"):
            doctored.solve(np.ones(8))


class TestEvaluate:
    def test_single_source_identity(self):
        b = build_basis(16, 1.5)
        q = np.zeros(16)
        q[3] = 1.0
        z = 0.3 - 0.2j
        expected = np.log(abs(z - b.singular[3])) / TWO_PI
        assert b.evaluate(q, z) == pytest.approx(expected, abs=1e-15)

    def test_solve_then_evaluate_at_center(self):
        # data from source 1 evaluated at 0 gives log(R)/(2 pi)
        b = build_basis(16, 1.5)
        f = np.log(np.abs(b.collocation - b.singular[1])) / TWO_PI
        q = b.solve(f)
        assert b.evaluate(q, 0.0) == pytest.approx(np.log(1.5) / TWO_PI, abs=1e-12)

    def test_harmonic_oracle(self):
        # boundary data Re(z^2) has exact harmonic extension Re(z^2)
        b = build_basis(32, 1.5)
        q = b.solve((b.collocation**2).real)
        z = 0.3 + 0.4j
        assert b.evaluate(q, z) == pytest.approx((z**2).real, abs=1e-6)
        b64 = build_basis(64, 1.5)
        q64 = b64.solve((b64.collocation**2).real)
        assert b64.evaluate(q64, z) == pytest.approx((z**2).real, abs=1e-11)

    def test_exact_span_reproduction(self):
        rng = np.random.default_rng(11)
        for n, radius in [(16, 1.3), (24, 1.3)]:
            b = build_basis(n, radius)
            coef = rng.standard_normal(n)
            diff = b.collocation[:, None] - b.singular[None, :]
            f = (np.log(np.abs(diff)) / TWO_PI) @ coef
            q = b.solve(f)
            r = np.linspace(0.0, 1.0, 20)
            theta = np.linspace(0.0, TWO_PI, 23, endpoint=False)
            z = (r[:, None] * np.exp(1j * theta)).ravel()
            got = b.evaluate(q, z)
            want = (np.log(np.abs(z[:, None] - b.singular)) / TWO_PI) @ coef
            scale = np.max(np.abs(want))
            assert np.max(np.abs(got - want)) < 1e-10 * scale

    def test_mean_value_property(self):
        rng = np.random.default_rng(3)
        b = build_basis(64, 1.5)
        q = rng.standard_normal(64)
        samples = np.exp(1j * TWO_PI * np.arange(512) / 512)
        assert abs(b.evaluate(q, 0.0) - b.evaluate(q, samples).mean()) < 1e-10


class TestDerivatives:
    def test_dz_single_source(self):
        b = build_basis(16, 1.5)
        q = np.zeros(16)
        q[7] = 1.0
        z = 0.1 + 0.5j
        assert b.evaluate_dz(q, z) == pytest.approx(
            1.0 / (4.0 * np.pi * (z - b.singular[7])), abs=1e-15
        )

    def test_dz_zero_charges(self):
        b = build_basis(16, 1.5)
        assert b.evaluate_dz(np.zeros(16), 0.2 + 0.1j) == 0.0

    def test_dz_harmonic_oracle(self):
        # u = Re(z^2) has Wirtinger derivative z
        b = build_basis(64, 1.5)
        q = b.solve((b.collocation**2).real)
        assert b.evaluate_dz(q, 0.5) == pytest.approx(0.5, abs=1e-11)

    def test_dzz_single_source(self):
        b = build_basis(16, 1.5)
        q = np.zeros(16)
        q[2] = 1.0
        z = -0.3 + 0.2j
        assert b.evaluate_dzz(q, z) == pytest.approx(
            -1.0 / (4.0 * np.pi * (z - b.singular[2]) ** 2), abs=1e-15
        )

    def test_dzz_harmonic_oracle(self):
        # u = Re(z^2): second Wirtinger derivative is 1, so u_xx = 2, u_xy = 0
        b = build_basis(32, 1.5)
        q = b.solve((b.collocation**2).real)
        dzz = b.evaluate_dzz(q, 0.21 + 0.3j)
        assert 2.0 * dzz.real == pytest.approx(2.0, abs=1e-7)
        assert -2.0 * dzz.imag == pytest.approx(0.0, abs=1e-7)

    def test_dzz_against_finite_differences(self):
        # independent long-double evaluation differentiated by stencil
        rng = np.random.default_rng(5)
        b = build_basis(16, 1.5)
        q = rng.standard_normal(16)
        zeta = b.singular.astype(np.clongdouble)
        qq = q.astype(np.longdouble)

        def u(x, y):
            d = (x + 1j * y) - zeta
            return float((np.log(np.abs(d)) @ qq) / np.longdouble(TWO_PI))

        h = 1e-5
        for z in (0.3 + 0.1j, -0.2 + 0.4j, 0.05 - 0.55j):
            x, y = z.real, z.imag
            uxx = (u(x + h, y) - 2.0 * u(x, y) + u(x - h, y)) / h**2
            uxy = (
                u(x + h, y + h) - u(x + h, y - h) - u(x - h, y + h) + u(x - h, y - h)
            ) / (4.0 * h**2)
            dzz = b.evaluate_dzz(q, z)
            assert 2.0 * dzz.real == pytest.approx(uxx, rel=1e-6)
            assert -2.0 * dzz.imag == pytest.approx(uxy, rel=1e-6, abs=1e-8)


class TestCirculantInverse:
    @pytest.mark.parametrize(
        "n,radius", [(16, 1.1), (16, 1.5), (64, 1.1), (64, 1.5), (256, 1.1)]
    )
    def test_product_is_identity(self, n, radius):
        # well-conditioned layouts verified directly in float arithmetic
        b = build_basis(n, radius)
        product = dense_matrix(b) @ b.inverse_matrix()
        assert np.max(np.abs(product - np.eye(n))) < 1e-10

    def test_convergence_rate_for_analytic_data(self):
        def sup_err(n):
            b = build_basis(n, 1.5)
            q = b.solve((b.collocation**2).real)
            r = np.linspace(0.0, 1.0, 50)
            theta = np.linspace(0.0, TWO_PI, 50, endpoint=False)
            z = r[:, None] * np.exp(1j * theta)[None, :]
            return np.max(np.abs(b.evaluate(q, z) - (z**2).real))

        e32, e64 = sup_err(32), sup_err(64)
        assert e64 < 1e-10
        assert e64 < 1e-3 * e32
