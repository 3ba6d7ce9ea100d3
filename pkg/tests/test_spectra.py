import math

import numpy as np
import pytest

from multisurf.errors import NoConvergence
from multisurf.spectra import (
    SymTridiagonal,
    UpperHessenberg,
    eig_hessenberg,
    eig_sym_tridiag,
    min_eigen_gap,
    toeplitz_spectral_radius,
    toeplitz_tridiag_eigs,
)


class TestSymTridiagonal:
    def test_two_by_two(self):
        assert np.allclose(
            eig_sym_tridiag(SymTridiagonal([0.0, 0.0], [1.0])), [-1.0, 1.0], atol=1e-14
        )

    def test_diagonal(self):
        assert np.array_equal(
            eig_sym_tridiag(SymTridiagonal([5.0, 5.0, 5.0], [0.0, 0.0])), [5.0, 5.0, 5.0]
        )

    def test_toeplitz_closed_form(self):
        got = eig_sym_tridiag(SymTridiagonal([0.0, 0.0, 0.0], [0.5, 0.5]))
        expect = np.array([-math.sqrt(2) / 2, 0.0, math.sqrt(2) / 2])
        assert np.max(np.abs(got - expect)) <= 1e-14

    def test_against_numpy(self):
        rng = np.random.default_rng(1)
        for _ in range(300):
            n = int(rng.integers(1, 10))
            t = SymTridiagonal(rng.uniform(-1, 1, n), rng.uniform(-1, 1, max(n - 1, 0)))
            ref = np.sort(np.linalg.eigvalsh(t.to_dense()))
            assert np.max(np.abs(eig_sym_tridiag(t) - ref)) <= 1e-12

    def test_ascending_output(self):
        rng = np.random.default_rng(2)
        t = SymTridiagonal(rng.uniform(-1, 1, 8), rng.uniform(-1, 1, 7))
        assert np.all(np.diff(eig_sym_tridiag(t)) >= 0)

    def test_no_convergence_on_nan(self):
        with pytest.raises(NoConvergence):
            eig_sym_tridiag(SymTridiagonal([np.nan, 0.0], [1.0]))

    def test_parlett_simple_eigenvalues(self):
        # strictly positive off-diagonals force simple eigenvalues
        rng = np.random.default_rng(3)
        for _ in range(1000):
            n = int(rng.integers(2, 8))
            t = SymTridiagonal(rng.uniform(-1, 1, n), rng.uniform(0.1, 1.0, n - 1))
            assert min_eigen_gap(eig_sym_tridiag(t)) > 0.0

    def test_characteristic_polynomial_consistency(self):
        # det(yI - T) by the three-term recurrence vs the polynomial built
        # from the computed eigenvalues
        rng = np.random.default_rng(4)
        for _ in range(100):
            n = int(rng.integers(2, 7))
            t = SymTridiagonal(rng.uniform(-1, 1, n), rng.uniform(-1, 1, n - 1))
            p_prev = np.array([1.0])
            p = np.array([-t.diag[0], 1.0])
            for k in range(1, n):
                shifted = np.concatenate([[0.0], p])
                padded = np.zeros(k + 2)
                padded[: k + 1] = -t.diag[k] * p
                padded[: k] -= t.offdiag[k - 1] ** 2 * p_prev
                det_next = shifted + padded
                p_prev, p = p, det_next
            from_eigs = np.array([1.0])
            for lam in eig_sym_tridiag(t):
                from_eigs = np.convolve(from_eigs, [-lam, 1.0])
            assert np.max(np.abs(p - from_eigs)) <= 1e-8

    def test_band_length_validated(self):
        with pytest.raises(ValueError):
            SymTridiagonal([1.0, 2.0], [0.5, 0.5])


class TestHessenberg:
    def test_companion_pm1(self):
        eigs = np.sort_complex(eig_hessenberg(np.array([[0.0, 1.0], [1.0, 0.0]])))
        assert np.allclose(eigs, [-1.0, 1.0], atol=1e-14)

    def test_companion_complex_pair(self):
        # matrix for y^2 + 1: roots +-i
        eigs = np.sort_complex(eig_hessenberg(np.array([[0.0, -1.0], [1.0, 0.0]])))
        assert np.allclose(eigs, [-1j, 1j], atol=1e-14)

    def test_companion_1_2_3(self):
        a = np.array([[0.0, 0.0, 6.0], [1.0, 0.0, -11.0], [0.0, 1.0, 6.0]])
        eigs = np.sort(eig_hessenberg(a).real)
        assert np.allclose(eigs, [1.0, 2.0, 3.0], atol=1e-10)
        assert np.max(np.abs(eig_hessenberg(a).imag)) == 0.0

    def test_against_numpy(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            n = int(rng.integers(1, 10))
            a = np.triu(rng.uniform(-1, 1, (n, n)), -1)
            mine = np.sort_complex(eig_hessenberg(a))
            ref = np.sort_complex(np.linalg.eigvals(a))
            assert np.max(np.abs(mine - ref)) <= 1e-10

    def test_conjugacy_exact(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            eigs = eig_hessenberg(np.triu(rng.uniform(-1, 1, (n, n)), -1))
            assert np.array_equal(np.sort_complex(eigs), np.sort_complex(np.conj(eigs)))

    def test_structure_validated(self):
        with pytest.raises(ValueError):
            UpperHessenberg(np.ones((3, 3)))

    def test_no_convergence_on_nan(self):
        a = np.triu(np.full((3, 3), np.nan), -1)
        with pytest.raises(NoConvergence):
            eig_hessenberg(a)

    def test_accepts_wrapper(self):
        h = UpperHessenberg(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert np.allclose(np.sort(eig_hessenberg(h).real), [1.0, 3.0], atol=1e-13)


class TestToeplitz:
    def test_half_bands_n3(self):
        got = toeplitz_tridiag_eigs(0.0, 0.5, 0.5, 3)
        expect = np.array([math.sqrt(2) / 2, 0.0, -math.sqrt(2) / 2])
        assert np.max(np.abs(got - expect)) <= 1e-15

    def test_zero_bands(self):
        assert np.array_equal(toeplitz_tridiag_eigs(7.0, 0.0, 0.0, 4), np.full(4, 7.0))

    def test_n1(self):
        got = toeplitz_tridiag_eigs(0.0, 1.0, 1.0, 1)
        assert abs(got[0]) <= 1e-15

    def test_complex_when_bc_negative(self):
        got = toeplitz_tridiag_eigs(0.5, 1.0, -1.0, 4)
        assert np.iscomplexobj(got)
        assert np.allclose(got.real, 0.5)

    def test_oracle_vs_solver(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(1, 21))
            a, b = rng.uniform(-1, 1, 2)
            closed = np.sort(toeplitz_tridiag_eigs(a, b, b, n))
            solver = eig_sym_tridiag(SymTridiagonal(np.full(n, a), np.full(n - 1, b)))
            assert np.max(np.abs(closed - solver)) <= 1e-10

    def test_radius_examples(self):
        n = 9
        eps = 0.3
        assert toeplitz_spectral_radius(0.0, eps, eps, n) == pytest.approx(
            2 * eps * math.cos(math.pi / (n + 1)), abs=1e-15
        )
        assert toeplitz_spectral_radius(7.0, 0.0, 0.0, 5) == 7.0

    def test_radius_matches_max_abs_exactly(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            n = int(rng.integers(1, 21))
            a, b, c = rng.uniform(-1, 1, 3)
            eigs = toeplitz_tridiag_eigs(a, b, c, n)
            assert toeplitz_spectral_radius(a, b, c, n) == np.max(np.abs(eigs))

    def test_radius_upper_bound(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            n = int(rng.integers(1, 21))
            a, b, c = rng.uniform(-1, 1, 3)
            assert toeplitz_spectral_radius(a, b, c, n) <= abs(a) + 2 * abs(
                complex(b * c) ** 0.5
            ) + 1e-15


class TestMinEigenGap:
    def test_simple(self):
        assert min_eigen_gap([1.0, 2.0, 3.0]) == 1.0

    def test_tie(self):
        assert min_eigen_gap([0.0, 0.0, 5.0]) == 0.0

    def test_single(self):
        assert min_eigen_gap([3.0]) == math.inf
