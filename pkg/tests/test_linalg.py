import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randiter import linalg
from randiter.errors import DimensionError, NotPositiveDefinite, NotSymmetric


def brute_force_row_norms(X):
    """Independent oracle: entry-by-entry summation."""
    n, p = X.shape
    out = np.zeros(n)
    for i in range(n):
        for j in range(p):
            out[i] += X[i, j] ** 2
    return out


def naive_matvec(X, v):
    n, p = X.shape
    out = np.zeros(n)
    for i in range(n):
        for j in range(p):
            out[i] += X[i, j] * v[j]
    return out


class TestConstruction:
    def test_matrix_is_column_major_float64(self):
        X = linalg.dense_matrix([[1, 2], [3, 4]])
        assert X.flags["F_CONTIGUOUS"]
        assert X.dtype == np.float64

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            linalg.dense_matrix([[1.0, np.nan]])
        with pytest.raises(ValueError):
            linalg.dense_vector([np.inf])

    def test_rejects_empty(self):
        with pytest.raises(DimensionError):
            linalg.dense_matrix(np.zeros((0, 3)))
        with pytest.raises(DimensionError):
            linalg.dense_vector([])


class TestNorms:
    def test_row_norms_identity(self):
        X = linalg.dense_matrix(np.eye(2))
        assert np.allclose(linalg.row_norms_sq(X), [1.0, 1.0])

    def test_row_norms_forced(self):
        X = linalg.dense_matrix([[3.0, 4.0], [0.0, 0.0]])
        assert np.allclose(linalg.row_norms_sq(X), [25.0, 0.0], atol=0)

    def test_row_norms_matches_bruteforce(self):
        rng = np.random.default_rng(11)
        X = linalg.dense_matrix(rng.standard_normal((5, 3)))
        assert np.max(np.abs(linalg.row_norms_sq(X) - brute_force_row_norms(X))) < 1e-12

    def test_col_norms_identity(self):
        X = linalg.dense_matrix(np.eye(2))
        assert np.allclose(linalg.col_norms_sq(X), [1.0, 1.0])

    def test_col_norms_forced(self):
        X = linalg.dense_matrix([[3.0, 0.0], [4.0, 0.0]])
        assert np.allclose(linalg.col_norms_sq(X), [25.0, 0.0], atol=0)

    def test_col_norms_matches_transpose_oracle(self):
        rng = np.random.default_rng(12)
        X = linalg.dense_matrix(rng.standard_normal((5, 3)))
        via_transpose = linalg.row_norms_sq(linalg.dense_matrix(X.T))
        assert np.max(np.abs(linalg.col_norms_sq(X) - via_transpose)) < 1e-12

    def test_frobenius_trivial(self):
        assert linalg.frobenius_sq(linalg.dense_matrix(np.eye(3))) == 3.0
        assert linalg.frobenius_sq(linalg.dense_matrix([[3.0, 4.0]])) == 25.0

    def test_frobenius_equals_row_sum(self):
        rng = np.random.default_rng(13)
        X = linalg.dense_matrix(rng.standard_normal((6, 4)))
        assert abs(linalg.frobenius_sq(X) - float(np.sum(linalg.row_norms_sq(X)))) < 1e-12

    @settings(deadline=None, max_examples=30)
    @given(
        st.integers(1, 8),
        st.integers(1, 8),
        st.integers(0, 2**32 - 1),
    )
    def test_frobenius_row_col_identity(self, n, p, seed):
        X = np.random.default_rng(seed).standard_normal((n, p))
        f = linalg.frobenius_sq(X)
        rel = 1e-12 * (1.0 + f)
        assert abs(f - float(np.sum(linalg.row_norms_sq(X)))) <= rel
        assert abs(f - float(np.sum(linalg.col_norms_sq(X)))) <= rel


class TestMatvec:
    def test_identity(self):
        X = linalg.dense_matrix(np.eye(2))
        assert np.allclose(linalg.matvec(X, np.array([3.0, 5.0])), [3.0, 5.0])

    def test_forced(self):
        X = linalg.dense_matrix([[1.0, 2.0], [3.0, 4.0]])
        assert np.allclose(linalg.matvec(X, np.ones(2)), [3.0, 7.0])

    def test_matches_naive_loop(self):
        rng = np.random.default_rng(14)
        X = linalg.dense_matrix(rng.standard_normal((7, 4)))
        v = rng.standard_normal(4)
        assert np.max(np.abs(linalg.matvec(X, v) - naive_matvec(X, v))) < 1e-12
        w = rng.standard_normal(7)
        assert np.max(np.abs(linalg.matvec_t(X, w) - naive_matvec(X.T, w))) < 1e-12

    def test_dimension_mismatch(self):
        X = linalg.dense_matrix(np.eye(3))
        with pytest.raises(DimensionError):
            linalg.matvec(X, np.zeros(2))
        with pytest.raises(DimensionError):
            linalg.matvec_t(X, np.zeros(2))


class TestSolveSpd:
    def test_identity(self):
        x = linalg.solve_spd(np.eye(2), np.array([4.0, 5.0]))
        assert np.allclose(x, [4.0, 5.0])

    def test_diagonal(self):
        x = linalg.solve_spd(np.diag([2.0, 4.0]), np.array([2.0, 8.0]))
        assert np.allclose(x, [1.0, 2.0])

    def test_random_spd_residual(self):
        rng = np.random.default_rng(15)
        M = rng.standard_normal((8, 8))
        A = M.T @ M + 0.1 * np.eye(8)
        b = rng.standard_normal(8)
        x = linalg.solve_spd(A, b)
        assert np.max(np.abs(A @ x - b)) <= 1e-8 * (1.0 + np.max(np.abs(b)))

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            linalg.solve_spd(np.diag([1.0, -1.0]), np.array([1.0, 1.0]))

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            linalg.solve_spd(np.array([[1.0, 2.0], [0.0, 1.0]]), np.ones(2))


class TestSymEigs:
    def test_diagonal(self):
        assert np.allclose(linalg.sym_eigs(np.diag([1.0, 4.0])), [1.0, 4.0])

    def test_forced_2x2(self):
        w = linalg.sym_eigs(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert np.allclose(w, [1.0, 3.0])

    def test_constructed_spectrum(self):
        # orthogonal Q from repeated Householder reflections, known d
        rng = np.random.default_rng(16)
        n = 9
        Q = np.eye(n)
        for _ in range(3):
            v = rng.standard_normal(n)
            v /= np.linalg.norm(v)
            Q = Q @ (np.eye(n) - 2.0 * np.outer(v, v))
        d = np.sort(rng.uniform(0.5, 5.0, n))
        A = Q @ np.diag(d) @ Q.T
        assert np.max(np.abs(linalg.sym_eigs(A) - d)) < 1e-8

    def test_trace_identity(self):
        rng = np.random.default_rng(17)
        M = rng.standard_normal((10, 10))
        A = M + M.T
        w = linalg.sym_eigs(A)
        tr = float(np.trace(A))
        assert abs(float(np.sum(w)) - tr) <= 1e-8 * (1.0 + abs(tr))

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            linalg.sym_eigs(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_eigenvectors_reconstruct(self):
        rng = np.random.default_rng(18)
        M = rng.standard_normal((7, 7))
        A = M @ M.T
        w, V = linalg.sym_eigh(A)
        assert np.max(np.abs(A @ V - V @ np.diag(w))) < 1e-8


class TestEnergyNorm:
    def test_identity(self):
        assert linalg.energy_norm_sq(np.eye(2), np.array([3.0, 4.0])) == 25.0

    def test_psd_diag(self):
        assert linalg.energy_norm_sq(np.diag([2.0, 0.0]), np.ones(2)) == 2.0

    def test_matches_composed_ops(self):
        rng = np.random.default_rng(19)
        M = rng.standard_normal((6, 6))
        A = M.T @ M
        v = rng.standard_normal(6)
        expected = float(v @ linalg.matvec(A, v))
        assert abs(linalg.energy_norm_sq(A, v) - expected) < 1e-12 * (1.0 + abs(expected))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            linalg.energy_norm_sq(np.eye(3), np.zeros(2))
