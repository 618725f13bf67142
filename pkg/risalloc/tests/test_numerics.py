"""Tests for risalloc.numerics module."""

# Standard Library
from unittest import TestCase

# Third Party
import numpy as np

# RIS Alloc
from risalloc.exceptions import ShapeError, SingularChannelError
from risalloc.numerics import (
    as_complex_matrix,
    gram_condition,
    hermitian,
    project_out_rows,
    pseudo_inverse,
    pseudo_inverse_svd,
)
from risalloc.tests.factories import ComplexMatrixFactory


class TestAsComplexMatrix(TestCase):
    def test_rejects_vectors(self):
        """Test that a 1-D input is a shape error."""
        with self.assertRaises(ShapeError):
            as_complex_matrix(np.ones(3))

    def test_rejects_nan(self):
        """Test that non-finite entries are refused."""
        with self.assertRaises(ValueError):
            as_complex_matrix([[1.0, np.nan]])

    def test_hermitian(self):
        """Test the conjugate transpose."""
        m = np.array([[1 + 2j, 3j]])
        np.testing.assert_array_equal(hermitian(m), np.array([[1 - 2j], [-3j]]))


class TestPseudoInverse(TestCase):
    def test_right_inverse(self):
        """Test G W = I for random wide matrices."""
        rng = np.random.default_rng(11)
        for _ in range(50):
            k = int(rng.integers(2, 9))
            n = int(rng.integers(max(8, k), 65))
            g = ComplexMatrixFactory.create(k, n, seed=int(rng.integers(1 << 31)))
            w = pseudo_inverse(g)
            self.assertEqual(w.shape, (n, k))
            self.assertLessEqual(np.linalg.norm(g @ w - np.eye(k)), 1e-9 * np.linalg.norm(g))

    def test_matches_numpy_pinv(self):
        """Test agreement with the minimum-norm pseudo-inverse."""
        g = ComplexMatrixFactory.create(4, 12, seed=3)
        np.testing.assert_allclose(pseudo_inverse(g), np.linalg.pinv(g), atol=1e-12)

    def test_cholesky_and_svd_paths_agree(self):
        """Test that forcing the SVD path gives the same matrix."""
        g = ComplexMatrixFactory.create(5, 20, seed=4)
        fast = pseudo_inverse(g)
        forced = pseudo_inverse(g, svd_fallback_condition=0.0)
        np.testing.assert_allclose(fast, forced, atol=1e-12)
        np.testing.assert_allclose(fast, pseudo_inverse_svd(g, 1e-10), atol=1e-12)

    def test_square_full_rank(self):
        """Test K = N gives the ordinary inverse."""
        g = ComplexMatrixFactory.create(6, 6, seed=5)
        np.testing.assert_allclose(pseudo_inverse(g) @ g, np.eye(6), atol=1e-9)

    def test_duplicate_rows_are_singular(self):
        """Test that two identical rows raise a singular-channel error."""
        g = ComplexMatrixFactory.create(3, 10, seed=6)
        g[2] = g[0]
        with self.assertRaises(SingularChannelError):
            pseudo_inverse(g)

    def test_singular_error_is_linalg_error(self):
        """Test callers catching LinAlgError also catch the singular case."""
        with self.assertRaises(np.linalg.LinAlgError):
            pseudo_inverse(np.zeros((2, 4)))

    def test_rank_test_uses_gram_eigenvalues(self):
        """Test singularity is judged on squared singular values."""
        g = np.zeros((2, 4), dtype=complex)
        g[0, 0] = 1.0
        g[1, 1] = 1e-4
        np.testing.assert_allclose(g @ pseudo_inverse_svd(g, 1e-10), np.eye(2), atol=1e-9)
        g[1, 1] = 1e-6
        with self.assertRaises(SingularChannelError):
            pseudo_inverse_svd(g, 1e-10)
        with self.assertRaises(SingularChannelError):
            pseudo_inverse(g)

    def test_scaling_channel_scales_inverse(self):
        """Test pinv(c G) equals pinv(G) / c."""
        g = ComplexMatrixFactory.create(3, 8, seed=12)
        np.testing.assert_allclose(pseudo_inverse(2.5 * g), pseudo_inverse(g) / 2.5, atol=1e-12)

    def test_tall_matrix_rejected(self):
        """Test that K > N cannot be zero-forced."""
        with self.assertRaises(ShapeError):
            pseudo_inverse(ComplexMatrixFactory.create(5, 3))


class TestGramCondition(TestCase):
    def test_orthonormal_rows(self):
        """Test a condition of one for orthonormal rows."""
        self.assertAlmostEqual(gram_condition(np.eye(3, 5)), 1.0)

    def test_rank_deficient_is_infinite(self):
        """Test zero rows give an infinite condition."""
        g = np.zeros((2, 4), dtype=complex)
        g[0, 0] = 1.0
        self.assertEqual(gram_condition(g), float("inf"))


class TestProjectOutRows(TestCase):
    def test_result_orthogonal_to_rows(self):
        """Test projected vectors are orthogonal to every conjugated row."""
        rows = ComplexMatrixFactory.create(3, 12, seed=8)
        vectors = ComplexMatrixFactory.create(12, 4, seed=9)
        residual = project_out_rows(rows, vectors)
        np.testing.assert_allclose(rows @ residual, np.zeros((3, 4)), atol=1e-12)

    def test_no_rows_is_identity(self):
        """Test an empty row set leaves the vectors unchanged."""
        vectors = ComplexMatrixFactory.create(6, 2, seed=10)
        np.testing.assert_array_equal(project_out_rows(np.empty((0, 6)), vectors), vectors)
