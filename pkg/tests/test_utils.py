"""
Unit tests for utility functions.
"""
import math
import os
import sys
import tempfile
import unittest

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from optics.utils import (
    ConvergenceError, DomainError, FermatError, adaptive_quad, ensure_directory, find_root,
    integrate_from_turning_point, integrate_libration, relative_error, sign_change_brackets
)


class TestUtils(unittest.TestCase):
    """Test cases for utility functions."""

    def test_adaptive_quad(self):
        """Test the adaptive_quad function."""
        # Polynomial
        self.assertAlmostEqual(adaptive_quad(lambda x: x * x, 0.0, 1.0), 1.0 / 3.0, places=14)

        # Infinite range
        self.assertAlmostEqual(adaptive_quad(lambda x: math.exp(-x), 0.0, math.inf), 1.0, places=12)

        # Too few subintervals for a wild integrand
        with self.assertRaises(ConvergenceError):
            adaptive_quad(lambda x: math.sin(1.0 / x), 0.0, 1.0, limit=3)

    def test_integrate_from_turning_point(self):
        """Test the integrate_from_turning_point function."""
        # Inverse square-root singularity above the turning point
        self.assertAlmostEqual(
            integrate_from_turning_point(lambda rho: 1.0 / math.sqrt(rho - 1.0), 1.0, 2.0), 2.0, places=12
        )

        # Below the turning point the integral is oriented
        self.assertAlmostEqual(
            integrate_from_turning_point(lambda rho: 1.0 / math.sqrt(1.0 - rho), 1.0, 0.0), -2.0, places=12
        )

        # Square-root zero
        self.assertAlmostEqual(
            integrate_from_turning_point(lambda rho: math.sqrt(rho - 1.0), 1.0, 5.0), 16.0 / 3.0, places=12
        )

        # Empty range
        self.assertEqual(integrate_from_turning_point(lambda rho: 1.0, 3.0, 3.0), 0.0)

    def test_integrate_libration(self):
        """Test the integrate_libration function."""
        # Beta(1/2, 1/2)
        self.assertAlmostEqual(integrate_libration(lambda rho: 1.0, 0.0, 1.0, exponent=-0.5),
                               math.pi, places=12)

        # Beta(3/2, 3/2)
        self.assertAlmostEqual(integrate_libration(lambda rho: 1.0, 0.0, 1.0, exponent=0.5),
                               math.pi / 8.0, places=12)

        # Area of a half disc of radius 2
        self.assertAlmostEqual(integrate_libration(lambda rho: 1.0, -2.0, 2.0), 2.0 * math.pi, places=12)

        with self.assertRaises(DomainError):
            integrate_libration(lambda rho: 1.0, 1.0, 1.0)

    def test_find_root(self):
        """Test the find_root function."""
        self.assertAlmostEqual(find_root(lambda x: x * x - 2.0, 0.0, 2.0), math.sqrt(2.0), places=14)

        # No sign change
        with self.assertRaises(DomainError) as ctx:
            find_root(lambda x: x * x + 1.0, -1.0, 1.0)
        self.assertEqual(ctx.exception.interval, (-1.0, 1.0))

    def test_sign_change_brackets(self):
        """Test the sign_change_brackets function."""
        brackets = sign_change_brackets(math.cos, 1.0, 10.0)
        self.assertEqual(len(brackets), 3)
        for (a, b), root in zip(brackets, (math.pi / 2, 3 * math.pi / 2, 5 * math.pi / 2)):
            self.assertLessEqual(a, root)
            self.assertGreaterEqual(b, root)

        # No roots
        self.assertEqual(sign_change_brackets(lambda x: x + 1.0, 1.0, 10.0), [])

    def test_relative_error(self):
        """Test the relative_error function."""
        self.assertAlmostEqual(relative_error(1.01, 1.0), 0.01, places=12)
        self.assertAlmostEqual(relative_error(-2.0, -1.0), 1.0, places=12)

        # Zero reference falls back to the absolute error
        self.assertEqual(relative_error(0.5, 0.0), 0.5)

    def test_ensure_directory(self):
        """Test the ensure_directory function."""
        with tempfile.TemporaryDirectory() as tmp:
            nested = os.path.join(tmp, "a", "b")
            ensure_directory(nested)
            self.assertTrue(os.path.isdir(nested))

            # Existing directory is left alone
            ensure_directory(nested)
            self.assertTrue(os.path.isdir(nested))

    def test_error_hierarchy(self):
        """Test that the errors share a base and keep their builtin parents."""
        self.assertTrue(issubclass(DomainError, FermatError))
        self.assertTrue(issubclass(DomainError, ValueError))
        self.assertTrue(issubclass(ConvergenceError, RuntimeError))

        error = ConvergenceError("stalled", residual=1e-3, iterations=7)
        self.assertEqual(error.iterations, 7)
        self.assertEqual(str(error), "stalled")


if __name__ == "__main__":
    unittest.main()
