"""
Unit tests for the closed-form eikonals.
"""
import math
import os
import sys
import unittest

import numpy as np

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from optics.eikonal import (
    eikonal_free, eikonal_kepler, eikonal_parabolic, eikonal_perihelion, eikonal_quadrupole,
    eikonal_shadow, perihelion_expansion_terms, perihelion_turning_points, quadrature_eikonal,
    quadrupole_caustic, radial_momentum, surface_curvature, tractrix_profile, tractrix_tangent_length
)
from optics.medium import elements_from_conic, orbit_elements
from optics.models import EikonalValue
from optics.utils import DomainError


class TestFreeEikonal(unittest.TestCase):
    """Test cases for the homogeneous medium and its shadow."""

    def test_free_value(self):
        """Test S = sqrt(3) - pi/3 at r = 2 r_a."""
        result = eikonal_free(2.0, 1.0)
        self.assertEqual(result.branch, "periodic")
        self.assertAlmostEqual(result.value, math.sqrt(3.0) - math.pi / 3.0, places=14)
        self.assertAlmostEqual(result.value, 0.6848533, places=7)

    def test_free_matches_quadrature(self):
        """Test the closed form against the quadrature oracle, including eta != 1."""
        for r, r_a, eta in [(2.0, 1.0, 1.0), (50.0, 3.0, 1.0), (1.2, 1.0, 1.5)]:
            closed = eikonal_free(r, r_a, eta).value
            numeric = quadrature_eikonal(lambda rho: (eta * rho) ** 2 - r_a ** 2, r_a / eta, r)
            self.assertAlmostEqual(closed, numeric, delta=1e-10 * max(1.0, abs(closed)))

    def test_free_at_caustic(self):
        """Test that the eikonal vanishes at the caustic and grows like delta^1.5 next to it."""
        self.assertEqual(eikonal_free(1.0, 1.0).value, 0.0)
        delta = 1e-10
        near = eikonal_free(1.0 + delta, 1.0).value
        self.assertAlmostEqual(near / (math.sqrt(2.0) * 2.0 / 3.0 * delta ** 1.5), 1.0, places=6)

    def test_shadow_value(self):
        """Test |S| = phi - tanh(phi) at r = r_a sech(phi)."""
        r = 1.0 / math.cosh(1.0)
        result = eikonal_shadow(r, 1.0)
        self.assertEqual(result.branch, "shadow")
        self.assertEqual(result.value, 0.0)
        self.assertAlmostEqual(result.imag, 1.0 - math.tanh(1.0), places=14)

        # Below the caustic eikonal_free hands over to the shadow branch
        self.assertEqual(eikonal_free(r, 1.0), result)

    def test_shadow_matches_quadrature(self):
        """Test the shadow eikonal against the integral from the caustic inwards."""
        r = 0.3
        numeric = quadrature_eikonal(lambda rho: 1.0 - rho * rho, 1.0, r)
        self.assertAlmostEqual(eikonal_shadow(r, 1.0).imag, -numeric, places=10)

    def test_shadow_outside_caustic(self):
        """Test that the shadow branch is rejected beyond the caustic."""
        with self.assertRaises(DomainError):
            eikonal_shadow(2.0, 1.0)

    def test_radial_momentum(self):
        """Test dS/dr on both sides of the caustic."""
        self.assertAlmostEqual(radial_momentum(2.0, 1.0), math.sqrt(3.0) / 2.0, places=15)
        self.assertEqual(radial_momentum(0.5, 1.0), 0.0)
        with self.assertRaises(DomainError):
            radial_momentum(-1.0, 1.0)

    def test_free_increasing_and_convex(self):
        """Test that S grows and is strictly convex beyond the caustic for a constant index."""
        for eta in (1.0, 1.5):
            radii = np.linspace(1.01 / eta, 20.0, 400)
            values = np.array([eikonal_free(r, 1.0, eta).value for r in radii])
            self.assertTrue(np.all(np.diff(values) > 0), msg=f"eta = {eta}")
            self.assertTrue(np.all(np.diff(values, 2) > 0), msg=f"eta = {eta}")

    def test_radial_momentum_is_slope(self):
        """Test that a central difference of S reproduces radial_momentum."""
        h = 1e-5
        for r, eta in [(1.5, 1.0), (2.0, 1.0), (5.0, 1.0), (2.0, 1.5)]:
            slope = (eikonal_free(r + h, 1.0, eta).value - eikonal_free(r - h, 1.0, eta).value) / (2.0 * h)
            self.assertAlmostEqual(slope, radial_momentum(r, 1.0, eta), delta=1e-8)

    def test_branch_validation(self):
        """Test that an eikonal value cannot mix branches."""
        with self.assertRaises(DomainError):
            EikonalValue(r=1.0, r_a=1.0, value=1.0, imag=1.0)
        with self.assertRaises(DomainError):
            EikonalValue(r=1.0, r_a=1.0, value=1.0, branch="shadow")


class TestKeplerEikonal(unittest.TestCase):
    """Test cases for the Kepler medium eikonals."""

    def test_ellipse_half_action(self):
        """Test S(r_plus) = pi (R_s / 2 sqrt(A) - r_a)."""
        el = elements_from_conic(10.0, 0.5, 1.0)
        result = eikonal_kepler(el.r_plus, el)
        expected = math.pi * (el.R_s / (2.0 * math.sqrt(el.A)) - el.r_a)
        self.assertAlmostEqual(result.value, expected, places=12)
        self.assertAlmostEqual(eikonal_kepler(el.r_minus, el).value, 0.0, places=14)

    def test_ellipse_matches_quadrature(self):
        """Test the bound closed form inside the libration."""
        el = elements_from_conic(10.0, 0.5, 1.0)
        for r in (6.0, 10.0, 14.5):
            numeric = quadrature_eikonal(lambda rho: -el.A * rho ** 2 + el.R_s * rho - el.r_a ** 2,
                                         el.r_minus, r)
            self.assertAlmostEqual(eikonal_kepler(r, el).value, numeric, places=10)

    def test_hyperbola_matches_quadrature(self):
        """Test the unbound closed form beyond perihelion."""
        el = orbit_elements(-1.0, 1.0, 1.0)
        for r in (1.0, 3.0, 100.0):
            closed = eikonal_kepler(r, el).value
            numeric = quadrature_eikonal(lambda rho: rho ** 2 + rho - 1.0, el.r_minus, r)
            self.assertAlmostEqual(closed, numeric, delta=1e-10 * max(1.0, abs(closed)))

    def test_parabola_matches_quadrature(self):
        """Test the A = 0 closed form and its delegation from eikonal_kepler."""
        closed = eikonal_parabolic(5.0, 1.0, 2.0).value
        numeric = quadrature_eikonal(lambda rho: 2.0 * rho - 1.0, 0.5, 5.0)
        self.assertAlmostEqual(closed, numeric, places=11)
        self.assertAlmostEqual(eikonal_kepler(5.0, orbit_elements(0.0, 1.0, 2.0)).value, closed, places=15)

    def test_kepler_slope(self):
        """Test dS/dr = sqrt(-A + R_s / r - r_a^2 / r^2) by central differences on both conics."""
        h = 1e-5
        for el, radii in [(elements_from_conic(10.0, 0.5, 1.0), (6.0, 10.0, 14.0)),
                          (orbit_elements(-1.0, 1.0, 1.0), (1.0, 3.0, 50.0))]:
            for r in radii:
                slope = (eikonal_kepler(r + h, el).value - eikonal_kepler(r - h, el).value) / (2.0 * h)
                expected = math.sqrt(-el.A + el.R_s / r - el.r_a ** 2 / r ** 2)
                self.assertAlmostEqual(slope, expected, delta=1e-8)

    def test_kepler_convex_inside_semi_latus_rectum(self):
        """Test that the Kepler eikonal grows past perihelion and is convex only for r < q."""
        el = elements_from_conic(10.0, 0.5, 1.0)
        q = el.semi_latus_rectum
        inner = np.linspace(1.01 * el.r_minus, 0.97 * q, 50)
        outer = np.linspace(1.03 * q, 0.99 * el.r_plus, 50)
        inner_values = np.array([eikonal_kepler(r, el).value for r in inner])
        outer_values = np.array([eikonal_kepler(r, el).value for r in outer])
        self.assertTrue(np.all(np.diff(inner_values) > 0))
        self.assertTrue(np.all(np.diff(outer_values) > 0))
        self.assertTrue(np.all(np.diff(inner_values, 2) > 0))
        self.assertTrue(np.all(np.diff(outer_values, 2) < 0))

        hyperbola = orbit_elements(-1.0, 1.0, 1.0)
        radii = np.linspace(1.01 * hyperbola.r_minus, 100.0, 400)
        values = np.array([eikonal_kepler(r, hyperbola).value for r in radii])
        self.assertTrue(np.all(np.diff(values) > 0))

    def test_outside_orbit(self):
        """Test that radii outside the turning points are rejected."""
        el = elements_from_conic(10.0, 0.5, 1.0)
        with self.assertRaises(DomainError):
            eikonal_kepler(16.0, el)
        with self.assertRaises(DomainError):
            eikonal_kepler(4.0, el)
        with self.assertRaises(DomainError):
            eikonal_parabolic(0.1, 1.0, 2.0)


class TestQuadrupoleEikonal(unittest.TestCase):
    """Test cases for the quadrupole medium."""

    def test_caustic(self):
        """Test that the caustic solves the cubic and sits about R_s / 2 inside r_a."""
        r0 = quadrupole_caustic(1.0, 0.01)
        self.assertAlmostEqual(r0 ** 3 - r0 + 0.01, 0.0, places=12)
        self.assertAlmostEqual(r0, 1.0 - 0.0050375, delta=1e-5)

        with self.assertRaises(DomainError):
            quadrupole_caustic(1.0, 1.0)

    def test_reduces_to_free(self):
        """Test that R_s = 0 gives the free eikonal."""
        self.assertEqual(eikonal_quadrupole(2.0, 1.0, 0.0).value, eikonal_free(2.0, 1.0).value)

    def test_first_order_discrepancy(self):
        """Test S_Q - S = -(R_s / 2) sqrt(1 - r_a^2 / r^2) to first order in R_s."""
        r, r_a, R_s = 2.0, 1.0, 1e-6
        r0 = quadrupole_caustic(r_a, R_s)
        exact = quadrature_eikonal(lambda rho: rho ** 2 - r_a ** 2 + R_s * r_a ** 2 / rho, r0, r)
        ratio = (eikonal_quadrupole(r, r_a, R_s).value - exact) / R_s
        self.assertAlmostEqual(ratio, -0.5 * math.sqrt(1.0 - r_a ** 2 / r ** 2), delta=1e-3)

    def test_inside_caustic(self):
        """Test that radii inside the caustic are rejected."""
        with self.assertRaises(DomainError):
            eikonal_quadrupole(0.5, 1.0, 0.01)


class TestPerihelionEikonal(unittest.TestCase):
    """Test cases for the precessing medium."""

    def setUp(self):
        """Set up a mildly relativistic ellipse."""
        self.el = elements_from_conic(10.0, 0.5, 1e-3)

    def test_turning_points(self):
        """Test the sum and product of the cubic's roots."""
        A, r_a, R_s = self.el.A, self.el.r_a, self.el.R_s
        inner, perihelion, aphelion = perihelion_turning_points(A, r_a, R_s)
        self.assertAlmostEqual((inner + perihelion + aphelion) / (R_s / A), 1.0, places=10)
        self.assertAlmostEqual((inner * perihelion * aphelion) / (R_s * r_a ** 2 / A), 1.0, places=10)
        self.assertLess(perihelion, self.el.r_minus)
        self.assertGreater(aphelion, self.el.r_plus)

    def test_unbound_rejected(self):
        """Test that an unbound energy has no libration."""
        with self.assertRaises(DomainError):
            perihelion_turning_points(-1.0, 1.0, 1e-3)

    def test_half_action_shift(self):
        """Test that the R_s r_a^2 / r^3 term lengthens a half libration by pi R_s^2 / 4 r_a."""
        A, r_a, R_s = self.el.A, self.el.r_a, self.el.R_s
        _, perihelion, aphelion = perihelion_turning_points(A, r_a, R_s)
        shift = eikonal_perihelion(aphelion, A, r_a, R_s).value - eikonal_kepler(self.el.r_plus, self.el).value
        self.assertAlmostEqual(shift / (0.25 * math.pi * R_s ** 2 / r_a), 1.0, delta=1e-2)
        self.assertEqual(eikonal_perihelion(perihelion, A, r_a, R_s).value, 0.0)

    def test_expansion_terms(self):
        """Test the closed orbit and the first-order action."""
        terms = perihelion_expansion_terms(self.el)
        r_a, R_s = self.el.r_a, self.el.R_s
        self.assertAlmostEqual(terms.libration_angle, 2.0 * math.pi, places=8)
        self.assertAlmostEqual(terms.first_order_quadrature / terms.first_order_action, 1.0, places=10)
        self.assertAlmostEqual(terms.advance, 1.5 * math.pi * R_s ** 2 / r_a ** 2, places=15)

        with self.assertRaises(DomainError):
            perihelion_expansion_terms(orbit_elements(-1.0, 1.0, 1.0))


class TestTractrix(unittest.TestCase):
    """Test cases for the pseudosphere traced by the shadow eikonal."""

    def test_profile(self):
        """Test the cusp and a generic point of the meridian."""
        cusp = tractrix_profile(0.0, 2.0)
        self.assertEqual(cusp.g, 0.0)
        self.assertEqual(cusp.h, 2.0)

        point = tractrix_profile(1.0, 1.0)
        self.assertAlmostEqual(point.g, math.asinh(1.0) - 1.0 / math.sqrt(2.0), places=15)
        self.assertAlmostEqual(point.h, 1.0 / math.sqrt(2.0), places=15)

        with self.assertRaises(DomainError):
            tractrix_profile(-1.0)

    def test_tangent_length(self):
        """Test that the tangent segment to the axis has constant length r_a."""
        for s in (0.1, 1.0, 5.0):
            self.assertAlmostEqual(tractrix_tangent_length(s, 2.0), 2.0, places=12)
        with self.assertRaises(DomainError):
            tractrix_tangent_length(0.0)

    def test_curvature(self):
        """Test the constant negative curvature -1 / r_a^2."""
        for s in (0.5, 1.0, 3.0):
            self.assertAlmostEqual(surface_curvature(s, 2.0), -0.25, delta=1e-6)
        with self.assertRaises(DomainError):
            surface_curvature(1e-3)


if __name__ == "__main__":
    unittest.main()
