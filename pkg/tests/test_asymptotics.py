"""
Unit tests for WKB waves, Hankel saddle points and the reference Bessel function.
"""
import math
import os
import sys
import unittest

import numpy as np
from scipy import special

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from optics.asymptotics import (
    bessel_zero, bessel_zeros_wkb, caustic_phase_shift, debye_error_table, debye_phase,
    geometric_divergence, hankel_numeric, hankel_saddle, hankel_saddle_leading,
    quadrupole_amplitude, reference_bessel_j, shadow_amplitude, wkb_bessel
)
from optics.eikonal import eikonal_free
from optics.medium import elements_from_conic, orbit_elements
from optics.trajectories import conic_radius
from optics.utils import DomainError


def _half_order(x):
    """J_{1/2}(x) in closed form."""
    return math.sqrt(2.0 / (math.pi * x)) * math.sin(x)


def _three_halves_order(x):
    """J_{3/2}(x) in closed form."""
    return math.sqrt(2.0 / (math.pi * x)) * (math.sin(x) / x - math.cos(x))


class TestReferenceBessel(unittest.TestCase):
    """Test cases for the reference J_nu."""

    def test_integer_orders(self):
        """Test tabulated values on both sides of the series/integral switch."""
        self.assertAlmostEqual(reference_bessel_j(0, 1.0), 0.7651976865579666, places=12)
        self.assertAlmostEqual(reference_bessel_j(1, 1.0), 0.4400505857449335, places=12)
        self.assertAlmostEqual(reference_bessel_j(0, 20.0), 0.1670246643405831, places=11)

    def test_half_integer_orders(self):
        """Test the spherical Bessel closed forms, which exercise the sin(nu pi) term."""
        for x in (2.0, 9.5, 30.0, 250.0):
            self.assertAlmostEqual(reference_bessel_j(0.5, x), _half_order(x), places=11)
            self.assertAlmostEqual(reference_bessel_j(1.5, x), _three_halves_order(x), places=11)

    def test_large_order(self):
        """Test agreement with scipy for orders where the series needs extended precision."""
        for nu, x in [(50.0, 30.0), (50.0, 80.0), (200.0, 150.0)]:
            self.assertAlmostEqual(reference_bessel_j(nu, x), float(special.jv(nu, x)), places=10)

    def test_origin_and_domain(self):
        """Test J_nu(0) and the desk-scale limits."""
        self.assertEqual(reference_bessel_j(0, 0.0), 1.0)
        self.assertEqual(reference_bessel_j(2.5, 0.0), 0.0)
        with self.assertRaises(DomainError):
            reference_bessel_j(600.0, 1.0)
        with self.assertRaises(DomainError):
            reference_bessel_j(1.0, -1.0)


class TestDebyeWaves(unittest.TestCase):
    """Test cases for WKB waves outside and inside the caustic."""

    def test_wkb_bessel(self):
        """Test that the leading Debye form is close to J_nu well outside the caustic."""
        nu, x = 10.0, 100.0
        envelope = math.sqrt(2.0 / math.pi) / math.sqrt(math.sqrt(x * x - nu * nu))
        self.assertLess(abs(wkb_bessel(nu, x) - reference_bessel_j(nu, x)), 1e-2 * envelope)
        with self.assertRaises(DomainError):
            wkb_bessel(10.0, 5.0)

    def test_debye_phase_matches_wkb_bessel(self):
        """Test that the outgoing wave with theta = -pi/4 is the Debye form of J."""
        kappa, r = 20.0, 2.5
        wave = debye_phase(kappa, r, 1.0)
        self.assertEqual(wave.direction, "outgoing")
        value = math.sqrt(2.0 / math.pi) * wave.amplitude * math.cos(wave.phase)
        self.assertAlmostEqual(value, wkb_bessel(kappa, kappa * r), places=12)

        incoming = debye_phase(kappa, r, 1.0, direction="incoming")
        self.assertEqual(incoming.phase, -wave.phase)
        self.assertEqual(incoming.amplitude, wave.amplitude)

    def test_matching_constant(self):
        """Test that only -pi/4 modulo pi is accepted as a matching constant."""
        debye_phase(5.0, 2.0, 1.0, theta=3.0 * math.pi / 4.0)
        with self.assertRaises(DomainError):
            debye_phase(5.0, 2.0, 1.0, theta=0.0)
        with self.assertRaises(DomainError):
            debye_phase(5.0, 0.5, 1.0)

    def test_shadow_growing_term_vanishes(self):
        """Test that theta = -pi/4 leaves only the decaying shadow solution."""
        shadow = shadow_amplitude(20.0, 0.5, 1.0)
        self.assertEqual(shadow.growing_coefficient, 0.0)
        self.assertEqual(shadow.growing, 0.0)
        self.assertEqual(shadow.decaying_coefficient, 0.5)

        mismatched = shadow_amplitude(20.0, 0.5, 1.0, theta=0.0)
        self.assertAlmostEqual(mismatched.growing_coefficient, 0.5 * math.cos(math.pi / 4.0), places=15)
        self.assertGreater(mismatched.growing, mismatched.decaying)

    def test_shadow_matches_bessel(self):
        """Test the decaying solution against J_nu inside the caustic."""
        kappa, r = 50.0, 1.0 / math.cosh(1.0)
        shadow = shadow_amplitude(kappa, r, 1.0)
        self.assertAlmostEqual(shadow.exponent, kappa * (1.0 - math.tanh(1.0)), places=10)
        exact = reference_bessel_j(kappa, kappa * r)
        self.assertAlmostEqual(math.sqrt(2.0 / math.pi) * shadow.decaying / exact, 1.0, delta=2e-2)

        with self.assertRaises(DomainError):
            shadow_amplitude(kappa, 2.0, 1.0)

    def test_error_table(self):
        """Test the envelope-relative Debye error at kappa = 50."""
        rows = debye_error_table(50.0, 1.0, np.linspace(1.5, 3.0, 10))
        self.assertEqual(len(rows), 10)
        self.assertEqual(set(rows[0]), {'r', 'J_exact', 'WKB', 'abs_err', 'envelope', 'rel_err'})
        for row in rows:
            self.assertLess(row['rel_err'], 1e-2)
            self.assertAlmostEqual(row['abs_err'], abs(row['WKB'] - row['J_exact']), places=15)

    def test_error_decreases_with_kappa(self):
        """Test that the Debye form improves as the wave number grows."""
        radii = np.linspace(2.0, 3.0, 20)
        worst = [max(row['rel_err'] for row in debye_error_table(kappa, 1.0, radii)) for kappa in (25.0, 100.0)]
        self.assertLess(worst[1], worst[0])


class TestCaustics(unittest.TestCase):
    """Test cases for the phase jump and zeros."""

    def test_caustic_phase_shift(self):
        """Test the pi/4 offset of J against kappa S, and the pi/2 jump."""
        shift = caustic_phase_shift(50.0, samples=40)
        self.assertAlmostEqual(shift.offset, math.pi / 4.0, delta=2.5e-2)
        self.assertAlmostEqual(shift.jump, 2.0 * shift.offset, places=15)
        with self.assertRaises(DomainError):
            caustic_phase_shift(0.5)

    def test_wkb_zeros(self):
        """Test that zeros of the Debye wave land next to zeros of J."""
        kappa = 20.0
        zeros = bessel_zeros_wkb(kappa, 1.0, 3)
        self.assertEqual(len(zeros), 3)
        self.assertTrue(all(b > a for a, b in zip(zeros, zeros[1:])))
        for r in zeros:
            x = bessel_zero(kappa, kappa * r)
            self.assertAlmostEqual(abs(reference_bessel_j(kappa, x)), 0.0, places=10)
            self.assertAlmostEqual(x, kappa * r, delta=5e-2)

        with self.assertRaises(DomainError):
            bessel_zeros_wkb(kappa, 1.0, 0)


class TestHankelSaddle(unittest.TestCase):
    """Test cases for the steepest-descent evaluation of Hankel functions."""

    def setUp(self):
        """Set up the A = -1 hyperbola."""
        self.el = orbit_elements(-1.0, 1.0, 1.0)

    def test_saddle_on_conic(self):
        """Test that the real saddle is the polar angle of the conic."""
        saddle = hankel_saddle(10.0, 1.0, self.el)
        self.assertEqual(saddle.branch, "oscillatory")
        self.assertAlmostEqual(float(conic_radius(saddle.phi_plus.real, self.el)), 1.0, places=12)
        self.assertAlmostEqual(saddle.order, 10.0, places=12)

    def test_shadow_saddle(self):
        """Test that W'(phi) vanishes at the complex saddle inside perihelion."""
        r = 0.3
        saddle = hankel_saddle(10.0, r, self.el)
        self.assertEqual(saddle.branch, "shadow")
        stretch, offset = self.el.eccentricity * r, self.el.semi_latus_rectum - r
        self.assertLess(abs(stretch * np.cos(saddle.phi_plus) - offset), 1e-12)

    def test_coalescence(self):
        """Test that the caustic itself is rejected."""
        with self.assertRaises(DomainError):
            hankel_saddle(10.0, self.el.r_minus, self.el)

    def test_numeric_matches_scipy(self):
        """Test the contour quadrature on both branches and for a negative order."""
        cases = [(10.0, 1.0, self.el), (10.0, 0.3, self.el), (1.0, 20.0, elements_from_conic(10.0, 0.5, 1.0))]
        for kappa, r, el in cases:
            saddle = hankel_saddle(kappa, r, el)
            for j, reference in ((1, special.hankel1), (2, special.hankel2)):
                expected = complex(reference(saddle.order, saddle.argument))
                value = hankel_numeric(kappa, r, el, j=j)
                self.assertLess(abs(value - expected), 1e-6 * abs(expected))

    def test_leading_order(self):
        """Test the leading saddle-point value at large kappa."""
        for r in (1.0, 0.3):
            saddle = hankel_saddle(50.0, r, self.el)
            expected = complex(special.hankel1(saddle.order, saddle.argument))
            self.assertLess(abs(hankel_saddle_leading(50.0, r, self.el) - expected), 2e-2 * abs(expected))

    def test_leading_order_error_falls_like_inverse_kappa(self):
        """Test that the leading saddle value loses accuracy in proportion to 1/kappa."""
        errors = []
        for kappa in (25.0, 50.0, 100.0):
            saddle = hankel_saddle(kappa, 1.0, self.el)
            expected = complex(special.hankel1(saddle.order, saddle.argument))
            errors.append(abs(hankel_saddle_leading(kappa, 1.0, self.el) - expected) / abs(expected))
        self.assertLess(errors[1], errors[0])
        self.assertLess(errors[2], errors[1])
        self.assertAlmostEqual(errors[0] / errors[2], 4.0, delta=0.3)

    def test_shadow_growth_rate(self):
        """Test that log |H| between two shadow radii changes by kappa times the change in W."""
        kappa, inner, outer = 20.0, 0.3, 0.4
        logs, saddles = [], []
        for r in (inner, outer):
            saddle = hankel_saddle(kappa, r, self.el)
            self.assertEqual(saddle.branch, "shadow")
            saddles.append(saddle)
            logs.append(math.log(abs(complex(special.hankel1(saddle.order, saddle.argument)))))

        growth = kappa * (saddles[0].W_value - saddles[1].W_value)
        prefactor = 0.5 * math.log(abs(saddles[1].second_derivative) / abs(saddles[0].second_derivative))
        self.assertGreater(growth, 5.0)
        self.assertAlmostEqual(logs[0] - logs[1], growth + prefactor, delta=2e-2)

    def test_large_eccentricity_limit(self):
        """Test that W at the real saddle, scaled by r_a / q, tends to the free eikonal as eps grows."""
        errors = []
        for eps in (1e3, 1e5):
            el = orbit_elements(-1.0, 1.0, 2.0 / math.sqrt(eps ** 2 - 1.0))
            self.assertAlmostEqual(el.eccentricity / eps, 1.0, places=9)
            worst = 0.0
            for r in (2.0, 3.0):
                saddle = hankel_saddle(1.0, r, el)
                self.assertEqual(saddle.branch, "oscillatory")
                free = eikonal_free(r, el.r_a).value
                worst = max(worst, abs(saddle.W_value * el.r_a / el.semi_latus_rectum - free) / free)
            errors.append(worst)
        self.assertLess(errors[1], 1e-4)
        self.assertLess(errors[1], errors[0])

    def test_kind_validation(self):
        """Test that only Hankel kinds 1 and 2 exist."""
        with self.assertRaises(DomainError):
            hankel_numeric(10.0, 1.0, self.el, j=3)
        with self.assertRaises(DomainError):
            hankel_saddle_leading(10.0, 1.0, self.el, j=0)


class TestQuadrupoleAmplitude(unittest.TestCase):
    """Test cases for the quadrupole wave amplitude."""

    def test_amplitude(self):
        """Test the amplitude far out and at a generic radius."""
        spread = 1.0 - 0.25 * (1.0 - 0.01 / 2.0)
        self.assertAlmostEqual(quadrupole_amplitude(2.0, 1.0, 0.01), spread ** -0.25, places=14)
        self.assertAlmostEqual(quadrupole_amplitude(1e6, 1.0, 0.01), 1.0, places=10)
        self.assertAlmostEqual(geometric_divergence(2.0, 1.0, 0.01, 2.0), 4.0 * spread ** -0.5, places=13)

    def test_inside_caustic(self):
        """Test that the amplitude is undefined inside the caustic."""
        with self.assertRaises(DomainError):
            quadrupole_amplitude(0.9, 1.0, 0.01)


if __name__ == "__main__":
    unittest.main()
