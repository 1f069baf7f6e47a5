"""
The three classic observables: radar echo delay, light deflection and
perihelion advance, plus the Mercury report and the two-effect radial
velocity split.

Lengths are in gravitational units; a delay is therefore an excess light
travel distance, and the CLI divides by c for seconds.
"""
import logging
from typing import List, Optional

import numpy as np

import config
from optics.eikonal import perihelion_expansion_terms
from optics.medium import elements_from_conic, orbit_elements
from optics.models import (
    DelayScenario, Deflection, MollerSplit, ObservableReport,
    OrbitElements, PerihelionAdvance, RadarDelay, UnitSystem
)
from optics.utils import DomainError, ConvergenceError, adaptive_quad, find_root

logger = logging.getLogger(__name__)

# Ratio R_s / r_a above which first-order results are flagged
WEAK_FIELD_LIMIT = 1e-2


def arcseconds(angle: float) -> float:
    """Convert radians to arcseconds."""
    return angle * config.ARCSEC_PER_RADIAN


def _check_weak_field(r_a: float, R_s: float) -> None:
    if R_s / r_a > WEAK_FIELD_LIMIT:
        logger.warning(f"R_s/r_a = {R_s / r_a:.3g} exceeds {WEAK_FIELD_LIMIT}, first-order result may be poor")


def radar_delay(s: DelayScenario) -> RadarDelay:
    """
    Excess travel of a radar echo passing a mass at impact parameter R.

    The one-way excess is R_s ln((x_V + sqrt(R^2 + x_V^2)) / (-x_E + sqrt(R^2 + x_E^2))),
    written here as R_s (asinh(x_V/R) + asinh(x_E/R)) which is the same
    quantity without the cancellation in the denominator.

    Args:
        s: Delay geometry

    Returns:
        One-way and round-trip excess plus the logarithmic approximation
    """
    if s.R > 1e-2 * min(s.x_E, s.x_V):
        logger.warning(f"R = {s.R:.3g} is not small against x_E, x_V; log approximation is poor")

    one_way = s.R_s * (np.arcsinh(s.x_V / s.R) + np.arcsinh(s.x_E / s.R))
    result = RadarDelay(
        one_way=one_way,
        round_trip=2.0 * one_way,
        round_trip_approximate=radar_delay_approximate(s)
    )
    logger.debug(f"Radar delay: one way {one_way:.6e}, round trip {result.round_trip:.6e}")
    return result


def radar_delay_approximate(s: DelayScenario) -> float:
    """Round-trip excess 2 R_s ln(4 x_E x_V / R^2), valid for R much smaller than x_E and x_V."""
    return 2.0 * s.R_s * np.log(4.0 * s.x_E * s.x_V / s.R ** 2)


def radar_delay_quadrature(s: DelayScenario) -> float:
    """
    One-way excess by quadrature of eta^2 - 1 = R_s / r along the straight chord.

    Args:
        s: Delay geometry

    Returns:
        The one-way excess travel
    """
    def excess(x: float) -> float:
        return s.R_s / np.hypot(s.R, x)

    # the integrand peaks at the closest approach, split there
    return (adaptive_quad(excess, -s.x_E, 0.0, points=[-s.R])
            + adaptive_quad(excess, 0.0, s.x_V, points=[s.R]))


def deflection_newtonian(r_a: float, R_s: float) -> Deflection:
    """
    Bending of a ray that only feels the Newtonian potential.

    With A = -1 the ray is a hyperbola of eccentricity 2 r_a / R_s, and the
    asymptotes swing through pi + 2 arcsin(R_s / 2 r_a).

    Args:
        r_a: Impact parameter
        R_s: Schwarzschild radius

    Returns:
        The total swing, the deflection and its small-angle value R_s / r_a

    Raises:
        DomainError: If R_s >= 2 r_a or an input is not positive
    """
    if r_a <= 0 or R_s < 0:
        raise DomainError("r_a must be positive and R_s non-negative")
    if R_s >= 2.0 * r_a:
        raise DomainError(f"R_s = {R_s} >= 2 r_a = {2.0 * r_a}, no hyperbola", value=R_s)

    bend = 2.0 * np.arcsin(R_s / (2.0 * r_a))
    return Deflection(
        model="newtonian",
        total_swing=np.pi + bend,
        deflection=bend,
        small_angle=R_s / r_a
    )


def deflection_quadrupole(r_a: float, R_s: float) -> Deflection:
    """
    Bending of a ray in the quadrupole medium eta^2 = 1 + R_s r_a^2 / r^3.

    The swept angle is 2 * integral over sigma in [0, 1] of
    (1 + R_s sigma / r_a) / sqrt(1 - sigma^2), evaluated both by quadrature
    and in closed form pi + 2 R_s / r_a.

    Args:
        r_a: Impact parameter
        R_s: Schwarzschild radius

    Returns:
        The closed-form swing, the deflection 2 R_s / r_a and the quadrature swing
    """
    if r_a <= 0 or R_s < 0:
        raise DomainError("r_a must be positive and R_s non-negative")
    _check_weak_field(r_a, R_s)

    ratio = R_s / r_a
    quadrature = 2.0 * adaptive_quad(lambda sigma: (1.0 + ratio * sigma) / np.sqrt(1.0 + sigma),
                                     0.0, 1.0, weight="alg", wvar=(0.0, -0.5))
    bend = 2.0 * ratio
    return Deflection(
        model="quadrupole",
        total_swing=np.pi + bend,
        deflection=bend,
        small_angle=bend,
        quadrature_swing=quadrature
    )


def cross_section(theta: float, R_s: float) -> float:
    """
    Differential cross section 2 pi r_a |dr_a/dtheta| = 8 pi R_s^2 / theta^3.

    Args:
        theta: Deflection angle in radians
        R_s: Schwarzschild radius

    Returns:
        The cross section per unit angle
    """
    if theta <= 0:
        raise DomainError(f"deflection angle must be positive, got {theta}", value=theta)
    if R_s <= 0:
        raise DomainError("R_s must be positive", value=R_s)
    return 8.0 * np.pi * R_s ** 2 / theta ** 3


def deflection_for_cross_section(theta: float, R_s: float) -> float:
    """
    Impact parameter whose quadrupole deflection is theta, found by root search.

    Args:
        theta: Deflection angle in radians
        R_s: Schwarzschild radius

    Returns:
        r_a with deflection_quadrupole(r_a, R_s).deflection == theta
    """
    if theta <= 0 or R_s <= 0:
        raise DomainError("theta and R_s must be positive")
    guess = 2.0 * R_s / theta
    return find_root(lambda r_a: deflection_quadrupole(r_a, R_s).deflection - theta,
                     0.5 * guess, 2.0 * guess)


def perihelion_advance(el: OrbitElements) -> PerihelionAdvance:
    """
    First-order advance of the perihelion per revolution.

    Args:
        el: Bound orbit elements

    Returns:
        (3/2) pi R_s^2 / r_a^2 and 3 pi R_s / (a (1 - e^2)), which must agree

    Raises:
        DomainError: If the orbit is not bound
        ConvergenceError: If the two forms disagree beyond rounding
    """
    if not el.bound or el.eccentricity >= 1.0:
        raise DomainError(f"perihelion advance needs a bound orbit, A = {el.A}", value=el.A)

    caustic_route = 1.5 * np.pi * el.R_s ** 2 / el.r_a ** 2
    conic_route = 3.0 * np.pi * el.R_s / (el.semi_axis * (1.0 - el.eccentricity ** 2))
    gap = abs(caustic_route - conic_route)
    if gap > 1e-12 * max(abs(caustic_route), np.finfo(float).tiny):
        raise ConvergenceError(f"advance routes disagree: {caustic_route!r} vs {conic_route!r}",
                               residual=gap)
    return PerihelionAdvance(angle=caustic_route, caustic_route=caustic_route, conic_route=conic_route)


def perihelion_advance_quadrature(el: OrbitElements, step: float = 1e-4) -> float:
    """
    Advance as -d/dr_a of the first-order libration action, by quadrature.

    The action is evaluated on neighbouring orbits of the same energy and
    differenced centrally.

    Args:
        el: Bound orbit elements
        step: Relative change of r_a used for the derivative

    Returns:
        The advance per revolution in radians
    """
    if not el.bound:
        raise DomainError("perihelion advance needs a bound orbit", value=el.A)

    h = step * el.r_a

    def first_order_action(r_a: float) -> float:
        return perihelion_expansion_terms(orbit_elements(el.A, r_a, el.R_s)).first_order_quadrature

    return -(first_order_action(el.r_a + h) - first_order_action(el.r_a - h)) / (2.0 * h)


def mercury_report(units: Optional[UnitSystem] = None) -> List[ObservableReport]:
    """
    Recompute the quoted Mercury numbers from the standard orbital elements.

    r_a follows from q = a (1 - e^2) = 2 r_a^2 / R_s. The mean motion is
    r_a c / (a b) with b = r_a / sqrt(A) at the quoted energy constant.

    Args:
        units: Unit system for the reported rates, SI by default

    Returns:
        Reports for A, the mean motion, the period, the advance and the precession rate
    """
    units = units or UnitSystem("SI")
    a = config.MERCURY_SEMI_MAJOR_AXIS
    ecc = config.MERCURY_ECCENTRICITY
    R_s = config.SOLAR_SCHWARZSCHILD_RADIUS
    A_quoted = config.MERCURY_ENERGY_CONSTANT

    el = elements_from_conic(a, ecc, R_s)
    inputs = {'a': a, 'eccentricity': ecc, 'R_s': R_s, 'A_quoted': A_quoted}

    minor = el.r_a / np.sqrt(A_quoted)
    mean_motion = units.to_si(el.r_a / (a * minor), "frequency")
    period_days = 2.0 * np.pi / mean_motion / config.SECONDS_PER_DAY
    advance = perihelion_advance(el).angle
    printed_mean_motion = units.to_si(2.0 * A_quoted ** 1.5 / R_s, "frequency")

    reports = [
        ObservableReport("energy_constant", el.A, "1", "exact", inputs,
                         reference=A_quoted, tolerance=0.02),
        ObservableReport("angular_momentum_constant", el.r_a, "m", "exact", inputs),
        ObservableReport("minor_axis_quoted_A", minor, "m", "exact", inputs),
        ObservableReport("mean_motion", mean_motion, "1/s", "exact", inputs,
                         reference=config.QUOTED_MEAN_MOTION, tolerance=0.01),
        ObservableReport("mean_motion_from_A", printed_mean_motion, "1/s", "approximate", inputs),
        ObservableReport("period", period_days, "d", "exact", inputs,
                         reference=config.QUOTED_PERIOD_DAYS, tolerance=0.01),
        ObservableReport("perihelion_advance", arcseconds(advance), "arcsec", "approximate", inputs,
                         reference=config.QUOTED_PERIHELION_ADVANCE, tolerance=0.01),
        ObservableReport("precession_rate", mean_motion * advance, "1/s", "approximate", inputs,
                         reference=config.QUOTED_PRECESSION_RATE, tolerance=0.02),
    ]
    for report in reports:
        logger.debug(f"Mercury {report.name} = {report.value:.6e} {report.units}")
    return reports


def _radial_speed(radicand: float, label: str, r: float) -> float:
    if radicand < 0:
        raise DomainError(f"{label} radicand is negative at r = {r}", value=r)
    return float(np.sqrt(radicand))


def moller_split(r: float, r_a: float, R_s: float, verbatim: bool = True) -> MollerSplit:
    """
    Radial velocities of the split of light bending into a time and a space effect.

    v1 = sqrt(1 / (1 - R_s/r) - r_a^2/r^2). The second velocity is, as
    printed, sqrt(1 - R_s/r - r_a^2/r + R_s r_a^2/r^3); its r_a^2/r term
    is not dimensionless, so the r_a^2/r^2 variant is always returned too.

    Args:
        r: Radius
        r_a: Impact parameter
        R_s: Schwarzschild radius
        verbatim: Report the printed v2 (True) or the corrected one

    Returns:
        Both velocities, the corrected v2 and the Kepler radial velocity with A = -1
    """
    if r <= 0 or r_a < 0 or R_s < 0:
        raise DomainError("r must be positive, r_a and R_s non-negative")
    if r <= R_s:
        raise DomainError(f"r = {r} lies inside R_s = {R_s}", value=r)

    v1 = _radial_speed(1.0 / (1.0 - R_s / r) - r_a ** 2 / r ** 2, "v1", r)
    corrected = _radial_speed(1.0 - R_s / r - r_a ** 2 / r ** 2 + R_s * r_a ** 2 / r ** 3,
                              "corrected v2", r)
    if verbatim:
        logger.warning("v2 as printed carries a dimensionally inconsistent r_a^2/r term")
        v2 = _radial_speed(1.0 - R_s / r - r_a ** 2 / r + R_s * r_a ** 2 / r ** 3, "v2", r)
    else:
        v2 = corrected
    kepler = _radial_speed(1.0 + R_s / r - r_a ** 2 / r ** 2, "Kepler", r)

    return MollerSplit(r=r, v1=v1, v2=v2, v2_corrected=corrected, kepler=kepler, verbatim=verbatim)
