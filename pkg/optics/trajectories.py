"""
Conic rays, anomalies, turning points and first-integral diagnostics.

Polar angle phi increases along the direction of propagation. Sampled
paths use index-based central differences, so turning points (where
dr/dphi = 0) need no special treatment.
"""
import logging
from typing import Callable, Optional, Tuple, Union

import numpy as np

from optics.eikonal import perihelion_turning_points
from optics.medium import MediumModel, NewtonianMedium, PerihelionMedium, orbit_elements
from optics.models import OrbitElements, RayPath
from optics.utils import (
    DomainError,
    find_root,
    integrate_from_turning_point,
    integrate_libration,
    sign_change_brackets,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Hyperbolic and parabolic samples stop at this multiple of the perihelion distance
TRUNCATION_RATIO = 1e6


def conic_radius(phi: ArrayLike, el: OrbitElements) -> ArrayLike:
    """
    r = q / (1 + eps cos phi).

    Args:
        phi: True anomaly, measured from perihelion
        el: Orbit elements

    Returns:
        Radius at phi

    Raises:
        DomainError: At or beyond the asymptote of an open orbit
    """
    denominator = 1.0 + el.eccentricity * np.cos(phi)
    if np.any(denominator <= 0):
        raise DomainError(f"phi = {phi} at or beyond the asymptote of the {el.kind}", value=phi)
    return el.semi_latus_rectum / denominator


def asymptote_angle(el: OrbitElements) -> float:
    """True anomaly of the outgoing asymptote, arccos(-1/eps)."""
    if el.eccentricity <= 1.0:
        raise DomainError(f"a {el.kind} has no asymptote", value=el.eccentricity)
    return np.arccos(-1.0 / el.eccentricity)


def orbit_angle(r: float, r_a: float, eta: float = 1.0) -> float:
    """
    Swept angle from the caustic in a homogeneous medium.

    arccos(r_a / eta r) outside the caustic, arccosh(r_a / eta r) inside it.
    """
    if r <= 0 or r_a <= 0 or eta <= 0:
        raise DomainError("r, r_a and eta must be positive", value=r)
    x = eta * r
    if x >= r_a:
        return float(np.arctan2(np.sqrt((x - r_a) * (x + r_a)), r_a))
    return float(np.arccosh(r_a / x))


def straight_line_radius(phi: ArrayLike, r_a: float, eta: float = 1.0) -> ArrayLike:
    """The ray r = r_a / (eta sin phi) of a homogeneous medium."""
    sine = np.sin(phi)
    if np.any(sine <= 0):
        raise DomainError(f"straight line only covers 0 < phi < pi, got {phi}", value=phi)
    return r_a / (eta * sine)


def radial_velocity(r: float, el: OrbitElements, outbound: bool = True) -> float:
    """
    dr/dtau = +/- sqrt(-A r^2 + R_s r - r_a^2) / r.

    Args:
        r: Radius in the allowed region
        el: Orbit elements
        outbound: Sign of the result

    Returns:
        The radial velocity, zero at the turning points
    """
    if r <= 0:
        raise DomainError(f"radius must be positive, got {r}", value=r)
    radicand = -el.A * r * r + el.R_s * r - el.r_a ** 2
    scale = abs(el.A) * r * r + el.R_s * r + el.r_a ** 2
    if radicand < 0:
        if radicand < -1e-12 * scale:
            raise DomainError(f"r = {r} outside the allowed region of the {el.kind}", value=r)
        radicand = 0.0
    speed = np.sqrt(radicand) / r
    return speed if outbound else -speed


def anomaly_radius(u: ArrayLike, el: OrbitElements) -> ArrayLike:
    """
    Radius from the eccentric (or hyperbolic, or parabolic) anomaly.

    Ellipse r = a (1 - eps cos u); hyperbola r = a (eps cosh u - 1);
    parabola r = (q/2)(1 + u^2) with u = tan(phi/2).
    """
    if el.kind == "ellipse":
        return el.semi_axis * (1.0 - el.eccentricity * np.cos(u))
    if el.kind == "hyperbola":
        return el.semi_axis * (el.eccentricity * np.cosh(u) - 1.0)
    return 0.5 * el.semi_latus_rectum * (1.0 + np.square(u))


def anomaly_from_radius(r: float, el: OrbitElements, outbound: bool = True) -> float:
    """
    Inverse of anomaly_radius; outbound selects u >= 0.

    Args:
        r: Radius
        el: Orbit elements
        outbound: Branch, True after perihelion

    Returns:
        The anomaly
    """
    if r < el.r_minus * (1 - 1e-12) or (el.r_plus is not None and r > el.r_plus * (1 + 1e-12)):
        raise DomainError(f"r = {r} outside the range of the {el.kind}", value=r,
                          interval=(el.r_minus, el.r_plus or np.inf))
    sign = 1.0 if outbound else -1.0
    distance = max(r - el.r_minus, 0.0)
    if el.kind == "ellipse":
        if el.eccentricity == 0:
            return 0.0
        # arccos(1 - 2y) in half-angle form
        y = min(distance / (2.0 * el.semi_axis * el.eccentricity), 1.0)
        return sign * 2.0 * np.arcsin(np.sqrt(y))
    if el.kind == "hyperbola":
        w = distance / (el.semi_axis * el.eccentricity)
        return sign * np.log1p(w + np.sqrt(w * (w + 2.0)))
    return sign * np.sqrt(2.0 * distance / el.semi_latus_rectum)


def true_anomaly(u: ArrayLike, el: OrbitElements) -> ArrayLike:
    """Polar angle from perihelion for the anomaly u."""
    ecc = el.eccentricity
    if el.kind == "ellipse":
        return 2.0 * np.arctan2(np.sqrt(1.0 + ecc) * np.sin(u / 2.0), np.sqrt(1.0 - ecc) * np.cos(u / 2.0))
    if el.kind == "hyperbola":
        return 2.0 * np.arctan(np.sqrt((ecc + 1.0) / (ecc - 1.0)) * np.tanh(u / 2.0))
    return 2.0 * np.arctan(u)


def sample_conic(el: OrbitElements, samples: int = 1000,
                 anomaly_range: Optional[Tuple[float, float]] = None) -> RayPath:
    """
    Sample a conic uniformly in its anomaly.

    Ellipses default to one full revolution; hyperbolas and parabolas are
    truncated where r reaches TRUNCATION_RATIO times the perihelion distance.

    Args:
        el: Orbit elements
        samples: Number of samples
        anomaly_range: Optional (start, stop) anomaly

    Returns:
        The analytic path
    """
    if samples < 2:
        raise DomainError(f"need at least 2 samples, got {samples}", value=samples)
    if anomaly_range is None:
        if el.kind == "ellipse":
            anomaly_range = (-np.pi, np.pi)
        else:
            limit = anomaly_from_radius(TRUNCATION_RATIO * el.r_minus, el)
            anomaly_range = (-limit, limit)

    u = np.linspace(anomaly_range[0], anomaly_range[1], samples)
    return RayPath(r=anomaly_radius(u, el), phi=true_anomaly(u, el), kind="analytic")


def _index_derivatives(path: RayPath) -> Tuple[np.ndarray, np.ndarray]:
    return np.gradient(path.r, edge_order=2), np.gradient(path.phi, edge_order=2)


def angular_momentum_residual(path: RayPath, medium: MediumModel,
                              r_a: Optional[float] = None) -> float:
    """
    Largest relative deviation of eta r^2 dphi/ds from r_a over interior samples.

    Args:
        path: Sampled path with at least 3 samples
        medium: Medium the path runs through
        r_a: Expected constant, defaults to the mean over interior samples

    Returns:
        The residual
    """
    if len(path) < 3:
        raise DomainError("need at least 3 samples for a residual", value=len(path))
    dr, dphi = _index_derivatives(path)
    eta = medium.eta(path.r)
    momentum = (eta * path.r ** 2 * np.abs(dphi) / np.sqrt(dr ** 2 + (path.r * dphi) ** 2))[1:-1]
    reference = np.mean(momentum) if r_a is None else r_a
    return float(np.max(np.abs(momentum - reference)) / reference)


def energy_residual(path: RayPath, el: OrbitElements) -> float:
    """
    Largest deviation of rdot^2 + r^2 phidot^2 + 2U(r) from -A along a conic.

    rdot comes from the first integral (radial_velocity), phidot = r_a / r^2.
    The residual is relative to R_s / r_minus.
    """
    scale = el.R_s / el.r_minus
    residuals = []
    for r in path.r:
        rdot = radial_velocity(r, el)
        residuals.append(abs(rdot ** 2 + el.r_a ** 2 / r ** 2 - el.R_s / r + el.A))
    return float(max(residuals) / scale)


def _factored_radicand(medium: MediumModel, r_a: float) -> Tuple[float, float, Callable[[float], float]]:
    """Turning points and smooth factor c with eta^2 r^2 - r_a^2 = (r - r1)(r2 - r) c(r)."""
    if isinstance(medium, NewtonianMedium):
        el = orbit_elements(medium.A, r_a, medium.R_s)
        if not el.bound:
            raise DomainError("libration needs A > 0", value=medium.A)
        return el.r_minus, el.r_plus, lambda rho: medium.A
    if isinstance(medium, PerihelionMedium):
        if abs(r_a - medium.r_a) > 1e-12 * r_a:
            logger.warning("ray angular momentum differs from the medium's r_a")
        inner, perihelion, aphelion = perihelion_turning_points(medium.A, medium.r_a, medium.R_s)
        return perihelion, aphelion, lambda rho: medium.A * (rho - inner) / rho
    raise DomainError(f"no bound libration in a {medium.kind} medium")


def libration_angle(medium: MediumModel, r_a: float) -> float:
    """
    Angle swept over one libration, 2 * int r_a dr / (r sqrt(eta^2 r^2 - r_a^2)).

    2 pi for the Kepler medium; the excess over 2 pi is the perihelion
    advance for the precessing medium.

    Args:
        medium: Newtonian or perihelion medium with A > 0
        r_a: Angular momentum constant

    Returns:
        The swept angle in radians
    """
    lower, upper, factor = _factored_radicand(medium, r_a)
    angle = 2.0 * integrate_libration(lambda rho: r_a / (rho * np.sqrt(factor(rho))), lower, upper, -0.5)
    logger.debug(f"Libration angle in {medium.kind} medium: {angle!r}")
    return angle


def closest_approach(medium: MediumModel, r_a: float, r_far: float) -> float:
    """Outermost zero of eta^2 r^2 - r_a^2 below r_far."""
    def radicand(rho: float) -> float:
        return float(medium.eta_squared(rho)) * rho * rho - r_a * r_a

    if radicand(r_far) <= 0:
        raise DomainError(f"ray with r_a = {r_a} does not reach r = {r_far}", value=r_far)
    lower = max(medium.validity[0], r_far * 1e-12)
    brackets = sign_change_brackets(radicand, lower * (1 + 1e-9), r_far)
    if not brackets:
        raise DomainError(f"no turning point below r = {r_far}", value=r_far)
    return find_root(radicand, *brackets[-1])


def ray_endpoints(medium: MediumModel, r_a: float,
                  r_far: float) -> Tuple[Tuple[float, float], Tuple[float, float], float]:
    """
    Place two points at r_far on the exact ray of angular momentum r_a.

    The ray is symmetric about its closest approach at phi = 0; the angle
    swept from there to r_far comes from the first integral by quadrature.

    Args:
        medium: Medium with eta^2 > 0 at large r
        r_a: Angular momentum constant
        r_far: Radius of both endpoints

    Returns:
        ((r_far, -phi_far), (r_far, phi_far), closest approach)
    """
    r_min = closest_approach(medium, r_a, r_far)
    slope = float(medium.eta_squared_derivative(r_min)) * r_min ** 2 + 2.0 * r_min * float(medium.eta_squared(r_min))
    if slope <= 0:
        raise DomainError(f"turning point at r = {r_min} is not simple", value=r_min)

    def integrand(rho: float) -> float:
        radicand = float(medium.eta_squared(rho)) * rho * rho - r_a * r_a
        # linear model guards against rounding right at the turning point
        radicand = max(radicand, slope * (rho - r_min))
        return r_a / (rho * np.sqrt(radicand))

    phi_far = integrate_from_turning_point(integrand, r_min, r_far)
    return (r_far, -phi_far), (r_far, phi_far), r_min
