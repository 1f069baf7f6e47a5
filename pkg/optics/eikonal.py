"""
Closed-form eikonals and the quadrature oracle they are checked against.

Every eikonal is normalised to 0 at its inner turning point (the caustic
for the free case). Arc-cosine terms are evaluated in half-angle or
arctangent form so the values stay accurate next to turning points.
"""
import logging
from typing import Callable, Tuple

import numpy as np

from optics.models import EikonalValue, OrbitElements, PerihelionTerms, TractrixPoint
from optics.utils import (
    ConvergenceError,
    DomainError,
    find_root,
    integrate_from_turning_point,
    integrate_libration,
)

logger = logging.getLogger(__name__)

# Relative distance from the caustic below which the Taylor forms are used
_CAUSTIC_BAND = 1e-8
# Relative slack accepted on turning-point bounds
_SLACK = 1e-12


def _check_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value}", value=value)


def _half_angle_arccos(y: float) -> float:
    """arccos(1 - 2y), accurate for small y."""
    return 2.0 * np.arcsin(np.sqrt(min(max(y, 0.0), 1.0)))


def radial_momentum(r: float, r_a: float, eta: float = 1.0) -> float:
    """
    dS/dr = sqrt(eta^2 r^2 - r_a^2) / r, zero in the shadow.

    Args:
        r: Radius
        r_a: Caustic radius
        eta: Constant refractive index

    Returns:
        The radial component of the eikonal gradient
    """
    _check_positive(r=r, r_a=r_a, eta=eta)
    x = eta * r
    return np.sqrt(max((x - r_a) * (x + r_a), 0.0)) / r


def quadrature_eikonal(radicand: Callable[[float], float], turning: float, r: float) -> float:
    """
    Integrate sqrt(radicand(rho)) / rho from a turning point to r.

    This is the reference every closed form is compared against.

    Args:
        radicand: eta^2(rho) rho^2 - r_a^2, or its shadow counterpart
        turning: Zero of the radicand the integral starts from
        r: End point

    Returns:
        The integral, negative when r < turning
    """
    def integrand(rho: float) -> float:
        return np.sqrt(max(radicand(rho), 0.0)) / rho

    return integrate_from_turning_point(integrand, turning, r)


def eikonal_free(r: float, r_a: float, eta: float = 1.0) -> EikonalValue:
    """
    Eikonal of a homogeneous medium of index eta.

    S = sqrt((eta r)^2 - r_a^2) - r_a arccos(r_a / eta r) for eta r >= r_a;
    below the caustic the shadow branch is returned.

    Args:
        r: Radius
        r_a: Caustic radius
        eta: Refractive index

    Returns:
        The eikonal value
    """
    _check_positive(r=r, r_a=r_a, eta=eta)
    x = eta * r
    if x < r_a:
        return eikonal_shadow(r, r_a, eta)

    delta = x - r_a
    if delta < _CAUSTIC_BAND * r_a:
        value = np.sqrt(2.0 / r_a) * (2.0 / 3.0) * delta ** 1.5 * (1.0 - 0.45 * delta / r_a)
    else:
        radical = np.sqrt(delta * (x + r_a))
        value = radical - r_a * np.arctan2(radical, r_a)
    return EikonalValue(r=r, r_a=r_a, value=value, interval=(r_a / eta, np.inf))


def eikonal_shadow(r: float, r_a: float, eta: float = 1.0) -> EikonalValue:
    """
    Imaginary eikonal inside the caustic.

    |S| = r_a arccosh(r_a / eta r) - sqrt(r_a^2 - (eta r)^2), which equals
    r_a (phi - tanh phi) with eta r = r_a sech phi.

    Args:
        r: Radius
        r_a: Caustic radius
        eta: Refractive index

    Returns:
        The eikonal value on the shadow branch
    """
    _check_positive(r=r, r_a=r_a, eta=eta)
    x = eta * r
    if x > r_a * (1.0 + _SLACK):
        raise DomainError(f"eta r = {x} lies outside the caustic r_a = {r_a}", value=r,
                          interval=(0.0, r_a / eta))

    delta = max(r_a - x, 0.0)
    if delta < _CAUSTIC_BAND * r_a:
        imag = np.sqrt(2.0 / r_a) * (2.0 / 3.0) * delta ** 1.5 * (1.0 + 0.45 * delta / r_a)
    else:
        radical = np.sqrt(delta * (r_a + x))
        imag = r_a * np.log((r_a + radical) / x) - radical
    return EikonalValue(r=r, r_a=r_a, value=0.0, imag=imag, branch="shadow",
                        interval=(0.0, r_a / eta))


def _kepler_radicand(rho: float, el: OrbitElements) -> float:
    """-A rho^2 + R_s rho - r_a^2 in factored form."""
    if el.A > 0:
        return el.A * (rho - el.r_minus) * (el.r_plus - rho)
    if el.A < 0:
        return -el.A * (rho - el.r_minus) * (rho + el.semi_axis * (el.eccentricity + 1.0))
    return el.R_s * (rho - el.r_minus)


def eikonal_kepler(r: float, el: OrbitElements) -> EikonalValue:
    """
    Eikonal of the Kepler medium eta^2 = -A + R_s / r.

    Evaluates the radical, the caustic arc term and the gravitational
    term; A = 0 is delegated to eikonal_parabolic.

    Args:
        r: Radius inside the libration (A > 0) or beyond perihelion (A < 0)
        el: Orbit elements

    Returns:
        The eikonal value, 0 at the inner turning point
    """
    if el.A == 0:
        return eikonal_parabolic(r, el.r_a, el.R_s)

    upper = el.r_plus if el.A > 0 else np.inf
    if not (el.r_minus * (1 - _SLACK) <= r <= upper * (1 + _SLACK)):
        raise DomainError(f"r = {r} outside the allowed range [{el.r_minus}, {upper}]",
                          value=r, interval=(el.r_minus, upper))
    interval = (el.r_minus, upper)

    ecc, a = el.eccentricity, el.semi_axis
    if ecc == 0.0:
        if abs(r - a) > _SLACK * a:
            raise DomainError(f"circular orbit only reaches r = {a}", value=r, interval=(a, a))
        return EikonalValue(r=r, r_a=el.r_a, value=0.0, interval=interval)

    radical = np.sqrt(max(_kepler_radicand(r, el), 0.0))
    distance = max(r - el.r_minus, 0.0)
    caustic_term = el.r_a * _half_angle_arccos((1.0 + ecc) * distance / (2.0 * ecc * r))

    if el.A > 0:
        gravity_term = el.R_s / (2.0 * np.sqrt(el.A)) * _half_angle_arccos(distance / (2.0 * a * ecc))
    else:
        w = distance / (a * ecc)
        gravity_term = el.R_s / (2.0 * np.sqrt(-el.A)) * np.log1p(w + np.sqrt(w * (w + 2.0)))

    return EikonalValue(r=r, r_a=el.r_a, value=radical - caustic_term + gravity_term,
                        interval=interval)


def eikonal_parabolic(r: float, r_a: float, R_s: float) -> EikonalValue:
    """
    Eikonal for A = 0: 2 sqrt(R_s r - r_a^2) - 2 r_a arccos(r_a / sqrt(R_s r)).

    Args:
        r: Radius, at least r_a^2 / R_s
        r_a: Angular momentum constant
        R_s: Schwarzschild radius

    Returns:
        The eikonal value, equal to 2 r_a (tan phi - phi)
    """
    _check_positive(r=r, r_a=r_a, R_s=R_s)
    perihelion = r_a ** 2 / R_s
    if r < perihelion * (1 - _SLACK):
        raise DomainError(f"R_s r < r_a^2 at r = {r}", value=r, interval=(perihelion, np.inf))

    radical = np.sqrt(max(R_s * (r - perihelion), 0.0))
    value = 2.0 * radical - 2.0 * r_a * np.arctan2(radical, r_a)
    return EikonalValue(r=r, r_a=r_a, value=value, interval=(perihelion, np.inf))


def quadrupole_caustic(r_a: float, R_s: float) -> float:
    """
    Caustic radius r0 < r_a of the quadrupole wave, root of r^3 - r_a^2 r + r_a^2 R_s.

    Args:
        r_a: Impact parameter
        R_s: Schwarzschild radius

    Returns:
        The caustic radius
    """
    _check_positive(r_a=r_a, R_s=R_s)

    def cubic(r: float) -> float:
        return r * (r - r_a) * (r + r_a) + r_a ** 2 * R_s

    lower = r_a / np.sqrt(3.0)
    if cubic(lower) >= 0:
        raise DomainError(f"no caustic for R_s/r_a = {R_s / r_a:.3g}", value=R_s)
    root = find_root(cubic, lower, r_a)
    if not root < r_a:
        raise ConvergenceError(f"caustic {root} not inside r_a = {r_a}")
    return root


def eikonal_quadrupole(r: float, r_a: float, R_s: float) -> EikonalValue:
    """
    First-order eikonal of the quadrupole medium.

    S_Q = sqrt(r^2 - r_a^2 (1 - R_s/r)) - r_a arccos((r_a/r) sqrt(1 - R_s/r)).
    For R_s = 0 this is the free eikonal with eta = 1.

    Args:
        r: Radius beyond the caustic
        r_a: Impact parameter
        R_s: Schwarzschild radius, >= 0

    Returns:
        The eikonal value
    """
    if R_s == 0:
        return eikonal_free(r, r_a, 1.0)
    _check_positive(r=r, r_a=r_a)
    r0 = quadrupole_caustic(r_a, R_s)
    if r < r0 * (1 - _SLACK):
        raise DomainError(f"r = {r} inside the quadrupole caustic {r0}", value=r,
                          interval=(r0, np.inf))

    radicand = r * r - r_a ** 2 * (1.0 - R_s / r)
    radical = np.sqrt(max(radicand, 0.0))
    cosine = (r_a / r) * np.sqrt(1.0 - R_s / r)
    value = radical - r_a * np.arctan2(radical / r, cosine)
    return EikonalValue(r=r, r_a=r_a, value=value, interval=(r0, np.inf))


def perihelion_turning_points(A: float, r_a: float, R_s: float) -> Tuple[float, float, float]:
    """
    Roots of rho (-A rho^2 + R_s rho - r_a^2 + R_s r_a^2 / rho).

    Args:
        A: Energy constant, > 0
        r_a: Angular momentum constant
        R_s: Schwarzschild radius

    Returns:
        (inner, perihelion, aphelion); the libration runs between the last two
    """
    _check_positive(A=A, r_a=r_a, R_s=R_s)
    coefficients = [-A, R_s, -r_a ** 2, R_s * r_a ** 2]
    roots = np.roots(coefficients)
    if np.any(np.abs(roots.imag) > 1e-9 * np.abs(roots.real)):
        raise DomainError(f"no bound libration for A={A}, r_a={r_a}, R_s={R_s}")

    derivative = np.polyder(coefficients)
    polished = []
    for root in np.sort(roots.real):
        for _ in range(3):
            root = root - np.polyval(coefficients, root) / np.polyval(derivative, root)
        polished.append(root)

    inner, perihelion, aphelion = polished
    if not (0 < inner < perihelion < aphelion) or perihelion <= 1.5 * R_s:
        raise DomainError(f"libration interval empty for A={A}, r_a={r_a}, R_s={R_s}")
    return inner, perihelion, aphelion


def eikonal_perihelion(r: float, A: float, r_a: float, R_s: float) -> EikonalValue:
    """
    Eikonal of the precessing medium, by quadrature from perihelion.

    Args:
        r: Radius inside the libration
        A: Energy constant, > 0
        r_a: Angular momentum constant
        R_s: Schwarzschild radius

    Returns:
        The eikonal value
    """
    inner, perihelion, aphelion = perihelion_turning_points(A, r_a, R_s)
    if not (perihelion * (1 - _SLACK) <= r <= aphelion * (1 + _SLACK)):
        raise DomainError(f"r = {r} outside the libration [{perihelion}, {aphelion}]",
                          value=r, interval=(perihelion, aphelion))
    r = min(max(r, perihelion), aphelion)

    def radicand(rho: float) -> float:
        return A * (rho - perihelion) * (aphelion - rho) * (rho - inner) / rho

    value = quadrature_eikonal(radicand, perihelion, r)
    return EikonalValue(r=r, r_a=r_a, value=value, interval=(perihelion, aphelion))


def _libration_action(A: float, r_a: float, R_s: float) -> float:
    """2 * integral of sqrt(-A rho^2 + R_s rho - r_a^2) / rho over one libration."""
    half_axis = R_s / (2.0 * A)
    ecc = np.sqrt(max(1.0 - 4.0 * A * r_a ** 2 / R_s ** 2, 0.0))
    lower, upper = half_axis * (1.0 - ecc), half_axis * (1.0 + ecc)
    return 2.0 * np.sqrt(A) * integrate_libration(lambda rho: 1.0 / rho, lower, upper, 0.5)


def perihelion_expansion_terms(el: OrbitElements) -> PerihelionTerms:
    """
    Expand the libration action of the precessing medium in R_s^2.

    The zeroth-order action is pi (R_s / sqrt(A) - 2 r_a); its derivative
    with respect to r_a, taken numerically from the libration quadrature,
    must be -2 pi (a closed orbit). The first-order action is
    (3/2) pi R_s^2 / r_a, also evaluated by quadrature.

    Args:
        el: Bound orbit elements

    Returns:
        The expansion terms and the resulting advance per revolution
    """
    if not el.bound:
        raise DomainError("perihelion expansion needs a bound orbit (A > 0)", value=el.A)
    A, r_a, R_s = el.A, el.r_a, el.R_s
    if R_s / r_a > 1e-2:
        logger.warning(f"R_s/r_a = {R_s / r_a:.3g}, first-order expansion may be poor")

    unperturbed = np.pi * (R_s / np.sqrt(A) - 2.0 * r_a)

    # r_a cannot exceed the circular-orbit value R_s / 2 sqrt(A)
    headroom = R_s / (2.0 * np.sqrt(A)) - r_a
    step = min(1e-4 * r_a, 1e-3 * headroom) if headroom > 0 else 0.0
    if step <= 0:
        raise DomainError("orbit is circular, cannot vary r_a", value=r_a)
    angle = -(_libration_action(A, r_a + step, R_s) - _libration_action(A, r_a - step, R_s)) / (2.0 * step)
    if abs(angle - 2.0 * np.pi) > 1e-9 * 2.0 * np.pi:
        raise ConvergenceError(f"unperturbed libration angle {angle} is not 2 pi",
                               residual=abs(angle - 2.0 * np.pi))

    first_order = 1.5 * np.pi * R_s ** 2 / r_a
    reciprocal = integrate_libration(lambda rho: 1.0 / rho, el.r_minus, el.r_plus, -0.5) / np.sqrt(A)
    first_order_quadrature = 0.75 * R_s ** 2 * 2.0 * reciprocal

    return PerihelionTerms(
        unperturbed_action=unperturbed,
        libration_angle=angle,
        first_order_action=first_order,
        first_order_quadrature=first_order_quadrature,
        advance=first_order / r_a
    )


def _tractrix_components(s, r_a: float):
    root = np.sqrt(1.0 + s * s)
    return r_a * (np.arcsinh(s) - s / root), r_a / root


def tractrix_profile(s: float, r_a: float = 1.0) -> TractrixPoint:
    """
    Meridian of the pseudosphere traced by the shadow eikonal.

    g = arcsinh(s) - s / sqrt(1 + s^2), h = 1 / sqrt(1 + s^2), scaled by r_a.

    Args:
        s: Curve parameter, >= 0
        r_a: Caustic radius

    Returns:
        The profile point
    """
    if s < 0:
        raise DomainError(f"tractrix parameter must be >= 0, got {s}", value=s)
    g, h = _tractrix_components(s, r_a)
    return TractrixPoint(s=s, g=g, h=h)


def tractrix_tangent_length(s: float, r_a: float = 1.0, step: float = 1e-20) -> float:
    """
    Length of the tangent from the profile point to the symmetry axis.

    Derivatives are taken with a complex step, so the result is exact to
    rounding. For a tractrix the length is r_a.
    """
    if s <= 0:
        raise DomainError(f"tangent is undefined at the cusp, s = {s}", value=s)
    dg, dh = (component.imag / step for component in _tractrix_components(complex(s, step), r_a))
    point = tractrix_profile(s, r_a)
    run = point.h * dg / -dh
    return float(np.hypot(run, point.h))


def surface_curvature(s: float, r_a: float = 1.0, step: float = 1e-3) -> float:
    """
    Gaussian curvature of the surface of revolution of the profile, by second differences.

    For the pseudosphere this is -1 / r_a^2.
    """
    if s - 2 * step <= 0:
        raise DomainError(f"s = {s} too close to the cusp for step {step}", value=s)
    offsets = np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * step
    g, h = _tractrix_components(s + offsets, r_a)

    def first(f):
        return (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * step)

    def second(f):
        return (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * step ** 2)

    dg, dh, ddg, ddh = first(g), first(h), second(g), second(h)
    return float(-dg * (dg * ddh - ddg * dh) / (h[2] * (dg ** 2 + dh ** 2) ** 2))
