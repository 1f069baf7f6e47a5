"""
WKB waves, caustic matching, Hankel saddle points and a reference Bessel function.

The reference J_nu is the truth oracle of this module: an extended
precision ascending series below the transition region and the real
integral representation above it.
"""
import cmath
import functools
import logging
import math
from typing import List, Optional, Tuple

import mpmath
import numpy as np

import config
from optics.eikonal import eikonal_free, eikonal_shadow, quadrupole_caustic
from optics.models import OrbitElements, PhaseJump, SaddleResult, ShadowWave, WkbWave
from optics.utils import ConvergenceError, DomainError, adaptive_quad, find_root

logger = logging.getLogger(__name__)

# Desk-scale limits of the reference Bessel function
MAX_ORDER = 500.0
MAX_ARGUMENT = 1e4

# Tails of the Hankel contour stop where the integrand falls this far below its peak
_TAIL_DECADES = 16
_TAIL_TOLERANCE = 1e-8


@functools.lru_cache(maxsize=config.BESSEL_CACHE_SIZE)
def reference_bessel_j(nu: float, x: float) -> float:
    """
    J_nu(x) to about 1e-12 absolute.

    Args:
        nu: Order, 0 <= nu <= 500
        x: Argument, 0 <= x <= 1e4

    Returns:
        The Bessel function value
    """
    nu, x = float(nu), float(x)
    if not (0.0 <= nu <= MAX_ORDER and 0.0 <= x <= MAX_ARGUMENT):
        raise DomainError(f"J_nu(x) only available for 0 <= nu <= {MAX_ORDER}, "
                          f"0 <= x <= {MAX_ARGUMENT}; got nu={nu}, x={x}", value=x)
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    if x < max(10.0, nu):
        return bessel_series(nu, x)
    return bessel_integral(nu, x)


def bessel_series(nu: float, x: float) -> float:
    """
    Ascending series sum (-x^2/4)^k (x/2)^nu / (k! Gamma(nu + k + 1)).

    The working precision covers the largest term, bounded through
    I_nu(x), plus 30 guard digits.
    """
    log10_peak = (nu * math.log10(x / 2.0) - math.lgamma(nu + 1.0) / math.log(10.0)
                  + x * x / (4.0 * (nu + 1.0) * math.log(10.0)))
    dps = max(30, int(math.ceil(log10_peak)) + 30)

    with mpmath.workdps(dps):
        half = mpmath.mpf(x) / 2
        square = -half * half
        term = mpmath.power(half, nu) / mpmath.gamma(nu + 1)
        total = term
        threshold = mpmath.mpf(10) ** -25
        k = 0
        while True:
            k += 1
            term *= square / (k * (k + nu))
            total += term
            if k * (k + nu) > abs(square) and abs(term) < threshold:
                break
        return float(total)


def bessel_integral(nu: float, x: float) -> float:
    """
    (1/pi) int_0^pi cos(x sin t - nu t) dt - (sin(nu pi)/pi) int_0^inf exp(-x sinh t - nu t) dt.

    The oscillatory integral is split into pieces spanning a few radians
    of phase each.
    """
    pieces = max(1, int(math.ceil((x + nu) / 4.0)))
    edges = np.linspace(0.0, math.pi, pieces + 1)

    def oscillatory(t: float) -> float:
        return math.cos(x * math.sin(t) - nu * t)

    first = sum(adaptive_quad(oscillatory, a, b, tolerance=1e-14) for a, b in zip(edges[:-1], edges[1:]))
    value = first / math.pi

    if not float(nu).is_integer():
        def decaying(t: float) -> float:
            return math.exp(-x * math.sinh(t) - nu * t)

        upper = math.asinh(800.0 / x) + 1.0
        value -= math.sin(nu * math.pi) / math.pi * adaptive_quad(decaying, 0.0, upper, tolerance=1e-14)
    return value


def wkb_bessel(nu: float, x: float) -> float:
    """Leading Debye form sqrt(2/pi) (x^2 - nu^2)^(-1/4) cos(sqrt(x^2 - nu^2) - nu arccos(nu/x) - pi/4)."""
    if not x > nu >= 0:
        raise DomainError(f"Debye form needs x > nu >= 0, got nu={nu}, x={x}", value=x)
    radical = math.sqrt((x - nu) * (x + nu))
    phase = radical - nu * math.atan2(radical, nu) - math.pi / 4
    return math.sqrt(2.0 / math.pi) / math.sqrt(radical) * math.cos(phase)


def debye_phase(kappa: float, r: float, r_a: float, eta: float = 1.0,
                direction: str = "outgoing", theta: float = -math.pi / 4,
                amplitude_constant: float = 1.0) -> WkbWave:
    """
    Travelling WKB wave outside the caustic.

    The outgoing phase is kappa S + theta, the incoming one its negative,
    with S the free eikonal. The amplitude A / (kappa^2 (eta^2 r^2 - r_a^2))^(1/4)
    makes sqrt(2/pi) * amplitude * cos(phase) the Debye form of J_nu.

    Args:
        kappa: Wave number
        r: Radius, eta r > r_a
        r_a: Caustic radius
        eta: Refractive index
        direction: outgoing or incoming
        theta: Matching constant, -pi/4 modulo pi
        amplitude_constant: Overall amplitude A

    Returns:
        The wave
    """
    if not kappa > 0:
        raise DomainError(f"wave number must be positive, got {kappa}", value=kappa)
    if not eta * r > r_a:
        raise DomainError(f"eta r = {eta * r} is not outside the caustic r_a = {r_a}; "
                          "use shadow_amplitude", value=r, interval=(r_a / eta, math.inf))
    eikonal = eikonal_free(r, r_a, eta).value
    core = kappa * eikonal + theta
    x = eta * r
    amplitude = amplitude_constant / math.sqrt(kappa * math.sqrt((x - r_a) * (x + r_a)))
    return WkbWave(kappa=kappa, r=r, phase=core if direction == "outgoing" else -core,
                   amplitude=amplitude, direction=direction, theta=theta)


def _matching_coefficients(theta: float, amplitude_constant: float) -> Tuple[float, float]:
    """(decaying, growing) shadow coefficients for a given matching constant."""
    k = round((theta + math.pi / 4) / math.pi)
    if abs(theta + math.pi / 4 - k * math.pi) <= 1e-12:
        return 0.5 * amplitude_constant * (-1.0) ** k, 0.0
    return (0.5 * amplitude_constant * math.sin(math.pi / 4 - theta),
            0.5 * amplitude_constant * math.cos(theta - math.pi / 4))


def shadow_amplitude(kappa: float, r: float, r_a: float, theta: float = -math.pi / 4,
                     amplitude_constant: float = 1.0, eta: float = 1.0) -> ShadowWave:
    """
    Exponential WKB solutions inside the caustic.

    The growing coefficient is (A/2) cos(theta - pi/4), which vanishes
    exactly for theta = -pi/4 modulo pi; the decaying one is (A/2) sin(pi/4 - theta).

    Args:
        kappa: Wave number
        r: Radius, eta r < r_a
        r_a: Caustic radius
        theta: Matching constant of the periodic side
        amplitude_constant: Overall amplitude A
        eta: Refractive index

    Returns:
        Both solutions and their coefficients
    """
    if not kappa > 0:
        raise DomainError(f"wave number must be positive, got {kappa}", value=kappa)
    x = eta * r
    if not 0 < x < r_a:
        raise DomainError(f"eta r = {x} is not inside the caustic r_a = {r_a}", value=r,
                          interval=(0.0, r_a / eta))
    exponent = kappa * eikonal_shadow(r, r_a, eta).imag
    prefactor = 1.0 / math.sqrt(kappa * math.sqrt((r_a - x) * (r_a + x)))
    decaying_coefficient, growing_coefficient = _matching_coefficients(theta, amplitude_constant)
    return ShadowWave(
        decaying=decaying_coefficient * prefactor * math.exp(-exponent),
        growing=growing_coefficient * prefactor * math.exp(exponent),
        decaying_coefficient=decaying_coefficient,
        growing_coefficient=growing_coefficient,
        exponent=exponent,
        prefactor=prefactor
    )


def hankel_saddle(kappa: float, r: float, el: OrbitElements) -> SaddleResult:
    """
    Saddle point of exp(i kappa W(phi)) with W(phi) = eps r sin(phi) - (q - r) phi.

    W'(phi) = 0 is the conic equation cos(phi) = (q/r - 1)/eps. On the
    oscillatory branch |q - r| < eps r the saddle is real. Beyond it the
    saddle moves onto the vertical tails of the contour, at i y0 for
    q - r > eps r and pi - i y0 for r - q > eps r.

    Args:
        kappa: Wave number
        r: Radius
        el: Orbit elements

    Returns:
        The saddle point
    """
    stretch = el.eccentricity * r
    offset = el.semi_latus_rectum - r
    if not stretch > 0:
        raise DomainError(f"saddle needs eps r > 0, got {stretch}", value=stretch)
    if abs(abs(offset) - stretch) <= 1e-12 * stretch:
        raise DomainError("saddles coalesce at the caustic", value=r)

    if abs(offset) < stretch:
        phi = math.acos(offset / stretch)
        radical = math.sqrt((stretch - offset) * (stretch + offset))
        return SaddleResult(phi_plus=complex(phi), W_value=radical - offset * phi,
                            branch="oscillatory", second_derivative=complex(-radical),
                            order=kappa * offset, argument=kappa * stretch)

    y0 = math.acosh(abs(offset) / stretch)
    radical = math.sqrt((abs(offset) - stretch) * (abs(offset) + stretch))
    phi = complex(0.0, y0) if offset > 0 else complex(math.pi, -y0)
    return SaddleResult(phi_plus=phi, W_value=abs(offset) * y0 - radical, branch="shadow",
                        second_derivative=-stretch * cmath.sin(phi),
                        order=kappa * offset, argument=kappa * stretch)


def hankel_saddle_leading(kappa: float, r: float, el: OrbitElements, j: int = 1) -> complex:
    """
    Leading-order saddle-point value of H_nu^(j)(x), nu = kappa (q - r), x = kappa eps r.

    Args:
        kappa: Wave number
        r: Radius
        el: Orbit elements
        j: Hankel kind, 1 or 2

    Returns:
        The asymptotic value
    """
    if j not in (1, 2):
        raise DomainError(f"Hankel kind must be 1 or 2, got {j}", value=j)
    saddle = hankel_saddle(kappa, r, el)
    curvature = abs(saddle.second_derivative)

    if saddle.branch == "oscillatory":
        value = math.sqrt(2.0 / (math.pi * kappa * curvature)) * cmath.exp(1j * (kappa * saddle.W_value - math.pi / 4))
    else:
        magnitude = math.sqrt(2.0 / (math.pi * kappa * curvature)) * math.exp(kappa * saddle.W_value)
        value = -1j * magnitude
        if saddle.order < 0:
            # negative order: H1_{-mu} = exp(i mu pi) H1_mu
            value *= cmath.exp(-1j * math.pi * saddle.order)
    return value if j == 1 else value.conjugate()


def _tail_extent(log_magnitude, start: float, target: float) -> float:
    """Smallest y >= start beyond the peak of a concave tail with log_magnitude(y) <= target."""
    if log_magnitude(start) <= target:
        return start
    upper = max(2.0 * start, 1.0)
    while log_magnitude(upper) > target:
        upper *= 2.0
        if upper > 50.0:
            raise ConvergenceError("Hankel contour tail does not decay")
    return find_root(lambda y: log_magnitude(y) - target, start, upper)


def _segment_integral(func, a: complex, b: complex, frequency: float) -> complex:
    length = abs(b - a)
    if length == 0.0:
        return 0.0j
    pieces = max(1, int(math.ceil(length * frequency / 8.0)))
    total = 0.0j
    for k in range(pieces):
        p, q = a + (b - a) * k / pieces, a + (b - a) * (k + 1) / pieces
        total += adaptive_quad(lambda t: func(p + t * (q - p)) * (q - p), 0.0, 1.0,
                               complex_func=True, limit=400)
    return total


def hankel_numeric(kappa: float, r: float, el: OrbitElements, j: int = 1) -> complex:
    """
    H_nu^(j)(x) = (1/pi) int_{C_j} exp(i (x sin(phi) - nu phi)) dphi by quadrature.

    C_1 runs from i inf through 0 and pi to pi - i inf. It is deformed to
    pass through the saddle along straight steepest-descent segments at
    -45 degrees, joined to vertical tails that are cut where the
    integrand falls 16 decades below its peak. C_2 is the mirror image
    phi -> -conj(phi).

    Args:
        kappa: Wave number, kappa q <= 1e3
        r: Radius
        el: Orbit elements
        j: Hankel kind, 1 or 2

    Returns:
        The Hankel function value

    Raises:
        ConvergenceError: If the truncated tails could carry more than 1e-8 of the result
    """
    if j not in (1, 2):
        raise DomainError(f"Hankel kind must be 1 or 2, got {j}", value=j)
    if kappa * el.semi_latus_rectum > 1e3:
        raise DomainError(f"kappa q = {kappa * el.semi_latus_rectum:.3g} beyond desk scale 1e3", value=kappa)

    saddle = hankel_saddle(kappa, r, el)
    nu, x = saddle.order, saddle.argument
    peak = kappa * saddle.W_value if saddle.branch == "shadow" else 0.0
    if peak > 700:
        raise DomainError(f"Hankel function overflows, log magnitude {peak:.1f}", value=r)
    target = peak - _TAIL_DECADES * math.log(10.0)

    def top(y: float) -> float:
        return -x * math.sinh(y) + nu * y

    def bottom(y: float) -> float:
        return -x * math.sinh(y) - nu * y

    if saddle.branch == "oscillatory":
        s = saddle.phi_plus.real
        y_top = _tail_extent(top, s, target)
        y_bottom = _tail_extent(bottom, math.pi - s, target)
        nodes = [1j * y_top, 1j * s, complex(s), complex(math.pi, -(math.pi - s)), complex(math.pi, -y_bottom)]
    elif nu > 0:
        y0 = saddle.phi_plus.imag
        y_top = _tail_extent(top, y0, target)
        y_bottom = _tail_extent(bottom, 0.0, target)
        nodes = [1j * y_top, 1j * y0, 0j, complex(math.pi), complex(math.pi, -y_bottom)]
    else:
        y0 = -saddle.phi_plus.imag
        y_top = _tail_extent(top, 0.0, target)
        y_bottom = _tail_extent(bottom, y0, target)
        nodes = [1j * y_top, 0j, complex(math.pi), complex(math.pi, -y0), complex(math.pi, -y_bottom)]

    # the tails are concave, so the neglected part is at most exp(g(Y)) / |g'(Y)|
    for log_magnitude, decay in ((top(y_top), x * math.cosh(y_top) - nu),
                                 (bottom(y_bottom), x * math.cosh(y_bottom) + nu)):
        remainder = math.exp(log_magnitude - peak) / max(decay, 1e-300)
        if remainder > _TAIL_TOLERANCE:
            raise ConvergenceError(f"Hankel tail truncation error {remainder:.2e} too large",
                                   residual=remainder)

    segments = list(zip(nodes[:-1], nodes[1:]))
    if j == 2:
        segments = [(-b.conjugate(), -a.conjugate()) for a, b in reversed(segments)]

    def integrand(phi: complex) -> complex:
        return cmath.exp(1j * (x * cmath.sin(phi) - nu * phi))

    frequency = x + abs(nu)
    total = sum(_segment_integral(integrand, a, b, frequency) for a, b in segments)
    logger.debug(f"H{j}_{nu:.4g}({x:.4g}) = {total / math.pi}")
    return total / math.pi


def quadrupole_amplitude(r: float, r_a: float, R_s: float, amplitude_constant: float = 1.0) -> float:
    """
    WKB amplitude A / (1 - (r_a^2/r^2)(1 - R_s/r))^(1/4) of the quadrupole wave.

    Diverges at the quadrupole caustic.
    """
    r0 = quadrupole_caustic(r_a, R_s)
    if not r > r0:
        raise DomainError(f"r = {r} not beyond the caustic {r0}", value=r, interval=(r0, math.inf))
    spread = 1.0 - (r_a / r) ** 2 * (1.0 - R_s / r)
    if spread <= 0:
        raise DomainError(f"amplitude undefined at r = {r}", value=r)
    return amplitude_constant / spread ** 0.25


def geometric_divergence(r: float, r_a: float, R_s: float, amplitude_constant: float = 1.0) -> float:
    """Squared quadrupole amplitude."""
    return quadrupole_amplitude(r, r_a, R_s, amplitude_constant) ** 2


def caustic_phase_shift(kappa: float, r_a: float = 1.0, r_range: Tuple[float, float] = (1.5, 3.0),
                        samples: int = 200) -> PhaseJump:
    """
    Measure the phase of J_nu(kappa r), nu = kappa r_a, against kappa S.

    The local phase comes from J and its derivative (normalised by the WKB
    envelope), unwrapped along the grid. Its offset from kappa S is the
    matching constant; the outgoing and incoming branches differ by twice it.

    Args:
        kappa: Wave number, kappa r_a >= 1
        r_a: Caustic radius
        r_range: Radial window in units of r_a
        samples: Grid size

    Returns:
        The measured offset and jump
    """
    nu = kappa * r_a
    if nu < 1:
        raise DomainError(f"kappa r_a = {nu} too small", value=nu)
    radii = np.linspace(r_range[0] * r_a, r_range[1] * r_a, samples)
    eikonal = np.array([kappa * eikonal_free(r, r_a).value for r in radii])

    phases = []
    for r in radii:
        x = kappa * r
        radical = math.sqrt((x - nu) * (x + nu))
        envelope = math.sqrt(2.0 / math.pi) / math.sqrt(radical)
        value = reference_bessel_j(nu, x)
        slope = 0.5 * (reference_bessel_j(nu - 1.0, x) - reference_bessel_j(nu + 1.0, x))
        phases.append(math.atan2(-slope / (envelope * radical / x), value / envelope))
    phases = np.unwrap(np.array(phases))

    differences = eikonal - phases
    offset = float(np.angle(np.mean(np.exp(1j * differences))))
    spread = float(np.max(np.abs(np.angle(np.exp(1j * (differences - offset))))))
    logger.info(f"Caustic phase offset at kappa r_a = {nu}: {offset:.6f} (spread {spread:.2e})")
    return PhaseJump(offset=offset, jump=2.0 * offset, spread=spread)


def bessel_zeros_wkb(kappa: float, r_a: float, count: int, eta: float = 1.0,
                     r_start: Optional[float] = None) -> List[float]:
    """
    Radii where the Debye wave cos(kappa S - pi/4) vanishes.

    Args:
        kappa: Wave number
        r_a: Caustic radius
        count: Number of zeros
        eta: Refractive index
        r_start: Smallest radius, defaults to 1.5 r_a / eta

    Returns:
        The first count zeros beyond r_start
    """
    if count < 1:
        raise DomainError(f"count must be positive, got {count}", value=count)
    r_start = 1.5 * r_a / eta if r_start is None else r_start
    first = math.ceil((kappa * eikonal_free(r_start, r_a, eta).value - 0.75 * math.pi) / math.pi)

    zeros = []
    for m in range(first, first + count):
        target = (0.75 * math.pi + m * math.pi) / kappa
        upper = (target + r_a * (1.0 + math.pi / 2)) / eta + r_a
        zeros.append(find_root(lambda r: eikonal_free(r, r_a, eta).value - target, r_start, upper))
    return zeros


def bessel_zero(nu: float, guess: float, half_width: float = 0.5) -> float:
    """Refine a zero of J_nu near guess with Brent's method."""
    lower, upper = guess - half_width, guess + half_width
    if reference_bessel_j(nu, lower) * reference_bessel_j(nu, upper) > 0:
        raise DomainError(f"no zero of J_{nu} within {half_width} of {guess}", value=guess)
    return find_root(lambda x: reference_bessel_j(nu, x), lower, upper)


def debye_error_table(kappa: float, r_a: float, radii: np.ndarray, eta: float = 1.0) -> List[dict]:
    """
    Compare the Debye wave with J_nu(kappa eta r), nu = kappa r_a, on a radial grid.

    Args:
        kappa: Wave number
        r_a: Caustic radius
        radii: Radii outside the caustic
        eta: Refractive index

    Returns:
        Rows with r, J_exact, WKB, abs_err, envelope and rel_err (abs_err over envelope)
    """
    nu = kappa * r_a
    rows = []
    for r in radii:
        wave = debye_phase(kappa, float(r), r_a, eta)
        envelope = math.sqrt(2.0 / math.pi) * wave.amplitude
        approximate = envelope * math.cos(wave.phase)
        exact = reference_bessel_j(nu, kappa * eta * float(r))
        error = abs(approximate - exact)
        rows.append({
            'r': float(r),
            'J_exact': exact,
            'WKB': approximate,
            'abs_err': error,
            'envelope': envelope,
            'rel_err': error / envelope
        })
    return rows
