"""
Shared numerical helpers and the error hierarchy for fermat-optics.
"""
import os
import logging
import warnings
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import integrate, optimize

import config

logger = logging.getLogger(__name__)

# Smallest relative tolerance brentq accepts
_MIN_RTOL = 4 * np.finfo(float).eps


class FermatError(Exception):
    """Base class for all errors raised by fermat-optics."""


class DomainError(FermatError, ValueError):
    """An input lies outside the domain where a model or formula is defined."""

    def __init__(self, message: str, value: Optional[float] = None,
                 interval: Optional[Tuple[float, float]] = None):
        super().__init__(message)
        self.value = value
        self.interval = interval


class ConvergenceError(FermatError, RuntimeError):
    """A quadrature, root search or optimizer did not meet its tolerance."""

    def __init__(self, message: str, residual: Optional[float] = None,
                 iterations: Optional[int] = None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class OutputError(FermatError, OSError):
    """A table could not be written."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path


def ensure_directory(directory: str) -> None:
    """
    Ensure a directory exists, creating it if necessary.

    Args:
        directory: The directory path
    """
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
        logger.info(f"Created directory: {directory}")


def relative_error(value: float, reference: float) -> float:
    """Relative deviation of value from reference; absolute when reference is 0."""
    if reference == 0:
        return abs(value)
    return abs(value - reference) / abs(reference)


def adaptive_quad(func: Callable, lower: float, upper: float,
                  tolerance: Optional[float] = None, limit: int = 200,
                  complex_func: bool = False, **kwargs) -> float:
    """
    Integrate func over [lower, upper] with scipy's adaptive quadrature.

    The error estimate QUADPACK reports is checked against the requested
    tolerance. Estimates above sqrt(tolerance) relative to the result are
    treated as a failure.

    Args:
        func: Integrand
        lower: Lower limit (may be -inf)
        upper: Upper limit (may be inf)
        tolerance: Absolute and relative tolerance, defaults to config.QUAD_TOLERANCE
        limit: Maximum number of subintervals
        complex_func: Whether the integrand is complex valued
        **kwargs: Passed through to scipy.integrate.quad (weight, wvar, points)

    Returns:
        The value of the integral

    Raises:
        ConvergenceError: If the error estimate is too large
    """
    tolerance = config.QUAD_TOLERANCE if tolerance is None else tolerance

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, error = integrate.quad(
            func, lower, upper,
            epsabs=tolerance, epsrel=tolerance, limit=limit,
            complex_func=complex_func, **kwargs
        )

    scale = max(1.0, abs(value))
    if abs(error) > np.sqrt(tolerance) * scale:
        logger.error(f"Quadrature on [{lower}, {upper}] failed: estimate {value}, error {abs(error):.3e}")
        raise ConvergenceError(
            f"quadrature on [{lower}, {upper}] did not converge (error estimate {abs(error):.3e})",
            residual=abs(error)
        )
    if abs(error) > tolerance * scale:
        logger.debug(f"Quadrature error {abs(error):.3e} above requested {tolerance:.1e}")
    return value


def integrate_from_turning_point(func: Callable[[float], float], turning: float,
                                 r: float, tolerance: Optional[float] = None) -> float:
    """
    Integrate func from a turning point to r.

    The substitution rho = turning +/- t**2 removes square-root behaviour
    of the integrand at the turning point, so integrands vanishing like
    sqrt(rho - turning) and ones diverging like 1/sqrt(rho - turning) are
    both smooth in t.

    Args:
        func: Integrand in rho
        turning: Turning point
        r: Upper limit, on either side of the turning point
        tolerance: Quadrature tolerance

    Returns:
        Integral of func from turning to r
    """
    if r == turning:
        return 0.0

    sign = 1.0 if r > turning else -1.0
    span = np.sqrt(abs(r - turning))

    def integrand(t: float) -> float:
        return func(turning + sign * t * t) * 2.0 * t

    return sign * adaptive_quad(integrand, 0.0, span, tolerance=tolerance)


def integrate_libration(func: Callable[[float], float], lower: float, upper: float,
                        exponent: float = 0.5, tolerance: Optional[float] = None) -> float:
    """
    Integrate func(rho) * ((rho - lower)(upper - rho))**exponent over a libration.

    Uses QUADPACK's algebraic end-point weight so the square-root factors
    never get evaluated explicitly.

    Args:
        func: Smooth factor of the integrand
        lower: Inner turning point
        upper: Outer turning point
        exponent: Power of the end-point factors (0.5 or -0.5 in practice)
        tolerance: Quadrature tolerance

    Returns:
        The value of the integral
    """
    if upper <= lower:
        raise DomainError(f"libration interval [{lower}, {upper}] is empty",
                          interval=(lower, upper))
    return adaptive_quad(func, lower, upper, tolerance=tolerance,
                         weight="alg", wvar=(exponent, exponent))


def find_root(func: Callable[[float], float], lower: float, upper: float,
              tolerance: Optional[float] = None) -> float:
    """
    Find a root of func bracketed by [lower, upper] using Brent's method.

    Args:
        func: Function with a sign change on the bracket
        lower: Lower end of the bracket
        upper: Upper end of the bracket
        tolerance: Relative tolerance, defaults to config.ROOT_TOLERANCE

    Returns:
        The root

    Raises:
        DomainError: If the bracket holds no sign change
        ConvergenceError: If Brent's method does not converge
    """
    tolerance = config.ROOT_TOLERANCE if tolerance is None else tolerance
    scale = max(abs(lower), abs(upper))
    try:
        root, result = optimize.brentq(
            func, lower, upper,
            xtol=max(tolerance * 1e-3 * scale, 1e-300),
            rtol=max(_MIN_RTOL, tolerance * 1e-3),
            maxiter=config.MAX_ITERATIONS,
            full_output=True
        )
    except ValueError as e:
        raise DomainError(f"no sign change on [{lower}, {upper}]: {e}",
                          interval=(lower, upper)) from e
    except RuntimeError as e:
        raise ConvergenceError(f"root search on [{lower}, {upper}] failed: {e}") from e

    if not result.converged:
        raise ConvergenceError(f"root search on [{lower}, {upper}] did not converge",
                               iterations=result.iterations)
    return root


def sign_change_brackets(func: Callable[[float], float], lower: float, upper: float,
                         samples: int = 2000) -> List[Tuple[float, float]]:
    """
    Scan a log-spaced grid for sign changes of func.

    Args:
        func: Function to scan
        lower: Positive lower end of the scan
        upper: Upper end of the scan
        samples: Number of grid points

    Returns:
        Brackets (a, b) with func(a) and func(b) of opposite sign
    """
    grid = np.geomspace(lower, upper, samples)
    values = np.array([func(x) for x in grid])
    signs = np.sign(values)
    return [(grid[i], grid[i + 1])
            for i in range(len(grid) - 1)
            if signs[i] != 0 and signs[i + 1] != 0 and signs[i] != signs[i + 1]]
