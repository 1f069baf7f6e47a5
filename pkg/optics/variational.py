"""
Discrete Fermat principle: minimize the optical length of a polygonal path
with fixed endpoints.

Nodes sit on a fixed grid of polar angles and only their radii move, so
the path stays single valued in phi and the Hessian of the optical length
is tridiagonal. Each iteration takes a damped Newton step on that Hessian
with a backtracking line search.
"""
import logging
import math
from typing import Tuple

import numpy as np
from scipy import linalg

from optics.medium import MediumModel
from optics.models import PathProblem, RayPath
from optics.utils import ConvergenceError, DomainError, find_root

logger = logging.getLogger(__name__)

# Fraction of samples at each end used for the asymptote fits
FIT_FRACTION = 0.1

# measure_deflection needs both ends this far out, relative to the closest sample
ASYMPTOTIC_REACH = 1e3

_ARMIJO = 1e-4
_MAX_HALVINGS = 50
_DAMPING_START = 1e-6


def _segment_geometry(r: np.ndarray, half_sin2: np.ndarray):
    """Chord lengths and midpoint radii of consecutive polar samples."""
    left, right = r[:-1], r[1:]
    cross = 4.0 * left * right
    length = np.sqrt((right - left) ** 2 + cross * half_sin2)
    midpoint = 0.5 * np.sqrt((right - left) ** 2 + cross * (1.0 - half_sin2))
    return left, right, length, midpoint


def _half_sin2(phi: np.ndarray) -> np.ndarray:
    return np.sin(0.5 * np.diff(phi)) ** 2


def _check_inside(medium: MediumModel, radii: np.ndarray) -> None:
    lower, upper = medium.validity
    outside = (radii < lower) | (radii > upper) | ~np.isfinite(radii)
    if np.any(outside):
        worst = float(radii[np.argmax(outside)])
        raise DomainError(f"path leaves the validity interval at r = {worst}",
                          value=worst, interval=(lower, upper))


def optical_length(path: RayPath, medium: MediumModel) -> float:
    """
    Optical length sum of eta(r_mid) * chord over consecutive samples.

    Args:
        path: Polygonal path
        medium: Medium the path runs through

    Returns:
        The optical length

    Raises:
        DomainError: If a sample or chord midpoint lies outside the medium's validity interval
    """
    _check_inside(medium, path.r)
    _, _, length, midpoint = _segment_geometry(path.r, _half_sin2(path.phi))
    _check_inside(medium, midpoint)
    return float(np.sum(medium.eta(midpoint) * length))


def optical_length_gradient(r: np.ndarray, phi: np.ndarray,
                            medium: MediumModel) -> Tuple[float, np.ndarray]:
    """
    Optical length of the polar polygon and its gradient with respect to every radius.

    Args:
        r: Node radii
        phi: Node angles, held fixed
        medium: Medium

    Returns:
        (optical length, gradient array of the same shape as r)
    """
    half_sin2 = _half_sin2(phi)
    left, right, length, midpoint = _segment_geometry(r, half_sin2)
    _check_inside(medium, midpoint)

    eta = medium.eta(midpoint)
    eta_slope = medium.eta_derivative(midpoint)

    d_length_left = (left - right + 2.0 * right * half_sin2) / length
    d_length_right = (right - left + 2.0 * left * half_sin2) / length
    d_mid_left = (left + right - 2.0 * right * half_sin2) / (4.0 * midpoint)
    d_mid_right = (left + right - 2.0 * left * half_sin2) / (4.0 * midpoint)

    gradient = np.zeros_like(r)
    gradient[:-1] += eta_slope * d_mid_left * length + eta * d_length_left
    gradient[1:] += eta_slope * d_mid_right * length + eta * d_length_right
    return float(np.sum(eta * length)), gradient


def chord_grid(start: Tuple[float, float], end: Tuple[float, float], segments: int,
               resolution: float = 5e-3) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes on the straight chord between two polar points.

    Nodes are spaced as x = scale * sinh(u), u uniform, where x is the
    distance along the chord from its foot (the point closest to the
    centre). The scale is chosen so the spacing near the foot is
    resolution times the foot distance; short chords fall back to uniform
    spacing.

    Args:
        start: (r, phi) of the first endpoint
        end: (r, phi) of the last endpoint
        segments: Number of chords
        resolution: Spacing at the foot over the foot distance

    Returns:
        (r, phi) arrays of segments + 1 nodes with the endpoints copied exactly

    Raises:
        DomainError: If the chord passes through the centre or does not
            sweep the angle between the endpoints
    """
    (r1, phi1), (r2, phi2) = start, end
    p1 = np.array([r1 * np.cos(phi1), r1 * np.sin(phi1)])
    p2 = np.array([r2 * np.cos(phi2), r2 * np.sin(phi2)])
    span = np.linalg.norm(p2 - p1)
    if span == 0:
        raise DomainError("endpoints coincide")
    direction = (p2 - p1) / span

    x1 = float(np.dot(p1, direction))
    x2 = x1 + span
    turn = p1[0] * direction[1] - p1[1] * direction[0]
    foot = abs(turn)
    if foot <= 1e-12 * max(r1, r2):
        raise DomainError("chord passes through the centre, the angle grid is undefined")
    orientation = math.copysign(1.0, turn)

    sweep = orientation * (np.arctan(x2 / foot) - np.arctan(x1 / foot))
    if abs(sweep - (phi2 - phi1)) > 1e-9 * max(1.0, abs(phi2 - phi1)):
        raise DomainError(f"chord sweeps {sweep} rad but the endpoints are {phi2 - phi1} rad apart",
                          value=phi2 - phi1)

    step = resolution * foot
    if step * segments >= 0.99 * span:
        x = np.linspace(x1, x2, segments + 1)
    else:
        def covered(scale: float) -> float:
            return scale * (np.arcsinh(x2 / scale) - np.arcsinh(x1 / scale)) - step * segments

        scale = find_root(covered, step * 1e-6, 1e3 * span)
        u = np.linspace(np.arcsinh(x1 / scale), np.arcsinh(x2 / scale), segments + 1)
        x = scale * np.sinh(u)

    phi = phi1 + orientation * (np.arctan(x / foot) - np.arctan(x1 / foot))
    r = np.hypot(foot, x)
    r[0], r[-1] = r1, r2
    phi[0], phi[-1] = phi1, phi2
    return r, phi


def _tridiagonal_hessian(r: np.ndarray, phi: np.ndarray, medium: MediumModel,
                         length: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Diagonal and off-diagonal of the Hessian over interior radii.

    Columns are taken by central differences of the gradient; nodes three
    apart never share a gradient entry, so three pairs of perturbations
    fill every column.
    """
    count = len(r) - 2
    steps = 1e-5 * np.minimum(length[:-1], length[1:])
    steps = (r[1:-1] + steps) - r[1:-1]

    diagonal = np.zeros(count)
    above = np.zeros(count - 1)  # H[k-1, k]
    below = np.zeros(count - 1)  # H[k+1, k]
    for colour in range(3):
        index = np.arange(colour, count, 3)
        nodes = index + 1
        h = steps[index]
        plus, minus = r.copy(), r.copy()
        plus[nodes] += h
        minus[nodes] -= h
        change = (optical_length_gradient(plus, phi, medium)[1]
                  - optical_length_gradient(minus, phi, medium)[1])

        diagonal[index] = change[nodes] / (2.0 * h)
        has_above = index >= 1
        above[index[has_above] - 1] = change[nodes[has_above] - 1] / (2.0 * h[has_above])
        has_below = index <= count - 2
        below[index[has_below]] = change[nodes[has_below] + 1] / (2.0 * h[has_below])
    return diagonal, 0.5 * (above + below)


def _newton_direction(gradient: np.ndarray, diagonal: np.ndarray, off: np.ndarray) -> np.ndarray:
    """Solve (H + mu D) d = -g, raising mu until the matrix is positive definite."""
    scale = np.abs(diagonal)
    damping = 0.0
    while True:
        banded = np.zeros((2, len(diagonal)))
        banded[0, 1:] = off
        banded[1] = diagonal + damping * scale
        try:
            return linalg.solveh_banded(banded, -gradient)
        except linalg.LinAlgError:
            damping = _DAMPING_START if damping == 0.0 else 10.0 * damping
            logger.debug(f"Hessian not positive definite, damping {damping:.1e}")
            if damping > 1e12:
                return -gradient / scale


def minimize_path(p: PathProblem) -> RayPath:
    """
    Find the polygonal path of stationary optical length between two fixed points.

    Starts from the straight chord and iterates damped Newton steps until
    the largest gradient component is at most tolerance * length / N.

    Args:
        p: Path problem

    Returns:
        The optimized path, endpoints identical to the inputs

    Raises:
        ConvergenceError: If the iteration cap is reached or the line search stalls
        DomainError: If the chord grid cannot be built
    """
    medium = p.medium
    r, phi = chord_grid(p.start, p.end, p.segments, p.resolution)
    _check_inside(medium, r)
    half_sin2 = _half_sin2(phi)
    lower, upper = medium.validity

    def value(radii: np.ndarray) -> float:
        if np.any(radii <= lower) or np.any(radii > upper):
            return np.inf
        _, _, length, midpoint = _segment_geometry(radii, half_sin2)
        if np.any(midpoint < lower) or np.any(midpoint > upper):
            return np.inf
        return float(np.sum(medium.eta(midpoint) * length))

    residual = np.inf
    for iteration in range(p.max_iterations):
        total, gradient = optical_length_gradient(r, phi, medium)
        interior = gradient[1:-1]
        residual = float(np.max(np.abs(interior)))
        threshold = p.tolerance * total / p.segments
        logger.debug(f"Iteration {iteration}: length {total:.15e}, gradient {residual:.3e}")
        if residual <= threshold:
            logger.info(f"Path in {medium.kind} medium converged after {iteration} iterations "
                        f"(gradient {residual:.3e}, length {total:.12e})")
            return RayPath(r=r, phi=phi, kind="optimized")

        _, _, length, _ = _segment_geometry(r, half_sin2)
        diagonal, off = _tridiagonal_hessian(r, phi, medium, length)
        direction = _newton_direction(interior, diagonal, off)
        slope = float(np.dot(interior, direction))
        if slope >= 0:
            direction = -interior / np.abs(diagonal)
            slope = float(np.dot(interior, direction))

        allowance = 16.0 * np.finfo(float).eps * total * math.sqrt(p.segments)
        alpha = 1.0
        for _ in range(_MAX_HALVINGS):
            trial = r.copy()
            trial[1:-1] += alpha * direction
            trial_value = value(trial)
            if trial_value <= total + _ARMIJO * alpha * slope + allowance:
                break
            alpha *= 0.5
        else:
            raise ConvergenceError(f"line search stalled at iteration {iteration} "
                                   f"(gradient {residual:.3e}, needed {threshold:.3e})",
                                   residual=residual, iterations=iteration)
        r = trial

    raise ConvergenceError(f"no stationary path after {p.max_iterations} iterations "
                           f"(gradient {residual:.3e})",
                           residual=residual, iterations=p.max_iterations)


def _fit_direction(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Unit direction of the least-squares line through the points, oriented along their order."""
    points = np.column_stack([x, y])
    centred = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centred, full_matrices=False)
    direction = vt[0]
    if np.dot(points[-1] - points[0], direction) < 0:
        direction = -direction
    return direction


def measure_deflection(path: RayPath) -> float:
    """
    Turning angle between the asymptotes of a path.

    Lines are fitted to the first and last FIT_FRACTION of the samples,
    each oriented along the direction of travel. A straight chord gives 0,
    a hyperbola 2 arcsin(1/e).

    Args:
        path: Path reaching ASYMPTOTIC_REACH times its closest radius at both ends

    Returns:
        The deflection in radians

    Raises:
        DomainError: If the path is too short or does not reach far enough
    """
    closest = float(np.min(path.r))
    reach = ASYMPTOTIC_REACH * closest * (1.0 - 1e-9)
    if path.r[0] < reach or path.r[-1] < reach:
        raise DomainError(f"path ends at r = ({path.r[0]:.3g}, {path.r[-1]:.3g}), "
                          f"needs {ASYMPTOTIC_REACH:g} times the closest radius {closest:.3g}",
                          value=min(path.r[0], path.r[-1]))
    count = max(2, int(math.ceil(FIT_FRACTION * len(path))))
    if 2 * count > len(path):
        raise DomainError(f"path with {len(path)} samples is too short for asymptote fits",
                          value=len(path))

    x, y = path.cartesian()
    incoming = _fit_direction(x[:count], y[:count])
    outgoing = _fit_direction(x[-count:], y[-count:])
    cross = incoming[0] * outgoing[1] - incoming[1] * outgoing[0]
    return float(np.arctan2(abs(cross), np.dot(incoming, outgoing)))
