"""
Refractive media equivalent to a central gravitating mass.

Each medium has an index of refraction eta(r) with
eta^2 = -A - 2U(r), where A is the (dimensionless) energy constant
and U is a potential. Media are immutable and their validity interval,
the range of r where eta^2 >= 0, is computed when they are built.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np

from optics.models import OrbitElements
from optics.utils import DomainError, find_root, sign_change_brackets

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Relative slack allowed when r sits on the edge of a validity interval
_EDGE_SLACK = 1e-12


class MediumModel:
    """Base class for the index-of-refraction laws."""
    kind = "abstract"

    def __post_init__(self):
        self._check()
        object.__setattr__(self, "validity", validity_interval(self))
        logger.debug(f"Built {self.kind} medium valid on {self.validity}")

    def _check(self) -> None:
        pass

    def potential(self, r: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def potential_derivative(self, r: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def length_scales(self) -> List[float]:
        """Characteristic lengths used to bound root scans."""
        scales = [getattr(self, name) for name in ("R_s", "r_a") if getattr(self, name, 0) > 0]
        if self.A != 0 and getattr(self, "R_s", 0) > 0:
            scales.append(self.R_s / abs(self.A))
        return scales or [1.0]

    @property
    def min_radius(self) -> float:
        """Hard lower bound on r independent of the sign of eta^2."""
        return 0.0

    def eta_squared(self, r: ArrayLike) -> ArrayLike:
        return -self.A - 2.0 * self.potential(r)

    def eta_squared_derivative(self, r: ArrayLike) -> ArrayLike:
        return -2.0 * self.potential_derivative(r)

    def eta(self, r: ArrayLike) -> ArrayLike:
        return refractive_index(self, r)

    def eta_derivative(self, r: ArrayLike) -> ArrayLike:
        """d(eta)/dr inside the validity interval."""
        return self.eta_squared_derivative(r) / (2.0 * self.eta(r))

    def to_dict(self) -> dict:
        """Convert the medium to a dictionary."""
        data = {'kind': self.kind}
        data.update({name: getattr(self, name) for name in self.__dataclass_fields__})
        data['validity'] = list(self.validity)
        return data


@dataclass(frozen=True)
class ConstantMedium(MediumModel):
    """Homogeneous medium, the free-space case when eta0 = 1."""
    eta0: float = 1.0
    kind = "constant"

    def _check(self) -> None:
        if not self.eta0 > 0:
            raise DomainError(f"index must be positive, got {self.eta0}", value=self.eta0)

    @property
    def A(self) -> float:
        return -self.eta0 ** 2

    def potential(self, r: ArrayLike) -> ArrayLike:
        return np.zeros_like(np.asarray(r, dtype=float))

    def potential_derivative(self, r: ArrayLike) -> ArrayLike:
        return np.zeros_like(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class NewtonianMedium(MediumModel):
    """Kepler medium, U = -R_s / 2r."""
    A: float
    R_s: float
    kind = "newtonian"

    def _check(self) -> None:
        if not self.R_s > 0:
            raise DomainError(f"R_s must be positive, got {self.R_s}", value=self.R_s)

    def potential(self, r: ArrayLike) -> ArrayLike:
        return -self.R_s / (2.0 * np.asarray(r, dtype=float))

    def potential_derivative(self, r: ArrayLike) -> ArrayLike:
        return self.R_s / (2.0 * np.asarray(r, dtype=float) ** 2)


@dataclass(frozen=True)
class QuadrupoleMedium(MediumModel):
    """
    Medium with a 1/r^3 potential whose bending matches general relativity.

    U = -monopole * R_s / 2r - c2 * R_s * r_a^2 / 2r^3. With the default
    monopole weight of 0 a grazing ray is bent by 2 R_s / r_a.
    """
    A: float
    R_s: float
    r_a: float
    c2: float = 1.0
    monopole: float = 0.0
    kind = "quadrupole"

    def _check(self) -> None:
        if not (self.R_s > 0 and self.r_a > 0):
            raise DomainError("R_s and r_a must be positive")

    def potential(self, r: ArrayLike) -> ArrayLike:
        r = np.asarray(r, dtype=float)
        return -self.monopole * self.R_s / (2.0 * r) - self.c2 * self.R_s * self.r_a ** 2 / (2.0 * r ** 3)

    def potential_derivative(self, r: ArrayLike) -> ArrayLike:
        r = np.asarray(r, dtype=float)
        return self.monopole * self.R_s / (2.0 * r ** 2) + 1.5 * self.c2 * self.R_s * self.r_a ** 2 / r ** 4


@dataclass(frozen=True)
class PerihelionMedium(MediumModel):
    """Kepler medium plus the 1/r^3 term that makes elliptic orbits precess."""
    A: float
    R_s: float
    r_a: float
    kind = "perihelion"

    def _check(self) -> None:
        if not (self.R_s > 0 and self.r_a > 0):
            raise DomainError("R_s and r_a must be positive")
        if self.R_s / self.r_a > 1e-2:
            logger.warning(f"R_s/r_a = {self.R_s / self.r_a:.3g}, first-order expansion in R_s may be poor")

    @property
    def min_radius(self) -> float:
        return 1.5 * self.R_s

    def potential(self, r: ArrayLike) -> ArrayLike:
        r = np.asarray(r, dtype=float)
        return -self.R_s / (2.0 * r) - self.R_s * self.r_a ** 2 / (2.0 * r ** 3)

    def potential_derivative(self, r: ArrayLike) -> ArrayLike:
        r = np.asarray(r, dtype=float)
        return self.R_s / (2.0 * r ** 2) + 1.5 * self.R_s * self.r_a ** 2 / r ** 4


_MEDIA = {
    "constant": ConstantMedium,
    "newtonian": NewtonianMedium,
    "quadrupole": QuadrupoleMedium,
    "perihelion": PerihelionMedium,
}


def build_medium(kind: str, **params) -> MediumModel:
    """
    Build a medium from its kind name and parameters.

    Args:
        kind: One of constant, newtonian, quadrupole, perihelion
        **params: Dataclass fields of that medium

    Returns:
        The medium
    """
    if kind not in _MEDIA:
        raise DomainError(f"unknown medium {kind!r}, expected one of {sorted(_MEDIA)}")
    try:
        return _MEDIA[kind](**params)
    except TypeError as e:
        raise DomainError(f"bad parameters for {kind} medium: {e}") from e


def _sample_point(lower: float, upper: float) -> float:
    if lower == 0.0 and np.isinf(upper):
        return 1.0
    if lower == 0.0:
        return upper / 2.0
    if np.isinf(upper):
        return lower * 2.0
    return np.sqrt(lower * upper)


def validity_interval(model: MediumModel) -> Tuple[float, float]:
    """
    Compute the interval of r on which eta^2(r) >= 0.

    The roots of eta^2 are bracketed on a log-spaced grid spanning twelve
    decades around the model's length scales and refined with brentq.

    Args:
        model: The medium

    Returns:
        (lower, upper), upper may be inf

    Raises:
        DomainError: If eta^2 is negative everywhere or positive on disjoint intervals
    """
    scales = model.length_scales()
    lower_scan, upper_scan = min(scales) * 1e-6, max(scales) * 1e6

    def eta2(r: float) -> float:
        return float(model.eta_squared(r))

    roots = [find_root(eta2, a, b) for a, b in sign_change_brackets(eta2, lower_scan, upper_scan)]
    edges = [0.0] + roots + [np.inf]
    intervals = [(a, b) for a, b in zip(edges[:-1], edges[1:]) if eta2(_sample_point(a, b)) > 0]

    if not intervals:
        raise DomainError(f"{model.kind} medium has eta^2 < 0 everywhere")
    if len(intervals) > 1:
        raise DomainError(f"{model.kind} medium is valid on disjoint intervals {intervals}")

    lower, upper = intervals[0]
    lower = max(lower, model.min_radius)
    if lower >= upper:
        raise DomainError(f"{model.kind} medium has an empty validity interval")
    return lower, upper


def refractive_index(model: MediumModel, r: ArrayLike) -> ArrayLike:
    """
    Evaluate eta(r) = sqrt(-A - 2U(r)).

    Args:
        model: The medium
        r: Radius or array of radii

    Returns:
        eta at r, same shape as r

    Raises:
        DomainError: If r <= 0 or r lies outside the validity interval
    """
    radii = np.asarray(r, dtype=float)
    if np.any(radii <= 0) or not np.all(np.isfinite(radii)):
        raise DomainError(f"radius must be positive and finite, got {r}", value=r)

    lower, upper = model.validity
    if np.any(radii < lower * (1 - _EDGE_SLACK)) or np.any(radii > upper * (1 + _EDGE_SLACK)):
        raise DomainError(f"radius {r} outside the validity interval [{lower}, {upper}] "
                          f"of the {model.kind} medium", value=r, interval=(lower, upper))

    eta2 = model.eta_squared(radii)
    scale = abs(model.A) + 2.0 * np.abs(model.potential(radii))
    eta2 = np.where((eta2 < 0) & (eta2 > -1e-10 * scale), 0.0, eta2)
    if np.any(eta2 < 0):
        raise DomainError(f"eta^2 < 0 at r = {r}", value=r, interval=(lower, upper))

    eta = np.sqrt(eta2)
    return float(eta) if eta.ndim == 0 else eta


def orbit_elements(A: float, r_a: float, R_s: float) -> OrbitElements:
    """
    Conic elements of a ray in the Kepler medium eta^2 = -A + R_s/r.

    Args:
        A: Energy constant
        r_a: Angular momentum (impact parameter) constant
        R_s: Schwarzschild radius

    Returns:
        The orbit elements, with eccentricity sqrt(1 - 4 A r_a^2 / R_s^2)

    Raises:
        DomainError: If the eccentricity would be imaginary
    """
    if not (R_s > 0 and r_a > 0):
        raise DomainError("R_s and r_a must be positive")

    ecc_sq = 1.0 - 4.0 * A * r_a ** 2 / R_s ** 2
    if ecc_sq < 0:
        if ecc_sq > -1e-12:
            logger.debug(f"Clamping eccentricity^2 = {ecc_sq:.3e} to a circle")
            ecc_sq = 0.0
        else:
            raise DomainError(f"no orbit for A={A}, r_a={r_a}, R_s={R_s}: eccentricity^2 = {ecc_sq}",
                              value=ecc_sq)
    ecc = np.sqrt(ecc_sq)
    q = 2.0 * r_a ** 2 / R_s

    if A == 0:
        return OrbitElements(A=A, r_a=r_a, R_s=R_s, eccentricity=ecc,
                             semi_latus_rectum=q, semi_axis=None, r_minus=q / 2.0)

    a = R_s / (2.0 * abs(A))
    if A > 0:
        return OrbitElements(A=A, r_a=r_a, R_s=R_s, eccentricity=ecc,
                             semi_latus_rectum=q, semi_axis=a,
                             r_minus=a * (1.0 - ecc), r_plus=a * (1.0 + ecc))
    return OrbitElements(A=A, r_a=r_a, R_s=R_s, eccentricity=ecc,
                         semi_latus_rectum=q, semi_axis=a, r_minus=a * (ecc - 1.0))


def elements_from_conic(semi_axis: float, eccentricity: float, R_s: float) -> OrbitElements:
    """
    Orbit elements from a semi-axis and eccentricity.

    Args:
        semi_axis: Semi-major axis (ellipse) or |a| (hyperbola)
        eccentricity: Eccentricity, not 1
        R_s: Schwarzschild radius

    Returns:
        The orbit elements
    """
    if semi_axis <= 0 or eccentricity < 0 or eccentricity == 1.0:
        raise DomainError("need a positive semi-axis and an eccentricity other than 1")
    sign = 1.0 if eccentricity < 1.0 else -1.0
    A = sign * R_s / (2.0 * semi_axis)
    r_a = np.sqrt(R_s * semi_axis * abs(1.0 - eccentricity ** 2) / 2.0)
    return orbit_elements(A, r_a, R_s)
