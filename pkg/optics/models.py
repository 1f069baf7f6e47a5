"""
Data models for rays, waves and observables in gravitating media.

All lengths are in gravitational units (c = G = 1), so times are light
travel distances and masses are half Schwarzschild radii. UnitSystem
converts at the command-line boundary.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple, TYPE_CHECKING

import numpy as np

import config
from optics.utils import DomainError

if TYPE_CHECKING:
    from optics.medium import MediumModel


@dataclass(frozen=True)
class OrbitElements:
    """Conic elements of a ray (or orbit) in a Kepler-type medium."""
    A: float
    r_a: float
    R_s: float
    eccentricity: float
    semi_latus_rectum: float
    semi_axis: Optional[float]  # None for the parabola A = 0
    r_minus: float
    r_plus: Optional[float] = None  # outer turning point, bound orbits only

    @property
    def kind(self) -> str:
        """One of 'ellipse', 'parabola' or 'hyperbola'."""
        if self.A > 0:
            return "ellipse"
        if self.A == 0:
            return "parabola"
        return "hyperbola"

    @property
    def bound(self) -> bool:
        return self.A > 0

    @property
    def semi_minor_axis(self) -> Optional[float]:
        if self.semi_axis is None:
            return None
        return np.sqrt(self.semi_axis * self.semi_latus_rectum)

    def to_dict(self) -> dict:
        """Convert the elements to a dictionary."""
        return {
            'A': self.A,
            'r_a': self.r_a,
            'R_s': self.R_s,
            'eccentricity': self.eccentricity,
            'semi_latus_rectum': self.semi_latus_rectum,
            'semi_axis': self.semi_axis,
            'r_minus': self.r_minus,
            'r_plus': self.r_plus,
            'kind': self.kind
        }


# Conversion of each quantity kind from SI into gravitational units
_TO_GRAVITATIONAL = {
    "length": lambda c, G: 1.0,
    "time": lambda c, G: c,
    "mass": lambda c, G: G / c ** 2,
    "velocity": lambda c, G: 1.0 / c,
    "frequency": lambda c, G: 1.0 / c,
    "dimensionless": lambda c, G: 1.0,
}


@dataclass(frozen=True)
class UnitSystem:
    """Either gravitational units (c = G = 1) or SI with explicit constants."""
    mode: str = "gravitational"  # gravitational, SI
    c: float = config.SPEED_OF_LIGHT
    G: float = config.GRAVITATIONAL_CONSTANT

    def __post_init__(self):
        if self.mode not in ("gravitational", "SI"):
            raise DomainError(f"unknown unit mode {self.mode!r}")
        if self.c <= 0 or self.G <= 0:
            raise DomainError("c and G must be positive")

    def _factor(self, kind: str) -> float:
        if kind not in _TO_GRAVITATIONAL:
            raise DomainError(f"unknown quantity kind {kind!r}")
        if self.mode == "gravitational":
            return 1.0
        return _TO_GRAVITATIONAL[kind](self.c, self.G)

    def to_gravitational(self, value: float, kind: str) -> float:
        """Convert a value of the given kind into gravitational units."""
        return value * self._factor(kind)

    def to_si(self, value: float, kind: str) -> float:
        """Convert a value of the given kind out of gravitational units."""
        return value / self._factor(kind)

    def schwarzschild_radius(self, mass: float) -> float:
        """2GM/c^2 for a mass given in this system's units."""
        return 2.0 * self.to_gravitational(mass, "mass")


@dataclass(frozen=True)
class EikonalValue:
    """Value of an eikonal at radius r."""
    r: float
    r_a: float
    value: float
    imag: float = 0.0
    branch: str = "periodic"  # periodic, shadow
    interval: Tuple[float, float] = (0.0, np.inf)

    def __post_init__(self):
        if self.branch not in ("periodic", "shadow"):
            raise DomainError(f"unknown eikonal branch {self.branch!r}")
        if self.branch == "periodic" and self.imag != 0.0:
            raise DomainError("a periodic eikonal has no imaginary part")
        if self.branch == "shadow" and self.value != 0.0:
            raise DomainError("a shadow eikonal is purely imaginary")

    def to_dict(self) -> dict:
        """Convert the eikonal value to a dictionary."""
        return {
            'r': self.r,
            'r_a': self.r_a,
            'value': self.value,
            'imag': self.imag,
            'branch': self.branch
        }


@dataclass(frozen=True)
class TractrixPoint:
    """Point on the tractrix meridian of the pseudosphere, in units of r_a."""
    s: float
    g: float
    h: float


@dataclass(frozen=True)
class RayPath:
    """Ordered polar samples (r, phi) of a ray."""
    r: np.ndarray
    phi: np.ndarray
    kind: str = "analytic"  # analytic, optimized, straight

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        if r.shape != phi.shape or r.ndim != 1 or len(r) < 2:
            raise DomainError("a ray path needs matching one-dimensional r and phi with at least 2 samples")
        if np.any(r <= 0) or not np.all(np.isfinite(r)):
            raise DomainError("ray path radii must be positive and finite")
        steps = np.diff(phi)
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise DomainError("ray path angles must be strictly monotone")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "phi", phi)

    def __len__(self) -> int:
        return len(self.r)

    def cartesian(self) -> Tuple[np.ndarray, np.ndarray]:
        """Return the samples as (x, y) arrays."""
        return self.r * np.cos(self.phi), self.r * np.sin(self.phi)

    def to_dict(self) -> dict:
        """Convert the path to a dictionary."""
        return {
            'kind': self.kind,
            'r': self.r.tolist(),
            'phi': self.phi.tolist()
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'RayPath':
        """Create a RayPath from a dictionary."""
        return cls(
            r=np.asarray(data.get('r', [])),
            phi=np.asarray(data.get('phi', [])),
            kind=data.get('kind', 'analytic')
        )


@dataclass(frozen=True)
class WkbWave:
    """One travelling WKB branch, amplitude * exp(i * phase)."""
    kappa: float
    r: float
    phase: float
    amplitude: float
    direction: str  # outgoing, incoming
    theta: float = -np.pi / 4

    def __post_init__(self):
        if self.direction not in ("outgoing", "incoming"):
            raise DomainError(f"unknown wave direction {self.direction!r}")
        # matching constant is -pi/4 modulo pi
        offset = np.remainder(self.theta + np.pi / 4, np.pi)
        if min(offset, np.pi - offset) > 1e-12:
            raise DomainError(f"matching constant {self.theta} is not -pi/4 modulo pi",
                              value=self.theta)


@dataclass(frozen=True)
class ShadowWave:
    """Decaying and growing WKB solutions on the shadow side of a caustic."""
    decaying: float
    growing: float
    decaying_coefficient: float
    growing_coefficient: float
    exponent: float  # kappa times the shadow eikonal magnitude
    prefactor: float


@dataclass(frozen=True)
class SaddleResult:
    """Saddle point of the Hankel contour integrand.

    For the oscillatory branch phi_plus is real and W_value is W(phi_plus).
    On the shadow branch phi_plus is complex and the integral grows like
    exp(kappa * W_value).
    """
    phi_plus: complex
    W_value: float
    branch: str  # oscillatory, shadow
    second_derivative: complex
    order: float
    argument: float


@dataclass(frozen=True)
class PerihelionTerms:
    """Terms of the expansion of the libration action in R_s**2."""
    unperturbed_action: float
    libration_angle: float
    first_order_action: float
    first_order_quadrature: float
    advance: float


@dataclass(frozen=True)
class DelayScenario:
    """Radar sounding geometry, lengths in metres."""
    x_E: float = config.EARTH_DISTANCE
    x_V: float = config.VENUS_DISTANCE
    R: float = config.SOLAR_RADIUS
    R_s: float = config.SOLAR_SCHWARZSCHILD_RADIUS

    def __post_init__(self):
        if min(self.x_E, self.x_V, self.R) <= 0 or self.R_s < 0:
            raise DomainError("delay scenario lengths must be positive")


@dataclass(frozen=True)
class RadarDelay:
    """Excess light travel distance of a radar echo, in gravitational units."""
    one_way: float
    round_trip: float
    round_trip_approximate: float

    @property
    def relative_gap(self) -> float:
        return abs(self.round_trip - self.round_trip_approximate) / self.round_trip


@dataclass(frozen=True)
class Deflection:
    """Bending of a ray grazing a central mass."""
    model: str  # newtonian, quadrupole
    total_swing: float
    deflection: float
    small_angle: float
    quadrature_swing: Optional[float] = None


@dataclass(frozen=True)
class PerihelionAdvance:
    """Per-revolution advance of the perihelion from the two first-order routes."""
    angle: float
    caustic_route: float
    conic_route: float


@dataclass(frozen=True)
class MollerSplit:
    """Radial velocities of the two-effect split of light bending at radius r."""
    r: float
    v1: float
    v2: float
    v2_corrected: float
    kepler: float  # first-integral radial velocity with A = -1
    verbatim: bool = True

    @property
    def dimensionally_consistent(self) -> bool:
        return not self.verbatim


@dataclass
class ObservableReport:
    """A computed observable compared with a published value."""
    name: str
    value: float
    units: str
    method: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    reference: Optional[float] = None
    tolerance: Optional[float] = None

    @property
    def relative_error(self) -> Optional[float]:
        if self.reference is None:
            return None
        return abs(self.value - self.reference) / abs(self.reference)

    @property
    def passed(self) -> Optional[bool]:
        if self.reference is None or self.tolerance is None:
            return None
        return self.relative_error <= self.tolerance

    def to_dict(self) -> dict:
        """Convert the report to a flat dictionary."""
        return {
            'name': self.name,
            'value': self.value,
            'units': self.units,
            'method': self.method,
            'reference': self.reference,
            'relative_error': self.relative_error,
            'tolerance': self.tolerance,
            'status': None if self.passed is None else ("PASS" if self.passed else "FAIL")
        }


@dataclass(frozen=True)
class PathProblem:
    """Two-endpoint variational problem for the optical length."""
    medium: 'MediumModel'
    start: Tuple[float, float]  # (r, phi)
    end: Tuple[float, float]
    segments: int = 1000
    tolerance: float = config.PATH_TOLERANCE
    max_iterations: int = config.MAX_ITERATIONS
    resolution: float = 5e-3  # central node spacing over the chord's closest distance

    def __post_init__(self):
        if self.segments < 8:
            raise DomainError(f"at least 8 segments are needed, got {self.segments}",
                              value=self.segments)
        if self.tolerance <= 0 or self.max_iterations < 1 or self.resolution <= 0:
            raise DomainError("tolerance, max_iterations and resolution must be positive")
        lower, upper = self.medium.validity
        for r, _ in (self.start, self.end):
            if not lower <= r <= upper:
                raise DomainError(f"endpoint radius {r} lies outside the medium's validity interval",
                                  value=r, interval=(lower, upper))


@dataclass(frozen=True)
class PhaseJump:
    """Phase offset of a standing wave relative to kappa * S, measured on a radial grid."""
    offset: float
    jump: float  # outgoing minus incoming, less 2 kappa S
    spread: float  # largest deviation of a single sample from the mean offset
