"""
Configuration settings and the named constants table for fermat-optics.
"""
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Output directory for emitted tables
OUTPUT_DIR = os.getenv("FERMAT_OUTPUT_DIR", "data")

# Logging
LOG_FILE = os.getenv("FERMAT_LOG_FILE", "fermat_optics.log")
LOG_LEVEL = os.getenv("FERMAT_LOG_LEVEL", "INFO").upper()

# Numerical tolerances
QUAD_TOLERANCE = float(os.getenv("FERMAT_QUAD_TOLERANCE", "1e-12"))
ROOT_TOLERANCE = float(os.getenv("FERMAT_ROOT_TOLERANCE", "1e-12"))
PATH_TOLERANCE = float(os.getenv("FERMAT_PATH_TOLERANCE", "1e-10"))
MAX_ITERATIONS = int(os.getenv("FERMAT_MAX_ITERATIONS", "200"))

# Size of the read-only cache of reference Bessel values
BESSEL_CACHE_SIZE = int(os.getenv("FERMAT_BESSEL_CACHE", "4096"))

# Physical constants (SI)
SPEED_OF_LIGHT = 299792458.0          # m/s, exact
GRAVITATIONAL_CONSTANT = 6.67430e-11  # m^3 kg^-1 s^-2, CODATA 2018

# Conversions
ARCSEC_PER_RADIAN = 206264.806
SECONDS_PER_DAY = 86400.0
ASTRONOMICAL_UNIT = 1.495978707e11    # m, IAU 2012

# Sun
SOLAR_SCHWARZSCHILD_RADIUS = 2953.0   # m, 2GM/c^2 rounded
SOLAR_RADIUS = 6.96e8                 # m

# Radar sounding geometry: Earth and Venus mean orbital distances
EARTH_DISTANCE = 1.496e11             # m
VENUS_DISTANCE = 1.082e11             # m

# Mercury orbital elements
MERCURY_SEMI_MAJOR_AXIS = 5.79e10     # m
MERCURY_ECCENTRICITY = 0.2056
MERCURY_ENERGY_CONSTANT = 2.59e-8     # dimensionless -A, as quoted

# Published values the report reproduces
QUOTED_RADAR_DELAY = 2.4e-4           # s, round trip
QUOTED_PERIHELION_ADVANCE = 0.104     # arcsec per revolution
QUOTED_MEAN_MOTION = 8.34e-7          # 1/s
QUOTED_PERIOD_DAYS = 87.25            # days
QUOTED_PRECESSION_RATE = 4.25e-13     # 1/s
QUOTED_GRAZING_DEFLECTION = 0.875     # arcsec, Newtonian half value

# Commands exposed by the command-line interface
COMMANDS = [
    "delay",
    "deflect",
    "perihelion",
    "mercury",
    "eikonal",
    "bessel-check",
    "optimize-path",
    "report-all"
]

# Output formats
OUTPUT_FORMATS = [
    "csv",
    "json"
]
