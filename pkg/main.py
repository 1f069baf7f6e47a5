#!/usr/bin/env python3
"""
Fermat Optics - Main Entry Point

This script provides a command-line interface for reproducing the radar
delay, light deflection and perihelion numbers, checking eikonals and
Bessel asymptotics, and optimizing ray paths.
"""
import argparse
import json
import logging
import math
import sys
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

import config
from optics import asymptotics, eikonal, relativity, trajectories, variational
from optics.medium import (
    ConstantMedium, NewtonianMedium, QuadrupoleMedium, elements_from_conic, orbit_elements
)
from optics.models import DelayScenario, ObservableReport, PathProblem, UnitSystem
from optics.utils import ConvergenceError, DomainError, OutputError, relative_error
from reporting.acceptance import CRITERIA, run_acceptance
from reporting.exporter import default_output_path, emit_table
from reporting.scenarios import FIELDS, load_scenario

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3
EXIT_USAGE = 64
EXIT_OUTPUT = 74

# Flag defaults, SI units
DEFAULTS = {
    "delay": {"xe": config.EARTH_DISTANCE, "xv": config.VENUS_DISTANCE,
              "impact": config.SOLAR_RADIUS, "rs": config.SOLAR_SCHWARZSCHILD_RADIUS},
    "deflect": {"ra": config.SOLAR_RADIUS, "rs": config.SOLAR_SCHWARZSCHILD_RADIUS},
    "perihelion": {"a": config.MERCURY_SEMI_MAJOR_AXIS, "ecc": config.MERCURY_ECCENTRICITY,
                   "rs": config.SOLAR_SCHWARZSCHILD_RADIUS},
    "mercury": {},
    "eikonal": {"case": "free", "r_min": None, "r_max": None, "samples": 50,
                "ra": 1.0, "rs": 1.0, "energy": -0.5, "eta": 1.0},
    "bessel-check": {"kappa": 50.0, "ra": 1.0, "samples": 200, "eta": 1.0,
                     "r_min": None, "r_max": None},
    "optimize-path": {"medium": "quadrupole", "ra": 1.0, "rs": 1e-4, "energy": -1.0,
                      "r_far": 1e3, "segments": 2000, "tolerance": config.PATH_TOLERANCE,
                      "max_iterations": config.MAX_ITERATIONS},
    "report-all": {},
}

# Error bound of bessel-check relative to the local envelope
BESSEL_BOUND = 1e-2

EIKONAL_CASES = ["free", "shadow", "kepler", "parabolic", "quadrupole", "perihelion"]
PATH_MEDIA = ["constant", "newtonian", "quadrupole"]

REPORT_COLUMNS = ["name", "value", "units", "method", "reference", "relative_error",
                  "tolerance", "status", "inputs"]


class FermatArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that exits with EX_USAGE on malformed flags."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = FermatArgumentParser(add_help=False)
    output_group = common.add_argument_group("Output Options")
    output_group.add_argument("--format", choices=config.OUTPUT_FORMATS, help="Table format (default csv)")
    output_group.add_argument("--output", type=str,
                              help="Output file, - for stdout (default FERMAT_OUTPUT_DIR/<command>.<format>)")
    output_group.add_argument("--config", type=str, help="JSON scenario file with inputs and units")

    parser = FermatArgumentParser(description="Fermat-principle gravitational optics")
    subparsers = parser.add_subparsers(dest="command", required=True)

    delay = subparsers.add_parser("delay", parents=[common], help="Radar echo delay past a mass")
    delay.add_argument("--xe", type=float, help="Distance of the emitter from the closest approach (m)")
    delay.add_argument("--xv", type=float, help="Distance of the reflector from the closest approach (m)")
    delay.add_argument("--impact", type=float, help="Impact parameter (m)")
    delay.add_argument("--rs", type=float, help="Schwarzschild radius (m)")

    deflect = subparsers.add_parser("deflect", parents=[common], help="Newtonian and quadrupole light deflection")
    deflect.add_argument("--ra", type=float, help="Impact parameter (m)")
    deflect.add_argument("--rs", type=float, help="Schwarzschild radius (m)")

    perihelion = subparsers.add_parser("perihelion", parents=[common], help="Perihelion advance per revolution")
    perihelion.add_argument("--a", type=float, help="Semi-major axis (m)")
    perihelion.add_argument("--ecc", type=float, help="Eccentricity")
    perihelion.add_argument("--rs", type=float, help="Schwarzschild radius (m)")

    subparsers.add_parser("mercury", parents=[common], help="Mercury report against the quoted values")

    eikonal_parser = subparsers.add_parser("eikonal", parents=[common], help="Closed-form eikonal against quadrature")
    eikonal_parser.add_argument("--case", choices=EIKONAL_CASES, help="Eikonal to tabulate")
    eikonal_parser.add_argument("--r-min", dest="r_min", type=float, help="Smallest radius (m)")
    eikonal_parser.add_argument("--r-max", dest="r_max", type=float, help="Largest radius (m)")
    eikonal_parser.add_argument("--samples", type=int, help="Number of radii")
    eikonal_parser.add_argument("--ra", type=float, help="Angular momentum constant (m)")
    eikonal_parser.add_argument("--rs", type=float, help="Schwarzschild radius (m)")
    eikonal_parser.add_argument("--energy", type=float, help="Energy constant A")
    eikonal_parser.add_argument("--eta", type=float, help="Constant refractive index")

    bessel = subparsers.add_parser("bessel-check", parents=[common], help="Debye form against the reference J_nu")
    bessel.add_argument("--kappa", type=float, help="Wave number (1/m)")
    bessel.add_argument("--ra", type=float, help="Caustic radius (m)")
    bessel.add_argument("--samples", type=int, help="Number of radii")
    bessel.add_argument("--eta", type=float, help="Constant refractive index")
    bessel.add_argument("--r-min", dest="r_min", type=float, help="Smallest radius (m)")
    bessel.add_argument("--r-max", dest="r_max", type=float, help="Largest radius (m)")
    bessel.add_argument("--bound", type=float, help=f"Allowed error over envelope (default {BESSEL_BOUND})")

    path = subparsers.add_parser("optimize-path", parents=[common], help="Minimize the optical length")
    path.add_argument("--medium", choices=PATH_MEDIA, help="Medium the path runs through")
    path.add_argument("--ra", type=float, help="Angular momentum constant (m)")
    path.add_argument("--rs", type=float, help="Schwarzschild radius (m)")
    path.add_argument("--energy", type=float, help="Energy constant A")
    path.add_argument("--r-far", dest="r_far", type=float, help="Radius of both endpoints (m)")
    path.add_argument("--segments", type=int, help="Number of chords")
    path.add_argument("--tolerance", type=float, help="Stationarity tolerance")
    path.add_argument("--max-iterations", dest="max_iterations", type=int, help="Iteration cap")

    report = subparsers.add_parser("report-all", parents=[common], help="Evaluate every acceptance criterion")
    report.add_argument("--criteria", type=int, nargs="+", choices=sorted(CRITERIA),
                        help="Criterion numbers to run (default all)")

    return parser.parse_args(argv)


def resolve_inputs(args: argparse.Namespace) -> Tuple[Dict[str, Any], Dict[str, float], str, str]:
    """
    Merge flags, scenario file and defaults; flags win over the file.

    Returns:
        (inputs, tolerances, format, output path)
    """
    scenario = load_scenario(args.config) if args.config else None
    if scenario is not None and scenario.command != args.command:
        raise DomainError(f"scenario is for {scenario.command!r}, not {args.command!r}")

    inputs = {}
    for name in FIELDS[args.command]:
        value = getattr(args, name, None)
        if value is None and scenario is not None:
            value = scenario.inputs.get(name)
        inputs[name] = DEFAULTS[args.command][name] if value is None else value

    tolerances = dict(scenario.tolerances) if scenario is not None else {}
    if getattr(args, "bound", None) is not None:
        tolerances["bound"] = args.bound
    explicit = (getattr(args, "tolerance", None) is not None
                or (scenario is not None and "tolerance" in scenario.inputs))
    if "path" in tolerances and args.command == "optimize-path" and not explicit:
        inputs["tolerance"] = tolerances["path"]

    fmt = args.format or (scenario.format if scenario is not None else None) or "csv"
    output = args.output or (scenario.output if scenario is not None else None) \
        or default_output_path(args.command, fmt)
    return inputs, tolerances, fmt, output


def _echo(inputs: Dict[str, Any]) -> str:
    return json.dumps(inputs, sort_keys=True)


def _report_rows(reports: List[ObservableReport]) -> List[Dict[str, Any]]:
    rows = []
    for report in reports:
        row = report.to_dict()
        row['inputs'] = _echo(report.inputs)
        rows.append(row)
    return rows


def _status(reports: List[ObservableReport]) -> int:
    failed = [r.name for r in reports if r.passed is False]
    if failed:
        logger.warning(f"Outside tolerance: {', '.join(failed)}")
        return EXIT_DOMAIN
    return EXIT_OK


def command_delay(inputs: Dict[str, Any], tolerances: Dict[str, float]):
    scenario = DelayScenario(x_E=inputs["xe"], x_V=inputs["xv"], R=inputs["impact"], R_s=inputs["rs"])
    units = UnitSystem("SI")
    delay = relativity.radar_delay(scenario)
    quadrature = relativity.radar_delay_quadrature(scenario)
    golden = scenario == DelayScenario()

    def seconds(value: float) -> float:
        return units.to_si(value, "time")

    reports = [
        ObservableReport("one_way", seconds(delay.one_way), "s", "exact", inputs),
        ObservableReport("one_way_quadrature", seconds(quadrature), "s", "exact", inputs),
        ObservableReport("round_trip", seconds(delay.round_trip), "s", "exact", inputs,
                         reference=config.QUOTED_RADAR_DELAY if golden else None,
                         tolerance=0.05 if golden else None),
        ObservableReport("round_trip_log", seconds(delay.round_trip_approximate), "s", "approximate", inputs,
                         reference=seconds(delay.round_trip) if delay.round_trip > 0 else None,
                         tolerance=5e-3 if delay.round_trip > 0 else None),
    ]
    print(f"Round-trip delay: {reports[2].value:.6e} s (log approximation {reports[3].value:.6e} s)")
    return _report_rows(reports), REPORT_COLUMNS, _status(reports)


def command_deflect(inputs: Dict[str, Any], tolerances: Dict[str, float]):
    r_a, R_s = inputs["ra"], inputs["rs"]
    newtonian = relativity.deflection_newtonian(r_a, R_s)
    quadrupole = relativity.deflection_quadrupole(r_a, R_s)
    grazing_sun = r_a == config.SOLAR_RADIUS and R_s == config.SOLAR_SCHWARZSCHILD_RADIUS

    reports = [
        ObservableReport("newtonian_swing", newtonian.total_swing, "rad", "exact", inputs),
        ObservableReport("newtonian_deflection", newtonian.deflection, "rad", "exact", inputs),
        ObservableReport("newtonian_deflection_arcsec", relativity.arcseconds(newtonian.small_angle),
                         "arcsec", "approximate", inputs,
                         reference=config.QUOTED_GRAZING_DEFLECTION if grazing_sun else None,
                         tolerance=1e-3 if grazing_sun else None),
        ObservableReport("quadrupole_swing", quadrupole.total_swing, "rad", "approximate", inputs,
                         reference=quadrupole.quadrature_swing, tolerance=1e-10),
        ObservableReport("quadrupole_deflection", quadrupole.deflection, "rad", "approximate", inputs),
        ObservableReport("quadrupole_deflection_arcsec", relativity.arcseconds(quadrupole.deflection),
                         "arcsec", "approximate", inputs),
    ]
    if newtonian.deflection > 0:
        reports.append(ObservableReport("deflection_ratio", quadrupole.deflection / newtonian.deflection,
                                        "1", "approximate", inputs))
        reports.append(ObservableReport("cross_section", relativity.cross_section(quadrupole.deflection, R_s),
                                        "m^2/sr", "approximate", inputs))
    print(f"Deflection: Newtonian {reports[2].value:.6f} arcsec, quadrupole {reports[5].value:.6f} arcsec")
    return _report_rows(reports), REPORT_COLUMNS, _status(reports)


def command_perihelion(inputs: Dict[str, Any], tolerances: Dict[str, float]):
    el = elements_from_conic(inputs["a"], inputs["ecc"], inputs["rs"])
    advance = relativity.perihelion_advance(el)
    quadrature = relativity.perihelion_advance_quadrature(el)
    mercury = (inputs["a"], inputs["ecc"], inputs["rs"]) == (
        config.MERCURY_SEMI_MAJOR_AXIS, config.MERCURY_ECCENTRICITY, config.SOLAR_SCHWARZSCHILD_RADIUS)

    reports = [
        ObservableReport("advance", advance.caustic_route, "rad", "approximate", inputs),
        ObservableReport("advance_conic_route", advance.conic_route, "rad", "approximate", inputs,
                         reference=advance.caustic_route, tolerance=1e-12),
        ObservableReport("advance_quadrature", quadrature, "rad", "approximate", inputs,
                         reference=advance.caustic_route, tolerance=1e-6),
        ObservableReport("advance_arcsec", relativity.arcseconds(advance.angle), "arcsec", "approximate", inputs,
                         reference=config.QUOTED_PERIHELION_ADVANCE if mercury else None,
                         tolerance=0.01 if mercury else None),
    ]
    print(f"Perihelion advance: {advance.angle:.6e} rad = {reports[3].value:.6f} arcsec per revolution")
    return _report_rows(reports), REPORT_COLUMNS, _status(reports)


def command_mercury(inputs: Dict[str, Any], tolerances: Dict[str, float]):
    reports = relativity.mercury_report()
    for report in reports:
        print(f"{report.name}: {report.value:.6e} {report.units}")
    return _report_rows(reports), REPORT_COLUMNS, _status(reports)


def _eikonal_case(inputs: Dict[str, Any]):
    """Closed form, quadrature radicand, turning point and default radial range for a case."""
    case, r_a, R_s, A, eta = inputs["case"], inputs["ra"], inputs["rs"], inputs["energy"], inputs["eta"]

    if case == "free":
        return (lambda r: eikonal.eikonal_free(r, r_a, eta), lambda rho: eta * eta * rho * rho - r_a * r_a,
                r_a / eta, (r_a / eta, 10.0 * r_a / eta))
    if case == "shadow":
        return (lambda r: eikonal.eikonal_shadow(r, r_a, eta), lambda rho: r_a * r_a - eta * eta * rho * rho,
                r_a / eta, (0.05 * r_a / eta, r_a / eta))
    if case == "kepler":
        el = orbit_elements(A, r_a, R_s)
        upper = el.r_plus if el.bound else 10.0 * el.r_minus
        return (lambda r: eikonal.eikonal_kepler(r, el), lambda rho: -A * rho * rho + R_s * rho - r_a * r_a,
                el.r_minus, (el.r_minus, upper))
    if case == "parabolic":
        perihelion = r_a * r_a / R_s
        return (lambda r: eikonal.eikonal_parabolic(r, r_a, R_s), lambda rho: R_s * rho - r_a * r_a,
                perihelion, (perihelion, 10.0 * perihelion))
    if case == "quadrupole":
        caustic = eikonal.quadrupole_caustic(r_a, R_s)
        return (lambda r: eikonal.eikonal_quadrupole(r, r_a, R_s),
                lambda rho: rho * rho - r_a * r_a * (1.0 - R_s / rho), caustic, (caustic, 10.0 * r_a))
    inner, perihelion, aphelion = eikonal.perihelion_turning_points(A, r_a, R_s)
    return (lambda r: eikonal.eikonal_perihelion(r, A, r_a, R_s),
            lambda rho: -A * rho * rho + R_s * rho - r_a * r_a + R_s * r_a * r_a / rho,
            perihelion, (perihelion, aphelion))


def command_eikonal(inputs: Dict[str, Any], tolerances: Dict[str, float]):
    closed, radicand, turning, (low, high) = _eikonal_case(inputs)
    r_min = low if inputs["r_min"] is None else inputs["r_min"]
    r_max = high if inputs["r_max"] is None else inputs["r_max"]
    if inputs["samples"] < 1 or not r_max >= r_min > 0:
        raise DomainError(f"need samples >= 1 and 0 < r_min <= r_max, got {r_min}, {r_max}")

    rows = []
    for r in np.linspace(r_min, r_max, inputs["samples"]):
        value = closed(float(r))
        quadrature = eikonal.quadrature_eikonal(radicand, turning, float(r))
        magnitude = value.imag if value.branch == "shadow" else value.value
        oracle = -quadrature if value.branch == "shadow" else quadrature
        rows.append({
            'r': float(r),
            'value': value.value,
            'imag': value.imag,
            'branch': value.branch,
            'quadrature': oracle,
            'rel_err': relative_error(magnitude, oracle) if oracle != 0 else abs(magnitude)
        })
    worst = max(row['rel_err'] for row in rows)
    print(f"Eikonal {inputs['case']}: largest deviation from quadrature {worst:.3e}")
    return rows, ["r", "value", "imag", "branch", "quadrature", "rel_err"], EXIT_OK


def command_bessel_check(inputs: Dict[str, Any], tolerances: Dict[str, float]):
    kappa, r_a, eta = inputs["kappa"], inputs["ra"], inputs["eta"]
    r_min = 1.5 * r_a / eta if inputs["r_min"] is None else inputs["r_min"]
    r_max = 3.0 * r_a / eta if inputs["r_max"] is None else inputs["r_max"]
    if inputs["samples"] < 1:
        raise DomainError(f"need at least one sample, got {inputs['samples']}")
    rows = asymptotics.debye_error_table(kappa, r_a, np.linspace(r_min, r_max, inputs["samples"]), eta)

    bound = tolerances.get("bound", BESSEL_BOUND)
    worst = max(row['rel_err'] for row in rows)
    status = EXIT_OK if worst <= bound else EXIT_DOMAIN
    print(f"Debye form: largest error {worst:.3e} of the envelope, bound {bound:g} "
          f"-> {'PASS' if status == EXIT_OK else 'FAIL'}")
    return rows, ["r", "J_exact", "WKB", "abs_err", "envelope", "rel_err"], status


def _path_medium(inputs: Dict[str, Any]):
    kind = inputs["medium"]
    if kind == "constant":
        if inputs["energy"] >= 0:
            raise DomainError("constant medium needs energy A < 0 (index sqrt(-A))")
        return ConstantMedium(eta0=math.sqrt(-inputs["energy"]))
    if kind == "newtonian":
        return NewtonianMedium(A=inputs["energy"], R_s=inputs["rs"])
    return QuadrupoleMedium(A=inputs["energy"], R_s=inputs["rs"], r_a=inputs["ra"])


def command_optimize_path(inputs: Dict[str, Any], tolerances: Dict[str, float]):
    medium = _path_medium(inputs)
    start, end, r_min = trajectories.ray_endpoints(medium, inputs["ra"], inputs["r_far"])
    problem = PathProblem(medium=medium, start=start, end=end, segments=inputs["segments"],
                          tolerance=inputs["tolerance"], max_iterations=inputs["max_iterations"])
    path = variational.minimize_path(problem)
    length = variational.optical_length(path, medium)
    print(f"Optical length {length:.12e}, closest approach {float(np.min(path.r)):.6e} (exact ray {r_min:.6e})")
    try:
        print(f"Measured deflection {variational.measure_deflection(path):.6e} rad")
    except DomainError as e:
        logger.info(f"Deflection not measured: {e}")

    x, y = path.cartesian()
    rows = [{'index': i, 'r': float(path.r[i]), 'phi': float(path.phi[i]), 'x': float(x[i]), 'y': float(y[i])}
            for i in range(len(path))]
    return rows, ["index", "r", "phi", "x", "y"], EXIT_OK


def command_report_all(inputs: Dict[str, Any], tolerances: Dict[str, float], criteria=None):
    results = run_acceptance(criteria)
    status = EXIT_OK
    for number in sorted({r.criterion for r in results}):
        passed = all(r.passed for r in results if r.criterion == number)
        print(f"Criterion {number} ({CRITERIA[number][0]}): {'PASS' if passed else 'FAIL'}")
        if not passed:
            status = EXIT_DOMAIN
    rows = [r.to_dict() for r in results]
    return rows, ["criterion", "check", "value", "reference", "error", "bound", "status", "detail"], status


COMMAND_HANDLERS = {
    "delay": command_delay,
    "deflect": command_deflect,
    "perihelion": command_perihelion,
    "mercury": command_mercury,
    "eikonal": command_eikonal,
    "bessel-check": command_bessel_check,
    "optimize-path": command_optimize_path,
    "report-all": command_report_all,
}


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one command.

    Args:
        argv: Command-line arguments without the program name

    Returns:
        Exit code: 0 success, 2 invalid input or failed check, 3 no convergence,
        64 usage error, 74 output error
    """
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        inputs, tolerances, fmt, output = resolve_inputs(args)
        logger.info(f"Running {args.command} with {_echo(inputs)}")
        handler = COMMAND_HANDLERS[args.command]
        if args.command == "report-all":
            rows, columns, status = handler(inputs, tolerances, args.criteria)
        else:
            rows, columns, status = handler(inputs, tolerances)
        emit_table(rows, fmt, output, columns)
        return status

    except DomainError as e:
        logger.error(f"Invalid input for {args.command}: {e}")
        return EXIT_DOMAIN
    except ConvergenceError as e:
        logger.error(f"No convergence in {args.command}: {e}")
        return EXIT_CONVERGENCE
    except OutputError as e:
        logger.error(f"Output failed for {args.command}: {e}")
        return EXIT_OUTPUT


def main():
    """Main entry point."""
    logging.basicConfig(
        level=config.LOG_LEVEL,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(config.LOG_FILE),
            logging.StreamHandler()
        ]
    )
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
