"""Command-line interface.

Exit codes: 0 success (or CERTIFIED_STABLE), 1 NOT_CERTIFIED / theorem
violation, 2 input error, 3 coprimeness failure, 4 nominal plant not
certifiably stabilized.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass

import numpy as np

from . import io
from .bounds import sup_norm_certified, sup_norm_torus
from .grid import make_grid
from .metric import kappa
from .plants import BEZOUT_TOLERANCE, PlantError, make_plant
from .robustness import (
    DEFAULT_REFINEMENTS,
    EXAMPLE_THRESHOLD,
    NotStabilizedError,
    Verdict,
    certify,
    empirical_theorem_test,
    example_sweep,
    margin,
)
from .series import DimensionError, l1_norm

EXIT_OK, EXIT_NOT_CERTIFIED, EXIT_INPUT, EXIT_COPRIME, EXIT_NOT_STABILIZED = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    radial_steps: int = 21
    angular_steps: int = 126
    bezout_tolerance: float = BEZOUT_TOLERANCE
    json: bool = False

    def grid(self, nvars: int):
        try:
            return make_grid(nvars, self.radial_steps, self.angular_steps)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_INPUT) from exc


def _plant(path, config: RunConfig, nvars: int | None = None):
    try:
        num, den, wit = io.load_plant(path)
    except io.FormatError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    if nvars is not None and num.nvars != nvars:
        raise CliError(f"{path}: plant has {num.nvars} variables, expected {nvars}", EXIT_INPUT)
    grid = config.grid(num.nvars) if wit is None else None
    try:
        return make_plant(num, den, wit, grid, config.bezout_tolerance)
    except DimensionError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from exc
    except PlantError as exc:
        raise CliError(f"{path}: {exc}", EXIT_COPRIME) from exc


def _series(path, nvars: int | None = None):
    try:
        f = io.load_series(path)
    except io.FormatError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    if nvars is not None and f.nvars != nvars:
        raise CliError(f"{path}: series has {f.nvars} variables, expected {nvars}", EXIT_INPUT)
    return f


def _margin(p0, c, grid):
    try:
        return margin(p0, c, grid)
    except NotStabilizedError as exc:
        raise CliError(f"controller does not certifiably stabilize the nominal plant ({exc})",
                       EXIT_NOT_STABILIZED) from exc


# -- commands -----------------------------------------------------------------

def cmd_norm(args, config: RunConfig):
    f = _series(args.file)
    grid = config.grid(f.nvars)
    report = {
        "l1": l1_norm(f),
        "sup": sup_norm_certified(f, grid).to_dict(),
        "sup_torus": sup_norm_torus(f, grid).to_dict(),
        "grid": grid.describe(),
    }
    text = [
        f"l1 norm        : {report['l1']:.12g}",
        f"sup (polydisc) : [{report['sup']['lo']:.12g}, {report['sup']['hi']:.12g}]",
        f"sup (torus)    : [{report['sup_torus']['lo']:.12g}, {report['sup_torus']['hi']:.12g}]",
        f"grid delta     : {grid.covering_radius:.6g}",
    ]
    return EXIT_OK, report, text


def cmd_distance(args, config: RunConfig):
    p1 = _plant(args.plant1, config)
    p2 = _plant(args.plant2, config, p1.nvars)
    grid = config.grid(p1.nvars)
    est = kappa(p1, p2, grid)
    report = est.to_dict() | {"grid": grid.describe()}
    arg = ", ".join(f"{z:.6g}" for z in est.argmax_point.coords)
    text = [
        f"kappa lower : {est.lower:.12g}",
        f"kappa upper : {est.upper:.12g}",
        f"argmax      : ({arg})",
        f"grid delta  : {grid.covering_radius:.6g}   lipschitz: {est.lipschitz:.6g}",
    ]
    return EXIT_OK, report, text


def cmd_margin(args, config: RunConfig):
    p0 = _plant(args.plant, config)
    c = _series(args.controller, p0.nvars)
    grid = config.grid(p0.nvars)
    rep = _margin(p0, c, grid)
    report = rep.to_dict() | {"grid": grid.describe()}
    text = [
        f"k = ||c||_inf  in [{rep.k_bound.lo:.12g}, {rep.k_bound.hi:.12g}]",
        f"g = ||g0||_inf in [{rep.g_bound.lo:.12g}, {rep.g_bound.hi:.12g}]  ({rep.g_method})",
        f"margin         : {rep.margin:.12g}",
        f"nominal        : {rep.stabilizes_nominal}",
    ]
    return EXIT_OK, report, text


def _certificate_lines(cert):
    return [
        f"kappa in [{cert.kappa.lower:.8g}, {cert.kappa.upper:.8g}]  margin {cert.margin:.8g}",
        f"verdict          : {cert.verdict}",
        f"independent check: {cert.independent_check}",
        f"grid delta       : {cert.grid.covering_radius:.6g}"
        + (f" (refined x{cert.refinements[-1]})" if cert.refinements else ""),
    ]


def cmd_certify(args, config: RunConfig):
    p0 = _plant(args.nominal, config)
    p = _plant(args.plant, config, p0.nvars)
    c = _series(args.controller, p0.nvars)
    grid = config.grid(p0.nvars)
    report0 = _margin(p0, c, grid)
    refine = () if args.no_refine else DEFAULT_REFINEMENTS
    cert = certify(p, p0, c, grid, refine, report0)
    code = EXIT_OK if cert.verdict is Verdict.CERTIFIED_STABLE else EXIT_NOT_CERTIFIED
    return code, cert.to_dict(), _certificate_lines(cert)


def cmd_sweep(args, config: RunConfig):
    p0 = _plant(args.nominal, config)
    c = _series(args.controller, p0.nvars)
    grid = config.grid(p0.nvars)
    plants = [_plant(path, config, p0.nvars) for path in args.plants]
    report0 = _margin(p0, c, grid)
    refine = () if args.no_refine else DEFAULT_REFINEMENTS
    rows, text = [], [f"{'plant':<30} {'kappa_upper':>12} {'verdict':>17} {'direct':>13}"]
    for path, p in zip(args.plants, plants):
        cert = certify(p, p0, c, grid, refine, report0)
        rows.append({"plant": str(path)} | cert.to_dict())
        text.append(f"{str(path):<30} {cert.kappa.upper:>12.6g} {str(cert.verdict):>17} "
                    f"{str(cert.independent_check):>13}")
    ok = all(r["verdict"] == str(Verdict.CERTIFIED_STABLE) for r in rows)
    return (EXIT_OK if ok else EXIT_NOT_CERTIFIED), {"margin": report0.margin, "rows": rows}, text


def parse_range(spec: str) -> list[float]:
    """``start:stop:step`` (stop inclusive) or a single value."""
    parts = spec.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise CliError(f"bad alpha range {spec!r}", EXIT_INPUT) from exc
    if len(vals) == 1:
        return vals
    if len(vals) != 3 or vals[2] <= 0 or vals[1] < vals[0]:
        raise CliError(f"bad alpha range {spec!r}; expected start:stop:step", EXIT_INPUT)
    start, stop, step = vals
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def cmd_example(args, config: RunConfig):
    alphas = list(args.alpha) if args.alpha else parse_range(args.range)
    bad = [a for a in alphas if not abs(a) < 1]
    if bad:
        raise CliError(f"alpha values must lie in (-1, 1): {bad}", EXIT_INPUT)
    grid = config.grid(2)
    refine = () if args.no_refine else DEFAULT_REFINEMENTS
    rows = example_sweep(alphas, grid, refine)
    text = [
        "p_alpha = (z1 z2 - alpha) / (z1^2 z2^2 - 1),  c = z1 z2,  margin 1/6",
        f"guaranteed region |alpha| < 1/(4 sqrt 3) = {EXAMPLE_THRESHOLD:.6f}",
        f"{'alpha':>7} {'kappa_lo':>9} {'kappa_hi':>9} {'2|a|/sqrt3':>10} "
        f"{'verdict':>17} {'direct':>9} {'delta':>8}",
    ]
    for r in rows:
        text.append(
            f"{r.alpha:>7.4f} {r.kappa_lower:>9.5f} {r.kappa_upper:>9.5f} {r.analytic_bound:>10.5f} "
            f"{str(r.verdict):>17} {str(r.independent_check):>9} {r.grid_delta:>8.5f}"
        )
    report = {
        "threshold": EXAMPLE_THRESHOLD,
        "margin": rows[0].margin if rows else None,
        "rows": [r.to_dict() for r in rows],
    }
    return EXIT_OK, report, text


def cmd_test_theorem(args, config: RunConfig):
    if args.trials < 0:
        raise CliError("--trials must be nonnegative", EXIT_INPUT)
    grid = config.grid(2)
    rep = empirical_theorem_test(args.trials, args.seed, grid, max_l1=args.max_l1)
    report = rep.to_dict() | {"grid": grid.describe()}
    text = [f"{k:<24}: {v}" for k, v in report.items() if k not in ("violations", "grid")]
    code = EXIT_OK if rep.certified_not_stable == 0 else EXIT_NOT_CERTIFIED
    return code, report, text


# -- parser -------------------------------------------------------------------

def _global_flags(parser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--grid-radial", type=int, default=default(21),
                        help="radial samples per coordinate (default 21)")
    parser.add_argument("--grid-angular", type=int, default=default(126),
                        help="angular samples per coordinate (default 126)")
    parser.add_argument("--bezout-tol", type=float, default=default(BEZOUT_TOLERANCE),
                        help="l1 tolerance for Bezout witnesses (default 1e-9)")
    parser.add_argument("--json", action="store_true", default=default(False),
                        help="machine-readable JSON output")
    parser.add_argument("-v", "--verbose", action="store_true", default=default(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chordal",
        description="Chordal distance, robustness margins and stabilization certificates "
                    "for plants over the Wiener algebra of the polydisc.",
    )
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common], help="l1 and certified sup norm of a series")
    p.add_argument("file")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("distance", parents=[common], help="chordal distance between two plants")
    p.add_argument("plant1")
    p.add_argument("plant2")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("margin", parents=[common], help="robustness margin of a nominal loop")
    p.add_argument("plant")
    p.add_argument("controller")
    p.set_defaults(func=cmd_margin)

    p = sub.add_parser("certify", parents=[common], help="certify a perturbed plant")
    p.add_argument("nominal")
    p.add_argument("plant")
    p.add_argument("controller")
    p.add_argument("--no-refine", action="store_true", help="disable automatic grid refinement")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", parents=[common], help="certify several plant files against one nominal")
    p.add_argument("nominal")
    p.add_argument("controller")
    p.add_argument("plants", nargs="+")
    p.add_argument("--no-refine", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("example", parents=[common], help="run the bidisc example family")
    p.add_argument("--range", default="0:0.3:0.02", help="alpha range start:stop:step")
    p.add_argument("--alpha", type=float, action="append", help="explicit alpha (repeatable)")
    p.add_argument("--no-refine", action="store_true")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("test-theorem", parents=[common], help="randomized soundness harness")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--max-l1", type=float, default=0.05)
    p.set_defaults(func=cmd_test_theorem)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    config = RunConfig(args.grid_radial, args.grid_angular, args.bezout_tol, args.json)
    try:
        code, report, text = args.func(args, config)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    if config.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print("\n".join(text))
    return code


if __name__ == "__main__":
    sys.exit(main())
