"""Command-line front end: parameter parsing, sweep execution, CSV emission.

Subcommands
-----------
g2        g2_C(tau, tauc) over a tau grid at fixed tauc.
rcd       R_cd(tau) over a tau grid.
converge  g2_C at fixed tau over a truncation-order grid (tauc = 0).
map       g2_C over a (tau, tauc) grid.
verify    engine vs. closed-form benchmark grid; exits 2 on failure.

Times on the wire are nanoseconds (matching the usual axis convention);
internally everything is seconds.  Exactly one of --fwhm-mhz / --sigma-rad-s
selects the spectral width; the default corresponds to a Gaussian spectrum
with 15/(2 pi) MHz FWHM in ordinary frequency.

Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from math import log, pi, sqrt

from heraldg2 import oracle
from heraldg2.correlator import ProjectionBasis, SpectralModel
from heraldg2.fock_core import ConfigurationError, UsageError
from heraldg2.statistics import (
    CorrelationRequest,
    SweepSpec,
    evaluate_point,
    sweep_points,
)

#: Default spectral FWHM in ordinary frequency, MHz.
DEFAULT_FWHM_MHZ = 15.0 / (2.0 * pi)

NS = 1e-9


def sigma_from_fwhm_mhz(fwhm_mhz: float) -> float:
    """Angular-frequency standard deviation from an ordinary-frequency FWHM."""
    return 2.0 * pi * fwhm_mhz * 1e6 / (2.0 * sqrt(2.0 * log(2.0)))


def _parse_grid(text: str) -> tuple[float, ...]:
    """Parse 'start:stop:step' (inclusive of stop within half a step) or a scalar."""
    parts = text.split(":")
    if len(parts) == 1:
        return (float(parts[0]),)
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"grid must be 'start:stop:step' or a single value, got {text!r}"
        )
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise argparse.ArgumentTypeError("grid step must be positive")
    if stop < start:
        raise argparse.ArgumentTypeError("grid stop must be >= start")
    out = []
    v = start
    i = 0
    while v <= stop + step * 0.5:
        out.append(v)
        i += 1
        v = start + i * step
    return tuple(out)


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heraldg2",
        description="Second-order photon correlations of two incoherent weak lasers",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p: argparse.ArgumentParser, needs_alpha=True) -> None:
        if needs_alpha:
            p.add_argument("--alpha", type=float, required=True,
                           help="mean photon number of the undivided laser")
            p.add_argument("--basis", choices=["dd", "ad"], required=True)
        spectral = p.add_mutually_exclusive_group()
        spectral.add_argument("--fwhm-mhz", type=float, default=None,
                              help=f"spectral FWHM in MHz (default {DEFAULT_FWHM_MHZ:.4f})")
        spectral.add_argument("--sigma-rad-s", type=float, default=None,
                              help="angular-frequency standard deviation in rad/s")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--threads", type=int, default=1)

    p_g2 = sub.add_parser("g2", help="g2_C over a tau grid at fixed tauc")
    add_common(p_g2)
    p_g2.add_argument("--pmax", type=int, required=True)
    p_g2.add_argument("--tau", type=_parse_grid, required=True,
                      help="tau grid in ns, start:stop:step")
    p_g2.add_argument("--tauc", type=float, default=0.0, help="tauc in ns")

    p_rcd = sub.add_parser("rcd", help="R_cd over a tau grid")
    add_common(p_rcd)
    p_rcd.add_argument("--pmax", type=int, required=True)
    p_rcd.add_argument("--tau", type=_parse_grid, required=True)

    p_con = sub.add_parser("converge", help="g2_C vs truncation order at fixed tau")
    add_common(p_con)
    p_con.add_argument("--pmax", type=int, required=True)
    p_con.add_argument("--pmin", type=int, default=2)
    p_con.add_argument("--tau-fixed", type=float, required=True, help="tau in ns")

    p_map = sub.add_parser("map", help="g2_C over a (tau, tauc) grid")
    add_common(p_map)
    p_map.add_argument("--pmax", type=int, required=True)
    p_map.add_argument("--tau", type=_parse_grid, required=True)
    p_map.add_argument("--tauc", type=_parse_grid, required=True)

    p_ver = sub.add_parser("verify", help="engine vs closed-form benchmarks")
    add_common(p_ver, needs_alpha=False)
    p_ver.add_argument("--tolerance", type=float, default=1e-9)
    return parser


def _spectral(args) -> SpectralModel:
    if args.sigma_rad_s is not None:
        return SpectralModel(sigma=args.sigma_rad_s)
    fwhm = args.fwhm_mhz if args.fwhm_mhz is not None else DEFAULT_FWHM_MHZ
    return SpectralModel(sigma=sigma_from_fwhm_mhz(fwhm))


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _run_sweep(spec: SweepSpec, threads: int) -> list[dict]:
    points = sweep_points(spec)
    if threads <= 1:
        return [evaluate_point(spec, pt) for pt in points]
    # Results are collected in grid order regardless of completion order, so
    # the output is byte-identical for any thread count.
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda pt: evaluate_point(spec, pt), points))


_GRID_FLAGS = ("--tau", "--tauc", "--tau-fixed")
_GRID_VALUE = re.compile(r"-?\d+(\.\d+)?([eE][-+]?\d+)?(:-?[\d.eE+-]+){0,2}$")


def _join_negative_grids(argv: list[str]) -> list[str]:
    """Fold '--tau -200:200:5' into '--tau=-200:200:5'.

    argparse treats any token starting with '-' as an option, so grid values
    with a negative start would otherwise require the '=' spelling.
    """
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _GRID_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and _GRID_VALUE.match(nxt):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_negative_grids(list(argv)))
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0

    try:
        spectral = _spectral(args)
        if args.subcommand == "verify":
            report = oracle.verify_engine(sigma=spectral.sigma)
            header = ["p", "branch", "alpha", "x", "engine", "closed_form", "rel_err"]
            rows = [[r[h] for h in header] for r in report.rows]
            _write_csv(args.out, header, rows)
            print(
                f"verify: {len(report.rows)} points, max rel err {report.max_rel_err:.3e}"
                + (f" (worst at {report.worst})" if report.worst else "")
            )
            return 0 if report.max_rel_err <= args.tolerance else 2

        basis = ProjectionBasis(args.basis)
        base_req = CorrelationRequest(
            alpha=args.alpha,
            P=args.pmax,
            basis=basis,
            spectral=spectral,
            tau=getattr(args, "tau_fixed", 0.0) * NS
            if args.subcommand == "converge"
            else 0.0,
        )

        if args.subcommand == "g2":
            spec = SweepSpec(
                kind="g2",
                request=base_req,
                tau_grid=tuple(t * NS for t in args.tau),
                tauc_grid=(args.tauc * NS,),
            )
            header = ["tau_ns", "tauc_ns", "alpha", "pmax", "basis", "sigma_rad_s", "g2", "status"]
            ns_points = [(t, args.tauc) for t in args.tau]
            rows = [
                [t_ns, tc_ns, args.alpha, args.pmax, args.basis,
                 spectral.sigma, r["value"], r["status"]]
                for (t_ns, tc_ns), r in zip(ns_points, _run_sweep(spec, args.threads))
            ]
        elif args.subcommand == "map":
            spec = SweepSpec(
                kind="map",
                request=base_req,
                tau_grid=tuple(t * NS for t in args.tau),
                tauc_grid=tuple(t * NS for t in args.tauc),
            )
            header = ["tau_ns", "tauc_ns", "alpha", "pmax", "basis", "sigma_rad_s", "g2", "status"]
            ns_points = [(t, tc) for t in args.tau for tc in args.tauc]
            rows = [
                [t_ns, tc_ns, args.alpha, args.pmax, args.basis,
                 spectral.sigma, r["value"], r["status"]]
                for (t_ns, tc_ns), r in zip(ns_points, _run_sweep(spec, args.threads))
            ]
        elif args.subcommand == "rcd":
            spec = SweepSpec(
                kind="rcd",
                request=base_req,
                tau_grid=tuple(t * NS for t in args.tau),
            )
            header = ["tau_ns", "alpha", "pmax", "basis", "sigma_rad_s", "rcd", "status"]
            rows = [
                [t_ns, args.alpha, args.pmax, args.basis,
                 spectral.sigma, r["value"], r["status"]]
                for t_ns, r in zip(args.tau, _run_sweep(spec, args.threads))
            ]
        else:  # converge
            if args.pmin < 1 or args.pmax < args.pmin:
                raise UsageError("need 1 <= pmin <= pmax")
            spec = SweepSpec(
                kind="converge",
                request=base_req,
                p_grid=tuple(range(args.pmin, args.pmax + 1)),
            )
            header = ["p", "tau_ns", "alpha", "basis", "sigma_rad_s", "g2", "status"]
            rows = [
                [r["p"], args.tau_fixed, args.alpha, args.basis,
                 spectral.sigma, r["value"], r["status"]]
                for r in _run_sweep(spec, args.threads)
            ]
        _write_csv(args.out, header, rows)
        return 0
    except (UsageError, ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
