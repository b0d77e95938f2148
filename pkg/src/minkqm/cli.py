"""Command-line interface: spectra, wavefunctions, potentials, phases,
duality maps and the verification suites, emitted as JSON or CSV records.

Output contract
---------------
JSON: one header object line, then one object per record.  CSV: a header
row, then one row per record.  Every record carries schema_version,
command, hbar and mass alongside its payload, and floats are serialized
as shortest round-trip decimals, so identical configurations produce
byte-identical output and the two formats carry identical numbers.

Exit codes: 0 success, 1 verification failure, 2 usage/config error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from typing import Sequence

import numpy as np

from . import spectra, verification
from .errors import (
    BracketError,
    ConsistencyError,
    ConvergenceError,
    DomainError,
    FitQualityError,
    InsufficientRootsError,
    PoleError,
)
from .model import (
    Coulomb,
    Free,
    Oscillator,
    PhysicalParams,
    effective_potential,
    euclidean_effective_for,
    potential,
)

SCHEMA_VERSION = 1
_DEFAULT_TOLERANCES = {"series": 1e-13, "solver": 1e-10, "fit": 1e-4}

_NUMERICAL_ERRORS = (
    BracketError,
    ConvergenceError,
    InsufficientRootsError,
    FitQualityError,
    ConsistencyError,
    OverflowError,
)
_USAGE_ERRORS = (DomainError, PoleError)


class UsageError(Exception):
    pass


# ------------------------------------------------------------ arg plumbing

def _parse_level_range(text: str) -> range:
    """Inclusive integer range 'a..b' (either end may be negative)."""
    try:
        lo_s, hi_s = text.split("..")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError as exc:
        raise UsageError(f"bad level range {text!r}; expected form a..b") from exc
    if hi < lo:
        raise UsageError(f"bad level range {text!r}: upper end below lower end")
    return range(lo, hi + 1)


def _parse_tolerances(pairs: list[str] | None) -> dict[str, float]:
    tol = dict(_DEFAULT_TOLERANCES)
    for item in pairs or []:
        name, _, value = item.partition("=")
        if not _ or name not in tol:
            raise UsageError(
                f"bad --tol {item!r}; known names: {', '.join(sorted(tol))}"
            )
        try:
            parsed = float(value)
        except ValueError as exc:
            raise UsageError(f"bad --tol value in {item!r}") from exc
        if not parsed > 0:
            raise UsageError(f"tolerance {name} must be positive, got {parsed}")
        tol[name] = parsed
    return tol


def _load_config_args(path: str) -> list[str]:
    """Flat key=value config file -> pseudo command-line flags.

    Grammar: one `key = value` per line; blank lines and #-comments
    ignored; keys are long option names without dashes (hyphen or
    underscore spelling); boolean options use true/false.  Command-line
    flags win because they are parsed after these.
    """
    args: list[str] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key = key.strip().replace("_", "-")
        value = value.strip()
        if not key or not value:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                args.append(f"--{key}")
        else:
            args.extend([f"--{key}", value])
    return args


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--hbar", type=float, default=1.0, help="Planck constant (default 1)")
    common.add_argument("--mass", type=float, default=1.0, help="particle mass (default 1)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="PATH", help="write records to PATH instead of stdout")
    common.add_argument(
        "--tol",
        action="append",
        metavar="NAME=VALUE",
        help="override a named tolerance (series, solver, fit); repeatable",
    )
    common.add_argument("--config", metavar="PATH", help="flat key=value config file")
    return common


def _grid_arguments(sub: argparse.ArgumentParser, default_min: float, default_max: float):
    sub.add_argument("--grid-min", type=float, default=default_min)
    sub.add_argument("--grid-max", type=float, default=default_max)
    sub.add_argument("--grid-points", type=int, default=200)
    sub.add_argument("--grid-spacing", choices=("linear", "log"), default="linear")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="minkqm",
        description="Quantum spectra and wavefunctions on the Minkowski plane.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spectrum", parents=[common], help="energy levels")
    sp.add_argument("--system", choices=("coulomb", "free", "oscillator"), required=True)
    sp.add_argument("--alpha", type=float, default=1.0, help="Coulomb coupling")
    sp.add_argument("--omega", type=float, default=1.0, help="oscillator frequency")
    sp.add_argument("--M", type=float, required=True, help="angular eigenvalue (M_osc for the oscillator)")
    sp.add_argument("--closed", action="store_true", help="closed-form branch instead of the quantized one")
    sp.add_argument("--E0", type=float, help="reference level for the quantized branch")
    sp.add_argument("--n", required=True, metavar="A..B", help="inclusive level index range")

    wf = subs.add_parser("wavefunction", parents=[common], help="radial amplitude samples")
    wf.add_argument("--system", choices=("coulomb", "oscillator"), required=True)
    wf.add_argument("--branch", choices=("u1", "u2", "third"), default="u1")
    wf.add_argument("--g", type=float, help="Coulomb strength parameter")
    wf.add_argument("--M", type=float, required=True)
    wf.add_argument("--gamma", default="auto", help="reflection phase for the third branch, or 'auto'")
    wf.add_argument("--omega", type=float, default=1.0)
    wf.add_argument("--n", type=int, default=0, help="oscillator level index")
    wf.add_argument("--phi", type=float, default=0.0, help="oscillator angular coordinate")
    _grid_arguments(wf, 0.01, 30.0)

    pot = subs.add_parser("potential", parents=[common], help="potential and effective potentials")
    pot.add_argument("--system", choices=("coulomb", "free", "oscillator"), required=True)
    pot.add_argument("--alpha", type=float, default=1.0)
    pot.add_argument("--omega", type=float, default=1.0)
    pot.add_argument("--M", type=float, required=True)
    _grid_arguments(pot, 0.1, 10.0)

    ph = subs.add_parser("phase", parents=[common], help="reflection phase gamma and beta")
    ph.add_argument("--g", type=float, required=True)
    ph.add_argument("--M", type=float, required=True)
    ph.add_argument("--r0", type=float, help="length unit for beta (default natural-units g/2)")

    du = subs.add_parser("duality", parents=[common], help="Coulomb-oscillator duality map")
    du.add_argument("--alpha", type=float, required=True)
    du.add_argument("--EC", type=float, required=True, help="Coulomb energy (negative)")
    du.add_argument("--MC", type=float, required=True, help="Coulomb angular eigenvalue")
    du.add_argument("--r0-scale", type=float, required=True)

    ve = subs.add_parser("verify", parents=[common], help="run invariant suites")
    ve.add_argument("suite", choices=verification.SUITES + ("all",))
    return parser


# ------------------------------------------------------------ emission

def _record(command: str, pp: PhysicalParams, payload: dict) -> dict:
    rec = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "hbar": pp.hbar,
        "mass": pp.mass,
    }
    rec.update(payload)
    return rec


def _serialize(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(records: list[dict], command: str, pp: PhysicalParams, fmt: str) -> str:
    if fmt == "json":
        lines = [
            json.dumps(
                {
                    "schema_version": SCHEMA_VERSION,
                    "command": command,
                    "units": {"hbar": pp.hbar, "mass": pp.mass},
                }
            )
        ]
        lines.extend(json.dumps(rec) for rec in records)
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if records:
        cols = list(records[0].keys())
        writer.writerow(cols)
        for rec in records:
            writer.writerow([_serialize(rec[c]) for c in cols])
    return buf.getvalue()


def _grid(args) -> np.ndarray:
    lo, hi, n = args.grid_min, args.grid_max, args.grid_points
    if n < 2:
        raise UsageError(f"grid needs at least 2 points, got {n}")
    if not lo < hi:
        raise UsageError(f"grid needs min < max, got [{lo}, {hi}]")
    if args.grid_spacing == "log":
        if lo <= 0:
            raise UsageError("log grid needs a positive lower end")
        return np.exp(np.linspace(math.log(lo), math.log(hi), n))
    return np.linspace(lo, hi, n)


# ------------------------------------------------------------ commands

def _cmd_spectrum(args, pp: PhysicalParams, tol: dict) -> list[dict]:
    levels = _parse_level_range(args.n)
    records = []
    if args.closed:
        if args.system == "free":
            raise UsageError(
                "the free particle has no closed-form discrete branch; "
                "use the quantized mode with --E0"
            )
        if levels.start < 0:
            raise UsageError("closed-form branch needs level indices n >= 0")
        for n in levels:
            if args.system == "coulomb":
                energy = spectra.coulomb_closed_spectrum(pp, args.alpha, n, args.M)
            else:
                energy = spectra.oscillator_closed_spectrum(pp, args.omega, n, args.M)
            records.append(
                {
                    "system": args.system,
                    "branch": spectra.Branch.CLOSED_FORM_U1.value,
                    "n": n,
                    "M": args.M,
                    "E_re": energy.real,
                    "E_im": energy.imag,
                }
            )
        return records

    if args.E0 is None:
        raise UsageError("quantized spectrum needs a reference level --E0")
    if args.system == "oscillator":
        entries = spectra.oscillator_quantized_spectrum(
            pp, args.omega, args.M, args.E0, levels, tol=tol["solver"]
        )
    else:
        alpha = args.alpha if args.system == "coulomb" else 0.0
        entries = spectra.solve_quantized_spectrum(
            pp, alpha, args.M, args.E0, levels, tol=tol["solver"]
        )
    for e in entries:
        records.append(
            {
                "system": args.system,
                "branch": e.branch.value,
                "n": e.n,
                "M": e.m_ang,
                "E_re": e.energy.real,
                "E_im": e.energy.imag,
            }
        )
    return records


def _cmd_wavefunction(args, pp: PhysicalParams, tol: dict) -> list[dict]:
    grid = _grid(args)
    records = []
    if args.system == "coulomb":
        if args.g is None:
            raise UsageError("coulomb wavefunction needs --g")
        if args.branch == "third":
            if args.gamma == "auto":
                gamma = spectra.gamma_phase(args.g, args.M).gamma
            else:
                try:
                    gamma = float(args.gamma)
                except ValueError as exc:
                    raise UsageError(f"bad --gamma {args.gamma!r}") from exc

            def amplitude(z: float) -> complex:
                return spectra.coulomb_third(args.g, args.M, z, gamma, tol["series"])

        elif args.branch == "u1":
            def amplitude(z: float) -> complex:
                return spectra.coulomb_u1(args.g, args.M, z, tol["series"])

        else:
            def amplitude(z: float) -> complex:
                return spectra.coulomb_u2(args.g, args.M, z, tol["series"])

    else:
        if args.n < 0:
            raise UsageError("oscillator level index must be >= 0")

        def amplitude(rho: float) -> complex:
            return spectra.oscillator_wavefunction(
                pp, args.omega, args.n, args.M, rho, args.phi, tol["series"]
            )

    for r in grid:
        u = amplitude(float(r))
        records.append(
            {
                "system": args.system,
                "branch": args.branch if args.system == "coulomb" else f"n={args.n}",
                "r": float(r),
                "u_re": u.real,
                "u_im": u.imag,
                "u_abs": abs(u),
            }
        )
    return records


def _cmd_potential(args, pp: PhysicalParams) -> list[dict]:
    if args.grid_min <= 0:
        raise UsageError("potential grid needs r > 0")
    if args.system == "coulomb":
        kind = Coulomb(args.alpha)
    elif args.system == "oscillator":
        kind = Oscillator(args.omega)
    else:
        kind = Free()
    records = []
    for r in _grid(args):
        r = float(r)
        records.append(
            {
                "system": args.system,
                "M": args.M,
                "r": r,
                "U": potential(kind, pp, r),
                "U_eff_minkowski": effective_potential(kind, pp, args.M, r),
                "U_eff_euclidean": euclidean_effective_for(kind, pp, args.M, r),
            }
        )
    return records


def _cmd_phase(args, pp: PhysicalParams) -> list[dict]:
    rp = spectra.gamma_phase(args.g, args.M, args.r0)
    r0 = args.r0 if args.r0 is not None else args.g / 2.0
    return [
        {
            "g": args.g,
            "M": args.M,
            "r0": r0,
            "gamma": rp.gamma,
            "beta": rp.beta,
            "gamma_raw": rp.gamma_raw,
        }
    ]


def _cmd_duality(args, pp: PhysicalParams) -> list[dict]:
    d = spectra.duality_forward(pp, args.alpha, args.EC, args.MC, args.r0_scale)
    return [
        {
            "r0_scale": d.r0_scale,
            "alpha": d.alpha,
            "E_coulomb": d.e_coulomb,
            "omega": d.omega,
            "E_osc": d.e_osc,
            "M_coulomb": d.m_coulomb,
            "M_osc": d.m_osc,
        }
    ]


def _cmd_verify(args) -> tuple[str, int]:
    try:
        results = verification.run_suite(args.suite)
    except KeyError:
        raise UsageError(f"unknown suite {args.suite!r}")
    lines = [r.line() for r in results]
    failures = sum(not r.passed for r in results)
    lines.append(
        f"{len(results) - failures}/{len(results)} checks passed"
        + (f", {failures} FAILED" if failures else "")
    )
    return "\n".join(lines) + "\n", (1 if failures else 0)


# ------------------------------------------------------------ entry point

def _write(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # apply --config as pseudo-flags inserted before the explicit ones
    try:
        if argv and not argv[0].startswith("-"):
            rest = argv[1:]
            cfg_path = None
            for i, token in enumerate(rest):
                if token == "--config" and i + 1 < len(rest):
                    cfg_path = rest[i + 1]
                elif token.startswith("--config="):
                    cfg_path = token.split("=", 1)[1]
            if cfg_path is not None:
                argv = [argv[0]] + _load_config_args(cfg_path) + rest
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    # keep argparse from reading a negative-start range like "-2..2" as a flag
    merged: list[str] = []
    skip = False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        if (
            token == "--n"
            and i + 1 < len(argv)
            and re.match(r"^-\d+\.\.", argv[i + 1])
        ):
            merged.append(f"--n={argv[i + 1]}")
            skip = True
        else:
            merged.append(token)
    argv = merged

    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "verify":
            report, code = _cmd_verify(args)
            _write(report, args.out)
            return code

        pp = PhysicalParams(mass=args.mass, hbar=args.hbar)
        tol = _parse_tolerances(args.tol)
        if args.command == "spectrum":
            records = _cmd_spectrum(args, pp, tol)
        elif args.command == "wavefunction":
            records = _cmd_wavefunction(args, pp, tol)
        elif args.command == "potential":
            records = _cmd_potential(args, pp)
        elif args.command == "phase":
            records = _cmd_phase(args, pp)
        elif args.command == "duality":
            records = _cmd_duality(args, pp)
        else:  # pragma: no cover - argparse enforces the choices
            raise UsageError(f"unknown command {args.command!r}")
        full = [_record(args.command, pp, payload) for payload in records]
        _write(_emit(full, args.command, pp, args.format), args.out)
        return 0
    except (UsageError, *_USAGE_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
