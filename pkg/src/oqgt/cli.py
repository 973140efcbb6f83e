"""``oqgt`` command line: scan, mode, validate, echo, phase.

Exit codes: 0 success, 1 usage error, 2 numerical-gate failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from ._validation import CriticalModeError
from .core import loschmidt_echo_first_order
from .scan import ScanConfig, run_scan
from .xy import XYParams, chain_echo, chain_oqgt, mode_data, mode_oqgt, PHI_COUPLINGS

EXIT_OK, EXIT_USAGE, EXIT_GATE, EXIT_IO = 0, 1, 2, 3
FULL_CHAIN_MAX = 10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(x: float) -> str:
    return f"{x:.11e}"


def _load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return data


# ---------------------------------------------------------------------------
# scan

def scan_config_from_args(args) -> ScanConfig:
    """Defaults, then the config file, then explicit flags."""
    merged = ScanConfig().as_dict()
    if args.config:
        file_cfg = _load_json(args.config)
        unknown = set(file_cfg) - set(merged)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        for key in ("lambda_range", "t_range"):
            if key in file_cfg:
                merged[key] = {**merged[key], **file_cfg.pop(key)}
        merged.update(file_cfg)
    flags = {"gamma": args.gamma, "phi": args.phi, "n_spins": args.spins,
             "rescale_by_n": args.rescale, "output_path": args.out, "threads": args.threads}
    merged.update({k: v for k, v in flags.items() if v is not None})
    for key, prefix in (("lambda_range", "lambda"), ("t_range", "t")):
        for part in ("min", "max", "steps"):
            v = getattr(args, f"{prefix}_{part}")
            if v is not None:
                merged[key][part] = v
    try:
        return ScanConfig.from_dict(merged)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"invalid scan configuration: {exc}") from exc


def cmd_scan(args) -> int:
    cfg = scan_config_from_args(args)
    start = time.perf_counter()
    run_scan(cfg)
    rows = cfg.lambda_range.steps * cfg.t_range.steps
    print(f"# wrote {rows} rows to {cfg.output_path} in {time.perf_counter() - start:.2f} s "
          f"with {cfg.threads} thread(s)", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# mode

def _params(args) -> XYParams:
    try:
        return XYParams(args.lam, args.gamma, args.phi, args.t, args.spins)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_mode(args) -> int:
    p = _params(args)
    if not 0 <= args.k <= p.n_modes:
        raise UsageError(f"k must lie in [0, {p.n_modes}] for N = {p.n_spins}")
    print(f"k = {args.k}  N = {p.n_spins}")
    if args.k == 0:
        print("k = 0: zero contribution (unpaired mode, its tensor vanishes identically)")
        return EXIT_OK
    md = mode_data(args.k, p)
    q = mode_oqgt(args.k, p, args.phi_coupling).Q
    print(f"Lambda_k = {_fmt(md.Lambda_k)}")
    print(f"theta_k = {_fmt(md.theta_k)}")
    for name, part in (("Re Q", q.real), ("Im Q", q.imag)):
        print(f"{name} (lambda, gamma, phi):")
        for row in part:
            print("  " + "  ".join(f"{_fmt(v + 0.0):>19}" for v in row))
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate

def cmd_validate(args) -> int:
    from .validate import run_suite

    reports = run_suite(args.suite, args.seed)
    failed = False
    for r in reports:
        print(r.to_line())
        if not r.hard_gate:
            print(f"# {r.name} is a soft finding and does not affect the exit status")
        failed |= r.hard_gate and not r.passed
    return EXIT_GATE if failed else EXIT_OK


# ---------------------------------------------------------------------------
# echo

def cmd_echo(args) -> int:
    p = _params(args)
    delta = np.array([args.delta_lambda, args.delta_gamma, args.delta_phi], dtype=float)
    g = chain_oqgt(p).metric
    first, clamped = loschmidt_echo_first_order(g, delta, args.divisor)
    exact = 1.0 if not delta.any() else chain_echo(p, delta)
    print(f"L_first_order = {_fmt(first)}")
    print(f"clamped = {str(clamped).lower()}")
    print(f"L_exact_momentum = {_fmt(exact)}")
    print(f"gap_momentum = {_fmt(abs(exact - first))}")
    if p.n_spins <= FULL_CHAIN_MAX:
        from . import oracle

        lam, gamma, phi, t = p.lam, p.gamma, p.phi, p.t
        full_exact = oracle.full_chain_echo(p.n_spins, lam, gamma, phi, t, delta)
        try:
            g_full = oracle.full_chain_oqgt(p.n_spins, lam, gamma, phi, t).metric
        except ValueError as exc:
            print(f"L_exact_full_chain = {_fmt(full_exact)}")
            print(f"# full-chain metric unavailable: {exc}")
            return EXIT_OK
        full_first, full_clamped = loschmidt_echo_first_order(g_full, delta, args.divisor)
        print(f"L_exact_full_chain = {_fmt(full_exact)}")
        print(f"L_first_order_full_chain = {_fmt(full_first)}")
        print(f"clamped_full_chain = {str(full_clamped).lower()}")
        print(f"gap_full_chain = {_fmt(abs(full_exact - full_first))}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# phase

_PHASE_DEFAULTS = {"preset": "cone", "theta": math.pi / 3, "points": 2000, "mesh": [200, 200],
                   "reverse": False, "shape": "circle", "a_range": None, "k": 1,
                   "lambda": 1.5, "gamma": 1.0, "t": 1.0, "n_spins": 5}


def cmd_phase(args) -> int:
    from .presets import run_phase

    opts = dict(_PHASE_DEFAULTS)
    if args.config:
        file_cfg = _load_json(args.config)
        unknown = set(file_cfg) - set(opts)
        if unknown:
            raise UsageError(f"unknown phase config keys: {sorted(unknown)}")
        opts.update(file_cfg)
    for key in ("preset", "theta", "points", "mesh", "shape", "a_range", "k",
                "gamma", "t"):
        v = getattr(args, key)
        if v is not None:
            opts[key] = v
    if args.lam is not None:
        opts["lambda"] = args.lam
    if args.spins is not None:
        opts["n_spins"] = args.spins
    if args.reverse:
        opts["reverse"] = True
    try:
        base = XYParams(opts["lambda"], opts["gamma"], 0.0, opts["t"], opts["n_spins"])
        res = run_phase(opts["preset"], theta=opts["theta"], n_points=int(opts["points"]),
                        mesh=tuple(int(m) for m in opts["mesh"]), reverse=bool(opts["reverse"]),
                        k=int(opts["k"]), base=base, shape=opts["shape"],
                        a_range=tuple(opts["a_range"]) if opts["a_range"] else None)
    except (ValueError, TypeError, IndexError) as exc:
        raise UsageError(str(exc)) from exc
    print(f"preset = {opts['preset']}  shape = {opts['shape']}  reverse = {str(opts['reverse']).lower()}")
    print(f"line_phase = {_fmt(res['line'])}")
    print(f"line_phase_mod_2pi = {_fmt(res['line_mod_2pi'])}")
    print(f"boundary_line_phase = {_fmt(res['boundary_line'])}")
    print(f"surface_phase = {_fmt(res['surface'])}")
    print(f"stokes_residual = {_fmt(res['stokes_residual'])}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def _add_point(sp, spins_default=5):
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    sp.add_argument("--gamma", type=float, default=1.0)
    sp.add_argument("--phi", type=float, default=0.0)
    sp.add_argument("--t", type=float, default=1.0)
    sp.add_argument("--spins", type=int, default=spins_default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oqgt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"oqgt {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("scan", help="grid scan over (lambda, t) to CSV")
    sp.add_argument("--config", help="JSON file with ScanConfig fields")
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--phi", type=float)
    for prefix in ("lambda", "t"):
        sp.add_argument(f"--{prefix}-min", dest=f"{prefix}_min", type=float)
        sp.add_argument(f"--{prefix}-max", dest=f"{prefix}_max", type=float)
        sp.add_argument(f"--{prefix}-steps", dest=f"{prefix}_steps", type=int)
    sp.add_argument("--spins", type=int)
    sp.add_argument("--rescale", action=argparse.BooleanOptionalAction, default=None)
    sp.add_argument("--out")
    sp.add_argument("--threads", type=int)
    sp.add_argument("--seed", type=int, help="accepted for symmetry; the scan is deterministic")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("mode", help="per-mode quantities and tensor")
    sp.add_argument("--k", type=int, required=True)
    _add_point(sp)
    sp.add_argument("--phi-coupling", choices=PHI_COUPLINGS, default="exact")
    sp.set_defaults(func=cmd_mode)

    sp = sub.add_parser("validate", help="run oracle batteries")
    sp.add_argument("--suite", choices=("all", "core", "xy", "oracle"), default="all")
    sp.add_argument("--seed", type=int, default=42)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("echo", help="Loschmidt echo: quadratic estimate vs exact")
    _add_point(sp, spins_default=7)
    sp.add_argument("--delta-lambda", type=float, default=0.0)
    sp.add_argument("--delta-gamma", type=float, default=0.0)
    sp.add_argument("--delta-phi", type=float, default=0.0)
    sp.add_argument("--divisor", type=float, default=1.0,
                    help="estimate is 1 - delta.g.delta / divisor (default 1)")
    sp.set_defaults(func=cmd_echo)

    sp = sub.add_parser("phase", help="geometric phase: line vs surface integral")
    sp.add_argument("--config", help="JSON file with preset and loop settings")
    sp.add_argument("--preset", choices=("cone", "xy-mode"))
    sp.add_argument("--shape", choices=("circle", "rectangle"))
    sp.add_argument("--theta", type=float)
    sp.add_argument("--points", type=int)
    sp.add_argument("--mesh", type=int, nargs=2)
    sp.add_argument("--a-range", dest="a_range", type=float, nargs=2)
    sp.add_argument("--reverse", action="store_true")
    sp.add_argument("--k", type=int)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--t", type=float)
    sp.add_argument("--spins", type=int)
    sp.set_defaults(func=cmd_phase)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("oqgt: a command is required (scan, mode, validate, echo, phase)")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CriticalModeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GATE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
