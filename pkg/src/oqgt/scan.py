"""Grid scans of the rescaled chain metric and curvature over ``(lambda, t)``."""

from __future__ import annotations

import dataclasses
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from ._validation import CriticalModeError
from .xy import chain_components

HEADER = "lambda,gamma,phi,t,n_spins,g_ll,g_gg,g_pp,g_lg,g_lp,g_gp,s_lg,s_lp,s_gp"


class Range(NamedTuple):
    min: float
    max: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.steps)


def _as_range(r, name) -> Range:
    if isinstance(r, dict):
        r = Range(r["min"], r["max"], r["steps"])
    r = Range(float(r[0]), float(r[1]), int(r[2]))
    if r.steps < 1:
        raise ValueError(f"{name}: steps must be >= 1")
    if not r.min <= r.max:
        raise ValueError(f"{name}: min must not exceed max")
    if r.steps == 1 and r.min != r.max:
        raise ValueError(f"{name}: a single step needs min == max")
    return r


@dataclasses.dataclass(frozen=True)
class ScanConfig:
    gamma: float = 1.0
    phi: float = 0.0
    n_spins: int = 1001
    lambda_range: Range = Range(0.0, 2.0, 200)
    t_range: Range = Range(0.0, 50.0, 200)
    rescale_by_n: bool = True
    output_path: str = "scan.csv"
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "lambda_range", _as_range(self.lambda_range, "lambda_range"))
        object.__setattr__(self, "t_range", _as_range(self.t_range, "t_range"))
        n = int(self.n_spins)
        if n != self.n_spins or n < 3 or n % 2 == 0:
            raise ValueError("n_spins must be an odd integer >= 3")
        if int(self.threads) < 1:
            raise ValueError("threads must be a positive integer")
        for name in ("gamma", "phi"):
            if not math.isfinite(float(getattr(self, name))):
                raise ValueError(f"{name} must be finite")

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["lambda_range"] = self.lambda_range._asdict()
        d["t_range"] = self.t_range._asdict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScanConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


def _fmt(x: float) -> str:
    # repr is the shortest string that round-trips to the same double
    return repr(float(x))


def _lambda_block(cfg: ScanConfig, lam: float, ts: np.ndarray) -> tuple[str, str | None]:
    """CSV rows for one lambda value and an optional warning line."""
    scale = 1.0 / cfg.n_spins if cfg.rescale_by_n else 1.0
    warning = None
    try:
        comp = chain_components(lam, cfg.gamma, cfg.n_spins, ts) * scale
    except CriticalModeError as exc:
        comp = np.full((len(ts), 6), np.nan)
        warning = f"# warning: critical modes {exc.modes} at lambda={_fmt(lam)}; row set to nan"
    zero = 0.0 if warning is None else math.nan
    buf = io.StringIO()
    head = f"{_fmt(lam)},{_fmt(cfg.gamma)},{_fmt(cfg.phi)},"
    for t, (ll, gg, pp, lg, lp, gp) in zip(ts, comp):
        # columns: g_ll g_gg g_pp g_lg g_lp g_gp s_lg s_lp s_gp
        vals = (ll, gg, pp, lg, zero, zero, zero, lp, gp)
        buf.write(head + f"{_fmt(t)},{cfg.n_spins}," + ",".join(map(_fmt, vals)) + "\n")
    return buf.getvalue(), warning


def scan_rows(cfg: ScanConfig):
    """Yield ``(rows, warning)`` per lambda value in grid order."""
    lams = cfg.lambda_range.values()
    ts = cfg.t_range.values()
    if cfg.threads == 1:
        for lam in lams:
            yield _lambda_block(cfg, lam, ts)
        return
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        # map keeps submission order, so the writer sees lambda-major order
        yield from pool.map(lambda lam: _lambda_block(cfg, lam, ts), lams)


def preamble(cfg: ScanConfig) -> str:
    from . import __version__

    d = cfg.as_dict()
    # thread count, wall time and destination do not change the data; keeping
    # them out lets two files of the same grid compare byte for byte
    d.pop("threads")
    d.pop("output_path")
    lines = [f"# oqgt {__version__} scan",
             "# config " + json.dumps(d, sort_keys=True)]
    return "\n".join(lines) + "\n"


def run_scan(cfg: ScanConfig) -> str:
    """Write the scan CSV to ``cfg.output_path`` and return the path.

    Critical grid points produce ``nan`` rows and a ``# warning`` line ahead
    of the affected block. Raises :class:`OSError` when the path is not
    writable.
    """
    path = cfg.output_path
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise FileNotFoundError(f"output directory does not exist: {parent}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(preamble(cfg))
        fh.write(HEADER + "\n")
        for rows, warning in scan_rows(cfg):
            if warning:
                fh.write(warning + "\n")
            fh.write(rows)
    return path


def read_scan(path) -> tuple[dict, np.ndarray, list]:
    """Parse a scan file into ``(config, data, warnings)``."""
    config, warnings, rows = {}, [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# config "):
                config = json.loads(line[len("# config "):])
            elif line.startswith("# warning"):
                warnings.append(line)
            elif line.startswith("#") or line == HEADER:
                continue
            elif line:
                rows.append([float(v) for v in line.split(",")])
    return config, np.array(rows).reshape(-1, len(HEADER.split(","))), warnings
