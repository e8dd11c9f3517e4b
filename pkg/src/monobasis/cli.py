"""Command line driver: JSON config in, CSV or JSON result table out.

Exit codes: 0 on success, 2 on a configuration error, 3 when an invariant
or a post-condition of the experiment fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field, fields
from typing import Any, Sequence

import numpy as np

from . import __version__
from .errors import ConfigError
from .invariants import run_suites
from .multiindex import iter_monomials
from .polynomials import (
    basis_constant_estimate,
    estimate_p0,
    exp_functional_taylor,
    make_cloud,
    tail_seminorms,
)
from .sequence_spaces import (
    LorentzWeights,
    Point,
    ambient_norm,
    epsilon_net,
    sample_cloud,
    spec_from_json,
)

KINDS = ("converge", "basis-constant", "p0", "net", "invariants", "enumerate", "norm")
SEEDED = {"converge", "basis-constant", "p0", "net", "invariants"}
REQUIRED = {
    "converge": ("space", "phi", "N", "budget"),
    "basis-constant": ("space", "n", "k", "trials", "budget"),
    "p0": ("space", "n", "k", "trials", "budget"),
    "net": ("space", "eps", "budget"),
    "invariants": (),
    "enumerate": ("n", "k"),
    "norm": ("space",),
}
NET_BRUTE_FORCE_PAIRS = 20_000_000


# ---------------------------------------------------------------------------
# config and result tables
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    kind: str
    space: dict | None = None
    seed: int | None = None
    n: int | list[int] | None = None
    k: int | None = None
    N: int | None = None
    budget: int | None = None
    trials: int | None = None
    eps: float | list[float] | None = None
    phi: list | None = None
    perturb: bool = False
    output: str | None = None
    format: str = "csv"

    def to_json(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}

    @classmethod
    def from_json(cls, obj: Any) -> "ExperimentConfig":
        if not isinstance(obj, dict):
            raise ConfigError("$", "config must be a JSON object")
        known = {f.name for f in fields(cls)}
        for key in obj:
            if key not in known:
                raise ConfigError(key, "unknown field")
        if "kind" not in obj:
            raise ConfigError("kind", "required")
        cfg = cls(**obj)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError("kind", f"must be one of {', '.join(KINDS)}")
        for name in REQUIRED[self.kind]:
            if getattr(self, name) is None:
                raise ConfigError(name, f"required for kind {self.kind}")
        if self.kind in SEEDED:
            _check_int("seed", self.seed, minimum=0, required=True)
        if self.space is not None:
            try:
                spec_from_json(self.space)
            except ConfigError:
                raise
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError("space", str(exc)) from None
        if isinstance(self.n, list):
            if not self.n:
                raise ConfigError("n", "empty list")
            for j, v in enumerate(self.n):
                _check_int(f"n[{j}]", v, minimum=0)
        else:
            _check_int("n", self.n, minimum=0)
        _check_int("k", self.k, minimum=1)
        _check_int("N", self.N, minimum=0)
        _check_int("budget", self.budget, minimum=1)
        _check_int("trials", self.trials, minimum=1)
        if self.kind == "basis-constant":
            for j, v in enumerate(self.degrees()):
                if v < 1:
                    raise ConfigError(f"n[{j}]" if isinstance(self.n, list) else "n", "must be >= 1")
        if self.eps is not None:
            eps = self.eps if isinstance(self.eps, list) else [self.eps]
            if not eps:
                raise ConfigError("eps", "empty list")
            for j, e in enumerate(eps):
                path = f"eps[{j}]" if isinstance(self.eps, list) else "eps"
                if isinstance(e, bool) or not isinstance(e, (int, float)) or not math.isfinite(e):
                    raise ConfigError(path, "must be a finite number")
                if e <= 0:
                    raise ConfigError(path, "must be > 0")
        if self.phi is not None:
            if not isinstance(self.phi, list) or not self.phi:
                raise ConfigError("phi", "must be a non-empty list")
            for j, c in enumerate(self.phi):
                try:
                    _complex(c)
                except (TypeError, ValueError):
                    raise ConfigError(f"phi[{j}]", "must be a number or [re, im]") from None
        if not isinstance(self.perturb, bool):
            raise ConfigError("perturb", "must be a boolean")
        if self.format not in ("csv", "json"):
            raise ConfigError("format", "must be csv or json")

    def spec(self):
        return spec_from_json(self.space)

    def degrees(self) -> list[int]:
        return list(self.n) if isinstance(self.n, list) else [self.n]

    def eps_values(self) -> list[float]:
        return [float(e) for e in (self.eps if isinstance(self.eps, list) else [self.eps])]


def _check_int(path: str, v: Any, minimum: int, required: bool = False) -> None:
    if v is None:
        if required:
            raise ConfigError(path, "required")
        return
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(path, "must be an integer")
    if v < minimum:
        raise ConfigError(path, f"must be >= {minimum}")


def _complex(c: Any) -> complex:
    if isinstance(c, bool):
        raise TypeError
    if isinstance(c, (int, float)):
        return complex(c)
    if isinstance(c, list) and len(c) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in c):
        return complex(c[0], c[1])
    raise TypeError


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list]
    metadata: dict = field(default_factory=dict)
    details: list | None = None

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("result table is not rectangular")

    def to_json_text(self) -> str:
        obj = {"columns": self.columns, "rows": self.rows, "metadata": self.metadata}
        if self.details is not None:
            obj["details"] = self.details
        return dump_json(obj) + "\n"

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        buf.write("# " + dump_json(self.metadata) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt(v) for v in r])
        return buf.getvalue()

    def render(self, fmt_name: str) -> str:
        return self.to_json_text() if fmt_name == "json" else self.to_csv_text()


def fmt(v: Any) -> str:
    """Scalars as text; floats with 17 significant digits."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "NaN"
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        return format(v, ".17g")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def dump_json(obj: Any) -> str:
    """Compact, key-ordered JSON whose floats carry 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, int, float, np.integer, np.floating, np.bool_)):
        if isinstance(obj, np.bool_):
            obj = bool(obj)
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, complex):
        return dump_json([obj.real, obj.imag])
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dump_json(v)}" for k, v in sorted(obj.items())) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dump_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _metadata(cfg: ExperimentConfig, elapsed: float | None, **extra) -> dict:
    meta = {"config": cfg.to_json(), "version": __version__}
    if elapsed is not None:
        meta["elapsed_seconds"] = elapsed
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

class InvariantFailure(Exception):
    def __init__(self, table: ResultTable, message: str):
        super().__init__(message)
        self.table = table


def cmd_converge(cfg: ExperimentConfig, timing: bool = False) -> ResultTable:
    """Tail seminorms p(f - S_N f) of an exponential test function along the compatible order.

    Rotating coordinate i by the conjugate phase of phi_i maps A_lambda onto
    itself and f onto the same series with |phi_i| in place of phi_i, term by
    term; so the tails are computed for |phi| on a cloud of moduli, where every
    partial sum is a sum of nonnegative terms and the tail sequence is exactly
    non-increasing.
    """
    t0 = time.perf_counter()
    spec = cfg.spec()
    phi = [abs(_complex(c)) for c in cfg.phi]
    f = exp_functional_taylor(phi, cfg.N)
    Z = np.abs(make_cloud(spec, cfg.budget, cfg.seed))
    tails = tail_seminorms(f, Z)
    elapsed = time.perf_counter() - t0
    columns = ["N_monomials", "tail_seminorm"] + (["elapsed"] if timing else [])
    rows = [[N, float(t)] + ([elapsed] if timing else []) for N, t in enumerate(tails)]
    table = ResultTable(columns, rows, _metadata(cfg, elapsed if timing else None, n_terms=f.n_terms))
    if np.any(np.diff(tails) > 0) or tails[-1] != 0:
        raise InvariantFailure(table, "tail seminorm is not non-increasing to 0")
    return table


def cmd_basis_constant(cfg: ExperimentConfig, timing: bool = False) -> ResultTable:
    t0 = time.perf_counter()
    spec = cfg.spec()
    rows, details = [], []
    for n in cfg.degrees():
        rep = basis_constant_estimate(n, cfg.k, spec, cfg.trials, cfg.seed, budget=cfg.budget)
        rows.append([n, rep.c_hat, rep.c_root, rep.p0_estimate, rep.envelope, rep.skipped])
        details.append(rep.to_json())
    rows.append(["max", "", max(r[2] for r in rows), "", "", ""])
    elapsed = time.perf_counter() - t0
    table = ResultTable(["n", "c_hat", "c_hat_root", "p0_estimate", "a", "skipped_trials"], rows,
                        _metadata(cfg, elapsed if timing else None), details)
    if any(r[1] < 1 for r in rows[:-1]):
        raise InvariantFailure(table, "basis constant estimate below 1")
    return table


def cmd_p0(cfg: ExperimentConfig, timing: bool = False) -> ResultTable:
    t0 = time.perf_counter()
    spec = cfg.spec()
    rows = []
    for n in cfg.degrees():
        est = estimate_p0(spec, n, cfg.k, cfg.trials, cfg.seed, budget=cfg.budget)
        rows.append([n, cfg.k, est.value, est.trials, est.skipped])
    elapsed = time.perf_counter() - t0
    return ResultTable(["n", "k", "p0_estimate", "trials", "skipped_trials"], rows,
                       _metadata(cfg, elapsed if timing else None))


def cmd_net(cfg: ExperimentConfig, timing: bool = False) -> ResultTable:
    """Net size and covering distance per eps.

    Each sample is covered by the net point found by rounding it toward zero
    on the grid; when the net is small enough the exact nearest distance is
    also computed by brute force and reported instead.
    """
    t0 = time.perf_counter()
    spec = cfg.spec()
    Z = sample_cloud(spec, cfg.budget, cfg.seed)
    rows = []
    for eps in cfg.eps_values():
        net = epsilon_net(spec, eps)
        d = net.covering_distances(Z)
        method = "witness"
        if len(net) * Z.shape[0] <= NET_BRUTE_FORCE_PAIRS:
            d = net.nearest_distances(Z)
            method = "nearest"
        covered = float(np.mean(d < eps)) if d.size else 1.0
        rows.append([eps, len(net), float(d.max(initial=0.0)), covered, method])
    elapsed = time.perf_counter() - t0
    table = ResultTable(["eps", "net_size", "max_distance", "covered_fraction", "distance_method"], rows,
                        _metadata(cfg, elapsed if timing else None, samples=int(Z.shape[0])))
    if any(r[3] != 1.0 for r in rows):
        raise InvariantFailure(table, "a sample is not covered by the net")
    return table


def cmd_invariants(cfg: ExperimentConfig, timing: bool = False) -> ResultTable:
    t0 = time.perf_counter()
    results = run_suites(cfg.seed, budget=cfg.budget or 2000, trials=cfg.trials or 50, perturb=cfg.perturb)
    elapsed = time.perf_counter() - t0
    rows = [[r.name, "pass" if r.passed else "fail", r.residual] for r in results]
    table = ResultTable(["invariant", "status", "residual"], rows, _metadata(cfg, elapsed if timing else None))
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise InvariantFailure(table, "failed: " + ", ".join(failed))
    return table


COMMANDS = {
    "converge": cmd_converge,
    "basis-constant": cmd_basis_constant,
    "p0": cmd_p0,
    "net": cmd_net,
    "invariants": cmd_invariants,
}


def cmd_enumerate(n: int, k: int) -> str:
    return "".join(dump_json({int(a): b for a, b in m.to_json().items()}) + "\n" for m in iter_monomials(n, k))


def cmd_norm(space: dict, z: Point) -> str:
    return fmt(ambient_norm(z, spec_from_json(space))) + "\n"


def _run_norm(args, text: str) -> str:
    try:
        z = Point.from_json(json.loads(text)) if text.strip() else Point()
    except (ValueError, TypeError, AttributeError) as exc:
        raise ConfigError("stdin", f"not a point: {exc}") from None
    if args.space == "block":
        if not args.p >= 1:
            raise ConfigError("--p", "must be >= 1")
        space = {"variant": "block", "lambda": [1.0], "p": args.p}
        path = "--p"
    else:
        try:
            weights = json.loads(args.weights) if args.weights else list(LorentzWeights.harmonic(max(z.length, 1)).prefix)
        except json.JSONDecodeError as exc:
            raise ConfigError("--weights", f"invalid JSON: {exc}") from None
        space = {"variant": "lorentz", "lambda": [1.0], "weights": weights}
        path = "--weights"
    try:
        return cmd_norm(space, z)
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, str(exc)) from None


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monobasis", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in COMMANDS:
        p = sub.add_parser(kind)
        p.add_argument("--config", help="JSON experiment config")
        p.add_argument("--out", help="output path (default: stdout or the config's output)")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--seed", type=int)
        p.add_argument("--budget", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--timing", action="store_true", help="include wall-clock times in the output")
        if kind == "invariants":
            p.add_argument("--perturb", action="store_true", help="inject a fault so the solidity suite fails")
    p = sub.add_parser("enumerate")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--max-length", type=int, required=True)
    p.add_argument("--out")
    p = sub.add_parser("norm")
    p.add_argument("--space", choices=("block", "lorentz"), required=True)
    p.add_argument("--p", type=float, default=2.0, help="block exponent")
    p.add_argument("--weights", help="JSON list of Lorentz weights (default harmonic)")
    return parser


def _load_config(args) -> ExperimentConfig:
    if args.config:
        try:
            with open(args.config) as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise ConfigError("--config", str(exc)) from None
        except json.JSONDecodeError as exc:
            raise ConfigError("--config", f"invalid JSON: {exc}") from None
    else:
        obj = {}
    if not isinstance(obj, dict):
        raise ConfigError("$", "config must be a JSON object")
    obj = dict(obj)
    if obj.get("kind", args.command) != args.command:
        raise ConfigError("kind", f"config is for {obj['kind']!r}, not {args.command!r}")
    obj["kind"] = args.command
    for name in ("seed", "budget", "trials", "format"):
        if getattr(args, name, None) is not None:
            obj[name] = getattr(args, name)
    if getattr(args, "perturb", False):
        obj["perturb"] = True
    if args.out is not None:
        obj["output"] = args.out
    return ExperimentConfig.from_json(obj)


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(exc: ConfigError) -> int:
    sys.stderr.write(dump_json({"error": "config", "path": exc.path, "message": exc.message}) + "\n")
    return 2


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "enumerate":
            if args.degree < 0:
                raise ConfigError("--degree", "must be >= 0")
            if args.max_length < 0:
                raise ConfigError("--max-length", "must be >= 0")
            _write(cmd_enumerate(args.degree, args.max_length), args.out)
            return 0
        if args.command == "norm":
            _write(_run_norm(args, sys.stdin.read()), None)
            return 0
        cfg = _load_config(args)
        try:
            table = COMMANDS[args.command](cfg, timing=args.timing)
        except InvariantFailure as fail:
            _write(fail.table.render(cfg.format), cfg.output)
            sys.stderr.write(f"invariant failure: {fail}\n")
            return 3
        _write(table.render(cfg.format), cfg.output)
        return 0
    except ConfigError as exc:
        return _error(exc)
