"""Command-line front end: validated run configs, sweeps, CSV/JSON tables.

One logical entry point (main) dispatching eight subcommands onto the
series/plates/gaussian modules.  Config files mirror the flags one-to-one
(JSON object keyed by flag names); explicit flags override file values and
unknown keys are rejected.  Sweeps never abort on a failing grid point:
the row is kept, in order, with an error field, and the exit code is 0 for
full or partial success, 1 for usage or I/O problems, 2 when every point
failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import gaussian, plates, series
from .quadrature import QuadratureConvergenceError

__all__ = ["UsageError", "RunConfig", "SweepSpec", "ResultSet",
           "parse_config", "execute", "render", "main"]


class UsageError(Exception):
    """Bad flags, bad config file, or a parameter outside its preconditions."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    parameters: dict
    output: str | None = None   # None = stdout
    fmt: str = "json"

    def to_config_json(self) -> dict:
        """Flat config-file form (flag names as keys), re-parseable."""
        out = dict(self.parameters)
        out["out"] = self.output
        out["format"] = self.fmt
        return out


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter: an explicit value list or a (lo, hi, steps) range."""

    variable: str
    values: tuple[float, ...] | None = None
    lo: float | None = None
    hi: float | None = None
    steps: int | None = None
    log: bool = False

    def __post_init__(self):
        if self.values is not None:
            if not self.values:
                raise ValueError(f"sweep of '{self.variable}' needs at least one value")
            return
        if self.steps is None or self.steps < 2:
            raise ValueError(f"parameter 'steps' must be >= 2, got {self.steps}")
        if self.lo is None or self.hi is None or not self.lo < self.hi:
            raise ValueError(
                f"sweep range for '{self.variable}' needs min < max, got [{self.lo}, {self.hi}]"
            )
        if self.log and self.lo <= 0.0:
            raise ValueError(f"log-spaced sweep of '{self.variable}' needs min > 0, got {self.lo}")

    def grid(self) -> list[float]:
        if self.values is not None:
            return list(self.values)
        lo, hi, steps = self.lo, self.hi, self.steps
        if self.log:
            llo, lhi = math.log(lo), math.log(hi)
            vals = [math.exp(llo + (lhi - llo) * i / (steps - 1)) for i in range(steps)]
        else:
            vals = [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
        vals[0], vals[-1] = lo, hi
        return vals


@dataclass(frozen=True)
class ResultSet:
    command: str
    records: list = field(default_factory=list)

    def all_failed(self) -> bool:
        rows = [r for r in self.records if "exponent" not in r]
        return bool(rows) and all(isinstance(r.get("error"), str) for r in rows)


def _positive(v, key):
    if not (math.isfinite(v) and v > 0.0):
        raise UsageError(f"parameter '{key}' must be positive, got {v}")
    return v


def _non_negative(v, key):
    if not (math.isfinite(v) and v >= 0.0):
        raise UsageError(f"parameter '{key}' must be non-negative, got {v}")
    return v


def _above_one(v, key):
    if not (math.isfinite(v) and v > 1.0):
        raise UsageError(f"parameter '{key}' must be > 1, got {v}")
    return v


def _as_float(v, key):
    try:
        f = float(v)
    except (TypeError, ValueError):
        raise UsageError(f"parameter '{key}' must be a number, got {v!r}") from None
    if not math.isfinite(f):
        raise UsageError(f"parameter '{key}' must be finite, got {v!r}")
    return f


def _as_int(v, key):
    if isinstance(v, bool) or (isinstance(v, float) and not v.is_integer()):
        raise UsageError(f"parameter '{key}' must be an integer, got {v!r}")
    try:
        return int(v)
    except (TypeError, ValueError):
        raise UsageError(f"parameter '{key}' must be an integer, got {v!r}") from None


def _as_choice(v, key, choices):
    if v not in choices:
        raise UsageError(f"parameter '{key}' must be one of {sorted(map(str, choices))}, got {v!r}")
    return v


def _as_float_list(v, key):
    if isinstance(v, str):
        try:
            v = json.loads(v)
        except json.JSONDecodeError:
            raise UsageError(f"parameter '{key}' must be a JSON array, got {v!r}") from None
    if not isinstance(v, list):
        raise UsageError(f"parameter '{key}' must be a JSON array, got {v!r}")
    return [_as_float(c, key) for c in v]


def _as_coeffs(v, key):
    # inline JSON array first; anything that is not valid JSON is a file path
    if isinstance(v, str):
        try:
            parsed = json.loads(v)
        except json.JSONDecodeError:
            try:
                with open(v, "r", encoding="utf-8") as fh:
                    parsed = json.load(fh)
            except OSError as exc:
                raise UsageError(f"parameter '{key}': cannot read file {v!r}: {exc}") from None
            except json.JSONDecodeError as exc:
                raise UsageError(f"parameter '{key}': file {v!r} is not valid JSON: {exc}") from None
        v = parsed
    if not isinstance(v, list):
        raise UsageError(f"parameter '{key}' must be a JSON array (inline or in a file)")
    return [_as_float(c, key) for c in v]


# Per-command flag tables drive both the argparse surface and config-file
# key checking; every flag keeps default None so explicit flags can be told
# apart from file values.
_GLOBAL_FLAGS = {
    "out": dict(type=str, help="output path (default: stdout)"),
    "format": dict(type=str, choices=["csv", "json"], help="output format (default: json)"),
    "config": dict(type=str, help="JSON config file mirroring the flags"),
}

_COMMAND_FLAGS = {
    "plates-pair": {
        "a": dict(type=float, help="plate spacing"),
        "kind": dict(type=str, choices=["dirichlet", "em"], help="field kind (default: dirichlet)"),
    },
    "plates-stack": {
        "a": dict(type=float, help="base spacing"),
        "x": dict(type=float, help="stack ratio (> 1)"),
        "direction": dict(type=str, choices=["inflation", "contraction", "combined"]),
        "truncate": dict(type=int, help="finite plate count (>= 2)"),
    },
    "plates-sweep": {
        "a": dict(type=float, help="base spacing"),
        "direction": dict(type=str, choices=["inflation", "contraction", "combined"]),
        "x-min": dict(type=float), "x-max": dict(type=float),
        "steps": dict(type=int),
        "log": dict(action="store_const", const=True, help="log-spaced grid"),
    },
    "series-resum": {
        "coeffs": dict(type=str, help="JSON array of coefficients, inline or a file path"),
        "x": dict(type=float, help="evaluation point"),
        "tol": dict(type=float, help="convergent agreement tolerance (default 1e-10)"),
    },
    "gaussian-energy": {
        "d": dict(type=int), "lambda": dict(type=float), "b": dict(type=float),
        "T": dict(type=float), "t": dict(type=float), "K": dict(type=float),
        "L": dict(type=float),
        "higher": dict(type=str, help="JSON array of q^6, q^8, ... coefficients"),
    },
    "gaussian-sweep": {
        "var": dict(type=str, choices=["lambda", "b", "t"]),
        "min": dict(type=float), "max": dict(type=float),
        "steps": dict(type=int),
        "log": dict(action="store_const", const=True, help="log-spaced grid"),
        "fit": dict(action="store_const", const=True, help="append a power-law fit record"),
        "d": dict(type=int), "lambda": dict(type=float), "b": dict(type=float),
        "T": dict(type=float), "t": dict(type=float), "K": dict(type=float),
        "L": dict(type=float), "higher": dict(type=str),
    },
    "gaussian-rg": {
        "d": dict(type=int), "b": dict(type=float),
        "B": dict(type=str, help="field scale, a number or 'auto' (K-fixing value)"),
        "t": dict(type=float), "K": dict(type=float), "L": dict(type=float),
    },
    "lattice-check": {
        "d": dict(type=int, choices=[1, 2]),
        "sites": dict(type=int, help="sites per axis"),
        "seed": dict(type=int, help="RNG seed (default 0)"),
    },
}

_CSV_HEADERS = {
    "plates-pair": ["a", "kind", "value"],
    "plates-stack": ["a", "x", "direction", "N", "value", "regularized"],
    "plates-sweep": ["a", "x", "direction", "N", "value", "regularized"],
    "series-resum": ["value", "converged", "convergents_used", "residual"],
    "gaussian-energy": ["d", "lambda", "b", "T", "t", "K", "L", "value", "error"],
    "gaussian-sweep": ["d", "lambda", "b", "T", "t", "K", "L", "value", "error"],
    "gaussian-rg": ["d", "b", "B", "t", "K", "L"],
    "lattice-check": ["d", "sites", "seed", "phi2_residual", "grad2_residual"],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="sscasimir", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command")
    for command, flags in _COMMAND_FLAGS.items():
        p = sub.add_parser(command)
        for name, kwargs in {**flags, **_GLOBAL_FLAGS}.items():
            p.add_argument(f"--{name}", default=None, dest=name.replace("-", "_"), **kwargs)
    return parser


def _load_config_file(path: str, command: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path!r} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config file {path!r} must hold a JSON object")
    known = set(_COMMAND_FLAGS[command]) | {"out", "format"}
    for key in data:
        if key not in known:
            raise UsageError(f"unknown key '{key}' in config file for {command}")
    return data


def _check_sweep_range(lo, hi, steps, log, key):
    try:
        SweepSpec(variable=key, lo=lo, hi=hi, steps=steps, log=log)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _gaussian_fixed_params(raw, req, opt, skip=None):
    p = {}
    if skip != "d":
        p["d"] = _as_int(req("d"), "d")
        if p["d"] < 1:
            raise UsageError(f"parameter 'd' must be >= 1, got {p['d']}")
    if skip != "lambda":
        p["lambda"] = _positive(_as_float(req("lambda"), "lambda"), "lambda")
    if skip != "b":
        p["b"] = _above_one(_as_float(req("b"), "b"), "b")
    p["T"] = _positive(_as_float(req("T"), "T"), "T")
    if skip != "t":
        p["t"] = _non_negative(_as_float(req("t"), "t"), "t")
    p["K"] = _non_negative(_as_float(req("K"), "K"), "K")
    p["L"] = _non_negative(_as_float(opt("L", 0.0), "L"), "L")
    p["higher"] = _as_float_list(opt("higher", []), "higher")
    return p


def _validate(command: str, raw: dict) -> dict:
    """Type and precondition checks; returns the canonical parameter dict."""
    p: dict = {}

    def req(key):
        if raw.get(key) is None:
            raise UsageError(f"missing required parameter '{key}' for {command}")
        return raw[key]

    def opt(key, default=None):
        return raw[key] if raw.get(key) is not None else default

    if command == "plates-pair":
        p["a"] = _positive(_as_float(req("a"), "a"), "a")
        p["kind"] = _as_choice(opt("kind", "dirichlet"), "kind", {"dirichlet", "em"})
    elif command == "plates-stack":
        p["a"] = _positive(_as_float(req("a"), "a"), "a")
        p["x"] = _above_one(_as_float(req("x"), "x"), "x")
        p["direction"] = _as_choice(req("direction"), "direction",
                                    {"inflation", "contraction", "combined"})
        if opt("truncate") is not None:
            n = _as_int(raw["truncate"], "truncate")
            if n < 2:
                raise UsageError(f"parameter 'truncate' must be >= 2, got {n}")
            if p["direction"] == "combined":
                raise UsageError("parameter 'truncate' is not defined for the combined stack")
            p["truncate"] = n
    elif command == "plates-sweep":
        p["a"] = _positive(_as_float(req("a"), "a"), "a")
        p["direction"] = _as_choice(req("direction"), "direction",
                                    {"inflation", "contraction", "combined"})
        p["x-min"] = _as_float(req("x-min"), "x-min")
        p["x-max"] = _as_float(req("x-max"), "x-max")
        p["steps"] = _as_int(req("steps"), "steps")
        p["log"] = bool(opt("log", False))
        _check_sweep_range(p["x-min"], p["x-max"], p["steps"], p["log"], "x")
    elif command == "series-resum":
        coeffs = _as_coeffs(req("coeffs"), "coeffs")
        if not coeffs:
            raise UsageError("parameter 'coeffs' must hold at least one coefficient")
        if coeffs[0] == 0.0:
            raise UsageError("parameter 'coeffs' must have a nonzero leading coefficient")
        p["coeffs"] = coeffs
        p["x"] = _as_float(req("x"), "x")
        p["tol"] = _positive(_as_float(opt("tol", 1e-10), "tol"), "tol")
    elif command == "gaussian-energy":
        p.update(_gaussian_fixed_params(raw, req, opt))
    elif command == "gaussian-sweep":
        p["var"] = _as_choice(req("var"), "var", {"lambda", "b", "t"})
        p["min"] = _as_float(req("min"), "min")
        p["max"] = _as_float(req("max"), "max")
        p["steps"] = _as_int(req("steps"), "steps")
        p["log"] = bool(opt("log", False))
        p["fit"] = bool(opt("fit", False))
        _check_sweep_range(p["min"], p["max"], p["steps"], p["log"], p["var"])
        p.update(_gaussian_fixed_params(raw, req, opt, skip=p["var"]))
    elif command == "gaussian-rg":
        p["d"] = _as_int(req("d"), "d")
        if p["d"] < 1:
            raise UsageError(f"parameter 'd' must be >= 1, got {p['d']}")
        p["b"] = _above_one(_as_float(req("b"), "b"), "b")
        B = opt("B", "auto")
        if B != "auto":
            B = _positive(_as_float(B, "B"), "B")
        p["B"] = B
        p["t"] = _non_negative(_as_float(req("t"), "t"), "t")
        p["K"] = _non_negative(_as_float(req("K"), "K"), "K")
        p["L"] = _non_negative(_as_float(req("L"), "L"), "L")
    elif command == "lattice-check":
        p["d"] = _as_choice(_as_int(req("d"), "d"), "d", {1, 2})
        p["sites"] = _as_int(req("sites"), "sites")
        if p["sites"] < 2:
            raise UsageError(f"parameter 'sites' must be >= 2, got {p['sites']}")
        p["seed"] = _as_int(opt("seed", 0), "seed")
    else:
        raise UsageError(f"unknown command {command!r}")
    return p


def parse_config(argv: list[str]) -> RunConfig:
    """Parse argv (and an optional --config file) into a validated RunConfig."""
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        raise UsageError("no command given (see --help)")
    command = ns.command

    merged: dict = {}
    if ns.config is not None:
        merged.update(_load_config_file(ns.config, command))
    for name in _COMMAND_FLAGS[command]:
        value = getattr(ns, name.replace("-", "_"))
        if value is not None:
            merged[name] = value

    out = ns.out if ns.out is not None else merged.get("out")
    fmt = ns.format if ns.format is not None else merged.get("format", "json")
    if fmt not in ("csv", "json"):
        raise UsageError(f"parameter 'format' must be csv or json, got {fmt!r}")

    params = _validate(command, merged)
    return RunConfig(command=command, parameters=params, output=out, fmt=fmt)


def _stack_record(a, x, direction, truncate):
    base = {"a": a, "x": x, "direction": direction}
    if truncate is not None:
        base["N"] = truncate
    try:
        cfg = plates.StackConfig(
            base_spacing=a,
            ratio=x,
            direction=plates.StackDirection(direction),
            truncation=truncate,
        )
        result = plates.stack_energy(cfg)
    except ValueError as exc:
        base["error"] = str(exc)
        return base
    base["value"] = result.value
    base["regularized"] = result.regularized
    return base


def _gaussian_record(p, sweep_row=False):
    base = {k: p[k] for k in ("d", "lambda", "b", "T", "t", "K", "L")}
    if p.get("higher"):
        base["higher"] = list(p["higher"])
    try:
        params = gaussian.LGParams(t=p["t"], K=p["K"], L=p["L"], higher=tuple(p["higher"]))
        shell = gaussian.ShellSpec(
            dim=p["d"], cutoff=p["lambda"], shell_factor=p["b"], temperature=p["T"]
        )
        result = gaussian.casimir_energy_density(params, shell)
    except (ValueError, QuadratureConvergenceError) as exc:
        base["error"] = str(exc)
        return base
    base["value"] = result.value
    if sweep_row:
        base["error"] = result.abs_error_estimate
    else:
        base["abs_error_estimate"] = result.abs_error_estimate
        base["evaluations"] = result.evaluations
    return base


def _fit_record(records):
    points = [
        (r["b"] / r["lambda"], r["value"])
        for r in records
        if "value" in r
    ]
    try:
        exponent, r_squared = gaussian.fit_power_law(points)
    except ValueError as exc:
        return {"exponent": None, "r_squared": None, "fit_error": str(exc)}
    return {"exponent": exponent, "r_squared": r_squared}


def execute(config: RunConfig) -> ResultSet:
    """Dispatch a validated RunConfig; failed sweep points become error rows."""
    p = config.parameters
    cmd = config.command
    records: list[dict] = []

    if cmd == "plates-pair":
        kind = plates.FieldKind(p["kind"])
        result = plates.pair_interaction_energy(p["a"], kind)
        records.append({"a": p["a"], "kind": p["kind"], "value": result.value})
    elif cmd == "plates-stack":
        records.append(_stack_record(p["a"], p["x"], p["direction"], p.get("truncate")))
    elif cmd == "plates-sweep":
        sweep = SweepSpec(variable="x", lo=p["x-min"], hi=p["x-max"],
                          steps=p["steps"], log=p["log"])
        for x in sweep.grid():
            records.append(_stack_record(p["a"], x, p["direction"], None))
    elif cmd == "series-resum":
        try:
            result = series.self_similar_sum(
                series.PowerSeries(tuple(p["coeffs"])), p["x"], p["tol"]
            )
            records.append(result.as_dict())
        except ValueError as exc:
            records.append({"x": p["x"], "error": str(exc)})
    elif cmd == "gaussian-energy":
        records.append(_gaussian_record(p))
    elif cmd == "gaussian-sweep":
        sweep = SweepSpec(variable=p["var"], lo=p["min"], hi=p["max"],
                          steps=p["steps"], log=p["log"])
        for v in sweep.grid():
            point = dict(p)
            point[p["var"]] = v
            records.append(_gaussian_record(point, sweep_row=True))
        if p["fit"]:
            records.append(_fit_record(records))
    elif cmd == "gaussian-rg":
        params = gaussian.LGParams(t=p["t"], K=p["K"], L=p["L"])
        B = p["B"]
        if B == "auto":
            B = gaussian.fixed_point_field_scale(p["b"], p["d"])
        rescaled = gaussian.rg_rescale(params, p["b"], B, p["d"])
        records.append({
            "d": p["d"], "b": p["b"], "B": B,
            "t": rescaled.t, "K": rescaled.K, "L": rescaled.L,
        })
    elif cmd == "lattice-check":
        rng = np.random.default_rng(p["seed"])
        shape = (p["sites"],) if p["d"] == 1 else (p["sites"], p["sites"])
        lattice = gaussian.LatticeField(values=rng.standard_normal(shape), spacing=1.0)
        phi2, grad2 = gaussian.parseval_residuals(lattice)
        records.append({
            "d": p["d"], "sites": p["sites"], "seed": p["seed"],
            "phi2_residual": phi2, "grad2_residual": grad2,
        })
    else:
        raise UsageError(f"unknown command {cmd!r}")
    return ResultSet(command=cmd, records=records)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return json.dumps(value)
    return str(value)


def render(results: ResultSet, fmt: str) -> str:
    """Serialize a ResultSet; deterministic, rows in input order."""
    if not results.records:
        raise ValueError("refusing to render an empty result set")
    if fmt == "json":
        return json.dumps(results.records, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    header = _CSV_HEADERS[results.command]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    trailer_lines = []
    for record in results.records:
        if "exponent" in record:  # sweep fit trailer; no grid columns
            trailer_lines.append(
                "# fit exponent=%s r_squared=%s"
                % (_cell(record.get("exponent")), _cell(record.get("r_squared")))
            )
            continue
        row = []
        for key in header:
            value = record.get(key)
            if key == "error" and value is None:
                value = record.get("abs_error_estimate")
            row.append(_cell(value))
        writer.writerow(row)
    text = buf.getvalue()
    for line in trailer_lines:
        text += line + "\n"
    return text


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        config = parse_config(list(argv))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    results = execute(config)
    try:
        text = render(results, config.fmt)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if config.output is None:
        sys.stdout.write(text)
    else:
        try:
            with open(config.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {config.output!r}: {exc}", file=sys.stderr)
            return 1
    return 2 if results.all_failed() else 0


if __name__ == "__main__":
    sys.exit(main())
