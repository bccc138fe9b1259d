"""Command-line front end.

    kerr4ls <spectrum|kerr|sweep|evolve|converge> --config <path|-> [--output PATH] [--format csv|json]

The config is one JSON object with flat parameter keys (``g_a_re``,
``g_a_im``, ..., ``n_a``, ``delta_a``, ``phi``) and optional ``sweep``,
``evolve`` and ``converge`` blocks. Frequencies are in arbitrary common
units; only their ratios matter.

Exit codes: 0 success, 2 config error, 3 physics guard, 4 solver failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from kerr4ls.errors import (
    ConfigError,
    InvalidInputError,
    Kerr4lsError,
    PhysicsGuardError,
    SolverError,
)
from kerr4ls.kerr import kerr_coupling, kerr_energy, validity_report, xpm_evolution
from kerr4ls.model import SystemParams, build_hamiltonian
from kerr4ls.oracle import convergence_scan, eigh, match_by_overlap
from kerr4ls.perturbation import closed_form_check, perturbation_result, perturbed_energy, perturbed_state
from kerr4ls.tls import tls_ground_energy, tls_model

COMMANDS = ("spectrum", "kerr", "sweep", "evolve", "converge")
EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_SOLVER, EXIT_OTHER = 0, 2, 3, 4, 1

PARAM_KEYS = (
    "g_a_re", "g_a_im", "g_b_re", "g_b_im", "g_c_re", "g_c_im",
    "n_a", "n_b", "n_c", "delta_a", "delta_b", "delta_c", "phi",
)
INT_KEYS = ("n_a", "n_b", "n_c")
BLOCK_KEYS = ("sweep", "evolve", "converge", "seed", "output", "format", "command")
DEFAULT_EPS = (5e-2, 2.5e-2, 1.25e-2)

SPECTRUM_HEADER = ("n", "E0", "e2", "E_pt2", "E_tls", "E_exact", "overlap", "closed_form", "closed_form_flag")
SWEEP_HEADER = (
    "value", "E_exact", "E_pt2", "E_tls", "E_kerr",
    "relerr_pt2", "relerr_tls", "relerr_kerr", "flags", "error",
)
EVOLVE_HEADER = ("t", "phase") + tuple(f"{part}_{i}" for i in range(1, 5) for part in ("re", "im")) + ("norm",)
CONVERGE_HEADER = ("n", "epsilon", "residual", "used", "order", "slope", "status")
KERR_HEADER = (
    "k_value", "dark_energy_exact", "dark_energy_kerr", "relative_error",
    "ratio_b_over_a", "ratio_b_over_c", "ratio_det", "flags",
)


@dataclass
class SweepSpec:
    parameter: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def values(self) -> list:
        if self.spacing == "log":
            vals = np.geomspace(self.start, self.stop, self.count)
        else:
            vals = np.linspace(self.start, self.stop, self.count)
        if self.parameter in INT_KEYS:
            return [int(round(v)) for v in vals]
        return [float(v) for v in vals]


@dataclass
class EvolveSpec:
    t_start: float
    t_stop: float
    count: int

    def times(self) -> list[float]:
        return [float(t) for t in np.linspace(self.t_start, self.t_stop, self.count)]


@dataclass
class RunConfig:
    params: dict
    command: str | None = None
    sweep: SweepSpec | None = None
    evolve: EvolveSpec | None = None
    eps: tuple[float, ...] = DEFAULT_EPS
    output: str | None = None
    format: str | None = None
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def system_params(self, **overrides) -> SystemParams:
        return params_from_flat({**self.params, **overrides})


def params_from_flat(flat: dict) -> SystemParams:
    delta_a = float(flat.get("delta_a", 0.0))
    return SystemParams(
        g_a=complex(flat.get("g_a_re", 0.0), flat.get("g_a_im", 0.0)),
        g_b=complex(flat.get("g_b_re", 0.0), flat.get("g_b_im", 0.0)),
        g_c=complex(flat.get("g_c_re", 0.0), flat.get("g_c_im", 0.0)),
        n_a=flat.get("n_a", 1),
        n_b=flat.get("n_b", 0),
        n_c=flat.get("n_c", 1),
        delta_a=delta_a,
        delta_b=float(flat.get("delta_b", delta_a)),
        delta_c=float(flat.get("delta_c", 0.0)),
        phi=float(flat.get("phi", 0.0)),
    )


def _number(value, key, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return int(value) if integer else float(value)


def _block(data, name, required):
    block = data.get(name)
    if block is None:
        return None
    if not isinstance(block, dict):
        raise ConfigError(f"'{name}' must be an object")
    missing = [k for k in required if k not in block]
    if missing:
        raise ConfigError(f"'{name}' block is missing {', '.join(missing)}")
    return block


def parse_config(data: Any) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - set(PARAM_KEYS) - set(BLOCK_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    params = {k: _number(data[k], k, k in INT_KEYS) for k in PARAM_KEYS if k in data}
    cfg = RunConfig(params=params)

    cmd = data.get("command")
    if cmd is not None and cmd not in COMMANDS:
        raise ConfigError(f"unknown command {cmd!r}")
    cfg.command = cmd

    sweep = _block(data, "sweep", ("parameter", "start", "stop", "count"))
    if sweep is not None:
        name = sweep["parameter"]
        if name not in PARAM_KEYS:
            raise ConfigError(f"sweep parameter must be one of {', '.join(PARAM_KEYS)}, got {name!r}")
        count = _number(sweep["count"], "sweep.count", integer=True)
        if count < 2:
            raise ConfigError(f"sweep.count must be >= 2, got {count}")
        spacing = sweep.get("spacing", "linear")
        if spacing not in ("linear", "log"):
            raise ConfigError(f"sweep.spacing must be 'linear' or 'log', got {spacing!r}")
        start = _number(sweep["start"], "sweep.start")
        stop = _number(sweep["stop"], "sweep.stop")
        if spacing == "log" and (start <= 0 or stop <= 0):
            raise ConfigError("log spacing requires positive sweep endpoints")
        spec = SweepSpec(name, start, stop, count, spacing)
        if name in INT_KEYS:
            raw = np.geomspace(start, stop, count) if spacing == "log" else np.linspace(start, stop, count)
            if np.any(np.abs(raw - np.round(raw)) > 1e-9):
                raise ConfigError(f"sweep of integer parameter {name} must land on integers")
        cfg.sweep = spec

    evolve = _block(data, "evolve", ("t_stop", "count"))
    if evolve is not None:
        count = _number(evolve["count"], "evolve.count", integer=True)
        if count < 1:
            raise ConfigError(f"evolve.count must be >= 1, got {count}")
        cfg.evolve = EvolveSpec(_number(evolve.get("t_start", 0.0), "evolve.t_start"), _number(evolve["t_stop"], "evolve.t_stop"), count)

    converge = _block(data, "converge", ())
    if converge is not None and "eps" in converge:
        eps = converge["eps"]
        if not isinstance(eps, list):
            raise ConfigError("converge.eps must be a list of numbers")
        cfg.eps = tuple(_number(e, "converge.eps") for e in eps)

    if "seed" in data:
        cfg.seed = _number(data["seed"], "seed", integer=True)
    if "output" in data:
        if not isinstance(data["output"], str):
            raise ConfigError("output must be a path string")
        cfg.output = data["output"]
    if "format" in data:
        if data["format"] not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {data['format']!r}")
        cfg.format = data["format"]
    return cfg


def _rel(a, b):
    if a is None or b is None or b == 0:
        return None
    return abs(a - b) / abs(b)


def run_spectrum(cfg: RunConfig) -> list[dict]:
    params = cfg.system_params()
    split, result = perturbation_result(params)
    ham = build_hamiltonian(params)
    exact = eigh(ham.h)
    approx = [perturbed_state(result, split.basis, n, split.epsilon) for n in range(1, 5)]
    pairing = match_by_overlap(approx, exact)
    check = closed_form_check(params)
    e_tls = tls_ground_energy(tls_model(params))
    rows = []
    for k in range(4):
        rows.append({
            "n": k + 1,
            "E0": float(result.e0[k]),
            "e2": float(result.e2[k]),
            "E_pt2": perturbed_energy(result, k + 1, split.epsilon),
            "E_tls": e_tls if k == 0 else None,
            "E_exact": float(exact.values[pairing.exact_index[k]]),
            "overlap": pairing.overlaps[k],
            "closed_form": check.values[k],
            "closed_form_flag": check.flags[k].value,
        })
    return rows


def _sweep_row(cfg: RunConfig, value) -> dict:
    row = {key: None for key in SWEEP_HEADER}
    row["value"] = value
    overrides = {cfg.sweep.parameter: value}
    if cfg.sweep.parameter in ("delta_a", "delta_b"):
        overrides = {"delta_a": value, "delta_b": value}
    errors = []
    try:
        params = cfg.system_params(**overrides)
    except PhysicsGuardError as exc:
        row["error"] = type(exc).__name__
        row["flags"] = ""
        return row
    report = validity_report(params)
    row["flags"] = ";".join(f.value for f in report.flags)
    row["E_exact"] = report.dark_energy_exact
    try:
        split, result = perturbation_result(params)
        row["E_pt2"] = perturbed_energy(result, 1, split.epsilon)
    except PhysicsGuardError as exc:
        errors.append(type(exc).__name__)
    try:
        row["E_tls"] = tls_ground_energy(tls_model(params))
    except PhysicsGuardError as exc:
        errors.append(type(exc).__name__)
    try:
        row["E_kerr"] = kerr_energy(params)
    except PhysicsGuardError as exc:
        errors.append(type(exc).__name__)
    for col, src in (("relerr_pt2", "E_pt2"), ("relerr_tls", "E_tls"), ("relerr_kerr", "E_kerr")):
        row[col] = _rel(row[src], row["E_exact"])
    row["error"] = ";".join(dict.fromkeys(errors))
    return row


def run_sweep(cfg: RunConfig) -> list[dict]:
    if cfg.sweep is None:
        raise ConfigError("sweep command requires a 'sweep' block")
    return [_sweep_row(cfg, value) for value in cfg.sweep.values()]


def run_kerr(cfg: RunConfig) -> dict:
    params = cfg.system_params()
    kerr_coupling(params)
    return validity_report(params).to_dict()


def run_evolve(cfg: RunConfig) -> list[dict]:
    if cfg.evolve is None:
        raise ConfigError("evolve command requires an 'evolve' block")
    params = cfg.system_params()
    k = kerr_coupling(params)
    rows = []
    for t in cfg.evolve.times():
        evo = xpm_evolution(params, t, k)
        row = {"t": t, "phase": evo.phase}
        for i, z in enumerate(evo.final_state, start=1):
            row[f"re_{i}"] = float(z.real)
            row[f"im_{i}"] = float(z.imag)
        row["norm"] = float(np.linalg.norm(evo.final_state))
        rows.append(row)
    return rows


def run_converge(cfg: RunConfig) -> list[dict]:
    scan = convergence_scan(cfg.system_params(), cfg.eps)
    rows = []
    for state in scan.states:
        threshold = 3.5 if state.label == 1 else 2.7
        if state.saturated:
            status = "SATURATED"
        else:
            status = "PASS" if state.slope >= threshold else "FAIL"
        for i, eps in enumerate(scan.epsilons):
            rows.append({
                "n": state.label,
                "epsilon": eps,
                "residual": state.residuals[i],
                "used": int(state.used[i]),
                "order": state.pairwise_orders[i] if i < len(state.pairwise_orders) else None,
                "slope": state.slope,
                "status": status,
            })
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def to_csv(rows: list[dict], header) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(row.get(col)) for col in header) + "\n")
    return buf.getvalue()


def _json_clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_clean(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_clean(v) for v in value]
    return value


def to_json(payload) -> str:
    return json.dumps(_json_clean(payload), indent=2, allow_nan=False) + "\n"


def render(command: str, cfg: RunConfig, fmt: str) -> str:
    if command == "kerr":
        record = run_kerr(cfg)
        if fmt == "json":
            return to_json(record)
        row = dict(record, flags=";".join(record["flags"]))
        return to_csv([row], KERR_HEADER)
    runner, header = {
        "spectrum": (run_spectrum, SPECTRUM_HEADER),
        "sweep": (run_sweep, SWEEP_HEADER),
        "evolve": (run_evolve, EVOLVE_HEADER),
        "converge": (run_converge, CONVERGE_HEADER),
    }[command]
    rows = runner(cfg)
    if fmt == "json":
        return to_json({"command": command, "columns": list(header), "rows": rows})
    return to_csv(rows, header)


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, InvalidInputError):
        return EXIT_CONFIG
    if isinstance(exc, PhysicsGuardError):
        return EXIT_PHYSICS
    if isinstance(exc, SolverError):
        return EXIT_SOLVER
    return EXIT_OTHER


def _error_record(exc: BaseException, code: int) -> str:
    return json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kerr4ls", description="Cross-Kerr analysis of the four-level N-scheme atom.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="JSON config file, or - for standard input")
    parser.add_argument("--output", help="output file (default: standard output)")
    parser.add_argument("--format", choices=("csv", "json"), help="default: json for kerr, csv otherwise")
    return parser


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    args = build_parser().parse_args(argv)
    try:
        try:
            if args.config == "-":
                data = json.load(stdin)
            else:
                with open(args.config, encoding="utf-8") as fh:
                    data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        cfg = parse_config(data)
        fmt = args.format or cfg.format or ("json" if args.command == "kerr" else "csv")
        text = render(args.command, cfg, fmt)
        output = args.output or cfg.output
        if output:
            with open(output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            stdout.write(text)
    except (Kerr4lsError, TypeError, ValueError) as exc:
        code = _exit_code(exc) if isinstance(exc, Kerr4lsError) else EXIT_CONFIG
        stderr.write(_error_record(exc, code))
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
