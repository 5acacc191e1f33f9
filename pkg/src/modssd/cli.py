"""Command-line front end: single-point queries and figure-grade sweeps.

Subcommands
-----------
decompose           print the subsystem labels of a position value
logical-state       analytic reduced logical state of one CV state (JSON)
squeeze-sweep       squeezed-vacuum logical states over a dB range (CSV)
gkp-fidelity-grid   GKP fidelity over the Bloch sphere at fixed quality (CSV)
teleport-point      one teleported logical state, optional oracle check (JSON)
teleport-avg-sweep  outcome-averaged teleportation infidelity grid (CSV)

Option precedence is command line > config file (key=value lines, path in
the MODSSD_CONFIG environment variable) > built-in defaults. `--alpha`
accepts the symbolic literal `sqrt-pi`. Output is deterministic: fixed row
order, 17-significant-digit floats, and `\n` line endings.

Exit codes: 0 success, 2 argument error, 3 numeric-convergence failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import (
    AccuracyError,
    BudgetError,
    ConvergenceError,
    DomainError,
    ModssdError,
)
from .modular import (
    KET_0,
    KET_PLUS,
    SsdParams,
    bloch_vector,
    logical_fidelity,
    qubit_state,
    recompose,
    ssd_labels,
    trace_distance,
)
from .special import db_to_zeta
from .states import (
    ApproxGkpParams,
    approx_gkp_logical,
    bloch_angles_to_amplitudes,
    squeezed_vacuum_logical,
)
from .teleport import (
    TeleportOutcome,
    end_to_end_numeric_logical,
    averaged_teleported_gkp_logical,
    teleported_approx_gkp_logical_full,
    teleported_approx_gkp_logical_hq,
    teleported_ideal_gkp_logical,
)

EXIT_OK = 0
EXIT_ARGUMENT = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

SQRT_PI = math.sqrt(math.pi)


def parse_alpha(text: str) -> float:
    if text == "sqrt-pi":
        return SQRT_PI
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid alpha {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("alpha must be positive")
    return value


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _rho_fields(rho: np.ndarray) -> dict:
    out = {}
    for i in range(2):
        for j in range(2):
            out[f"rho{i}{j}_re"] = float(np.real(rho[i, j]))
            out[f"rho{i}{j}_im"] = float(np.imag(rho[i, j]))
    return out


def _row_to_json(row: dict) -> dict:
    return {k: (fmt(v) if isinstance(v, float) else v) for k, v in row.items()}


def write_table(rows: list[dict], header: list[str], path: str, fmt_name: str) -> None:
    if fmt_name == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(
                ",".join(
                    fmt(row[k]) if isinstance(row[k], float) else str(row[k])
                    for k in header
                )
            )
        text = "\n".join(lines) + "\n"
    else:
        text = (
            json.dumps([_row_to_json({k: row[k] for k in header}) for row in rows],
                       indent=1)
            + "\n"
        )
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def load_config() -> dict[str, str]:
    path = os.environ.get("MODSSD_CONFIG")
    if not path:
        return {}
    config: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, _, value = line.partition("=")
            config[key.strip().replace("-", "_")] = value.strip()
    return config


def resolve(args: argparse.Namespace, defaults: dict) -> argparse.Namespace:
    """Merge parsed flags over config-file values over defaults."""
    config = load_config()
    merged = dict(defaults)
    for key, default_value in defaults.items():
        if key in config:
            raw = config[key]
            if key == "alpha":
                merged[key] = parse_alpha(raw)
            elif isinstance(default_value, bool):
                merged[key] = raw.lower() in ("1", "true", "yes")
            elif isinstance(default_value, int):
                merged[key] = int(raw)
            elif isinstance(default_value, float):
                merged[key] = float(raw)
            else:
                merged[key] = raw
    merged.update(vars(args))
    return argparse.Namespace(**merged)


def _diag_fields(info) -> dict:
    return {
        "doublings": int(info.doublings),
        "residual": float(info.residual),
        "status": "ok" if info.converged else "residual_exceeded",
    }


# ----------------------------------------------------------------- rows

def squeeze_row(task: tuple) -> dict:
    db, alpha, rel_tol = task
    zeta = db_to_zeta(db)
    rho, info = squeezed_vacuum_logical(zeta, alpha, rel_tol=rel_tol, with_info=True)
    x, y, z = bloch_vector(rho)
    row = {"db": float(db), "zeta": float(zeta)}
    row.update(_rho_fields(rho))
    row.update(
        bloch_x=x, bloch_y=y, bloch_z=z,
        fidelity_plus=logical_fidelity(rho, KET_PLUS),
        fidelity_zero=logical_fidelity(rho, KET_0),
    )
    row.update(_diag_fields(info))
    return row


def gkp_grid_row(task: tuple) -> dict:
    db, theta, phi, alpha, rel_tol = task
    quality = db_to_zeta(db)
    c0, c1 = bloch_angles_to_amplitudes(theta, phi)
    rho, info = approx_gkp_logical(
        ApproxGkpParams(c0, c1, quality, quality), alpha,
        rel_tol=rel_tol, with_info=True,
    )
    fid = logical_fidelity(rho, qubit_state(c0, c1))
    row = {
        "db": float(db),
        "kappa": float(quality),
        "theta": float(theta),
        "phi": float(phi),
        "fidelity_intended": fid,
    }
    row.update(_diag_fields(info))
    return row


def avg_sweep_row(task: tuple) -> dict:
    delta_db, zeta_db, theta, phi, alpha, rel_tol = task
    delta = db_to_zeta(delta_db)
    zeta = db_to_zeta(zeta_db)
    c0, c1 = bloch_angles_to_amplitudes(theta, phi)
    rho, info = averaged_teleported_gkp_logical(
        delta, zeta, c0, c1, alpha, rel_tol=rel_tol, with_info=True
    )
    infid = 1.0 - logical_fidelity(rho, qubit_state(c0, c1))
    row = {
        "delta_db": float(delta_db),
        "zeta_db": float(zeta_db),
        "delta": float(delta),
        "zeta": float(zeta),
        "theta": float(theta),
        "phi": float(phi),
        "infidelity": infid,
    }
    row.update(_diag_fields(info))
    return row


def _map_rows(worker, tasks: list, jobs: int) -> list[dict]:
    try:
        if jobs <= 1 or len(tasks) <= 1:
            rows = []
            for index, task in enumerate(tasks):
                try:
                    rows.append(worker(task))
                except ModssdError as exc:
                    raise type(exc)(f"row {index}: {exc}") from exc
            return rows
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(worker, tasks))
    except ModssdError:
        raise


# ------------------------------------------------------------- commands

def cmd_decompose(args: argparse.Namespace) -> int:
    ns = resolve(args, {"alpha": SQRT_PI, "d": 2})
    params = SsdParams(alpha=ns.alpha, d=ns.d)
    labels = ssd_labels(ns.x, params)
    rebuilt = recompose(labels, params)
    ok = abs(rebuilt - ns.x) <= 1e-10 * max(1.0, abs(ns.x))
    print(f"ell={labels.ell}")
    print(f"m_g={labels.m_g}")
    print(f"u_g={fmt(labels.u_g)}")
    print(f"recomposed={fmt(rebuilt)}")
    print(f"roundtrip_ok={'true' if ok else 'false'}")
    return EXIT_OK if ok else EXIT_NUMERIC


def _fidelity_block(rho: np.ndarray, c0: complex, c1: complex) -> dict:
    return {
        "zero": logical_fidelity(rho, KET_0),
        "one": logical_fidelity(rho, qubit_state(0.0, 1.0)),
        "plus": logical_fidelity(rho, KET_PLUS),
        "minus": logical_fidelity(rho, qubit_state(1 / math.sqrt(2), -1 / math.sqrt(2))),
        "intended": logical_fidelity(rho, qubit_state(c0, c1)),
    }


def _state_payload(rho: np.ndarray, info, c0: complex, c1: complex) -> dict:
    x, y, z = bloch_vector(rho)
    return {
        "rho_re": [[float(np.real(v)) for v in row] for row in rho],
        "rho_im": [[float(np.imag(v)) for v in row] for row in rho],
        "bloch": [x, y, z],
        "fidelity": _fidelity_block(rho, c0, c1),
        "diagnostics": _diag_fields(info),
    }


def cmd_logical_state(args: argparse.Namespace) -> int:
    ns = resolve(
        args,
        {
            "alpha": SQRT_PI, "family": "gkp", "zeta": 1.0,
            "delta": 0.2, "kappa": 0.2, "theta": 0.0, "phi": 0.0,
            "output": "-",
        },
    )
    c0, c1 = bloch_angles_to_amplitudes(ns.theta, ns.phi)
    if ns.family == "squeezed":
        rho, info = squeezed_vacuum_logical(ns.zeta, ns.alpha, with_info=True)
        c0, c1 = 1 / math.sqrt(2), 1 / math.sqrt(2)
        params: dict = {"family": "squeezed", "zeta": ns.zeta, "alpha": ns.alpha}
    else:
        rho, info = approx_gkp_logical(
            ApproxGkpParams(c0, c1, ns.delta, ns.kappa), ns.alpha, with_info=True
        )
        params = {
            "family": "gkp", "delta": ns.delta, "kappa": ns.kappa,
            "theta": ns.theta, "phi": ns.phi, "alpha": ns.alpha,
        }
    payload = {"input": params}
    payload.update(_state_payload(rho, info, c0, c1))
    text = json.dumps(payload, indent=1, default=fmt) + "\n"
    if ns.output == "-":
        sys.stdout.write(text)
    else:
        with open(ns.output, "w", newline="") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_squeeze_sweep(args: argparse.Namespace) -> int:
    ns = resolve(
        args,
        {
            "alpha": SQRT_PI, "db_min": -18.0, "db_max": 18.0, "steps": 19,
            "output": "-", "format": "csv", "jobs": 1, "rel_tol": 1e-10,
        },
    )
    if ns.steps < 1:
        raise DomainError("steps must be at least 1")
    dbs = np.linspace(ns.db_min, ns.db_max, ns.steps)
    rows = _map_rows(
        squeeze_row, [(float(db), ns.alpha, ns.rel_tol) for db in dbs], ns.jobs
    )
    header = list(rows[0].keys())
    write_table(rows, header, ns.output, ns.format)
    return EXIT_OK


def cmd_gkp_fidelity_grid(args: argparse.Namespace) -> int:
    ns = resolve(
        args,
        {
            "alpha": SQRT_PI, "db": 10.0, "theta_steps": 13, "phi_steps": 13,
            "output": "-", "format": "csv", "jobs": 1, "rel_tol": 1e-10,
        },
    )
    thetas = np.linspace(0.0, math.pi, ns.theta_steps)
    phis = np.linspace(0.0, 2.0 * math.pi, ns.phi_steps, endpoint=False)
    tasks = [
        (float(ns.db), float(th), float(ph), ns.alpha, ns.rel_tol)
        for th in thetas
        for ph in phis
    ]
    rows = _map_rows(gkp_grid_row, tasks, ns.jobs)
    write_table(rows, list(rows[0].keys()), ns.output, ns.format)
    return EXIT_OK


def cmd_teleport_point(args: argparse.Namespace) -> int:
    ns = resolve(
        args,
        {
            "alpha": SQRT_PI, "delta": 0.2, "kappa": 0.2, "zeta": 0.2,
            "s": 0.0, "t": 0.0, "theta": 0.0, "phi": 0.0,
            "formula": "full", "check_oracle": False, "output": "-",
        },
    )
    c0, c1 = bloch_angles_to_amplitudes(ns.theta, ns.phi)
    if ns.formula == "ideal":
        rho, info = teleported_ideal_gkp_logical(
            c0, c1, TeleportOutcome(ns.s, ns.t, ns.zeta), ns.alpha, with_info=True
        )
    elif ns.formula == "hq":
        rho, info = teleported_approx_gkp_logical_hq(
            ns.delta, ns.kappa, ns.zeta, ns.s, ns.t, c0, c1, ns.alpha, with_info=True
        )
    else:
        rho, info = teleported_approx_gkp_logical_full(
            ns.delta, ns.kappa, ns.zeta, ns.s, ns.t, c0, c1, ns.alpha, with_info=True
        )
    payload = {
        "input": {
            "formula": ns.formula, "delta": ns.delta, "kappa": ns.kappa,
            "zeta": ns.zeta, "s": ns.s, "t": ns.t,
            "theta": ns.theta, "phi": ns.phi, "alpha": ns.alpha,
        }
    }
    payload.update(_state_payload(rho, info, c0, c1))
    if ns.check_oracle:
        reference = end_to_end_numeric_logical(
            ns.delta if ns.formula != "ideal" else 0.0,
            ns.kappa if ns.formula != "ideal" else 0.0,
            ns.zeta, ns.s, ns.t, c0, c1, ns.alpha,
        )
        payload["oracle_residual"] = trace_distance(rho, reference)
    text = json.dumps(payload, indent=1, default=fmt) + "\n"
    if ns.output == "-":
        sys.stdout.write(text)
    else:
        with open(ns.output, "w", newline="") as fh:
            fh.write(text)
    return EXIT_OK


def _parse_db_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise DomainError(f"invalid dB list {text!r}") from exc


def _parse_states(text: str) -> list[tuple[float, float]]:
    states = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise DomainError(f"invalid state {chunk!r}, expected theta,phi")
        states.append((float(parts[0]), float(parts[1])))
    if not states:
        raise DomainError("no intended states given")
    return states


def cmd_teleport_avg_sweep(args: argparse.Namespace) -> int:
    ns = resolve(
        args,
        {
            "alpha": SQRT_PI,
            "delta_db": "8,10,12,14,16,18",
            "zeta_db": "8,10,12,14,16,18",
            "states": f"0,0;{math.pi / 2},0",
            "output": "-", "format": "csv", "jobs": 1, "rel_tol": 1e-10,
        },
    )
    tasks = [
        (d_db, z_db, th, ph, ns.alpha, ns.rel_tol)
        for d_db in _parse_db_list(ns.delta_db)
        for z_db in _parse_db_list(ns.zeta_db)
        for th, ph in _parse_states(ns.states)
    ]
    rows = _map_rows(avg_sweep_row, tasks, ns.jobs)
    write_table(rows, list(rows[0].keys()), ns.output, ns.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modssd",
        description="Modular subsystem decomposition sweeps and queries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("decompose", help="subsystem labels of a position value")
    # accept scientific notation like -1e9 as a positional value
    sp._negative_number_matcher = re.compile(r"^-\d+\.?\d*([eE][-+]?\d+)?$|^-\.\d+$")
    sp.add_argument("x", type=float)
    sp.add_argument("--alpha", type=parse_alpha, default=argparse.SUPPRESS)
    sp.add_argument("--d", type=int, default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("logical-state", help="analytic reduced logical state")
    sp.add_argument("--family", choices=("squeezed", "gkp"), default=argparse.SUPPRESS)
    sp.add_argument("--zeta", type=float, default=argparse.SUPPRESS)
    sp.add_argument("--delta", type=float, default=argparse.SUPPRESS)
    sp.add_argument("--kappa", type=float, default=argparse.SUPPRESS)
    sp.add_argument("--theta", type=float, default=argparse.SUPPRESS)
    sp.add_argument("--phi", type=float, default=argparse.SUPPRESS)
    sp.add_argument("--alpha", type=parse_alpha, default=argparse.SUPPRESS)
    sp.add_argument("--output", default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_logical_state)

    sp = sub.add_parser("squeeze-sweep", help="squeezed-vacuum sweep over dB")
    sp.add_argument("--db-min", dest="db_min", type=float, default=argparse.SUPPRESS)
    sp.add_argument("--db-max", dest="db_max", type=float, default=argparse.SUPPRESS)
    sp.add_argument("--steps", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--alpha", type=parse_alpha, default=argparse.SUPPRESS)
    sp.add_argument("--output", default=argparse.SUPPRESS)
    sp.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    sp.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float,
                    default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_squeeze_sweep)

    sp = sub.add_parser("gkp-fidelity-grid", help="GKP fidelity over the Bloch sphere")
    sp.add_argument("--db", type=float, default=argparse.SUPPRESS)
    sp.add_argument("--theta-steps", dest="theta_steps", type=int,
                    default=argparse.SUPPRESS)
    sp.add_argument("--phi-steps", dest="phi_steps", type=int,
                    default=argparse.SUPPRESS)
    sp.add_argument("--alpha", type=parse_alpha, default=argparse.SUPPRESS)
    sp.add_argument("--output", default=argparse.SUPPRESS)
    sp.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    sp.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float,
                    default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_gkp_fidelity_grid)

    sp = sub.add_parser("teleport-point", help="one teleported logical state")
    for name in ("delta", "kappa", "zeta", "s", "t", "theta", "phi"):
        sp.add_argument(f"--{name}", type=float, default=argparse.SUPPRESS)
    sp.add_argument("--formula", choices=("full", "hq", "ideal"),
                    default=argparse.SUPPRESS)
    sp.add_argument("--check-oracle", dest="check_oracle", action="store_true",
                    default=argparse.SUPPRESS)
    sp.add_argument("--alpha", type=parse_alpha, default=argparse.SUPPRESS)
    sp.add_argument("--output", default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_teleport_point)

    sp = sub.add_parser("teleport-avg-sweep",
                        help="outcome-averaged teleportation infidelity")
    sp.add_argument("--delta-db", dest="delta_db", default=argparse.SUPPRESS)
    sp.add_argument("--zeta-db", dest="zeta_db", default=argparse.SUPPRESS)
    sp.add_argument("--states", default=argparse.SUPPRESS)
    sp.add_argument("--alpha", type=parse_alpha, default=argparse.SUPPRESS)
    sp.add_argument("--output", default=argparse.SUPPRESS)
    sp.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    sp.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float,
                    default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_teleport_avg_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConvergenceError, AccuracyError, BudgetError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"argument error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    except ModssdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
