"""Command-line front end.

Exit codes: 0 success, 2 unparseable configuration, 3 input violates an
invariant, 4 inconsistent certificate, 5 inconclusive certificate, 6 the
network is outside the admissible class (star graph, not strongly connected).
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from . import SCHEMA_VERSION
from .certifier import LefschetzCertificate, Verdict, certify, rate_estimate
from .dfmap import DfMap, simulate
from .errors import InadmissibleModel, InputError, LefcertError
from .graph import InteractionMatrix, gamma_from_matrix
from .jacobian import column_sum_max_abs, full_jacobian, reduced_jacobian
from .linalg import df_spectrum_via_symmetrization, split_zero_eigenvalue
from .simplex import DEFAULT_DELTA, InfluenceWeights, make_simplex_point
from .solver import SolverConfig, enumerate_fixed_points

log = logging.getLogger("lefcert")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INPUT = 3
EXIT_INCONSISTENT = 4
EXIT_INCONCLUSIVE = 5
EXIT_INADMISSIBLE = 6

VERDICT_EXIT = {
    Verdict.UNIQUE_EXP_STABLE: EXIT_OK,
    Verdict.INCONSISTENT: EXIT_INCONSISTENT,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}

CONFIG_KEYS = {"gamma", "interaction_matrix", "solver", "delta", "seed"}


class ConfigError(Exception):
    """Configuration could not be parsed (exit code 2)."""


class CommandFailed(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    gamma: Optional[list[float]] = None
    interaction_matrix: Optional[list[list[float]]] = None
    solver: dict[str, Any] = field(default_factory=dict)
    delta: float = DEFAULT_DELTA
    seed: int = 0
    output_format: Optional[str] = None

    def solver_config(self) -> SolverConfig:
        try:
            return SolverConfig.from_mapping({**self.solver, "seed": self.seed, "delta": self.delta})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid solver settings: {exc}") from exc

    def build_map(self) -> DfMap:
        if self.interaction_matrix is not None:
            weights = gamma_from_matrix(InteractionMatrix.from_rows(self.interaction_matrix))
        else:
            g = np.asarray(self.gamma, dtype=float)
            # accept unnormalized positive weights such as 1,1,1
            if g.size and np.all(g > 0) and np.all(np.isfinite(g)):
                g = g / g.sum()
            weights = InfluenceWeights(g)
        return DfMap(weights)


def _parse_vector(text: str, name: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"--{name}: expected comma-separated numbers, got {text!r}") from exc


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
    return data


def _number_list(value: Any, name: str, depth: int = 1):
    ok = isinstance(value, list) and all(
        _number_list(v, name, depth - 1) is not None if depth > 1
        else isinstance(v, (int, float)) and not isinstance(v, bool)
        for v in value
    )
    if not ok:
        raise ConfigError(f"{name} must be a {'nested ' if depth > 1 else ''}list of numbers")
    return value


def build_run_config(args: argparse.Namespace) -> RunConfig:
    data = _load_config_file(args.config) if args.config else {}
    if "gamma" in data and "interaction_matrix" in data:
        raise ConfigError("config must give exactly one of 'gamma' or 'interaction_matrix'")
    cfg = RunConfig()
    if "gamma" in data:
        cfg.gamma = [float(v) for v in _number_list(data["gamma"], "gamma")]
    if "interaction_matrix" in data:
        cfg.interaction_matrix = _number_list(data["interaction_matrix"], "interaction_matrix", 2)
    if "solver" in data:
        if not isinstance(data["solver"], dict):
            raise ConfigError("'solver' must be an object")
        cfg.solver = dict(data["solver"])
    for key in ("delta", "seed"):
        if key in data:
            v = data[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"'{key}' must be a number")
            setattr(cfg, key, int(v) if key == "seed" else float(v))

    # flags win over file values
    if args.gamma is not None:
        cfg.gamma = _parse_vector(args.gamma, "gamma")
        cfg.interaction_matrix = None
    if args.seed is not None:
        cfg.seed = args.seed
    if args.delta is not None:
        cfg.delta = args.delta
    for item in args.solver_opt or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--solver-opt expects KEY=VALUE, got {item!r}")
        try:
            cfg.solver[key.strip()] = json.loads(value)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--solver-opt {key}: {value!r} is not a number") from exc
    cfg.output_format = args.format
    if cfg.gamma is None and cfg.interaction_matrix is None:
        raise ConfigError("no model given: pass --gamma or a config with 'gamma'/'interaction_matrix'")
    cfg.solver_config()
    return cfg


def _point(args: argparse.Namespace, name: str, n: int):
    text = getattr(args, name)
    if text is None:
        raise ConfigError(f"--{name} is required")
    x = make_simplex_point(_parse_vector(text, name))
    if x.n != n:
        raise InputError(f"--{name} has {x.n} entries but the model has n = {n}")
    return x


def _floats(a) -> list:
    return np.asarray(a, dtype=float).tolist()


def schema_path(command: str) -> Path:
    """Location of the JSON schema shipped for a command's report."""
    return Path(__file__).parent / "schemas" / f"{command}.v1.schema.json"


def _report(command: str, body: dict[str, Any]) -> dict[str, Any]:
    return {"schema_version": SCHEMA_VERSION, "command": command, **body}


def certificate_to_json(cert: LefschetzCertificate, m: DfMap) -> dict[str, Any]:
    return _report("certify", {
        "gamma": _floats(m.gamma),
        "verdict": cert.verdict.value,
        "interior_fixed_points": [
            {
                "location": rec.location.tolist(),
                "residual": rec.residual,
                "basin_hits": rec.basin_hits,
                "eigenvalues": _floats(rep.reduced_eigenvalues),
                "spectral_radius": rep.spectral_radius,
                "stability": rep.stability.value,
                "lefschetz_index": rep.lefschetz_index,
            }
            for rec, rep in cert.interior_points
        ],
        "corner_reports": [{"corner": c.corner, "eigenvalue": c.eigenvalue} for c in cert.corner_reports],
        "index_sum": cert.index_sum,
        "euler_characteristic": cert.euler_characteristic,
        "nonconverged_starts": cert.nonconverged_starts,
        "seed": cert.seed,
        "notes": cert.notes,
    })


def cmd_certify(args, cfg: RunConfig):
    m = cfg.build_map()
    cert = certify(m, cfg.solver_config())
    return certificate_to_json(cert, m), VERDICT_EXIT[cert.verdict]


def cmd_fixed_point(args, cfg: RunConfig):
    m = cfg.build_map()
    found = enumerate_fixed_points(m, cfg.solver_config())
    body = {
        "gamma": _floats(m.gamma),
        "fixed_points": [
            {
                "location": r.location.tolist(),
                "residual": r.residual,
                "basin_hits": r.basin_hits,
                "is_corner": r.is_corner,
            }
            for r in found.records
        ],
        "interior_count": len(found.interior),
        "converged_starts": found.converged_starts,
        "nonconverged_starts": found.nonconverged_starts,
        "seed": found.seed,
    }
    return _report("fixed-point", body), EXIT_OK


def cmd_spectrum(args, cfg: RunConfig):
    m = cfg.build_map()
    x = _point(args, "point" if args.point is not None else "x0", m.n)
    J = full_jacobian(m, x, cfg.delta)
    eigs = df_spectrum_via_symmetrization(J, x.coords)
    _, reduced = split_zero_eigenvalue(eigs)
    body = {
        "gamma": _floats(m.gamma),
        "point": x.tolist(),
        "full_jacobian": _floats(J),
        "reduced_jacobian": _floats(reduced_jacobian(J)),
        "full_eigenvalues": _floats(eigs),
        "reduced_eigenvalues": _floats(reduced),
        "column_sum_max_abs": column_sum_max_abs(J),
    }
    return _report("spectrum", body), EXIT_OK


def cmd_rate(args, cfg: RunConfig):
    m = cfg.build_map()
    x0 = _point(args, "x0", m.n)
    found = enumerate_fixed_points(m, cfg.solver_config())
    if len(found.interior) != 1:
        code = EXIT_INCONSISTENT if found.interior else EXIT_INCONCLUSIVE
        raise CommandFailed(code, f"expected one interior fixed point, found {len(found.interior)}")
    xbar = found.interior[0].location
    est = rate_estimate(m, xbar, x0, args.steps, cfg.delta)
    body = {
        "gamma": _floats(m.gamma),
        "fixed_point": xbar.tolist(),
        "x0": x0.tolist(),
        "steps": args.steps,
        "spectral_rate": est.spectral_rate,
        "empirical_rate": est.empirical_rate,
        "relative_gap": est.relative_gap,
        "tail_points": est.tail_window,
    }
    return _report("rate", body), EXIT_OK


def trajectory_csv(states: np.ndarray) -> str:
    buf = io.StringIO()
    n = states.shape[1]
    buf.write(",".join(["step"] + [f"x_{i + 1}" for i in range(n)]) + "\n")
    for k, row in enumerate(states):
        buf.write(",".join([str(k)] + [format(v, ".17g") for v in row]) + "\n")
    return buf.getvalue()


def cmd_simulate(args, cfg: RunConfig):
    m = cfg.build_map()
    x0 = _point(args, "x0", m.n)
    if args.steps < 0:
        raise InputError("--steps must be >= 0")
    states = simulate(m, x0, args.steps).as_array()
    if (cfg.output_format or "csv") == "csv":
        return trajectory_csv(states), EXIT_OK
    body = {"gamma": _floats(m.gamma), "steps": args.steps, "states": _floats(states)}
    return _report("simulate", body), EXIT_OK


COMMANDS = {
    "simulate": (cmd_simulate, "iterate the map from --x0 for --steps steps"),
    "certify": (cmd_certify, "enumerate fixed points and certify uniqueness and stability"),
    "spectrum": (cmd_spectrum, "Jacobians and spectra at an interior point"),
    "fixed-point": (cmd_fixed_point, "locate fixed points (multistart Picard + Newton)"),
    "rate": (cmd_rate, "empirical vs spectral convergence rate from --x0"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--gamma", help="influence weights, comma-separated")
    common.add_argument("--x0", help="initial state, comma-separated")
    common.add_argument("--point", help="evaluation point for 'spectrum' (defaults to --x0)")
    common.add_argument("--steps", type=int, default=100)
    common.add_argument("--seed", type=int)
    common.add_argument("--delta", type=float, help="corner-exclusion margin")
    common.add_argument("--solver-opt", action="append", metavar="KEY=VALUE",
                        help="override a solver setting (repeatable)")
    common.add_argument("--output", help="write to this file instead of stdout")
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="lefcert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def _emit(payload, path: Optional[str]) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = COMMANDS[args.command][0]
    try:
        cfg = build_run_config(args)
        if args.command != "simulate" and cfg.output_format == "csv":
            raise ConfigError(f"'{args.command}' only writes JSON")
        payload, code = handler(args, cfg)
    except ConfigError as exc:
        print(f"lefcert: configuration error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InadmissibleModel as exc:
        print(f"lefcert: inadmissible model: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except CommandFailed as exc:
        print(f"lefcert: {exc}", file=sys.stderr)
        return exc.code
    except (InputError, ValueError, LefcertError) as exc:
        print(f"lefcert: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(payload, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
