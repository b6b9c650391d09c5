"""Command-line front end.

Exit status: 0 success, 2 unparseable or degenerate input, 3 solver did not
certify its result, 4 invariant breach, 1 failed acceptance rows
(``verify-paper`` only). Violations found by ``scan`` are data, not errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from .busemann import busemann_seminorm
from .errors import ConvergenceError, DimensionError, InvariantError, NotSpanningError, UnsupportedPointError
from .fields import model_field, scan
from .hermitian import ellipsoid_volume
from .mvee import mvee_finite, mvee_seminorm
from .schema import (
    SchemaError,
    dump_descriptor,
    dump_matrix,
    dump_vector,
    parse_descriptor,
    parse_function,
    parse_matrix,
    parse_seminorm,
    parse_vector,
)
from .verify import run_all
from .wu import wu_form

COMMANDS = ("mvee", "wu", "busemann", "scan", "verify-paper")
EXIT_OK, EXIT_FAILED_ROWS, EXIT_PARSE, EXIT_UNCERTIFIED, EXIT_INVARIANT = 0, 1, 2, 3, 4
DEFAULT_SEQUENCE = 40


def default_tol() -> float:
    raw = os.environ.get("WU_DEFAULT_TOL")
    if raw is None:
        return 1e-6
    try:
        return float(raw)
    except ValueError:
        raise SchemaError(f"WU_DEFAULT_TOL is not a number: {raw!r}") from None


@dataclass(frozen=True)
class JobConfig:
    command: str
    input_path: str | None = None
    tol: float = 1e-6
    seed: int = 42
    budget: int = 50
    output_path: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise SchemaError(f"unknown command {self.command!r}")
        if not 0 < self.tol < 1:
            raise SchemaError("tol must lie in (0, 1)")
        if self.budget < 1:
            raise SchemaError("budget must be at least 1")
        if self.format not in ("csv", "json"):
            raise SchemaError("format is csv or json")
        if self.command != "verify-paper" and self.input_path is None:
            raise SchemaError(f"{self.command} needs an input file")


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror}") from None
    if not isinstance(obj, dict):
        raise SchemaError("the input file must hold a JSON object")
    return obj


def _queries(obj: dict, n: int) -> list[np.ndarray]:
    out = [parse_vector(q) for q in obj.get("queries", [])]
    for q in out:
        if len(q) != n:
            raise SchemaError(f"query of dimension {len(q)} for C^{n}")
    return out


def _job_mvee(cfg: JobConfig, obj: dict):
    if "points" in obj:
        P = parse_matrix(obj["points"])
        S, cert = mvee_finite(P, cfg.tol)
        carrier = None
    else:
        h = parse_seminorm(obj)
        S, cert = mvee_seminorm(h, cfg.tol, cfg.budget, cfg.seed)
        carrier = dump_matrix(S.carrier.vectors.T) if S.carrier is not None else None
    result = {
        "command": "mvee",
        "m": int(S.dim),
        "form": dump_matrix(S.matrix),
        "carrier": carrier,
        "dual_gap": float(cert.dual_gap),
        "volume": float(ellipsoid_volume(S)),
        "iterations": int(cert.iterations),
        "certified": bool(cert.certified),
    }
    return result, cert.certified


def _job_wu(cfg: JobConfig, obj: dict):
    h = parse_seminorm(obj)
    r = wu_form(h, cfg.tol, cfg.seed, budget=cfg.budget)
    values = [
        {"X": dump_vector(q), "Wh": float(r(q)), "Wh_unnormalized": float(r.unnormalized(q))}
        for q in _queries(obj, h.dim)
    ]
    result = {
        "command": "wu",
        "m": int(r.m),
        "kernel": dump_matrix(r.kernel.vectors.T) if r.kernel.dim else [],
        "normalized_form": dump_matrix(r.normalized_form.matrix),
        "dual_gap": float(r.certificate.dual_gap),
        "certified": bool(r.certified),
        "values": values,
    }
    return result, r.certified


def _job_busemann(cfg: JobConfig, obj: dict):
    f = parse_function(obj)
    directions = int(obj.get("directions", 2000))
    b, model = busemann_seminorm(f, directions, cfg.seed, return_model=True)
    values = [{"X": dump_vector(q), "f": float(f(q)), "busemann": float(b(q))}
              for q in _queries(obj, f.dim)]
    result = {
        "command": "busemann",
        "directions": directions,
        "points": int(model.points),
        "kernel": dump_matrix(model.kernel.vectors.T) if model.kernel.dim else [],
        "domination_excess": float(model.domination_excess),
        "values": values,
    }
    return result, True


def _job_scan(cfg: JobConfig, obj: dict):
    desc = parse_descriptor(obj)
    field = model_field(desc)
    n = field.dim
    if "sequence" in obj:
        seq = [parse_vector(z) for z in obj["sequence"]]
    else:
        seq = [np.eye(n, dtype=complex)[0] / k for k in range(1, DEFAULT_SEQUENCE + 1)]
    z0 = parse_vector(obj["z0"]) if "z0" in obj else np.zeros(n, dtype=complex)
    if "X" not in obj:
        raise SchemaError("scan needs a tangent vector 'X'")
    X = parse_vector(obj["X"])
    normalized = bool(obj.get("normalized", True))
    rep = scan(field, seq, z0, X, cfg.tol, cfg.seed, normalized=normalized)
    result = {
        "command": "scan",
        "field": dump_descriptor(desc),
        "X": dump_vector(X),
        "normalized": normalized,
        "rows": [{"k": k, "z": dump_vector(z), "value": float(v)}
                 for k, (z, v) in enumerate(zip(rep.points, rep.values), start=1)],
        "limit": float(rep.limit_value),
        "limsup": float(rep.limsup_estimate),
        "liminf": float(rep.liminf_estimate),
        "tolerance": float(rep.tolerance),
        "usc": bool(rep.usc_violation),
        "usc_gap": float(rep.usc_gap),
        "lsc": bool(rep.lsc_violation),
        "lsc_gap": float(rep.lsc_gap),
    }
    return result, True


def _fmt_z(z: list) -> str:
    return " ".join(f"{re!r}{im:+}j" for re, im in z)


def _to_csv(result: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if result["command"] == "scan":
        w.writerow(["k", "z", "re_value"])
        for row in result["rows"]:
            w.writerow([row["k"], _fmt_z(row["z"]), repr(row["value"])])
        buf.write(f"# limsup={result['limsup']!r} limit={result['limit']!r} "
                  f"usc={str(result['usc']).lower()} lsc={str(result['lsc']).lower()}\n")
    elif result["command"] == "verify-paper":
        w.writerow(["criterion", "name", "measured", "expected", "tolerance", "passed"])
        for r in result["rows"]:
            w.writerow([r["criterion"], r["name"], repr(r["measured"]), r["expected"],
                        repr(r["tolerance"]), str(r["passed"]).lower()])
    else:
        w.writerow(["key", "value"])
        for k, v in result.items():
            w.writerow([k, v if isinstance(v, str) else json.dumps(v)])
    return buf.getvalue()


def _job_verify(cfg: JobConfig, obj):
    rows = run_all(cfg.tol, seed=0)
    for r in rows:
        print(r.line(), file=sys.stderr)
    result = {
        "command": "verify-paper",
        "rows": [{"criterion": r.criterion, "name": r.name, "measured": float(r.measured),
                  "expected": r.expected, "tolerance": float(r.tolerance), "passed": bool(r.passed)}
                 for r in rows],
        "passed": all(r.passed for r in rows),
    }
    return result, True


JOBS = {"mvee": _job_mvee, "wu": _job_wu, "busemann": _job_busemann, "scan": _job_scan,
        "verify-paper": _job_verify}


def run(cfg: JobConfig) -> int:
    obj = _load(cfg.input_path) if cfg.input_path else {}
    result, certified = JOBS[cfg.command](cfg, obj)
    text = _to_csv(result) if cfg.format == "csv" else json.dumps(result, indent=2) + "\n"
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.command == "verify-paper":
        return EXIT_OK if result["passed"] else EXIT_FAILED_ROWS
    return EXIT_OK if certified else EXIT_UNCERTIFIED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wumetric", description="Wu pseudometric computations")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="JSON description (not used by verify-paper)")
    p.add_argument("--tol", type=float, default=None, help="solver tolerance (default 1e-6 or $WU_DEFAULT_TOL)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--budget", type=int, default=50, help="cutting-plane rounds")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        tol = args.tol if args.tol is not None else default_tol()
        cfg = JobConfig(args.command, args.input, tol, args.seed, args.budget, args.out, args.format)
        return run(cfg)
    except NotSpanningError as exc:
        print(f"error: points do not span: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SchemaError, DimensionError, UnsupportedPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    except (InvariantError, np.linalg.LinAlgError) as exc:
        print(f"error: invariant breach: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
