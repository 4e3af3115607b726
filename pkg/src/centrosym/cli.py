"""Command-line interface.

Every command prints one JSON document on standard output.  Exit codes:
0 success, 1 a negative ``verify`` verdict or a failing ``suite`` check,
2 invalid input (precondition, membership, bound), 3 numerical failure,
4 internal certification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .centro_decomp import reduced_forms, split
from .centro_perturb import guo_complex, guo_real, shift_perron, stochastic_form
from .errors import CertificationError, NumericalFailure, PreconditionError
from .matrix_core import (
    Tolerance,
    matrix_from_json,
    scalar_to_json,
    to_fraction,
    vector_to_json,
)
from .realize import lambda_gamma_bound, realize_L4
from .spectral_engine import Spectrum, certify

__all__ = ["RunConfig", "build_parser", "run", "main"]

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_NUMERIC, EXIT_CERT = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    mode: str = "float"
    tolerances: Tolerance = field(default_factory=Tolerance)
    seed: int = 7
    count: int = 200

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


def _any_matrix(M) -> dict:
    """Matrix JSON; non-square blocks carry explicit row and column counts."""
    data = [[scalar_to_json(v) for v in row] for row in M.tolist()]
    if M.shape[0] == M.shape[1]:
        return {"n": int(M.shape[0]), "data": data}
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "data": data}


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"{path} is not valid JSON: {exc}") from exc


def _load_matrix(cfg: RunConfig):
    if not cfg.input_path:
        raise PreconditionError("--in is required")
    obj = _read_json(cfg.input_path)
    if isinstance(obj, list):
        obj = {"data": obj}
    return matrix_from_json(obj, exact=cfg.exact)


def _number(value, cfg: RunConfig):
    return to_fraction(value) if cfg.exact else float(to_fraction(value))


def _cmd_decompose(args, cfg):
    blocks = split(_load_matrix(cfg), cfg.tolerances)
    red = reduced_forms(blocks)
    out = {
        "parity": blocks.parity,
        "A": _any_matrix(blocks.A),
        "B": _any_matrix(blocks.B),
        "sym_block": _any_matrix(red.sym_block),
        "skew_block": _any_matrix(red.skew_block),
    }
    if blocks.parity == "odd":
        out["x"] = vector_to_json(blocks.x)
        out["y"] = vector_to_json(blocks.y)
        out["c"] = scalar_to_json(blocks.c)
        out["orth_sym_block"] = _any_matrix(red.orth_sym_block)
    return out, EXIT_OK


def _cmd_perturb(args, cfg):
    C = _load_matrix(cfg)
    t = _number(args.t, cfg)
    if args.kind == "real":
        if args.lambda2 is None:
            raise PreconditionError("perturb real needs --lambda2")
        rep = guo_real(C, _number(args.lambda2, cfg), t, args.sign, cfg.tolerances, block=args.block)
    else:
        if args.a is None or args.b is None:
            raise PreconditionError("perturb complex needs --a and --b")
        rep = guo_complex(C, _number(args.a, cfg), _number(args.b, cfg), t, args.sign,
                          cfg.tolerances, block=args.block, method=args.method)
    return rep.to_json(), EXIT_OK


def _parse_gamma(text: str, cfg: RunConfig) -> Spectrum:
    try:
        vals = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"--gamma is not valid JSON: {exc}") from exc
    if isinstance(vals, dict):
        return Spectrum.from_json(vals, exact=cfg.exact)
    return Spectrum.from_pairs(vals, exact=cfg.exact)


def _cmd_realize(args, cfg):
    gamma = _parse_gamma(args.gamma, cfg)
    if args.bound:
        upper, M = lambda_gamma_bound(gamma, args.budget, cfg.tolerances)
        return {"upper_bound": scalar_to_json(upper), "matrix": _any_matrix(M),
                "budget": args.budget}, EXIT_OK
    res = realize_L4(gamma, cfg.tolerances)
    part = res.partition
    return {
        "perron_value": scalar_to_json(res.perron_value),
        "matrix": _any_matrix(res.matrix),
        "q": vector_to_json(res.q),
        "E": _any_matrix(res.E),
        "F": _any_matrix(res.F),
        "gamma1": part.gamma1.to_json(),
        "gamma2": part.gamma2.to_json(),
        "cert": res.cert.to_json(),
    }, EXIT_OK


def _cmd_stochastic(args, cfg):
    B, eps, dist = stochastic_form(_load_matrix(cfg), cfg.tolerances, return_info=True)
    return {"output": _any_matrix(B), "eps": float(eps), "spectral_distortion": float(dist)}, EXIT_OK


def _cmd_shift(args, cfg):
    C = _load_matrix(cfg)
    X = shift_perron(C, _number(args.eps, cfg), args.direction, cfg.tolerances,
                     allow_equal=args.allow_equal)
    return {"output": _any_matrix(X), "direction": args.direction,
            "eps": scalar_to_json(_number(args.eps, cfg))}, EXIT_OK


def _cmd_verify(args, cfg):
    M = _load_matrix(cfg)
    if not args.spectrum:
        raise PreconditionError("verify needs --spectrum")
    obj = _read_json(args.spectrum)
    expected = Spectrum.from_pairs(obj, exact=cfg.exact) if isinstance(obj, list) \
        else Spectrum.from_json(obj, exact=cfg.exact)
    report = certify(M, expected, cfg.tolerances)
    return report.to_json(), EXIT_OK if report.ok else EXIT_NEGATIVE


def _cmd_suite(args, cfg):
    from .suite import run_suite

    res = run_suite(cfg.seed, cfg.count)
    summary = {name: ("pass" if ok else "fail") for name, ok in res["checks"].items()}
    return {"seed": res["seed"], "count": res["count"], "ok": res["ok"], "summary": summary,
            "results": res["results"]}, EXIT_OK if res["ok"] else EXIT_NEGATIVE


_COMMANDS = {
    "decompose": _cmd_decompose,
    "perturb": _cmd_perturb,
    "realize": _cmd_realize,
    "stochastic-form": _cmd_stochastic,
    "shift-perron": _cmd_shift,
    "verify": _cmd_verify,
    "suite": _cmd_suite,
}


def _global_flags(parser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--mode", choices=("exact", "float"), default=default("float"),
                        help="rational (exact) or floating-point arithmetic")
    parser.add_argument("--structural-tol", type=float, default=default(1e-12))
    parser.add_argument("--spectral-tol", type=float, default=default(1e-8))
    parser.add_argument("--seed", type=int, default=default(7))
    parser.add_argument("--count", type=int, default=default(200))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="centrosym", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="blocks and reduced forms")
    p.add_argument("--in", dest="input_path", required=True)

    p = sub.add_parser("perturb", parents=[common], help="move the Perron root and one eigenvalue")
    p.add_argument("kind", choices=("real", "complex"))
    p.add_argument("--in", dest="input_path", required=True)
    p.add_argument("--lambda2")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--t", required=True)
    p.add_argument("--sign", choices=("plus", "minus"), required=True)
    p.add_argument("--block", choices=("auto", "sym", "skew"), default="auto")
    p.add_argument("--method", choices=("support", "lp"), default="support")

    p = sub.add_parser("realize", parents=[common], help="realize a list with a Perron value")
    p.add_argument("--gamma", required=True, help="JSON list of [re, im] pairs")
    p.add_argument("--bound", action="store_true", help="report the refined Perron upper bound")
    p.add_argument("--budget", type=int, default=None, help="number of alternative splits to try")

    p = sub.add_parser("stochastic-form", parents=[common], help="constant row sum normal form")
    p.add_argument("--in", dest="input_path", required=True)

    p = sub.add_parser("shift-perron", parents=[common], help="add or subtract eps/n everywhere")
    p.add_argument("--in", dest="input_path", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--direction", choices=("up", "down"), required=True)
    p.add_argument("--allow-equal", action="store_true", help="accept eps == n * min entry")

    p = sub.add_parser("verify", parents=[common], help="certify a matrix against a spectrum")
    p.add_argument("--in", dest="input_path", required=True)
    p.add_argument("--spectrum", required=True)

    sub.add_parser("suite", parents=[common], help="seeded property ensembles")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=getattr(args, "input_path", None),
        mode=args.mode,
        tolerances=Tolerance(args.structural_tol, args.spectral_tol),
        seed=args.seed,
        count=args.count,
    )


def _error_body(exc: Exception, code: int) -> dict:
    body = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    residual = getattr(exc, "residual", None)
    if residual is not None:
        body["residual"] = float(residual)
    violation = getattr(exc, "violation", None)
    if violation is not None:
        body["violation"] = float(violation)
    report = getattr(exc, "report", None)
    if report is not None and hasattr(report, "to_json"):
        body["report"] = report.to_json()
    return body


def _default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    return scalar_to_json(obj)


def run(args) -> tuple[dict, int]:
    """Dispatch parsed arguments; returns the JSON body and the exit code."""
    try:
        cfg = _config(args)
        if cfg.seed < 0 or cfg.count < 0:
            raise PreconditionError("--seed and --count must be nonnegative")
        return _COMMANDS[args.command](args, cfg)
    except PreconditionError as exc:
        return _error_body(exc, EXIT_INPUT), EXIT_INPUT
    except NumericalFailure as exc:
        return _error_body(exc, EXIT_NUMERIC), EXIT_NUMERIC
    except CertificationError as exc:
        return _error_body(exc, EXIT_CERT), EXIT_CERT


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    body, code = run(args)
    sys.stdout.write(json.dumps(body, indent=2, sort_keys=True, default=_default) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
