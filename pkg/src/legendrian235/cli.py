"""Command-line front end.

Every subcommand prints one JSON document on stdout (keys sorted, with a
top-level ``"schema": "1"``).  Exit codes: 0 success, 1 domain error (error
JSON on stderr), 2 usage error or malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Any, Sequence

from .errors import DomainError, ParseError
from .exact import GRAMMAR, RatFunc, parse

SCHEMA = "1"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def _load_json(value: str) -> Any:
    """Inline JSON, ``@path`` or a path to an existing file."""
    text = value
    path = value[1:] if value.startswith("@") else value
    if value.startswith("@") or (not value.lstrip().startswith(("{", "[", '"')) and os.path.isfile(path)):
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from exc


def _ratfunc(value: Any) -> RatFunc:
    if isinstance(value, dict):
        try:
            return RatFunc.from_json(value)
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed rational function JSON: {exc}") from exc
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise UsageError(f"expected a rational function, got {value!r}")
    return parse(str(value))


def _matrix(value: Any):
    from .linalg import MatF
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise UsageError("a matrix must be a list of rows")
    return MatF.from_rows([[_ratfunc(x) for x in row] for row in value])


def _spec_from_args(args):
    from .legcurve import CurveSpec
    if args.spec is not None:
        obj = _load_json(args.spec)
        if not isinstance(obj, dict) or "A" not in obj or "z" not in obj:
            raise UsageError('spec JSON must have keys "A" and "z"')
        A, z = obj["A"], obj["z"]
    else:
        if args.A is None or args.z is None:
            raise UsageError("give --spec or both --A and --z")
        A, z = _load_json(args.A), _load_json(args.z)
    if not isinstance(z, list):
        raise UsageError("z must be a list")
    return CurveSpec(_matrix(A), [_ratfunc(x) for x in z])


def _q0_from_text(text: str) -> RatFunc:
    """A rational function in t, JSON {num, den, vars}, or "c2=...,c0=..."."""
    from .ode4 import exponential_family_q0
    stripped = text.strip()
    if stripped.startswith("{"):
        return _ratfunc(_load_json(stripped))
    if "=" in stripped:
        vals = {}
        for part in stripped.split(","):
            key, _, val = part.partition("=")
            vals[key.strip()] = parse(val)
        if set(vals) != {"c2", "c0"}:
            raise UsageError('shorthand must be "c2=...,c0=..."')
        return exponential_family_q0(vals["c2"], vals["c0"])
    return parse(stripped)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"not a complex number: {text!r}") from exc


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_invariants(args) -> dict:
    from .ode4 import legendrian_invariants
    return legendrian_invariants(_q0_from_text(args.q0)).to_json()


def cmd_classify(args) -> dict:
    from .legcurve import classify
    return classify(_spec_from_args(args)).to_json()


def cmd_equiv(args) -> dict:
    from .legcurve import equivalent
    return {"equivalent": equivalent(_ratfunc(args.a), _ratfunc(args.b))}


def cmd_sigma(args) -> dict:
    from .legcurve import compatible_sigma, sigma_space
    spec = _spec_from_args(args)
    space = sigma_space(spec)
    return {"dim": len(space), "sigma": compatible_sigma(spec).to_json()}


def cmd_aut_dim(args) -> dict:
    from .legcurve import aut_dimension
    return {"aut_dim": aut_dimension(_spec_from_args(args))}


def cmd_prolong(args) -> dict:
    from .liealg import FiltLieAlg, tanaka_prolong
    alg_obj = _load_json(args.algebra)
    if not isinstance(alg_obj, dict):
        raise UsageError("algebra JSON must be an object")
    alg = FiltLieAlg.from_json(alg_obj)
    g0_obj = _load_json(args.g0)
    if not isinstance(g0_obj, list):
        raise UsageError("g0 JSON must be a list of matrices")
    res = tanaka_prolong(alg, [_matrix(X) for X in g0_obj], args.max)
    return res.to_json()


def cmd_models(args) -> dict:
    from . import checks
    from .models235 import MODEL_NAMES, model_invariants
    if args.verify_all:
        results = [fn() for fn in (checks.check_model_table, checks.check_model_invariants,
                                   checks.check_models_structure,
                                   checks.check_cross_equivalence)]
        return {"ok": all(r.passed for r in results), "results": [r.to_json() for r in results]}
    if args.name is None:
        raise UsageError("give --name or --verify-all")
    if args.name not in MODEL_NAMES:
        raise DomainError(f"unknown model {args.name!r}; choose from {', '.join(MODEL_NAMES)}")
    param = None if args.param is None else _ratfunc(args.param)
    return model_invariants(args.name, param).to_json()


def cmd_rolling(args) -> dict:
    from .legcurve import rolling_class
    out = rolling_class(_fraction(args.rho)).to_json()
    if not args.with_representative:
        out.pop("representative", None)
    return out


def cmd_lf_check(args) -> dict:
    from .ode4 import numeric_lf_reduce
    ts = [float(x) for x in args.t.split(",")] if args.t else [0.1, 0.2, 0.3, 0.4, 0.5]
    rep = numeric_lf_reduce(_complex(args.c2), _complex(args.c0), ts, branch=args.branch)
    out = rep.to_json()
    out["ok"] = rep.max_residual < args.tol
    return out


def cmd_transform_ode(args) -> dict:
    from .ode4 import ODE4, general_transform_ode, pullback_transform_ode
    obj = _load_json(args.ode)
    if not isinstance(obj, dict):
        raise UsageError('ODE JSON must be an object with keys among "p3", "p2", "p1", "p0"')
    extra = set(obj) - {"p3", "p2", "p1", "p0"}
    if extra:
        raise UsageError(f"unknown ODE keys: {sorted(extra)}")
    e = ODE4(**{k: _ratfunc(v) for k, v in obj.items()})
    lam, mu = parse(args.lam), parse(args.mu)
    if args.pullback:
        p0, p1, p2, p3 = pullback_transform_ode(e, lam, mu)
        return {"pullback": ODE4(p3, p2, p1, p0).to_json()}
    out = general_transform_ode(e, lam, mu)
    return {"ode": out.to_json(), "is_LF": out.is_LF,
            "legendrian_class": out.is_legendrian_class}


def cmd_verify(args) -> dict:
    from .checks import ALL_CHECKS
    if args.suite == "all":
        selected = ALL_CHECKS
    else:
        try:
            wanted = {int(x) for x in args.suite.split(",")}
        except ValueError as exc:
            raise UsageError(f"suite must be 'all' or a list of numbers: {args.suite!r}") from exc
        bad = wanted - set(range(1, len(ALL_CHECKS) + 1))
        if bad:
            raise UsageError(f"no such criteria: {sorted(bad)}")
        selected = [ALL_CHECKS[i - 1] for i in sorted(wanted)]
    results = [fn() for fn in selected]
    for r in results:
        print(r.line(), file=sys.stderr)
    return {"ok": all(r.passed for r in results), "results": [r.to_json() for r in results]}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", help='JSON {"A": [[...]], "z": [...]} inline, @file or path')
    p.add_argument("--A", help="4x4 matrix as JSON (list of rows)")
    p.add_argument("--z", help="base point as a JSON list")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true",
                        help="human-readable output instead of one-line JSON")

    parser = argparse.ArgumentParser(
        prog="legendrian235",
        description="Invariants of Legendrian curves in P^3, Tanaka prolongation and "
                    "the multiply-transitive (2,3,5) models.",
        epilog="Expression grammar:\n" + GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_, epilog="Expression grammar:\n" + GRAMMAR,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=fn)
        return p

    p = add("invariants", cmd_invariants, "q0 -> R, I_lit, I_cls")
    p.add_argument("--q0", required=True,
                   help='rational function in t, RatFunc JSON, or "c2=...,c0=..."')

    p = add("classify", cmd_classify, "(A, z) -> curve class")
    _add_spec_args(p)

    p = add("equiv", cmd_equiv, "are L_a and L_b projectively equivalent")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = add("sigma", cmd_sigma, "(A, z) -> compatible symplectic form")
    _add_spec_args(p)

    p = add("aut-dim", cmd_aut_dim, "(A, z) -> dimension of the symmetry algebra")
    _add_spec_args(p)

    p = add("prolong", cmd_prolong, "Tanaka prolongation of a depth-2 algebra")
    p.add_argument("--algebra", required=True, help="FiltLieAlg JSON inline, @file or path")
    p.add_argument("--g0", required=True, help="JSON list of matrices on the degree -1 part")
    p.add_argument("--max", type=int, default=5)

    p = add("models", cmd_models, "multiply-transitive (2,3,5) model tables")
    p.add_argument("--name")
    p.add_argument("--param", help="parameter value or its own name for symbolic")
    p.add_argument("--verify-all", action="store_true")

    p = add("rolling", cmd_rolling, "class of the rolling spheres curve")
    p.add_argument("--rho", required=True, help="radius ratio p/q")
    p.add_argument("--with-representative", action="store_true")

    p = add("lf-check", cmd_lf_check, "numeric Laguerre-Forsyth residuals")
    p.add_argument("--c2", required=True, help="complex number, e.g. 3+2j")
    p.add_argument("--c0", required=True)
    p.add_argument("--t", help="comma separated sample points")
    p.add_argument("--branch", type=int, choices=(1, -1), default=1)
    p.add_argument("--tol", type=float, default=1e-9)

    p = add("transform-ode", cmd_transform_ode, "point transformation of a 4th order ODE")
    p.add_argument("--ode", required=True, help='JSON {"p3": ..., "p2": ..., "p1": ..., "p0": ...}')
    p.add_argument("--lam", required=True, help="lambda(t); Moebius unless --pullback")
    p.add_argument("--mu", required=True, help="mu(t)")
    p.add_argument("--pullback", action="store_true",
                   help="return coefficients composed with lambda (any rational lambda)")

    p = add("verify", cmd_verify, "run the reproduction checks")
    p.add_argument("--suite", default="all", help="'all' or comma separated criterion numbers")
    return parser


def _pretty(doc: Any, indent: int = 0) -> str:
    pad = " " * indent
    if isinstance(doc, dict):
        lines = []
        for k in sorted(doc):
            v = doc[k]
            if isinstance(v, (dict, list)) and v and not _is_matrix(v):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 2))
            else:
                lines.append(f"{pad}{k}:" + (" " if not _is_matrix(v) else "")
                             + _pretty_scalar(v, indent + 2))
        return "\n".join(lines)
    if isinstance(doc, list):
        return "\n".join(f"{pad}- " + _pretty(x, indent + 2).lstrip() for x in doc)
    return pad + _pretty_scalar(doc, indent)


def _is_matrix(v) -> bool:
    return isinstance(v, list) and all(isinstance(r, list) for r in v)


def _pretty_scalar(v, indent: int) -> str:
    if _is_matrix(v):
        width = max((len(str(x)) for r in v for x in r), default=1)
        rows = ["[" + " ".join(str(x).rjust(width) for x in r) + "]" for r in v]
        return ("\n" + " " * indent).join([""] + rows)
    return json.dumps(v) if not isinstance(v, str) else v


def emit(doc: dict, pretty: bool = False) -> None:
    doc = dict(doc, schema=SCHEMA)
    if pretty:
        print(_pretty(doc))
    else:
        print(json.dumps(doc, sort_keys=True, separators=(",", ":")))


def _error(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message, "schema": SCHEMA}, sort_keys=True),
          file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc = args.func(args)
    except (UsageError, ParseError) as exc:
        _error("usage", str(exc))
        return 2
    except DomainError as exc:
        _error(type(exc).__name__, str(exc))
        return 1
    emit(doc, args.pretty)
    if args.command == "verify" or (args.command == "models" and args.verify_all):
        return 0 if doc["ok"] else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
