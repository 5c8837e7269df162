"""Command-line interface: ``python -m qpeano <command> [options]``.

Every command prints one JSON record (or CSV with ``--format csv``)::

    {"command": ..., "inputs": {...}, "result": ... or "rows": [[t, v], ...],
     "metadata": {"rel_tol": ..., "max_terms": ...}}

Floats are written with 17 significant digits, so values read back equal
the library results exactly.  Exit codes: 0 success, 2 domain error (an
``{"error": ...}`` record is printed), 64 usage error, 65 malformed JSON.

Function arguments take the JSON forms of :mod:`qpeano.funcrep`; ``-``
reads the JSON from stdin.  ``QPEANO_CONFIG`` may hold a path to a JSON file
(or inline JSON) with ``rel_tol`` / ``max_terms``; command-line flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import interp, peano, qarith, qcalc, qspline, qtaylor, quad
from .exceptions import QDomainError
from .funcrep import from_json

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_USAGE = 64
EXIT_DATA = 65


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- serialization -------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def dumps(obj) -> str:
    """JSON with floats at 17 significant digits."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    return json.dumps(obj)


def _csv_cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v))
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_csv_cell(x) for x in v)
    return "" if v is None else str(v)


def to_csv(record: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "rows" in record:
        w.writerow(record.get("columns", ["t", "value"]))
        for row in record["rows"]:
            w.writerow([_csv_cell(v) for v in row])
    else:
        res = record["result"]
        w.writerow(["key", "value"])
        if isinstance(res, dict):
            for k, v in res.items():
                w.writerow([k, _csv_cell(v)])
        else:
            w.writerow(["result", _csv_cell(res)])
    return buf.getvalue()


# -- argument helpers ----------------------------------------------------------


def _load_json(text: str, what: str):
    if text == "-":
        text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"malformed JSON for {what}: {exc}") from exc


def _function(text: str):
    obj = _load_json(text, "--f")
    if isinstance(obj, (int, float)):
        obj = {"type": "polynomial", "coeffs": [obj]}
    return from_json(obj)


def _floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def _config(args) -> qcalc.IntegralConfig:
    base = {}
    env = os.environ.get("QPEANO_CONFIG")
    if env:
        if os.path.isfile(env):
            with open(env) as fh:
                env = fh.read()
        base = _load_json(env, "QPEANO_CONFIG")
        if not isinstance(base, dict):
            raise DataError("QPEANO_CONFIG must hold a JSON object")
    rel_tol = args.rel_tol if args.rel_tol is not None else base.get("rel_tol", qcalc.DEFAULT_CONFIG.rel_tol)
    max_terms = args.max_terms if args.max_terms is not None else base.get("max_terms", qcalc.DEFAULT_CONFIG.max_terms)
    return qcalc.IntegralConfig(float(rel_tol), int(max_terms))


def _grid(a: float, b: float, n: int) -> np.ndarray:
    if n < 2:
        raise QDomainError(f"grid needs at least 2 points, got {n}")
    return np.linspace(a, b, n)


# -- commands ------------------------------------------------------------------


def cmd_qint(args, cfg):
    return {"result": qarith.q_int(args.n, args.q)}


def cmd_qfact(args, cfg):
    return {"result": qarith.q_factorial(args.n, args.q)}


def cmd_qdiff(args, cfg):
    f = _function(args.f)
    return {"result": float(qcalc.q_derivative_n(f, args.t, args.order, args.q))}


def cmd_qint_def(args, cfg):
    f = _function(args.f)
    q = qarith.as_q(args.q).require_reciprocal()
    if args.a == 0.0:
        res = qcalc.jackson_integral_0b(f, args.b, 1.0 / q, cfg, full_output=True)
        return {"result": res.value, "metadata": {"terms": res.terms, "converged": res.converged}}
    return {"result": qcalc.jackson_integral_ab(f, args.a, args.b, 1.0 / q, cfg)}


def cmd_taylor(args, cfg):
    f = _function(args.f)
    exp = qtaylor.q_taylor_expand(f, args.a, args.n, args.q)
    rem = qtaylor.q_taylor_remainder(f, args.a, args.x, args.n, args.q, cfg, form=args.form)
    return {
        "result": {
            "f": float(f(args.x)),
            "expansion": exp(args.x),
            "remainder": rem,
            "coeffs": list(exp.coeffs),
        }
    }


def _functional(text):
    obj = _load_json(text, "--functional")
    return peano.LinearFunctional.from_json(obj)


def cmd_kernel(args, cfg):
    L = _functional(args.functional)
    K = peano.PeanoKernel(L, args.n)
    ts = _grid(*L.domain, args.grid)
    return {"rows": [[t, v] for t, v in zip(ts, np.atleast_1d(K(ts)))], "columns": ["t", "kernel"]}


def cmd_reconstruct(args, cfg):
    L = _functional(args.functional)
    f = _function(args.f)
    K = peano.PeanoKernel(L, args.n)
    return {"result": {"apply": peano.apply(L, f, cfg), "reconstruct": peano.reconstruct(K, f, cfg)}}


def cmd_interp_error(args, cfg):
    f = _function(args.f)
    nodes = interp.as_knots(_floats(args.nodes))
    m = args.m if args.m is not None else len(nodes) - 1
    return {
        "result": {
            "direct": interp.interp_error_direct(f, nodes, args.x),
            "kowalewski": interp.kowalewski_remainder(f, nodes, args.x, m, args.q, cfg),
        }
    }


def cmd_trapz(args, cfg):
    f = _function(args.f)
    err = quad.trapezoid_error(f, args.a, args.b, args.q, cfg)
    return {
        "result": {
            "rule": quad.q_trapezoid(f, args.a, args.b, args.q),
            "error": err.actual,
            "mean_value_bound": err.mean_value_bound,
            "xi": err.xi,
            "constant": quad.trapezoid_constant(args.a, args.b, args.q),
        }
    }


def cmd_quad_bound(args, cfg):
    obj = _load_json(args.rule, "--rule")
    if not isinstance(obj, dict):
        raise DataError("--rule must be a JSON object")
    rule = quad.QuadratureRule.from_json(obj)
    f = _function(args.f)
    p1 = math.inf if args.p1 in ("inf", "infinity") else float(args.p1)
    return {"result": {"remainder": rule.remainder(f, cfg), "bound": quad.remainder_bound(rule, f, p1, cfg)}}


def cmd_quad_optimize(args, cfg):
    nodes = _floats(args.nodes)
    w = quad.optimize_weights_l2(nodes, args.m, args.b, args.q, cfg)
    try:
        objective = quad.kernel_l2_objective(nodes, w, args.m, args.b, args.q, cfg)
    except QDomainError:
        # q too close to 1 for the Jackson lattice; the weights are still exact
        objective = None
    return {"result": {"weights": [float(v) for v in w], "objective": objective}}


def cmd_bspline(args, cfg):
    knots = interp.as_knots(_floats(args.knots))
    k, n = args.k, args.degree
    if k + n + 1 >= len(knots):
        raise QDomainError(f"degree {n} from index {k} needs {k + n + 2} knots, got {len(knots)}")
    ts = _grid(knots[k], knots[k + n + 1], args.grid)
    vals = np.atleast_1d(qspline.q_bspline(k, n, knots, ts, args.q))
    return {"rows": [[t, v] for t, v in zip(ts, vals)], "columns": ["t", "N"]}


def cmd_divdiff(args, cfg):
    f = _function(args.f)
    return {"result": qspline.divided_difference(f, _floats(args.knots))}


def cmd_identity51(args, cfg):
    f = _function(args.f)
    lhs, rhs = qspline.divdiff_integral_identity(f, _floats(args.knots), args.q, cfg)
    return {"result": {"lhs": lhs, "rhs": rhs}}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--rel-tol", type=float, default=None, help="Jackson series tolerance")
    common.add_argument("--max-terms", type=int, default=None, help="Jackson series term cap")

    parser = _Parser(prog="qpeano", description="q-Peano kernels, q-Taylor remainders and q-quadrature")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("qint", cmd_qint, "q-integer [n]_q")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)

    p = add("qfact", cmd_qfact, "q-factorial [n]_q!")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)

    p = add("qdiff", cmd_qdiff, "q-derivative D_q^order f(t); pass 1/q for D_{1/q}")
    p.add_argument("--f", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--order", type=int, default=1)

    p = add("qint-def", cmd_qint_def, "Jackson integral int_a^b f d_{1/q}")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--q", type=float, required=True)

    p = add("taylor", cmd_taylor, "q-Taylor expansion and remainder")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--form", choices=("bounded", "truncated"), default="bounded")

    p = add("kernel", cmd_kernel, "sample the Peano kernel of a functional")
    p.add_argument("--functional", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", type=int, default=257)

    p = add("reconstruct", cmd_reconstruct, "L(f) directly and through its kernel")
    p.add_argument("--functional", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", required=True)

    p = add("interp-error", cmd_interp_error, "interpolation error, direct and Kowalewski form")
    p.add_argument("--f", required=True)
    p.add_argument("--nodes", required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--m", type=int, default=None)

    p = add("trapz", cmd_trapz, "q-trapezoid rule and its error")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--q", type=float, required=True)

    p = add("quad-bound", cmd_quad_bound, "Hölder bound on a quadrature remainder")
    p.add_argument("--rule", required=True, help='{"nodes": [...], "weights": [...], "b": ..., "q": ..., "m": ...}')
    p.add_argument("--f", required=True)
    p.add_argument("--p1", default="inf", choices=("2", "inf", "infinity"))

    p = add("quad-optimize", cmd_quad_optimize, "L2-optimal weights for given nodes")
    p.add_argument("--nodes", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--q", type=float, required=True)

    p = add("bspline", cmd_bspline, "sample a q-B-spline on its support")
    p.add_argument("--knots", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--grid", type=int, default=257)

    p = add("divdiff", cmd_divdiff, "divided difference over distinct knots")
    p.add_argument("--f", required=True)
    p.add_argument("--knots", required=True)

    p = add("identity51", cmd_identity51, "divided difference vs its B-spline integral")
    p.add_argument("--f", required=True)
    p.add_argument("--knots", required=True)
    p.add_argument("--q", type=float, required=True)

    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"qpeano: {exc}", file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    inputs = {k: v for k, v in vars(args).items() if k not in ("func", "format", "command")}
    try:
        cfg = _config(args)
        out = args.func(args, cfg)
    except UsageError as exc:
        print(f"qpeano: {exc}", file=stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(dumps({"error": {"type": "malformed_json", "message": str(exc)}}), file=stdout)
        return EXIT_DATA
    except QDomainError as exc:
        print(dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}), file=stdout)
        print(f"qpeano: {exc}", file=stderr)
        return EXIT_DOMAIN
    record = {"command": args.command, "inputs": inputs}
    if "rows" in out:
        record["columns"] = out["columns"]
        record["rows"] = out["rows"]
    else:
        record["result"] = out["result"]
    record["metadata"] = {"rel_tol": cfg.rel_tol, "max_terms": cfg.max_terms, **out.get("metadata", {})}
    if "q" in inputs:
        record["metadata"]["q"] = inputs["q"]
    stdout.write(to_csv(record) if args.format == "csv" else dumps(record) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
