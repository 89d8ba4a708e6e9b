"""Command-line front end: ``negtype <command> ...``.

Every command prints one report, either as indented text (12 significant
digits) or as JSON (``--format json``).  Exit status is 0 on success, 1 when
the input is rejected, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import __version__
from .bounds import construct_extremal, strictness_report, zeta
from .errors import ConvergenceFailure, NegTypeError, TriangleViolation
from .formats import (
    load_space,
    load_tree,
    save_space,
    space_digest,
    space_to_json,
    tree_digest,
)
from .metric_core import Mode, scaled_diameter
from .negative_type import (
    BISECTION_TOL,
    UNBOUNDED,
    ViolatingVector,
    check_negative_type,
    check_strict_negative_type,
    hyperplane_spectrum,
    max_negative_type,
)
from .simplex_gap import ENUMERATION_CAP, negative_type_gap, zero_gap
from .trees import tree_metric, tree_one_gap

TREE_CROSSCHECK_MAX_N = 8
TREE_CROSSCHECK_TOL = 1e-4

_NUMBER_OR_UNBOUNDED = {"anyOf": [{"type": "number"}, {"const": "unbounded"}]}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "inputs_digest", "results", "warnings"],
    "properties": {
        "command": {
            "enum": ["validate", "analyze", "maxp", "gap", "zeta", "construct", "tree-gap"]
        },
        "inputs_digest": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["space", "tree", "parameters"]},
                "n": {"type": "integer", "minimum": 1},
                "mode": {"enum": ["metric", "semimetric"]},
                "sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
            },
        },
        "results": {"type": "object"},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "error": {
            "type": "object",
            "required": ["name", "message"],
            "properties": {"name": {"type": "string"}, "message": {"type": "string"}},
        },
    },
    "$defs": {"number_or_unbounded": _NUMBER_OR_UNBOUNDED},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("NEGTYPE_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="negtype", description="(Strict) p-negative type of finite metric spaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text", help="output format")
    space_in = _Parser(add_help=False)
    space_in.add_argument("file", help="space as .json or .csv")
    space_in.add_argument("--format-in", choices=["json", "csv"], help="override input format")
    space_in.add_argument(
        "--semimetric", action="store_true", help="read the input as a semi-metric (skip triangle check)"
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sub.add_parser("validate", parents=[common, space_in], help="validate a distance matrix")

    p = sub.add_parser("analyze", parents=[common, space_in], help="summary of negative type properties")
    p.add_argument("--tol", type=float, default=BISECTION_TOL)

    p = sub.add_parser("maxp", parents=[common, space_in], help="maximal p-negative type")
    p.add_argument("--tol", type=float, default=BISECTION_TOL, help="bisection width on p")

    p = sub.add_parser("gap", parents=[common, space_in], help="p-negative type gap with witness")
    p.add_argument("--p", type=float, required=True, dest="p")
    p.add_argument("--max-n", type=int, default=ENUMERATION_CAP)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inner", choices=["exact", "projected_gradient"], default="exact")
    p.add_argument("--threads", type=int, default=_default_threads())

    p = sub.add_parser("zeta", parents=[common], help="lower bound on maximal p-negative type")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--diameter", type=float, required=True)

    p = sub.add_parser("construct", parents=[common], help="extremal complete bipartite space")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--diameter", type=float, required=True)
    p.add_argument("--semimetric", action="store_true")
    p.add_argument("--out", help="write the space JSON here")

    p = sub.add_parser("tree-gap", parents=[common], help="1-negative type gap of a weighted tree")
    p.add_argument("file", help="tree JSON")
    p.add_argument("--threads", type=int, default=_default_threads())
    return parser


# -- report helpers -----------------------------------------------------------


def _num(x):
    if x is UNBOUNDED:
        return "unbounded"
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def _vec(v):
    return [float(x) for x in v]


def _verdict(verdict) -> dict:
    cert = verdict.certificate
    if isinstance(cert, ViolatingVector):
        return {
            "holds": verdict.holds,
            "certificate": "violating_vector",
            "kind": cert.kind,
            "eta": _vec(cert.eta),
            "value": cert.value,
            "tolerance": cert.tolerance,
        }
    return {
        "holds": verdict.holds,
        "certificate": "projected_spectrum",
        "max_eigenvalue": float(cert.eigenvalues[-1]) if cert.eigenvalues.size else None,
        "tolerance": cert.tolerance,
    }


def _space_warnings(space, ratio=None) -> list:
    out = []
    if space.mode is Mode.SEMIMETRIC:
        out.append("semi-metric mode: triangle inequality not checked")
    if ratio is not None and space.mode is Mode.METRIC and ratio > 2:
        out.append("scaled diameter > 2 in a metric space: zeta is a lower bound, optimality not established")
    return out


def _load(args):
    return load_space(args.file, args.format_in, Mode.SEMIMETRIC if args.semimetric else None)


def _cmd_validate(args):
    try:
        space = _load(args)
    except TriangleViolation as exc:
        digest = {"kind": "space", "file": args.file}
        report = _report("validate", digest, {"valid": False, "violating_triple": list(exc.triple)})
        report["error"] = {"name": type(exc).__name__, "message": str(exc)}
        return 1, report
    results = {"valid": True, "n": space.n, "mode": space.mode.value}
    if space.n >= 2:
        results["scaled_diameter"] = scaled_diameter(space)
    return 0, _report("validate", space_digest(space), results, _space_warnings(space))


def _cmd_analyze(args):
    space = _load(args)
    results = {"n": space.n, "mode": space.mode.value}
    warns = _space_warnings(space)
    if space.n < 2:
        return 0, _report("analyze", space_digest(space), results, warns)
    ratio = scaled_diameter(space)
    results["scaled_diameter"] = ratio
    results["zero_gap"] = zero_gap(space.n)
    mt = max_negative_type(space, args.tol)
    results["max_negative_type"] = _num(mt.p_max)
    if space.n >= 3:
        rep = strictness_report(space)
        results["zeta"] = _num(rep.zeta)
        results["strict_interval"] = str(rep.strict_interval)
        warns = _space_warnings(space, ratio)
        if rep.zeta is UNBOUNDED:
            samples = [1.0, 2.0, 8.0]
        else:
            samples = [0.5 * rep.zeta, 0.99 * rep.zeta, rep.zeta]
    else:
        samples = [1.0, 2.0]
    if mt.bounded:
        samples.append(mt.p_max)
    results["verdicts"] = [
        {
            "p": p,
            "negative_type": check_negative_type(space, p).holds,
            "strict_negative_type": check_strict_negative_type(space, p).holds,
        }
        for p in samples
    ]
    return 0, _report("analyze", space_digest(space), results, warns)


def _cmd_maxp(args):
    space = _load(args)
    mt = max_negative_type(space, args.tol)
    lo, hi = mt.bracket
    results = {
        "p_max": _num(mt.p_max),
        "bracket": [lo, hi],
        "tolerance": mt.tolerance,
        "at_lo": _verdict(check_negative_type(space, lo)),
    }
    if mt.bounded:
        results["at_hi"] = _verdict(check_negative_type(space, hi))
    else:
        w, _, _ = hyperplane_spectrum(space, hi)
        results["max_eigenvalue_at_cap"] = float(w[-1])
    return 0, _report("maxp", space_digest(space), results, _space_warnings(space))


def _gap_results(space, res) -> dict:
    simplex = res.witness_simplex
    return {
        "p": res.p,
        "gamma_star": res.gamma_star,
        "method": res.method.value,
        "converged": res.converged,
        "simplices_examined": res.simplices_examined,
        "witness": {
            "a_side": list(simplex.a_side),
            "b_side": list(simplex.b_side),
            "a_labels": [space.label(i) for i in simplex.a_side],
            "b_labels": [space.label(i) for i in simplex.b_side],
            "m": _vec(res.witness_loads.m),
            "w": _vec(res.witness_loads.w),
        },
    }


def _cmd_gap(args):
    space = _load(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConvergenceFailure)
        res = negative_type_gap(
            space, args.p, max_n=args.max_n, inner=args.inner, threads=args.threads, seed=args.seed
        )
    warns = _space_warnings(space)
    warns += [str(w.message) for w in caught if issubclass(w.category, ConvergenceFailure)]
    if res.gamma_star < 0:
        warns.append(f"negative gap: the space does not have {args.p:g}-negative type")
    return 0, _report("gap", space_digest(space), _gap_results(space, res), warns)


def _cmd_zeta(args):
    z = zeta(args.n, args.diameter)
    results = {
        "n": args.n,
        "diameter_ratio": args.diameter,
        "gamma0": zero_gap(args.n),
        "zeta": _num(z),
        "type_interval": "[0, inf)" if z is UNBOUNDED else f"[0, {z:.12g}]",
        "strict_interval": "[0, inf)" if z is UNBOUNDED else f"[0, {z:.12g})",
    }
    warns = []
    if args.diameter > 2:
        warns.append("diameter > 2: zeta is optimal for semi-metric spaces; for metric spaces it is a lower bound")
    digest = {"kind": "parameters", "n": args.n, "diameter_ratio": args.diameter}
    return 0, _report("zeta", digest, results, warns)


def _cmd_construct(args):
    mode = Mode.SEMIMETRIC if args.semimetric else Mode.METRIC
    space = construct_extremal(args.n, args.diameter, mode)
    results = {"n": space.n, "diameter_ratio": args.diameter, "zeta": _num(zeta(args.n, args.diameter))}
    if args.out:
        save_space(space, args.out)
        results["written_to"] = args.out
    else:
        results["space"] = space_to_json(space)
    return 0, _report("construct", space_digest(space), results, _space_warnings(space))


def _cmd_tree_gap(args):
    tree = load_tree(args.file)
    gap = tree_one_gap(tree)
    results = {"n": tree.vertex_count, "tree_one_gap": gap}
    if tree.vertex_count <= TREE_CROSSCHECK_MAX_N:
        res = negative_type_gap(tree_metric(tree), 1.0, threads=args.threads)
        results["enumerated_gap"] = res.gamma_star
        results["abs_difference"] = abs(res.gamma_star - gap)
        results["agrees"] = abs(res.gamma_star - gap) <= TREE_CROSSCHECK_TOL
    return 0, _report("tree-gap", tree_digest(tree), results)


_COMMANDS = {
    "validate": _cmd_validate,
    "analyze": _cmd_analyze,
    "maxp": _cmd_maxp,
    "gap": _cmd_gap,
    "zeta": _cmd_zeta,
    "construct": _cmd_construct,
    "tree-gap": _cmd_tree_gap,
}


def _report(command, digest, results, warns=()):
    return {"command": command, "inputs_digest": digest, "results": results, "warnings": list(warns)}


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return _num(obj)


def _fmt_scalar(v) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower() if v is not None else "null"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def render_text(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for key, value in obj.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                fields = ", ".join(f"{k}={_fmt_scalar(v)}" for k, v in item.items())
                lines.append(f"{pad}  - {fields}")
        elif isinstance(value, list):
            if value and isinstance(value[0], list):
                lines.append(f"{pad}{key}:")
                lines.extend(f"{pad}  [{', '.join(_fmt_scalar(x) for x in row)}]" for row in value)
            else:
                lines.append(f"{pad}{key}: [{', '.join(_fmt_scalar(x) for x in value)}]")
        else:
            lines.append(f"{pad}{key}: {_fmt_scalar(value)}")
    return "\n".join(line for line in lines if line)


def render(report, fmt) -> str:
    report = _clean(report)
    if fmt == "json":
        # repr-based float output is the shortest string that round-trips exactly.
        return json.dumps(report, indent=2, allow_nan=False)
    return render_text(report)


def run(argv=None, stdout=None) -> int:
    """Parse ``argv``, execute one command, print its report; return the exit code."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("negtype: a command is required")
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    try:
        code, report = _COMMANDS[args.command](args)
    except NegTypeError as exc:
        code = 1
        digest = {"kind": "parameters"}
        if getattr(args, "file", None):
            digest = {"kind": "tree" if args.command == "tree-gap" else "space", "file": args.file}
        report = _report(args.command, digest, {})
        report["error"] = {"name": type(exc).__name__, "message": str(exc)}
    text = render(report, args.format)
    print(text, file=stdout)
    if "error" in report and args.format == "text":
        print(f"{report['error']['name']}: {report['error']['message']}", file=sys.stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
