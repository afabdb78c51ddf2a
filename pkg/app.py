"""
nilsolv - Einstein nilradicals among free nilpotent Lie algebras
Command-line entry point
"""

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from config import FLOW_MAX_ITER, FLOW_RESTARTS, FLOW_SEED, FLOW_TOL, LOG_LEVEL
from nilsolv.cone import Screened, cone_test, cone_vector, parse_type, root_set, screen_free
from nilsolv.core import DomainError, NilsolvError, configure_logging
from nilsolv.core.serialize import (
    decode_scalar,
    dumps,
    encode_algebra,
    encode_case,
    encode_cone_certificate,
    encode_extension,
    encode_flow,
    encode_matrix,
    encode_outcome,
    encode_scalar,
    encode_system,
)
from nilsolv.freelie import build_algebra, witt_dimensions
from nilsolv.graph import classify
from nilsolv.metric import MetricParams, admissible_metric, ricci_nilpotent, scalar_curvature
from nilsolv.nilsoliton import EinsteinNilradical, assemble_equations, describe_extension, solve_equations
from nilsolv.numflow import FlowConfig, residual_minimize

logger = logging.getLogger("nilsolv.cli")

Table = Tuple[List[str], List[List[Any]]]


class _Parser(argparse.ArgumentParser):
    """Usage errors become DomainError (exit 1) instead of SystemExit(2)."""

    def error(self, message: str):
        raise DomainError(message)


def load_params(path: str, m: int, p: int) -> MetricParams:
    """JSON object slot -> "n/d", {"a", "b", "sqrt"} or "symbolic"."""
    file = Path(path)
    if not file.is_file():
        raise DomainError(f"parameter file not found: {path}")
    try:
        raw = json.loads(file.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DomainError(f"parameter file is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise DomainError("parameter file must hold a JSON object")

    field, values = QQ, {}
    for slot, obj in raw.items():
        if isinstance(obj, str) and obj.strip().lower() == "symbolic":
            values[slot] = "symbolic"
            continue
        value, K = decode_scalar(obj)
        if K != QQ:
            if field != QQ and field != K:
                raise DomainError("all irrational parameters must share one square root")
            field = K
        values[slot] = value
    if field != QQ:
        values = {s: v if isinstance(v, (str, field.dtype)) else field.convert_from(v, QQ) for s, v in values.items()}
    return MetricParams.from_mapping(m, p, values, field)


# Commands


def cmd_dims(args) -> Tuple[Dict[str, Any], Table]:
    dims = witt_dimensions(args.m, args.max_k)
    doc = {"m": args.m, "dimensions": dims, "total": sum(dims)}
    return doc, (["k", "dim"], [[k, d] for k, d in enumerate(dims, start=1)])


def cmd_basis(args) -> Tuple[Dict[str, Any], Optional[Table]]:
    alg = build_algebra(args.m, args.p)
    doc = encode_algebra(alg)
    rows = [[t.index, t.degree, alg.label(t.index)] for t in alg.basis]
    return doc, (["index", "degree", "label"], rows)


def cmd_ricci(args) -> Tuple[Dict[str, Any], Optional[Table]]:
    alg = build_algebra(args.m, args.p)
    params = load_params(args.params, args.m, args.p)
    g = admissible_metric(alg, params)
    ric = ricci_nilpotent(alg, g)
    doc: Dict[str, Any] = {
        "m": args.m,
        "p": args.p,
        "labels": ric.labels,
        "ricci": encode_matrix(ric.rows, ric.domain, args.float),
    }
    if not g.is_symbolic:
        doc["scalar_curvature"] = encode_scalar(scalar_curvature(ric), ric.domain, args.float)
    return doc, None


def cmd_cone(args) -> Tuple[Dict[str, Any], Optional[Table]]:
    t = parse_type(args.type)
    cert = cone_test(t)
    doc = encode_cone_certificate(cert)
    doc["v"] = [encode_scalar(x) for x in cone_vector(t)]
    doc["roots"] = [list(f) for f in root_set(t)]
    return doc, None


def cmd_screen(args) -> Tuple[Dict[str, Any], Table]:
    records = []
    for m in range(2, args.max_m + 1):
        for p in range(args.min_p, args.max_p + 1):
            result = screen_free(m, p)
            record = {"m": m, "p": p, "verdict": "screened" if isinstance(result, Screened) else "survivor"}
            if result.certificate is not None:
                record["certificate"] = encode_cone_certificate(result.certificate)
            records.append(record)
    rows = [[r["m"], r["p"], r["verdict"]] for r in records]
    return {"cases": records, "survivors": [[r["m"], r["p"]] for r in records if r["verdict"] == "survivor"]}, (["m", "p", "verdict"], rows)


def _decide(m: int, p: int):
    result = screen_free(m, p)
    if isinstance(result, Screened):
        return result, None
    system = assemble_equations(m, p)
    return solve_equations(system), system


def cmd_solve(args) -> Tuple[Dict[str, Any], Optional[Table]]:
    outcome, system = _decide(args.m, args.p)
    doc = encode_outcome(outcome, args.float)
    if args.equations and system is not None:
        doc["system"] = encode_system(system)
    return doc, None


def cmd_classify(args) -> Tuple[Dict[str, Any], Table]:
    report = classify(args.max_m, args.max_p)
    cases = [encode_case(c, args.float) for c in report.cases]
    doc = {
        "cases": cases,
        "einstein": [list(x) for x in report.einstein],
        "not_einstein": [list(x) for x in report.not_einstein],
        "screened": [list(x) for x in report.screened],
        "failed": [[c["m"], c["p"], c["error_kind"]] for c in report.failed],
    }
    rows = [[c["m"], c["p"], c["verdict"] or "", c["error_kind"] or ""] for c in cases]
    return doc, (["m", "p", "verdict", "error"], rows)


def cmd_extend(args) -> Tuple[Dict[str, Any], Optional[Table]]:
    outcome, _ = _decide(args.m, args.p)
    if not isinstance(outcome, EinsteinNilradical):
        raise DomainError(f"f({args.m},{args.p}) is not an Einstein nilradical ({outcome.verdict})")
    doc = encode_extension(describe_extension(outcome), args.float)
    doc.update(m=args.m, p=args.p)
    return doc, None


def cmd_flow(args) -> Tuple[Dict[str, Any], Optional[Table]]:
    cfg = FlowConfig(restarts=args.restarts, max_iter=args.max_iter, tol=args.tol, seed=args.seed)
    doc = encode_flow(residual_minimize(args.m, args.p, cfg))
    doc["evidence_only"] = True
    return doc, None


COMMANDS = {
    "dims": cmd_dims,
    "basis": cmd_basis,
    "ricci": cmd_ricci,
    "cone": cmd_cone,
    "screen": cmd_screen,
    "solve": cmd_solve,
    "classify": cmd_classify,
    "extend": cmd_extend,
    "flow": cmd_flow,
}


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument(
        "--csv", dest="format", action="store_const", const="csv",
        help="CSV table (dims, screen, classify); other commands print JSON",
    )
    fmt.add_argument("--text", dest="format", action="store_const", const="text")
    common.add_argument("--float", action="store_true", help="add floating approximations next to exact values")
    common.add_argument("--verbose", action="store_true", help="debug logging with timestamps on stderr")

    parser = _Parser(prog="nilsolv", description="Einstein nilradicals among free nilpotent Lie algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", parents=[common], help="Witt dimensions d_k(m)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-k", type=int, required=True)

    p = sub.add_parser("basis", parents=[common], help="Hall basis and structure constants")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)

    p = sub.add_parser("ricci", parents=[common], help="Ricci form of an admissible metric")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--params", required=True, help="JSON file of metric parameters")

    p = sub.add_parser("cone", parents=[common], help="cone criterion for an eigenvalue type")
    p.add_argument("--type", required=True, help='"mu1,mu2,...;d1,d2,..."')

    p = sub.add_parser("screen", parents=[common], help="cone screening of f(m, p)")
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--max-p", type=int, required=True)
    p.add_argument("--min-p", type=int, default=3)

    p = sub.add_parser("solve", parents=[common], help="exact nilsoliton decision for f(m, p)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--equations", action="store_true", help="include the equation system")

    p = sub.add_parser("classify", parents=[common], help="classify every f(m, p) in a range")
    p.add_argument("--max-m", type=int, required=True)
    p.add_argument("--max-p", type=int, required=True)

    p = sub.add_parser("extend", parents=[common], help="rank-one Einstein extension")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)

    p = sub.add_parser("flow", parents=[common], help="floating residual minimization")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--restarts", type=int, default=FLOW_RESTARTS)
    p.add_argument("--tol", type=float, default=FLOW_TOL)
    p.add_argument("--seed", type=int, default=FLOW_SEED)
    p.add_argument("--max-iter", type=int, default=FLOW_MAX_ITER)

    return parser


def render(doc: Dict[str, Any], table: Optional[Table], fmt: str) -> str:
    if fmt == "csv" and table is not None:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table[0])
        writer.writerows(table[1])
        return buffer.getvalue()
    if fmt == "text":
        if table is not None:
            header, rows = table
            cells = [header] + [[str(x) for x in row] for row in rows]
            widths = [max(len(str(row[i])) for row in cells) for i in range(len(header))]
            return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells) + "\n"
        return "\n".join(f"{k}: {json.dumps(v, ensure_ascii=False)}" for k, v in sorted(doc.items())) + "\n"
    return dumps(doc) + "\n"


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    """Parse, execute, print; returns the process exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except DomainError as e:
        print(f"nilsolv: {e}", file=err)
        return e.exit_code
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging("DEBUG" if args.verbose else LOG_LEVEL, timestamps=args.verbose)
    logger.debug("running %s", args.command)
    try:
        doc, table = COMMANDS[args.command](args)
        out.write(render(doc, table, args.format or "json"))
    except NilsolvError as e:
        print(f"nilsolv: {e}", file=err)
        return e.exit_code

    if args.command == "classify" and any(c[2] == "undecided" for c in doc["failed"]):
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
