"""Command-line front end.

Commands: eval, dual, region, verify, suite, lemma-check.  Output is JSON by
default (schema shipped as ohno/report.schema.json), CSV or text on request;
identical configurations (including seeds) produce byte-identical output.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 verification failure.

Default effort budgets can be overridden by environment variables
OHNO_MAX_TERMS, OHNO_NODES and OHNO_QMC_POINTS (same meaning as the
corresponding flags; flags win).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional

from .errors import DomainError, OhnoError
from .indexes import abscissa, dual, parse_index
from .kernels import EvalResult
from .quadrature import lemma31_check
from .relations import (
    RelationReport,
    evaluate,
    hypothesis_check,
    verify_linear_relation,
    verify_ohno,
    verify_ohno_integer,
    verify_sum_formula,
    verify_zero,
)
from .suites import SUITES, run_suite, summarize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_VERIFY = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' with optional parts, e.g. '0.5', '-0.25+1i', '2i'."""
    cleaned = text.strip().replace(" ", "").replace("i", "j").replace("I", "j")
    try:
        value = complex(cleaned)
    except ValueError as exc:
        raise UsageError(f"bad complex syntax {text!r}; expected forms like "
                         f"'0.5' or '-0.25+1i'") from exc
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise UsageError(f"non-finite complex value {text!r}")
    return value


def format_complex(z: complex) -> str:
    if z.imag == 0.0:
        return repr(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def _env_int(name: str) -> Optional[int]:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"environment variable {name} must be an integer, "
                         f"got {raw!r}") from exc


def build_parser() -> _Parser:
    p = _Parser(
        prog="ohno",
        description="Evaluate the Ohno function and verify its identities.",
        epilog="Environment overrides for effort defaults: OHNO_MAX_TERMS, "
               "OHNO_NODES, OHNO_QMC_POINTS. Index syntax: '1,2,2' "
               "(innermost exponent first); complex syntax: 'a+bi'.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_output(sp):
        sp.add_argument("--format", choices=("json", "csv", "text"),
                        default="json", help="output format (default json)")
        sp.add_argument("--out", default=None, help="write output to this path")

    sp = sub.add_parser("eval", help="evaluate I_k(s)")
    sp.add_argument("--index", required=True, help="index, e.g. '1,2'")
    sp.add_argument("--s", required=True, help="complex argument, e.g. '0.5'")
    sp.add_argument("--method", default="auto",
                    choices=("auto", "series", "integral", "mellin"))
    sp.add_argument("--tol", type=float, default=None,
                    help="target absolute tolerance (advisory)")
    sp.add_argument("--max-terms", type=int, default=None, dest="max_terms",
                    help="per-axis truncation of the completed sums")
    sp.add_argument("--margin", type=float, default=0.05,
                    help="strict distance kept from region boundaries")
    sp.add_argument("--nodes", type=int, default=None,
                    help="tanh-sinh refinement level (1..9)")
    sp.add_argument("--qmc-points", type=int, default=None, dest="qmc_points",
                    help="log2 QMC points per replicate")
    sp.add_argument("--seed", type=int, default=0, help="QMC scrambling seed")
    add_output(sp)

    sp = sub.add_parser("dual", help="dual index")
    sp.add_argument("--index", required=True)
    add_output(sp)

    sp = sub.add_parser("region", help="convergence abscissa and slack terms")
    sp.add_argument("--index", required=True)
    add_output(sp)

    sp = sub.add_parser("verify", help="verify one identity instance")
    sp.add_argument("--relation", required=True,
                    choices=("ohno-integer", "ohno", "sum-formula", "linear",
                             "zero", "hypothesis"))
    sp.add_argument("--index", default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--s", default=None)
    sp.add_argument("--a", type=int, default=None)
    sp.add_argument("--T", type=float, default=None)
    sp.add_argument("--l", type=int, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--method", default="auto",
                    choices=("auto", "series", "integral", "mellin"))
    add_output(sp)

    sp = sub.add_parser("suite", help="run a named verification suite")
    sp.add_argument("name", choices=sorted(SUITES))
    sp.add_argument("--seed", type=int, default=0)
    add_output(sp)

    sp = sub.add_parser("lemma-check",
                        help="exponential-kernel identity at given c, s")
    sp.add_argument("--c", required=True,
                    help="comma-separated positive reals, e.g. '1,2'")
    sp.add_argument("--s", required=True)
    sp.add_argument("--nodes", type=int, default=None)
    add_output(sp)

    return p


def _result_dict(res: EvalResult) -> dict:
    return {
        "value": {"re": float(res.value.real), "im": float(res.value.imag)},
        "value_text": format_complex(complex(res.value)),
        "err_est": float(res.err_est),
        "method": res.method,
        "terms_used": int(res.terms_used),
        "nodes_used": int(res.nodes_used),
    }


def _config_dict(args: argparse.Namespace, keys: list[str]) -> dict:
    out = {}
    for key in keys:
        out[key] = getattr(args, key, None)
    return out


def _reports_csv(reports: list[RelationReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RelationReport.CSV_FIELDS)
    for rep in reports:
        writer.writerow(rep.to_csv_row())
    return buf.getvalue()


def _scalar_csv(payload: dict) -> str:
    flat = {}

    def flatten(prefix, obj):
        if isinstance(obj, dict):
            for kk, vv in obj.items():
                flatten(prefix + kk + ".", vv)
        else:
            flat[prefix.rstrip(".")] = obj if not isinstance(obj, list) \
                else json.dumps(obj)

    flatten("", payload)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    keys = sorted(flat)
    writer.writerow(keys)
    writer.writerow([flat[k] for k in keys])
    return buf.getvalue()


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        if "reports" in doc:
            return _reports_csv_from_doc(doc)
        return _scalar_csv(doc.get("result", {}))
    lines = [f"command: {doc['command']}"]
    if "result" in doc:
        for key in sorted(doc["result"]):
            lines.append(f"{key}: {doc['result'][key]}")
    if "reports" in doc:
        for rep in doc["reports"]:
            status = "pass" if rep["pass"] else "FAIL"
            lines.append(
                f"[{status}] {rep['relation_id']} {json.dumps(rep['inputs'], sort_keys=True)} "
                f"|lhs-rhs|={rep['abs_diff']:.3e} tol={rep['tolerance']:.1e} "
                f"errs={rep['lhs_err']:.1e}/{rep['rhs_err']:.1e}")
        summ = doc["summary"]
        lines.append(f"summary: {summ['passed']}/{summ['total']} passed, "
                     f"{summ['failed']} failed")
    return "\n".join(lines) + "\n"


def _reports_csv_from_doc(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RelationReport.CSV_FIELDS)
    for rep in doc["reports"]:
        writer.writerow([
            rep["relation_id"], json.dumps(rep["inputs"], sort_keys=True),
            rep["lhs"]["re"], rep["lhs"]["im"], rep["rhs"]["re"], rep["rhs"]["im"],
            rep["lhs_err"], rep["rhs_err"], rep["abs_diff"], rep["tolerance"],
            rep["pass"]])
    return buf.getvalue()


def _run_verify(args) -> tuple[dict, int]:
    def need(name):
        val = getattr(args, name)
        if val is None:
            raise UsageError(f"--{name} is required for --relation {args.relation}")
        return val

    tol = args.tol
    if args.relation == "ohno-integer":
        rep = verify_ohno_integer(parse_index(need("index")), need("m"),
                                  **({"tol": tol} if tol is not None else {}))
    elif args.relation == "ohno":
        rep = verify_ohno(parse_index(need("index")), parse_complex(need("s")),
                          method=args.method,
                          **({"tol": tol} if tol is not None else {}))
    elif args.relation == "sum-formula":
        rep = verify_sum_formula(need("a"), need("T"), parse_complex(need("s")),
                                 **({"tol": tol} if tol is not None else {}))
    elif args.relation == "linear":
        rep = verify_linear_relation(parse_index(need("index")), need("l"),
                                     parse_complex(need("s")),
                                     **({"tol": tol} if tol is not None else {}))
    elif args.relation == "zero":
        rep = verify_zero(parse_index(need("index")), need("n"),
                          **({"tol": tol} if tol is not None else {}))
    else:
        rep = hypothesis_check(parse_index(need("index")), need("l")).to_report()
    reports = [rep.to_json_dict()]
    doc = {
        "command": "verify",
        "config": _config_dict(args, ["relation", "index", "m", "s", "a", "T",
                                      "l", "n", "tol", "method"]),
        "reports": reports,
        "summary": summarize([rep]),
    }
    return doc, EXIT_OK if rep.passed else EXIT_VERIFY


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "eval":
            index = parse_index(args.index)
            s = parse_complex(args.s)
            opts = {}
            max_terms = args.max_terms if args.max_terms is not None \
                else _env_int("OHNO_MAX_TERMS")
            nodes = args.nodes if args.nodes is not None else _env_int("OHNO_NODES")
            qmc_points = args.qmc_points if args.qmc_points is not None \
                else _env_int("OHNO_QMC_POINTS")
            if args.tol is not None:
                opts["tol"] = args.tol
            if max_terms is not None:
                opts["max_n"] = max_terms
            if nodes is not None:
                opts["nodes"] = nodes
            if qmc_points is not None:
                opts["qmc_points"] = qmc_points
            res = evaluate(index, s, args.method, margin=args.margin,
                           seed=args.seed, **opts)
            doc = {
                "command": "eval",
                "config": {"index": index.text, "s": format_complex(s),
                           "method": args.method, "tol": args.tol,
                           "max_terms": max_terms, "margin": args.margin,
                           "nodes": nodes, "qmc_points": qmc_points,
                           "seed": args.seed},
                "result": _result_dict(res),
            }
            code = EXIT_OK
        elif args.command == "dual":
            index = parse_index(args.index)
            doc = {
                "command": "dual",
                "config": {"index": index.text},
                "result": {"index": index.text, "dual": dual(index).text},
            }
            code = EXIT_OK
        elif args.command == "region":
            index = parse_index(args.index)
            info = abscissa(index)
            doc = {
                "command": "region",
                "config": {"index": index.text},
                "result": {"index": index.text, "abscissa": info.abscissa,
                           "slack": list(info.slack)},
            }
            code = EXIT_OK
        elif args.command == "verify":
            doc, code = _run_verify(args)
        elif args.command == "suite":
            reports = run_suite(args.name, seed=args.seed)
            doc = {
                "command": "suite",
                "config": {"name": args.name, "seed": args.seed},
                "reports": [r.to_json_dict() for r in reports],
                "summary": summarize(reports),
            }
            code = EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY
        else:  # lemma-check
            cs = tuple(float(tok) for tok in args.c.split(","))
            rep = lemma31_check(cs, parse_complex(args.s), nodes=args.nodes)
            doc = {
                "command": "lemma-check",
                "config": {"c": list(cs), "s": args.s, "nodes": args.nodes},
                "result": {"lhs": format_complex(rep.lhs),
                           "rhs": format_complex(rep.rhs),
                           "diff": rep.diff},
            }
            code = EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = _render(doc, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
