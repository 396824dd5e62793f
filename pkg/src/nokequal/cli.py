"""Command-line front end: ``nokequal <subcommand> ...``.

Exit codes: 0 success, 2 argument or validation error, 3 input parse error,
4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import invariants as inv
from .forest import enumerate_basic, validate_forest
from .linalg import InconsistentSystem
from .params import ParameterError, Parameters
from .ring import Z, Z2, multiply, reduce_mod2
from .serialize import ParseError, class_to_json, emit_class, forest_from_json, forest_to_json, parse_class

EXIT_USAGE, EXIT_PARSE, EXIT_INTERNAL = 2, 3, 4


class UsageError(Exception):
    pass


def _params(args) -> Parameters:
    return Parameters(args.d, args.k, args.n)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def cmd_betti(args) -> str:
    p = _params(args)
    table = inv.betti_from_relations(p, Z2) if args.mod2 else inv.betti(p)
    if args.format == "csv":
        return "degree,rank\n" + "".join(f"{d},{r}\n" for d, r in sorted(table.items()))
    if args.format == "ascii":
        return "".join(f"H^{d}: {r}\n" for d, r in sorted(table.items()))
    return json.dumps({str(d): r for d, r in sorted(table.items())})


def cmd_basis(args) -> str:
    p = _params(args)
    if args.degree is None:
        raise UsageError("basis requires --degree")
    basis = enumerate_basic(p, args.degree)
    return _dump([forest_to_json(f, p) for f in basis])


def _read_class(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_class(text)
    except ParseError as exc:
        raise ParseError(exc.path, f"{path}: {exc.message}") from None


def cmd_mul(args) -> str:
    if not args.lhs or not args.rhs:
        raise UsageError("mul requires --lhs and --rhs")
    lhs, rhs = _read_class(args.lhs), _read_class(args.rhs)
    if lhs.params != rhs.params:
        raise UsageError(f"parameter mismatch: {lhs.params.as_tuple()} vs {rhs.params.as_tuple()}")
    if args.mod2:
        lhs, rhs = reduce_mod2(lhs), reduce_mod2(rhs)
    elif lhs.ring != rhs.ring:
        raise UsageError(f"coefficient ring mismatch: {lhs.ring} vs {rhs.ring}")
    return emit_class(multiply(lhs, rhs))


def cmd_tc(args) -> str:
    p = _params(args)
    if args.s is None or args.s < 1:
        raise UsageError("tc requires --s >= 1")
    report = inv.tc_bounds(p, args.s).as_dict()
    report.update({"d": p.d, "k": p.k, "n": p.n})
    return _dump(report)


def cmd_predicates(args) -> str:
    return _dump(inv.determination_predicates(_params(args)))


def table_cells(d: int, s: int, k_range, n_range):
    """One cell per (k, n); ``None`` marks the blank region n <= k."""
    cells = []
    for n in range(n_range[0], n_range[1] + 1):
        for k in range(k_range[0], k_range[1] + 1):
            if n <= k:
                cells.append({"k": k, "n": n, "blank": True})
                continue
            p = Parameters(d, k, n)
            det = inv.omnibus_holds(p)
            cells.append({"k": k, "n": n, "floor": p.m, "determined": det,
                          "value": s * p.m if det else None, "blank": False})
    return cells


def cmd_table(args) -> str:
    s = args.s
    if s < 1:
        raise UsageError("--s must be >= 1")
    k_range, n_range = (args.k_min, args.k_max), (args.n_min, args.n_max)
    if k_range[0] < 3 or k_range[0] > k_range[1]:
        raise UsageError(f"bad k range {list(k_range)}: need 3 <= k-min <= k-max")
    if n_range[0] < 1 or n_range[0] > n_range[1]:
        raise UsageError(f"bad n range {list(n_range)}: need 1 <= n-min <= n-max")
    Parameters(args.d, k_range[0], k_range[0] + 1)  # validates d
    cells = table_cells(args.d, s, k_range, n_range)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "n", "floor", "determined", "value"])
        for c in cells:
            if c["blank"]:
                continue
            w.writerow([c["k"], c["n"], c["floor"], str(c["determined"]).lower(),
                        "" if c["value"] is None else c["value"]])
        return buf.getvalue()
    if args.format == "json":
        return _dump([c for c in cells if not c["blank"]])
    ks = list(range(k_range[0], k_range[1] + 1))
    width = max(3, len(str(n_range[1])) + 1, len(str(s * n_range[1] // 3)) + 1)
    lines = ["n\\k".rjust(width) + "".join(str(k).rjust(width) for k in ks)]
    by = {(c["k"], c["n"]): c for c in cells}
    for n in range(n_range[0], n_range[1] + 1):
        row = str(n).rjust(width)
        for k in ks:
            c = by[(k, n)]
            text = "" if c["blank"] else ("?" if c["value"] is None else str(c["value"]))
            row += text.rjust(width)
        lines.append(row)
    return "\n".join(lines) + "\n"


def _certificate_json(value, cert) -> dict:
    prod = cert.product
    if hasattr(prod, "terms") and isinstance(prod.terms, dict):
        product = [{"coeff": c, "factors": [forest_to_json(f, prod.params) for f in key]}
                   for key, c in prod.terms.items()]
    else:
        product = class_to_json(prod)
    return {"value": value, "verified": cert.verified, "productNonzeroIn": cert.product_degree,
            "product": product, "upperBound": cert.upper_bound}


def cmd_cl(args) -> str:
    p = _params(args)
    value, cert = inv.cup_length(p, args.mode, Z2 if args.mod2 else Z, args.cap)
    return _dump(_certificate_json(value, cert))


def cmd_zcl(args) -> str:
    p = _params(args)
    if args.s is None or args.s < 2:
        raise UsageError("zcl requires --s >= 2")
    value, cert = inv.zcl(p, args.s, args.mode, Z2 if args.mod2 else Z, args.cap)
    return _dump(_certificate_json(value, cert))


def cmd_validate(args) -> str:
    with open(args.file) as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    f, p = forest_from_json(obj, check=False)
    report = validate_forest(f, p)
    out = _dump({"valid": report.valid,
                 "violations": [{"rule": r, "message": m} for r, m in report.violations]})
    return out, (0 if report.valid else EXIT_USAGE)


COMMANDS = {
    "betti": cmd_betti, "basis": cmd_basis, "mul": cmd_mul, "tc": cmd_tc,
    "table": cmd_table, "cl": cmd_cl, "zcl": cmd_zcl, "predicates": cmd_predicates,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nokequal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def params(sp, required=True):
        sp.add_argument("--d", type=int, required=required)
        sp.add_argument("--k", type=int, required=required)
        sp.add_argument("--n", type=int, required=required)

    sp = sub.add_parser("betti", help="Betti numbers")
    params(sp)
    sp.add_argument("--mod2", action="store_true", help="compute ranks over GF(2)")
    sp.add_argument("--format", choices=["json", "csv", "ascii"], default="json")

    sp = sub.add_parser("basis", help="basic forests of one degree")
    params(sp)
    sp.add_argument("--degree", type=int)

    sp = sub.add_parser("mul", help="multiply two class files")
    sp.add_argument("--lhs")
    sp.add_argument("--rhs")
    sp.add_argument("--mod2", action="store_true")

    sp = sub.add_parser("tc", help="TC_s bounds")
    params(sp)
    sp.add_argument("--s", type=int, required=True)

    sp = sub.add_parser("predicates", help="determination and formality predicates")
    params(sp)

    sp = sub.add_parser("table", help="cat/TC_s determination table")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    for flag in ("--k-min", "--k-max", "--n-min", "--n-max"):
        sp.add_argument(flag, type=int, required=True)
    sp.add_argument("--format", choices=["json", "csv", "ascii"], default="json")

    for name in ("cl", "zcl"):
        sp = sub.add_parser(name, help=f"{name} with witness certificate")
        params(sp)
        if name == "zcl":
            sp.add_argument("--s", type=int, required=True)
        sp.add_argument("--mode", choices=["witness", "exhaustive"], default="witness")
        sp.add_argument("--cap", type=int, default=inv.DEFAULT_EXHAUSTIVE_CAP)
        sp.add_argument("--mod2", action="store_true")

    sp = sub.add_parser("validate", help="check a forest JSON file")
    sp.add_argument("file")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
        code = 0
        if isinstance(out, tuple):
            out, code = out
    except (ParameterError, UsageError, inv.SearchTooLarge) as exc:
        print(f"nokequal {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"nokequal {args.command}: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InconsistentSystem as exc:
        print(f"nokequal {args.command}: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"nokequal {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
