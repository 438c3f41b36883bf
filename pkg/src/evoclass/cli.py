"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 cap or resource limit.
"""

import argparse
import csv
import io
import json
import os
import re
import sys
import time

from . import classify as cl
from .caps import Caps
from .errors import CapExceededError, EvoclassError, OracleError, ResourceLimitError
from .evoalg import enumerate_algebras, parse_algebra, parse_tuple_notation, require_compatible, signature
from .gf import field_from_order, field_make
from .ideals import count_points, count_record, make_ideal
from .polyring import MonomialOrder, PolyRing, buchberger, parse_polynomial, standard_monomial_count
from .reference import REFERENCE_COUNTS
from .search import ISOMORPHISM, ISOTOPISM, find_witness, normalize_relation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_LIMIT = 2

FORMATS = ("table", "json", "csv")
TABLE_QS = (2, 3, 5, 7)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- helpers -------------------------------------------------------------------

def _field(args, caps):
    if args.q is not None:
        if args.p is not None or args.k is not None:
            raise UsageError("give either --q or --p/--k, not both")
        return field_from_order(args.q, caps)
    if args.p is not None:
        return field_make(args.p, args.k or 1, caps)
    raise UsageError("a field is required: --q Q or --p P [--k K]")


def _caps(args):
    return Caps.from_overrides(args.cap)


def _workers(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("EVOCLASS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"EVOCLASS_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _algebra(field, text):
    s = text.strip()
    return parse_tuple_notation(field, s) if s.startswith("(") else parse_algebra(field, s)


def _relation(text):
    try:
        return normalize_relation(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _dump_json(obj, out):
    out.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _write_csv(rows, header, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    out.write(buf.getvalue())


def _write_table(rows, header, out):
    rows = [[str(x) for x in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(header)]
    out.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
    for r in rows:
        out.write("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() + "\n")


def _emit_rows(fmt, rows, header, out):
    if fmt == "csv":
        _write_csv(rows, header, out)
    elif fmt == "json":
        for r in rows:
            _dump_json(dict(zip(header, r)), out)
    else:
        _write_table(rows, header, out)


def _fmt_matrix(m):
    return "[" + "; ".join(",".join(row) for row in m) + "]"


# -- subcommands ------------------------------------------------------------

def cmd_enumerate(args, out):
    caps = _caps(args)
    field = _field(args, caps)
    rows = [[a.index, a.literal(), a.tuple_notation()] for a in enumerate_algebras(field, args.n, caps)]
    _emit_rows(args.format, rows, ["index", "algebra", "tuple"], out)
    return EXIT_OK


def cmd_check(args, out):
    caps = _caps(args)
    field = _field(args, caps)
    left = _algebra(field, args.left)
    right = _algebra(field, args.right)
    require_compatible(left, right)
    relation = _relation(args.relation)
    w = find_witness(left, right, relation, caps)
    rec = {
        "left": left.literal(),
        "right": right.literal(),
        "relation": relation,
        "related": w is not None,
        "witness": w.to_dict(field) if w else None,
        "left_signature": list(signature(left)),
        "right_signature": list(signature(right)),
    }
    if args.format == "json":
        _dump_json(rec, out)
    elif args.format == "csv":
        wit = rec["witness"]
        _write_csv([[rec["left"], rec["right"], relation, rec["related"],
                     _fmt_matrix(wit["F"]) if wit else "", _fmt_matrix(wit["G"]) if wit else "",
                     _fmt_matrix(wit["H"]) if wit else ""]],
                   ["left", "right", "relation", "related", "F", "G", "H"], out)
    else:
        out.write(f"left   {rec['left']}  (ann, derived) = {tuple(rec['left_signature'])}\n")
        out.write(f"right  {rec['right']}  (ann, derived) = {tuple(rec['right_signature'])}\n")
        out.write(f"relation {relation}: ")
        if w is None:
            out.write("none\n")
        else:
            wit = rec["witness"]
            out.write(f"witness F={_fmt_matrix(wit['F'])} G={_fmt_matrix(wit['G'])} H={_fmt_matrix(wit['H'])}\n")
    return EXIT_OK


def _partition_output(part, args, timing_ms, out):
    rep = part.report(members=args.members, timing_ms=timing_ms)
    if args.format == "json":
        head = {k: v for k, v in rep.items() if k != "classes"}
        _dump_json(head, out)
        for i, c in enumerate(rep["classes"]):
            _dump_json({"class": i, **c}, out)
        return
    header = ["class", "representative", "tuple", "label", "size"] + (["members"] if args.members else [])
    rows = []
    for i, c in enumerate(rep["classes"]):
        row = [i, c["representative"], c["tuple"], c["label"] if c["label"] is not None else "", c["size"]]
        if args.members:
            row.append(" ".join(c["members"]))
        rows.append(row)
    if args.format == "csv":
        _write_csv(rows, header, out)
        return
    summary = f"q={rep['q']} n={rep['n']} relation={rep['relation']} method={rep['method']} classes={rep['class_count']}"
    if timing_ms is not None:
        summary += f" timing_ms={timing_ms}"
    out.write(summary + "\n")
    _write_table(rows, header, out)


def cmd_classify(args, out):
    caps = _caps(args)
    field = _field(args, caps)
    relation = _relation(args.relation)
    try:
        oracle = cl.make_oracle(relation, args.method, caps, MonomialOrder(args.order), _workers(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.method == cl.INVARIANT and args.n != 2:
        raise UsageError("the invariant method covers n = 2 only")
    start = time.perf_counter()
    part = cl.algorithm1(enumerate_algebras(field, args.n, caps), oracle)
    timing = round((time.perf_counter() - start) * 1000, 1) if args.timing else None
    _partition_output(part, args, timing, out)
    return EXIT_OK


def tables_report(caps, timing=False, workers=1):
    """Per-q counts, representatives, method agreement and the q=7 adjudication."""
    report = {"fields": [], "counts": {}, "reference_counts": {str(q): c for q, c in REFERENCE_COUNTS.items()}}
    for q in TABLE_QS:
        field = field_from_order(q, caps)
        start = time.perf_counter()
        brute = cl.classify(field, 2, ISOMORPHISM, cl.BRUTEFORCE, caps)
        elapsed = round((time.perf_counter() - start) * 1000, 1)
        agreement = {"invariant": cl.classify(field, 2, ISOMORPHISM, cl.INVARIANT, caps).as_sets() == brute.as_sets()}
        if q <= 3:
            gb = cl.classify(field, 2, ISOMORPHISM, cl.GROEBNER, caps, workers=workers)
            agreement["groebner"] = gb.as_sets() == brute.as_sets()
        entry = {
            "q": q,
            "class_count": brute.class_count,
            "representatives": [c.representative.tuple_notation() for c in brute.classes],
            "labels": [str(cl.isomorphism_label_2d(c.representative)) for c in brute.classes],
            "agreement_with_bruteforce": agreement,
            "isotopism_classes": cl.classify(field, 2, ISOTOPISM, cl.INVARIANT, caps).class_count,
        }
        if q in (2, 3, 5):
            entry["reference_match"] = cl.match_reference(brute, field)
        if q == 7:
            adj = cl.adjudicate_reference(field, brute, caps)
            entry["adjudication"] = {k: adj[k] for k in ("merged", "missing", "text")}
        if timing:
            entry["timing_ms"] = elapsed
        report["fields"].append(entry)
        report["counts"][str(q)] = brute.class_count
    return report


def cmd_tables(args, out):
    caps = _caps(args)
    rep = tables_report(caps, args.timing, _workers(args))
    if args.format == "json":
        _dump_json(rep, out)
        return EXIT_OK
    if args.format == "csv":
        rows = []
        for e in rep["fields"]:
            for r, lab in zip(e["representatives"], e["labels"]):
                rows.append([e["q"], r, lab])
        _write_csv(rows, ["q", "representative", "label"], out)
        return EXIT_OK
    counts = " / ".join(str(rep["counts"][str(q)]) for q in TABLE_QS)
    out.write(f"isomorphism class counts for q = 2 / 3 / 5 / 7: {counts}\n")
    for e in rep["fields"]:
        line = f"\nq={e['q']}: {e['class_count']} isomorphism classes, {e['isotopism_classes']} isotopism classes"
        if "timing_ms" in e:
            line += f" (bruteforce {e['timing_ms']} ms)"
        out.write(line + "\n")
        agree = ", ".join(f"{m}={'agree' if ok else 'DISAGREE'}" for m, ok in e["agreement_with_bruteforce"].items())
        out.write(f"  method agreement with bruteforce: {agree}\n")
        if "reference_match" in e:
            out.write(f"  reference representatives match: {'yes' if e['reference_match']['ok'] else 'NO'}\n")
        for r, lab in zip(e["representatives"], e["labels"]):
            out.write(f"    {r:<24} {lab}\n")
        if "adjudication" in e:
            out.write("  reference list check:\n")
            for line in e["adjudication"]["text"].splitlines():
                out.write(f"  {line}\n")
    return EXIT_OK


def cmd_count_maps(args, out):
    caps = _caps(args)
    field = _field(args, caps)
    left = _algebra(field, args.left)
    right = _algebra(field, args.right)
    relation = _relation(args.relation)
    if relation not in (ISOMORPHISM, ISOTOPISM):
        raise UsageError("count-maps supports isomorphism and isotopism")
    if relation == ISOTOPISM and args.method == "groebner":
        caps.check("isotopism_q", field.q, ("method=exhaustive",))
    ideal = make_ideal(relation, left, right, args.encoding)
    count = count_points(ideal, args.method, MonomialOrder(args.order), caps)
    rec = count_record(ideal, args.method, count)
    _emit_rows(args.format, [list(rec.values())], list(rec.keys()), out)
    return EXIT_OK


def cmd_groebner(args, out):
    caps = _caps(args)
    field = _field(args, caps)
    polys_text = list(args.polys)
    if not polys_text:
        raise UsageError("give at least one polynomial")
    if args.vars:
        names = [v.strip() for v in args.vars.split(",") if v.strip()]
    else:
        found = []
        for text in polys_text:
            for name in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text):
                if name not in found:
                    found.append(name)
        names = sorted(found)
    ring = PolyRing(field, names)
    polys = [parse_polynomial(ring, t) for t in polys_text]
    if args.field_equations:
        polys += [ring.field_equation(i) for i in range(ring.nvars)]
    order = MonomialOrder(args.order)
    basis = buchberger(polys, order, caps, ring=ring)
    count = standard_monomial_count(basis)
    lines = [p.to_str(order) for p in basis]
    if args.format == "json":
        _dump_json({"variables": names, "order": args.order, "basis": lines, "standard_monomials": count}, out)
    elif args.format == "csv":
        _write_csv([[p] for p in lines], ["polynomial"], out)
    else:
        out.write(f"reduced basis ({args.order}, variables {', '.join(names)}):\n")
        for p in lines:
            out.write(f"  {p}\n")
        out.write(f"standard monomials: {count}\n")
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def _add_common(p, field=True):
    if field:
        p.add_argument("--q", type=int, help="field order (prime power)")
        p.add_argument("--p", type=int, help="field characteristic")
        p.add_argument("--k", type=int, help="extension degree (with --p)")
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--cap", action="append", default=[], metavar="NAME=VALUE",
                   help=f"override a size cap ({', '.join(Caps.names())})")
    p.add_argument("--threads", type=int, help="worker processes (default: $EVOCLASS_THREADS or CPU count)")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (output no longer byte-stable)")


def build_parser():
    parser = _Parser(prog="evoclass", description="Evolution algebras over finite fields: search, Groebner counts, classification.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    relation_help = "isomorphism, strong-isotopism or isotopism"

    p = sub.add_parser("enumerate", help="list every structure matrix")
    _add_common(p)
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check", help="search for a witness between two algebras")
    _add_common(p)
    p.add_argument("--left", required=True, help="algebra literal, rows ';'-separated")
    p.add_argument("--right", required=True)
    p.add_argument("--relation", default=ISOMORPHISM, help=relation_help)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="partition all algebras into classes")
    _add_common(p)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--relation", default=ISOMORPHISM, help=relation_help)
    p.add_argument("--method", choices=cl.METHODS, default=cl.BRUTEFORCE)
    p.add_argument("--order", choices=MonomialOrder.TAGS, default="grevlex")
    p.add_argument("--members", action="store_true", help="list every member of each class")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("tables", help="consolidated report for q = 2, 3, 5, 7")
    _add_common(p, field=False)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("count-maps", help="count isomorphisms or isotopisms via an ideal")
    _add_common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--relation", default=ISOMORPHISM, help="isomorphism or isotopism")
    p.add_argument("--method", choices=("groebner", "exhaustive"), default="groebner")
    p.add_argument("--order", choices=MonomialOrder.TAGS, default="grevlex")
    p.add_argument("--encoding", choices=("literal", "rabinowitsch"), default="literal",
                   help="determinant constraint: det^(q-1) - 1, or u*det - 1 with an extra variable")
    p.set_defaults(func=cmd_count_maps)

    p = sub.add_parser("groebner", help="reduced Groebner basis of an ideal")
    _add_common(p)
    p.add_argument("polys", nargs="*", help="polynomials like '2*x^2*y + z - 1'")
    p.add_argument("--vars", help="comma-separated variable names (default: sorted names found)")
    p.add_argument("--order", choices=MonomialOrder.TAGS, default="grevlex")
    p.add_argument("--field-equations", action="store_true", help="append x^q - x for every variable")
    p.set_defaults(func=cmd_groebner)
    return parser


def _is_limit(exc):
    if isinstance(exc, OracleError):
        return isinstance(exc.cause, (CapExceededError, ResourceLimitError))
    return isinstance(exc, (CapExceededError, ResourceLimitError))


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"evoclass: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EvoclassError, ValueError) as exc:
        print(f"evoclass: error: {exc}", file=sys.stderr)
        return EXIT_LIMIT if _is_limit(exc) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
