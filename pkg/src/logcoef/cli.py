"""Command-line entry point ``logcoef``.

Exit codes: 0 success / CERTIFIED, 1 FAILED or mismatch, 2 INDETERMINATE,
3 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction

import mpmath

from . import __version__
from . import constants as K
from .certifier import (
    CERTIFIED,
    FAILED,
    INDETERMINATE,
    TABLE_IDS,
    build_Q,
    certify,
    load_tables,
    parity_claims_hold,
    verify_appendix,
)
from .exactnum import frac_str, poly_eval, poly_to_strings
from .radius import IDS, default_grid, radius_table, solve_b0, solve_radius, to_csv
from .series import SERIES_IDS, series_closed_form_check
from .weights import DerivedSeq, RatQuadNum, parse_family

EXIT = {CERTIFIED: 0, FAILED: 1, INDETERMINATE: 2}
USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _precision(text: str) -> int:
    try:
        bits = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("precision must be an integer") from exc
    if bits < 128:
        raise argparse.ArgumentTypeError("precision must be at least 128 bits")
    if bits > K.PREC:
        raise argparse.ArgumentTypeError(f"precision above the working precision ({K.PREC} bits)")
    return bits


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--precision", type=_precision, default=128, help="bits, >= 128")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")

    p = _Parser(prog="logcoef", description="Certification and constants for weighted log-coefficient inequalities.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("certify", parents=[common], help="run the Q_k certification for one family")
    c.add_argument("--family", required=True, help='e.g. "twofactornum:alpha=1,beta=1"')
    c.add_argument("--N", type=int, required=True)

    a = sub.add_parser("appendix-verify", parents=[common], help="rebuild the stored Q_k tables")
    a.add_argument("--tables", default=None, help="alternative tables JSON")

    sub.add_parser("constants", parents=[common], help="print the sharp constants")

    r = sub.add_parser("radius", parents=[common], help="solve the radius equations")
    r.add_argument("--b", type=_rational, default=None, help="single b in [0, 2]; default: 21-point grid")
    r.add_argument("--points", type=int, default=21)

    f = sub.add_parser("figure-data", parents=[common], help="CSV data for the figures")
    f.add_argument("figure", choices=("fig1", "fig2", "fig3"))
    f.add_argument("--points", type=int, default=None)

    s = sub.add_parser("series-check", parents=[common], help="compare majorant series with closed forms")
    s.add_argument("--id", choices=SERIES_IDS, default=None)
    return p


def _stamp(d: dict, args) -> dict:
    if not args.no_timestamp:
        d["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return d


def _emit(text: str, args):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _digits(bits: int) -> int:
    return int(bits * 0.30103)


def cmd_certify(args) -> int:
    if args.N < 1:
        raise UsageError("--N must be >= 1")
    try:
        fam = parse_family(args.family)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad family spec: {exc}") from exc
    if not fam.rational:
        raise UsageError("certification needs a rational-valued family")
    rep = certify(fam, args.N)
    fmt = args.format or "json"
    if fmt == "json":
        _emit(json.dumps(_stamp(rep.to_dict(), args), indent=2), args)
    elif fmt == "text":
        lines = [f"family   {rep.family}", f"N        {rep.N}", f"verdict  {rep.verdict}", f"reason   {rep.reason}",
                 f"(0)      p_{rep.N + 1} = {rep.p_next}",
                 f"(i)      tail n0 = {rep.tail.n0} ({rep.tail.method})",
                 "v        " + " ".join(frac_str(x) for x in rep.v_values)]
        lines += [f"(ii) k={c.k}  roots in (-1,1): {c.root_count}  {'ok' if c.passed else 'FAIL'}"
                  for c in rep.condition_ii]
        lines += rep.notes
        _emit("\n".join(lines), args)
    else:
        raise UsageError("certify supports --format json or text")
    return EXIT[rep.verdict]


def cmd_appendix_verify(args) -> int:
    try:
        tables = load_tables(args.tables)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read tables: {exc}") from exc
    out, ok = [], True
    for tid in TABLE_IDS:
        try:
            chk = verify_appendix(tid, tables)
        except (KeyError, ValueError) as exc:
            out.append({"table": tid, "ok": False, "error": str(exc)})
            ok = False
            continue
        d = chk.to_dict()
        d["root_profile_claims"] = parity_claims_hold(chk)
        ok = ok and chk.ok and d["root_profile_claims"]
        out.append(d)
    total = sum(d.get("matched", 0) for d in out)
    report = {"ok": ok, "matched_total": total, "tables": out}
    if (args.format or "json") == "json":
        _emit(json.dumps(_stamp(report, args), indent=2), args)
    else:
        lines = [f"{'OK' if ok else 'MISMATCH'}: {total} polynomials matched"]
        for d in out:
            lines.append(f"{d['table']}: {d.get('matched', 0)}/{d.get('total', '?')} ok={d['ok']}")
            for m in d.get("mismatches", []):
                lines.append(f"  k={m['k']} degree {m['degree']}: table {m['expected']} vs computed {m['computed']}")
            if "error" in d:
                lines.append(f"  error: {d['error']}")
        _emit("\n".join(lines), args)
    return 0 if ok else 1


def cmd_constants(args) -> int:
    dig = _digits(args.precision)
    rows = [{"name": r["name"], "value": mpmath.nstr(r["value"].mid, dig),
             "error_bound": mpmath.nstr(r["value"].err, 3), "definition": r["note"]}
            for r in K.constants_table()]
    fmt = args.format or "text"
    if fmt == "json":
        _emit(json.dumps(_stamp({"precision_bits": args.precision, "constants": rows}, args), indent=2), args)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _emit(buf.getvalue(), args)
    else:
        width = max(len(r["name"]) for r in rows)
        _emit("\n".join(f"{r['name']:<{width}}  {r['value']}  +-{r['error_bound']}  {r['definition']}"
                        for r in rows), args)
    return 0


def cmd_radius(args) -> int:
    fmt = args.format or "csv"
    if args.b is not None:
        if not 0 <= args.b <= 2:
            raise UsageError("--b must lie in [0, 2]")
        sols = {rid: solve_radius(rid, args.b) for rid in IDS}
        row = {"b": frac_str(args.b), **{rid: mpmath.nstr(s.r.mid, 15) for rid, s in sols.items()}}
        if fmt == "json":
            _emit(json.dumps(_stamp(row, args), indent=2), args)
        else:
            _emit(",".join(row) + "\n" + ",".join(row.values()), args)
        return 0
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    rows = radius_table(default_grid(args.points))
    if fmt == "json":
        _emit(json.dumps(_stamp({"rows": rows}, args), indent=2), args)
    else:
        _emit(to_csv(rows), args)
    return 0


def fig1_rows(points: int = 401) -> list[tuple[Fraction, Fraction]]:
    """(x, Q_1(x)) over [-1, 1] for p_n = n/(n^2 + b0), N = 3, b0 taken as its lower rational bracket."""
    lo, _ = solve_b0(Fraction(1, 10**30)).bracket
    Q = build_Q(DerivedSeq(RatQuadNum(0, lo), 3), 1)
    xs = [Fraction(-1) + Fraction(2 * i, points - 1) for i in range(points)]
    return [(x, poly_eval(Q, x)) for x in xs], Q, lo


def cmd_figure_data(args) -> int:
    if args.figure == "fig1":
        pts = args.points or 401
        if pts < 2:
            raise UsageError("--points must be >= 2")
        rows, Q, b = fig1_rows(pts)
        text = "x,Q1\n" + "".join(f"{float(x):.6f},{float(y):.12e}\n" for x, y in rows)
        if (args.format or "csv") == "json":
            text = json.dumps(_stamp({"b": frac_str(b), "Q1": poly_to_strings(Q),
                                      "points": [[float(x), float(y)] for x, y in rows]}, args), indent=2)
        _emit(text, args)
        return 0
    pts = args.points or 21
    if pts < 2:
        raise UsageError("--points must be >= 2")
    rows = radius_table(default_grid(pts))
    cols = ("b", "r1", "r2", "r2_minus_r1") if args.figure == "fig2" else ("b", "r3", "r4", "r4_minus_r3")
    if (args.format or "csv") == "json":
        _emit(json.dumps(_stamp({"rows": [{c: r[c] for c in cols} for r in rows]}, args), indent=2), args)
    else:
        _emit(to_csv(rows, cols), args)
    return 0


def cmd_series_check(args) -> int:
    ids = [args.id] if args.id else list(SERIES_IDS)
    checks = [series_closed_form_check(i) for i in ids]
    ok = all(checks)
    if (args.format or "text") == "json":
        _emit(json.dumps(_stamp({"ok": ok, "checks": [
            {"id": c.kind, "ok": c.ok, "max_deviation": c.max_deviation} for c in checks]}, args), indent=2), args)
    else:
        _emit("\n".join(f"{c.kind}: {'ok' if c.ok else 'MISMATCH'} max deviation {c.max_deviation:.3e}"
                        for c in checks), args)
    return 0 if ok else 1


COMMANDS = {
    "certify": cmd_certify,
    "appendix-verify": cmd_appendix_verify,
    "constants": cmd_constants,
    "radius": cmd_radius,
    "figure-data": cmd_figure_data,
    "series-check": cmd_series_check,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"logcoef: error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
