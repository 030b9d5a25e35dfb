"""Command line interface: ``renyi-parry <subcommand> ...``.

Exit codes: 0 success, 1 mismatch or inconclusive result present, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .algebraic import AlgebraicNumber
from .balls import ball_text, precision_cap
from .errors import DomainError, Inconclusive, NotClassified, ParseError, RenyiParryError
from .expansion import (
    DEFAULT_BUDGET,
    classify_parry,
    Parry,
    SimpleParry,
    expansion_to_json,
    format_pattern,
    greedy_expansion_of_one,
)
from .polynomial import IntPolynomial, parse_polynomial_line, read_polynomials

EXIT_OK, EXIT_FLAG, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _polynomials(spec: str) -> list[IntPolynomial]:
    """A polynomial file path, or inline ascending coefficients ("1 -1 -1 -1 1" or "1,-1,-1,-1,1")."""
    path = Path(spec)
    if path.exists():
        polys = read_polynomials(path.read_text())
        if not polys:
            raise ParseError(f"no polynomial in {spec}")
        return polys
    return [parse_polynomial_line(spec.replace(",", " "))]


def _range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected A..B") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


def _base(p: IntPolynomial) -> AlgebraicNumber:
    return AlgebraicNumber.largest_real_root(p)


# subcommands; each returns (records, flag)


def cmd_expand(args):
    records = []
    for p in _polynomials(args.poly):
        e = greedy_expansion_of_one(_base(p), args.budget)
        rec = expansion_to_json(e)
        rec["pattern"] = format_pattern(e)
        records.append(rec)
    return records, any(r["status"] == "unknown" for r in records)


def cmd_classify(args):
    records = []
    for p in _polynomials(args.poly):
        c = classify_parry(_base(p), args.budget)
        if isinstance(c, SimpleParry):
            rec = {"class": "SimpleParry", "length": c.length}
        elif isinstance(c, Parry):
            rec = {"class": "Parry", "preperiod": c.preperiod, "period": c.period}
        else:
            rec = {"class": "UnknownWithinBudget", "budget": c.budget}
        rec["base_poly"] = list(p.coefficients)
        records.append(rec)
    return records, any(r["class"] == "UnknownWithinBudget" for r in records)


def cmd_zeta(args):
    from .zeta import identity_holds, zeta_closed_form

    records = []
    flag = False
    for p in _polynomials(args.poly):
        e = greedy_expansion_of_one(_base(p), args.budget)
        try:
            z = zeta_closed_form(e)
        except NotClassified as exc:
            records.append({"base_poly": list(p.coefficients), "error": str(exc)})
            flag = True
            continue
        rec = {"base_poly": list(p.coefficients), **z.form.to_json(), "identity_holds": identity_holds(e)}
        if args.at is not None:
            from flint import acb

            from .balls import workprec

            with workprec(128):
                point = acb(*[float(x) for x in args.at.split(",")]) if "," in args.at else acb(float(args.at))
                rec["value"] = ball_text(z.form(point))
        records.append(rec)
    return records, flag


def cmd_trinomial(args):
    from .trinomial import asymptotic_report, expected_sector_count, sector_count, theta_n

    records = []
    flag = False
    for n in _range(args.n):
        _, ball = theta_n(n)
        from .balls import workprec

        with workprec(128):
            inv = 1 / ball
        rec = {"n": n, "theta_inv": inv.mid().str(12, radius=False), "p_n": sector_count(n)}
        flag |= rec["p_n"] != expected_sector_count(n)
        if args.asymptotics:
            rep = asymptotic_report(n)
            rec["max_deviation"] = rep.max_deviation
            rec["violations"] = ";".join(rep.violations)
            flag |= bool(rep.violations)
        records.append(rec)
    return records, flag


def cmd_rouche(args):
    from .rouche import asymptotic_criterion, certify_rouche, find_a_max

    params = find_a_max()
    records = []
    flag = False
    for n in _range(args.n):
        c = asymptotic_criterion(n, params)
        rec = {"n": n, "criterion_lhs": c.lhs, "threshold": c.threshold, "criterion_holds": c.holds}
        if c.caveat:
            rec["caveat"] = c.caveat
        if args.certify:
            try:
                cert = certify_rouche(n)
                rec["verdict"] = cert.verdict
                rec["min_margin"] = cert.min_margin
                rec["arcs"] = cert.arcs
            except DomainError:
                rec["verdict"] = "NotApplicable"
            except Inconclusive:
                rec["verdict"] = "Inconclusive"
                flag = True
        records.append(rec)
    return records, flag


def _series(spec: str):
    """``exps:1,37,73`` for ``-1 + sum z^e``, ``coeffs:...`` for explicit
    coefficients, or ``poly:<coefficients|file>`` for the Parry Upper function of a base."""
    kind, _, body = spec.partition(":")
    if kind == "exps":
        exps = _ints(body)
        coeffs = [0] * (max(exps) + 1)
        coeffs[0] = -1
        for k in exps:
            coeffs[k] += 1
        return IntPolynomial(coeffs)
    if kind == "coeffs":
        return IntPolynomial(_ints(body))
    if kind == "poly":
        from .zeta import ParryUpperSeries

        p = _polynomials(body)[0]
        return ParryUpperSeries(greedy_expansion_of_one(_base(p)))
    raise UsageError(f"bad series spec {spec!r}; use exps:, coeffs: or poly:")


def cmd_lenticulus(args):
    from .rouche import lenticulus_scan

    try:
        lo, hi = (Fraction(x) for x in args.band.split(","))
    except ValueError:
        raise UsageError(f"bad band {args.band!r}; expected lo,hi") from None
    res = lenticulus_scan(_series(args.series), Fraction(args.sector), (lo, hi), args.depth, args.n)
    rows = list(csv.DictReader(io.StringIO(res.csv())))
    return rows, bool(res.undecided)


def cmd_trail(args):
    from .trail import build_section, section_sizes, trail_report

    p = _polynomials(args.poly)[0]
    e = greedy_expansion_of_one(_base(p))
    sizes = _ints(args.s) if args.s else section_sizes(e)
    records = [trail_report(build_section(e, s), p) for s in sizes]
    flag = any(not r["identity_holds"] or r["u_s"] is None for r in records)
    return records, flag


def _table(run):
    def go(args):
        rep = run()
        if args.format == "json":
            return [rep.to_json()], bool(rep.mismatches)
        rows = [dict(r) for r in rep.rows]
        for m in rep.mismatches:
            rows.append({"label": m.label, "mismatch": m.field, "computed": m.computed,
                         "expected": m.expected, "flagged": m.flagged, "note": m.note})
        return rows, bool(rep.mismatches)

    return go


def cmd_constants(args):
    return [catalog.constants_report()], False


# output


def _emit(records, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(records if len(records) != 1 else records[0], indent=2, default=str) + "\n"
    if fmt == "csv":
        keys: list[str] = []
        for r in records:
            keys.extend(k for k in r if k not in keys)
        out = io.StringIO()
        w = csv.DictWriter(out, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
        return out.getvalue()
    lines = []
    for r in records:
        lines.append("  ".join(f"{k}={v}" for k, v in r.items()))
    return "\n".join(lines) + "\n"


def _global_flags(parser, cap, fmt, out):
    parser.add_argument("--precision-cap", type=int, default=cap, metavar="BITS")
    parser.add_argument("--format", choices=("json", "csv", "text"), default=fmt)
    parser.add_argument("--out", type=Path, default=out, metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="renyi-parry", description=__doc__.splitlines()[0])
    _global_flags(parser, None, "text", None)
    # the same flags are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS, argparse.SUPPRESS, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)
    add = sub.add_parser

    def add_parser(name, **kw):
        return add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    for name, fn in (("expand", cmd_expand), ("classify", cmd_classify), ("zeta", cmd_zeta)):
        p = sub.add_parser(name)
        p.add_argument("poly", help="polynomial file or inline ascending coefficients")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--json", action="store_true", help="same as --format json")
        if name == "zeta":
            p.add_argument("--at", default=None, help="evaluate at a point re[,im]")
        p.set_defaults(func=fn)

    p = sub.add_parser("trinomial")
    p.add_argument("--n", required=True, metavar="A..B")
    p.add_argument("--asymptotics", action="store_true")
    p.set_defaults(func=cmd_trinomial)

    p = sub.add_parser("rouche")
    p.add_argument("--n", required=True, metavar="A..B")
    p.add_argument("--certify", action="store_true")
    p.set_defaults(func=cmd_rouche)

    p = sub.add_parser("lenticulus")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--series", required=True, help="exps:1,37,73 | coeffs:... | poly:...")
    p.add_argument("--sector", required=True, help="half angle in degrees")
    p.add_argument("--band", required=True, metavar="lo,hi")
    p.add_argument("--depth", type=int, default=5)
    p.set_defaults(func=cmd_lenticulus)

    p = sub.add_parser("trail")
    p.add_argument("--poly", required=True)
    p.add_argument("--s", default=None, help="comma-separated section sizes")
    p.set_defaults(func=cmd_trail)

    sub.add_parser("table1").set_defaults(func=_table(catalog.reproduce_table1))
    sub.add_parser("table2").set_defaults(func=_table(catalog.reproduce_table2))
    sub.add_parser("constants").set_defaults(func=cmd_constants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "json", False):
        args.format = "json"
    try:
        if args.precision_cap is not None:
            with precision_cap(args.precision_cap):
                records, flag = args.func(args)
        else:
            records, flag = args.func(args)
    except (UsageError, ParseError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RenyiParryError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_FLAG
    text = _emit(records, args.format)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_FLAG if flag else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
