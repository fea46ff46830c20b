"""Command-line front end.

    eulerzeta eval --formula integer-sqrt --sigma 3 --primes 1000 --digits 15
    eulerzeta appendix-a --format json
    eulerzeta table1
    eulerzeta verify --level full

Exit codes: 0 ok, 1 usage, 2 domain, 3 precision, 4 table mismatch, 5 verify failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from decimal import Decimal
from fractions import Fraction
from importlib import resources
from typing import Any, Sequence

import gmpy2

from . import fmt, rational
from .core import ComplexArgument, DomainError, FormulaId, PrecisionContext, PrecisionError, ResourceLimitError
from .engine import AUTO_MAX_PRIMES, ProductEvaluation, evaluate
from .formulas import SPECS
from .oracle import reference_zeta
from .primes import DEFAULT_BLOCK_SIZE

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_PRECISION, EXIT_TABLE, EXIT_VERIFY = 0, 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit 2, which means "domain" here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_golden() -> dict:
    with resources.files("eulerzeta").joinpath("data/golden.json").open("r", encoding="utf-8") as fh:
        return json.load(fh)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational or decimal number: {text!r}")


def _primes(text: str) -> int | None:
    if text == "auto":
        return None
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'auto', got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("prime count must be >= 1")
    return n


def _threads(text: str) -> int:
    if text == "auto":
        return os.cpu_count() or 1
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1")
    return n


def _fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _context(digits: int, bits: int | None) -> PrecisionContext:
    if bits is None:
        return PrecisionContext.for_digits(digits)
    try:
        return PrecisionContext(digits, bits)
    except ValueError as exc:
        raise UsageError(str(exc))


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dump_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------- eval


def run_report(args: argparse.Namespace, e: ProductEvaluation, elapsed_ms: float) -> dict:
    total = e.total_bound
    certified = e.certified_digits
    value = fmt.significant(e.value, certified) if certified else ""
    with gmpy2.context(gmpy2.get_context(), precision=64, round=gmpy2.RoundUp):
        abs_bound = e.value * total
    return {
        "command": "eval",
        "inputs": {
            "formula": e.formula.value,
            "sigma": _fraction_str(e.argument.sigma),
            "t": _fraction_str(e.argument.t),
            "primes": "auto" if args.primes is None else args.primes,
            "digits": args.digits,
            "precision_bits": e.precision_bits,
            "block_size": args.block_size,
            "threads": args.threads,
        },
        "result": {
            "value": value,
            "plus_minus": "±" + fmt.bound(abs_bound, 2),
            "partial_product": fmt.significant(e.value, args.digits),
            "certified_digits": certified,
            "truncation_bound": fmt.bound(e.truncation_bound),
            "rounding_bound": fmt.bound(e.rounding_bound),
            "primes_used": e.primes_used,
            "last_prime": e.last_prime,
        },
        "timing": {"elapsed_ms": round(elapsed_ms, 3)},
        "provenance": {"formula": e.formula.value, "eq_ref": SPECS[e.formula].printed},
    }


def _flatten(report: dict) -> dict:
    flat = {"command": report["command"]}
    for section in ("inputs", "result", "timing", "provenance"):
        for key, val in report[section].items():
            flat[f"{section}.{key}"] = val
    return flat


def render_report(report: dict, style: str) -> str:
    if style == "json":
        return dump_json(report)
    if style == "csv":
        flat = _flatten(report)
        return dump_csv(list(flat), [list(flat.values())])
    r, i = report["result"], report["inputs"]
    arg = i["sigma"] if i["t"] == "0" else f"{i['sigma']} + ({i['t']})i"
    lines = [
        f"formula           {i['formula']}",
        f"                  {report['provenance']['eq_ref']}",
        f"argument          s = {arg}",
        f"primes            {r['primes_used']} (last {r['last_prime']})",
        f"value             {r['value'] or '(no certified digits)'} {r['plus_minus']}",
        f"partial product   {r['partial_product']}",
        f"certified digits  {r['certified_digits']}",
        f"truncation bound  {r['truncation_bound']}",
        f"rounding bound    {r['rounding_bound']}",
        f"precision         {i['precision_bits']} bits",
        f"elapsed           {report['timing']['elapsed_ms']} ms",
    ]
    return "\n".join(lines) + "\n"


def cmd_eval(args: argparse.Namespace) -> int:
    formula = FormulaId.parse(args.formula)
    ctx = _context(args.digits, args.precision_bits)
    argument = ComplexArgument(args.sigma, args.t)
    start = time.perf_counter()
    try:
        e = evaluate(
            formula,
            argument,
            args.primes,
            ctx,
            block_size=args.block_size,
            workers=args.threads,
            max_primes=args.max_primes,
        )
    except PrecisionError as exc:
        if exc.evaluation is not None:
            report = run_report(args, exc.evaluation, (time.perf_counter() - start) * 1e3)
            sys.stdout.write(render_report(report, args.format))
            print(
                f"precision error: {exc} (uncertified partial product {report['result']['partial_product']})",
                file=sys.stderr,
            )
        else:
            print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    report = run_report(args, e, (time.perf_counter() - start) * 1e3)
    sys.stdout.write(render_report(report, args.format))
    return EXIT_OK


# ---------------------------------------------------------------- appendix-a


def cmd_appendix_a(args: argparse.Namespace) -> int:
    rows = rational.appendix_a_table()
    if args.format == "json":
        out = {
            "command": "appendix-a",
            "rows": [
                {
                    "k": int(c.k),
                    "pi_power": int(c.pi_power),
                    "radicand": [str(c.radicand.numerator), str(c.radicand.denominator)],
                }
                for c in rows
            ],
        }
        sys.stdout.write(dump_json(out))
    elif args.format == "csv":
        sys.stdout.write(
            dump_csv(
                ["k", "pi_power", "radicand"],
                [[int(c.k), int(c.pi_power), rational.rational_str(c.radicand)] for c in rows],
            )
        )
    else:
        sys.stdout.write(f"{'k':>3}  {'pi^':>4}  radicand\n")
        for c in rows:
            sys.stdout.write(f"{int(c.k):>3}  {int(c.pi_power):>4}  {rational.rational_str(c.radicand)}\n")
    return EXIT_OK


# ---------------------------------------------------------------- table1


def table1_rows(n_primes: int, digits: int, bits: int | None = None) -> list[dict]:
    """Both columns of the 1000-prime table at every published k, as exact-enough mpfr values."""
    ctx = _context(digits, bits)
    out = []
    for row in load_golden()["table1"]["rows"]:
        k = Fraction(row["k"])
        arg = ComplexArgument(k)
        formula = FormulaId.HALF_INTEGER_MAIN if k.denominator != 1 else FormulaId.INTEGER_SQRT
        ref = reference_zeta(arg, ctx)
        e = evaluate(formula, arg, n_primes, ctx, strict=False)
        out.append({"k": k, "formula": formula, "reference": ref, "evaluation": e, "golden": row})
    return out


def _cell_matches(value: Decimal, golden: str) -> bool:
    g = Decimal(golden)
    return abs(value - g) <= max(fmt.ulp(g), fmt.ulp(value))


def compare_table1(rows: list[dict], digits: int, compare_product: bool) -> tuple[str | None, list[str]]:
    """Find a digit convention under which every cell matches; return (convention, diffs)."""
    diffs_by_conv = {}
    for conv in fmt.CONVENTIONS:
        diffs = []
        for row in rows:
            ref = fmt.to_decimal(_mp_to_mpfr(row["reference"].value), digits, conv)
            cells = [("reference", ref)]
            if compare_product:
                cells.append(("product", fmt.to_decimal(row["evaluation"].value, digits, conv)))
            for column, val in cells:
                golden = row["golden"][column]
                if not _cell_matches(val, golden):
                    diffs.append(f"k={_fraction_str(row['k'])} {column}: computed {val} published {golden}")
        if not diffs:
            return conv, []
        diffs_by_conv[conv] = diffs
    return None, diffs_by_conv[fmt.HALF_EVEN]


def _mp_to_mpfr(x) -> gmpy2.mpfr:
    from .formulas import mpmath_to_mpfr

    return mpmath_to_mpfr(x, x.context.prec)


def cmd_table1(args: argparse.Namespace) -> int:
    golden = load_golden()["table1"]
    rows = table1_rows(args.primes, args.digits, args.precision_bits)
    compare_product = args.primes == golden["primes"]
    convention, diffs = compare_table1(rows, args.digits, compare_product)
    conv = convention or fmt.HALF_EVEN
    records = []
    for row in rows:
        e = row["evaluation"]
        records.append(
            {
                "k": _fraction_str(row["k"]),
                "reference": str(fmt.to_decimal(_mp_to_mpfr(row["reference"].value), args.digits, conv)),
                "product": str(fmt.to_decimal(e.value, args.digits, conv)),
                "formula": row["formula"].value,
                "certified_digits": e.certified_digits,
                "truncation_bound": fmt.bound(e.truncation_bound),
            }
        )
    status = "match" if convention else "mismatch"
    if args.format == "json":
        sys.stdout.write(
            dump_json(
                {
                    "command": "table1",
                    "inputs": {"primes": args.primes, "digits": args.digits},
                    "convention": convention,
                    "status": status,
                    "product_column_compared": compare_product,
                    "rows": records,
                }
            )
        )
    elif args.format == "csv":
        keys = ["k", "reference", "product", "formula", "certified_digits", "truncation_bound"]
        sys.stdout.write(dump_csv(keys, [[r[k] for k in keys] for r in records]))
    else:
        sys.stdout.write(f"{'k':>4}  {'zeta(k)':<{args.digits + 2}}  {'product formula':<{args.digits + 2}}  certified\n")
        for r in records:
            sys.stdout.write(
                f"{r['k']:>4}  {r['reference']:<{args.digits + 2}}  {r['product']:<{args.digits + 2}}  {r['certified_digits']}\n"
            )
        sys.stdout.write(f"convention: {convention or 'none'}; golden comparison: {status}\n")
    if not compare_product:
        print(f"product column not compared: golden data is for {golden['primes']} primes", file=sys.stderr)
    if diffs:
        for line in diffs:
            print(line, file=sys.stderr)
        return EXIT_TABLE
    return EXIT_OK


# ---------------------------------------------------------------- verify


def cmd_verify(args: argparse.Namespace) -> int:
    from .verify import run

    results = run(args.level)
    if args.format == "json":
        sys.stdout.write(
            dump_json(
                {
                    "command": "verify",
                    "level": args.level,
                    "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
                }
            )
        )
    else:
        for r in results:
            sys.stdout.write(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  [{r.detail}] ({r.seconds:.1f}s)\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eulerzeta", description="Prime product evaluation of the Riemann zeta function.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    formats = ("text", "json", "csv")

    p = sub.add_parser("eval", help="evaluate one prime product formula")
    p.add_argument("--formula", required=True, choices=[f.value for f in FormulaId])
    p.add_argument("--sigma", required=True, type=_fraction, help="real part; exact, e.g. 3, 3/2 or 1.5")
    p.add_argument("--t", default=Fraction(0), type=_fraction, help="imaginary part (default 0)")
    p.add_argument("--primes", default=None, type=_primes, help="prime count or 'auto' (default auto)")
    p.add_argument("--digits", default=15, type=int, help="target decimal digits (default 15)")
    p.add_argument("--precision-bits", type=int, default=None, help="override working precision")
    p.add_argument("--block-size", type=int, default=DEFAULT_BLOCK_SIZE)
    p.add_argument("--threads", type=_threads, default=1, help="worker threads or 'auto'; never changes results")
    p.add_argument("--max-primes", type=int, default=AUTO_MAX_PRIMES, help="auto-mode prime cap")
    p.add_argument("--format", choices=formats, default="text")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("appendix-a", help="exact radicands of the integer formula, k = 2..11")
    p.add_argument("--format", choices=formats, default="text")
    p.set_defaults(func=cmd_appendix_a)

    p = sub.add_parser("table1", help="reproduce the 1000-prime table and compare with the golden data")
    p.add_argument("--primes", type=int, default=1000)
    p.add_argument("--digits", type=int, default=15)
    p.add_argument("--precision-bits", type=int, default=None)
    p.add_argument("--format", choices=formats, default="text")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("verify", help="run the cross-formula property suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("digits", "block_size", "max_primes", "primes"):
        val = getattr(args, name, 1)
        if val is not None and val < 1:
            parser.error(f"--{name.replace('_', '-')} must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"eulerzeta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
