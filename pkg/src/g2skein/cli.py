"""Command-line entry point: ``g2skein <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import acceptance, mor22, skein, spectrum, uqg2
from .diagram import ExpressionError, parse
from .diagram.maps import DiagramError
from .exactfield import eval_at

__all__ = ["RunConfig", "build_parser", "main"]

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    q: Fraction | None = None
    precision: int = 53
    output: str | None = None
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.q is not None and self.q <= 0:
            raise UsageError(f"q must be positive, got {self.q}")
        if self.precision < 53:
            raise UsageError(f"precision must be at least 53 bits, got {self.precision}")
        if self.threads < 1:
            raise UsageError(f"thread count must be at least 1, got {self.threads}")


def parse_q(text: str) -> Fraction:
    """Exact rational from 'p/r' or a decimal literal."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational or decimal number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"q must be positive, got {text}")
    return value


def parse_range(text: str) -> tuple[Fraction, Fraction]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    try:
        a, b = Fraction(lo), Fraction(hi)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    if a > b:
        raise argparse.ArgumentTypeError(f"range {text!r} has lo > hi")
    return a, b


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _default_threads() -> int:
    raw = os.environ.get("G2SKEIN_THREADS")
    if raw is None:
        return 1
    try:
        return _positive_int(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"G2SKEIN_THREADS: {exc}") from None


# ---- subcommands -------------------------------------------------------------------


def _read_expression(args) -> str:
    if args.text is not None:
        return args.text
    if args.expr is None:
        raise UsageError("give an expression with --expr FILE|- or --text EXPR")
    if args.expr == "-":
        return sys.stdin.read()
    try:
        with open(args.expr, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.expr}: {exc.strerror}") from None


def _parsed(args):
    try:
        return parse(_read_expression(args))
    except (ExpressionError, DiagramError) as exc:
        raise UsageError(str(exc)) from None


def cmd_eval(args, out) -> int:
    m = _parsed(args)
    if (m.k, m.m) != (0, 0):
        raise UsageError(f"eval needs a closed expression, got Mor({m.k},{m.m}); use reduce")
    value = skein.eval_closed(m)
    print(value, file=out)
    if args.q is not None:
        print(f"at q={args.q}: {eval_at(value, args.q)}", file=out)
    return OK


def cmd_reduce(args, out) -> int:
    m = _parsed(args)
    if m.k + m.m > 4:
        raise UsageError(f"reduce handles k + m <= 4, got Mor({m.k},{m.m})")
    print(skein.reduce(m), file=out)
    return OK


def cmd_idempotents(args, out) -> int:
    ids = mor22.unchecked_idempotents()
    checks = ids.check()
    for name, ok in checks.items():
        print(f"{name} {'pass' if ok else 'fail'}", file=out)
    for name, p in ids.as_dict().items():
        tr = mor22.trace(p)
        print(f"trace({name}) = {tr}  [q=1: {eval_at(tr, 1)}]", file=out)
    return OK if all(checks.values()) else FAILED


def cmd_gram(args, out) -> int:
    g, minors, positive = mor22.gram_positivity(args.q)
    show = str if args.exact else (lambda v: f"{float(v):.12g}")
    print(f"q={args.q}", file=out)
    print("basis " + " ".join(mor22.BASIS), file=out)
    for name, row in zip(mor22.BASIS, g):
        print(f"{name} " + " ".join(show(v) for v in row), file=out)
    print("leading minors " + " ".join(show(v) for v in minors), file=out)
    print(f"positive definite: {'yes' if positive else 'no'}", file=out)
    return OK if positive else FAILED


def cmd_scan(args, out) -> int:
    rows = spectrum.scan(args.q, args.alpha, args.t, args.steps, threads=args.threads)
    if args.output in (None, "-"):
        spectrum.write_csv(rows, out, args.digits)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            spectrum.write_csv(rows, fh, args.digits)
    return OK


def cmd_certificate(args, out) -> int:
    cert = spectrum.certificate(args.q)
    if args.json:
        print(json.dumps(cert.as_json(), sort_keys=True, default=str), file=out)
    else:
        for key, value in cert.record().items():
            print(f"{key}={value}", file=out)
    return OK


def cmd_uqg2(args, out) -> int:
    if args.q == 1:
        raise UsageError("uqg2-verify needs q != 1: the defining relations degenerate there")
    report = uqg2.full_report(args.q, tol=args.tol, precision=args.precision)
    for line in report.lines():
        print(line, file=out)
    if args.basis:
        rep = uqg2.build_rep(args.q, args.precision)
        for name, dist, ratio in uqg2.basis_consistency(rep):
            shown = "n/a" if ratio is None else f"{ratio:.6g}"
            print(f"basis {name} distance {dist:.3e} ratio {shown}", file=out)
    return OK if report.ok else FAILED


def cmd_selftest(args, out) -> int:
    results = acceptance.run_all(out, timings=args.timings, seed=args.seed)
    return OK if all(r.ok for r in results) else FAILED


# ---- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="g2skein", description="Exact G2 skein computations and checks.")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="subcommand")

    def expression_source(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--expr", metavar="FILE", help="expression file, or - for stdin")
        src.add_argument("--text", metavar="EXPR", help="expression given inline")

    p = sub.add_parser("eval", help="evaluate a closed diagram expression")
    expression_source(p)
    p.add_argument("--q", type=parse_q, help="also print the value at this q")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("reduce", help="reduce an open expression (k + m <= 4)")
    expression_source(p)
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("idempotents", help="verify the Mor(2,2) idempotents and print traces")
    p.set_defaults(run=cmd_idempotents)

    p = sub.add_parser("gram", help="Gram matrix of the trace pairing on Mor(2,2)")
    p.add_argument("--q", type=parse_q, required=True)
    p.add_argument("--exact", action="store_true", help="print exact fractions instead of decimals")
    p.set_defaults(run=cmd_gram)

    p = sub.add_parser("spectrum-scan", help="write f(alpha, t) on a grid as CSV")
    p.add_argument("--q", type=parse_q, required=True)
    p.add_argument("--alpha", type=parse_range, required=True, metavar="A0:A1")
    p.add_argument("--t", type=parse_range, required=True, metavar="T0:T1")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--output", "-o", metavar="PATH", help="CSV destination (default stdout)")
    p.add_argument("--digits", type=_positive_int, default=12)
    p.add_argument("--threads", type=_positive_int, default=None)
    p.set_defaults(run=cmd_scan)

    p = sub.add_parser("certificate", help="property (T) certificate at q")
    p.add_argument("--q", type=parse_q, required=True)
    p.add_argument("--json", action="store_true", help="JSON instead of key=value lines")
    p.set_defaults(run=cmd_certificate)

    p = sub.add_parser("uqg2-verify", help="numeric checks on the 7-dimensional representation")
    p.add_argument("--q", type=parse_q, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--precision", type=int, default=53, help="working precision in bits (>= 53)")
    p.add_argument("--basis", action="store_true", help="also print basis normalisation diagnostics")
    p.set_defaults(run=cmd_uqg2)

    p = sub.add_parser("selftest", help="run every acceptance criterion")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timings", action="store_true", help="show wall-clock time per criterion")
    p.set_defaults(run=cmd_selftest)
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        q=getattr(args, "q", None),
        precision=getattr(args, "precision", 53),
        output=getattr(args, "output", None),
        seed=getattr(args, "seed", 0),
        threads=getattr(args, "threads", None) or 1,
    )


_RANGE_FLAGS = ("--alpha", "--t")


def _join_negative_ranges(argv: list[str]) -> list[str]:
    """Let ``--t -5:20`` through; argparse would read -5:20 as an option."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in _RANGE_FLAGS and i + 1 < len(argv) and argv[i + 1][:2].lstrip("-")[:1].isdigit():
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = _join_negative_ranges(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        if getattr(args, "threads", "unset") is None:
            args.threads = _default_threads()
        _config(args)
        if args.subcommand == "spectrum-scan" and args.steps < 2:
            raise UsageError("--steps must be at least 2")
        return args.run(args, out)
    except UsageError as exc:
        print(f"g2skein {args.subcommand}: error: {exc}", file=err)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
