#!/usr/bin/env python3
"""
CLI module for the pi-series toolkit.

This module binds the exact engine, the numeric evaluator, the reconstruction
pipeline and the identity catalog to a command line.

Usage:
    python cli.py sum "(sin(n)/n)^7"
    python cli.py sum "sin(n)*sin(x*n)/n^2" --x 3/2
    python cli.py coeffs resources/functions/g.json
    python cli.py --N 10000 plot "sin(n)^2*sin(x*n)/n^3" --grid 0:pi:200
    python cli.py fit --target "sin(n)^3/n^4"
    python cli.py recognize 0.6780972450961725
    python cli.py verify --all --mode exact --format json
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath

from catalog import (UnknownIdentityError, VerificationMode, get_identity, list_identities, verify_all,
                     verify_identity, verify_on_interval)
from closedform import NotClosedFormError, bernoulli_polynomial, expand_products, index_transform, \
    sum_closed_form
from constants import DEFAULT_DIGITS, DEFAULT_INTERVAL_SAMPLES, DEFAULT_TERMS, ENV_DIGITS, ENV_TERMS, \
    FIT_SAMPLES, FIT_TERMS, MIN_DIGITS, MIN_RECOGNITION_DIGITS
from exactnum import to_decimal
from expression import ExpressionSyntaxError, parse_angle, parse_expression
from fourier import full_coefficients, parseval_check, sine_coefficients
from numeric import Grid, find_crossing, partial_sum, sample_series
from piecewise import DomainKind, load_function
from reconstruct import Verdict, parse_candidates, reconstruct
from relation import parse_basis, recognize_constant

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NOT_CLOSED = 3

OUTPUT_FORMATS = ("text", "json", "csv")


@dataclass
class Config:
    """Settings shared by every subcommand."""
    digits: int = DEFAULT_DIGITS
    N: int = DEFAULT_TERMS
    output_format: str = "text"
    basis: str = "1,pi"

    def __post_init__(self):
        if self.digits < MIN_DIGITS:
            raise ValueError(f"digits must be at least {MIN_DIGITS}, got {self.digits}")
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"unknown output format {self.output_format!r}")

    @classmethod
    def from_env(cls, **overrides) -> 'Config':
        """Defaults, then PISERIES_DIGITS/PISERIES_TERMS, then explicit overrides."""
        values = {}
        digits = os.environ.get(ENV_DIGITS)
        terms = os.environ.get(ENV_TERMS)
        if digits:
            values["digits"] = int(digits)
        if terms:
            values["N"] = int(float(terms)) if "e" in terms.lower() else int(terms)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def emit(data, config: Config, text: Optional[str] = None):
    if config.output_format == "json":
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text if text is not None else data)


# Subcommands

def cmd_sum(args, config: Config) -> int:
    parsed = parse_expression(args.expression)
    expression = parsed.expression
    if expression.has_symbol():
        if args.x is None:
            raise ValueError("the expression contains x; pass a value with --x")
        expression = expression.substitute(parse_angle(args.x))
    formula = index_transform(expand_products(expression), parsed.mode)
    result = {"expression": args.expression, "series": str(formula)}
    lines = [f"series: {formula}"]
    if args.mode in ("exact", "both"):
        try:
            exact = sum_closed_form(formula)
        except NotClosedFormError as e:
            print(f"no closed form in Q[pi]: {e}", file=sys.stderr)
            return EXIT_NOT_CLOSED
        decimal = to_decimal(exact, config.digits)
        result.update({"exact": str(exact), "pi_coeffs": exact.to_json(), "decimal": str(decimal)})
        lines += [f"exact:   {exact}", f"decimal: {decimal}"]
    if args.mode in ("numeric", "both"):
        numeric = partial_sum(formula, config.N, config.digits)
        result.update({"partial_sum": str(numeric), "N": config.N,
                       "error_bound": mpmath.nstr(numeric.error_bound, 3)})
        lines.append(f"partial sum (N={config.N}): {numeric} +- {mpmath.nstr(numeric.error_bound, 3)}")
    emit(result, config, "\n".join(lines))
    return EXIT_OK


def cmd_coeffs(args, config: Config) -> int:
    function = load_function(args.function)
    if function.domain_kind is DomainKind.HALF:
        b = sine_coefficients(function)
        emit({"b": b.to_json(), "text": str(b)}, config, f"b_n = {b}")
        return EXIT_OK
    a0, a, b = full_coefficients(function)
    emit({"a0": str(a0), "a": a.to_json(), "b": b.to_json()}, config,
         f"a_0 = {a0}\na_n = {a}\nb_n = {b}")
    return EXIT_OK


def cmd_parseval(args, config: Config) -> int:
    result = parseval_check(load_function(args.function))
    emit({"lhs": str(result.lhs), "rhs": str(result.rhs), "equal": result.equal}, config,
         f"(1/pi) int f^2 = {result.lhs}\nsum of squares = {result.rhs}\nequal: {result.equal}")
    return EXIT_OK if result.equal else EXIT_FAILED


def cmd_plot(args, config: Config) -> int:
    parsed = parse_expression(args.expression)
    if parsed.mode.name != "ALL":
        raise ValueError("plot samples series over all n; write the restricted series explicitly")
    samples = sample_series(parsed.expression, Grid.parse(args.grid, args.midpoints), config.N,
                            smoothing=args.smooth)
    if config.output_format == "json":
        emit(samples.to_json(), config)
    else:
        sys.stdout.write(samples.to_csv())
    return EXIT_OK


def cmd_fit(args, config: Config) -> int:
    parsed = parse_expression(args.target)
    target = index_transform(expand_products(parsed.expression), parsed.mode)
    candidates = parse_candidates(args.candidates) if args.candidates else None
    result = reconstruct(target, N=args.N or FIT_TERMS, samples=args.samples, candidates=candidates,
                         basis=parse_basis(config.basis))
    text = f"{result.candidate}\nverdict: {result.report.verdict.name.lower()}"
    emit(result.to_json(), config, text)
    return EXIT_OK if result.report.verdict is Verdict.VERIFIED else EXIT_FAILED


def cmd_recognize(args, config: Config) -> int:
    digits = args.precision or args.digits or len(args.decimal.lstrip("-").replace(".", "").lstrip("0"))
    result = recognize_constant(args.decimal, parse_basis(config.basis), digits, args.height_cap)
    if result is None:
        emit({"decimal": args.decimal, "candidate": None}, config, "no relation found")
        return EXIT_FAILED
    emit(result.to_json(), config, str(result))
    return EXIT_OK


def cmd_crossing(args, config: Config) -> int:
    lo, hi = (float(parse_angle(part)) for part in args.bracket.split(":"))
    result = find_crossing(parse_expression(args.first).expression, parse_expression(args.second).expression,
                           (lo, hi), config.N, smoothing=args.smooth)
    status = (f"certified in [{result.enclosure_lo:.10f}, {result.enclosure_hi:.10f}]" if result.certified
              else "uncertified")
    emit(result.to_json(), config,
         f"crossing at x = {result.x:.10f} in [{result.lo:.10f}, {result.hi:.10f}], {status}")
    return EXIT_OK


def cmd_verify(args, config: Config) -> int:
    mode = VerificationMode.from_string(args.mode)
    if args.all:
        reports = verify_all(mode, config.digits, config.N)
    elif args.interval:
        reports = [verify_on_interval(identity_id, args.samples, config.digits) for identity_id in args.id]
    else:
        reports = [verify_identity(identity_id, mode, config.digits, config.N) for identity_id in args.id]
    text = [f"{r} ({r.runtime:.2f}s)" if args.debug else str(r) for r in reports]
    emit([r.to_json(with_runtime=args.debug) for r in reports], config, "\n".join(text))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_catalog(args, config: Config) -> int:
    if args.id:
        identity = get_identity(args.id)
        emit(identity.to_json(), config, json.dumps(identity.to_json(), indent=2, ensure_ascii=False))
        return EXIT_OK
    identities = list_identities()
    emit([i.to_json() for i in identities], config,
         "\n".join(f"{i.id:<26} {', '.join(i.labels):<28} {i.description}" for i in identities))
    return EXIT_OK


def cmd_bernoulli(args, config: Config) -> int:
    polynomial = bernoulli_polynomial(args.k)
    emit({"k": args.k, "polynomial": str(polynomial)}, config, f"B_{args.k}(x) = {polynomial}")
    return EXIT_OK


def _add_common_options(parser: argparse.ArgumentParser, default):
    parser.add_argument("--digits", type=int, default=default,
                        help=f"decimal digits (default {DEFAULT_DIGITS}, env {ENV_DIGITS})")
    parser.add_argument("--N", type=int, default=default,
                        help=f"terms of partial sums (default {DEFAULT_TERMS}, env {ENV_TERMS})")
    parser.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, default=default,
                        help="output format")
    parser.add_argument("--basis", default=default, help="recognition basis, default 1,pi")
    parser.add_argument("-v", "--verbose", action="store_true", default=False if default is None else default, help="log progress")
    parser.add_argument("--debug", action="store_true", default=False if default is None else default,
                        help="log everything and add runtimes to verification reports")


def build_parser() -> argparse.ArgumentParser:
    """The shared options are accepted before or after the subcommand."""
    parser = argparse.ArgumentParser(
        description="Exact sums of sin/cos series over n, Fourier series of piecewise polynomials, "
                    "and reconstruction of functions from their series."
    )
    _add_common_options(parser, None)
    common = argparse.ArgumentParser(add_help=False)
    _add_common_options(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sum", parents=[common], help="sum a series exactly and numerically")
    p.add_argument("expression")
    p.add_argument("--mode", choices=("exact", "numeric", "both"), default="both")
    p.add_argument("--x", help="value of x, e.g. 3/2 or pi/3")
    p.set_defaults(handler=cmd_sum)

    p = sub.add_parser("coeffs", parents=[common], help="Fourier coefficients of a piecewise function file")
    p.add_argument("function")
    p.set_defaults(handler=cmd_coeffs)

    p = sub.add_parser("parseval", parents=[common], help="check Parseval's equation for a piecewise function file")
    p.add_argument("function")
    p.set_defaults(handler=cmd_parseval)

    p = sub.add_parser("plot", parents=[common], help="sample a series in x as CSV or JSON")
    p.add_argument("expression")
    p.add_argument("--grid", default="0:pi:200", help="lo:hi:count")
    p.add_argument("--midpoints", action="store_true", help="sample cell midpoints")
    p.add_argument("--smooth", action="store_true", help="apply Lanczos sigma factors")
    p.set_defaults(handler=cmd_plot)

    p = sub.add_parser("fit", parents=[common], help="reconstruct the function behind a coefficient formula")
    p.add_argument("--target", required=True, help="coefficient of sin(n*x)")
    p.add_argument("--samples", type=int, default=FIT_SAMPLES)
    p.add_argument("--candidates", help="integers, half_integers or a list of angles")
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("recognize", parents=[common], help="identify a decimal as a combination of basis constants")
    p.add_argument("decimal")
    p.add_argument("--precision", dest="precision", type=int,
                   help=f"digits of the input, at least {MIN_RECOGNITION_DIGITS} (default: --digits if given, "
                        f"else as printed)")
    p.add_argument("--height-cap", type=int, default=10 ** 6)
    p.set_defaults(handler=cmd_recognize)

    p = sub.add_parser("crossing", parents=[common], help="locate where two series in x cross")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--bracket", required=True, help="lo:hi")
    p.add_argument("--smooth", action="store_true")
    p.set_defaults(handler=cmd_crossing)

    p = sub.add_parser("verify", parents=[common], help="verify catalog identities")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--all", action="store_true")
    target.add_argument("--id", nargs="+")
    p.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    p.add_argument("--interval", action="store_true", help="exact pointwise check of an identity in x")
    p.add_argument("--samples", type=int, default=DEFAULT_INTERVAL_SAMPLES)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("catalog", parents=[common], help="list catalog identities")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("id", nargs="?")
    p.set_defaults(handler=cmd_catalog)

    p = sub.add_parser("bernoulli", parents=[common], help="print the Bernoulli polynomial B_k(x)")
    p.add_argument("k", type=int)
    p.set_defaults(handler=cmd_bernoulli)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point of the command line.

    :param argv: arguments without the program name, default sys.argv[1:]
    :return: exit code, 0 success, 1 failed verification, 2 usage error, 3 no closed form
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.DEBUG if args.debug else logging.INFO if args.verbose else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(module)s: %(message)s", stream=sys.stderr)
    try:
        config = Config.from_env(digits=args.digits, N=args.N, output_format=args.output_format,
                                 basis=args.basis)
        if getattr(args, "action", None) == "show" and not args.id:
            raise ValueError("catalog show needs an identity id")
        return args.handler(args, config)
    except ExpressionSyntaxError as e:
        print(f"syntax error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NotClosedFormError as e:
        print(f"no closed form in Q[pi]: {e}", file=sys.stderr)
        return EXIT_NOT_CLOSED
    except UnknownIdentityError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
