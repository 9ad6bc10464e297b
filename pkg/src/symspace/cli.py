"""Command line for running suites, demos, factorizations, and word actions.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for
configuration problems (unknown flags, malformed matrices, bad config
files).  Canonical JSON goes to stdout (or the --out file); the human
summary, including wall time, goes to stderr so report bytes stay
reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .hyperbolic import (
    FactorizationFailed,
    NotUnimodular,
    ZeroParameter,
    base_transvection,
    build_generator,
    minus_identity_word,
)
from .linalg import (
    NoConvergence,
    NotPositiveDefinite,
    NotSymmetric,
    SquareMatrix,
    TolerancePolicy,
)
from .embedding import point_factorization
from .reporting import Report, format_residual, matrix_rows
from .scalars import parse_rational
from .spaces import InvalidPoint, RealLineModel, SpdModel
from .suites import (
    CONFIG_KEYS,
    SUITE_NAMES,
    ConfigError,
    SuiteConfig,
    build_config,
    parse_config,
    run_central_extension_demo,
    run_suite,
)
from .words import ReflectionWord, transvection, word_act

WORD_GRAMMAR = (
    "whitespace-separated tokens, rightmost acting first; prefix ~ inverts a "
    "token. Tokens: 'tr:P' (transvection at point P), 'refl:P' (reflection at "
    "P), and on sl2 also 'x+:t', 'x-:t' (shear generator words), 'trc' "
    "(diagonal transvection), '-I' (half-turn word). Points: 'o' for the base "
    "point, a rational on the geodesic, or 'a,b;c,d' rows on matrix models."
)


def parse_matrix_text(text: str) -> SquareMatrix:
    """Parse 'a,b;c,d' style rows of rationals into a square matrix."""
    rows = []
    for row_text in text.strip().split(";"):
        entries = [part.strip() for part in row_text.split(",")]
        if not entries or any(not part for part in entries):
            raise ConfigError(f"malformed matrix row {row_text!r}")
        try:
            rows.append([parse_rational(part) for part in entries])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    width = len(rows[0])
    if any(len(row) != width for row in rows) or len(rows) != width:
        raise ConfigError(f"matrix must be square, got rows {text!r}")
    return SquareMatrix(rows)


def _act_model(name: str):
    """Exact-arithmetic models for the act command."""
    if name == "geodesic":
        return RealLineModel()
    if name == "sl2":
        return SpdModel(2, "qsqrt2")
    if name == "sl3":
        return SpdModel(3, "qsqrt2")
    raise ConfigError(f"act supports the geodesic, sl2, and sl3 models, not {name!r}")


def _parse_point(model, text: str):
    text = text.strip()
    if text == "o":
        return model.base_point
    if isinstance(model, RealLineModel):
        try:
            return parse_rational(text)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    matrix = parse_matrix_text(text)
    try:
        return model.point_from_matrix(matrix)
    except (InvalidPoint, NotSymmetric, NotPositiveDefinite, ValueError) as exc:
        raise ConfigError(f"not a valid point: {exc}") from exc


def _token_word(model, token: str) -> ReflectionWord:
    invert = token.startswith("~")
    if invert:
        token = token[1:]
    needs_plane = token in ("trc", "-I") or token.startswith(("x+:", "x-:"))
    if needs_plane and not (isinstance(model, SpdModel) and model.n == 2):
        raise ConfigError(f"token {token!r} needs the sl2 model")
    try:
        if token == "trc":
            word = base_transvection(model).to_reflection_word(model)
        elif token == "-I":
            word = minus_identity_word(model).to_reflection_word(model)
        elif token.startswith("x+:"):
            gen = build_generator(model, "upper", parse_rational(token[3:]))
            word = gen.word.to_reflection_word(model)
        elif token.startswith("x-:"):
            gen = build_generator(model, "lower", parse_rational(token[3:]))
            word = gen.word.to_reflection_word(model)
        elif token.startswith("tr:"):
            point = _parse_point(model, token[3:])
            word = transvection(point).to_reflection_word(model)
        elif token.startswith("refl:"):
            word = ReflectionWord([_parse_point(model, token[5:])])
        else:
            raise ConfigError(f"unknown word token {token!r}")
    except (ValueError, ZeroParameter, NotPositiveDefinite) as exc:
        raise ConfigError(f"bad token {token!r}: {exc}") from exc
    return word.inverse() if invert else word


def parse_word(model, spec: str) -> tuple[ReflectionWord, list[str]]:
    tokens = spec.split()
    if not tokens:
        raise ConfigError("word must contain at least one token")
    word = _token_word(model, tokens[0])
    for token in tokens[1:]:
        word = word * _token_word(model, token)
    return word, tokens


def _describe_point(model, point):
    if isinstance(model, RealLineModel):
        return str(point)
    return list(matrix_rows(point.matrix))


def _emit(payload: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _emit_report(report: Report, out_path: str | None) -> None:
    _emit(report.canonical_json(), out_path)
    for case in report.cases:
        print(
            f"{case.status.upper():7s} {case.name}  "
            f"residual={case.residual}  tolerance={case.tolerance}",
            file=sys.stderr,
        )
    counts = report.counts()
    print(
        f"{report.suite}: {counts['pass']} passed, {counts['fail']} failed, "
        f"{counts['skipped']} skipped in {report.wall_time_ms:.0f} ms",
        file=sys.stderr,
    )


def _settings_from_args(args: argparse.Namespace) -> dict:
    settings: dict = {}
    if args.config:
        settings.update(parse_config(args.config))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _cmd_verify(args: argparse.Namespace) -> int:
    config = build_config(args.suite, _settings_from_args(args))
    report = run_suite(config)
    _emit_report(report, args.out)
    return report.exit_code


def _cmd_demo(args: argparse.Namespace) -> int:
    config = build_config("central-extension", _settings_from_args(args))
    report, demo = run_central_extension_demo(config)
    payload = report.to_dict()
    payload["demo"] = {
        "witness_point": list(matrix_rows(demo.witness_point)),
        "witness_image": list(matrix_rows(demo.witness_image)),
        "witness_displacement": format_residual(
            demo.witness_displacement, config.precision_bits
        ),
        "action_rows": list(matrix_rows(demo.action_matrix)),
        "generators_tested": demo.generators_tested,
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    for case in report.cases:
        print(f"{case.status.upper():7s} {case.name}", file=sys.stderr)
    print(
        "central-extension demo: "
        f"{'pass' if report.passed else 'fail'} in {report.wall_time_ms:.0f} ms",
        file=sys.stderr,
    )
    return report.exit_code


def _factor_policy(args: argparse.Namespace) -> TolerancePolicy:
    abs_tol = Fraction(1, 10**9)
    if args.abs_tol is not None:
        try:
            abs_tol = parse_rational(args.abs_tol)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if abs_tol <= 0:
            raise ConfigError("abs_tol must be positive")
    bits = args.precision_bits if args.precision_bits is not None else 128
    if bits < 53:
        raise ConfigError("precision_bits must be at least 53")
    return TolerancePolicy(abs_tol=abs_tol, precision_bits=bits)


def _cmd_factor(args: argparse.Namespace) -> int:
    matrix = parse_matrix_text(args.matrix)
    policy = _factor_policy(args)
    if matrix.n not in (2, 3):
        raise ConfigError("factor supports 2x2 and 3x3 matrices")
    if matrix.det() != 1:
        raise ConfigError(f"matrix must have determinant 1, got {matrix.det()}")
    try:
        result = point_factorization(matrix, policy)
    except (NotUnimodular, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    except (FactorizationFailed, NoConvergence) as exc:
        print(f"factorization failed: {exc}", file=sys.stderr)
        return 1
    payload = {
        "matrix": list(matrix_rows(matrix)),
        "canonical_point": list(matrix_rows(result.canonical_target)),
        "expression": result.expression,
        "sign": result.sign,
        "factor_count": len(result.spd_factors),
        "factors": [list(matrix_rows(m)) for m in result.spd_factors],
        "square_roots": [list(matrix_rows(m)) for m in result.square_roots],
        "exact_match": result.exact_match,
        "float_residual": format_residual(
            result.float_residual, policy.precision_bits
        ),
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    print(
        f"factored into {len(result.spd_factors)} reflection points "
        f"(residual {payload['float_residual']})",
        file=sys.stderr,
    )
    return 0


def _cmd_act(args: argparse.Namespace) -> int:
    model = _act_model(args.model)
    word, tokens = parse_word(model, args.word)
    point = _parse_point(model, args.point)
    image = word_act(model, word, point)
    payload = {
        "model": args.model,
        "word": tokens,
        "reflection_length": len(word),
        "point": _describe_point(model, point),
        "image": _describe_point(model, image),
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", help="space model (geodesic, sl2, sl3, broken-sl2)")
    parser.add_argument("--seed", type=int, help="root seed for all sampling")
    parser.add_argument("--samples", type=int, help="sample budget per check family")
    parser.add_argument(
        "--precision-bits", type=int, dest="precision_bits",
        help="mpmath working precision",
    )
    parser.add_argument(
        "--abs-tol", dest="abs_tol",
        help="absolute tolerance for float residuals, e.g. 1e-9",
    )
    parser.add_argument(
        "--t-values", dest="t_values",
        help="comma-separated nonzero rational shear parameters",
    )
    parser.add_argument("--config", help="JSON config file (flags override it)")
    parser.add_argument("--out", help="write the JSON report to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symspace",
        description="Verification workbench for point-reflection geometry "
        "on positive definite matrices.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="run a named verification suite")
    verify.add_argument("suite", choices=SUITE_NAMES)
    _add_common_flags(verify)
    verify.set_defaults(handler=_cmd_verify)

    demo = commands.add_parser("demo", help="run a guided demonstration")
    demo.add_argument("topic", choices=("central-extension",))
    _add_common_flags(demo)
    demo.set_defaults(handler=_cmd_demo)

    factor = commands.add_parser(
        "factor", help="factor a determinant-one matrix into reflection points"
    )
    factor.add_argument(
        "--matrix", required=True, help="rational rows, e.g. \"1,1;0,1\""
    )
    factor.add_argument(
        "--precision-bits", type=int, dest="precision_bits",
        help="mpmath working precision",
    )
    factor.add_argument("--abs-tol", dest="abs_tol", help="absolute tolerance")
    factor.add_argument("--out", help="write the JSON result to this file")
    factor.set_defaults(handler=_cmd_factor)

    act = commands.add_parser(
        "act", help="apply a reflection word to a point", epilog=WORD_GRAMMAR
    )
    act.add_argument("--model", required=True, help="geodesic, sl2, or sl3")
    act.add_argument("--word", required=True, help=WORD_GRAMMAR)
    act.add_argument("--point", required=True, help="'o', a rational, or matrix rows")
    act.add_argument("--out", help="write the JSON result to this file")
    act.set_defaults(handler=_cmd_act)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
