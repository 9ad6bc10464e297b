import json
from fractions import Fraction

import mpmath
import pytest

from symspace.reporting import (
    CaseResult,
    assemble_report,
    case,
    format_residual,
    matrix_rows,
)
from symspace.linalg import SquareMatrix
from symspace.scalars import QSqrt2
from symspace.suites import (
    ConfigError,
    SuiteConfig,
    build_config,
    parse_config,
    parse_t_values,
)


def test_format_residual_exact_zero():
    assert format_residual(Fraction(0)) == "exact-zero"
    assert format_residual(QSqrt2(0, 0)) == "exact-zero"
    assert format_residual(0) == "exact-zero"
    assert format_residual(None) == "exact-zero"


def test_format_residual_float_zero_is_not_exact():
    # a float zero is a measurement that happened to round to nothing
    with mpmath.workprec(128):
        assert format_residual(mpmath.mpf(0)) == "0.0"


def test_format_residual_decimal_width():
    assert format_residual(Fraction(3, 4)) == "0.75000000000000000000"
    with mpmath.workprec(128):
        text = format_residual(mpmath.mpf(2) ** -100)
    assert text.endswith("e-31")
    mantissa = text.split("e")[0].replace(".", "").lstrip("-")
    assert len(mantissa) == 20


def test_format_residual_qsqrt2():
    text = format_residual(QSqrt2(3, -2))
    assert text.startswith("0.171572875253809902")


def test_case_result_validation():
    with pytest.raises(ValueError):
        CaseResult("x", "maybe", "exact-zero", "exact")
    with pytest.raises(ValueError):
        CaseResult("x", "fail", "1.0", "exact")  # failing case needs witness
    ok = case("x", False, Fraction(1, 3), "exact")
    assert ok.witness is not None


def test_report_sorting_and_duplicates():
    cases = [
        case("b.second", True, Fraction(0), "exact"),
        case("a.first", True, Fraction(0), "exact"),
    ]
    report = assemble_report("demo-suite", {"seed": 0}, cases, 12.5)
    assert [c.name for c in report.cases] == ["a.first", "b.second"]
    with pytest.raises(ValueError):
        assemble_report("demo-suite", {}, cases + [case("a.first", True, 0, "exact")], 0)


def test_report_json_excludes_wall_time():
    report = assemble_report(
        "demo-suite", {"seed": 0}, [case("a", True, Fraction(0), "exact")], 837.2
    )
    payload = json.loads(report.canonical_json())
    assert "wall_time_ms" not in json.dumps(payload)
    assert payload["counts"] == {"pass": 1, "fail": 0, "skipped": 0}
    assert report.exit_code == 0


def test_report_exit_code_on_failure():
    report = assemble_report(
        "demo-suite", {}, [case("a", False, Fraction(1), "exact")], 0
    )
    assert report.exit_code == 1
    assert not report.passed


def test_matrix_rows():
    m = SquareMatrix([[Fraction(1), Fraction(-1, 2)], [Fraction(0), Fraction(2)]])
    assert matrix_rows(m) == ("1, -1/2", "0, 2")


def test_suite_config_validation():
    with pytest.raises(ConfigError):
        SuiteConfig(suite="nope")
    with pytest.raises(ConfigError):
        SuiteConfig(suite="axioms", model="so5")
    with pytest.raises(ConfigError):
        SuiteConfig(suite="axioms", samples=0)
    with pytest.raises(ConfigError):
        SuiteConfig(suite="axioms", precision_bits=16)
    with pytest.raises(ConfigError):
        SuiteConfig(suite="axioms", t_values=(Fraction(0),))
    with pytest.raises(ConfigError):
        SuiteConfig(suite="axioms", seed=-1)


def test_suite_config_echo_is_json_ready():
    config = SuiteConfig(suite="commutator", t_values=(Fraction(1, 2), Fraction(2)))
    echo = config.echo()
    assert echo["t_values"] == ["1/2", "2"]
    assert echo["abs_tol"] == "1/1000000000"
    json.dumps(echo)


def test_parse_t_values():
    assert parse_t_values("1/2, 1,2") == (Fraction(1, 2), Fraction(1), Fraction(2))
    assert parse_t_values([1, "3/4"]) == (Fraction(1), Fraction(3, 4))
    with pytest.raises(ConfigError):
        parse_t_values("1,0")
    with pytest.raises(ConfigError):
        parse_t_values("")


def test_build_config_conversions():
    config = build_config(
        "axioms",
        {"model": "sl3", "abs_tol": "1e-6", "t_values": "2", "samples": 10},
    )
    assert config.abs_tol == Fraction(1, 10**6)
    assert config.t_values == (Fraction(2),)
    assert config.model == "sl3"
    with pytest.raises(ConfigError):
        build_config("axioms", {"abs_tol": "zero"})
    with pytest.raises(ConfigError):
        build_config("axioms", {"samples": "many"})


def test_parse_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "config.json"
    path.write_text('{"samples": 5, "mystery": true}')
    with pytest.raises(ConfigError):
        parse_config(str(path))
    path.write_text('[1, 2]')
    with pytest.raises(ConfigError):
        parse_config(str(path))
    path.write_text('not json')
    with pytest.raises(ConfigError):
        parse_config(str(path))
    with pytest.raises(ConfigError):
        parse_config(str(tmp_path / "missing.json"))
    path.write_text('{"samples": 5}')
    assert parse_config(str(path)) == {"samples": 5}
