import json
import subprocess
import sys

import pytest

from symspace.cli import main, parse_matrix_text, parse_word, _act_model
from symspace.suites import ConfigError


def run_cli(*args, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "symspace.cli", *args],
        capture_output=True,
        text=True,
        timeout=120,
        **kwargs,
    )


def test_verify_passing_suite_exits_zero(capsys):
    code = main(["verify", "axioms", "--model", "geodesic", "--samples", "50"])
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out)
    assert payload["suite"] == "axioms"
    assert payload["config"]["model"] == "geodesic"
    assert payload["counts"]["fail"] == 0
    names = [c["name"] for c in payload["cases"]]
    assert names == sorted(names)


def test_verify_broken_model_exits_one(capsys):
    code = main(["verify", "axioms", "--model", "broken-sl2", "--samples", "30"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 1
    statuses = {c["name"]: c["status"] for c in payload["cases"]}
    assert statuses["axioms.broken-sl2.rs2"] == "fail"
    failing = [c for c in payload["cases"] if c["status"] == "fail"]
    assert all("witness" in c for c in failing)


def test_verify_bad_flag_value_exits_two(capsys):
    assert main(["verify", "axioms", "--t-values", "1/0"]) == 2
    assert main(["verify", "axioms", "--abs-tol", "-3"]) == 2
    assert main(["verify", "axioms", "--samples", "0"]) == 2


def test_unknown_suite_is_an_argparse_error():
    with pytest.raises(SystemExit) as err:
        main(["verify", "nonsense"])
    assert err.value.code == 2


def test_config_file_roundtrip(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"model": "geodesic", "samples": 25}))
    out_file = tmp_path / "report.json"
    code = main(
        ["verify", "axioms", "--config", str(config), "--out", str(out_file)]
    )
    assert code == 0
    assert capsys.readouterr().out == ""
    payload = json.loads(out_file.read_text())
    assert payload["config"]["samples"] == 25
    assert payload["config"]["model"] == "geodesic"


def test_config_file_unknown_key_exits_two(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"modle": "sl2"}))
    assert main(["verify", "axioms", "--config", str(config)]) == 2


def test_flags_override_config_file(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"samples": 25, "model": "sl2"}))
    code = main(
        [
            "verify",
            "axioms",
            "--config",
            str(config),
            "--model",
            "geodesic",
            "--samples",
            "10",
        ]
    )
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["config"]["model"] == "geodesic"
    assert payload["config"]["samples"] == 10


def test_report_bytes_are_reproducible():
    args = ["verify", "so2-residuals", "--t-values", "1,2"]
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert "ms" in first.stderr  # timing goes to stderr only


def test_residual_strings_have_fixed_width(capsys):
    code = main(["verify", "so2-residuals", "--t-values", "1"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    for entry in payload["cases"]:
        residual = entry["residual"]
        if residual in ("exact-zero", "0.0"):
            continue
        mantissa = residual.split("e")[0].replace(".", "").lstrip("-")
        assert len(mantissa) == 20, residual


def test_factor_command(capsys):
    code = main(["factor", "--matrix", "1,1;0,1"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["canonical_point"] == ["2, 1", "1, 1"]
    assert payload["factor_count"] == 3
    assert len(payload["factors"]) == 3
    assert payload["sign"] == 1
    assert payload["exact_match"] is True
    assert payload["expression"].startswith("h1.")


def test_factor_three_by_three(capsys):
    code = main(["factor", "--matrix", "0,0,1;1,0,0;0,1,0"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["exact_match"] is True


def test_factor_rejects_non_unimodular(capsys):
    assert main(["factor", "--matrix", "2,0;0,1"]) == 2
    assert main(["factor", "--matrix", "1,1;0"]) == 2
    assert main(["factor", "--matrix", "1,x;0,1"]) == 2
    capsys.readouterr()


def test_parse_matrix_text():
    m = parse_matrix_text("1,1;0,1")
    assert m.n == 2
    with pytest.raises(ConfigError):
        parse_matrix_text("1,2,3;4,5")
    with pytest.raises(ConfigError):
        parse_matrix_text("1,2;3,four")


def test_act_geodesic(capsys):
    code = main(
        ["act", "--model", "geodesic", "--word", "tr:2 tr:3", "--point", "1/2"]
    )
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["image"] == "21/2"


def test_act_generator_on_base_point(capsys):
    code = main(["act", "--model", "sl2", "--word", "x+:1", "--point", "o"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["image"] == ["2, 1", "1, 1"]


def test_act_word_inverse_cancels(capsys):
    code = main(
        [
            "act",
            "--model",
            "sl2",
            "--word",
            "x+:1 trc ~trc ~x+:1",
            "--point",
            "5,2;2,1",
        ]
    )
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["image"] == payload["point"]


def test_act_minus_identity_fixes_points(capsys):
    code = main(
        ["act", "--model", "sl2", "--word=-I", "--point", "5,2;2,1"]
    )
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["image"] == payload["point"]
    assert payload["reflection_length"] == 36


def test_act_transvection_on_sl3(capsys):
    code = main(
        [
            "act",
            "--model",
            "sl3",
            "--word",
            "tr:2,0,1;0,1,0;1,0,1",
            "--point",
            "o",
        ]
    )
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["image"] == ["5, 0, 3", "0, 1, 0", "3, 0, 2"]


def test_act_bad_inputs_exit_two(capsys):
    assert main(["act", "--model", "sl2", "--word", "spin:1", "--point", "o"]) == 2
    assert main(["act", "--model", "sl2", "--word", "x+:0", "--point", "o"]) == 2
    assert main(["act", "--model", "sl2", "--word", "x+:1", "--point", "1,0;0,2"]) == 2
    assert main(["act", "--model", "sl3", "--word", "trc", "--point", "o"]) == 2
    assert main(["act", "--model", "broken-sl2", "--word", "trc", "--point", "o"]) == 2
    capsys.readouterr()


def test_act_model_kinds():
    assert _act_model("sl2").is_exact
    assert _act_model("geodesic").is_exact
    with pytest.raises(ConfigError):
        _act_model("broken-sl2")


def test_parse_word_composes_left_to_right():
    model = _act_model("geodesic")
    word, tokens = parse_word(model, "tr:1 refl:0")
    assert tokens == ["tr:1", "refl:0"]
    assert len(word) == 3


def test_demo_subcommand(capsys):
    code = main(["demo", "central-extension", "--samples", "5"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["demo"]["witness_point"] == ["2, 0, 1", "0, 1, 0", "1, 0, 1"]
    assert payload["demo"]["witness_displacement"].startswith("2.828427124746190")
    assert payload["counts"]["fail"] == 0
