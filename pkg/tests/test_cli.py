from __future__ import annotations

import copy
import csv
import io
import json
import subprocess
import sys

import pytest

from eulerzeta import cli
from eulerzeta.cli import dump_json, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def eval_json(capsys, *argv):
    code, out, err = run(capsys, "eval", "--format", "json", *argv)
    return code, json.loads(out) if out else None, err


def test_eval_integer_sqrt_zeta3(capsys):
    code, report, _ = eval_json(capsys, "--formula", "integer-sqrt", "--sigma", "3", "--primes", "1000", "--digits", "15")
    assert code == 0
    r = report["result"]
    assert r["partial_product"] == "1.20205690215259"
    assert r["primes_used"] == 1000 and r["last_prime"] == 7919
    assert r["certified_digits"] >= 7
    # the certified value is a prefix-rounding of the partial product
    assert r["value"].startswith("1.202056")
    assert report["provenance"]["formula"] == "integer-sqrt"
    assert set(report) == {"command", "inputs", "result", "timing", "provenance"}
    for key in ("value", "certified_digits", "truncation_bound", "rounding_bound"):
        assert key in r


def test_eval_euler_one_prime_is_a_precision_error(capsys):
    code, report, err = eval_json(capsys, "--formula", "euler", "--sigma", "2", "--primes", "1")
    assert code == 3
    assert report["result"]["partial_product"] == "1.33333333333333"
    assert report["result"]["certified_digits"] == 0
    assert report["result"]["truncation_bound"] == "inf"
    assert "1.33333333333333" in err


def test_eval_sigma_forms_are_exact(capsys):
    _, a, _ = eval_json(capsys, "--formula", "half-integer-main", "--sigma", "3/2", "--primes", "1000")
    _, b, _ = eval_json(capsys, "--formula", "half-integer-main", "--sigma", "1.5", "--primes", "1000")
    assert a["inputs"]["sigma"] == b["inputs"]["sigma"] == "3/2"
    assert a["result"]["partial_product"] == b["result"]["partial_product"] == "2.60691093229650"


def test_json_round_trip_is_byte_identical(capsys):
    code, out, _ = run(capsys, "eval", "--formula", "alt-product", "--sigma", "4", "--primes", "300", "--format", "json")
    assert code == 0
    assert dump_json(json.loads(out)) == out


def test_threads_do_not_change_results(capsys):
    common = ("--formula", "magnitude-main", "--sigma", "2", "--t", "1", "--primes", "20000", "--block-size", "512")
    _, one, _ = eval_json(capsys, *common, "--threads", "1")
    _, eight, _ = eval_json(capsys, *common, "--threads", "8")
    assert one["result"] == eight["result"]


def test_eval_csv(capsys):
    code, out, _ = run(capsys, "eval", "--formula", "euler", "--sigma", "3", "--primes", "100", "--format", "csv")
    assert code == 0
    assert out.count("\r\n") == 2
    header, row = list(csv.reader(io.StringIO(out)))
    assert header[0] == "command" and row[0] == "eval"
    assert "result.value" in header and "provenance.eq_ref" in header


def test_eval_text(capsys):
    code, out, _ = run(capsys, "eval", "--formula", "ratio-identity", "--sigma", "2", "--primes", "50")
    assert code == 0
    assert "certified digits" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--formula", "nope", "--sigma", "2"],
        ["eval", "--formula", "euler"],
        ["eval", "--formula", "euler", "--sigma", "two"],
        ["eval", "--formula", "euler", "--sigma", "2", "--primes", "0"],
        ["eval", "--formula", "euler", "--sigma", "2", "--digits", "0"],
        ["eval", "--formula", "euler", "--sigma", "2", "--precision-bits", "40"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code = None
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    capsys.readouterr()
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["--formula", "euler", "--sigma", "1"],
        ["--formula", "integer-sqrt", "--sigma", "5/2"],
        ["--formula", "alt-product", "--sigma", "3", "--t", "1"],
        ["--formula", "magnitude-main", "--sigma", "1/2", "--t", "14"],
    ],
)
def test_domain_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, "eval", "--primes", "10", *argv)
    assert code == 2
    assert "domain error" in err


def test_appendix_a_text(capsys, golden):
    code, out, _ = run(capsys, "appendix-a")
    assert code == 0
    lines = out.splitlines()[1:]
    assert len(lines) == 10
    for line in lines:
        k, power, radicand = line.split()
        assert k == power
        assert golden["coefficient_radicands"]["rows"][k] == radicand


def test_appendix_a_json_pairs(capsys, golden):
    code, out, _ = run(capsys, "appendix-a", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 10
    by_k = {r["k"]: r["radicand"] for r in rows}
    assert by_k[6] == ["236364091", "218517792968475"]
    assert by_k[9] == ["26315271553053477373", "23383376494609715287281703125"]
    for r in rows:
        assert "/".join(r["radicand"]) == golden["coefficient_radicands"]["rows"][str(r["k"])]


def test_appendix_a_csv(capsys):
    code, out, _ = run(capsys, "appendix-a", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["k", "pi_power", "radicand"]
    assert rows[6] == ["7", "7", "3392780147/30951416768146875"]


def test_table1_matches(capsys):
    code, out, err = run(capsys, "table1", "--format", "json")
    assert code == 0, err
    doc = json.loads(out)
    assert doc["status"] == "match"
    rows = {r["k"]: r for r in doc["rows"]}
    assert rows["2"]["product"] == "1.64491317470628"
    assert rows["5"]["product"] == "1.03692775514337"
    assert rows["3/2"]["reference"] == "2.61237534868549"


def test_table1_is_deterministic(capsys):
    _, a, _ = run(capsys, "table1", "--format", "csv")
    _, b, _ = run(capsys, "table1", "--format", "csv")
    assert a == b


def test_table1_tampered_golden_exits_4(capsys, monkeypatch):
    tampered = copy.deepcopy(cli.load_golden())
    tampered["table1"]["rows"][3]["product"] = "1.08232323371199"
    monkeypatch.setattr(cli, "load_golden", lambda: tampered)
    code, _, err = run(capsys, "table1")
    assert code == 4
    assert "1.08232323371199" in err


def test_table1_other_prime_count_skips_product_column(capsys):
    code, _, err = run(capsys, "table1", "--primes", "200")
    assert code == 0
    assert "not compared" in err


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--level", "quick", "--format", "json")
    checks = json.loads(out)["checks"]
    assert code == 0
    assert all(c["passed"] for c in checks)
    assert len(checks) == 9


def test_verify_failure_exits_5(capsys, monkeypatch):
    from eulerzeta import verify

    monkeypatch.setattr(verify, "CHECKS", [lambda level: verify.CheckResult("always fails", False, "")])
    code, out, _ = run(capsys, "verify")
    assert code == 5
    assert out.startswith("FAIL")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "eulerzeta", "appendix-a", "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "3392780147/30951416768146875" in proc.stdout
