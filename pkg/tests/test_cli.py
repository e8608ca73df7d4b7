import csv
import io
import json
import subprocess
import sys

import pytest

from threegap.cli import COLUMNS, main, parse_grid

SQRT2 = "1.41421356237309504880"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_gaps_worked_example(capsys):
    code, out, _ = run(capsys, "gaps", "--alpha", SQRT2, "--q", "10")
    assert code == 0
    assert "2/5 < alpha < 3/7" in out
    assert "sigma = 0,5,3,8,1,6,4,9,2,7" in out
    assert "G_{10,1} = {A,C,A,B,A,C,A,B,A,B}" in out
    assert "G_{10,2} = {AC,CA,AB,BA,AC,CA,AB,BA,AB,BA}" in out
    assert "G_{10,3} = {ACA,CAB,ABA,BAC,ACA,CAB,ABA,BAB,ABA,BAC}" in out


def test_gaps_golden_ratio_json(capsys):
    code, out, _ = run(capsys, "gaps", "--alpha", "0.6180339887498948482", "--q", "10", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["neighbors"] == ["3/5", "5/8"]
    assert rep["counts"] == {"A": 5, "B": 2, "C": 3}


def test_exit_codes(capsys):
    assert run(capsys, "gaps", "--alpha", "0.5", "--q", "10")[0] == 2
    assert run(capsys, "gaps", "--alpha", SQRT2, "--q", "10", "--bogus")[0] == 1
    assert run(capsys, "figure1", "--lambda", "1:0:0.1")[0] == 1
    assert run(capsys, "empirical", "--eta", "0", "--q", "10", "--lambda", "1")[0] in (1, 2)
    assert run(capsys, "g2", "--lambda", "0.3,1.5", "--lambda2", "0.2,0.4")[0] == 0


def test_exit_code_tolerance_failure(capsys):
    code, out, _ = run(capsys, "g2", "--lambda", "1.5", "--lambda2", "0.4", "--tol", "1e-30")
    assert code == 3


def test_console_script_exit_code():
    proc = subprocess.run([sys.executable, "-m", "threegap.cli", "gaps", "--alpha", "0.5", "--q", "10"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "domain error" in proc.stderr


def test_parse_grid():
    assert [str(v) for v in parse_grid("0:0.3:0.1")] == ["0", "1/10", "1/5", "3/10"]
    assert [str(v) for v in parse_grid("0.5,2")] == ["1/2", "2"]
    with pytest.raises(Exception):
        parse_grid("0:1:0")


def test_figure1_rows_and_summary(capsys, tmp_path):
    out = tmp_path / "fig1.csv"
    code, _, _ = run(capsys, "figure1", "--q", "200", "--lambda", "0,0.5,1.5", "--out", str(out))
    assert code == 0
    rows = table(out.read_text())
    assert list(rows[0]) == COLUMNS["figure1"]
    assert float(rows[0]["empirical"]) == 1 and float(rows[0]["closed_form"]) == 1
    assert float(rows[1]["closed_form"]) == pytest.approx(0.69604, abs=1e-5)
    summary = json.loads((tmp_path / "fig1.summary.json").read_text())["summary"]
    assert summary["max_abs_diff"] < 0.05


def test_figure2_examples(capsys):
    code, out, _ = run(capsys, "figure2", "--lambda", "0,0.3,2.9", "--lambda2", "0,0.2,2.9")
    assert code == 0
    rows = {(r["lambda1"], r["lambda2"]): r for r in table(out)}
    assert rows[("0", "0")]["region"] == "boundary" and float(rows[("0", "0")]["g2"]) == 1
    assert rows[("0.3", "0.2")]["region"] == "A"
    assert float(rows[("0.3", "0.2")]["g2"]) == pytest.approx(0.756829, abs=1e-6)
    assert rows[("2.9", "2.9")]["region"] == "G" and float(rows[("2.9", "2.9")]["g2"]) == 0


def test_convergence_zero_lambda(capsys):
    code, out, _ = run(capsys, "convergence", "--lambda", "0", "--q", "50,100,200")
    assert code == 0
    assert all(float(r["abs_error"]) == 0 for r in table(out))


def test_convergence_requires_increasing_q(capsys):
    assert run(capsys, "convergence", "--lambda", "0.5", "--q", "200,100")[0] == 1


def test_schemas(capsys):
    cases = [
        (("empirical", "--q", "50", "--lambda", "0.5"), "empirical"),
        (("closedform", "--lambda", "0.5"), "closedform1"),
        (("closedform", "--k", "2", "--lambda", "0.5,0.3"), "closedform2"),
        (("lemma2", "--q", "50,100"), "lemma2"),
        (("montecarlo", "--q", "50", "--lambda", "1", "--samples", "500"), "montecarlo"),
    ]
    for argv, schema in cases:
        code, out, _ = run(capsys, *argv)
        assert code in (0, 3), argv
        assert list(table(out)[0]) == COLUMNS[schema], argv


def test_json_format(capsys):
    code, out, _ = run(capsys, "empirical", "--q", "50", "--lambda", "0,1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["metadata"]["subcommand"] == "empirical"
    assert doc["columns"] == COLUMNS["empirical"]
    assert len(doc["rows"]) == 2


def test_lambda_quantized_and_echoed(capsys):
    code, out, _ = run(capsys, "empirical", "--q", "50", "--lambda", "0.12345678")
    assert code == 0
    assert "123457/1000000" in out.splitlines()[0]


@pytest.mark.parametrize("argv", [
    ("figure1", "--q", "100", "--lambda", "0:2:0.25"),
    ("montecarlo", "--q", "40", "--lambda", "0.8", "--samples", "2000", "--seed", "11"),
    ("g2", "--lambda", "0.5,1.5", "--format", "json"),
])
def test_byte_identical_reruns(capsys, tmp_path, argv):
    a, b = tmp_path / "a.out", tmp_path / "b.out"
    assert run(capsys, *argv, "--out", str(a))[0] == 0
    assert run(capsys, *argv, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
