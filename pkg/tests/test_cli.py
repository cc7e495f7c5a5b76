import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from realization_lab import cli
from realization_lab.errors import NumericalBreakdown

DATA = Path(__file__).parent / "data"
MIMO = DATA / "example_minimal_mimo.json"


def run_cli(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    return code, capsys.readouterr().out


def as_complex(pair):
    return complex(*pair)


def test_analyze_reports_minimality_and_alpha(capsys):
    code, out = run_cli(capsys, "analyze", "--input", MIMO)
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "ok"
    assert rep["result"]["minimality"]["minimal"] is True
    assert rep["result"]["alpha"] == 1
    assert rep["tolerances"] == {"eig_match": 1e-6, "max_retries": 32, "rank_rel": 1e-9}


def test_rank_formula_counterexample_file(capsys):
    code, out = run_cli(capsys, "analyze", "--input", DATA / "rank_formula_counterexample.json")
    rf = json.loads(out)["result"]["rank_formula"]
    assert code == 0 and (rf["lhs"], rf["rhs"], rf["holds"]) == (2, 3, False)


def test_family_with_quadratic_polynomial(capsys):
    code, out = run_cli(capsys, "family", "--input", MIMO, "--psi", "0,-2,1")
    res = json.loads(out)["result"]
    assert code == 0
    C = np.array([[as_complex(x) for x in row] for row in res["tilde"]["C"]])
    D = np.array([[as_complex(x) for x in row] for row in res["tilde"]["D"]])
    np.testing.assert_allclose(C, [[-1, 1], [1, 1]], atol=1e-12)
    np.testing.assert_allclose(D, 2 * np.eye(2), atol=1e-12)
    assert res["minimal_tilde"] and res["chain_respected"]


def test_family_takes_psi_from_input_file(capsys):
    code, out = run_cli(capsys, "family", "--input", DATA / "siso_pole_at_zero.json")
    assert code == 0 and json.loads(out)["result"]["minimal_L"] is True


def test_family_without_psi_is_an_input_error(capsys):
    code, out = run_cli(capsys, "family", "--input", MIMO)
    assert code == 2 and json.loads(out)["error"]["type"] == "InputError"


@pytest.mark.parametrize("command", ["square", "feedback", "complete"])
def test_other_commands_succeed(capsys, command):
    code, out = run_cli(capsys, command, "--input", MIMO, "--seed", 3)
    assert code == 0 and json.loads(out)["status"] == "ok"


def test_square_on_non_minimal_input_is_an_input_error(capsys):
    code, out = run_cli(capsys, "square", "--input", DATA / "uncontrollable_mode.json")
    assert code == 2 and json.loads(out)["error"]["type"] == "PreconditionError"


def test_feedback_on_non_minimal_input(capsys):
    code, out = run_cli(capsys, "feedback", "--input", DATA / "uncontrollable_mode.json")
    res = json.loads(out)["result"]
    assert code == 0 and res["consistent"] and not any(res["verdicts"].values())


def test_echelon_command(capsys):
    code, out = run_cli(capsys, "echelon", "--input", DATA / "jordan_three_eigenvalues.json")
    res = json.loads(out)["result"]
    assert code == 0
    assert res["alpha"] == 4 and res["rho"] == 4 and res["echelon"] is True
    assert res["row_spec"] == [[1, 3, 5], [2, 3], [3, 4, 5, 6]]


def test_probe_command(capsys):
    code, out = run_cli(capsys, "probe", "--n", 3, "--p", 2, "--trials", 5)
    res = json.loads(out)["result"]
    assert code == 0 and res["stats"]["trials"] == 5


@pytest.mark.parametrize("content", ["", "   \n", "{not json", "[1, 2]", '{"A": [[1, 2]], "B": [[1]], "C": [[1]]}',
                                     '{"A": [], "B": [[1]], "C": [[1]]}'])
def test_malformed_inputs_exit_2(capsys, tmp_path, content):
    f = tmp_path / "bad.json"
    f.write_text(content)
    code, out = run_cli(capsys, "analyze", "--input", f)
    rep = json.loads(out)
    assert code == 2 and rep["status"] == "error" and rep["error"]["message"]


def test_missing_file_and_missing_input(capsys, tmp_path):
    assert cli.main(["analyze", "--input", str(tmp_path / "nope.json")]) == 2
    assert cli.main(["analyze"]) == 2
    assert cli.main(["analyze", "--batch", str(tmp_path / "nope")]) == 2


def test_numerical_breakdown_exits_3(capsys, monkeypatch):
    def boom(req, tol):
        raise NumericalBreakdown("forced")
    monkeypatch.setitem(cli.HANDLERS, "analyze", boom)
    code, out = run_cli(capsys, "analyze", "--input", MIMO)
    assert code == 3 and json.loads(out)["error"]["type"] == "NumericalBreakdown"


def test_tolerance_overrides_are_embedded(capsys):
    code, out = run_cli(capsys, "analyze", "--input", MIMO, "--rank-tol", 1e-8, "--eig-tol", 1e-5,
                        "--max-retries", 4)
    rep = json.loads(out)
    assert rep["tolerances"] == {"eig_match": 1e-5, "max_retries": 4, "rank_rel": 1e-8}
    assert rep["request"]["tolerances"] == {"eig_match": 1e-5, "max_retries": 4, "rank_rel": 1e-8}


def test_report_replays_to_identical_bytes(capsys, tmp_path):
    code, first = run_cli(capsys, "feedback", "--input", MIMO, "--seed", 7)
    saved = tmp_path / "report.json"
    saved.write_text(first)
    code2, second = run_cli(capsys, "feedback", "--input", saved)
    assert code == code2 == 0
    assert first == second


def test_text_format_renders_the_json(capsys):
    code, out = run_cli(capsys, "analyze", "--input", MIMO, "--format", "text")
    assert code == 0
    assert "result.minimality.minimal: true" in out.splitlines()
    assert "result.alpha: 1" in out.splitlines()


def test_batch_continues_past_failures(tmp_path):
    src = tmp_path / "in"
    src.mkdir()
    (src / "a_good.json").write_text(MIMO.read_text())
    (src / "b_bad.json").write_text("{")
    (src / "c_good.json").write_text((DATA / "uncontrollable_mode.json").read_text())
    out = tmp_path / "out"
    code = cli.main(["analyze", "--batch", str(src), "--out", str(out)])
    assert code == 2
    files = sorted(p.name for p in out.iterdir())
    assert files == ["a_good.analyze.report.json", "b_bad.analyze.report.json", "c_good.analyze.report.json"]
    assert json.loads((out / "c_good.analyze.report.json").read_text())["status"] == "ok"


def test_unknown_command_in_replayed_request():
    report, code = cli.run({"command": "nope", "input": {}, "seed": 0})
    assert code == 2 and report["status"] == "error"
    report, code = cli.run({"command": "analyze", "input": json.loads(MIMO.read_text()), "seed": -1})
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "realization_lab", "analyze", "--input", str(MIMO)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["alpha"] == 1
