"""Tests for the voalab command line."""

import json

import pytest

from voalab import Scenario
from voalab.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, main

SCENARIO = """\
lattice A1 rank 1 basis a
  2

lattice A1x2 rank 2 basis a1 a2
  2 0
  0 2

sublattice Za2 of A1x2
  a2

vector half in A1 = 1/4*a

auto s on A1 = sigma(1)
state omega1 in A1x2 = virasoro()
group T on A1 = theta
space VT in A1 = fixed(T)

check basis-dims lattice=A1 dims=1,3,4
check group-order group=T order=2
"""


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "small.scn"
    path.write_text(SCENARIO, encoding="utf-8")
    return path


def test_run_text_report(scenario_file, capsys):
    """Test a passing run and the text layout."""
    assert main(["run", str(scenario_file), "--max-weight", "2", "--quiet"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("voalab 0.4.0 scenario=")
    assert lines[0].endswith("max_weight=2")
    assert lines[-1] == "summary: 7 ok, 0 failed, max_weight=2: PASS"


def test_run_json_report_and_file(scenario_file, tmp_path, capsys):
    """Test the JSON output and the --report copy."""
    target = tmp_path / "report.json"
    code = main(["run", "--scenario", str(scenario_file), "--max-weight", "2", "--output", "json",
                 "--report", str(target), "--quiet"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    data = json.loads(out)
    assert data["summary"]["status"] == "PASS"
    assert target.read_text(encoding="utf-8") == out


def test_run_failure_exit_code(tmp_path, capsys):
    """Test that a failing check gives exit code 1."""
    path = tmp_path / "wrong.scn"
    path.write_text(SCENARIO.replace("order=2", "order=3"), encoding="utf-8")
    assert main(["run", str(path), "--max-weight", "2", "--check", "group-order", "--quiet"]) == EXIT_FAILED
    assert "status=FAIL" in capsys.readouterr().out


def test_dims_of_lattice_and_space(scenario_file, capsys):
    """Test graded dimensions of V_A1 and of a named space."""
    assert main(["dims", "V_A1", "--scenario", str(scenario_file), "--max-weight", "2", "--quiet"]) == EXIT_OK
    assert capsys.readouterr().out == "V_A1:\n  0: 1\n  1: 3\n  2: 4\n"
    assert main(["dims", "VT", "--scenario", str(scenario_file), "--max-weight", "2", "--output", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["dims"] == [1, 1, 2]


def test_character_with_shift(scenario_file, capsys):
    """Test the character of a half-shifted rank-one coset."""
    args = ["character", "Za2", "--shift", "1/2", "--scenario", str(scenario_file), "--max-weight", "2"]
    assert main(args) == EXIT_OK
    assert capsys.readouterr().out == "q^(1/4): 2\nq^(5/4): 2\n"


def test_commutant(scenario_file, capsys):
    """Test that the full Virasoro vector has only the vacuum as commutant."""
    assert main(["commutant", "omega1", "--scenario", str(scenario_file), "--max-weight", "2"]) == EXIT_OK
    assert capsys.readouterr().out == "Com(omega1):\n  0: 1\n  1: 0\n  2: 0\n"


def test_auto_check(scenario_file, capsys):
    """Test equal and different automorphism expressions."""
    common = ["--scenario", str(scenario_file), "--max-weight", "2", "--lattice", "A1"]
    assert main(["auto-check", "s*theta*s", "inner(half)", *common]) == EXIT_OK
    assert capsys.readouterr().out == "EQUAL\n"
    assert main(["auto-check", "theta", "id", *common]) == EXIT_FAILED
    assert capsys.readouterr().out == "DIFFERENT at grade 1\n"


def test_show_scenario(scenario_file, capsys):
    """Test that the canonical text is printed."""
    assert main(["show-scenario", "--scenario", str(scenario_file)]) == EXIT_OK
    assert capsys.readouterr().out == Scenario.parse(SCENARIO).to_text()


def test_errors_exit_with_usage_code(scenario_file, tmp_path, capsys):
    """Test missing files and unknown names."""
    assert main(["run", str(tmp_path / "missing.scn")]) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("voalab: error:")
    assert main(["dims", "Nowhere", "--scenario", str(scenario_file)]) == EXIT_USAGE
    assert "Unknown lattice 'Nowhere'" in capsys.readouterr().err


def test_parser_requires_a_command():
    """Test that argparse rejects a missing subcommand."""
    with pytest.raises(SystemExit) as exc_info:
        build_parser().parse_args([])
    assert exc_info.value.code == 2
