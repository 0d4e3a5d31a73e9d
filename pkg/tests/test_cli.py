import json
import pathlib
import subprocess
import sys

import pytest
import yaml

from gcx.cli import main
from gcx.poly import QQ
from gcx.rings import PresentedRing, ideal_equal

JOBS = pathlib.Path(__file__).resolve().parent.parent / "examples" / "jobs"
GOLDEN = sorted(JOBS.glob("*.golden.txt"))


def job_command(path):
    return yaml.safe_load(path.read_text())["command"]


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


MU2 = """
command: complexity
field: QQ
rings:
  B: {vars: [x]}
actions:
  M: {kind: coaction, base: B, hopf: {builtin: mu, n: 2}, coaction: ["x*z"]}
params: {action: M, invariants: ["x^2"]}
"""


@pytest.fixture
def write_job(tmp_path):
    def write(text, name="job.yaml"):
        p = tmp_path / name
        p.write_text(text)
        return p
    return write


def test_golden_files_present():
    assert len(GOLDEN) >= 10


@pytest.mark.parametrize("golden", GOLDEN, ids=lambda p: p.name.split(".")[0])
def test_golden_reports_reproduce(golden, capsys):
    job = golden.with_name(golden.name.replace(".golden.txt", ".yaml"))
    expected = golden.read_text()
    code, first = run_cli(capsys, job_command(job), job, "--no-timings")
    _, second = run_cli(capsys, job_command(job), job, "--no-timings")
    assert first == second == expected
    assert f"exit_code: {code}" in first


def test_json_report_is_deterministic(write_job, tmp_path, capsys):
    job = write_job(MU2)
    outs = []
    for k in range(2):
        target = tmp_path / f"r{k}.json"
        assert run_cli(capsys, "complexity", job, "--no-timings", "--json", target)[0] == 0
        outs.append(target.read_text())
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    assert doc["report"]["result"]["complexity"] == 1
    assert "timings" not in doc


def test_timings_are_a_separate_section(write_job, capsys):
    code, out = run_cli(capsys, "complexity", write_job(MU2))
    assert code == 0
    body, _, timings = out.partition("\n[timings]\n")
    assert timings and "total" in timings
    assert "[timings]" not in body


def test_mu2_complexity_one(write_job, capsys):
    code, out = run_cli(capsys, "complexity", write_job(MU2))
    assert code == 0 and "complexity: 1" in out


def test_fat_point_exit_code(capsys):
    code, out = run_cli(capsys, "complexity", JOBS / "fat_point.yaml", "--no-timings")
    assert code == 3 and "x1*x2" in out


def test_undeclared_ring_is_input_error(write_job, capsys):
    code, out = run_cli(capsys, "canseq", write_job("""
field: QQ
rings:
  C: {vars: [t]}
maps:
  f: {source: D, target: C, images: ["t^2"]}
"""))
    assert code == 2 and "D" in out


def test_parse_error_reports_position(write_job, capsys):
    code, out = run_cli(capsys, "canseq", write_job("""
field: QQ
rings:
  D: {vars: [x]}
  C: {vars: [t]}
maps:
  f: {source: D, target: C, images: ["t^^2"]}
"""))
    assert code == 2 and "column" in out


def test_fraction_in_characteristic_two_rejected(write_job, capsys):
    code, _ = run_cli(capsys, "validate", write_job("""
field: GF(2)
rings:
  D: {vars: [x]}
  C: {vars: [t]}
maps:
  f: {source: D, target: C, images: ["1/2*t"]}
"""))
    assert code == 2


def test_command_mismatch_rejected(write_job, capsys):
    assert run_cli(capsys, "canseq", write_job(MU2))[0] == 2


def test_missing_file(tmp_path, capsys):
    code, out = run_cli(capsys, "canseq", tmp_path / "absent.yaml")
    assert code == 2 and "cannot read input" in out


def test_budget_exhaustion_exit_code(capsys):
    code, _ = run_cli(capsys, "complexity", JOBS / "mu3.yaml", "--no-timings", "--budget-spairs", "5")
    assert code == 4


def test_printed_presentation_round_trips(tmp_path, capsys):
    target = tmp_path / "cusp.json"
    run_cli(capsys, "canseq", JOBS / "cuspidal.yaml", "--no-timings", "--json", target)
    stage = json.loads(target.read_text())["report"]["result"]["stages"][1]["presentation"]
    parsed = PresentedRing(QQ, stage["variables"], stage["relations"])
    expected = PresentedRing(QQ, ["x", "y", "u1"], ["y^2 - x*u1", "u1^2 - x^2*y", "y*u1 - x^3"])
    assert ideal_equal(parsed, expected)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gcx", "complexity", str(JOBS / "mu2.yaml"), "--no-timings"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == (JOBS / "mu2.golden.txt").read_text()
