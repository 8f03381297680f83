import json
import subprocess
import sys

import pytest

from geniter import cli


def run_cli(args, capsys):
    code = cli.main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_iterate_writes_csv(tmp_path, capsys):
    out = tmp_path / "seq.csv"
    code, stdout, _ = run_cli(["iterate", "--family", "logistic2", "--a", "13.5",
                               "--scheme", "F", "--seeds", "0.7,0.3",
                               "--count", "100", "--out", str(out)], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "index,value"
    assert len(lines) == 101
    summary = json.loads(stdout)
    assert summary["terms"] == 100
    assert summary["truncated"] is False
    assert "settings" in summary


def test_summary_is_one_line(capsys):
    code, stdout, _ = run_cli(["sharkovsky", "--n", "2", "--compare", "9,15"], capsys)
    assert code == 0
    assert stdout.count("\n") == 1
    assert json.loads(stdout)["message"] == "9 precedes 15"


def test_sharkovsky_chain(capsys):
    code, stdout, _ = run_cli(["sharkovsky", "--n", "2", "--chain", "20"], capsys)
    assert code == 0
    assert json.loads(stdout)["chain"] == [9, 15, 18, 12, 6, 3, 1]


def test_transition_reports_trifurcation(tmp_path, capsys):
    out = tmp_path / "cv.json"
    code, stdout, _ = run_cli(["transition", "--family", "logistic2",
                               "--seeds", "0.6,0.3", "--bracket", "12.5,13.5",
                               "--tol", "1e-7", "--out", str(out)], capsys)
    assert code == 0
    summary = json.loads(stdout)
    assert summary["midpoint"] == pytest.approx(13.1986367, abs=5e-6)
    saved = json.loads(out.read_text())
    assert saved["midpoint"] == summary["midpoint"]
    assert saved["lower"]["kind"] == "FixedPoint"
    assert saved["upper"]["period"] == 3


def test_fixed_points_subcommand(capsys):
    code, stdout, _ = run_cli(["fixed-points", "--family", "logistic2",
                               "--a", "13.5"], capsys)
    assert code == 0
    values = [fp["value"] for fp in json.loads(stdout)["fixed_points"]]
    assert values[0] == 0.0
    assert values[1] == pytest.approx(0.0893164, abs=1e-6)
    assert values[2] == pytest.approx(2 / 3, abs=1e-9)


def test_classify_subcommand(capsys):
    code, stdout, _ = run_cli(["classify", "--family", "logistic2",
                               "--a", "12.782842212", "--seeds", "0.7,0.3"], capsys)
    assert code == 0
    rep = json.loads(stdout)["report"]
    assert rep["kind"] == "Periodic" and rep["period"] == 3


def test_scan_subcommand(tmp_path, capsys):
    out = tmp_path / "table.csv"
    code, stdout, _ = run_cli(["scan", "--family", "logistic2",
                               "--seeds", "0.5,0.5", "--range", "12.0,13.0",
                               "--steps", "5", "--out", str(out)], capsys)
    assert code == 0
    assert len(out.read_text().splitlines()) == 6


def test_feigenbaum_subcommand(capsys):
    code, stdout, _ = run_cli(["feigenbaum", "--family", "logistic2",
                               "--seeds", "0.5,0.5", "--base", "3",
                               "--doublings", "3", "--range", "13.3,13.8",
                               "--tol", "1e-7"], capsys)
    assert code == 0
    summary = json.loads(stdout)
    assert len(summary["mus"]) == 3
    assert summary["mus"][0] == pytest.approx(13.45011, abs=1e-3)


def test_basin_and_julia_artifacts(tmp_path, capsys):
    pgm = tmp_path / "basin.pgm"
    csv = tmp_path / "basin.csv"
    code, stdout, _ = run_cli(["basin", "--family", "logistic2", "--a", "13",
                               "--grid", "16x16", "--out", str(pgm),
                               "--csv-out", str(csv)], capsys)
    assert code == 0
    assert pgm.read_bytes().startswith(b"P5\n16 16\n255\n")
    assert len(csv.read_text().splitlines()) == 257

    jp = tmp_path / "julia.pgm"
    code, stdout, _ = run_cli(["julia", "--family", "bilinear-c", "--c", "0",
                               "--grid", "8x8", "--rect=-1,1,-1,1",
                               "--max-iter", "32", "--out", str(jp)], capsys)
    assert code == 0
    assert jp.read_bytes().startswith(b"P5\n8 8\n255\n")


def test_mandelbrot_subcommand(capsys):
    code, stdout, _ = run_cli(["mandelbrot", "--family", "biquadratic-c",
                               "--seeds", "0,0", "--grid", "4x4",
                               "--rect=-0.2,0.2,-0.2,0.2", "--max-iter", "32"], capsys)
    assert code == 0
    assert json.loads(stdout)["bounded_cells"] == 16


def test_job_file_equals_flags(tmp_path, capsys):
    out_flags = tmp_path / "flags.csv"
    out_job = tmp_path / "job.csv"
    args = ["iterate", "--family", "logistic2", "--a", "13.5",
            "--seeds", "0.7,0.3", "--count", "50"]
    code, _, _ = run_cli(args + ["--out", str(out_flags)], capsys)
    assert code == 0
    job = {"command": "iterate", "family": "logistic2", "params": {"a": 13.5},
           "seeds": [0.7, 0.3], "count": 50, "out": str(out_job)}
    job_path = tmp_path / "job.json"
    job_path.write_text(json.dumps(job))
    code, _, _ = run_cli(["--job", str(job_path)], capsys)
    assert code == 0
    assert out_flags.read_bytes() == out_job.read_bytes()


def test_flags_override_job(tmp_path, capsys):
    job_path = tmp_path / "job.json"
    job_path.write_text(json.dumps({"command": "iterate", "family": "logistic2",
                                    "params": {"a": 13.5}, "seeds": [0.7, 0.3],
                                    "count": 5}))
    code, stdout, _ = run_cli(["iterate", "--job", str(job_path),
                               "--count", "8"], capsys)
    assert code == 0
    assert json.loads(stdout)["terms"] == 8


def test_reruns_are_byte_identical(tmp_path, capsys):
    outs = []
    for name in ("a.pgm", "b.pgm"):
        path = tmp_path / name
        code, _, _ = run_cli(["basin", "--family", "logistic2", "--a", "13",
                              "--grid", "12x12", "--out", str(path)], capsys)
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_validation_exit_codes(tmp_path, capsys):
    code, _, err = run_cli(["iterate", "--family", "logistic2",
                            "--seeds", "0.5,0.5", "--count", "10"], capsys)
    assert code == 1          # missing parameter a
    assert "error" in err
    code, _, _ = run_cli(["iterate", "--no-such-flag"], capsys)
    assert code == 1
    code, _, _ = run_cli(["classify", "--family", "logistic2", "--a", "13",
                          "--seeds", "0.5"], capsys)
    assert code == 1          # seed length mismatch
    bad_job = tmp_path / "bad.json"
    bad_job.write_text("{nope")
    code, _, _ = run_cli(["--job", str(bad_job)], capsys)
    assert code == 1


def test_numerical_failure_exit_code(capsys):
    code, _, err = run_cli(["transition", "--family", "logistic2",
                            "--seeds", "0.7,0.3", "--bracket", "12.9,13.0",
                            "--tol", "1e-6"], capsys)
    assert code == 2
    assert "numerical failure" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "geniter.cli", "sharkovsky",
                           "--n", "2", "--compare", "9,15"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "9 precedes 15" in proc.stdout
