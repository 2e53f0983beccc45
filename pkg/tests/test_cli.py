import csv
import io
import json
import math
import subprocess
import sys

import pytest

from whitehead_vc import cli
from whitehead_vc.specfun import lobachevsky

V8 = 8 * lobachevsky(math.pi / 4)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_jones_trivial_coloring(capsys):
    code, out, _ = run(capsys, "jones", "--N", "4", "--M1", "1", "--M2", "1")
    assert code == 0
    (row,) = rows(out)
    assert list(row) == cli.JONES_COLUMNS
    assert float(row["re_J"]) == pytest.approx(1.0, abs=1e-14)
    assert float(row["im_J"]) == pytest.approx(0.0, abs=1e-14)


def test_jones_range_and_ratio_colors(capsys):
    code, out, _ = run(capsys, "jones", "--N", "10:30:10", "--s1", "0.95", "--s2", "0.97")
    assert code == 0
    rs = rows(out)
    assert [int(r["N"]) for r in rs] == [10, 20, 30]
    assert int(rs[1]["M1"]) == round(0.95 * 20.5)


@pytest.mark.parametrize("precision", ["auto", "double", "extended"])
def test_jones_precisions_agree(capsys, precision):
    code, out, _ = run(capsys, "jones", "--N", "12", "--link", "chain", "--c", "1", "--d", "1",
                       "--precision", precision)
    assert code == 0
    (row,) = rows(out)
    code, out2, _ = run(capsys, "jones", "--N", "12", "--link", "chain", "--c", "1", "--d", "1",
                        "--precision", "extended", "--dps", "40")
    (ref_row,) = rows(out2)
    ref = complex(float(ref_row["re_J"]), float(ref_row["im_J"]))
    val = complex(float(row["re_J"]), float(row["im_J"]))
    assert abs(val - ref) <= 1e-10 * abs(ref)


def test_jones_beyond_double_range_reports_log(capsys):
    code, out, _ = run(capsys, "jones", "--N", "700", "--link", "chain", "--c", "1", "--d", "1",
                       "--precision", "double")
    assert code == 0
    (row,) = rows(out)
    assert row["re_J"] == "nan"
    assert float(row["log_abs_J"]) > 710


def test_output_is_byte_identical_across_runs(capsys):
    argv = ["jones", "--N", "5:25:5", "--link", "chain", "--a", "1", "--c", "2"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    # floats round-trip through the 17-significant-digit format
    for row in rows(first):
        for key in ("re_J", "im_J", "log_abs_J"):
            assert format(float(row[key]), ".17g") == row[key]


def test_solve_command(capsys):
    code, out, _ = run(capsys, "solve")
    assert code == 0
    (row,) = rows(out)
    assert float(row["re_z1"]) == pytest.approx(0.5, abs=1e-12)
    assert float(row["re_z2"]) == pytest.approx(0.25, abs=1e-12)
    assert float(row["volume"]) == pytest.approx(V8, abs=1e-12)


def test_solve_with_start_point_and_chain(capsys):
    code, out, _ = run(capsys, "solve", "--link", "chain", "--c", "2", "--z0", "0.49,0.26,0.26")
    assert code == 0
    assert float(rows(out)[0]["volume"]) == pytest.approx(2 * V8, abs=1e-11)


def test_volume_command(capsys):
    code, out, _ = run(capsys, "volume", "--s1", "0.95", "--s2", "0.97")
    assert code == 0
    (row,) = rows(out)
    assert abs(float(row["difference"])) <= 1e-10
    assert float(row["max_edge_residual"]) <= 1e-10


def test_potential_command(capsys):
    code, out, _ = run(capsys, "potential", "--z", "0.5,0.25")
    assert code == 0
    (row,) = rows(out)
    assert float(row["re_phi"]) * 2 * math.pi == pytest.approx(V8, abs=1e-12)
    assert float(row["grad_norm"]) < 1e-13


def test_asymptote_command(capsys):
    code, out, err = run(capsys, "asymptote", "--N", "50,100,150,200")
    assert code == 0
    assert len(rows(out)) == 4
    assert "volume estimate" in err


def test_tv_and_audit_commands(capsys):
    code, out, _ = run(capsys, "tv", "--r", "5,7,9,11", "--format", "json")
    assert code == 0
    assert [rec["r"] for rec in json.loads(out)] == [5, 7, 9, 11]
    code, out, _ = run(capsys, "audit", "--r", "41")
    assert code == 0
    assert rows(out)[0]["passed"] == "true"


def test_check_command(capsys):
    code, out, err = run(capsys, "check", "--only", "lobachevsky,critical_point")
    assert code == 0
    assert "PASS" in err
    assert len(rows(out)) == 2


@pytest.mark.parametrize("argv", [
    ["jones", "--N", "5", "--M1", "9"],
    ["jones", "--N", "abc"],
    ["tv", "--r", "8"],
    ["check", "--only", "nonsense"],
    ["jones", "--link", "chain", "--c", "0", "--d", "0"],
    ["nonsense"],
])
def test_configuration_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_numerical_failure_exit_1(capsys):
    code, _, err = run(capsys, "solve", "--z0", "0.9,0.3")
    assert code == 1
    assert "numerical failure" in err


def test_failed_check_exits_1(capsys, monkeypatch):
    from whitehead_vc import checks

    monkeypatch.setitem(checks.CHECKS, "lobachevsky",
                        lambda rng: checks.CheckResult("lobachevsky", False, 1.0, 0.0))
    code, _, _ = run(capsys, "check", "--only", "lobachevsky")
    assert code == 1


def test_out_file_and_sidecar(capsys, tmp_path):
    target = tmp_path / "sub" / "j.csv"
    code, out, _ = run(capsys, "jones", "--N", "6", "--out", str(target), "--seed", "7")
    assert code == 0 and out == ""
    assert rows(target.read_text())[0]["N"] == "6"
    meta = json.loads((tmp_path / "sub" / "j.csv.meta.json").read_text())
    assert meta["command"] == "jones"
    assert meta["seed"] == 7
    assert meta["precision"] == "auto"
    assert meta["versions"]["backend"] in ("cython", "python")
    assert set(meta["tolerances"]) >= {"newton_tol", "degeneracy_floor"}
    assert meta["wall_time_s"] >= 0


def test_output_dir_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code, _, _ = run(capsys, "solve", "--format", "json")
    assert code == 0
    assert json.loads((tmp_path / "solve.json").read_text())[0]["sign"] == 1
    assert (tmp_path / "solve.json.meta.json").exists()


def test_parse_range():
    assert cli.parse_range("3") == [3]
    assert cli.parse_range("1,4") == [1, 4]
    assert cli.parse_range("10:40:10") == [10, 20, 30, 40]


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "whitehead_vc.cli", "jones", "--N", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("N,r,M1,M2")
