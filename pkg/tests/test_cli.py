import csv
import json

import numpy as np
import pytest

from simplexderiv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_approx_diag_quartic(capsys):
    code, out, _ = run(capsys, "approx", "quartic3", "--x0", "2,-2,5", "--scheme", "diag", "--h", "0.1",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["evaluations"] == 7
    # 10 * 12 * 25 + 10 * 2 * 0.01 = 3000.2 in the last entry
    np.testing.assert_allclose(np.diag(data["value"]), [-96.04, 48.02, 3000.2], atol=1e-9)
    assert set(data["bounds"]) == {"gcsh_general", "diag"}


def test_approx_example1_human_output(capsys):
    code, out, _ = run(capsys, "approx", "quartic3", "--scheme", "gcsh-example1")
    assert code == 0
    assert "diagonal: (-96.04, 48.068, 0)" in out
    assert "distinct evaluations: 7" in out


def test_approx_hvp_zero_v(capsys):
    code, _, err = run(capsys, "approx", "f", "--scheme", "hvp", "--v", "0,0")
    assert code == 2 and "v must be nonzero" in err


def test_approx_unknown_function(capsys):
    code, _, err = run(capsys, "approx", "nosuch", "--scheme", "gcsh", "--n", "2")
    assert code == 2 and "unknown function" in err


@pytest.mark.parametrize("argv,count", [
    (("count", "gsh-minimal", "--n", "6"), 28),
    (("count", "hvp-gcsh", "--n", "10", "--v", ",".join(["1"] * 10)), 39),
    (("count", "row-gcsh", "--n", "3", "--row", "2"), 13),
    (("count", "--scheme", "offdiag", "--n", "5"), 16),
])
def test_count(capsys, argv, count):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.split()[0] == str(count)


def test_count_row_gcsh_note(capsys):
    _, out, _ = run(capsys, "count", "row-gcsh", "--n", "3", "--row", "1")
    assert "full GCSH" in out
    _, out, _ = run(capsys, "count", "row-gcsh", "--n", "4", "--row", "1")
    assert "note" not in out


@pytest.mark.parametrize("argv,count", [
    (("points", "row", "--n", "2", "--i", "1"), 5),
    (("points", "gcsh-minimal", "--n", "2"), 7),
])
def test_points(capsys, argv, count):
    code, out, _ = run(capsys, *argv)
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0 and len(rows) == count
    assert rows[0]["provenance"] == "x0"


def test_points_byte_identical(capsys):
    argv = ("points", "gcsh-minimal", "--n", "3", "--x0", "0.1,0.2,0.3", "--h", "0.01")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_table_replay_round_trip(tmp_path, capsys):
    f = lambda x: x[0] ** 2 * x[1] + x[1] ** 2
    _, out, _ = run(capsys, "points", "gcsh-minimal", "--n", "2", "--x0", "1,1", "--h", "0.1")
    table = tmp_path / "table.csv"
    with table.open("w") as fh:
        fh.write("x1,x2,f\n")
        for r in csv.DictReader(out.splitlines()):
            x = [float(r["x1"]), float(r["x2"])]
            fh.write(f"{r['x1']},{r['x2']},{f(x)!r}\n")
    code, out, _ = run(capsys, "approx", str(table), "--scheme", "gcsh-minimal", "--x0", "1,1", "--h", "0.1",
                       "--format", "json")
    assert code == 0
    # cubic: the centered estimate is exact
    np.testing.assert_allclose(json.loads(out)["value"], [[2.0, 2.0], [2.0, 2.0]], atol=1e-9)
    code, _, err = run(capsys, "approx", str(table), "--scheme", "gsh-minimal", "--x0", "1,1", "--h", "0.1")
    assert code == 2 and "table lacks" in err


def test_malformed_table(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    code, _, err = run(capsys, "approx", str(bad), "--scheme", "gcsh")
    assert code == 2 and "header" in err
    bad.write_text("x1,f\n1,abc\n")
    code, _, err = run(capsys, "approx", str(bad), "--scheme", "gcsh")
    assert code == 2 and "non-numeric" in err


def test_order_pass_and_fail(capsys):
    code, out, _ = run(capsys, "order", "expsin3", "--scheme", "gcsh", "--expect", "2")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "order", "expsin3", "--scheme", "gsh", "--expect", "2")
    assert code == 1 and "FAIL" in out


def test_order_writes_report_to_env_outdir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SIMPLEXDERIV_OUTDIR", str(tmp_path))
    code, _, _ = run(capsys, "order", "expsin3", "--scheme", "cshd", "--radii", "0.1:0.5:5")
    files = list(tmp_path.iterdir())
    assert code == 0 and [p.name for p in files] == ["order_expsin3_cshd.csv"]
    assert len(list(csv.DictReader(files[0].open()))) == 5
    run(capsys, "order", "expsin3", "--scheme", "cshd", "--out", "sweep.json", "--format", "json")
    data = json.loads((tmp_path / "sweep.json").read_text())
    assert abs(data["slope"] - 2.0) < 0.15


def test_json_mirrors_table(capsys):
    _, human, _ = run(capsys, "bounds", "quartic3", "--scheme", "cshd", "--radii", "0.1,0.05,0.025")
    code, out, _ = run(capsys, "bounds", "quartic3", "--scheme", "cshd", "--radii", "0.1,0.05,0.025",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and len(data["checks"]) == 3
    assert human.count("yes") == 3


def test_row_index_is_one_based(capsys):
    code, out, _ = run(capsys, "approx", "bilinear2", "--scheme", "row", "--row", "1", "--x0", "0,0", "--h", "0.1",
                       "--format", "json")
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["value"], [[0.0, 1.0], [0.0, 0.0]], atol=1e-12)
    code, _, err = run(capsys, "approx", "bilinear2", "--scheme", "row", "--row", "0")
    assert code == 2 and "out of range" in err
