"""CLI surface: schemas, determinism, exit codes."""

import csv
import io
import json

import pytest

from cuemoments.cli import main


def _run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, out


def test_v_exact_row(capsys):
    rc, out = _run(capsys, "v", "--s", "0", "--z-min", "1", "--z-max", "1",
                   "--points", "1")
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["z", "v", "v_prime", "v_double_prime", "residual",
                      "route"]
    z, v, vp, vpp, res, route = rows[1]
    assert float(v) == -0.5 and float(vp) == -0.5 and float(vpp) == 0.0
    assert abs(float(res)) <= 1e-12
    assert route == "exact"


def test_v_route_triangulation(capsys):
    common = ["v", "--s", "1", "--z-min", "0.5", "--z-max", "5",
              "--points", "5"]
    rc1, out1 = _run(capsys, *common, "--route", "bessel")
    rc2, out2 = _run(capsys, *common, "--route", "ode")
    assert rc1 == rc2 == 0
    r1 = list(csv.reader(io.StringIO(out1)))[1:]
    r2 = list(csv.reader(io.StringIO(out2)))[1:]
    for a, b in zip(r1, r2):
        assert abs(float(a[1]) - float(b[1])) <= 1e-8


def test_invalid_s_exit_code(capsys):
    rc = main(["v", "--s", "-0.6"])
    err = capsys.readouterr().err
    assert rc == 2
    assert "s must exceed -1/2" in err


def test_moment_closed_form(capsys):
    rc, out = _run(capsys, "moment", "--s", "0", "--h-re", "0.25")
    assert rc == 0
    row = list(csv.reader(io.StringIO(out)))[1]
    assert abs(float(row[3]) - 1.0) <= 1e-6


def test_moment_json_schema(capsys):
    rc, out = _run(capsys, "moment", "--s", "1", "--h-re", "0",
                   "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    assert list(doc)[:3] == ["config", "columns", "rows"]
    assert doc["config"]["s"] == 1.0
    assert abs(doc["rows"][0][3] - 1.0) <= 1e-10
    # quad_error present for every numeric output
    assert "quad_error" in doc["columns"]


def test_moment_invalid_h(capsys):
    rc = main(["moment", "--s", "1", "--h-re", "2.5"])
    assert rc == 2


def test_determinism(capsys):
    argv = ["v", "--s", "0.7", "--z-min", "0.5", "--z-max", "3",
            "--points", "7"]
    _, out1 = _run(capsys, *argv)
    _, out2 = _run(capsys, *argv)
    assert out1 == out2


def test_convergence_ratios(capsys):
    rc, out = _run(capsys, "convergence", "--s", "1", "--z", "2",
                   "--n", "10,20,40")
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out)))[1:]
    assert len(rows) == 3
    for row in rows[1:]:
        assert 1.7 <= float(row[4]) <= 2.3


def test_accept_single(capsys):
    rc, out = _run(capsys, "accept", "--only", "acc01")
    assert rc == 0
    assert "acc01 PASS" in out


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.csv"
    rc = main(["v", "--s", "0", "--z-min", "1", "--z-max", "1",
               "--points", "1", "--output", str(path)])
    capsys.readouterr()
    assert rc == 0
    assert path.read_text().startswith("z,v,")


def test_config_file_overrides_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg"
    cfg.write_text("points=2\n")
    rc, out = _run(capsys, "--config", str(cfg), "v", "--s", "0",
                   "--z-min", "1", "--z-max", "2")
    assert rc == 0
    assert len(list(csv.reader(io.StringIO(out)))) == 3  # header + 2 rows
