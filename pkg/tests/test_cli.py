import json
import math
import subprocess
import sys

import numpy as np
import pytest

from trafficlaw import cli
from trafficlaw.cli import main, parse_n_grid
from trafficlaw.dataio import RunManifest, dumps_network, loads_network


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_writes_network_and_manifest(tmp_path, capsys):
    out = tmp_path / "net.json"
    code, _, _ = run(capsys, "gen", "--n", "16", "--i", "1", "--s", "2", "--d", "1",
                     "--seed", "4", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["n"] == 16 and len(doc["nodes"]) == 16 and len(doc["sessions"]) == 16
    assert all(len(p) == 2 for p in doc["nodes"])
    net, sessions = loads_network(out.read_text())
    assert dumps_network(net, sessions) == out.read_text()
    manifest = RunManifest.read(tmp_path / "net.json.manifest.json")
    assert manifest.command == "gen" and manifest.seed == 4
    assert manifest.outputs == [str(out)] and manifest.config["n"] == 16


def test_gen_is_reproducible_from_manifest(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "gen", "--n", "20", "--s", "1.5", "--seed", "9", "--out", str(a))
    cfg = RunManifest.read(tmp_path / "a.json.manifest.json").config
    run(capsys, "gen", "--n", str(cfg["n"]), "--i", str(cfg["i"]), "--s", str(cfg["s"]),
        "--d", str(cfg["d"]), "--seed", "9", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [
    ["gen", "--n", "8", "--s", "-1"],
    ["gen", "--n", "1"],
    ["gen"],
    ["simulate", "--n-grid", ""],
    ["simulate", "--n-grid", "64", "--lambda", "cubic"],
    ["scaling", "--n-grid", "256"],
    ["scaling", "--n-grid", "64,128,256", "--regime", "const:1:1"],
    ["scaling", "--n-grid", "64,128,256", "--theory", "x"],
    ["steele", "--n-values", "32,64"],
    ["nonsense"],
])
def test_usage_errors(argv, capsys):
    with_exit = None
    try:
        with_exit = main(argv)
    except SystemExit as exc:  # argparse reports its own usage errors this way
        with_exit = exc.code
    capsys.readouterr()
    assert with_exit == 2


def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--n-grid", "32,64", "--i", "1", "--s", "1",
                       "--d", "1", "--replicates", "2", "--seed", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,seed,total_load,emst_sum,psi_const,psi_large,sum_r,wall_time"
    assert [ln.split(",")[:2] for ln in lines[1:]] == [["32", "3"], ["32", "4"], ["64", "3"], ["64", "4"]]
    _, again, _ = run(capsys, "simulate", "--n-grid", "32,64", "--i", "1", "--s", "1",
                      "--d", "1", "--replicates", "2", "--seed", "3", "--threads", "1")
    strip = lambda text: [ln.rsplit(",", 1)[0] for ln in text.splitlines()]  # noqa: E731
    assert strip(out) == strip(again)


def test_simulate_json(capsys):
    code, out, _ = run(capsys, "simulate", "--n-grid", "16", "--json")
    assert code == 0
    rows = json.loads(out)["samples"]
    assert rows[0]["n"] == 16 and set(rows[0]) >= {"total_load", "psi_const", "sum_r"}


@pytest.mark.parametrize("argv,expected", [
    (["--lambda", "const", "--i", ".5", "--s", ".5", "--d", ".5"], "Omega(n^2)  law=Metcalfe"),
    (["--lambda", "const", "--i", "0", "--s", "3", "--d", "3"], "Omega(n)  law=Sarnoff"),
    (["--lambda", "const", "--i", "0", "--s", "1", "--d", "3"], "Omega(n^{3/2} * log(n)^{-1/2})  law=Other"),
    (["--lambda", "linear", "--i", ".5", "--s", "1", "--d", ".5"], "Omega(n^3)  law=Cube"),
    (["--lambda", "const", "--s", "2", "--d", "2"], "Omega(n * log(n))  law=Odlyzko"),
])
def test_theory_golden(argv, expected, capsys):
    code, out, _ = run(capsys, "theory", *argv)
    assert code == 0 and out == expected + "\n"


def test_theory_json(capsys):
    _, out, _ = run(capsys, "theory", "--i", "1", "--s", "1", "--d", "3", "--json")
    doc = json.loads(out)
    assert doc == {"order": "Omega(n^{3/2} * log(n)^{-1/2})", "law": "Other",
                   "n_exp": "3/2", "log_exp": "-1/2"}


def test_scaling_pass_lines(capsys):
    code, out, _ = run(capsys, "scaling", "--n-grid", "128:1024", "--regime", "const:0:3:3",
                       "--replicates", "2")
    assert code == 0
    assert out.startswith("PASS regime=const:0:3:3 theory=Omega(n) law=Sarnoff slope=")


def test_scaling_injected_mismatch(capsys):
    code, out, _ = run(capsys, "scaling", "--n-grid", "64:256", "--regime", "const:0.5:0.5:0.5",
                       "--theory", "1", "--replicates", "1", "--json")
    assert code == 1
    (res,) = json.loads(out)["results"]
    assert res["passed"] is False and res["theory"] == "Omega(n)"
    assert res["slope"] == pytest.approx(1.0, abs=0.15)


def test_fit_table(tmp_path, capsys):
    n = np.arange(10, 161, 10)
    path = tmp_path / "series.csv"
    path.write_text("n,value\n" + "".join(f"{k},{float(0.094 * k * k + 74.65)!r}\n" for k in n))
    code, out, _ = run(capsys, "fit", str(path))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "law,a,b,c,d,r2,adj_r2"
    rows = {ln.split(",")[0]: ln.split(",") for ln in lines[1:]}
    assert set(rows) == {"Sarnoff", "Odlyzko", "Metcalfe", "Cube"}
    assert rows["Sarnoff"][3] == rows["Sarnoff"][4] == ""  # absent coefficients blank
    assert float(rows["Metcalfe"][1]) == pytest.approx(0.094, rel=1e-6)
    assert float(rows["Metcalfe"][3]) == pytest.approx(74.65, rel=1e-6)


def test_fit_errors(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("n,value\n1,2\n2,oops\n")
    code, _, err = run(capsys, "fit", str(bad))
    assert code == 3 and "line 3" in err
    header = tmp_path / "header.csv"
    header.write_text("n,value\n")
    code, _, err = run(capsys, "fit", str(header))
    assert code == 3 and "underdetermined fit" in err
    code, _, err = run(capsys, "fit", str(tmp_path / "missing.csv"))
    assert code == 3 and "missing.csv" in err


def _write_points(path, pts):
    path.write_text("x,y\n" + "".join(f"{float(x)!r},{float(y)!r}\n" for x, y in pts))


def test_geo(tmp_path, capsys):
    ax = (np.arange(10) + 0.5) / 10
    lattice = tmp_path / "lattice.csv"
    _write_points(lattice, [(x, y) for x in ax for y in ax])
    code, out, _ = run(capsys, "geo", str(lattice), "--grid", "10")
    assert code == 0 and "cv=0 " in out and "consistent with uniform (g=0)" in out

    rnd = tmp_path / "random.csv"
    _write_points(rnd, np.random.default_rng(0).random((10**4, 2)))
    _, out, _ = run(capsys, "geo", str(rnd), "--json")
    doc = json.loads(out)
    assert doc["coefficient_of_variation"] == pytest.approx(0.1, rel=0.25)
    assert doc["verdict"] == "consistent with uniform (g=0)"

    lump = tmp_path / "lump.csv"
    _write_points(lump, [(0.0, 0.0)] * 99 + [(1.0, 1.0)])
    _, out, _ = run(capsys, "geo", str(lump), "--grid", "10", "--json")
    doc = json.loads(out)
    assert doc["verdict"] == "non-uniform"
    # counts: 99 in one cell, 1 in the opposite corner, 98 empty; mean 1
    assert doc["coefficient_of_variation"] == pytest.approx(math.sqrt((98**2 + 98) / 100), rel=1e-12)

    _, out, _ = run(capsys, "geo", str(lump), "--threshold", "100")
    assert "consistent with uniform" in out

    garbage = tmp_path / "garbage.csv"
    garbage.write_text("x,y\n1,2\nfoo,bar\n")
    code, _, _ = run(capsys, "geo", str(garbage))
    assert code == 3


def test_geo_single_cell_cv(tmp_path, capsys):
    one = tmp_path / "one.csv"
    # the bounding box is set by two corner points; everything else sits in one cell
    _write_points(one, [(0.0, 0.0), (1.0, 1.0)] + [(0.01, 0.01)] * 10**4)
    _, out, _ = run(capsys, "geo", str(one), "--grid", "10", "--json")
    cv = json.loads(out)["coefficient_of_variation"]
    assert cv == pytest.approx(math.sqrt(99), rel=1e-3)


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# gen defaults\nn = 8\nseed = 5\ns = 1.5\n")
    out = tmp_path / "net.json"
    assert main(["gen", "--config", str(cfg), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["n"] == 8 and doc["seed"] == 5
    assert main(["gen", "--config", str(cfg), "--n", "12", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["n"] == 12 and doc["seed"] == 5
    cfg.write_text("bogus = 1\n")
    capsys.readouterr()
    assert main(["gen", "--config", str(cfg), "--n", "4"]) == 2


def test_steele_command(capsys):
    code, out, _ = run(capsys, "steele", "--n-values", "64,128", "--replicates", "2")
    assert code == 0
    assert out.splitlines()[-1].startswith("max/min=")


def test_internal_error_exit_code(monkeypatch, capsys):
    def broken(args):
        raise AssertionError("boom")
    monkeypatch.setattr(cli, "cmd_theory", broken)
    parser = cli.build_parser
    monkeypatch.setattr(cli, "build_parser", lambda: _rebind(parser(), "theory", broken))
    code, _, err = run(capsys, "theory")
    assert code == 4 and "boom" in err


def _rebind(parser, name, func):
    parser._subparsers._group_actions[0].choices[name].set_defaults(func=func)
    return parser


def test_parse_n_grid():
    assert parse_n_grid("256:4096") == [256, 512, 1024, 2048, 4096]
    assert parse_n_grid("100:1000:10") == [100, 1000]
    assert parse_n_grid("5, 7,9") == [5, 7, 9]
    for bad in ("", "1:10", "10:5", "4:8:1"):
        with pytest.raises(cli.UsageError):
            parse_n_grid(bad)


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "trafficlaw.cli", "theory", "--i", "0", "--s", "3", "--d", "3"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "Omega(n)  law=Sarnoff\n"
