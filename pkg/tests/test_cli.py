import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from ppsur import scenario as sc
from ppsur.cli import EXIT_INVALID, EXIT_OK, EXIT_PROPERTY_FAILURE, main
from ppsur.figures import FIG1_COLUMNS, FIG2_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def scenario_file(tmp_path, kind, **params):
    f = tmp_path / f"{kind}.json"
    f.write_text(sc.Scenario(kind, params).to_json())
    return str(f)


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=float)


def test_fig1_default(capsys):
    code, out, _ = run(capsys, "fig1")
    header, data = read_csv(out)
    assert code == EXIT_OK and header == list(FIG1_COLUMNS) and data.shape[0] == 721
    assert all(len(v.split("e")[0].replace("-", "").replace(".", "")) <= 12
               for v in out.splitlines()[1].split(","))


def test_fig1_bit_identical_reruns(tmp_path, capsys):
    f = scenario_file(tmp_path, "fig1", grid={"n": 41})
    outs = [run(capsys, "fig1", "--scenario", f)[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_fig2_and_identity_w(tmp_path, capsys):
    code, out, _ = run(capsys, "fig2")
    header, data = read_csv(out)
    assert code == EXIT_OK and header == list(FIG2_COLUMNS)
    f = scenario_file(tmp_path, "fig2", identity_w=True, grid={"n": 11})
    code, out, _ = run(capsys, "fig2", "--scenario", f)
    _, data = read_csv(out)
    assert code == EXIT_OK
    assert np.allclose(data[:, 1], 1) and np.allclose(data[:, 2:], 1)


def test_obs2(capsys):
    code, out, _ = run(capsys, "obs2")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["std_pps_A"] <= 1e-12 and rep["std_pps_B"] <= 1e-12


def test_purity_demo(capsys):
    code, out, _ = run(capsys, "purity-demo", "--seed", "3")
    cases = json.loads(out)["cases"]
    assert code == EXIT_OK
    corr = [c for c in cases if c["case"] == "counterexample"][0]["result"]
    assert corr["verdict"] == "mixed" and corr["gap_values"][0] <= 1e-12


def test_verify_and_mutation(capsys):
    code, out, _ = run(capsys, "verify", "--samples", "5")
    assert code == EXIT_OK and json.loads(out)["all_passed"]
    code, out, err = run(capsys, "verify", "--samples", "20", "--inject-bug")
    assert code == EXIT_PROPERTY_FAILURE and not json.loads(out)["all_passed"]
    assert "check failed" in err


def test_search(tmp_path, capsys):
    f = scenario_file(tmp_path, "search", objective="intelligent-residual-min", restarts=2)
    code, out, _ = run(capsys, "search", "--scenario", f)
    rep = json.loads(out)
    assert code == EXIT_OK and rep["best_objective"] <= 1e-6
    assert len(rep["trace"]) == 2


def test_eval(tmp_path, capsys):
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    f = scenario_file(tmp_path, "eval", relation="rhur", A=sx, B=sy, psi=np.array([1, 0]))
    code, out, _ = run(capsys, "eval", "--scenario", f)
    res = json.loads(out)["result"]
    assert code == EXIT_OK and res["lhs"] == pytest.approx(1) and res["rhs_total"] == pytest.approx(1)
    f = scenario_file(tmp_path, "eval", relation="weak_value", A=np.diag([1, -1]),
                      psi=np.array([1, 1]) / np.sqrt(2), phi=np.array([1, 0]))
    code, out, _ = run(capsys, "eval", "--scenario", f)
    assert json.loads(out)["result"] == pytest.approx([1, 0])
    f = scenario_file(tmp_path, "eval", relation="rhur", A=sx)
    assert run(capsys, "eval", "--scenario", f)[0] == EXIT_INVALID


def test_out_file(tmp_path, capsys):
    target = tmp_path / "fig1.csv"
    code, out, _ = run(capsys, "fig1", "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_text().startswith(",".join(FIG1_COLUMNS))
    code, _, err = run(capsys, "fig1", "--out", str(tmp_path / "no" / "dir.csv"))
    assert code == EXIT_INVALID and "cannot write" in err


def test_invalid_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"version": 1, "kind": "fig1", "parameters": {"nope": 1}}))
    assert run(capsys, "fig1", "--scenario", str(bad))[0] == EXIT_INVALID
    assert run(capsys, "fig2", "--scenario", str(bad))[0] == EXIT_INVALID
    assert run(capsys, "fig1", "--samples", "3")[0] == EXIT_INVALID
    assert run(capsys, "fig1", "--scenario", str(tmp_path / "missing.json"))[0] == EXIT_INVALID
    with pytest.raises(SystemExit) as exc:
        main(["unknown"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ppsur", "obs2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "std_pps_A" in proc.stdout
