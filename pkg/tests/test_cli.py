import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from qdlie.cli import run


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def matrix_file(tmp_path):
    def make(rows, name="d.json"):
        p = tmp_path / name
        p.write_text(json.dumps({"dim": len(rows), "rows": rows}))
        return str(p)

    return make


def test_classify_matrix(matrix_file):
    code, out, _ = call(["classify", "--matrix", matrix_file([[1.0, 0.0], [0.0, -1.0]])])
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "qdlie/1" and doc["kind"] == "classify"
    rep = doc["result"]["report"]
    assert rep["quasidiagonal"]["value"] == "YES"
    assert rep["strongly_quasidiagonal"]["value"] == "NO"
    assert doc["tolerances"]["eps_spec"] == pytest.approx(1e-9 * 2 ** 0.5)


def test_classify_catalog_and_structure(tmp_path):
    code, out, _ = call(["classify", "--catalog", "S4"])
    assert code == 0
    assert json.loads(out)["result"]["report"]["quasidiagonal"]["value"] == "UNKNOWN"
    p = tmp_path / "h.json"
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
    p.write_text(json.dumps({"structure_constants": c.tolist()}))
    for flag in ("--structure", "--matrix"):
        code, out, _ = call(["classify", flag, str(p)])
        assert code == 0
        assert json.loads(out)["result"]["report"]["nilpotent"]["value"] == "YES"


def test_type_i_deny(matrix_file):
    code, out, _ = call(["classify", "--matrix", matrix_file([[1.0, 0.0], [0.0, -1.0]]), "--type-i", "deny"])
    assert json.loads(out)["result"]["report"]["strongly_quasidiagonal"]["value"] == "UNKNOWN"


def test_input_errors(tmp_path, matrix_file):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2,\n "rows": [[1, 2], [3 4]]}')
    code, out, err = call(["classify", "--matrix", str(bad)])
    assert code == 1 and out == ""
    assert "line 2" in err and "column" in err
    code, _, err = call(["classify", "--matrix", matrix_file([[1.0, 2.0]])])
    assert code == 1
    code, _, err = call(["classify", "--matrix", str(tmp_path / "missing.json")])
    assert code == 1 and "cannot read" in err
    code, _, err = call(["classify", "--catalog", "nope"])
    assert code == 1 and "mautner" in err
    assert call(["enumerate", "--dim", "-2"])[0] == 1
    assert call(["frobnicate"])[0] == 1
    code, _, _ = call(["classify", "--matrix", matrix_file([[float("nan")]])])
    assert code == 1


def test_flow_with_oracle_and_csv(tmp_path, matrix_file):
    csv = tmp_path / "traj.csv"
    code, out, _ = call(["flow", "--matrix", matrix_file([[-1.0, 0.0], [0.0, -2.0]]), "--oracle",
                         "--csv", str(csv), "--t-end", "1", "--step", "0.25"])
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["spectral"]["kind"] == "ATTRACTOR_ZERO"
    assert doc["result"]["agreement"] is True
    lines = csv.read_text().splitlines()
    assert lines[0] == "t,v_1,v_2,log_norm"
    assert len(lines) == 6
    last = [float(x) for x in lines[-1].split(",")]
    assert last[1] == pytest.approx(np.exp(-1.0)) and last[3] == pytest.approx(-1.0)


def test_enumerate(tmp_path):
    csv = tmp_path / "classes.csv"
    code, out, _ = call(["enumerate", "--dim", "3", "--csv", str(csv)])
    doc = json.loads(out)
    assert code == 0 and doc["result"]["count"] == len(doc["result"]["classes"])
    assert len(doc["result"]["non_quasidiagonal"]) == 1
    assert csv.read_text().splitlines()[0] == "n0,n_a,n_b,non_quasidiagonal"


def test_oplab_statuses_map_to_exit_codes(tmp_path):
    out_path = tmp_path / "w.json"
    code, out, _ = call(["oplab", "witness", "--N", "512", "-o", str(out_path)])
    assert code == 0 and out == ""
    assert json.loads(out_path.read_text())["result"]["status"] == "PASS"
    code, out, _ = call(["oplab", "index", "--symbol", "const:0", "--L", "10", "--N", "64"])
    assert code == 3 and json.loads(out)["result"]["status"] == "INCONCLUSIVE"
    code, out, _ = call(["oplab", "compactness", "--symbol", "logistic", "--N", "512"])
    assert code == 2
    code, out, _ = call(["oplab", "covariance", "--N", "1024"])
    assert code == 0
    code, _, err = call(["oplab", "covariance", "--N", "1024", "--shift", "20"])
    assert code == 1 and "L/4" in err
    code, _, _ = call(["oplab", "witness", "--symbol", "sech", "--N", "512"])
    assert code == 1


def test_oplab_unitary_csv(tmp_path):
    csv = tmp_path / "u.csv"
    code, out, _ = call(["oplab", "unitary", "--trials", "10", "--csv", str(csv)])
    assert code == 0
    doc = json.loads(out)
    assert doc["tolerances"]["unitary_defect"] == 1e-3
    assert doc["result"]["checks"]["fourier_symbol"]["status"] == "PASS"
    assert len(csv.read_text().splitlines()) == 11


def test_catalog_command():
    code, out, _ = call(["catalog"])
    doc = json.loads(out)
    assert code == 0 and doc["result"]["names"][0] == "S2"
    code, out, _ = call(["catalog", "S3(2)"])
    assert json.loads(out)["result"]["params"] == {"sigma": 2.0}


def test_output_is_sorted_and_deterministic(matrix_file):
    path = matrix_file([[0.0, 1.0], [-1.0, 0.0]])
    first = call(["classify", "--matrix", path])[1]
    assert first == call(["classify", "--matrix", path])[1]
    assert first == json.dumps(json.loads(first), sort_keys=True, indent=2) + "\n"


def test_console_entry_point_and_threads(matrix_file):
    env = {**os.environ, "QDLIE_THREADS": "1"}
    proc = subprocess.run([sys.executable, "-m", "qdlie", "enumerate", "--dim", "2"],
                          capture_output=True, text=True, env=env, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["count"] == 4
