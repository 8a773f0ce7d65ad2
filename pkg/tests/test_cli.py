from __future__ import annotations

import copy
import io
import json
import subprocess
import sys
from importlib import resources

import pytest

from superpot.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def report(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return json.loads(out)


def test_analyze_quadric_char3():
    rep = report("analyze", "quadric", "--char", "3")
    (pt,) = rep["points"]
    assert pt["isolated"] == "Isolated" and pt["milnor"] == 3
    assert pt["local_fingerprint"]["radical_filtration"] == [1, 1, 1]
    assert rep["koszul"][0]["dims"] == [3, 0, 0, 0]


def test_analyze_quadric_char2():
    rep = report("analyze", "quadric", "--char", "2")
    assert rep["jacobian_zero"] and rep["points"] == [] and rep["jac_isol_dim"] == 0


def test_analyze_clifford2():
    rep = report("analyze", "clifford2", "--char", "0")
    assert rep["jac_isol_dim"] == 3
    assert rep["bounds"]["ok"]


def test_analyze_inline_with_mf():
    rep = report("analyze", "z + 1/z", "--mf")
    assert [m["end_even"] + m["end_odd"] for m in rep["mf"]] == [2, 2]
    assert all(m["tensor_parity"] == [1, 1] for m in rep["mf"])


def test_analyze_candidates_on_positive_dimensional_locus(tmp_path):
    pts = tmp_path / "pts.json"
    pts.write_text(json.dumps([[1, 1], [-2, 1], ["-1/2", "-1/2"]]))
    rep = report("analyze", "cubic", "--points", str(pts))
    assert rep["krull_dim"] == 1 and rep["strategy"] == "candidates"
    iso = [p for p in rep["points"] if p["isolated"] == "Isolated"]
    assert [p["coords"] for p in iso] == [["1", "1"]]


def test_potential_from_file(tmp_path):
    f = tmp_path / "w.txt"
    f.write_text("x + y + 1/(x*y)\n")
    assert report("analyze", str(f), "--betti", "3")["jac_isol_dim"] == 3


def test_decompose_qh():
    rep = report("decompose-qh", "cubic-surface")
    assert sorted(f["dim"] for f in rep["factors"]) == [1, 8] and rep["orthogonal"]
    rep3 = report("decompose-qh", "cubic-surface", "--char", "3")
    assert [f["dim"] for f in rep3["factors"]] == [9]
    cp2 = report("decompose-qh", "cp2", "--char", "3")
    assert cp2["fingerprint"]["factors"] == [{"dim": 3, "residue_degree": 1, "radical_filtration": [1, 1, 1]}]


def test_decompose_qh_file(tmp_path):
    from superpot.verify import cubic_qh

    f = tmp_path / "alg.json"
    f.write_text(json.dumps(cubic_qh().to_json()))
    rep = report("decompose-qh", str(f))
    assert sorted(x["dim"] for x in rep["factors"]) == [1, 8] and "orthogonal" not in rep


def test_mutate_commands():
    rep = report("mutate", "bl4", "--chart", "uv")
    assert rep["charts"]["uv"]["new_points"] == [["-1", "-1"]]
    rep = report("mutate", "bl4", "--verify-figure")
    assert rep["verify_figure"]["ok"] and rep["accounting"]["total"] == 7
    rep = report("mutate", "bl4", "--periods", "4", "--against", "xy")
    assert all(rep["periods_against"]["equal"].values())


def test_exit_codes(tmp_path):
    assert call("analyze", "x + * y")[0] == 2
    assert call("analyze", "x + 1/x", "--char", "6")[0] == 2
    assert call("analyze", "(1+x)/(1-x)")[0] == 2
    assert call("frobnicate")[0] == 2
    assert call("analyze", "bl4", "--char", "7", "--strategy", "exhaustive", "--brute-force-cap", "3")[0] == 3
    assert call("analyze", "clifford2", "--gb-degree-cap", "1")[0] == 3
    assert call("analyze", "clifford2", "--truncation", "0")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("decompose-qh", str(bad))[0] == 2


def test_corrupted_catalog_names_failures(tmp_path):
    data = json.loads(resources.files("superpot").joinpath("data/figure1.json").read_text())
    bad = copy.deepcopy(data)
    row = bad["rows"]["xy"]
    src = next(iter(row))
    row[src][1] = row[src][1] + " + 1"
    path = tmp_path / "cat.json"
    path.write_text(json.dumps(bad))
    code, out, _ = call("verify-paper", "--filter", "mutation", "--catalog", str(path), "--format", "text")
    assert code == 4
    assert out.startswith("FAIL criterion 9 (mutation)") and "Figure-1 checks failed" in out
    code, out, _ = call("mutate", "--verify-figure", "--catalog", str(path))
    assert code == 4 and not json.loads(out)["verify_figure"]["ok"]


def test_verify_filter_subset():
    code, out, _ = call("verify-paper", "--filter", "clifford", "--format", "text")
    assert code == 0 and out.splitlines()[0].startswith("PASS criterion 1")
    assert len(out.splitlines()) == 1
    assert call("verify-paper", "--filter", "nothing-matches")[0] == 2


@pytest.mark.parametrize("argv", [["analyze", "bl4", "--char", "5"], ["mutate", "--chart", "st"], ["decompose-qh", "cp3"]])
def test_reports_are_byte_identical(argv):
    a = call(*argv)
    b = call(*argv)
    assert a == b and a[0] == 0


def test_text_format_renders():
    code, out, _ = call("analyze", "clifford1", "--format", "text")
    assert code == 0 and "jac_isol_dim: 2" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "superpot", "analyze", "clifford1"], capture_output=True, text=True, timeout=120
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["jac_isol_dim"] == 2
