import json
import subprocess
import sys

import pytest

from evengc import cli, surgery
from evengc.linalg import read_sms


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dims_text(capsys):
    code, out, _ = run(capsys, "dims", "--k", "1..5")
    assert code == 0
    rows = [line.split() for line in out.strip().splitlines()[1:]]
    assert [(int(r[0]), int(r[2])) for r in rows] == [(1, 0), (2, 1), (3, 0), (4, 0), (5, 1)]


def test_dims_json(capsys):
    code, out, _ = run(capsys, "dims", "--k", "4", "--json")
    assert code == 0
    # graph counts per excess, not cohomology
    assert json.loads(out) == {"k": 4, "dims_by_excess": [0, 1, 2, 0, 0], "dim_H0": 0, "dim_Ak": 0}


@pytest.mark.parametrize("argv", [["dims", "--k", "0"], ["dims", "--k", "x"], ["dims"], ["nonsense"]])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_cap_exceeded_is_usage_error(capsys):
    code, _, err = run(capsys, "dims", "--k", "6")
    assert code == 2
    assert "cap" in err or "vertices" in err


def test_pairing_w4(capsys):
    code, out, _ = run(capsys, "pairing", "--def", "K4", "--test", "K4", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["I"] == "24" and rep["aut_order"] == 24
    assert rep["z_k"] == ["1"] and rep["sign"] == 1


def test_pairing_prism_text(capsys):
    code, out, _ = run(capsys, "pairing", "--def", "prism", "--test", "K33")
    assert code == 0
    assert "I(test) = 0" in out
    assert "class is zero" in out


def test_pairing_inline_and_file(capsys, tmp_path):
    text = "v=4; e=(1,2)(1,3)(1,4)(2,3)(2,4)(3,4)"
    path = tmp_path / "g.txt"
    path.write_text(text)
    code, out, _ = run(capsys, "pairing", "--def", str(path), "--test", text, "--json")
    assert code == 0 and json.loads(out)["I"] == "24"


def test_pairing_bad_inputs(capsys):
    code, _, err = run(capsys, "pairing", "--def", "K4", "--test", "prism")
    assert code == 2 and "expected" in err
    code, _, err = run(capsys, "pairing", "--def", "K4", "--test", "v=4; e=(1,2)(1,3)(1,4)(2,3)(2,4)(3;4)")
    assert code == 2 and "position 34" in err
    code, _, _ = run(capsys, "pairing", "--def", "K4", "--test", "K4", "--d", "5")
    assert code == 2


def test_link_hopf(capsys):
    code, out, _ = run(capsys, "link", "--preset", "hopf", "--samples", "50000", "--seed", "3", "--json")
    assert code == 0
    res = json.loads(out)
    assert abs(res["estimate"] - 1) < 0.05
    assert res["seed"] == 3 and res["samples"] == 50000


def test_link_threads_match(capsys):
    outs = []
    for t in ("1", "3"):
        code, out, _ = run(capsys, "link", "--preset", "hopf", "--samples", "140000", "--threads", t, "--json")
        outs.append(json.loads(out))
    assert outs[0] == outs[1]


def test_link_text_and_flags(capsys):
    code, out, _ = run(capsys, "link", "--preset", "hopf", "--samples", "20000", "--standard-orientation")
    assert code == 0 and out.startswith("Lk estimate -")
    code, out, _ = run(capsys, "link", "--preset", "split", "--samples", "20000", "--antithetic")
    assert code == 0


def test_link_borromean_pairs(capsys):
    code, out, _ = run(capsys, "link", "--preset", "borromean", "--p", "2", "--q", "2", "--r", "1",
                       "--pair", "1,3", "--samples", "20000", "--json")
    assert code == 0 and abs(json.loads(out)["estimate"]) < 0.1
    code, _, err = run(capsys, "link", "--preset", "borromean", "--pair", "1,2", "--samples", "2000")
    assert code == 2 and "dimensions" in err
    code, _, _ = run(capsys, "link", "--preset", "borromean", "--pair", "1,1")
    assert code == 2
    code, _, _ = run(capsys, "link", "--preset", "hopf", "--p", "2", "--q", "2")
    assert code == 2
    code, _, _ = run(capsys, "link", "--preset", "hopf", "--samples", "1")
    assert code == 2


def test_canon(capsys):
    code, out, _ = run(capsys, "canon", "--graph", "K4", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["aut_order"] == 24 and not rep["zero"]
    code, out, _ = run(capsys, "canon", "--graph", "K33", "--json")
    assert json.loads(out)["zero"]
    code, out, _ = run(capsys, "canon", "--graph", "v=2; e=(1,2)(1,2)(1,2)")
    assert code == 0 and "zero" in out


def test_basis_json_round_trip(capsys):
    from evengc.graphs import enumerate_basis, parse_graph

    code, out, _ = run(capsys, "basis", "--k", "5", "--json")
    assert code == 0
    items = json.loads(out)
    assert len(items) == 7
    graphs_back = [parse_graph(json.dumps(x)) for x in items]
    assert [g.edges for g in graphs_back] == [c.edges for c in enumerate_basis(5, 0)]


def test_matrix_sms(capsys):
    from evengc.complex import delta_matrix

    code, out, _ = run(capsys, "matrix", "--k", "4", "--excess", "1")
    assert code == 0
    assert read_sms(out) == delta_matrix(4, 1).matrix


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--quick")
    assert code == 0
    assert "skip hopf_linking_mc" in out
    assert out.count("ok   ") == len(cli.SELFTEST_CHECKS) - 1


def test_selftest_full(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert "ok   hopf_linking_mc" in out


def test_selftest_detects_wrong_sign_constant(capsys, monkeypatch):
    monkeypatch.setattr(surgery, "int_b_eta_sign", lambda k, d: -((-1) ** (k * d + k + d - 1)))
    code, out, _ = run(capsys, "selftest", "--quick")
    assert code == 1
    assert "FAIL int_eta_signs" in out


def test_selftest_reports_crash(capsys, monkeypatch):
    def boom():
        raise RuntimeError("broken")

    monkeypatch.setattr(cli, "SELFTEST_CHECKS", [("exploding", boom, False)])
    code, out, _ = run(capsys, "selftest")
    assert code == 1 and "FAIL exploding: broken" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "evengc", "dims", "--k", "2", "--json"], capture_output=True, text=True, timeout=120
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dim_Ak"] == 1
    proc = subprocess.run([sys.executable, "-m", "evengc", "dims", "--k", "0"], capture_output=True, text=True)
    assert proc.returncode == 2
