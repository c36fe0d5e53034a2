import json
import subprocess
import sys

import pytest

from markedgroups import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_dot(tmp_path, capsys):
    dot = tmp_path / "out.dot"
    code, out, _ = run(capsys, "build", "--family", "gamma-k", "--k", "3", "--cycle", "5", "--dot", str(dot))
    assert code == 0
    assert json.loads(out)["result"]["vertices"] == 15
    text = dot.read_text()
    assert text.count("--") == 30


def test_build_free_product_ball(tmp_path, capsys):
    js = tmp_path / "ball.json"
    code, _, _ = run(capsys, "build", "--family", "free-product", "--left", "cyclic:3", "--right", "cyclic:4",
                     "--ball", "2", "--json", str(js))
    assert code == 0
    assert len(json.loads(js.read_text())["vertices"]) == 14


def test_invalid_k(capsys):
    code, _, err = run(capsys, "build", "--family", "gamma-k", "--k", "2", "--cycle", "5")
    assert code == 2 and "k >= 3" in err


def test_missing_shape(capsys):
    code, _, err = run(capsys, "build", "--family", "gamma-k")
    assert code == 2 and "--cycle" in err


@pytest.mark.parametrize("family,m,chi", [("gamma-k", 5, 3), ("delta-k", 5, 4), ("delta-k", 6, 3)])
def test_chi(family, m, chi, capsys, tmp_path):
    js = tmp_path / "rec.json"
    code, out, _ = run(capsys, "chi", "--family", family, "--cycle", str(m), "--json", str(js))
    rec = json.loads(out)
    assert code == 0 and rec["result"]["chi"] == chi
    assert json.loads(open(rec["result"]["certificate_path"]).read())["palette"] == chi


def test_chi_budget_exit(capsys):
    code, out, _ = run(capsys, "chi", "--family", "delta-k", "--k", "5", "--cycle", "11", "--budget", "10")
    assert code == 3 and json.loads(out)["result"]["budget_hit"]


def test_iso(capsys):
    code, out, _ = run(capsys, "iso", "--family", "gamma-k", "--k", "4")
    assert code == 0 and json.loads(out)["result"]["count"] == 0


def test_color_and_analyze(capsys):
    code, out, _ = run(capsys, "color", "--family", "delta-prime-k", "--segment", "200", "--seed", "3")
    assert code == 0 and set(json.loads(out)["result"]["used"]) <= {1, 2, 3, 4}
    code, out, _ = run(capsys, "analyze", "--family", "delta-k", "--cycle", "6")
    assert code == 0 and json.loads(out)["result"]["law_violations"] == []
    code, out, _ = run(capsys, "analyze", "--family", "free-product", "--left", "cyclic:3",
                       "--right", "cyclic:4", "--ball", "2")
    assert json.loads(out)["result"]["is_gallai_tree"] is False
    code, out, _ = run(capsys, "color", "--family", "zxz", "--cycle", "8")
    assert code == 2


def test_sample(capsys):
    code, out, _ = run(capsys, "sample", "--family", "z", "--ball", "30", "--radius", "3", "--seed", "1")
    assert code == 0 and json.loads(out)["result"]["periods"] == []
    code, _, err = run(capsys, "sample", "--family", "z", "--p", "1.5")
    assert code == 2


@pytest.mark.parametrize("table", ["gallai", "iso", "tau-laws"])
def test_reproduce_tables(table, capsys):
    code, out, _ = run(capsys, "reproduce", table)
    assert code == 0
    assert out.splitlines()[0] == ",".join(cli.HEADER)
    assert all(line.endswith("True") for line in out.splitlines()[1:])


def test_headline_byte_stable(tmp_path, capsys):
    paths = []
    for threads in ("1", "3"):
        p = tmp_path / f"h{threads}.csv"
        assert run(capsys, "reproduce", "headline", "--threads", threads, "--csv", str(p))[0] == 0
        paths.append(p.read_bytes())
    assert paths[0] == paths[1]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "markedgroups", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "0.1.0"
