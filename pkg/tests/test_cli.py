from __future__ import annotations

import json
import subprocess
import sys

import pytest

from crystalwalk.cli import main
from crystalwalk.serialize import loads_graph, parse_dot


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_gen_writes_graph(tmp_path, capsys):
    path = tmp_path / "g.json"
    code, _, err = run(capsys, "gen", "--type", "A2", "--weight", "1,1", "--depth", "10", "--out", str(path))
    assert code == 0 and "8 nodes" in err
    assert len(loads_graph(path.read_text())) == 8


def test_gen_is_deterministic(capsys):
    _, a, _ = run(capsys, "gen", "--type", "C2~1", "--weight", "1,0,0", "--depth", "4")
    _, b, _ = run(capsys, "gen", "--type", "C2~1", "--weight", "1,0,0", "--depth", "4")
    assert a == b and loads_graph(a).depth_limit == 4


def test_default_depth_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("CRYSTAL_DEPTH_DEFAULT", "2")
    _, out, _ = run(capsys, "gen", "--type", "A2~1", "--weight", "1,0,0")
    assert loads_graph(out).depth_limit == 2
    monkeypatch.setenv("CRYSTAL_DEPTH_DEFAULT", "x")
    assert run(capsys, "gen", "--type", "A2~1", "--weight", "1,0,0")[0] == 2


@pytest.mark.parametrize("argv", [
    ["gen", "--type", "Q3", "--weight", "1"],
    ["gen", "--type", "A2", "--weight", "1,a"],
    ["gen", "--type", "A2", "--weight", "1"],
    ["gen", "--type", "A2", "--weight=-1,0"],
    ["gen", "--type", "A2~1", "--weight", "1,0,0", "--depth", "full"],
    ["dot", "/nonexistent/g.json"],
    ["perfect", "--type", "C2~1", "--reversed"],
    ["perfect", "--type", "A2~1", "--walks"],
    ["tensor-check", "--type", "A2~1", "--walk", "1,1"],
    ["sweep", "--config", "/nonexistent.ini"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify"])
    assert exc.value.code == 2


def test_pipeline(tmp_path, capsys):
    path = str(tmp_path / "a3.json")
    assert run(capsys, "gen", "--type", "A3", "--weight", "0,1,0", "--depth", "full", "--out", path)[0] == 0
    code, out, _ = run(capsys, "verify", path, "--theorem", "global")
    assert code == 0 and jsonl(out)[0]["status"] == "pass"
    code, out, _ = run(capsys, "singular", path)
    rows = jsonl(out)
    assert code == 0 and rows and all(set(r) == {"id", "depth", "eps", "singular_parent"} for r in rows)
    target = rows[-1]["id"]
    code, out, _ = run(capsys, "walks", path, "--to", target)
    assert code == 0 and all(r["to"] == target for r in jsonl(out))
    code, out, _ = run(capsys, "dot", path)
    assert code == 0 and len(parse_dot(out).nodes) == 6


def test_verify_reports_violations(tmp_path, capsys):
    path = str(tmp_path / "b2.json")
    run(capsys, "gen", "--type", "B2", "--weight", "0,1", "--depth", "full", "--out", path)
    code, out, _ = run(capsys, "verify", path, "--theorem", "global")
    assert code == 1 and jsonl(out)[0]["status"] == "fail"
    code, _, _ = run(capsys, "verify", path, "--theorem", "lemma-eps")
    assert code == 0


def test_perfect_dump_and_walks(capsys):
    code, out, _ = run(capsys, "perfect", "--type", "A2~1")
    doc = json.loads(out)
    assert code == 0 and len(doc["nodes"]) == 3 and doc["weight"] is None
    code, out, _ = run(capsys, "perfect", "--type", "A2~1", "--walks", "--from-color", "1", "--len", "3")
    assert [r["walk"] for r in jsonl(out)] == [[1, 2, 0]]
    code, out, _ = run(capsys, "perfect", "--type", "A2~1", "--reversed", "--dot")
    assert code == 0 and len(parse_dot(out).edges) == 3


def test_tensor_check(capsys):
    code, out, _ = run(capsys, "tensor-check", "--type", "C2~1", "--walk", "1,2,1,0")
    assert code == 0 and jsonl(out)[0]["pass"] is True
    code, out, _ = run(capsys, "tensor-check", "--type", "B3~1", "--walk", "1,2,3")
    assert code == 1 and jsonl(out)[0]["clauses"]["hw_check"] is False


def test_sweep_small_config(tmp_path, capsys):
    cfg = tmp_path / "grid.ini"
    cfg.write_text("[finite]\ntypes = A2, C2\nweights = fundamental\ndepth = full\n"
                   "[affine]\ntypes = C2~1\nmax_level = 1\ndepth = 4\n"
                   "[sweep]\ncheckers = axioms, lemma-eps, type\n")
    code, out, err = run(capsys, "sweep", "--config", str(cfg))
    rows = jsonl(out)
    assert code == 0 and "0 failing" in err
    assert {r["theorem"] for r in rows} >= {"axioms", "lemma-eps", "thm-type", "weyl-dimension"}


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "crystalwalk", "perfect", "--type", "C2~1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["type"] == "C2~1"
