import json
import subprocess
import sys

import pytest

from groupoid_graph import __version__
from groupoid_graph.cli import main
from groupoid_graph.fixtures import example_4_3


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, json.loads(out), err


def test_quotient_graph_example(capsys):
    code, m, err = run(capsys, "quotient-graph", "--fixture", "example-4.3", "--mode", "both")
    assert code == 0
    assert m["outputs"]["sizes"] == [2, 2, 4]
    assert m["outputs"]["adjacency"] == [[1, 0, 1], [0, 1, 1], [1, 1, 2]]
    assert m["provenance"] == "both-agree" and m["flags"] == {"mode": "both"}
    assert m["tool_version"] == __version__
    assert m["inputs"]["digest"].startswith("sha256:")
    assert "[quotient-graph] ok" in err


def test_selfsim_act(capsys):
    code, m, _ = run(capsys, "selfsim", "act", "--fixture", "example-4.6", "--word", "g", "--path", "a")
    assert code == 0 and m["outputs"]["image"] == "c"
    code, m, _ = run(capsys, "selfsim", "act", "--fixture", "example-4.6", "--word", "h g", "--path", "ad")
    assert m["outputs"]["image"] == "db"


def test_selfsim_equiv_and_forest(capsys):
    code, m, _ = run(
        capsys, "selfsim", "equiv", "--fixture", "example-4.6", "--word", "h g", "--other", "v", "--depth", "1"
    )
    assert code == 0
    assert m["outputs"]["equal_to_depth"] is False and m["outputs"]["witness"] == "a"
    code, m, _ = run(capsys, "selfsim", "forest", "--fixture", "example-4.6", "--depth", "2")
    assert m["outputs"]["children"]["d"] == ["db", "dc"]
    assert m["outputs"]["induced_action_valid"] is True


def test_validate_trivial_groupoid(tmp_path, capsys):
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"units": ["u"]}))
    code, m, _ = run(capsys, "validate", str(f))
    assert code == 0 and m["outputs"]["kind"] == "groupoid"


def test_validation_failure_exit_2(tmp_path, capsys):
    bad = {
        "units": ["u"],
        "arrows": [{"id": x, "src": "u", "rng": "u"} for x in "eab"],
        "compose": [
            ["e", "e", "e"], ["e", "a", "a"], ["e", "b", "b"],
            ["a", "e", "a"], ["b", "e", "b"],
            ["a", "a", "e"], ["b", "b", "e"], ["a", "b", "a"], ["b", "a", "b"],
        ],
    }
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(bad))
    code, m, err = run(capsys, "validate", str(f))
    assert code == 2 and m["status"] == "validation-failure"
    assert "associativity" in err


def test_precondition_is_exit_2(capsys):
    code, m, _ = run(capsys, "ktheory", "--adjacency", "[[0, 0], [1, 1]]")
    assert code == 2


def test_malformed_exit_4(tmp_path, capsys):
    f = tmp_path / "broken.json"
    f.write_text("{not json")
    assert run(capsys, "orbits", str(f))[0] == 4
    assert run(capsys, "orbits", str(tmp_path / "missing.json"))[0] == 4
    assert run(capsys, "orbits")[0] == 4
    assert run(capsys, "selfsim", "act", "--fixture", "example-4.6", "--path", "a")[0] == 4


def test_consistency_failure_exit_3(monkeypatch, capsys):
    import groupoid_graph.quotient as q

    real = q.character_adjacency

    def broken(A, rng=None):
        adj = real(A).copy()
        adj[1, 2] += 1
        return adj

    monkeypatch.setattr(q, "character_adjacency", broken)
    code, m, err = run(capsys, "quotient-graph", "--fixture", "example-4.3", "--mode", "both")
    assert code == 3 and "[1][2]" in m["outputs"]["error"]


def test_other_commands(tmp_path, capsys):
    code, m, _ = run(capsys, "orbits", "--fixture", "example-4.3")
    assert code == 0 and m["outputs"]["fixed_edges"] == []
    code, m, _ = run(capsys, "spectrum", "--fixture", "example-4.3")
    assert m["outputs"]["sum_of_squares"] == 24
    code, m, _ = run(capsys, "kappa-check", "--fixture", "example-4.3")
    assert m["outputs"]["ok"] is True
    code, m, _ = run(capsys, "dr-dims", "--fixture", "example-4.3", "--depth", "2", "--method", "both")
    assert [t["table"][2][2] for t in m["outputs"]["tables"]] == [14, 14]
    code, m, _ = run(capsys, "dr-bratteli", "--fixture", "example-4.3", "--source", "dr-fiber", "--levels", "2")
    assert code == 0
    code, m, _ = run(capsys, "ktheory", "--fixture", "example-4.3")
    assert m["outputs"]["quotient"]["K0"] == {"rank": 1, "torsion": []}
    out = tmp_path / "q.dot"
    code, m, _ = run(capsys, "export-dot", "--fixture", "example-4.3", "-o", str(out))
    assert code == 0 and out.read_text().startswith('digraph "quotient"')


def test_bare_graph_input(tmp_path, capsys):
    f = tmp_path / "e.json"
    f.write_text(json.dumps({"vertices": ["x", "y"], "edges": [{"id": "e", "src": "x", "rng": "y"}, {"id": "f", "src": "y", "rng": "x"}]}))
    code, m, _ = run(capsys, "quotient-graph", str(f), "--mode", "both")
    assert code == 0 and m["outputs"]["adjacency"] == [[0, 1], [1, 0]]


def test_stdin_and_determinism(tmp_path):
    text = json.dumps(example_4_3().to_dict())
    cmd = [sys.executable, "-m", "groupoid_graph.cli", "quotient-graph", "-", "--mode", "both"]
    runs = [subprocess.run(cmd, input=text, capture_output=True, text=True) for _ in range(2)]
    assert runs[0].returncode == 0
    assert runs[0].stdout == runs[1].stdout
    assert json.loads(runs[0].stdout)["outputs"]["adjacency"] == [[1, 0, 1], [0, 1, 1], [1, 1, 2]]
