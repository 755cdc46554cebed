import io
import json
import subprocess
import sys

import pytest

from pathtor import parse_digraph
from pathtor.cli import RunConfig, main, run
from pathtor.digraph import SQUARE, TRIANGLE


def call(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "triangle.json"
    path.write_text(TRIANGLE.to_json())
    return str(path)


def test_torsion_report(triangle_file, capsys):
    code, out, _ = call(["torsion", "--input", triangle_file, "--inner", "standard"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["T_squared"] == "3"
    assert report["T"] == pytest.approx(3 ** 0.5, rel=1e-11)
    assert report["D"] == ["9", "27", "3"]
    for key in ("dims_omega", "betti", "euler", "euler_reduced", "log_T", "tau_R", "truncated"):
        assert key in report


def test_truncated_flag_is_reported(capsys):
    code, out, _ = call(["torsion", "builtin:cycle:4", "--max-len", "3"], capsys)
    assert code == 0 and json.loads(out)["truncated"] is True
    code, out, _ = call(["homology", "builtin:cycle:4", "--max-len", "3"], capsys)
    assert json.loads(out)["truncated"] is True


def test_join_pipeline(tmp_path, capsys):
    a, b, z = tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "z.json"
    a.write_text("p\nq\n")
    b.write_text("r\ns\n")
    assert call(["join", str(a), str(b), "-o", str(z)], capsys)[0] == 0
    joined = parse_digraph(z.read_text())
    assert joined.n_vertices == 4 and joined.n_arrows == 4
    code, out, _ = call(["torsion", str(z), "--reduced"], capsys)
    report = json.loads(out)
    assert code == 0 and report["reduced"] and report["T_squared"] == "4"


def test_product_output_round_trips(tmp_path, capsys):
    code, out, _ = call(["product", "builtin:interval", "builtin:triangle"], capsys)
    assert code == 0
    prism = parse_digraph(out)
    assert (prism.n_vertices, prism.n_arrows) == (6, 9)
    code, text, _ = call(["product", "builtin:interval", "builtin:triangle", "--format", "text"],
                         capsys)
    again = parse_digraph(text)
    assert {(again.vertices[a], again.vertices[b]) for a, b in again.arrows} == \
        {(prism.vertices[a], prism.vertices[b]) for a, b in prism.arrows}


@pytest.mark.parametrize("check, inputs", [
    ("product", ["builtin:interval", "builtin:triangle"]),
    ("join", ["builtin:square", "builtin:point"]),
    ("kunneth", ["builtin:square", "builtin:line:3:+-"]),
    ("main", ["builtin:square"]),
    ("scaling", ["builtin:triangle"]),
])
def test_verify_commands_pass(check, inputs, capsys):
    code, out, _ = call(["verify", check, *inputs], capsys)
    assert code == 0 and json.loads(out)["ok"] is True


def test_verify_failure_exits_two(monkeypatch, capsys):
    import pathtor.cli as cli
    monkeypatch.setitem(cli.COMMANDS, "verify", lambda cfg: {"ok": False})
    assert run(RunConfig("verify", ["builtin:point"], extra={"check": "main"})) == 2


@pytest.mark.parametrize("argv, code", [
    (["torsion", "/nonexistent/file.json"], "io_error"),
    (["torsion", "builtin:nothing"], "unknown_builtin"),
    (["torsion", "builtin:cycle:2"], "bad_parameter"),
    (["torsion"], "bad_arguments"),
    (["torsion", "builtin:triangle", "--inner", "normalized", "--reduced"],
     "unsupported_inner_product"),
    (["power", "builtin:point", "-n", "0"], "bad_parameter"),
    (["torsion", "builtin:point", "--max-len", "-1"], "bad_parameter"),
    (["frobnicate"], "usage"),
])
def test_input_errors(argv, code, capsys):
    status, _, err = call(argv, capsys)
    assert status == 1
    payload = json.loads(err)["error"]
    assert payload["code"] == code and payload["message"]


def test_parse_error_carries_position(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("a -> b\nc ->\n")
    status, _, err = call(["paths", str(bad)], capsys)
    payload = json.loads(err)["error"]
    assert status == 1 and payload["code"] == "parse_error"
    assert "line 2" in payload["message"]


def test_stdin_input(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(SQUARE.to_edge_list()))
    code, out, _ = call(["homology", "-"], capsys)
    report = json.loads(out)
    assert code == 0 and report["betti"] == [1, 0, 0] and report["dims_omega"] == [4, 4, 1]


def test_other_commands(capsys):
    code, out, _ = call(["paths", "builtin:square"], capsys)
    assert code == 0 and json.loads(out)["levels"][2]["count"] == 2
    code, out, _ = call(["omega", "builtin:square"], capsys)
    basis = json.loads(out)["degrees"][2]["basis"]
    assert len(basis) == 1 and sorted(t["coef"] for t in basis[0]) == ["-1", "1"]
    code, out, _ = call(["homology", "builtin:triangle", "--spectrum"], capsys)
    assert json.loads(out)["spectrum"]["2"] == [3.0]
    code, out, _ = call(["builtin", "cycle", "5"], capsys)
    assert parse_digraph(out).n_arrows == 5
    code, out, _ = call(["power", "builtin:point", "-n", "4", "--mode", "join", "--predict"],
                        capsys)
    assert json.loads(out)["T"] == pytest.approx(2.0)
    code, out, _ = call(["torsion", "builtin:square", "--format", "text"], capsys)
    assert "T_squared: 8" in out


def test_reports_are_byte_identical(capsys):
    argv = ["torsion", "builtin:cycle:5", "--max-len", "4", "--seed", "3"]
    first = call(argv, capsys)[1]
    assert all(call(argv, capsys)[1] == first for _ in range(3))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pathtor", "torsion", "builtin:line:5"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["T_squared"] == "5"
