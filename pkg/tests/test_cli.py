import json

import pytest

from ghquiver.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_nc_derive_golden(capsys):
    code, out, _ = run(capsys, "nc", "derive", "--r", "3", "-f", "a^2 b21", "-g", "a")
    assert code == 0
    assert out.strip() == "a x2 y1 + x2 y1 a"


def test_primitive_solve_golden(capsys):
    code, out, _ = run(
        capsys, "primitive", "solve", "-G", "a,b", "-u", "bab+bb", "-u", "aba+ab+ba"
    )
    assert code == 0
    assert out.strip() == "a b^2 + 1/2 a b a b"


def test_nc_mul_and_bracket(capsys):
    code, out, _ = run(capsys, "nc", "mul", "--r", "2", "d1", "b1", "--json")
    assert code == 0 and json.loads(out)["result"] == "-x1 x1*"
    code, out, _ = run(capsys, "nc", "bracket", "--r", "2", "a", "a*")
    assert code == 0 and out.strip() == "e1"


def test_auto_pipeline(tmp_path, capsys):
    w = tmp_path / "w.json"
    code, out, _ = run(
        capsys, "auto", "build", "--r", "3", "--triangular", "a^2 b21", "-o", str(w)
    )
    assert code == 0
    code, out, _ = run(capsys, "auto", "check", "-w", str(w), "--r", "3")
    assert code == 0
    assert "symplectic: true" in out and "reduced: true" in out
    inv = tmp_path / "winv.json"
    run(capsys, "auto", "invert", "-w", str(w), "--r", "3", "-o", str(inv))
    comp = tmp_path / "wid.json"
    run(capsys, "auto", "compose", "-w", str(w), "-w", str(inv), "--r", "3", "-o", str(comp))
    code, out, _ = run(capsys, "auto", "matrices", "-w", str(comp), "--r", "3", "--json")
    data = json.loads(out)
    assert data["N"][0][0] == "e1" and data["N"][0][1] == "0"


def test_rep_pipeline(tmp_path, capsys):
    pt = tmp_path / "pt.json"
    code, _, _ = run(
        capsys, "rep", "random", "--n", "2", "--r", "2", "--seed", "5", "-o", str(pt)
    )
    assert code == 0
    code, out, _ = run(capsys, "rep", "moment", "-p", str(pt))
    assert code == 0 and float(out) < 1e-10
    code, out, _ = run(
        capsys, "rep", "hamiltonian", "-p", str(pt), "--k", "0", "-m", "1,0;0,1", "--json"
    )
    val = json.loads(out)["value"]
    assert abs(val[0] + 2.0) < 1e-10  # J_{0,I} = -n tau


def test_rep_determinism(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run(capsys, "rep", "random", "--n", "2", "--r", "3", "--seed", "9", "-o", str(a))
    run(capsys, "rep", "random", "--n", "2", "--r", "3", "--seed", "9", "-o", str(b))
    assert a.read_text() == b.read_text()


def test_nav_pipeline(tmp_path, capsys):
    pt = tmp_path / "pt.json"
    run(capsys, "rep", "random", "--n", "2", "--r", "3", "--seed", "3", "-o", str(pt))
    tr = tmp_path / "tr.json"
    code, _, _ = run(capsys, "nav", "reduce1", "-p", str(pt), "-o", str(tr))
    assert code == 0
    trace = json.loads(tr.read_text())
    final = trace["final"]
    assert all(
        abs(final["v"][i][2][0]) + abs(final["v"][i][2][1]) < 1e-8 for i in range(2)
    )
    word = tmp_path / "word.json"
    word.write_text(json.dumps(trace["word"]))
    out = tmp_path / "out.json"
    code, _, _ = run(capsys, "nav", "replay", "-p", str(pt), "-w", str(word), "-o", str(out))
    assert code == 0
    got = json.loads(out.read_text())
    assert got["X"] == final["X"] and got["v"] == final["v"]


def test_gl_pipeline(tmp_path, capsys):
    code, out, _ = run(capsys, "gl", "factor", "-m", "1, a; 0, 1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["factors"][0]["kind"] == "transvection"
    w = tmp_path / "w.json"
    code, _, _ = run(
        capsys, "gl", "psi", "--r", "2", "--var", "a", "-m", "1, 0; a^2, 1", "-o", str(w)
    )
    assert code == 0
    code, out, _ = run(capsys, "auto", "check", "-w", str(w), "--r", "2")
    assert code == 0 and "symplectic: true" in out


def test_domain_error_exit_code(tmp_path, capsys):
    code, _, err = run(capsys, "rep", "random", "--n", "1", "--r", "1", "--tau", "0")
    assert code == 1
    assert json.loads(err)["error"] == "FreeActionLost"


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nc", "unknown-sub"])
    assert exc.value.code == 2
