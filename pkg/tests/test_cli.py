import json
from fractions import Fraction

import pytest

from decic.cli import InputError, load_input, parse_field, parse_scalar, run
from decic.field import QQ
from decic.report import machine_body, parse_machine

CONIC = """\
# the conic relation of the Veronese map
field QQ
ring x, y
let a = x^2
let b = x*y
let c = y^2
let d = a + 2*c
"""


@pytest.fixture
def conic(tmp_path):
    path = tmp_path / "conic.txt"
    path.write_text(CONIC)
    return str(path)


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_field_forms():
    assert parse_field("QQ").kind == "QQ"
    assert parse_field("QQ(i)").kind == "QQi"
    assert parse_field("GF(101)").p == 101
    K = parse_field("QQ[t]/(t^2 - 5)")
    assert parse_scalar("1/t", K) * parse_scalar("t", K) == K(1)
    assert parse_scalar("-3/4", QQ()) == QQ()(Fraction(-3, 4))
    for bad in ("RR", "GF(100)", "QQ[t]/(t - 1)"):
        with pytest.raises(ValueError):
            parse_field(bad)


def test_load_input(conic):
    ws = load_input(CONIC)
    assert ws.ring.variables == ("x", "y")
    assert str(ws.get("d")) == "x^2 + 2*y^2"
    with pytest.raises(InputError, match="line 2"):
        load_input("ring x\nlet a = x +\n")
    with pytest.raises(InputError, match="line 1"):
        load_input("let a = 1\n")
    with pytest.raises(InputError):
        load_input("frobnicate\n")


def test_rels_on_input_file(capsys, conic):
    code, out, _ = call(capsys, "rels", "--input", conic, "--names", "a,b,c", "--degree", "2")
    assert code == 0
    assert out.startswith("degree 2: dimension 1")
    assert "u0*u2 - u1^2" in out or "-u0*u2 + u1^2" in out


def test_rels_default_constants(capsys):
    code, out, _ = call(capsys, "rels", "--max-degree", "2")
    assert code == 0
    assert "degree 1: dimension 0" in out and "degree 2: dimension 0" in out


def test_membership_exit_codes(capsys, conic):
    assert call(capsys, "membership", "--input", conic, "--names", "d,a,c")[0] == 0
    code, out, _ = call(capsys, "membership", "--input", conic, "--names", "b,a,c")
    assert code == 1 and "not in the ideal" in out
    assert call(capsys, "membership", "--input", conic, "--names", "d")[0] == 2


def test_usage_errors_exit_2(capsys, conic):
    assert call(capsys, "rels", "--degree", "0")[0] == 2
    assert call(capsys, "rels", "--input", conic, "--names", "nope")[0] == 2
    assert call(capsys, "rels", "--modular-primes", "1")[0] == 2
    code, _, err = call(capsys, "verify-paper", "--check", "no-such-check")
    assert code == 2 and "group" in err
    assert call(capsys, "verify-paper")[0] == 2
    assert call(capsys, "rels", "--input", "/nonexistent/file")[0] == 2
    assert call(capsys, "frobnicate")[0] == 2


def test_orbits_and_isotypic(capsys):
    code, out, _ = call(capsys, "orbits")
    assert code == 0 and out.startswith("64 base points: 4 orbits of sizes [16, 16, 16, 16], action free")
    code, out, _ = call(capsys, "orbits", "--names", "F1")
    assert code == 0 and out.startswith("32 base points on F1=0: 2 orbits")
    code, out, _ = call(capsys, "isotypic", "--names", "sigma=1", "--multidegree", "2,2,2,2")
    assert code == 0 and "U4 in slice: yes" in out


def test_hessian_default_points(capsys):
    code, out, _ = call(capsys, "hessian")
    assert code == 0
    ranks = [int(line.split(" rank ")[1].split(",")[0]) for line in out.splitlines()]
    assert ranks == [2, 2, 2, 2, 1, 1, 1]


def test_hessian_custom_point(capsys, conic):
    code, out, _ = call(capsys, "hessian", "--input", conic, "--names", "d", "--point", "1,1")
    assert code == 0 and "rank 2" in out


def test_verify_machine_report(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = call(capsys, "verify-paper", "--check", "group", "--check", "points", "--format", "machine", "--report", str(path))
    assert code == 0
    assert "2 checks, 0 failed" in out
    data = path.read_bytes()
    rep = parse_machine(data)
    assert [r.id for r in rep.records] == ["group", "points"]
    assert all(r.status == "pass" for r in rep.records)
    assert rep.config["seed"] == 1729
    # same inputs give the same deterministic body
    call(capsys, "verify-paper", "--check", "group", "--check", "points", "--format", "machine", "--report", str(tmp_path / "again.json"))
    assert machine_body(data) == machine_body((tmp_path / "again.json").read_bytes())


def test_verify_partial_relations(capsys):
    code, out, _ = call(capsys, "verify-paper", "--check", "relations", "--max-degree", "4", "--format", "machine")
    assert code == 0
    doc = json.loads(out)
    rec = doc["checks"][0]
    assert rec["status"] == "pass" and "partial run" in rec["detail"]


def test_write_golden_to_custom_file(capsys, tmp_path):
    golden = tmp_path / "golden.json"
    code, _, _ = call(capsys, "verify-paper", "--check", "isotypic", "--golden", str(golden), "--write-golden")
    assert code == 0
    frozen = json.loads(golden.read_text())
    assert frozen["isotypic"] == {"sigma_F1_over_F2": "-i", "sigma_F2_over_F1": "i"}
    golden.write_text(json.dumps({"isotypic": {"sigma_F1_over_F2": "i"}}))
    assert call(capsys, "verify-paper", "--check", "isotypic", "--golden", str(golden))[0] == 1
