import io
import json
from pathlib import Path

import pytest

from adelcoh.cli import EXIT, main, parse_window

EXAMPLES = Path(__file__).resolve().parent.parent / "examples_instances"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def inst(name):
    return str(EXAMPLES / name)


@pytest.mark.parametrize("name,pretty", [
    ("hasse.toml", "H^0 = Z_(2,3)\nH^1 = 0"),
    ("hasse_torsion.toml", "H^0 = Z/6\nH^1 = 0"),
    ("hasse_mixed.toml", "H^0 = Z/2 + Z/30\nH^1 = 0"),
    ("interval.toml", "H^0 = Q\nH^1 = 0"),
    ("torus3.toml", "H^0: [0]:1\nH^1: [-12]:3, [-10]:3, [-8]:3, [-6]:3, [-4]:3, [-2]:3"),
])
def test_cohomology_pretty(name, pretty):
    code, out, err = run("cohomology", "--instance", inst(name))
    assert code == 0, err
    assert out.strip() == pretty


@pytest.mark.parametrize("variant", ["L,LambdaR", "L,Lambda'R", "LambdaL,R"])
@pytest.mark.parametrize("policy", ["specializations", "all-closed-points"])
def test_hasse_flags(variant, policy):
    code, out, _ = run("cohomology", "--instance", inst("hasse.toml"), "--variant", variant,
                       "--policy", policy, "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [(r["degree"], r["rank"], r["torsion"]) for r in rows] == [(0, 1, []), (1, 0, [])]


def test_hasse_csv():
    code, out, _ = run("cohomology", "--instance", inst("hasse.toml"), "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["degree,multidegree,rank,torsion", "0,,1,", "1,,0,"]


def test_cech_h2_table():
    code, out, _ = run("cohomology", "--instance", inst("cech_xy.toml"), "--window=-6..2", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    h2 = {tuple(r["multidegree"]): r["rank"] for r in rows if r["degree"] == 2}
    assert h2 == {(a, b): 1 for a in range(-6, 0) for b in range(-6, 0)}
    assert all(r["degree"] == 2 for r in rows)


def test_window_override_changes_table():
    _, out, _ = run("cohomology", "--instance", inst("cech_xy.toml"), "--window=-2..0", "--format", "csv")
    body = out.splitlines()[1:]
    assert body == ["2,-2;-2,1,", "2,-2;-1,1,", "2,-1;-2,1,", "2,-1;-1,1,"]


@pytest.mark.parametrize("argv", [
    ("cohomology", "--instance", "hasse.toml", "--format", "json"),
    ("cohomology", "--instance", "cech_xy.toml", "--format", "csv"),
    ("dump", "--instance", "cech_xyz.toml"),
    ("check", "split", "--seed", "3"),
])
def test_byte_identical_reruns(argv):
    argv = tuple(inst(a) if a.endswith(".toml") else a for a in argv)
    assert run(*argv) == run(*argv)


def test_dump_vertex_counts():
    _, out, _ = run("dump", "--instance", inst("hasse.toml"))
    assert len(json.loads(out)["cube"]["vertices"]) == 3
    _, out, _ = run("dump", "--instance", inst("cech_xyz.toml"))
    assert len(json.loads(out)["cube"]["vertices"]) == 7


def test_dump_matrices_are_strings():
    _, out, _ = run("dump", "--instance", inst("hasse.toml"))
    d = json.loads(out)
    mats = d["complex"]["differentials"] + [e["matrix"] for e in d["cube"]["edges"]]
    for m in mats:
        for row in m:
            assert all(isinstance(x, str) for x in row)


@pytest.mark.parametrize("suite,extra", [
    ("delta-squared", ()),
    ("absorbative", ("--instance", "hasse.toml")),
    ("pentagon", ()),
    ("radical", ()),
    ("split", ()),
    ("subdivision", ("--max-vertices", "3")),
])
def test_check_suites_pass(suite, extra):
    extra = tuple(inst(a) if a.endswith(".toml") else a for a in extra)
    code, out, _ = run("check", suite, "--seed", "7", "--format", "json", *extra)
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_split_worked_example():
    code, out, _ = run("split", "--target", "2=3/4", "--target", "3=0", "--convention", "difference",
                       "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["q"] == "3/4" and d["round_trip"] is True


def test_split_digit_literal():
    code, out, _ = run("split", "--target", "2=digits:-2:1,1,1", "--format", "json")
    assert code == 0
    assert json.loads(out)["q"] == "-3/4"


@pytest.mark.parametrize("argv,code", [
    (("cohomology", "--instance", "malformed.toml"), "E_PARSE"),
    (("cohomology", "--instance", "missing.toml"), "E_IO"),
    (("cohomology", "--instance", "hasse.toml", "--window=3..1"), "E_WINDOW"),
    (("cohomology", "--instance", "hasse.toml", "--variant", "bogus"), "E_SCHEMA"),
    (("cohomology", "--instance", "hasse.toml", "--precision", "0"), "E_SCHEMA"),
    (("dump", "--instance", "cech_xy.toml", "--window=2..-2"), "E_WINDOW"),
    (("check", "nonsense"), "E_SUITE"),
    (("split", "--target", "4=1"), "E_SCHEMA"),
    (("split", "--target", "2:1"), "E_PARSE"),
    (("split", "--target", "2=digits:-40:1"), "E_PRECISION"),
])
def test_error_codes(argv, code):
    argv = tuple(inst(a) if a.endswith(".toml") else a for a in argv)
    rc, out, err = run(*argv)
    assert rc == EXIT[code]
    assert out == ""
    lines = err.strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith(code + ": ")


def test_parse_error_has_position():
    _, _, err = run("cohomology", "--instance", inst("malformed.toml"))
    assert "line 2" in err


def test_schema_errors(tmp_path):
    p = tmp_path / "x.toml"
    p.write_text('format = 2\nkind = "torus"\n')
    assert run("cohomology", "--instance", str(p))[0] == EXIT["E_SCHEMA"]
    p.write_text('format = 1\nkind = "number-ring"\nprimes = [2]\nmodule = [[1.5]]\n')
    assert run("cohomology", "--instance", str(p))[0] == EXIT["E_SCHEMA"]


@pytest.mark.parametrize("text,lo,hi", [("-6..2", (-6,), (2,)), ("-1,-2..0,3", (-1, -2), (0, 3)), ([0, 4], (0,), (4,))])
def test_parse_window(text, lo, hi):
    w = parse_window(text)
    assert tuple(w.lo) == lo and tuple(w.hi) == hi


@pytest.mark.parametrize("key", ["covers", "relations"])
def test_poset_instance(tmp_path, key):
    p = tmp_path / "circle.toml"
    p.write_text(f'format = 1\nkind = "poset"\nelements = ["a", "b", "c", "d"]\n'
                 f'{key} = [["a", "c"], ["a", "d"], ["b", "c"], ["b", "d"]]\n')
    code, out, _ = run("cohomology", "--instance", str(p))
    assert code == 0 and out == "H^0 = Q\nH^1 = Q\n"
