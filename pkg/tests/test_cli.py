import csv
import io
import json

import pytest

from nokequal import Parameters
from nokequal.cli import main
from nokequal.forest import build_forest, canonical_sign_form
from nokequal.invariants import omnibus_holds, x_gen
from nokequal.ring import FormalSum, straighten, unit
from nokequal.serialize import class_to_json, emit_class, forest_to_json, parse_class


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_betti(capsys):
    code, out, _ = run(capsys, "betti", "--d", 2, "--k", 3, "--n", 6)
    assert code == 0 and json.loads(out) == {"0": 1, "3": 20, "4": 45, "5": 36, "6": 20, "7": 10}
    _, out2, _ = run(capsys, "betti", "--d", 2, "--k", 3, "--n", 6, "--mod2")
    assert out2 == out
    _, out3, _ = run(capsys, "betti", "--d", 2, "--k", 3, "--n", 4)
    assert json.loads(out3) == {"0": 1, "3": 4, "4": 3}


def test_betti_formats(capsys):
    _, out, _ = run(capsys, "betti", "--d", 2, "--k", 3, "--n", 4, "--format", "csv")
    assert out == "degree,rank\n0,1\n3,4\n4,3\n"
    _, out, _ = run(capsys, "betti", "--d", 2, "--k", 3, "--n", 4, "--format", "ascii")
    assert out.splitlines()[1] == "H^3: 4"


def test_bad_parameters_exit_2(capsys):
    code, _, err = run(capsys, "betti", "--d", 2, "--k", 3, "--n", 3)
    assert code == 2 and "requires n > k" in err


def test_missing_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["betti", "--d", "2", "--k", "3"])
    assert e.value.code == 2


def test_tc(capsys):
    _, out, _ = run(capsys, "tc", "--d", 2, "--k", 8, "--n", 40, "--s", 2)
    r = json.loads(out)
    assert r["lower"] == r["upperImproved"] == 10 and r["determined"]
    _, out, _ = run(capsys, "tc", "--d", 2, "--k", 3, "--n", 11, "--s", 1)
    r = json.loads(out)
    assert (r["lower"], r["upperImproved"], r["determined"]) == (3, 4, False)
    code, out, _ = run(capsys, "tc", "--d", 2, "--k", 3, "--n", 12, "--s", 5)
    assert code == 0 and json.loads(out)["value"] == 20


def _table(capsys, fmt, k_min=3, k_max=6, n_max=24, s=1, d=2):
    code, out, _ = run(capsys, "table", "--d", d, "--s", s, "--k-min", k_min, "--k-max", k_max,
                       "--n-min", 4, "--n-max", n_max, "--format", fmt)
    assert code == 0
    return out


def test_table_ascii(capsys):
    out = _table(capsys, "ascii").splitlines()
    # fixed width 3: columns k=3 and k=4 sit at [3:6] and [6:9]
    rows = {int(line[:3]): line for line in out[1:]}
    k4 = {n: rows[n][6:9].strip() for n in rows}
    assert sorted(n for n, v in k4.items() if v == "?") == [19, 22, 23]
    k3 = {n: rows[n][3:6].strip() for n in rows}
    assert k3[4] == k3[5] == "1"
    assert min(n for n, v in k3.items() if v == "?") == 11
    assert k4[4] == ""


def test_table_csv(capsys):
    out = _table(capsys, "csv", s=2)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["k", "n", "floor", "determined", "value"]
    for r in rows:
        k, n = int(r["k"]), int(r["n"])
        assert n > k
        det = omnibus_holds(Parameters(2, k, n))
        assert r["determined"] == str(det).lower()
        assert r["value"] == (str(2 * (n // k)) if det else "")


def test_table_json_and_determinism(capsys):
    a = _table(capsys, "json", d=3)
    b = _table(capsys, "json", d=3)
    assert a == b
    cells = json.loads(a)
    assert all(c["value"] == 1 for c in cells if c["n"] == c["k"] + 1)


def test_table_bad_range(capsys):
    code, _, err = run(capsys, "table", "--d", 2, "--s", 1, "--k-min", 5, "--k-max", 4,
                       "--n-min", 4, "--n-max", 10)
    assert code == 2 and "k range" in err


def _write(tmp_path, name, c):
    path = tmp_path / name
    path.write_text(emit_class(c))
    return path


def test_mul(capsys, tmp_path):
    p = Parameters(2, 3, 6)
    one = _write(tmp_path, "one.json", unit(p))
    x = _write(tmp_path, "x.json", x_gen(3, p))
    code, out, _ = run(capsys, "mul", "--lhs", one, "--rhs", x)
    assert code == 0 and parse_class(out) == x_gen(3, p)
    # x_k * x_{k+1}: the squares overlap
    y = _write(tmp_path, "y.json", x_gen(4, p))
    _, out, _ = run(capsys, "mul", "--lhs", x, "--rhs", y)
    assert parse_class(out).is_zero()


def test_mul_degree_seven(capsys, tmp_path):
    p = Parameters(2, 3, 6)

    def cls(squares, links):
        s, f = canonical_sign_form(build_forest(6, squares, links), p)
        return straighten(FormalSum({f: s}), p)
    lhs = _write(tmp_path, "l.json", cls([(1, 2)], [(1, 3)]))
    rhs = _write(tmp_path, "r.json", cls([(4, 5)], [(4, 3), (4, 6)]))
    _, out, _ = run(capsys, "mul", "--lhs", lhs, "--rhs", rhs)
    prod = parse_class(out)
    assert prod.degree == 7 and len(prod.terms) == 1 and abs(prod.terms[0][1]) == 1


def test_mul_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"ring": "Z", "terms": [{"coeff": 1}]}')
    good = _write(tmp_path, "g.json", x_gen(3, Parameters(2, 3, 6)))
    code, _, err = run(capsys, "mul", "--lhs", bad, "--rhs", good)
    assert code == 3 and "/terms/0" in err
    other = _write(tmp_path, "o.json", x_gen(3, Parameters(2, 3, 5)))
    code, _, err = run(capsys, "mul", "--lhs", good, "--rhs", other)
    assert code == 2 and "mismatch" in err
    code, _, _ = run(capsys, "mul", "--lhs", tmp_path / "missing.json", "--rhs", good)
    assert code == 3


def test_cl_and_zcl(capsys):
    code, out, _ = run(capsys, "cl", "--d", 2, "--k", 3, "--n", 6)
    r = json.loads(out)
    assert code == 0 and r["value"] == 2 and r["verified"]
    code, out, _ = run(capsys, "zcl", "--d", 2, "--k", 3, "--n", 4, "--s", 3, "--mode", "exhaustive")
    r = json.loads(out)
    assert r["value"] == 3 and r["verified"] and r["upperBound"]["holds"]
    code, _, err = run(capsys, "cl", "--d", 2, "--k", 3, "--n", 6, "--mode", "exhaustive", "--cap", 5)
    assert code == 2 and "cap" in err


def test_predicates(capsys):
    _, out, _ = run(capsys, "predicates", "--d", 2, "--k", 3, "--n", 6)
    assert json.loads(out) == {"omnibus": True, "millerFormality": True}


def test_basis(capsys):
    _, out, _ = run(capsys, "basis", "--d", 2, "--k", 3, "--n", 4, "--degree", 4)
    assert len(json.loads(out)) == 3


def test_validate(capsys, tmp_path):
    p = Parameters(2, 3, 4)
    f = canonical_sign_form(build_forest(4, [(1, 2)], [(1, 3), (1, 4)]), p)[1]
    doc = forest_to_json(f, p)
    good = tmp_path / "f.json"
    good.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", good)
    assert code == 0 and json.loads(out)["valid"]
    doc["squares"] = [[1, 3]]
    bad = tmp_path / "b.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", bad)
    assert code == 2 and "partition" in [v["rule"] for v in json.loads(out)["violations"]]
    junk = tmp_path / "j.json"
    junk.write_text("{")
    assert run(capsys, "validate", junk)[0] == 3
