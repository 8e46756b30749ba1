import json
import subprocess
import sys

import pytest

from kirkinv import catalog
from kirkinv.cli import main
from kirkinv.ring import Poly


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def emit(tmp_path, capsys, name, *extra):
    path = tmp_path / f"{name}{'_'.join(extra)}.json".replace("-", "")
    code, _, _ = run(capsys, "catalog", "emit", name, *extra, "-o", str(path))
    assert code == 0
    return path


# ---------------------------------------------------------------------------
# expand


def test_expand_examples(capsys):
    code, out, _ = run(capsys, "expand", "-n", "3", "-i", "3", "x2 x1 x2^-1")
    assert code == 0
    # canonical order lists X1X2 before X2X1; the polynomial is the one expected
    assert out.strip() == "1 + X1 - X1X2 + X2X1"
    assert Poly.parse(3, 3, out) == Poly.parse(3, 3, "1 + X1 + X2X1 - X1X2")
    assert run(capsys, "expand", "-n", "3", "-i", "3", "x1^-1")[1] == "1 - X1\n"
    assert run(capsys, "expand", "-n", "3", "-i", "3", "")[1] == "1\n"


def test_expand_structured_and_verbose(capsys):
    code, out, _ = run(capsys, "--format", "structured", "expand", "-n", "3", "-i", "3", "x1^-1")
    data = json.loads(out)
    assert data["expansion"] == [{"indices": [], "coeff": 1}, {"indices": [1], "coeff": -1}]
    code, out, _ = run(capsys, "expand", "--verbose", "-n", "3", "-i", "3", "x1^-1")
    assert "positive: no" in out


@pytest.mark.parametrize("word", ["x3", "x1^", "[x1 x2]", "x9"])
def test_expand_errors(capsys, word):
    code, out, err = run(capsys, "expand", "-n", "3", "-i", "3", word)
    assert code == 2 and out == "" and "error" in err


# ---------------------------------------------------------------------------
# invariants


def test_invariants_fenn_rolfsen(tmp_path, capsys):
    path = emit(tmp_path, capsys, "fenn-rolfsen")
    code, out, _ = run(capsys, "invariants", str(path), "--all")
    assert code == 0
    assert "(1-t, t-1)" in out
    code, out, _ = run(capsys, "--format", "structured", "invariants", str(path))
    rep = json.loads(out)
    assert rep["kirk_classical"] == {"sigma_1": "1-t", "sigma_2": "t-1"}
    assert rep["input"]["sha256"] and rep["engine"]["name"] == "kirkinv"


def test_invariants_Y3_sequence(tmp_path, capsys):
    path = emit(tmp_path, capsys, "Y3")
    code, out, _ = run(capsys, "--format", "structured", "invariants", str(path), "-i", "3", "--sequence", "1,2")
    assert code == 0
    rep = json.loads(out)
    assert list(rep["components"]) == ["3"]
    c = rep["components"]["3"]
    assert c["kappa"] == [{"sequence": [1, 2], "kappa": 0, "D": 0, "kappa_tilde": {"value": 0, "modulus": 0}}]
    (ks,) = c["K_sequences"]
    assert ks["sequence"] == [1, 2] and len(ks["full"]) == 4
    code, out, _ = run(capsys, "invariants", str(path), "-i", "3", "--sequence", "12")
    assert "K(12;3) full" in out and "filtered" in out


def test_invariants_empty(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text('{"n": 3, "components": {}}')
    code, out, _ = run(capsys, "--format", "structured", "invariants", str(path), "--all")
    assert code == 0
    rep = json.loads(out)
    for c in rep["components"].values():
        assert c["S"] == [] and c["E"] == "0" and c["K"] == [] and c["sigma"] == "0"
        assert all(r["kappa"] == 0 and r["D"] == 0 for r in c["kappa"])
        assert all(k["full"] == [] for k in c["K_sequences"])


@pytest.mark.parametrize(
    "content,args",
    [
        ("not json", []),
        ('{"n": 3, "components": {"3": [{"sign": 1, "word": "x3"}]}}', []),
        ('{"n": 3}', ["-i", "4"]),
        ('{"n": 3}', ["--sequence", "1,1"]),
        ('{"n": 3}', ["-i", "3", "--sequence", "3"]),
        ('{"n": 3}', ["--sequence", "a"]),
    ],
)
def test_invariants_validation_exit_2(tmp_path, capsys, content, args):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, out, err = run(capsys, "invariants", str(path), *args)
    assert code == 2 and "error" in err


def test_missing_file(capsys):
    assert run(capsys, "invariants", "/nonexistent/file.json")[0] == 2


def test_internal_inconsistency_exit_3(tmp_path, capsys, monkeypatch):
    from kirkinv import report

    path = emit(tmp_path, capsys, "Y3")
    monkeypatch.setattr(report, "_raw_e", lambda p, i: Poly.one(p.n, i))
    code, _, err = run(capsys, "invariants", str(path))
    assert code == 3 and "inconsistency" in err


def test_determinism(tmp_path, capsys):
    path = emit(tmp_path, capsys, "stirling", "--n", "5")
    outs = {run(capsys, "--format", "structured", "invariants", str(path))[1] for _ in range(3)}
    assert len(outs) == 1
    texts = {run(capsys, "invariants", str(path), "--verbose")[1] for _ in range(3)}
    assert len(texts) == 1


def test_round_trip_reproduces_expected_tables(tmp_path, capsys):
    cases = [("Y", "--n", str(n)) for n in range(3, 7)] + [("stirling", "--n", str(n)) for n in range(3, 7)]
    for name, *extra in cases:
        n = int(extra[1])
        path = emit(tmp_path, capsys, name, *extra)
        rep = json.loads(run(capsys, "--format", "structured", "invariants", str(path))[1])
        comp = rep["components"][str(n)]
        top = list(range(1, n))
        row = next(r for r in comp["kappa"] if r["sequence"] == top)
        want = 1 if name == "Y" else -1
        assert row["kappa_tilde"] == {"value": want, "modulus": 0}
        assert comp["sigma"] == "0"
        for r in comp["kappa"]:
            if len(r["sequence"]) < n - 1:
                assert r["kappa"] == 0


# ---------------------------------------------------------------------------
# compare


def test_compare_examples(tmp_path, capsys):
    s4 = emit(tmp_path, capsys, "stirling", "--n", "4")
    s24 = emit(tmp_path, capsys, "stirling", "--n", "4", "--reversed", "2")
    y4 = emit(tmp_path, capsys, "Y", "--n", "4")
    code, out, _ = run(capsys, "compare", str(s4), str(s24))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "DISTINGUISHED"
    assert "  kappa~(123;4): -1 vs 1" in lines
    assert not any(l.strip().startswith("K_4") for l in lines)
    assert run(capsys, "compare", str(s4), str(s4))[1] == "INDISTINGUISHABLE-BY-THESE-INVARIANTS\n"
    out = run(capsys, "compare", str(y4), str(s4))[1]
    assert out.startswith("DISTINGUISHED") and "  kappa~(123;4): 1 vs -1" in out.splitlines()
    data = json.loads(run(capsys, "--format", "structured", "compare", str(y4), str(s4))[1])
    assert data["verdict"] == "DISTINGUISHED"
    assert {"invariant": "kappa~(123;4)", "a": "1", "b": "-1"} in data["differences"]


def test_compare_arity_mismatch(tmp_path, capsys):
    fr = emit(tmp_path, capsys, "fenn-rolfsen")
    s4 = emit(tmp_path, capsys, "stirling", "--n", "4")
    code, _, err = run(capsys, "compare", str(fr), str(s4))
    assert code == 4 and "arity" in err


# ---------------------------------------------------------------------------
# from-diagram and catalog


def test_from_diagram_fixtures(tmp_path, capsys):
    frx = emit(tmp_path, capsys, "fenn-rolfsen", "--cross-section")
    code, out, _ = run(capsys, "from-diagram", str(frx))
    assert code == 0
    assert json.loads(out) == {
        "n": 2,
        "components": {"1": [{"sign": -1, "word": "x2"}], "2": [{"sign": 1, "word": "x1"}]},
    }
    y3x = emit(tmp_path, capsys, "Y", "--n", "3", "--cross-section")
    outp = tmp_path / "y3.json"
    assert run(capsys, "from-diagram", str(y3x), "-o", str(outp))[0] == 0
    assert json.loads(outp.read_text()) == {"n": 3, "components": {"3": [{"sign": 1, "word": "[x1,x2]"}]}}
    code, out, _ = run(capsys, "invariants", str(outp), "-i", "3", "--sequence", "12")
    assert code == 0 and "12     1     0  1" in out


def test_from_diagram_trivial(tmp_path, capsys):
    path = tmp_path / "triv.json"
    path.write_text(json.dumps({
        "n": 2,
        "arcs": [{"id": "a", "component": 1}, {"id": "b", "component": 2}],
        "base_arcs": {"1": "a", "2": "b"},
        "crossings": [],
    }))
    code, out, _ = run(capsys, "from-diagram", str(path))
    assert code == 0 and json.loads(out) == {"n": 2, "components": {}}


def test_from_diagram_nonstabilizing_exit_3(tmp_path, capsys):
    path = tmp_path / "hopf.json"
    path.write_text(json.dumps({
        "n": 3,
        "arcs": [{"id": "a0", "component": 1}, {"id": "a1", "component": 1},
                 {"id": "b0", "component": 2}, {"id": "c0", "component": 3}],
        "base_arcs": {"1": "a0", "2": "b0", "3": "c0"},
        "crossings": [{"over": "b0", "under_in": "a0", "under_out": "a1", "sign": 1},
                      {"over": "c0", "under_in": "a1", "under_out": "a0", "sign": 1}],
        "singularities": {"3": [{"sign": 1, "loop": [["a0", 1]]}]},
    }))
    code, _, err = run(capsys, "from-diagram", str(path))
    assert code == 3 and "NotFreeOnMeridians" in err


def test_from_diagram_malformed(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 2, "arcs": [], "base_arcs": {}}')
    assert run(capsys, "from-diagram", str(path))[0] == 2


def test_catalog_list_and_errors(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and all(name in out for name in catalog.CATALOG)
    assert run(capsys, "catalog", "emit", "nope")[0] == 2
    assert run(capsys, "catalog", "emit", "Y")[0] == 2
    assert run(capsys, "catalog", "emit")[0] == 2
    assert run(capsys, "catalog", "emit", "stirling", "--n", "4", "--reversed", "4")[0] == 2
    code, out, _ = run(capsys, "catalog", "emit", "Y", "--n", "4")
    assert json.loads(out) == catalog.build_Y(4).presentation.to_json()


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "kirkinv", "expand", "-n", "3", "-i", "3", "x2 x1 x2^-1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "1 + X1 - X1X2 + X2X1\n"
    proc = subprocess.run([sys.executable, "-m", "kirkinv", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2
