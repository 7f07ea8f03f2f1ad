import json
import shutil

from conftest import DATA, PINNED, fixture_path
from realizability.cli import main
from realizability.instance import loads


def rlz(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_kam_run(capsys):
    code, out, _ = rlz(capsys, "kam", "run", "K * t . s . a", "--max-steps", 5)
    assert code == 0
    assert out.splitlines()[-2].endswith("t * a")
    code, out, _ = rlz(capsys, "--json", "kam", "run", "S K K t * a", "--max-steps", 20)
    rep = json.loads(out)
    assert rep["trace"][-1] == "t * a" and rep["steps"] == 7


def test_poly_compile(capsys):
    assert rlz(capsys, "poly", "compile", r"\y. y")[:2] == (0, "s k k\n")
    code, _, err = rlz(capsys, "poly", "compile", r"\y.")
    assert code == 2 and "error" in err


def test_missing_file_is_a_usage_error(capsys):
    code, _, err = rlz(capsys, "paks", "check", "missing.json")
    assert code == 2
    assert "terms" in err  # the schema is printed


def test_usage_errors(capsys):
    assert rlz(capsys)[0] == 2
    assert rlz(capsys, "paks", "frobnicate")[0] == 2
    assert rlz(capsys, "kam", "run")[0] == 2
    assert rlz(capsys, "oca", "check", fixture_path(PINNED), "--law", "nonsense")[0] == 2


def test_paks_check(capsys):
    code, out, _ = rlz(capsys, "paks", "check", fixture_path("gen_6x4"))
    assert code == 0 and "valid: True" in out
    code, out, _ = rlz(capsys, "--json", "paks", "check", fixture_path("gen_6x4"))
    assert json.loads(out)["axioms"]["S_eta"]["holds"]


def test_paks_check_reports_failures(capsys, tmp_path):
    doc = json.loads(fixture_path(PINNED).read_text())
    doc["pole"] = doc["pole"][:-1]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    code, out, _ = rlz(capsys, "paks", "check", path)
    assert code == 1 and "FAIL" in out


def test_derive_and_check(capsys, tmp_path):
    out_file = tmp_path / "oca.json"
    assert rlz(capsys, "paks", "derive-oca", fixture_path("gen_7x4"), "--out", out_file)[0] == 0
    code, out, _ = rlz(capsys, "oca", "check", out_file)
    assert code == 0 and "FAIL" not in out
    code, out, _ = rlz(capsys, "--json", "oca", "check", out_file, "--law", "peirce")
    assert code == 0 and list(json.loads(out)["laws"]) == ["peirce"]
    # a constant application table breaks the k law
    doc = json.loads(out_file.read_text())
    n = doc["size"]
    top = next(a for a in range(n) if all(doc["leq"][b][a] for b in range(n)))
    doc["app"] = [[top] * n for _ in range(n)]
    out_file.write_text(json.dumps(doc))
    code, out, _ = rlz(capsys, "oca", "check", out_file)
    assert code == 1 and "FAIL" in out


def test_kam_pole(capsys):
    args = ["kam", "pole", "--final", "S * a", "--max-steps", 10]
    assert rlz(capsys, *args, "--member", "K S t * a")[1] == "yes\n"
    assert rlz(capsys, *args, "--member", "K * b")[1] == "no\n"
    omega = "S (S K K) (S K K) (S (S K K) (S K K)) * a"
    assert rlz(capsys, *args, "--member", omega)[1] == "unknown\n"


def test_kam_counterexample(capsys, monkeypatch):
    code, out, _ = rlz(capsys, "--json", "kam", "counterexample", "--max-size", 3)
    rep = json.loads(out)
    assert code == 0 and rep["both"] == [] and rep["checked"] == 66
    monkeypatch.setenv("RLZ_MAX_ENUM", "10")
    assert rlz(capsys, "kam", "counterexample", "--max-size", 3)[0] == 2


def test_tripos_check(capsys):
    code, out, _ = rlz(capsys, "tripos", "check", fixture_path(PINNED), "--max-index", 2, "--beck-chevalley")
    assert code == 0
    assert "beck-chevalley" in out and "FAIL" not in out


def model_file(tmp_path, extra):
    shutil.copy(fixture_path(PINNED), tmp_path / "inst.json")
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"instance": "inst.json", **extra}))
    return path


def test_hol_check(capsys, tmp_path):
    model = model_file(tmp_path, {"peano": 2})
    deriv = DATA / "derivations" / "valid" / "05_composition.deriv"
    code, out, _ = rlz(capsys, "--json", "hol", "check", deriv, "--model", model)
    rep = json.loads(out)
    assert code == 0 and rep["satisfied"] and rep["rules"] == ["->e", "->i", "ax"]
    for stem in ("freshness", "unbound", "kind_error"):
        broken = DATA / "derivations" / "broken" / f"{stem}.deriv"
        assert rlz(capsys, "hol", "check", broken, "--model", model)[0] == 1, stem
    broken = DATA / "derivations" / "broken" / "parse_error.deriv"
    assert rlz(capsys, "hol", "check", broken, "--model", model)[0] == 2


def test_hol_check_shipped_model(capsys):
    model = DATA / "models" / "chain_peano.json"
    for deriv in sorted((DATA / "derivations" / "valid").glob("*.deriv")):
        assert rlz(capsys, "hol", "check", deriv, "--model", model)[0] == 0, deriv.name


def test_hol_check_missing_inputs(capsys, tmp_path):
    model = model_file(tmp_path, {"kinds": {"I": 2}})
    deriv = DATA / "derivations" / "valid" / "01_axiom.deriv"
    assert rlz(capsys, "hol", "check", deriv, "--model", model)[0] == 0
    assert rlz(capsys, "hol", "check", tmp_path / "nope.deriv", "--model", model)[0] == 2
    assert rlz(capsys, "hol", "check", deriv, "--model", tmp_path / "nope.json")[0] == 2
    bad_model = tmp_path / "empty.json"
    bad_model.write_text("{}")
    assert rlz(capsys, "hol", "check", deriv, "--model", bad_model)[0] == 2


def test_generate_is_seeded(capsys):
    args = ["--seed", 9, "paks", "generate", "--terms", 4, "--stacks", 2]
    code, first, _ = rlz(capsys, *args)
    second = rlz(capsys, *args)[1]
    assert code == 0 and first == second
    assert loads(first).valid
    assert rlz(capsys, "--seed", 10, "paks", "generate", "--terms", 4, "--stacks", 2)[1] != first


def test_reports_are_deterministic(capsys):
    args = ["--json", "oca", "check", fixture_path("gen_6x4")]
    assert rlz(capsys, *args) == rlz(capsys, *args)
