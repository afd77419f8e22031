import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from temporal_qcsp.cli import main

DATA = Path(__file__).parent.parent / "data"
LANG = DATA / "languages"


def schema(name):
    return json.loads(resources.files("temporal_qcsp").joinpath("schemas", f"{name}.json").read_text())


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, cmd, *argv):
    code, out, err = run(capsys, cmd, *argv, "--json")
    payload = json.loads(out)
    jsonschema.validate(payload, schema(cmd))
    return code, payload


@pytest.mark.parametrize("file, code, label", [
    ("leq.json", 0, "P"), ("eqxor.json", 10, "NP-hard"), ("betwc.json", 11, "coNP-hard"),
    ("i.json", 11, "coNP-hard"),
])
def test_classify(capsys, file, code, label):
    got, payload = run_json(capsys, "classify", "--language", LANG / file)
    assert (got, payload["label"]) == (code, label)
    text_code, text, _ = run(capsys, "classify", "--language", LANG / file)
    assert text_code == code and f"label: {label}" in text
    # text and JSON carry the same trail
    for step in payload["trail"]:
        assert step["check"] in text


def test_classify_bounds_recorded(capsys):
    _, payload = run_json(capsys, "classify", "--catalog", "leq", "--bounds", "E=1,A=3,D=1,C=4")
    assert payload["bounds"]["max_exists"] == 1 and payload["bounds"]["goh_depth"] == 1


def test_poly_check(capsys):
    code, payload = run_json(capsys, "poly-check", "--op", "cyc", "--language", LANG / "betwc.json")
    assert code == 0 and payload["preserved"] is False and payload["violation"]["concrete"]
    code, payload = run_json(capsys, "poly-check", "--op", "minus", "--language", LANG / "betwc.json")
    assert code == 0 and payload["preserved"] is True
    code, payload = run_json(capsys, "poly-check", "--op", DATA / "ops" / "wave.json", "--catalog", "leq")
    assert code == 0


def test_pp_eval_gadget(capsys):
    expr = "E u. E v. betwc(x,y,u) & betwc(x,y,v) & betwc(u,v,z)"
    code, payload = run_json(capsys, "pp-eval", "--language", LANG / "betwc.json", "--expr", expr)
    assert code == 0 and len(payload["orbits"]) == 11
    _, text, _ = run(capsys, "pp-eval", "--language", LANG / "betwc.json", "--expr", expr)
    assert "11 orbits" in text


def test_pp_search(capsys):
    code, payload = run_json(capsys, "pp-search", "--catalog", "less", "--target", "greater")
    assert code == 0 and payload["found"] and payload["definition"] == "less(y,x)"
    code, payload = run_json(capsys, "pp-search", "--catalog", "less", "--target", "leq",
                             "--bounds", "E=1,A=2")
    assert code == 0 and not payload["found"]


def test_qcsp_eval(capsys):
    code, payload = run_json(capsys, "qcsp-eval", "--catalog", "less", "--expr", "A x. E y. less(x,y)")
    assert code == 0 and payload["value"] is True
    inst = DATA / "instances" / "leq_chain.txt"
    code, payload = run_json(capsys, "qcsp-eval", "--language", LANG / "leq.json", "--instance", inst)
    assert code == 0 and payload["value"] is False


@pytest.mark.parametrize("kind, rel, definable", [
    ("oh", "i", True), ("oh", "betwc", False), ("positive", "leq", True), ("positive", "neq", False),
    ("equality", "eqxor", True), ("goh", "leq", True), ("goh", "i", False),
])
def test_define(capsys, kind, rel, definable):
    # the answer lives in the payload; the exit code only reports input problems
    code, payload = run_json(capsys, "define", "--kind", kind, "--relation", rel)
    assert bool(payload["definable"]) is definable
    assert code == 0


def test_goh_of_non_ordhorn_is_an_input_error(capsys):
    code, _, err = run(capsys, "define", "--kind", "goh", "--relation", "betwc")
    assert code == 2 and "Ord-Horn" in err


def test_define_formula_relation(capsys):
    code, payload = run_json(capsys, "define", "--kind", "oh", "--relation", "x<=y & y<=z")
    assert code == 0 and payload["definable"]


def test_unary_classify(capsys):
    code, payload = run_json(capsys, "unary-classify", "--op", DATA / "ops" / "peak.json")
    assert payload["verdict"] == "generates-peak"
    code, payload = run_json(capsys, "unary-classify", "--op", "cyc")
    assert payload["verdict"] == "generates-cyc"


def test_generate_check(capsys):
    code, payload = run_json(capsys, "generate-check", "--from", "ic,ci", "--to", "su1")
    assert payload["outcome"] == "no-counterexample-up-to-3"
    code, payload = run_json(capsys, "generate-check", "--from", "ic", "--to", "su1")
    assert payload["outcome"] == "counterexample" and payload["counterexample"]


def test_generate_check_records_seed(capsys):
    _, payload = run_json(capsys, "generate-check", "--from", "ic,ci", "--to", "su1", "--arity", "4",
                          "--samples", "20", "--seed", "9")
    assert payload["seed"] == 9 and payload["sampled"] == 20


def test_catalog(capsys):
    code, payload = run_json(capsys, "catalog")
    counts = {r["name"]: r["orbits"] for r in payload["relations"]}
    assert counts["BetwC"] == 3 and counts["CyclC"] == 4 and counts["I"] == 11
    assert counts["Sep"] == 8 and counts["S"] == 7
    _, text, _ = run(capsys, "catalog")
    assert "BetwC" in text


def test_sweep_subset(capsys):
    code, payload = run_json(capsys, "sweep", "--suite", "constants,equality")
    assert code == 0 and all(s["counterexamples"] == 0 for s in payload["suites"])


@pytest.mark.parametrize("argv, needle", [
    (["classify", "--language", "/nonexistent.json"], "no such file"),
    (["classify"], "--language"),
    (["classify", "--catalog", "nope"], "nope"),
    (["classify", "--catalog", "leq", "--bounds", "Q=1"], "--bounds"),
    (["qcsp-eval", "--catalog", "less", "--expr", "A x. less(x,y)"], "unbound"),
    (["pp-eval", "--catalog", "less", "--expr", "less(x,"], "position"),
    (["poly-check", "--op", "bogus", "--catalog", "less"], "bogus"),
])
def test_input_errors(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == 2 and needle in err


def test_malformed_language_file(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"relations": [{"name": "r", "arity": 2, "formula": "x<"}]}')
    code, _, err = run(capsys, "classify", "--language", p)
    assert code == 2 and "bad.json" in err


def test_arity_ceiling(capsys):
    code, _, err = run(capsys, "define", "--kind", "oh", "--relation", "x<y & y<z & z<u", "--max-arity", "3")
    assert code == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "tqcsp" in capsys.readouterr().out


@pytest.mark.parametrize("file", sorted(LANG.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_languages_validate(file):
    jsonschema.validate(json.loads(file.read_text()), schema("language"))


@pytest.mark.parametrize("file", sorted((DATA / "ops").glob("*.json")), ids=lambda p: p.stem)
def test_shipped_ops_validate(file):
    jsonschema.validate(json.loads(file.read_text()), schema("op-spec"))


def test_define_keeps_formula_variable_names(capsys):
    code, payload = run_json(capsys, "define", "--kind", "goh", "--relation", "a<=b & (a!=b | c<=d)")
    assert payload["certificate"] == "a<=b & (a!=b | c<=d)"
