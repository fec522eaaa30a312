import json

import pytest

from lpx.cli import RunConfig, UsageError, main


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_example(files, capsys):
    pq = files("pq.lp", "p ; q.\n")
    code, out, _ = run(capsys, "solve", "--program", pq, "--domain-size", "1", "--aux", "p,q")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "% 2 stable expansions"
    found = [json.loads(l)["predicates"] for l in lines[:-1]]
    assert sorted((bool(m["p"]), bool(m["q"])) for m in found) == [(False, True), (True, False)]


def test_solve_brute_agrees(files, capsys):
    path = files("a.lp", "p(X) ; q(X). r(X) :- p(X), not q(X).\n")
    _, ground, _ = run(capsys, "solve", path, "--domain-size", "2")
    _, brute, _ = run(capsys, "solve", path, "--domain-size", "2", "--method", "brute")
    assert ground == brute


def test_check_equiv_shift(files, capsys):
    pq = files("pq.lp", "p ; q.\n")
    shifted = files("shifted.lp", "")
    assert run(capsys, "transform", pq, "--kind", "shift", "--out", shifted)[0] == 0
    code, out, _ = run(capsys, "check-equiv", pq, shifted, "--max-domain", "2")
    assert code == 0 and out.splitlines()[-1] == "EQUIVALENT"


def test_check_equiv_mismatch(files, capsys):
    a, b = files("a.lp", "p ; q.\n"), files("b.lp", "p.\n")
    code, out, err = run(capsys, "check-equiv", a, b, "--max-domain", "1")
    assert code == 1 and "NOT EQUIVALENT" in out and err


def test_check_equiv_with_aux(files, capsys):
    a = files("a.lp", "p :- not q. q :- not p.\n")
    b = files("b.lp", "p :- not s. s :- not p. q :- s.\n")
    code, out, _ = run(capsys, "check-equiv", a, b, "--max-domain", "1", "--aux-b", "s")
    assert code == 0, out


def test_parse_error_location(files, capsys):
    bad = files("bad.lp", "p :- q.\nX = Y :- p.\n")
    code, out, err = run(capsys, "parse", bad)
    assert code == 2 and out == ""
    assert "bad.lp:2:1" in err and "equality" in err


def test_parse_classification(files, capsys):
    path = files("a.lp", "p(X) ; q(X) :- e(X), not r(X).\n")
    code, out, _ = run(capsys, "parse", path)
    assert code == 0
    assert out.splitlines() == [
        "p(X) ; q(X) :- e(X), not r(X).",
        "% 1 rules, disjunctive, plain",
        "% intensional: p, q",
        "% extensional: e, r",
    ]


def test_usage_errors(files, capsys):
    pq = files("pq.lp", "p ; q.\n")
    assert run(capsys, "solve", pq)[0] == 2
    assert run(capsys, "solve", pq, "--domain-size", "0")[0] == 2
    assert run(capsys, "transform", pq, "--kind", "shift", "--out", pq)[0] == 2
    assert run(capsys, "transform", "--kind", "so2dlp")[0] == 2
    assert run(capsys, "solve", "missing.lp", "--domain-size", "1")[0] == 2
    code, _, err = run(capsys, "transform", pq, "--kind", "shift", "--out", files("o.lp", ""), "--manifest",
                       files("o.lp", ""))
    assert code == 2 and err


def test_nonzero_exits_write_diagnostics(files, capsys):
    loop = files("loop.lp", "p ; q. p :- q. q :- p.\n")
    code, _, err = run(capsys, "transform", loop, "--kind", "shift")
    assert code == 2 and "head" in err


def test_config_validation():
    with pytest.raises(UsageError):
        RunConfig("solve", ["a.lp"], domain_size=-1).validate()
    with pytest.raises(UsageError):
        RunConfig("transform", ["a.lp"], output="a.lp").validate()
    RunConfig("solve", ["a.lp"], domain_size=2).validate()


def test_json_schema(files, capsys):
    pq = files("pq.lp", "p ; q.\n")
    for argv in [("parse", pq), ("solve", pq, "--domain-size", "1"), ("progress", pq, "--domain-size", "1"),
                 ("transform", pq, "--kind", "dlp2nlp"), ("check-equiv", pq, pq), ("sm-formula", pq),
                 ("ground", pq, "--domain-size", "1")]:
        code, out, _ = run(capsys, *argv, "--json")
        report = json.loads(out)
        assert code == 0 and report["schema"] == 1 and report["command"] == argv[0]


def test_ground_and_progress(files, capsys):
    path = files("a.lp", "r :- p. p ; q.\n")
    code, out, _ = run(capsys, "ground", path, "--domain-size", "1")
    assert code == 0 and out.splitlines() == ["p ; q.", "r :- p."]
    code, out, _ = run(capsys, "progress", path, "--domain-size", "1")
    assert out.splitlines() == ["% stage 0: 0 clauses", "% stage 1: 1 clauses", "p | q", "% stage 2: 2 clauses",
                                "p | q", "q | r", "% fixed point reached at stage 2"]


def test_transform_manifest(files, capsys, tmp_path):
    pq = files("pq.lp", "p ; q.\n")
    out_path, man = str(tmp_path / "out.lp"), str(tmp_path / "m.json")
    code, _, _ = run(capsys, "transform", pq, "--kind", "dlp2nlp", "--out", out_path, "--manifest", man)
    assert code == 0
    manifest = json.loads(open(man).read())
    names = {s["name"] for s in manifest["symbols"]}
    assert {"__enc", "__true", "__c_eps", "__c_p", "__c_q"} <= names
    code, out, _ = run(capsys, "parse", out_path)
    assert code == 0 and "normal" in out


def test_transform_so2dlp_and_parity(capsys):
    code, out, _ = run(capsys, "transform", "--kind", "so2dlp", "--matrix", "y(X) | ~y(X)", "--sigma", "y:1",
                       "--xs", "X")
    assert code == 0 and ":-" in out
    code, out, _ = run(capsys, "transform", "--kind", "parity", "--k", "1", "--json")
    report = json.loads(out)
    assert report["counts"]["sweep_first"] == 56


def test_claim1(files, capsys):
    path = files("c.lp", "p(1). q(2) :- p(1).\n")
    code, out, _ = run(capsys, "claim1", path, "--stages", "2")
    assert code == 0
    assert out.splitlines() == ["stage 0: gamma=0 delta=0 ok", "stage 1: gamma=1 delta=1 ok",
                                "stage 2: gamma=2 delta=2 ok", "PASS"]
    facts = files("f.json", json.dumps({"predicates": {"e": [[1], [3]]}}))
    path = files("d.lp", "p(X) ; q(X) :- e(X), not r(X).\n")
    code, out, _ = run(capsys, "claim1", path, "--facts", facts, "--stages", "3", "--dump-codes")
    assert code == 0 and "PASS" in out and "atom" in out


def test_sm_formula(files, capsys):
    code, out, _ = run(capsys, "sm-formula", files("a.lp", "p.\n"))
    assert code == 0 and "forall" in out


def test_outputs_are_deterministic(files, capsys):
    path = files("a.lp", "p(X) ; q(X) :- not r(X). r(X) :- p(X), q(X).\n")
    for argv in [("solve", path, "--domain-size", "2"), ("transform", path, "--kind", "dlp2nlp", "--json"),
                 ("progress", path, "--domain-size", "2")]:
        first = run(capsys, *argv)
        assert all(run(capsys, *argv) == first for _ in range(2))
