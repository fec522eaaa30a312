import pytest
from hypothesis import given, settings, strategies as st

from lpx import LazyStructure, parse_program
from lpx.corpus import range_restricted_corpus
from lpx.infinite import (
    COLLISIONS, CodeError, CodeRegistry, Pair, as_int, claim1_check, delta_n, delta_stages, flag_values, in_range,
    pair,
)
from lpx.structures import GroundAtom

from oracles import pairing_collisions


def A(name, *args):
    return GroundAtom(name, tuple(args))


def example_registry():
    # dict order fixes the atom order inside clause codes
    return CodeRegistry(flags={"P2": 2, "P3": 3, "P1": 1}, eps=4)


def test_pair_examples():
    assert pair(2, 1) == 7
    assert pair(7, 3) == 155
    assert as_int(pair(pair(pair(2, 1), 3), 5)) == 2 ** 155 + 3 ** 5


def test_pair_rejects_nonpositive():
    for bad in [(0, 1), (1, 0), (-2, 3)]:
        with pytest.raises(CodeError):
            pair(*bad)


def test_atom_code_example():
    reg = example_registry()
    assert as_int(reg.code_atom(A("P2", 1, 3, 5))) == 2 ** 155 + 3 ** 5
    assert reg.decode_atom(reg.code_atom(A("P2", 1, 3, 5))) == A("P2", 1, 3, 5)


def test_clause_code_example():
    reg = example_registry()
    atoms = [A("P2", 1, 3, 5), A("P3", 2), A("P1", 2, 4)]
    want = reg.enc([reg.enc([1, 3, 5], 2), reg.enc([2], 3), reg.enc([2, 4], 1)], 4)
    got = reg.code_clause(reversed(atoms))
    assert got == want and isinstance(got, Pair)
    assert reg.decode_clause(got) == frozenset(atoms)


def test_empty_clause_codes_to_flag():
    reg = example_registry()
    assert reg.code_clause([]) == 4
    assert reg.elements(4) == ()


def test_unreserved_predicate():
    with pytest.raises(CodeError):
        example_registry().code_atom(A("R", 1))


def test_flags_lie_outside_range():
    assert [n for n in range(1, 5) if in_range(n)] == []
    assert in_range(5) and in_range(7) and not in_range(6)
    with pytest.raises(CodeError):
        CodeRegistry(flags={"p": 5}, eps=4)
    for v in flag_values(12):
        assert not in_range(v)


def test_in_range_matches_enumeration():
    values = {2 ** m + 3 ** n for m in range(1, 12) for n in range(1, 8)}
    for v in range(1, 2000):
        assert in_range(v) == (v in values)


def test_known_collisions():
    got = pairing_collisions(200)
    assert [(m, n, m2, n2) for m, n, m2, n2 in got] == [(1, 2, 3, 1), (3, 3, 5, 1), (4, 5, 8, 1)]
    assert tuple(got) == COLLISIONS


def test_registry_detects_collision():
    reg = CodeRegistry(["p"])
    reg.pair(1, 2)
    with pytest.raises(CodeError, match="collision"):
        reg.pair(3, 1)


def test_semantic_predicates():
    reg = CodeRegistry(["p", "q", "r"])
    p1, q2, r3 = (reg.code_atom(a) for a in (A("p", 1), A("q", 2), A("r", 3)))
    one, two = reg.code_clause([A("p", 1)]), reg.code_clause([A("q", 2)])
    both = reg.mrg(one, two)
    assert reg.elements(both) == (p1, q2)
    assert reg.ext(both, q2) == one
    assert reg.in_(p1, both) and not reg.in_(r3, both)
    assert reg.subc(one, both) and not reg.subc(both, one)
    swapped = reg.mrg(two, one)
    assert swapped != both and reg.equ(swapped, both) and reg.equ(both, swapped)
    assert reg.class_key(swapped) == reg.class_key(both)
    dup = reg.mrg(both, one)
    assert reg.equ(dup, both)
    assert reg.ext(dup, p1) == two


@settings(max_examples=200)
@given(st.lists(st.integers(1, 3), max_size=4), st.lists(st.integers(1, 3), max_size=4))
def test_equ_is_set_equality(xs, ys):
    reg = CodeRegistry(["p"])
    a = reg.enc([reg.code_atom(A("p", x)) for x in xs], reg.eps)
    b = reg.enc([reg.code_atom(A("p", y)) for y in ys], reg.eps)
    assert reg.equ(a, b) == (set(xs) == set(ys)) == (reg.class_key(a) == reg.class_key(b))


def test_unregistered_code():
    with pytest.raises(CodeError):
        CodeRegistry(["p"]).split(1000)


# -- coded progression ----------------------------------------------------------

def lazy(p):
    return LazyStructure({}, pred_arity=dict(p.predicates))


def test_delta_examples():
    p = parse_program("p(1).")
    reg = CodeRegistry(p.predicates)
    assert delta_n(p, lazy(p), 0, reg) == set()
    assert delta_n(p, lazy(p), 1, reg) == {reg.code_clause([A("p", 1)])}

    p = parse_program("p(1) ; q(2).")
    reg = CodeRegistry(p.predicates)
    got = delta_n(p, lazy(p), 1, reg)
    assert {reg.class_key(c) for c in got} == {reg.class_key(reg.code_clause([A("p", 1), A("q", 2)]))}


def test_delta_two_stages():
    p = parse_program("p(1). q(2) :- p(1).")
    run = delta_stages(p, lazy(p), 2)
    reg = run.registry
    decoded = [{reg.decode_clause(c) for c in stage.values()} for stage in run.stages]
    assert decoded[1] == {frozenset({A("p", 1)})}
    assert decoded[2] == {frozenset({A("p", 1)}), frozenset({A("q", 2)})}


@pytest.mark.parametrize("text", ["p(1). q(2) :- p(1).", "p(1) ; q(1). r(1) :- p(1)."])
def test_claim1_examples(text):
    p = parse_program(text)
    rep = claim1_check(p, lazy(p), 2)
    assert rep.passed, rep.lines()
    assert claim1_check(p, lazy(p), 0).stages == [(0, 0, 0, [], [])]


def test_claim1_disjunctive_stage_two():
    p = parse_program("p(1) ; q(1). r(1) :- p(1).")
    run = delta_stages(p, lazy(p), 2)
    reg = run.registry
    stage2 = {reg.decode_clause(c) for c in run.stages[2].values()}
    assert frozenset({A("r", 1), A("q", 1)}) in stage2


def test_claim1_with_extensional_support():
    p = parse_program("p(X) ; q(X) :- e(X), not r(X). r(X) :- p(X), e(X).")
    base = LazyStructure({"e": {(1,), (3,)}}, pred_arity={"p": 1, "q": 1, "r": 1})
    assert claim1_check(p, base, 4).passed


@pytest.mark.parametrize("seed", range(3))
def test_claim1_on_range_restricted_corpus(seed):
    for p in range_restricted_corpus(10, seed=seed):
        preds = dict(p.predicates)
        base = LazyStructure({"e": {(1,), (2,)}}, pred_arity={k: v for k, v in preds.items() if k != "e"})
        rep = claim1_check(p, base, 3)
        assert rep.passed, "\n".join(rep.lines())
