import random

import pytest
from hypothesis import given, settings, strategies as st

from lpx import ParseError, Program, classify, parse_program, render_program
from lpx.corpus import random_program
from lpx.formula import (
    And, Atomic, Implies, Not, SOForall, dnf, parse_formula, render, sm_formula, sm_parts,
)
from lpx.semantics import enumerate_stable_expansions
from lpx.structures import Structure, evaluate
from lpx.syntax import Eq, Literal, Pred, Var, const
from lpx.transforms import dlp_to_nlp_infinite

from oracles import all_interpretations, holds


def test_parse_negated_body():
    p = parse_program("p :- not q.")
    assert len(p.rules) == 1
    r = p.rules[0]
    assert r.head == (Pred("p", ()),)
    assert r.body == (Literal(Pred("q", ()), True),)


def test_parse_disjunctive_fact():
    r = parse_program("p ; q.").rules[0]
    assert [a.name for a in r.head] == ["p", "q"]
    assert r.body == ()


def test_parse_constraint_with_constant():
    r = parse_program("#false :- enc(X,Y,c_p).").rules[0]
    assert r.head == ()
    assert r.body == (Literal(Pred("enc", (Var("X"), Var("Y"), const("c_p")))),)


def test_parse_equalities_and_comments():
    p = parse_program("% a comment\np(X) :- q(X, Y), X != Y, Y = 3.  % trailing\n")
    body = p.rules[0].body
    assert body[1] == Literal(Eq(Var("X"), Var("Y")), True)
    assert body[2] == Literal(Eq(Var("Y"), const("3")))


def test_render_examples():
    assert render_program(Program(())) == ""
    assert render_program(parse_program("p :- not q.")) == "p :- not q."


@pytest.mark.parametrize("text, line, col", [
    ("p :- q.\nX = Y :- p.", 2, 1),
    ("p :- not.", 1, 9),
    ("not p :- q.", 1, 1),
    ("p(X) :- q(X", 1, 12),
    ("p(a). p(a, b).", 1, 7),
    ("p :- q ?", 1, 8),
])
def test_parse_errors_carry_location(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_program(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_function_arity_clash_is_rejected():
    with pytest.raises(ParseError):
        parse_program("p(f(X)) :- q(f(X, X)).")


def test_classify_examples():
    c = classify(parse_program("p ; q."))
    assert (c.normal, c.plain, c.intensional) == (False, True, frozenset({"p", "q"}))
    c = classify(parse_program("p :- not p."))
    assert (c.normal, c.plain) == (True, False)


def test_classify_encoding_output_is_normal():
    for seed in range(30):
        p = random_program(random.Random(seed))
        assert classify(dlp_to_nlp_infinite(p).program).normal


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_render_parse_round_trip(seed, constants):
    p = random_program(random.Random(seed), constants=constants)
    assert parse_program(render_program(p)) == p


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_encoding_output_round_trips(seed):
    q = dlp_to_nlp_infinite(random_program(random.Random(seed))).program
    assert parse_program(render_program(q)) == q


# -- SM(Π) -----------------------------------------------------------------

def test_sm_parts_single_fact():
    parts = sm_parts(parse_program("p."))
    assert parts.phi == Atomic(Pred("p", ()))
    assert parts.phi_star == Atomic(Pred("p*", ()))
    p, ps = Atomic(Pred("p", ())), Atomic(Pred("p*", ()))
    assert parts.less == And((Implies(ps, p), Not(Implies(p, ps))))


def test_sm_star_leaves_extensional_and_negated_atoms():
    parts = sm_parts(parse_program("p :- not q."))
    q, ps = Atomic(Pred("q", ())), Atomic(Pred("p*", ()))
    assert parts.phi_star == Implies(Not(q), ps)


def test_sm_star_both_occurrences_positive():
    parts = sm_parts(parse_program("p :- p."))
    ps = Atomic(Pred("p*", ()))
    assert parts.phi_star == Implies(ps, ps)
    found = list(enumerate_stable_expansions(Structure([1]), parse_program("p :- p."), ["p"]))
    assert len(found) == 1 and not found[0].holds("p", ())


def test_sm_formula_is_second_order_over_intensional():
    f = sm_formula(parse_program("p(X) :- q(X), not r(X)."))
    inner = f.args[1]
    assert isinstance(inner, SOForall)
    assert [v.name for v in inner.symbols] == ["p*"]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_sm_formula_truth_matches_stable_oracle(seed):
    from oracles import is_stable
    p = random_program(random.Random(seed), max_arity=1, n_preds=2, equality=False)
    f = sm_formula(p)
    dom = (1, 2)
    for rels, _ in all_interpretations(dom, p.predicates):
        s = Structure(dom, rels, {}, pred_arity=p.predicates)
        assert evaluate(s, {}, f) == is_stable(dom, rels, {}, p)


# -- quantifier-free formula text ---------------------------------------------

@pytest.mark.parametrize("text", [
    "y(X) | ~y(X)",
    "p(X, Y) & X != Y -> q(f(X))",
    "(a <-> b) & ~(c | d)",
    "true",
    "p(1) | X = 2",
])
def test_formula_text_round_trip(text):
    f = parse_formula(text)
    assert parse_formula(render(f)) == f


def test_formula_parse_error():
    with pytest.raises(ParseError):
        parse_formula("p(X) &")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_dnf_agrees_with_truth_table(seed):
    rng = random.Random(seed)
    atoms = [Atomic(Pred(n, ())) for n in "abc"]

    def build(depth):
        if depth == 0 or rng.random() < 0.3:
            return rng.choice(atoms)
        kind = rng.choice(["not", "and", "or", "imp", "iff"])
        if kind == "not":
            return Not(build(depth - 1))
        from lpx.formula import Iff, Or
        l, r = build(depth - 1), build(depth - 1)
        return {"and": And((l, r)), "or": Or((l, r)), "imp": Implies(l, r), "iff": Iff(l, r)}[kind]

    f = build(4)
    terms = dnf(f)
    for rels, _ in all_interpretations((1,), {"a": 0, "b": 0, "c": 0}):
        want = holds(f, {}, rels, {})
        got = any(all((l.atom.args in rels[l.atom.name]) != l.negated for l in t) for t in terms)
        assert got == want
