import random

import pytest
from hypothesis import given, settings, strategies as st

from lpx import GroundRule, LazyStructure, RangeRestrictionError, Structure, gl_reduct, parse_program, parse_rule
from lpx.corpus import random_program
from lpx.grounding import render_ground, split_rule
from lpx.structures import GroundAtom

from oracles import all_interpretations, atom_true, rule_instances, term_value


def A(name, *args):
    return GroundAtom(name, tuple(args))


def test_split_examples():
    p = parse_program("p :- q, not r. q. r.")
    s = split_rule(p.rules[0], p)
    assert [a.name for a in s.positive_intensional_body] == ["q"]
    assert [str(l) for l in s.residue] == ["not r"]

    p = parse_program("p(X) :- e(X), p(X).")
    s = split_rule(p.rules[0], p)
    assert [str(a) for a in s.positive_intensional_body] == ["p(X)"]
    assert [str(l) for l in s.residue] == ["e(X)"]

    r = parse_rule("p :- X = Y.")
    s = split_rule(r, parse_program("p :- X = Y."))
    assert s.positive_intensional_body == () and [str(l) for l in s.residue] == ["X = Y"]


def test_reduct_examples():
    p = parse_program("p :- not q.")
    off = Structure([0], {"p": set(), "q": set()}, pred_arity={"p": 0, "q": 0})
    on = Structure([0], {"p": set(), "q": {()}}, pred_arity={"p": 0})
    assert gl_reduct(p, off) == {GroundRule(frozenset(), frozenset({A("p")}))}
    assert gl_reduct(p, on) == frozenset()

    p = parse_program("p(X) :- e(X), not q(X).")
    s = Structure([0, 1], {"e": {(0,), (1,)}, "q": {(1,)}, "p": set()}, pred_arity={"p": 1})
    assert gl_reduct(p, s) == {GroundRule(frozenset(), frozenset({A("p", 0)}))}


def test_render_ground_uses_lp_grammar():
    p = parse_program("p(X) ; q(X) :- e(X), r(X). r(1).")
    s = Structure([1, 2], {"e": {(1,)}, "p": set(), "q": set(), "r": set()},
                  pred_arity={"p": 1, "q": 1, "r": 1})
    text = render_ground(gl_reduct(p, s))
    assert text.splitlines() == ["p(1) ; q(1) :- r(1).", "r(1)."]
    parse_program(text)


def test_lazy_grounding_needs_range_restriction():
    p = parse_program("p(X) :- not q(X).")
    with pytest.raises(RangeRestrictionError):
        gl_reduct(p, LazyStructure({"p": set(), "q": set()}, pred_arity={"p": 1, "q": 1}))


def test_lazy_grounding_enumerates_from_facts():
    p = parse_program("p(X) :- e(X), not q(X).")
    s = LazyStructure({"e": {(3,), (5,)}, "q": {(5,)}, "p": set()}, pred_arity={"p": 1})
    assert gl_reduct(p, s) == {GroundRule(frozenset(), frozenset({A("p", 3)}))}


def oracle_reduct(p, dom, rels):
    """The reduct by definition: every assignment whose residue holds."""
    tau = p.intensional
    out = set()
    for r, a in rule_instances(p, dom):
        pos = [l.atom for l in r.body if not l.negated and getattr(l.atom, "name", None) in tau]
        residue = [l for l in r.body if l.atom not in pos or l.negated]
        if all(atom_true(l.atom, a, rels, {}) != l.negated for l in residue):
            body = frozenset(A(x.name, *(term_value(t, a, {}) for t in x.args)) for x in pos)
            head = frozenset(A(h.name, *(term_value(t, a, {}) for t in h.args)) for h in r.head)
            out.add(GroundRule(body, head))
    return frozenset(out)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_reduct_matches_definition(seed):
    p = random_program(random.Random(seed), max_arity=1)
    dom = (1, 2)
    for k, (rels, _) in enumerate(all_interpretations(dom, p.predicates)):
        if k > 20:
            break
        s = Structure(dom, rels, {}, pred_arity=p.predicates)
        assert gl_reduct(p, s) == oracle_reduct(p, dom, rels)
