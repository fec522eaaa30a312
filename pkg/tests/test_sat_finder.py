import itertools
import random

from hypothesis import given, settings, strategies as st

from lpx.finder import find_model, models, satisfies
from lpx.formula import SOVar, parse_formula
from lpx.sat import Solver, satisfiable
from lpx.structures import Structure, save_structure
from lpx.transforms import UniversalTheory

from oracles import all_interpretations, universally_true


def brute_models(nvars, clauses):
    out = []
    for bits in itertools.product((False, True), repeat=nvars):
        m = (None,) + bits
        if all(any(m[abs(l)] == (l > 0) for l in c) for c in clauses):
            out.append(bits)
    return out


def random_cnf(rng, nvars, nclauses):
    return [[rng.choice((1, -1)) * rng.randint(1, nvars) for _ in range(rng.randint(1, 3))]
            for _ in range(nclauses)]


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 9), st.integers(0, 40))
def test_solver_agrees_with_truth_table(seed, nvars, nclauses):
    clauses = random_cnf(random.Random(seed), nvars, nclauses)
    want = brute_models(nvars, clauses)
    got = satisfiable(clauses)
    assert (got is not None) == bool(want)
    if got is not None:
        assert all(any(got[abs(l)] == (l > 0) for l in c) for c in clauses)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7), st.integers(0, 25))
def test_model_enumeration_is_complete(seed, nvars, nclauses):
    clauses = random_cnf(random.Random(seed), nvars, nclauses)
    s = Solver(nvars)
    for c in clauses:
        s.add_clause(c)
    got = {tuple(m[1:nvars + 1]) for m in s.models(list(range(1, nvars + 1)))}
    assert got == set(brute_models(nvars, clauses))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 8))
def test_assumptions(seed, nvars):
    rng = random.Random(seed)
    clauses = random_cnf(rng, nvars, 3 * nvars)
    assume = [rng.choice((1, -1)) * v for v in rng.sample(range(1, nvars + 1), 2)]
    s = Solver(nvars)
    for c in clauses:
        s.add_clause(c)
    want = brute_models(nvars, clauses + [[a] for a in assume])
    got = s.solve(assumptions=assume)
    assert (got is not None) == bool(want)
    # assumptions never become permanent
    assert (s.solve() is not None) == bool(brute_models(nvars, clauses))


def test_pigeonhole_is_unsat():
    # 5 pigeons, 4 holes
    v = lambda i, j: i * 4 + j + 1
    s = Solver(20)
    for i in range(5):
        s.add_clause([v(i, j) for j in range(4)])
    for j in range(4):
        for a, b in itertools.combinations(range(5), 2):
            s.add_clause([-v(a, j), -v(b, j)])
    assert s.solve() is None


# -- finite model finding for universal theories ----------------------------

THEORIES = [
    ("p(X) -> q(f(X))", [("p", 1, "pred"), ("q", 1, "pred"), ("f", 1, "func")]),
    ("lt(X, Y) -> ~lt(Y, X)", [("lt", 2, "pred")]),
    ("f(X) != X & (p(X) <-> ~p(f(X)))", [("p", 1, "pred"), ("f", 1, "func")]),
    ("c = X | r(X, c)", [("c", 0, "func"), ("r", 2, "pred")]),
    ("p(g(X, Y)) | X = Y", [("p", 1, "pred"), ("g", 2, "func")]),
    ("~(X = Y)", []),
]


def brute_theory_models(dom, matrix, prefix):
    preds = {n: a for n, a, k in prefix if k == "pred"}
    funcs = {n: a for n, a, k in prefix if k == "func"}
    from lpx.formula import ordered_free_vars
    vs = ordered_free_vars(matrix)
    out = set()
    for rels, fns in all_interpretations(dom, preds, funcs):
        if universally_true(dom, matrix, vs, rels, fns):
            s = Structure(dom, rels, fns, pred_arity=preds, func_arity=funcs)
            out.add(save_structure(s))
    return out


def test_finder_matches_brute_force():
    for text, prefix in THEORIES:
        matrix = parse_formula(text)
        t = UniversalTheory(tuple(SOVar(n, a, k) for n, a, k in prefix), matrix)
        for size in (1, 2):
            dom = tuple(range(1, size + 1))
            want = brute_theory_models(dom, matrix, prefix)
            got = {save_structure(s) for s in models(Structure(dom), t)}
            assert got == want, (text, size)
            m = find_model(Structure(dom), t)
            assert (m is None) == (not want)
            if m is not None:
                assert satisfies(m, t)
