"""Finite model search for universal theories with open predicates and functions.

The theory is grounded over a fixed finite base into propositional clauses:
open predicate cells become Boolean variables, open function cells become
one-hot value variables, and subformulas get Tseitin definitions.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping

from . import formula as F
from .sat import Solver
from .structures import EvaluationError, Structure, eval_term, evaluate
from .syntax import Eq, Fn, Pred, Var

TRUE, FALSE = True, False


class _Encoder:
    def __init__(self, base: Structure, preds: Mapping[str, int], funcs: Mapping[str, int]):
        self.base = base
        self.preds = dict(preds)
        self.funcs = dict(funcs)
        self.solver = Solver()
        self.pvar: dict = {}
        self.fvar: dict = {}
        self.cache: dict = {}
        dom = base.domain
        for name in sorted(self.preds):
            for args in itertools.product(dom, repeat=self.preds[name]):
                self.pvar[(name, args)] = self.solver.new_var()
        for name in sorted(self.funcs):
            for args in itertools.product(dom, repeat=self.funcs[name]):
                vs = {d: self.solver.new_var() for d in dom}
                self.fvar[(name, args)] = vs
                self.solver.add_clause(list(vs.values()))
                for a, b in itertools.combinations(vs.values(), 2):
                    self.solver.add_clause([-a, -b])

    # -- literal algebra over {True, False, int} ---------------------------
    def and_(self, lits) -> object:
        out = []
        for l in lits:
            if l is FALSE:
                return FALSE
            if l is not TRUE:
                out.append(l)
        out = list(dict.fromkeys(out))
        if not out:
            return TRUE
        if len(out) == 1:
            return out[0]
        if any(-l in out for l in out):
            return FALSE
        key = ("and", frozenset(out))
        if key in self.cache:
            return self.cache[key]
        v = self.solver.new_var()
        for l in out:
            self.solver.add_clause([-v, l])
        self.solver.add_clause([v] + [-l for l in out])
        self.cache[key] = v
        return v

    def or_(self, lits) -> object:
        return self.neg(self.and_(self.neg(l) for l in lits))

    @staticmethod
    def neg(l):
        if l is TRUE:
            return FALSE
        if l is FALSE:
            return TRUE
        return -l

    # -- terms: either a concrete element or {element: literal} -----------
    def term(self, t, a) -> object:
        if isinstance(t, Var):
            return a[t.name]
        if t.name not in self.funcs:
            if not t.args:
                return eval_term(self.base, a, t)
            args = [self.term(x, a) for x in t.args]
            if all(not isinstance(x, dict) for x in args):
                return self.base.apply(t.name, tuple(args))
            return self._cases(args, lambda combo: {self.base.apply(t.name, combo): TRUE})
        args = [self.term(x, a) for x in t.args]
        if all(not isinstance(x, dict) for x in args):
            return dict(self.fvar[(t.name, tuple(args))])
        return self._cases(args, lambda combo: dict(self.fvar[(t.name, combo)]))

    def _options(self, x) -> list:
        return list(x.items()) if isinstance(x, dict) else [(x, TRUE)]

    def _cases(self, args, inner) -> dict:
        acc: dict = {}
        for combo in itertools.product(*(self._options(x) for x in args)):
            vals = tuple(v for v, _ in combo)
            cond = self.and_(l for _, l in combo)
            for d, l in inner(vals).items():
                acc.setdefault(d, []).append(self.and_([cond, l]))
        return {d: self.or_(ls) for d, ls in acc.items()}

    def atom(self, atom, a) -> object:
        if isinstance(atom, Eq):
            left = self._options(self.term(atom.left, a))
            right = dict(self._options(self.term(atom.right, a)))
            return self.or_(self.and_([l, right[d]]) for d, l in left if d in right)
        args = [self.term(x, a) for x in atom.args]
        parts = []
        for combo in itertools.product(*(self._options(x) for x in args)):
            vals = tuple(v for v, _ in combo)
            if atom.name in self.preds:
                cell = self.pvar[(atom.name, vals)]
            else:
                cell = TRUE if self.base.holds(atom.name, vals) else FALSE
            parts.append(self.and_([l for _, l in combo] + [cell]))
        return self.or_(parts)

    def formula(self, f, a) -> object:
        if isinstance(f, F.Atomic):
            return self.atom(f.atom, a)
        if isinstance(f, F.Not):
            return self.neg(self.formula(f.arg, a))
        if isinstance(f, F.And):
            return self.and_(self.formula(g, a) for g in f.args)
        if isinstance(f, F.Or):
            return self.or_(self.formula(g, a) for g in f.args)
        if isinstance(f, F.Implies):
            return self.or_([self.neg(self.formula(f.left, a)), self.formula(f.right, a)])
        if isinstance(f, F.Iff):
            l, r = self.formula(f.left, a), self.formula(f.right, a)
            return self.or_([self.and_([l, r]), self.and_([self.neg(l), self.neg(r)])])
        raise EvaluationError(f"quantifier inside a universal matrix: {type(f).__name__}")

    def assert_(self, lit) -> None:
        if lit is TRUE:
            return
        if lit is FALSE:
            self.solver.add_clause([])
        else:
            self.solver.add_clause([lit])

    def decode(self, m) -> Structure:
        preds = {n: set() for n in self.preds}
        for (name, args), v in self.pvar.items():
            if m[v]:
                preds[name].add(args)
        funcs = {n: {} for n in self.funcs}
        for (name, args), vs in self.fvar.items():
            funcs[name][args] = next(d for d, v in vs.items() if m[v])
        return self.base.expand(preds, funcs, self.preds, self.funcs)

    def project(self) -> list[int]:
        out = list(self.pvar.values())
        for vs in self.fvar.values():
            out.extend(vs.values())
        return out


def _encode(base: Structure, conjuncts: Iterable, preds, funcs) -> _Encoder:
    enc = _Encoder(base, preds, funcs)
    for c in conjuncts:
        vs = F.ordered_free_vars(c)
        for vals in itertools.product(base.domain, repeat=len(vs)):
            enc.assert_(enc.formula(c, dict(zip(vs, vals))))
            if enc.solver.empty:
                return enc
    return enc


def _split(theory) -> tuple[list, dict, dict]:
    preds = {s.name: s.arity for s in theory.prefix if s.kind == "pred"}
    funcs = {s.name: s.arity for s in theory.prefix if s.kind == "func"}
    return theory.conjuncts(), preds, funcs


def find_model(base: Structure, theory) -> Structure | None:
    """An expansion of ``base`` over the theory's prefix satisfying its matrix, or None."""
    conjuncts, preds, funcs = _split(theory)
    base = base.restrict(base.vocabulary() - set(preds) - set(funcs))
    enc = _encode(base, conjuncts, preds, funcs)
    m = enc.solver.solve(order=enc.project())
    return None if m is None else enc.decode(m)


def models(base: Structure, theory) -> Iterator[Structure]:
    """Every expansion of ``base`` over the prefix that satisfies the matrix."""
    conjuncts, preds, funcs = _split(theory)
    base = base.restrict(base.vocabulary() - set(preds) - set(funcs))
    enc = _encode(base, conjuncts, preds, funcs)
    project = enc.project()
    for m in enc.solver.models(project, order=project):
        yield enc.decode(m)


def satisfies(s: Structure, theory) -> bool:
    """Direct check that a structure interpreting the prefix satisfies ∀x̄ matrix."""
    for c in theory.conjuncts():
        vs = F.ordered_free_vars(c)
        for vals in itertools.product(s.domain, repeat=len(vs)):
            if not evaluate(s, dict(zip(vs, vals)), c):
                return False
    return True
