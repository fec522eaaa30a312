"""Brute-force reference implementations, written against the AST only.

Nothing here calls into lpx's grounding, semantics, SAT or finder code; the
tests compare those engines against these definitions.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Mapping

from lpx.formula import And, Atomic, Iff, Implies, Not, Or
from lpx.syntax import Eq, Fn, Pred, Program, Var, is_numeral


def term_value(t, a: Mapping, funcs: Mapping):
    if isinstance(t, Var):
        return a[t.name]
    if not t.args and is_numeral(t.name):
        return int(t.name)
    args = tuple(term_value(x, a, funcs) for x in t.args)
    return funcs[t.name][args]


def atom_true(atom, a, rels: Mapping, funcs: Mapping) -> bool:
    if isinstance(atom, Eq):
        return term_value(atom.left, a, funcs) == term_value(atom.right, a, funcs)
    return tuple(term_value(x, a, funcs) for x in atom.args) in rels[atom.name]


def rule_instances(p: Program, domain):
    for r in p.rules:
        names = r.variables()
        for values in itertools.product(domain, repeat=len(names)):
            yield r, dict(zip(names, values))


def _ground(atom, a, funcs):
    return (atom.name, tuple(term_value(x, a, funcs) for x in atom.args))


def is_stable(domain, rels: Mapping, funcs: Mapping, p: Program) -> bool:
    """M ⊨ SM(Π) by definition: M ⊨ Π and no U < Ins(M, τ) with M[U] ⊨ Π*.

    ``rels`` must interpret every predicate of ``p`` (relations as tuple sets).
    """
    tau = p.intensional
    inst = list(rule_instances(p, domain))
    for r, a in inst:
        if all(atom_true(l.atom, a, rels, funcs) != l.negated for l in r.body):
            if not any(atom_true(h, a, rels, funcs) for h in r.head):
                return False
    model = sorted((n, t) for n in tau for t in rels[n])
    # the starred program only changes positive intensional occurrences
    ground = []
    for r, a in inst:
        pos, ok = [], True
        for l in r.body:
            if not l.negated and isinstance(l.atom, Pred) and l.atom.name in tau:
                pos.append(_ground(l.atom, a, funcs))
            elif atom_true(l.atom, a, rels, funcs) == l.negated:
                ok = False
                break
        if ok:
            ground.append((frozenset(pos), frozenset(_ground(h, a, funcs) for h in r.head)))
    for size in range(len(model)):
        for u in itertools.combinations(model, size):
            us = set(u)
            if all(not body <= us or head & us for body, head in ground):
                return False
    return True


def interpretations(domain, arity: int) -> Iterable[frozenset]:
    cells = list(itertools.product(domain, repeat=arity))
    for bits in itertools.product((False, True), repeat=len(cells)):
        yield frozenset(c for c, b in zip(cells, bits) if b)


def function_tables(domain, arity: int) -> Iterable[dict]:
    cells = list(itertools.product(domain, repeat=arity))
    for values in itertools.product(domain, repeat=len(cells)):
        yield dict(zip(cells, values))


def all_interpretations(domain, preds: Mapping[str, int], funcs: Mapping[str, int] | None = None):
    """Every (relations, functions) pair over the given signature."""
    funcs = funcs or {}
    pnames, fnames = sorted(preds), sorted(funcs)
    for rs in itertools.product(*(list(interpretations(domain, preds[n])) for n in pnames)):
        for fs in itertools.product(*(list(function_tables(domain, funcs[n])) for n in fnames)):
            yield dict(zip(pnames, rs)), dict(zip(fnames, fs))


def stable_models(domain, p: Program, fixed: Mapping | None = None) -> list[dict]:
    """All stable models over ``domain`` with every non-fixed predicate guessed."""
    fixed = dict(fixed or {})
    open_preds = {n: ar for n, ar in p.predicates.items() if n not in fixed}
    out = []
    for rels, funcs in all_interpretations(domain, open_preds, p.functions):
        full = {**fixed, **rels}
        if is_stable(domain, full, funcs, p):
            out.append({**full, **{f"fn:{k}": v for k, v in funcs.items()}})
    return out


def holds(f, a, rels, funcs) -> bool:
    """Truth of a quantifier-free formula."""
    if isinstance(f, Atomic):
        return atom_true(f.atom, a, rels, funcs)
    if isinstance(f, Not):
        return not holds(f.arg, a, rels, funcs)
    if isinstance(f, And):
        return all(holds(x, a, rels, funcs) for x in f.args)
    if isinstance(f, Or):
        return any(holds(x, a, rels, funcs) for x in f.args)
    if isinstance(f, Implies):
        return not holds(f.left, a, rels, funcs) or holds(f.right, a, rels, funcs)
    if isinstance(f, Iff):
        return holds(f.left, a, rels, funcs) == holds(f.right, a, rels, funcs)
    raise TypeError(f"not quantifier-free: {f!r}")


def universally_true(domain, matrix, variables, rels, funcs) -> bool:
    return all(holds(matrix, dict(zip(variables, vs)), rels, funcs)
               for vs in itertools.product(domain, repeat=len(variables)))


def eso_forall_exists(domain, rels, matrix, tau: Mapping[str, int], sigma: Mapping[str, int],
                      xs, ys) -> bool:
    """∃τ ∀σ ∀x̄ ∃ȳ matrix, by enumeration."""
    for t, _ in all_interpretations(domain, tau):
        ok = True
        for s, _ in all_interpretations(domain, sigma):
            env = {**rels, **t, **s}
            for xv in itertools.product(domain, repeat=len(xs)):
                base = dict(zip(xs, xv))
                if not any(holds(matrix, {**base, **dict(zip(ys, yv))}, env, {})
                           for yv in itertools.product(domain, repeat=len(ys))):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def pairing_collisions(max_exp: int) -> list[tuple[int, int, int, int]]:
    """All (m, n, m2, n2) with m < m2 ≤ max_exp and 2^m + 3^n = 2^m2 + 3^n2."""
    seen: dict[int, tuple[int, int]] = {}
    out = []
    for m in range(1, max_exp + 1):
        for n in range(1, max_exp + 1):
            v = 2 ** m + 3 ** n
            if v in seen:
                out.append((*seen[v], m, n))
            else:
                seen[v] = (m, n)
    return sorted(out)
