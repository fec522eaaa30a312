"""The shift operation: disjunctive heads moved, negated, into the body."""
from __future__ import annotations

import itertools

from ..syntax import Eq, Fn, Literal, Pred, Program, Rule, is_numeral
from .common import TransformError, TransformReport


def dependency_graph(p: Program) -> dict[str, set[str]]:
    """Edges P → Q when Q occurs positively in the body of a rule with P in the head."""
    graph: dict[str, set[str]] = {name: set() for name in p.predicates}
    for r in p.rules:
        body = {l.atom.name for l in r.body if not l.negated and isinstance(l.atom, Pred)}
        for h in r.head:
            graph[h.name] |= body
    return graph


def _reach(graph: dict[str, set[str]]) -> dict[str, set[str]]:
    out = {}
    for start in graph:
        seen: set[str] = set()
        stack = list(graph[start])
        while stack:
            n = stack.pop()
            if n not in seen:
                seen.add(n)
                stack.extend(graph.get(n, ()))
        out[start] = seen
    return out


def head_cycle_free(p: Program) -> bool:
    """Predicate-level check that no two head atoms of one rule share a positive cycle."""
    reach = _reach(dependency_graph(p))
    for r in p.rules:
        atoms = list(dict.fromkeys(r.head))
        for a, b in itertools.combinations(atoms, 2):
            if a.name == b.name:
                if a.name in reach[a.name]:
                    return False
            elif b.name in reach[a.name] and a.name in reach[b.name]:
                return False
    return True


def _distinct_numerals(s, t) -> bool:
    return (isinstance(s, Fn) and isinstance(t, Fn) and not s.args and not t.args
            and is_numeral(s.name) and is_numeral(t.name) and s.name != t.name)


def _equal_condition(a: Pred, b: Pred):
    """Body equalities forcing a = b, or None when they can never be equal."""
    eqs = []
    for s, t in zip(a.args, b.args):
        if s == t:
            continue
        if _distinct_numerals(s, t):
            return None
        eqs.append(Literal(Eq(s, t)))
    return tuple(eqs)


def shift_rule(r: Rule) -> list[Rule]:
    head = list(dict.fromkeys(r.head))
    if len(head) <= 1:
        return [Rule(tuple(head), r.body)]
    out = []
    for i, a in enumerate(head):
        fixed = []
        choices = []
        for j, b in enumerate(head):
            if j == i:
                continue
            if b.name != a.name:
                fixed.append(Literal(b, True))
                continue
            cond = _equal_condition(a, b)
            if cond is None:
                fixed.append(Literal(b, True))
            else:
                choices.append((cond, (Literal(b, True),)))
        for picks in itertools.product(*choices):
            body = list(r.body) + fixed + [l for pick in picks for l in pick]
            out.append(Rule((a,), tuple(dict.fromkeys(body))))
    return out


def shift(p: Program, check: bool = True) -> TransformReport:
    """Replace each rule B → a₁ ∨ … ∨ a_n by the rules B ∧ ⋀_{j≠i} ¬a_j → a_i.

    Head atoms over the same predicate are compared argument-wise: for such a
    pair the negated atom is only required when the two instances differ, which
    is expressed by splitting on the equalities between their arguments.
    """
    if check and not head_cycle_free(p):
        raise TransformError("program is not head-cycle-free; shifting would change its stable models")
    rules = []
    shifted = 0
    for r in p.rules:
        new = shift_rule(r)
        if len(new) > 1:
            shifted += 1
        rules.extend(new)
    counts = {"rules_in": len(p.rules), "rules_out": len(rules), "shifted": shifted}
    return TransformReport(Program(tuple(rules)), [], counts)
