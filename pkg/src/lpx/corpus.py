"""Random program generators used by tests, demos and the acceptance suite."""
from __future__ import annotations

import random
from typing import Iterator

from .syntax import Eq, Literal, Pred, Program, Rule, Var, atom_vars, const

PRED_NAMES = ("p", "q", "r")
VAR_NAMES = ("X", "Y")


def _signature(rng: random.Random, n_preds: int, max_arity: int) -> dict[str, int]:
    return {name: rng.randint(0, max_arity) for name in PRED_NAMES[:n_preds]}


def _atom(rng, name, arity, terms) -> Pred:
    return Pred(name, tuple(rng.choice(terms) for _ in range(arity)))


def random_program(rng: random.Random, n_preds: int = 3, max_arity: int = 2, max_rules: int = 4,
                   max_body: int = 2, disjunction: bool = True, negation: bool = True,
                   equality: bool = True, constants: bool = False) -> Program:
    """A small program; head variables need not occur in the body."""
    sig = _signature(rng, rng.randint(1, n_preds), max_arity)
    terms = [Var(v) for v in VAR_NAMES]
    if constants:
        terms.append(const("a"))
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        nhead = rng.choice((0, 1, 1, 1, 2)) if disjunction else rng.choice((0, 1, 1, 1))
        head = tuple(_atom(rng, n, sig[n], terms) for n in rng.sample(sorted(sig), min(nhead, len(sig))))
        if nhead == 2 and len(sig) == 1:
            n = next(iter(sig))
            head = (_atom(rng, n, sig[n], terms), _atom(rng, n, sig[n], terms))
        body = []
        for _ in range(rng.randint(0, max_body)):
            if equality and rng.random() < 0.15:
                body.append(Literal(Eq(rng.choice(terms), rng.choice(terms)), rng.random() < 0.5))
                continue
            n = rng.choice(sorted(sig))
            body.append(Literal(_atom(rng, n, sig[n], terms), negation and rng.random() < 0.4))
        rules.append(Rule(head, tuple(body)))
    return Program(tuple(rules))


def corpus(n: int, seed: int = 0, **kw) -> Iterator[Program]:
    rng = random.Random(seed)
    for _ in range(n):
        yield random_program(rng, **kw)


def random_range_restricted(rng: random.Random, max_rules: int = 4, max_body: int = 2,
                            domain=(1, 2)) -> Program:
    """A range-restricted program over an extensional ``e/1`` and ground facts.

    Every rule variable occurs in a positive ``e`` body atom, so grounding
    never enumerates the domain.
    """
    sig = {"p": rng.randint(0, 2), "q": rng.randint(0, 1), "r": rng.randint(1, 2)}
    numeral = lambda: const(str(rng.choice(domain)))
    rules = []
    for name, ar in sorted(sig.items()):
        if rng.random() < 0.7:
            rules.append(Rule((Pred(name, tuple(numeral() for _ in range(ar))),), ()))
    terms = [Var(v) for v in VAR_NAMES]
    for _ in range(rng.randint(1, max_rules)):
        body = []
        for _ in range(rng.randint(1, max_body)):
            n = rng.choice(sorted(sig))
            args = tuple(rng.choice(terms) for _ in range(sig[n]))
            body.append(Literal(Pred(n, args), rng.random() < 0.35))
        if rng.random() < 0.2:
            body.append(Literal(Eq(Var("X"), Var("Y")), True))
        nhead = rng.choice((0, 1, 1, 2))
        names = rng.sample(sorted(sig), nhead)
        head = tuple(Pred(n, tuple(rng.choice(terms + [numeral()]) for _ in range(sig[n]))) for n in names)
        used = {v for a in list(head) + [l.atom for l in body] for v in atom_vars(a)}
        support = [Literal(Pred("e", (Var(v),))) for v in sorted(used)]
        rules.append(Rule(head, tuple(support + body)))
    if not any(r.head for r in rules):
        rules.append(Rule((Pred("q", tuple(numeral() for _ in range(sig["q"]))),), ()))
    return Program(tuple(rules))


def range_restricted_corpus(n: int, seed: int = 0, **kw) -> Iterator[Program]:
    rng = random.Random(seed)
    for _ in range(n):
        yield random_range_restricted(rng, **kw)
