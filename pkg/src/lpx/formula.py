"""Second-order formula trees, normal forms, and the SM(Π) operator."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .syntax import (
    Atom, Eq, Fn, Literal, ParseError, Pred, Program, Rule, Var, atom_vars, is_numeral, substitute_atom,
)


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atomic(Formula):
    atom: Atom


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple


@dataclass(frozen=True)
class Or(Formula):
    args: tuple


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    vars: tuple
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple
    body: Formula


@dataclass(frozen=True)
class SOVar:
    name: str
    arity: int
    kind: str = "pred"  # or "func"

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}" + ("" if self.kind == "pred" else "f")


@dataclass(frozen=True)
class SOForall(Formula):
    symbols: tuple
    body: Formula


@dataclass(frozen=True)
class SOExists(Formula):
    symbols: tuple
    body: Formula


TOP = And(())
BOTTOM = Or(())


def atomic(a) -> Formula:
    if isinstance(a, Literal):
        f = Atomic(a.atom)
        return Not(f) if a.negated else f
    return Atomic(a)


def conj(items: Iterable[Formula]) -> Formula:
    flat = []
    for f in items:
        if isinstance(f, And):
            flat.extend(f.args)
        else:
            flat.append(f)
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(items: Iterable[Formula]) -> Formula:
    flat = []
    for f in items:
        if isinstance(f, Or):
            flat.extend(f.args)
        else:
            flat.append(f)
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def forall(vars: Iterable[str], body: Formula) -> Formula:
    vs = tuple(vars)
    return Forall(vs, body) if vs else body


def exists(vars: Iterable[str], body: Formula) -> Formula:
    vs = tuple(vars)
    return Exists(vs, body) if vs else body


def xor(a: Formula, b: Formula) -> Formula:
    """``a ⊕ b`` written as ``a ↔ ¬b``."""
    return Iff(a, Not(b))


# ---------------------------------------------------------------------------
# traversal


def children(f: Formula) -> tuple:
    if isinstance(f, Atomic):
        return ()
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, (Implies, Iff)):
        return (f.left, f.right)
    return (f.body,)


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Atomic):
        return set(atom_vars(f.atom))
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - set(f.vars)
    out: set[str] = set()
    for c in children(f):
        out |= free_vars(c)
    return out


def ordered_free_vars(f: Formula) -> list[str]:
    seen: dict[str, None] = {}

    def walk(g, bound):
        if isinstance(g, Atomic):
            for v in atom_vars(g.atom):
                if v not in bound:
                    seen.setdefault(v)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body, bound | set(g.vars))
        else:
            for c in children(g):
                walk(c, bound)

    walk(f, frozenset())
    return list(seen)


def atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atomic):
        yield f.atom
    for c in children(f):
        yield from atoms(c)


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Forall, Exists, SOForall, SOExists)):
        return False
    return all(is_quantifier_free(c) for c in children(f))


def map_atoms(f: Formula, fn) -> Formula:
    """Rebuild ``f`` with each Atomic node replaced by ``fn(atom)``."""
    if isinstance(f, Atomic):
        return fn(f.atom)
    if isinstance(f, Not):
        return Not(map_atoms(f.arg, fn))
    if isinstance(f, And):
        return And(tuple(map_atoms(a, fn) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(map_atoms(a, fn) for a in f.args))
    if isinstance(f, Implies):
        return Implies(map_atoms(f.left, fn), map_atoms(f.right, fn))
    if isinstance(f, Iff):
        return Iff(map_atoms(f.left, fn), map_atoms(f.right, fn))
    return type(f)(f.vars if hasattr(f, "vars") else f.symbols, map_atoms(f.body, fn))


def substitute(f: Formula, sub: dict) -> Formula:
    """Substitute terms for free individual variables (no capture check)."""
    return map_atoms(f, lambda a: Atomic(substitute_atom(a, sub)))


# ---------------------------------------------------------------------------
# normal forms


class NormalFormTooLarge(ValueError):
    pass


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form for quantifier-free formulas."""
    if isinstance(f, Atomic):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    if isinstance(f, And):
        parts = tuple(nnf(a, negate) for a in f.args)
        return disj(parts) if negate else conj(parts)
    if isinstance(f, Or):
        parts = tuple(nnf(a, negate) for a in f.args)
        return conj(parts) if negate else disj(parts)
    if isinstance(f, Implies):
        return nnf(Or((Not(f.left), f.right)), negate)
    if isinstance(f, Iff):
        a, b = f.left, f.right
        if negate:
            return disj([conj([nnf(a), nnf(b, True)]), conj([nnf(a, True), nnf(b)])])
        return disj([conj([nnf(a), nnf(b)]), conj([nnf(a, True), nnf(b, True)])])
    raise ValueError(f"nnf expects a quantifier-free formula, got {type(f).__name__}")


def _literal_of(f: Formula) -> Literal:
    if isinstance(f, Not) and isinstance(f.arg, Atomic):
        return Literal(f.arg.atom, True)
    if isinstance(f, Atomic):
        return Literal(f.atom, False)
    raise ValueError(f"not a literal: {f}")


def dnf(f: Formula, limit: int = 4096) -> list[tuple[Literal, ...]]:
    """Disjuncts of ``f`` as literal tuples, by plain distribution.

    Raises NormalFormTooLarge once an intermediate result exceeds ``limit``.
    """
    g = nnf(f)

    def go(h) -> list[tuple]:
        if isinstance(h, And):
            acc: list[tuple] = [()]
            for a in h.args:
                part = go(a)
                if len(acc) * len(part) > limit:
                    raise NormalFormTooLarge(f"DNF exceeds {limit} disjuncts")
                acc = [x + y for x in acc for y in part]
            return acc
        if isinstance(h, Or):
            out: list[tuple] = []
            for a in h.args:
                out.extend(go(a))
                if len(out) > limit:
                    raise NormalFormTooLarge(f"DNF exceeds {limit} disjuncts")
            return out
        return [(_literal_of(h),)]

    out = []
    for d in go(g):
        d = _dedupe(d)
        if not any(Literal(l.atom, not l.negated) in d for l in d):
            out.append(d)
    return out


def cnf(f: Formula, limit: int = 4096) -> list[tuple[Literal, ...]]:
    """Clauses of ``f`` (each a literal tuple), by plain distribution."""
    neg_dnf = dnf(Not(f), limit)
    return [tuple(Literal(l.atom, not l.negated) for l in d) for d in neg_dnf]


def _dedupe(lits: tuple) -> tuple:
    return tuple(dict.fromkeys(lits))


# ---------------------------------------------------------------------------
# rendering

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def render(f: Formula) -> str:
    return _render(f, 0)


def _render(f: Formula, ctx: int) -> str:
    if isinstance(f, Atomic):
        return str(f.atom)
    if isinstance(f, And) and not f.args:
        return "true"
    if isinstance(f, Or) and not f.args:
        return "false"
    if isinstance(f, (Forall, Exists, SOForall, SOExists)):
        q = {Forall: "forall", Exists: "exists", SOForall: "forall", SOExists: "exists"}[type(f)]
        names = f.vars if isinstance(f, (Forall, Exists)) else tuple(map(str, f.symbols))
        s = f"{q} {' '.join(names)} ({_render(f.body, 0)})"
        return f"({s})" if ctx > 0 else s
    prec = _PREC[type(f)]
    if isinstance(f, Not):
        inner = f.arg
        if isinstance(inner, Atomic) and isinstance(inner.atom, Eq):
            return f"{inner.atom.left} != {inner.atom.right}"
        s = "~" + _render(inner, prec)
    elif isinstance(f, And):
        s = " & ".join(_render(a, prec + 1) for a in f.args)
    elif isinstance(f, Or):
        s = " | ".join(_render(a, prec + 1) for a in f.args)
    elif isinstance(f, Implies):
        s = f"{_render(f.left, prec + 1)} -> {_render(f.right, prec)}"
    else:
        s = f"{_render(f.left, prec + 1)} <-> {_render(f.right, prec + 1)}"
    return f"({s})" if prec < ctx or (prec == ctx and not isinstance(f, Not)) else s


# ---------------------------------------------------------------------------
# SM(Π)


def star(name: str) -> str:
    return name + "*"


def rule_formula(r: Rule) -> Formula:
    """The implication body → head (without universal closure)."""
    head = disj(Atomic(a) for a in r.head) if r.head else BOTTOM
    if not r.body:
        return head
    return Implies(conj(atomic(l) for l in r.body), head)


def star_positive(f: Formula, tau, depth: int = 0) -> Formula:
    """Replace intensional atoms under an even number of negations by P*."""
    if isinstance(f, Atomic):
        a = f.atom
        if depth % 2 == 0 and isinstance(a, Pred) and a.name in tau:
            return Atomic(Pred(star(a.name), a.args))
        return f
    if isinstance(f, Not):
        return Not(star_positive(f.arg, tau, depth + 1))
    if isinstance(f, And):
        return And(tuple(star_positive(a, tau, depth) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(star_positive(a, tau, depth) for a in f.args))
    if isinstance(f, Implies):
        return Implies(star_positive(f.left, tau, depth), star_positive(f.right, tau, depth))
    if isinstance(f, Iff):
        return Iff(star_positive(f.left, tau, depth), star_positive(f.right, tau, depth))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.vars, star_positive(f.body, tau, depth))
    return type(f)(f.symbols, star_positive(f.body, tau, depth))


class SMParts(NamedTuple):
    phi: Formula
    less: Formula
    phi_star: Formula
    stars: tuple


def _tuple_vars(n: int) -> tuple:
    return tuple(Var(f"X{i}") for i in range(1, n + 1))


def sm_parts(p: Program) -> SMParts:
    tau = [name for name in p.predicates if name in p.intensional]
    closures = [forall(r.variables(), rule_formula(r)) for r in p.rules]
    phi = conj(closures) if closures else TOP
    phi_star = conj(star_positive(c, p.intensional) for c in closures) if closures else TOP
    below, above = [], []
    for name in tau:
        xs = _tuple_vars(p.predicates[name])
        names = [v.name for v in xs]
        a, a_star = Atomic(Pred(name, xs)), Atomic(Pred(star(name), xs))
        below.append(forall(names, Implies(a_star, a)))
        above.append(forall(names, Implies(a, a_star)))
    less = And((conj(below), Not(conj(above)))) if tau else And((TOP, Not(TOP)))
    stars = tuple(SOVar(star(n), p.predicates[n]) for n in tau)
    return SMParts(phi, less, phi_star, stars)


def sm_formula(p: Program) -> Formula:
    """φ ∧ ∀τ*(τ* < τ → ¬φ*)."""
    parts = sm_parts(p)
    inner = Implies(parts.less, Not(parts.phi_star))
    if parts.stars:
        inner = SOForall(parts.stars, inner)
    return And((parts.phi, inner))


def so_variables(f: Formula) -> set[SOVar]:
    out: set = set()
    if isinstance(f, (SOForall, SOExists)):
        out |= set(f.symbols)
    for c in children(f):
        out |= so_variables(c)
    return out


def product_assignments(names, domain) -> Iterator[dict]:
    names = list(names)
    for values in itertools.product(domain, repeat=len(names)):
        yield dict(zip(names, values))


# ---------------------------------------------------------------------------
# parsing quantifier-free formulas (the notation ``render`` prints)

_FTOKEN = re.compile(r"\s*(<->|->|!=|[~&|(),=]|[A-Z][A-Za-z0-9_]*|_*[a-z][A-Za-z0-9_]*|\d+)")


class _FormulaParser:
    def __init__(self, text: str):
        self.toks = []
        i = 0
        text = text.rstrip()
        while i < len(text):
            m = _FTOKEN.match(text, i)
            if m is None:
                raise ParseError(f"unexpected character {text[i]!r}", 1, i + 1)
            self.toks.append((m.group(1), m.start(1) + 1))
            i = m.end()
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0] if self.i < len(self.toks) else ""

    def take(self, want: str | None = None) -> str:
        t = self.peek()
        if want is not None and t != want:
            col = self.toks[self.i][1] if self.i < len(self.toks) else 0
            raise ParseError(f"expected {want!r}, found {t or 'end of input'!r}", 1, col)
        self.i += 1
        return t

    def formula(self) -> Formula:
        left = self.implication()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        items = [self.conjunction()]
        while self.peek() == "|":
            self.take()
            items.append(self.conjunction())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def conjunction(self) -> Formula:
        items = [self.unary()]
        while self.peek() == "&":
            self.take()
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def unary(self) -> Formula:
        t = self.peek()
        if t == "~":
            self.take()
            return Not(self.unary())
        if t == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if t == "true":
            self.take()
            return And(())
        if t == "false":
            self.take()
            return Or(())
        left = self.term()
        if self.peek() in ("=", "!="):
            op = self.take()
            eq = Atomic(Eq(left, self.term()))
            return eq if op == "=" else Not(eq)
        if isinstance(left, Var) or is_numeral(left.name):
            raise ParseError(f"expected an atom, found term {left}", 1, self.toks[self.i - 1][1])
        return Atomic(Pred(left.name, left.args))

    def term(self):
        t = self.take()
        if not t:
            raise ParseError("unexpected end of input", 1, 0)
        if t[0].isupper():
            return Var(t)
        if t.isdigit():
            return Fn(str(int(t)))
        if not (t[0].islower() or t[0] == "_"):
            raise ParseError(f"expected a term, found {t!r}", 1, self.toks[self.i - 1][1])
        args = []
        if self.peek() == "(":
            self.take()
            args.append(self.term())
            while self.peek() == ",":
                self.take()
                args.append(self.term())
            self.take(")")
        return Fn(t, tuple(args))


def parse_formula(text: str) -> Formula:
    """Parse a quantifier-free formula written with ~ & | -> <-> and = / !=."""
    p = _FormulaParser(text)
    f = p.formula()
    if p.peek():
        p.take("end of input")
    return f
