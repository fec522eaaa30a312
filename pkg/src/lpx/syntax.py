"""Rule language: terms, atoms, rules, programs, and the `.lp` text format.

Grammar (one statement per ``.``)::

    p(X) ; q(X) :- e(X), not r(X), X != Y.
    #false :- p(X), q(X).
    % comment to end of line

Variables start with an uppercase letter, predicate/function names with a
lowercase letter (optionally after leading underscores).  Integer literals
are constants that denote themselves.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str | None = None):
        where = f"{line}:{column}" if line else ""
        prefix = ":".join(x for x in (source, where) if x)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.message = message
        self.line = line
        self.column = column
        self.source = source


class ArityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# terms and atoms


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be nonempty")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Fn:
    """Function application; arity 0 is an individual constant."""

    name: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(map(str, self.args))})"

    @property
    def arity(self) -> int:
        return len(self.args)


Term = Union[Var, Fn]


def const(name) -> Fn:
    return Fn(str(name))


def is_numeral(name: str) -> bool:
    return name.isdigit()


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{self.left} = {self.right}"


Atom = Union[Pred, Eq]


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self) -> str:
        if isinstance(self.atom, Eq):
            op = "!=" if self.negated else "="
            return f"{self.atom.left} {op} {self.atom.right}"
        return f"not {self.atom}" if self.negated else str(self.atom)


def pos(atom: Atom) -> Literal:
    return Literal(atom, False)


def neg(atom: Atom) -> Literal:
    return Literal(atom, True)


@dataclass(frozen=True)
class Rule:
    head: tuple = ()
    body: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "body", tuple(self.body))
        for a in self.head:
            if not isinstance(a, Pred):
                raise ValueError(f"head atom must be a predicate atom, got {a!r}")
        for lit in self.body:
            if not isinstance(lit, Literal):
                raise TypeError(f"body element must be a Literal, got {lit!r}")

    def __str__(self) -> str:
        head = " ; ".join(map(str, self.head)) if self.head else "#false"
        if not self.body:
            return f"{head}."
        return f"{head} :- {', '.join(map(str, self.body))}."

    def variables(self) -> list[str]:
        """Variables in order of first occurrence (body first, then head)."""
        seen: dict[str, None] = {}
        for lit in self.body:
            for v in atom_vars(lit.atom):
                seen.setdefault(v)
        for a in self.head:
            for v in atom_vars(a):
                seen.setdefault(v)
        return list(seen)


def term_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    else:
        for a in t.args:
            yield from term_vars(a)


def atom_vars(a: Atom) -> Iterator[str]:
    if isinstance(a, Eq):
        yield from term_vars(a.left)
        yield from term_vars(a.right)
    else:
        for t in a.args:
            yield from term_vars(t)


def term_functions(t: Term) -> Iterator[tuple[str, int]]:
    if isinstance(t, Fn):
        if not is_numeral(t.name):
            yield t.name, len(t.args)
        for a in t.args:
            yield from term_functions(a)


def atom_functions(a: Atom) -> Iterator[tuple[str, int]]:
    terms = (a.left, a.right) if isinstance(a, Eq) else a.args
    for t in terms:
        yield from term_functions(t)


def substitute_term(t: Term, sub: dict) -> Term:
    if isinstance(t, Var):
        return sub.get(t.name, t)
    if not t.args:
        return t
    return Fn(t.name, tuple(substitute_term(a, sub) for a in t.args))


def substitute_atom(a: Atom, sub: dict) -> Atom:
    if isinstance(a, Eq):
        return Eq(substitute_term(a.left, sub), substitute_term(a.right, sub))
    return Pred(a.name, tuple(substitute_term(t, sub) for t in a.args))


def substitute_rule(r: Rule, sub: dict) -> Rule:
    return Rule(
        tuple(substitute_atom(a, sub) for a in r.head),
        tuple(Literal(substitute_atom(l.atom, sub), l.negated) for l in r.body),
    )


# ---------------------------------------------------------------------------
# programs


@dataclass(frozen=True)
class Program:
    rules: tuple = ()
    predicates: dict = field(init=False, compare=False, repr=False)
    functions: dict = field(init=False, compare=False, repr=False)
    intensional: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        preds: dict[str, int] = {}
        funcs: dict[str, int] = {}
        for r in self.rules:
            atoms = list(r.head) + [l.atom for l in r.body]
            for a in atoms:
                if isinstance(a, Pred):
                    _declare(preds, a.name, a.arity, "predicate")
                for name, ar in atom_functions(a):
                    _declare(funcs, name, ar, "function")
        object.__setattr__(self, "predicates", preds)
        object.__setattr__(self, "functions", funcs)
        object.__setattr__(
            self, "intensional", frozenset(a.name for r in self.rules for a in r.head)
        )

    def __iter__(self):
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __add__(self, other: "Program") -> "Program":
        return Program(self.rules + other.rules)

    def __str__(self) -> str:
        return render_program(self)

    @property
    def extensional(self) -> frozenset:
        return frozenset(self.predicates) - self.intensional

    def vocabulary(self) -> set[str]:
        return set(self.predicates) | set(self.functions)


def _declare(table: dict, name: str, arity: int, kind: str) -> None:
    known = table.setdefault(name, arity)
    if known != arity:
        raise ArityError(f"{kind} {name} used with arities {known} and {arity}")


@dataclass(frozen=True)
class Classification:
    normal: bool
    plain: bool
    propositional: bool
    intensional: frozenset


def classify(p: Program) -> Classification:
    normal = all(len(r.head) <= 1 for r in p.rules)
    plain = not any(
        l.negated and isinstance(l.atom, Pred) and l.atom.name in p.intensional
        for r in p.rules
        for l in r.body
    )
    propositional = all(ar == 0 for ar in p.predicates.values())
    return Classification(normal, plain, propositional, p.intensional)


def render_program(p: Program) -> str:
    return "\n".join(str(r) for r in p.rules)


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<false>\#false\b)
  | (?P<if>:-)
  | (?P<neq>!=)
  | (?P<punct>[;,.()=])
  | (?P<num>\d+)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<ident>_*[a-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        col = i - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            s = m.group()
            if kind in ("punct", "if", "neq"):
                kind = s
            elif kind == "ident" and s == "not":
                kind = "not"
            toks.append(_Tok(kind, s, line, col))
        i = m.end()
    toks.append(_Tok("eof", "", line, i - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.preds: dict[str, int] = {}
        self.funcs: dict[str, int] = {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.error(f"expected {kind!r}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def arity(self, table, name, n, kind, tok):
        known = table.setdefault(name, n)
        if known != n:
            self.error(f"arity clash: {kind} {name} used with arities {known} and {n}", tok)

    def program(self) -> Program:
        rules = []
        while self.tok.kind != "eof":
            rules.append(self.rule())
        return Program(tuple(rules))

    def rule(self) -> Rule:
        head: list[Pred] = []
        if self.accept("false"):
            pass
        elif self.tok.kind != ":-":
            head.append(self.head_atom())
            while self.accept(";"):
                head.append(self.head_atom())
        body: list[Literal] = []
        if self.accept(":-"):
            body.append(self.literal())
            while self.accept(","):
                body.append(self.literal())
        self.expect(".")
        return Rule(tuple(head), tuple(body))

    def head_atom(self) -> Pred:
        if self.tok.kind == "not":
            self.error("negated atom in rule head")
        start = self.tok
        t = self.term()
        if self.tok.kind in ("=", "!="):
            self.error("equality in rule head", start)
        return self.as_atom(t, start)

    def literal(self) -> Literal:
        negated = self.accept("not")
        start = self.tok
        t = self.term()
        if self.tok.kind in ("=", "!="):
            op = self.tok.kind
            self.i += 1
            rhs = self.term()
            self.note_functions(t, start)
            self.note_functions(rhs, start)
            return Literal(Eq(t, rhs), negated != (op == "!="))
        return Literal(self.as_atom(t, start), negated)

    def as_atom(self, t: Term, tok: _Tok) -> Pred:
        if isinstance(t, Var) or is_numeral(t.name):
            self.error(f"expected an atom, found term {t}", tok)
        self.arity(self.preds, t.name, len(t.args), "predicate", tok)
        for a in t.args:
            self.note_functions(a, tok)
        return Pred(t.name, t.args)

    def note_functions(self, t: Term, tok: _Tok):
        if isinstance(t, Fn):
            if not is_numeral(t.name):
                self.arity(self.funcs, t.name, len(t.args), "function", tok)
            for a in t.args:
                self.note_functions(a, tok)

    def term(self) -> Term:
        tok = self.tok
        if self.accept("var"):
            return Var(tok.text)
        if self.accept("num"):
            return Fn(str(int(tok.text)))
        if self.accept("ident"):
            args = []
            if self.accept("("):
                args.append(self.term())
                while self.accept(","):
                    args.append(self.term())
                self.expect(")")
            return Fn(tok.text, tuple(args))
        self.error(f"expected a term, found {tok.text or 'end of input'!r}")


def parse_program(text: str) -> Program:
    """Parse `.lp` text into a Program; raises ParseError with line/column."""
    return _Parser(text).program()


def parse_rule(text: str) -> Rule:
    p = parse_program(text)
    if len(p.rules) != 1:
        raise ParseError(f"expected exactly one rule, got {len(p.rules)}")
    return p.rules[0]


def parse_literal(text: str) -> Literal:
    r = parse_rule(f"#false :- {text.rstrip('.')}.")
    if len(r.body) != 1:
        raise ParseError("expected exactly one literal")
    return r.body[0]


def parse_atom(text: str) -> Pred:
    return parse_rule(text if text.rstrip().endswith(".") else text + ".").head[0]


def load_program(path) -> Program:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_program(text)
    except ParseError as exc:
        raise ParseError(exc.message, exc.line, exc.column, str(path)) from None


def program_of(rules: Iterable[Rule]) -> Program:
    return Program(tuple(rules))
