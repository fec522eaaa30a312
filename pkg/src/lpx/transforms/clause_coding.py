"""Disjunctive to normal programs over infinite domains by clause encoding.

Ground positive clauses are coded as domain elements through a guessed
injective pairing ``enc``; a normal program then simulates the clause
progression on codes and decodes the result back into the original
predicates.
"""
from __future__ import annotations

from ..grounding import split_rule
from ..syntax import Eq, Fn, Literal, Pred, Program, Rule, Var
from .common import FreshNames, Symbol, TransformReport, program_names


def _p(name, *args) -> Pred:
    return Pred(name, tuple(args))


def _pos(name, *args) -> Literal:
    return Literal(_p(name, *args))


def _neg(name, *args) -> Literal:
    return Literal(_p(name, *args), True)


def _eq(a, b, negated=False) -> Literal:
    return Literal(Eq(a, b), negated)


class _Names:
    def __init__(self, p: Program):
        fresh = FreshNames(program_names(p))
        self.fresh = fresh
        self.enc = fresh("enc")
        self.enc_bar = fresh("enc_bar")
        self.ok = fresh("ok_e")
        self.mrg = fresh("mrg")
        self.ext = fresh("ext")
        self.in_ = fresh("in")
        self.subc = fresh("subc")
        self.equ = fresh("equ")
        self.true = fresh("true")
        self.false = fresh("false")
        self.c_eps = fresh("c_eps")
        self.flag = {name: fresh(f"c_{name}") for name in p.predicates}

    def manifest(self) -> list[Symbol]:
        out = [
            Symbol(self.enc, "pred", 3, "graph of the pairing function"),
            Symbol(self.enc_bar, "pred", 3, "complement of the pairing graph"),
            Symbol(self.ok, "pred", 2, "domain of the pairing function"),
            Symbol(self.mrg, "pred", 3, "concatenation of encoded sequences"),
            Symbol(self.ext, "pred", 3, "removal of an element from an encoded sequence"),
            Symbol(self.in_, "pred", 2, "membership in an encoded sequence"),
            Symbol(self.subc, "pred", 2, "inclusion of encoded sequences"),
            Symbol(self.equ, "pred", 2, "equal element sets of encoded sequences"),
            Symbol(self.true, "pred", 1, "derived clause codes"),
            Symbol(self.false, "pred", 1, "codes of clauses false in the model"),
            Symbol(self.c_eps, "func", 0, "ending flag of clauses"),
        ]
        for name, flag in self.flag.items():
            out.append(Symbol(flag, "func", 0, f"ending flag of atoms over {name}"))
        return out


def _chain(n: _Names, fresh: FreshNames, atom: Pred) -> tuple[list[Literal], object]:
    """Literals stating that the returned term is the code of ``atom``."""
    lits = []
    cur = Fn(n.flag[atom.name])
    for t in atom.args:
        u = Var(fresh.var("U"))
        lits.append(_pos(n.enc, cur, t, u))
        cur = u
    return lits, cur


def _encoding_rules(n: _Names, p: Program) -> list[Rule]:
    X, Y, Z, U, V, W = (Var(v) for v in "XYZUVW")
    rules = [Rule((), (_pos(n.enc, X, Y, Fn(c)),)) for c in [*n.flag.values(), n.c_eps]]
    rules += [
        Rule((_p(n.enc, X, Y, Z),), (_neg(n.enc_bar, X, Y, Z),)),
        Rule((_p(n.enc_bar, X, Y, Z),), (_neg(n.enc, X, Y, Z),)),
        Rule((), (_pos(n.enc, X, Y, Z), _pos(n.enc, U, V, Z), _eq(X, U, True))),
        Rule((), (_pos(n.enc, X, Y, Z), _pos(n.enc, U, V, Z), _eq(Y, V, True))),
        Rule((_p(n.ok, X, Y),), (_pos(n.enc, X, Y, Z),)),
        Rule((_p(n.ok, X, Y),), (_neg(n.ok, X, Y),)),
        Rule((), (_pos(n.enc, X, Y, Z), _pos(n.enc, X, Y, U), _eq(Z, U, True))),
    ]
    return rules


def _sequence_rules(n: _Names) -> list[Rule]:
    X, Y, Z, U, V, W = (Var(v) for v in "XYZUVW")
    eps = Fn(n.c_eps)
    return [
        Rule((_p(n.mrg, X, Y, X),), (_eq(Y, eps),)),
        Rule((_p(n.mrg, X, Y, Z),), (_pos(n.mrg, X, U, V), _pos(n.enc, U, W, Y), _pos(n.enc, V, W, Z))),
        Rule((_p(n.ext, X, Y, X),), (_eq(X, eps),)),
        Rule((_p(n.ext, X, Y, V),), (_pos(n.ext, U, Y, V), _pos(n.enc, U, W, X), _eq(W, Y))),
        Rule((_p(n.ext, X, Y, Z),),
             (_pos(n.ext, U, Y, V), _pos(n.enc, U, W, X), _eq(W, Y, True), _pos(n.enc, V, W, Z))),
        Rule((_p(n.in_, U, Y),), (_pos(n.enc, X, U, Y),)),
        Rule((_p(n.in_, U, Y),), (_pos(n.enc, X, V, Y), _pos(n.in_, U, X))),
        Rule((_p(n.subc, X, Y),), (_eq(X, eps),)),
        Rule((_p(n.subc, X, Y),), (_pos(n.subc, U, Y), _pos(n.enc, U, V, X), _pos(n.in_, V, Y))),
        Rule((_p(n.equ, X, Y),), (_pos(n.subc, X, Y), _pos(n.subc, Y, X))),
    ]


def progression_rule(n: _Names, p: Program, r: Rule) -> Rule:
    """The normal rule simulating one progression step of ``r`` on clause codes."""
    fresh = FreshNames(r.variables())
    split = split_rule(r, p)
    body: list[Literal] = []
    ys = []
    for atom in split.positive_intensional_body:
        x = Var(fresh.var("X"))
        z = Var(fresh.var("Z"))
        y = Var(fresh.var("Y"))
        chain, code = _chain(n, fresh, atom)
        body.append(_pos(n.true, x))
        body.extend(chain)
        body.append(_eq(z, code))
        body.append(_pos(n.in_, z, x))
        ys.append((x, z, y))
    for x, z, y in ys:
        body.append(_pos(n.ext, x, z, y))
    v_prev = Fn(n.c_eps)
    for atom in r.head:
        chain, code = _chain(n, fresh, atom)
        body.extend(chain)
        v = Var(fresh.var("V"))
        body.append(_pos(n.enc, v_prev, code, v))
        v_prev = v
    if ys:
        w = ys[0][2]
        for _, _, y in ys[1:]:
            w_next = Var(fresh.var("W"))
            body.append(_pos(n.mrg, w, y, w_next))
            w = w_next
    else:
        w = Fn(n.c_eps)
    out = Var(fresh.var("V"))
    body.append(_pos(n.mrg, w, v_prev, out))
    body.extend(split.residue)
    return Rule((_p(n.true, out),), tuple(body))


def _decoding_rules(n: _Names, p: Program) -> tuple[list[Rule], list[Rule]]:
    X, Y = Var("X"), Var("Y")
    false_rules = [Rule((_p(n.false, X),), (_eq(X, Fn(n.c_eps)),))]
    true_rules = [Rule((), (_pos(n.true, Fn(n.c_eps)),))]
    for name in [q for q in p.predicates if q in p.intensional]:
        fresh = FreshNames({"X", "Y"})
        theta = Pred(name, tuple(Var(fresh.var(f"Z{i + 1}")) for i in range(p.predicates[name])))
        chain, code = _chain(n, fresh, theta)
        false_rules.append(Rule(
            (_p(n.false, Y),),
            (_pos(n.false, X), *chain, _pos(n.enc, X, code, Y), Literal(theta, True)),
        ))
        true_rules.append(Rule(
            (theta,),
            (_pos(n.true, X), *chain, _pos(n.ext, X, code, Y), _pos(n.false, Y)),
        ))
    return false_rules, true_rules


def dlp_to_nlp_infinite(p: Program) -> TransformReport:
    """A normal program equivalent to ``p`` over infinite structures (modulo the manifest)."""
    n = _Names(p)
    pi1 = _encoding_rules(n, p)
    pi2 = _sequence_rules(n)
    X, Y = Var("X"), Var("Y")
    pi3 = [Rule((_p(n.true, Y),), (_pos(n.true, X), _pos(n.equ, X, Y)))]
    pi3 += [progression_rule(n, p, r) for r in p.rules]
    pi4, pi5 = _decoding_rules(n, p)
    rules = pi1 + pi2 + pi3 + pi4 + pi5
    counts = {"encoding": len(pi1), "sequences": len(pi2), "progression": len(pi3),
              "falsity": len(pi4), "decoding": len(pi5)}
    return TransformReport(Program(tuple(rules)), n.manifest(), counts)


def expected_counts(p: Program) -> dict[str, int]:
    """Closed-form rule counts per construction step."""
    tau = len(p.intensional)
    return {"encoding": len(p.predicates) + 1 + 7, "sequences": 10, "progression": 1 + len(p.rules),
            "falsity": 1 + tau, "decoding": 1 + tau}
