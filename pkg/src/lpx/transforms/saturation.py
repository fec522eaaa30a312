"""Saturation: ∃τ∀σ∀x̄∃ȳ ϑ compiled into a disjunctive program, and the parity program."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..formula import Atomic, Formula, Iff, Not, atoms, conj, disj, dnf, is_quantifier_free, ordered_free_vars, xor
from ..syntax import Eq, Literal, Pred, Program, Rule, Var
from .common import FreshNames, Symbol, TransformError, TransformReport

DNF_LIMIT = 4096


@dataclass(frozen=True)
class Skeleton:
    """Predicate names of the order skeleton: successor S, first F, last L."""

    lt: str
    nlt: str
    nsucc: str
    succ: str
    nfirst: str
    nlast: str
    first: str
    last: str

    @classmethod
    def allocate(cls, fresh: FreshNames) -> "Skeleton":
        return cls(*(fresh(n) for n in ("lt", "nlt", "nsucc", "succ", "nfirst", "nlast", "first", "last")))

    def rules(self) -> list[Rule]:
        X, Y, Z = Var("X"), Var("Y"), Var("Z")

        def a(name, *args):
            return Pred(name, tuple(args))

        pos = lambda name, *args: Literal(a(name, *args))
        neg = lambda name, *args: Literal(a(name, *args), True)
        return [
            Rule((a(self.lt, X, Y),), (neg(self.nlt, X, Y), Literal(Eq(X, Y), True))),
            Rule((a(self.nlt, X, Y),), (neg(self.lt, X, Y),)),
            Rule((), (pos(self.lt, X, Y), pos(self.lt, Y, X))),
            Rule((), (neg(self.lt, X, Y), neg(self.lt, Y, X), Literal(Eq(X, Y), True))),
            Rule((), (pos(self.lt, X, Y), pos(self.lt, Y, Z), neg(self.lt, X, Z))),
            Rule((a(self.nsucc, X, Z),), (pos(self.lt, X, Y), pos(self.lt, Y, Z))),
            Rule((a(self.succ, X, Y),), (pos(self.lt, X, Y), neg(self.nsucc, X, Y))),
            Rule((a(self.nfirst, Y),), (pos(self.lt, X, Y),)),
            Rule((a(self.nlast, X),), (pos(self.lt, X, Y),)),
            Rule((a(self.first, X),), (neg(self.nfirst, X),)),
            Rule((a(self.last, X),), (neg(self.nlast, X),)),
        ]

    def manifest(self) -> list[Symbol]:
        roles = [
            (self.lt, 2, "strict total order"), (self.nlt, 2, "complement of the order"),
            (self.nsucc, 2, "pairs with an element in between"), (self.succ, 2, "successor relation"),
            (self.nfirst, 1, "elements with a predecessor"), (self.nlast, 1, "elements with a successor"),
            (self.first, 1, "least element"), (self.last, 1, "greatest element"),
        ]
        return [Symbol(n, "pred", ar, role) for n, ar, role in roles]

    # formulas over the skeleton, for k-tuples of terms
    def is_first(self, xs: Sequence) -> Formula:
        return conj(Atomic(Pred(self.first, (x,))) for x in xs)

    def is_last(self, xs: Sequence) -> Formula:
        return conj(Atomic(Pred(self.last, (x,))) for x in xs)

    def tuple_successor(self, zs: Sequence, xs: Sequence) -> Formula:
        """x̄ is the lexicographic successor of z̄."""
        k = len(xs)
        parts = []
        for i in range(k):
            same = [Atomic(Eq(zs[j], xs[j])) for j in range(i)]
            step = [Atomic(Pred(self.succ, (zs[i], xs[i])))]
            wrap = [f for j in range(i + 1, k)
                    for f in (Atomic(Pred(self.last, (zs[j],))), Atomic(Pred(self.first, (xs[j],))))]
            parts.append(conj(same + step + wrap))
        return disj(parts)


def _complement_literal(lit: Literal, comp: Mapping[str, str]) -> Literal:
    a = lit.atom
    if lit.negated and isinstance(a, Pred) and a.name in comp:
        return Literal(Pred(comp[a.name], a.args))
    return lit


def _rules_from(body: Formula, head: Pred, comp: Mapping[str, str], limit: int) -> list[Rule]:
    out = []
    seen = set()
    for d in dnf(body, limit):
        lits = tuple(dict.fromkeys(_complement_literal(l, comp) for l in d))
        if lits not in seen:
            seen.add(lits)
            out.append(Rule((head,), lits))
    return out


def so2dlp(matrix: Formula, tau: Mapping[str, int], sigma: Mapping[str, int], k: int,
           xs: Sequence[str] | None = None, skeleton: Skeleton | None = None,
           fresh: FreshNames | None = None, limit: int = DNF_LIMIT) -> TransformReport:
    """A disjunctive program whose stable expansions define ∃τ∀σ∀x̄∃ȳ matrix.

    ``xs`` names the k universally quantified variables (default: the first k
    free variables); every other free variable is existential.  σ is handled
    by saturation: each guess of σ is swept along the lexicographic order of
    k-tuples, and reaching the last tuple saturates σ so that minimality
    forces the matrix to hold for every σ.
    """
    if not is_quantifier_free(matrix):
        raise TransformError("so2dlp expects a quantifier-free matrix")
    free = ordered_free_vars(matrix)
    xs = list(xs) if xs is not None else free[:k]
    if len(xs) != k:
        raise TransformError(f"expected {k} universal variables, got {len(xs)}")
    for name, ar in list(tau.items()) + list(sigma.items()):
        if ar > k:
            raise TransformError(f"predicate variable {name} has arity {ar} above {k}")
    if fresh is None:
        names = {a.name for a in atoms(matrix) if isinstance(a, Pred)}
        fresh = FreshNames(names | set(free) | set(tau) | set(sigma))
    sk = skeleton or Skeleton.allocate(fresh)
    comp = {name: fresh(f"{name.lstrip('_')}_c") for name in list(tau) + list(sigma)}
    d = fresh("d")
    arity = {**tau, **sigma}
    manifest = [] if skeleton is not None else sk.manifest()
    for name, c in comp.items():
        manifest.append(Symbol(c, "pred", arity[name], f"complement guess for {name}"))
    manifest.append(Symbol(d, "pred", k, "tuples reached by the sweep"))

    taken_vars = FreshNames(free)
    x_terms = tuple(Var(v) for v in xs)
    z_terms = tuple(Var(taken_vars.var(f"Z{i + 1}")) for i in range(k))

    guess = []
    for name, ar in arity.items():
        us = tuple(Var(taken_vars.var(f"U{i + 1}")) for i in range(ar))
        guess.append(Rule((Pred(name, us), Pred(comp[name], us)), ()))
    saturate = []
    for name in sigma:
        us = tuple(Var(taken_vars.var(f"U{i + 1}")) for i in range(sigma[name]))
        body = tuple(Literal(a) for a in [*(Pred(sk.last, (x,)) for x in x_terms), Pred(d, x_terms)])
        saturate.append(Rule((Pred(name, us),), body))
        saturate.append(Rule((Pred(comp[name], us),), body))
    sigma_comp = {n: comp[n] for n in sigma}
    head = Pred(d, x_terms)
    first = _rules_from(conj([sk.is_first(x_terms), matrix]), head, sigma_comp, limit)
    step_body = conj([sk.tuple_successor(z_terms, x_terms), Atomic(Pred(d, z_terms)), matrix])
    step = _rules_from(step_body, head, sigma_comp, limit)
    last_z = [Literal(Pred(sk.last, (z,))) for z in z_terms]
    check = [Rule((Pred(d, z_terms),), (*last_z, Literal(Pred(d, z_terms), True)))]

    skel = [] if skeleton is not None else sk.rules()
    rules = skel + guess + saturate + first + step + check
    counts = {"skeleton": len(skel), "guess": len(guess), "saturation": len(saturate),
              "sweep_first": len(first), "sweep_step": len(step), "check": len(check)}
    return TransformReport(Program(tuple(rules)), manifest, counts)


def parity_matrix(k: int, p: str, x: str, y: str, sk: Skeleton, fresh: FreshNames) -> tuple[Formula, list[str]]:
    """∀x̄ part of the parity sentence over the skeleton, with 0̄ and m̄ as guarded existentials.

    Returns the matrix and the names of its k universal variables.
    """
    def vs(base):
        return tuple(Var(fresh.var(f"{base}{i + 1}")) for i in range(k))

    def atom(name, *tuples):
        return Atomic(Pred(name, tuple(t for tup in tuples for t in tup)))

    xs = vs("X")
    z, u, v, w = vs("Z"), vs("U"), vs("V"), vs("W")
    z2, u2, v2, w2 = vs("Za"), vs("Ua"), vs("Va"), vs("Wa")
    # running parity of the row P(x̄, ·) must end in X(x̄)
    row = disj([
        conj([sk.is_first(z), Not(Iff(atom(y, z), atom(p, xs, z)))]),
        conj([sk.tuple_successor(u, v), Not(Iff(atom(p, xs, v), xor(atom(y, v), atom(y, u))))]),
        conj([sk.is_last(w), Iff(atom(x, xs), atom(y, w))]),
    ])
    # running parity of X must end even
    column = disj([
        conj([sk.is_first(z2), Not(Iff(atom(x, z2), atom(y, z2)))]),
        conj([sk.tuple_successor(u2, v2), Not(Iff(atom(x, v2), xor(atom(y, v2), atom(y, u2))))]),
        conj([sk.is_last(w2), Not(atom(y, w2))]),
    ])
    return conj([row, column]), [t.name for t in xs]


def parity_program(k: int, p: str = "p") -> TransformReport:
    """A program over a 2k-ary predicate ``p`` with a stable expansion iff |p| is even."""
    if k < 1:
        raise TransformError("parity_program needs k ≥ 1")
    fresh = FreshNames({p})
    sk = Skeleton.allocate(fresh)
    x, y = fresh("x"), fresh("y")
    matrix, xs = parity_matrix(k, p, x, y, sk, fresh)
    inner = so2dlp(matrix, {x: k}, {y: k}, k, xs=xs, skeleton=sk, fresh=fresh)
    rules = sk.rules() + list(inner.program.rules)
    manifest = sk.manifest() + [
        Symbol(x, "pred", k, "rows with an odd number of tuples"),
        Symbol(y, "pred", k, "universally quantified running parity"),
    ] + inner.manifest
    counts = {"skeleton": len(sk.rules()), **{k_: v for k_, v in inner.counts.items() if k_ != "skeleton"}}
    return TransformReport(Program(tuple(rules)), manifest, counts)
