"""Normal programs ⇄ universal second-order theories over finite structures."""
from __future__ import annotations

from dataclasses import dataclass

from ..formula import (
    Atomic, Formula, Implies, Not, SOExists, SOVar, cnf, conj, disj, forall, is_quantifier_free,
    ordered_free_vars, substitute,
)
from ..syntax import Eq, Fn, Literal, Pred, Program, Rule, Var, classify, substitute_atom, substitute_term
from .common import FreshNames, Symbol, TransformError, TransformReport, program_names


@dataclass(frozen=True)
class UniversalTheory:
    """∃prefix ∀variables matrix, with a quantifier-free matrix."""

    prefix: tuple
    matrix: Formula
    variables: tuple = ()

    def __post_init__(self):
        if not is_quantifier_free(self.matrix):
            raise TransformError("matrix of a universal theory must be quantifier-free")
        if not self.variables:
            object.__setattr__(self, "variables", tuple(ordered_free_vars(self.matrix)))

    def conjuncts(self) -> list[Formula]:
        from ..formula import And
        return list(self.matrix.args) if isinstance(self.matrix, And) else [self.matrix]

    def sentence(self) -> Formula:
        body = forall(self.variables, self.matrix)
        return SOExists(self.prefix, body) if self.prefix else body

    def __str__(self) -> str:
        return str(self.sentence())


def _pred(name, *args) -> Formula:
    return Atomic(Pred(name, tuple(args)))


def _eq(a, b) -> Formula:
    return Atomic(Eq(a, b))


def _lit(l: Literal) -> Formula:
    return Not(Atomic(l.atom)) if l.negated else Atomic(l.atom)


def lex_less(lt: str, s: tuple, t: tuple) -> Formula:
    """s̄ < t̄ in the lexicographic order induced by the binary relation ``lt``."""
    if len(s) != len(t):
        raise TransformError("lexicographic comparison of tuples of different lengths")
    return disj(
        conj([_eq(s[j], t[j]) for j in range(i)] + [_pred(lt, s[i], t[i])]) for i in range(len(s))
    )


def normalize_heads(p: Program, fresh: FreshNames) -> tuple[list[Rule], dict[str, tuple]]:
    """Rewrite every head to P(H̄) over shared distinct variables, adding body equalities."""
    head_vars: dict[str, tuple] = {}
    for name in sorted(p.intensional):
        head_vars[name] = tuple(Var(fresh.var(f"H{j + 1}")) for j in range(p.predicates[name]))
    out = []
    for r in p.rules:
        if not r.head:
            out.append(r)
            continue
        (h,) = r.head
        hv = head_vars[h.name]
        sub: dict = {}
        eqs = []
        for v, t in zip(hv, h.args):
            if isinstance(t, Var) and t.name not in sub:
                sub[t.name] = v
            else:
                eqs.append((v, t))
        body = tuple(Literal(substitute_atom(l.atom, sub), l.negated) for l in r.body)
        body += tuple(Literal(Eq(v, substitute_term(t, sub))) for v, t in eqs)
        out.append(Rule((Pred(h.name, hv),), body))
    return out, head_vars


def nlp_to_universal_theory(p: Program, k: int) -> TransformReport:
    """A universal theory whose finite models, restricted to υ(p), are the stable models of p.

    Each intensional atom gets an order tuple of c = k·|τ|+1 function values;
    an atom holds iff its tuple is below the all-max tuple, and every true atom
    needs a supporting rule whose intensional body atoms have smaller tuples.
    """
    if not classify(p).normal:
        raise TransformError("nlp_to_universal_theory needs a normal program")
    if k < 1:
        raise TransformError("arity bound must be at least 1")
    for name, ar in list(p.predicates.items()) + list(p.functions.items()):
        if ar > k:
            raise TransformError(f"symbol {name} has arity {ar} above the bound {k}")
    fresh = FreshNames(program_names(p))
    rules, head_vars = normalize_heads(p, fresh)
    tau = sorted(p.intensional)
    c = k * len(tau) + 1
    lt = fresh("lt")
    mx = fresh("max")
    manifest = [Symbol(lt, "pred", 2, "strict total order"), Symbol(mx, "func", 0, "greatest element")]
    order_fns: dict[str, list[str]] = {}
    for name in tau:
        order_fns[name] = []
        for i in range(1, c + 1):
            f = fresh(f"o_{name}_{i}")
            order_fns[name].append(f)
            manifest.append(Symbol(f, "func", p.predicates[name], f"derivation-order function {i} of {name}"))

    def ord_(atom: Pred) -> tuple:
        return tuple(Fn(f, atom.args) for f in reversed(order_fns[atom.name]))

    top = (Fn(mx),) * c

    def drvbl(atom: Pred) -> Formula:
        return lex_less(lt, ord_(atom), top)

    def drvless(a: Pred, b: Pred) -> Formula:
        return lex_less(lt, ord_(a), ord_(b))

    x, y, z = (Var(fresh.var(n)) for n in ("A", "B", "C"))
    order_axioms = [
        Not(_pred(lt, x, x)),
        Implies(conj([_pred(lt, x, y), _pred(lt, y, z)]), _pred(lt, x, z)),
        disj([_eq(x, y), _pred(lt, x, y), _pred(lt, y, x)]),
        disj([_eq(x, Fn(mx)), _pred(lt, x, Fn(mx))]),
    ]
    conjuncts = list(order_axioms)
    phi_count = 0
    constraints = 0
    skolems = 0
    tauset = set(tau)
    for name in tau:
        lam = Pred(name, head_vars[name])
        supports = []
        hv = {v.name for v in head_vars[name]}
        for i, r in enumerate((r for r in rules if r.head and r.head[0].name == name), start=1):
            body = conj(_lit(l) for l in r.body)
            conjuncts.append(Implies(disj([body, Atomic(lam)]), drvbl(lam)))
            phi_count += 1
            ys = [v for v in r.variables() if v not in hv]
            sub = {}
            for j, yv in enumerate(ys, start=1):
                f = fresh(f"sk_{name}_{i}_{j}")
                sub[yv] = Fn(f, head_vars[name])
                manifest.append(Symbol(f, "func", len(head_vars[name]), f"witness for {yv} in rule {i} of {name}"))
                skolems += 1
            zeta = [l for l in r.body if l.negated or not isinstance(l.atom, Pred) or l.atom.name not in tauset]
            thetas = [l.atom for l in r.body if not l.negated and isinstance(l.atom, Pred) and l.atom.name in tauset]
            part = conj(
                [substitute(_lit(l), sub) for l in zeta]
                + [drvless(substitute_atom(t, sub), lam) for t in thetas]
            )
            supports.append(part)
        conjuncts.append(Implies(drvbl(lam), conj([Atomic(lam), disj(supports)])))
    for r in rules:
        if not r.head:
            conjuncts.append(Not(conj(_lit(l) for l in r.body)))
            constraints += 1
    prefix = tuple(SOVar(s.name, s.arity, s.kind) for s in manifest)
    theory = UniversalTheory(prefix, conj(conjuncts))
    counts = {
        "order_axioms": len(order_axioms),
        "derivability": phi_count,
        "support": len(tau),
        "constraints": constraints,
        "order_functions": c * len(tau),
        "skolem_functions": skolems,
        "order_width": c,
    }
    return TransformReport(theory, manifest, counts)


def universal_theory_to_constraints(t: UniversalTheory, limit: int = 4096) -> TransformReport:
    """One constraint rule per CNF clause, literals flipped into the body."""
    rules = []
    for part in t.conjuncts():
        for clause in cnf(part, limit):
            body = tuple(Literal(l.atom, not l.negated) for l in clause)
            rules.append(Rule((), body))
    manifest = [Symbol(s.name, s.kind, s.arity, "existential symbol") for s in t.prefix]
    return TransformReport(Program(tuple(rules)), manifest, {"constraints": len(rules)})
