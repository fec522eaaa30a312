"""Stable-model engines: minimal model of the GL reduct, and clause progression."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .grounding import GroundRule, gl_reduct, match
from .sat import Solver
from .structures import (
    EvaluationError, GroundAtom, Structure, enumerate_expansions, eval_term, ground_atoms,
    ins, save_structure,
)
from .syntax import Eq, Pred, Program, classify

DEFAULT_LATTICE_CAP = 20
DEFAULT_TRACE_DEPTH = 64


class MinimalitySearchTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class StableReport:
    stable: bool
    witness: object = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.stable


def _as_rules(g) -> list[GroundRule]:
    out = []
    for x in g:
        out.append(x if isinstance(x, GroundRule) else GroundRule(frozenset(), frozenset(x)))
    return out


def violated(i: frozenset, g) -> GroundRule | None:
    """First rule (or clause) of ``g`` falsified by ``i``, if any."""
    for r in _as_rules(g):
        if r.body <= i and not (r.head & i):
            return r
    return None


def is_model(i: Iterable[GroundAtom], g) -> bool:
    return violated(frozenset(i), g) is None


def smaller_model(i: Iterable[GroundAtom], g, method: str = "search",
                  cap: int = DEFAULT_LATTICE_CAP) -> frozenset | None:
    """A model of ``g`` strictly contained in ``i``, or None.

    Single-atom deletions are tried first.  Then either the full subset
    lattice (``method="lattice"``, refused above ``cap`` atoms) or a SAT search
    over subsets of ``i``.
    """
    i = frozenset(i)
    rules = [r for r in _as_rules(g) if r.body <= i]
    for a in sorted(i, key=GroundAtom.sort_key):
        j = i - {a}
        if violated(j, rules) is None:
            return j
    if len(i) <= 1:
        return None
    if method == "lattice":
        if len(i) > cap:
            raise MinimalitySearchTooLarge(f"{len(i)} atoms exceed the lattice cap of {cap}")
        atoms = sorted(i, key=GroundAtom.sort_key)
        for size in range(len(atoms) - 2, -1, -1):
            for sub in itertools.combinations(atoms, size):
                j = frozenset(sub)
                if violated(j, rules) is None:
                    return j
        return None
    atoms = sorted(i, key=GroundAtom.sort_key)
    index = {a: k + 1 for k, a in enumerate(atoms)}
    solver = Solver(len(atoms))
    for r in rules:
        solver.add_clause([-index[b] for b in r.body] + [index[h] for h in r.head if h in index])
    solver.add_clause([-v for v in index.values()])
    m = solver.solve()
    if m is None:
        return None
    return frozenset(a for a in atoms if m[index[a]])


def is_minimal_model(i: Iterable[GroundAtom], g, method: str = "search",
                     cap: int = DEFAULT_LATTICE_CAP) -> bool:
    i = frozenset(i)
    return is_model(i, g) and smaller_model(i, g, method, cap) is None


def _check_minimal(i: frozenset, g, method="search") -> StableReport:
    bad = violated(i, g)
    if bad is not None:
        return StableReport(False, bad, "rule violated")
    smaller = smaller_model(i, g, method)
    if smaller is not None:
        return StableReport(False, smaller, "smaller model")
    return StableReport(True)


def is_stable_reduct(s, p: Program, method: str = "search", full_reduct: bool = False) -> StableReport:
    """Stable iff Ins(s, τ) is a minimal model of the GL reduct of p over s."""
    i = ins(s, sorted(p.intensional))
    g = gl_reduct(p, s) if full_reduct else gl_reduct(p, s, within=i)
    return _check_minimal(i, g, method)


# ---------------------------------------------------------------------------
# progression


def gamma_step(g: Iterable[GroundRule], sigma: Iterable[frozenset], delta=None) -> frozenset:
    """Γ_g(Σ): all H ∪ C₁ ∪ … ∪ C_k for a rule p₁…p_k → H and clauses Cᵢ ∨ pᵢ ∈ Σ.

    If ``delta`` is given, only combinations using at least one clause of
    ``delta`` (⊆ Σ) are formed.
    """
    sigma = frozenset(sigma)
    index: dict[GroundAtom, list[frozenset]] = {}
    for c in sigma:
        for a in c:
            index.setdefault(a, []).append(c)
    dindex: dict[GroundAtom, list[frozenset]] = {}
    if delta is not None:
        for c in delta:
            for a in c:
                dindex.setdefault(a, []).append(c)
    out = set()
    for r in g:
        body = sorted(r.body, key=GroundAtom.sort_key)
        if not body:
            if delta is None:
                out.add(frozenset(r.head))
            continue
        if any(b not in index for b in body):
            continue
        options = [[c - {b} for c in index[b]] for b in body]
        if delta is None:
            for combo in itertools.product(*options):
                out.add(frozenset(r.head).union(*combo))
            continue
        for pos, b in enumerate(body):
            if b not in dindex:
                continue
            old = [[c - {x} for c in index[x] if c not in delta] for x in body[:pos]]
            new = [[c - {b} for c in dindex[b]]]
            rest = options[pos + 1:]
            for combo in itertools.product(*old, *new, *rest):
                out.add(frozenset(r.head).union(*combo))
    return frozenset(out)


class FixedPoint(frozenset):
    """Γ↑ω together with the stage sequence Γ↑0, Γ↑1, … (up to a trace depth)."""

    stages: tuple = ()
    converged_at: int = 0


def gamma_stages(g: Iterable[GroundRule], max_stages: int | None = None,
                 limit: int | None = 200_000) -> Iterator[frozenset]:
    """Γ↑0 = ∅, Γ↑1, …, stopping after the fixed point (or ``max_stages``)."""
    g = list(g)
    current: frozenset = frozenset()
    yield current
    n = 0
    delta = None
    while max_stages is None or n < max_stages:
        if delta is None:
            new = gamma_step(g, current)
        else:
            new = gamma_step(g, current, delta)
        nxt = current | new
        n += 1
        if limit is not None and len(nxt) > limit:
            raise MinimalitySearchTooLarge(f"progression exceeds {limit} clauses")
        if nxt == current:
            return
        delta = nxt - current
        current = nxt
        yield current


def gamma_fixpoint(g: Iterable[GroundRule], trace_depth: int = DEFAULT_TRACE_DEPTH) -> FixedPoint:
    stages = list(gamma_stages(g))
    fp = FixedPoint(stages[-1])
    fp.stages = tuple(stages[: trace_depth + 1])
    fp.converged_at = len(stages) - 1
    return fp


def gamma_omega(s, p: Program, trace_depth: int = DEFAULT_TRACE_DEPTH) -> FixedPoint:
    """Γ^s_p↑ω computed over the full GL reduct."""
    return gamma_fixpoint(gl_reduct(p, s), trace_depth)


def is_stable_progression(s, p: Program, method: str = "search") -> StableReport:
    """Stable iff Ins(s, τ) is a minimal model of Γ↑ω (with the normal-program check)."""
    i = ins(s, sorted(p.intensional))
    fp = gamma_omega(s, p)
    report = _check_minimal(i, fp, method)
    if classify(p).normal:
        units = frozenset(a for c in fp if len(c) == 1 for a in c)
        shortcut = frozenset() not in fp and units == i
        if shortcut != report.stable:
            raise AssertionError(
                f"progression criteria disagree for a normal program: minimal={report.stable}, "
                f"equality={shortcut}"
            )
    return report


def is_stable(s, p: Program) -> bool:
    return is_stable_reduct(s, p).stable


# ---------------------------------------------------------------------------
# stable expansions


def _aux_signature(p: Program, aux, base) -> tuple[dict, dict]:
    if isinstance(aux, Mapping):
        preds = {n: a for n, a in aux.items() if n not in p.functions}
        funcs = {n: a for n, a in aux.items() if n in p.functions}
        return preds, funcs
    preds, funcs = {}, {}
    for name in aux:
        if name in p.predicates:
            preds[name] = p.predicates[name]
        elif name in p.functions:
            funcs[name] = p.functions[name]
        else:
            raise EvaluationError(f"auxiliary symbol {name} does not occur in the program")
    return preds, funcs


def enumerate_stable_expansions(base: Structure, p: Program, aux=(), method: str = "ground",
                                cap: int | None = None) -> Iterator[Structure]:
    """Expansions of ``base`` over ``aux`` that are stable models of ``p``.

    ``method="brute"`` checks every expansion with ``is_stable_reduct``;
    ``method="ground"`` grounds with the auxiliary predicates open and searches
    supported models with the SAT solver, then checks minimality of each candidate.
    Auxiliary functions are always enumerated explicitly.
    """
    preds, funcs = _aux_signature(p, aux, base)
    base = base.restrict(base.vocabulary() - set(preds) - set(funcs))
    for name in p.vocabulary():
        if name not in preds and name not in funcs and not base.interprets(name):
            raise EvaluationError(f"symbol {name} is neither in the base nor auxiliary")
    if method == "brute":
        for e in enumerate_expansions(base, preds, funcs, cap):
            if is_stable_reduct(e, p).stable:
                yield e
        return
    if method != "ground":
        raise ValueError(f"unknown method {method}")
    found = []
    for fe in enumerate_expansions(base, {}, funcs, cap):
        found.extend(GroundSearch(fe, p, preds).stable_expansions())
    found.sort(key=save_structure)
    yield from found


def has_stable_expansion(base: Structure, p: Program, aux=(), method: str = "ground") -> bool:
    if method == "brute":
        return next(enumerate_stable_expansions(base, p, aux, "brute"), None) is not None
    preds, funcs = _aux_signature(p, aux, base)
    base = base.restrict(base.vocabulary() - set(preds) - set(funcs))
    for fe in enumerate_expansions(base, {}, funcs):
        if next(GroundSearch(fe, p, preds).stable_models(), None) is not None:
            return True
    return False


@dataclass
class _GRule:
    pos_int: tuple
    pos_ext: tuple
    neg: tuple
    head: tuple


class GroundSearch:
    """Propositional search for stable expansions over a fixed finite base.

    Atoms of intensional and auxiliary predicates become SAT variables; every
    other symbol is read from the base.  Candidates are supported classical
    models; each is accepted only if no proper subset of its intensional part
    models the reduct.
    """

    def __init__(self, base: Structure, p: Program, aux_preds: Mapping[str, int]):
        self.base = base
        self.p = p
        self.aux = dict(aux_preds)
        tau = p.intensional
        self.open = {n: p.predicates[n] for n in tau}
        self.open.update(self.aux)
        self.atoms = ground_atoms(self.open, base.domain)
        self.var = {a: k + 1 for k, a in enumerate(self.atoms)}
        self.intensional_vars = [self.var[a] for a in self.atoms if a.pred in tau]
        self.fixed = []
        for name in tau:
            if name not in self.aux:
                true = base.tuples(name)
                for a in self.atoms:
                    if a.pred == name:
                        self.fixed.append(self.var[a] if a.args in true else -self.var[a])
        self.rules = self._ground()

    def _ground(self) -> list[_GRule]:
        known = lambda name: name not in self.open
        tau = self.p.intensional
        out: dict[tuple, _GRule] = {}
        for r in self.p.rules:
            checks = [l for l in r.body if isinstance(l.atom, Eq) or known(l.atom.name)]
            rest = [l for l in r.body if not (isinstance(l.atom, Eq) or known(l.atom.name))]
            for a in match(self.base, checks, r.variables(), known):
                def gv(atom):
                    return self.var[GroundAtom(atom.name, tuple(eval_term(self.base, a, t) for t in atom.args))]
                pos_int = tuple(sorted({gv(l.atom) for l in rest if not l.negated and l.atom.name in tau}))
                pos_ext = tuple(sorted({gv(l.atom) for l in rest if not l.negated and l.atom.name not in tau}))
                negs = tuple(sorted({gv(l.atom) for l in rest if l.negated}))
                head = tuple(sorted({gv(h) for h in r.head}))
                if set(negs) & (set(pos_int) | set(pos_ext)):
                    continue
                key = (pos_int, pos_ext, negs, head)
                out.setdefault(key, _GRule(*key))
        return list(out.values())

    def _solver(self) -> Solver:
        s = Solver(len(self.atoms))
        for l in self.fixed:
            s.add_clause([l])
        support: dict[int, list[_GRule]] = {}
        for r in self.rules:
            s.add_clause([-b for b in r.pos_int + r.pos_ext] + list(r.neg) + list(r.head))
            for h in r.head:
                support.setdefault(h, []).append(r)
        for a in self.intensional_vars:
            rs = support.get(a, [])
            if any(not (r.pos_int or r.pos_ext or r.neg) and len(r.head) == 1 for r in rs):
                continue
            clause = [-a]
            for r in rs:
                sv = s.new_var()
                clause.append(sv)
                for b in r.pos_int + r.pos_ext:
                    s.add_clause([-sv, b])
                for n in r.neg:
                    s.add_clause([-sv, -n])
                for h in r.head:
                    if h != a:
                        s.add_clause([-sv, -h])
            s.add_clause(clause)
        return s

    def _minimal(self, m: list[bool]) -> bool:
        true_int = [v for v in self.intensional_vars if m[v]]
        if not true_int:
            return True
        tset = set(true_int)
        sub = Solver(self.nvars_hint())
        for r in self.rules:
            if any(m[n] for n in r.neg) or not all(m[b] for b in r.pos_ext):
                continue
            if not all(b in tset for b in r.pos_int):
                continue
            sub.add_clause([-b for b in r.pos_int] + [h for h in r.head if h in tset])
        sub.add_clause([-v for v in true_int])
        for v in self.intensional_vars:
            if not m[v]:
                sub.add_clause([-v])
        return sub.solve() is None

    def nvars_hint(self) -> int:
        return len(self.atoms)

    def stable_models(self) -> Iterator[frozenset]:
        s = self._solver()
        project = list(range(1, len(self.atoms) + 1))
        for m in s.models(project, order=project):
            if self._minimal(m):
                yield frozenset(a for a in self.atoms if m[self.var[a]])

    def stable_expansions(self) -> Iterator[Structure]:
        for model in self.stable_models():
            yield self.to_structure(model)

    def to_structure(self, model: frozenset) -> Structure:
        preds = {n: set() for n in self.aux}
        for a in model:
            if a.pred in preds:
                preds[a.pred].add(a.args)
        return self.base.expand(preds, None, self.aux, None)
