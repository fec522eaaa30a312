"""First-order GL-reduction: residue splitting and instantiation over a structure."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

from .structures import EvaluationError, GroundAtom, eval_atom, eval_term, sorted_atoms
from .syntax import Eq, Literal, Pred, Program, Rule, Var, atom_vars


class RangeRestrictionError(EvaluationError):
    pass


@dataclass(frozen=True)
class GroundRule:
    body: frozenset = frozenset()
    head: frozenset = frozenset()

    def __str__(self) -> str:
        head = " ; ".join(map(str, sorted_atoms(self.head))) if self.head else "#false"
        if not self.body:
            return f"{head}."
        return f"{head} :- {', '.join(map(str, sorted_atoms(self.body)))}."

    def sort_key(self):
        return (
            tuple(a.sort_key() for a in sorted_atoms(self.head)),
            tuple(a.sort_key() for a in sorted_atoms(self.body)),
        )


@dataclass(frozen=True)
class RuleSplit:
    source: Rule
    positive_intensional_body: tuple
    residue: tuple


def is_positive_intensional(lit: Literal, intensional) -> bool:
    return not lit.negated and isinstance(lit.atom, Pred) and lit.atom.name in intensional


def split_rule(r: Rule, p: Program | None = None, intensional=None) -> RuleSplit:
    """Separate the positive intensional body atoms from the residue."""
    tau = p.intensional if intensional is None else intensional
    positive = tuple(l.atom for l in r.body if is_positive_intensional(l, tau))
    residue = tuple(l for l in r.body if not is_positive_intensional(l, tau))
    return RuleSplit(r, positive, residue)


# ---------------------------------------------------------------------------
# body matching


def _simple(t, bound) -> bool:
    return isinstance(t, Var) or all(v in bound for v in _vars_of_term(t))


def _vars_of_term(t):
    if isinstance(t, Var):
        yield t.name
    else:
        for a in t.args:
            yield from _vars_of_term(a)


def plan_body(checks: Iterable[Literal], extra_vars: Iterable[str], generator_ok: Callable[[str], bool],
              bound: Iterable[str] = ()):
    """Static join plan.

    Steps are ("gen", atom), ("bind", var, term), ("enum", var) and
    ("check", literal).  Positive atoms accepted by ``generator_ok`` enumerate
    their relation; everything else is a filter applied as soon as bound.
    """
    pending = list(checks)
    wanted = list(dict.fromkeys([v for l in pending for v in atom_vars(l.atom)] + list(extra_vars)))
    bound = set(bound)
    steps = []
    while True:
        progress = True
        while progress:
            progress = False
            for lit in list(pending):
                if all(v in bound for v in atom_vars(lit.atom)):
                    steps.append(("check", lit))
                    pending.remove(lit)
                    progress = True
        if all(v in bound for v in wanted) and not pending:
            return steps
        gen = None
        for lit in pending:
            a = lit.atom
            if (not lit.negated and isinstance(a, Pred) and generator_ok(a.name)
                    and all(_simple(t, bound) for t in a.args)):
                gen = lit
                break
        if gen is not None:
            steps.append(("gen", gen.atom))
            pending.remove(gen)
            bound.update(atom_vars(gen.atom))
            continue
        eq = None
        for lit in pending:
            a = lit.atom
            if isinstance(a, Eq) and not lit.negated:
                for x, t in ((a.left, a.right), (a.right, a.left)):
                    if isinstance(x, Var) and x.name not in bound and all(v in bound for v in _vars_of_term(t)):
                        eq = (lit, x.name, t)
                        break
            if eq:
                break
        if eq is not None:
            lit, v, t = eq
            steps.append(("bind", v, t))
            bound.add(v)
            continue
        free = [v for v in wanted if v not in bound]
        steps.append(("enum", free[0]))
        bound.add(free[0])


def run_plan(s, steps, assignment=None) -> Iterator[dict]:
    """Assignments satisfying a plan over structure ``s``."""
    a = dict(assignment or {})
    n = len(steps)

    def go(i):
        if i == n:
            yield dict(a)
            return
        step = steps[i]
        kind = step[0]
        if kind == "check":
            if eval_atom(s, a, step[1].atom) != step[1].negated:
                yield from go(i + 1)
        elif kind == "bind":
            a[step[1]] = eval_term(s, a, step[2])
            yield from go(i + 1)
            del a[step[1]]
        elif kind == "enum":
            if not s.is_finite:
                raise RangeRestrictionError(f"variable {step[1]} is not range-restricted")
            for e in s.domain:
                a[step[1]] = e
                yield from go(i + 1)
            del a[step[1]]
        else:
            atom = step[1]
            for tup in s.tuples(atom.name):
                added = []
                ok = True
                for t, e in zip(atom.args, tup):
                    if isinstance(t, Var):
                        if t.name in a:
                            if a[t.name] != e:
                                ok = False
                                break
                        else:
                            a[t.name] = e
                            added.append(t.name)
                    elif eval_term(s, a, t) != e:
                        ok = False
                        break
                if ok:
                    yield from go(i + 1)
                for v in added:
                    del a[v]

    return go(0)


def match(s, checks: Iterable[Literal], extra_vars: Iterable[str] = (),
          generator_ok: Callable[[str], bool] | None = None, assignment: Mapping | None = None
          ) -> Iterator[dict]:
    """Extensions of ``assignment`` to ``extra_vars`` and the check variables satisfying ``checks``."""
    checks = list(checks)
    gen_ok = generator_ok or (lambda name: True)
    a = dict(assignment or {})
    return run_plan(s, plan_body(checks, extra_vars, gen_ok, a), a)


# ---------------------------------------------------------------------------
# GL reduct


def _residue_generator(residue):
    names = {l.atom.name for l in residue if not l.negated and isinstance(l.atom, Pred)}
    return lambda name: name in names


def instantiate(s, r: Rule, split: RuleSplit, a: Mapping, occurrences: bool = False) -> GroundRule:
    """γ⁺[α].  With ``occurrences`` the body is a tuple keeping repeated atoms."""
    atoms = (GroundAtom(x.name, tuple(eval_term(s, a, t) for t in x.args))
             for x in split.positive_intensional_body)
    body = tuple(atoms) if occurrences else frozenset(atoms)
    head = frozenset(GroundAtom(x.name, tuple(eval_term(s, a, t) for t in x.args)) for x in r.head)
    return GroundRule(body, head)


def gl_reduct(p: Program, s, within: frozenset | None = None, occurrences: bool = False) -> frozenset:
    """Π^𝔸: { γ⁺[α] : α satisfies the residue of γ in s }.

    With ``within`` set to Ins(s, τ), instances whose positive intensional body
    is not contained in it are skipped; those can never fire inside a subset of
    ``within`` and so never affect minimality of ``within``.

    With ``occurrences`` each ground body is the sequence of its atom
    occurrences, so an instance such as p(1) ∧ p(1) → H keeps both conjuncts.
    """
    for name in p.predicates:
        if not s.interprets(name):
            raise EvaluationError(f"structure does not interpret predicate {name}")
    for name in p.functions:
        if not s.interprets(name):
            raise EvaluationError(f"structure does not interpret function {name}")
    out = set()
    for r in p.rules:
        split = split_rule(r, p)
        checks = list(split.residue)
        if within is not None:
            checks += [Literal(x) for x in split.positive_intensional_body]
            gen_ok = lambda name: True
        else:
            gen_ok = _residue_generator(split.residue)
        for a in match(s, checks, r.variables(), gen_ok):
            out.add(instantiate(s, r, split, a, occurrences))
    return frozenset(out)


def sorted_rules(rules: Iterable[GroundRule]) -> list[GroundRule]:
    return sorted(rules, key=GroundRule.sort_key)


def render_ground(rules: Iterable[GroundRule]) -> str:
    return "\n".join(str(r) for r in sorted_rules(rules))
