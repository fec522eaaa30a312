"""First-order structures, assignments, grounded atoms, and brute-force enumeration."""
from __future__ import annotations

import itertools
import json
import os
import threading
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple

from . import formula as F
from .syntax import Eq, Fn, Literal, Pred, Var, is_numeral

DEFAULT_ENUM_CAP = 2 ** 24


class StructureError(ValueError):
    pass


class EvaluationError(ValueError):
    pass


class EnumerationTooLarge(RuntimeError):
    pass


def enum_cap() -> int:
    return int(os.environ.get("LPX_ENUM_CAP", DEFAULT_ENUM_CAP))


def elem_key(e):
    """Total order on mixed int/str domain elements."""
    return (0, e, "") if isinstance(e, int) else (1, 0, str(e))


class GroundAtom(NamedTuple):
    pred: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({', '.join(map(str, self.args))})"

    def sort_key(self):
        return (self.pred, tuple(elem_key(a) for a in self.args))


def sorted_atoms(atoms: Iterable[GroundAtom]) -> list[GroundAtom]:
    return sorted(atoms, key=GroundAtom.sort_key)


def clause_key(clause: Iterable[GroundAtom]):
    return tuple(a.sort_key() for a in sorted_atoms(clause))


class Structure:
    """A finite structure: domain, relations as tuple sets, functions as tables."""

    is_finite = True

    def __init__(self, domain, predicates=None, functions=None, pred_arity=None, func_arity=None):
        dom = tuple(domain)
        if not dom:
            raise StructureError("domain must be nonempty")
        if len(set(dom)) != len(dom):
            raise StructureError("domain has repeated elements")
        self.domain = dom
        self._dset = frozenset(dom)
        self.pred_arity: dict[str, int] = dict(pred_arity or {})
        self.func_arity: dict[str, int] = dict(func_arity or {})
        self.predicates: dict[str, frozenset] = {}
        self.functions: dict[str, dict] = {}
        for name, tuples in (predicates or {}).items():
            ts = frozenset(tuple(t) for t in tuples)
            ar = self.pred_arity.get(name)
            for t in ts:
                if ar is None:
                    ar = len(t)
                if len(t) != ar:
                    raise StructureError(f"tuple arity mismatch for {name}: {t}")
                for e in t:
                    if e not in self._dset:
                        raise StructureError(f"element {e!r} of {name} outside domain")
            if ar is None:
                raise StructureError(f"cannot infer arity of empty predicate {name}")
            self.pred_arity[name] = ar
            self.predicates[name] = ts
        for name, table in (functions or {}).items():
            tab = {tuple(k): v for k, v in dict(table).items()}
            ar = self.func_arity.get(name)
            for k, v in tab.items():
                if ar is None:
                    ar = len(k)
                if len(k) != ar:
                    raise StructureError(f"tuple arity mismatch for function {name}: {k}")
                if v not in self._dset or any(e not in self._dset for e in k):
                    raise StructureError(f"function {name} leaves the domain at {k}")
            if ar is None:
                raise StructureError(f"cannot infer arity of empty function {name}")
            if len(tab) != len(dom) ** ar:
                raise StructureError(f"partial function {name}")
            self.func_arity[name] = ar
            self.functions[name] = tab
        missing = set(self.pred_arity) - set(self.predicates)
        for name in missing:
            self.predicates[name] = frozenset()

    # -- access -----------------------------------------------------------
    def holds(self, pred: str, args: tuple) -> bool:
        try:
            return args in self.predicates[pred]
        except KeyError:
            raise EvaluationError(f"uninterpreted predicate {pred}") from None

    def apply(self, func: str, args: tuple):
        try:
            return self.functions[func][args]
        except KeyError:
            if func not in self.functions:
                raise EvaluationError(f"uninterpreted function {func}") from None
            raise EvaluationError(f"{func}{args} outside the domain") from None

    def tuples(self, pred: str):
        try:
            return self.predicates[pred]
        except KeyError:
            raise EvaluationError(f"uninterpreted predicate {pred}") from None

    def interprets(self, name: str) -> bool:
        return name in self.predicates or name in self.functions

    def vocabulary(self) -> set[str]:
        return set(self.predicates) | set(self.functions)

    # -- derived structures ---------------------------------------------
    def restrict(self, names: Iterable[str]) -> "Structure":
        keep = set(names)
        return Structure(
            self.domain,
            {n: t for n, t in self.predicates.items() if n in keep},
            {n: t for n, t in self.functions.items() if n in keep},
            {n: a for n, a in self.pred_arity.items() if n in keep},
            {n: a for n, a in self.func_arity.items() if n in keep},
        )

    def expand(self, predicates=None, functions=None, pred_arity=None, func_arity=None) -> "Structure":
        preds = dict(self.predicates)
        preds.update(predicates or {})
        funcs = dict(self.functions)
        funcs.update(functions or {})
        pa = dict(self.pred_arity)
        pa.update(pred_arity or {})
        fa = dict(self.func_arity)
        fa.update(func_arity or {})
        return Structure(self.domain, preds, funcs, pa, fa)

    def _key(self):
        return (
            self.domain,
            tuple(sorted((n, self.pred_arity[n], self.predicates[n]) for n in self.predicates)),
            tuple(sorted((n, tuple(sorted(t.items(), key=lambda kv: tuple(map(elem_key, kv[0])))))
                         for n, t in self.functions.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.predicates == other.predicates
            and self.pred_arity == other.pred_arity
            and self.functions == other.functions
        )

    def __hash__(self):
        return hash((self.domain, frozenset(self.predicates.items())))

    def __repr__(self):
        return f"Structure({save_structure(self)})"


class LazyStructure:
    """Countable structure over the positive integers.

    Predicates are finitely supported; functions are given by Python callables
    whose observed values are memoised.
    """

    is_finite = False
    domain = None

    def __init__(self, predicates=None, functions=None, pred_arity=None, func_arity=None):
        self.predicates: dict[str, frozenset] = {
            n: frozenset(tuple(t) for t in ts) for n, ts in (predicates or {}).items()
        }
        self.pred_arity = dict(pred_arity or {})
        for n, ts in self.predicates.items():
            for t in ts:
                self.pred_arity.setdefault(n, len(t))
                if len(t) != self.pred_arity[n]:
                    raise StructureError(f"tuple arity mismatch for {n}: {t}")
                if not all(isinstance(e, int) and e >= 1 for e in t):
                    raise StructureError(f"element of {n} outside the positive integers: {t}")
        for n in self.pred_arity:
            self.predicates.setdefault(n, frozenset())
        self._rules: dict[str, Callable] = {}
        self.func_arity = dict(func_arity or {})
        for n, (ar, fn) in (functions or {}).items():
            self._rules[n] = fn
            self.func_arity[n] = ar
        self._memo: dict[tuple, int] = {}
        self._lock = threading.Lock()
        self.functions = self._rules

    def holds(self, pred, args):
        try:
            return args in self.predicates[pred]
        except KeyError:
            raise EvaluationError(f"uninterpreted predicate {pred}") from None

    def tuples(self, pred):
        return self.tuples_of(pred)

    def tuples_of(self, pred):
        try:
            return self.predicates[pred]
        except KeyError:
            raise EvaluationError(f"uninterpreted predicate {pred}") from None

    def apply(self, func, args):
        key = (func, args)
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        try:
            rule = self._rules[func]
        except KeyError:
            raise EvaluationError(f"uninterpreted function {func}") from None
        value = rule(*args)
        if not (isinstance(value, int) and value >= 1):
            raise EvaluationError(f"{func}{args} = {value!r} outside the positive integers")
        with self._lock:
            self._memo[key] = value
        return value

    def interprets(self, name):
        return name in self.predicates or name in self._rules

    def vocabulary(self):
        return set(self.predicates) | set(self._rules)


# ---------------------------------------------------------------------------
# evaluation


def eval_term(s, a: Mapping, t):
    if isinstance(t, Var):
        try:
            return a[t.name]
        except KeyError:
            raise EvaluationError(f"unassigned variable {t.name}") from None
    if t.args:
        return s.apply(t.name, tuple(eval_term(s, a, x) for x in t.args))
    if t.name in s.functions:
        return s.apply(t.name, ())
    if is_numeral(t.name):
        return int(t.name)
    raise EvaluationError(f"uninterpreted constant {t.name}")


def eval_atom(s, a: Mapping, atom) -> bool:
    if isinstance(atom, Eq):
        return eval_term(s, a, atom.left) == eval_term(s, a, atom.right)
    return s.holds(atom.name, tuple(eval_term(s, a, t) for t in atom.args))


def ground_atom(s, a: Mapping, atom: Pred) -> GroundAtom:
    return GroundAtom(atom.name, tuple(eval_term(s, a, t) for t in atom.args))


def evaluate(s, a: Mapping, f) -> bool:
    """Tarskian truth of a literal, atom, or formula under assignment ``a``.

    Quantifiers (first- and second-order) are supported over finite domains.
    """
    if isinstance(f, Literal):
        return eval_atom(s, a, f.atom) != f.negated
    if isinstance(f, (Pred, Eq)):
        return eval_atom(s, a, f)
    if isinstance(f, F.Atomic):
        return eval_atom(s, a, f.atom)
    if isinstance(f, F.Not):
        return not evaluate(s, a, f.arg)
    if isinstance(f, F.And):
        return all(evaluate(s, a, g) for g in f.args)
    if isinstance(f, F.Or):
        return any(evaluate(s, a, g) for g in f.args)
    if isinstance(f, F.Implies):
        return (not evaluate(s, a, f.left)) or evaluate(s, a, f.right)
    if isinstance(f, F.Iff):
        return evaluate(s, a, f.left) == evaluate(s, a, f.right)
    if isinstance(f, (F.Forall, F.Exists)):
        if not s.is_finite:
            raise EvaluationError("quantifier over an infinite domain")
        test = all if isinstance(f, F.Forall) else any
        return test(
            evaluate(s, {**a, **b}, f.body) for b in F.product_assignments(f.vars, s.domain)
        )
    if isinstance(f, (F.SOForall, F.SOExists)):
        if not s.is_finite:
            raise EvaluationError("second-order quantifier over an infinite domain")
        preds = {v.name: v.arity for v in f.symbols if v.kind == "pred"}
        funcs = {v.name: v.arity for v in f.symbols if v.kind == "func"}
        test = all if isinstance(f, F.SOForall) else any
        return test(evaluate(e, a, f.body) for e in enumerate_expansions(s, preds, funcs))
    raise TypeError(f"cannot evaluate {f!r}")


def ins(s, preds: Iterable[str]) -> frozenset:
    """Ins(s, preds): the true grounded atoms of the given predicates."""
    out = set()
    for p in preds:
        if not s.interprets(p):
            raise EvaluationError(f"uninterpreted predicate {p}")
        for t in s.tuples(p):
            out.add(GroundAtom(p, t))
    return frozenset(out)


def ground_atoms(preds: Mapping[str, int], domain) -> list[GroundAtom]:
    """GA(preds, domain) in canonical order."""
    out = []
    for p in sorted(preds):
        for t in itertools.product(domain, repeat=preds[p]):
            out.append(GroundAtom(p, t))
    return out


# ---------------------------------------------------------------------------
# enumeration


def assignments(s, vars: Iterable[str]) -> Iterator[dict]:
    """All |A|^|vars| assignments in lexicographic order."""
    if not s.is_finite:
        raise EvaluationError("cannot enumerate assignments over an infinite domain")
    return F.product_assignments(vars, s.domain)


def expansion_count(domain_size: int, preds: Mapping[str, int], funcs: Mapping[str, int]) -> int:
    n = 1
    for ar in preds.values():
        n *= 2 ** (domain_size ** ar)
    for ar in funcs.values():
        n *= domain_size ** (domain_size ** ar)
    return n


def enumerate_expansions(base: Structure, preds: Mapping[str, int] | None = None,
                         funcs: Mapping[str, int] | None = None, cap: int | None = None
                         ) -> Iterator[Structure]:
    """Every expansion of ``base`` interpreting the extra symbols, lexicographically."""
    preds = dict(preds or {})
    funcs = dict(funcs or {})
    cap = enum_cap() if cap is None else cap
    total = expansion_count(len(base.domain), preds, funcs)
    if total > cap:
        raise EnumerationTooLarge(f"{total} expansions exceed the cap of {cap}")
    pnames, fnames = sorted(preds), sorted(funcs)
    ptuples = {p: list(itertools.product(base.domain, repeat=preds[p])) for p in pnames}
    fargs = {f: list(itertools.product(base.domain, repeat=funcs[f])) for f in fnames}
    choices = []
    for p in pnames:
        ts = ptuples[p]
        choices.append([frozenset(t for t, bit in zip(ts, bits) if bit)
                        for bits in itertools.product((False, True), repeat=len(ts))])
    for f in fnames:
        args = fargs[f]
        choices.append([dict(zip(args, vals))
                        for vals in itertools.product(base.domain, repeat=len(args))])
    for combo in itertools.product(*choices):
        yield base.expand(
            dict(zip(pnames, combo[: len(pnames)])),
            dict(zip(fnames, combo[len(pnames):])),
            preds, funcs,
        )


def all_structures(domain, preds: Mapping[str, int], funcs: Mapping[str, int] | None = None,
                   cap: int | None = None) -> Iterator[Structure]:
    empty = Structure(domain)
    return enumerate_expansions(empty, preds, funcs, cap)


# ---------------------------------------------------------------------------
# file format


def structure_to_json(s: Structure) -> dict:
    def tup(t):
        return list(t)

    return {
        "domain": list(s.domain),
        "arities": {
            **{n: s.pred_arity[n] for n in sorted(s.predicates)},
            **{n: s.func_arity[n] for n in sorted(s.functions)},
        },
        "predicates": {
            n: [tup(t) for t in sorted(s.predicates[n], key=lambda t: tuple(map(elem_key, t)))]
            for n in sorted(s.predicates)
        },
        "functions": {
            n: [list(k) + [v] for k, v in sorted(s.functions[n].items(),
                                                 key=lambda kv: tuple(map(elem_key, kv[0])))]
            for n in sorted(s.functions)
        },
    }


def structure_from_json(data: Mapping) -> Structure:
    if "domain" not in data:
        raise StructureError("missing 'domain'")
    arities = dict(data.get("arities", {}))
    preds = {n: [tuple(t) for t in ts] for n, ts in data.get("predicates", {}).items()}
    funcs = {}
    for n, rows in data.get("functions", {}).items():
        table = {}
        for row in rows:
            if not row:
                raise StructureError(f"empty row in function {n}")
            table[tuple(row[:-1])] = row[-1]
        funcs[n] = table
    pa = {n: arities[n] for n in preds if n in arities}
    fa = {n: arities[n] for n in funcs if n in arities}
    return Structure(data["domain"], preds, funcs, pa, fa)


def save_structure(s: Structure) -> str:
    return json.dumps(structure_to_json(s), sort_keys=False)


def load_structure(text: str) -> Structure:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"invalid JSON: {exc}") from None
    return structure_from_json(data)
