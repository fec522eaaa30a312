"""Clause coding over the positive integers and a bounded check of the coded progression.

Codes come from the pairing e(m, n) = 2^m + 3^n.  Nested pairings grow far
beyond what can be written out, so a pairing whose arguments exceed
``EXPLICIT_LIMIT`` is kept as a symbolic ``Pair``.  Because the pairing is
injective, structural equality of symbolic codes is equality of the numbers
they denote, and a symbolic code never equals an explicit integer code.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .grounding import gl_reduct, match, split_rule
from .semantics import gamma_stages
from .structures import EvaluationError, GroundAtom, LazyStructure, clause_key, eval_term
from .syntax import Program, Var

EXPLICIT_LIMIT = 4096
MAX_VALUE_BITS = 1 << 20


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class Pair:
    """The code 2^left + 3^right, kept unevaluated."""

    left: "Code"
    right: "Code"

    @property
    def value(self) -> int:
        l, r = as_int(self.left), as_int(self.right)
        if max(l, r * 2) > MAX_VALUE_BITS:
            raise OverflowError("code too large to write out")
        return 2 ** l + 3 ** r

    def __str__(self) -> str:
        return f"e({self.left}, {self.right})"


Code = Union[int, Pair]


def as_int(c: Code) -> int:
    return c.value if isinstance(c, Pair) else c


def code_key(c: Code):
    """Total order on codes: explicit integers first, then by structure."""
    if isinstance(c, Pair):
        return (1, code_key(c.left), code_key(c.right))
    return (0, c)


def _check(x) -> None:
    if isinstance(x, bool) or not isinstance(x, (int, Pair)):
        raise CodeError(f"not a code: {x!r}")
    if isinstance(x, int) and x < 1:
        raise CodeError(f"pairing is defined on positive integers only, got {x}")


def in_range(n: int) -> bool:
    """Whether the integer n is 2^m + 3^k for some m, k ≥ 1."""
    m = 1
    while (1 << m) < n:
        rest = n - (1 << m)
        while rest % 3 == 0:
            rest //= 3
        if rest == 1 and n - (1 << m) > 1:
            return True
        m += 1
    return False


# Every solution of 2^a + 3^b = 2^c + 3^d with (a, b) != (c, d), all ≥ 1;
# a brute-force search over exponents up to 4096 finds exactly these.
COLLISIONS = ((1, 2, 3, 1), (3, 3, 5, 1), (4, 5, 8, 1))
_COLLIDING_LEFT = frozenset(x for a, _, c, _ in COLLISIONS for x in (a, c))


def flag_values(count: int) -> list[int]:
    """The first ``count`` usable ending flags.

    A flag lies outside the range of the pairing and is never the left
    argument of a colliding pair, so sequence codes built on it never clash.
    """
    out = []
    n = 1
    while len(out) < count:
        if not in_range(n) and n not in _COLLIDING_LEFT:
            out.append(n)
        n += 1
    return out


class CodeRegistry:
    """Memo of every pairing built, plus the ending flags of a program."""

    def __init__(self, predicates: Iterable[str] = (), flags: Mapping[str, int] | None = None,
                 eps: int | None = None):
        self._split: dict[int, tuple] = {}
        self._lock = threading.Lock()
        if flags is None:
            names = list(predicates)
            values = flag_values(len(names) + 1)
            flags = dict(zip(names, values))
            eps = values[len(names)] if eps is None else eps
        elif eps is None:
            raise CodeError("explicit flags need an explicit clause flag")
        self.flags = dict(flags)
        self.eps = eps
        self.flag_names = {v: k for k, v in self.flags.items()}
        values = list(self.flags.values()) + [eps]
        if len(set(values)) != len(values):
            raise CodeError("ending flags must be distinct")
        for v in values:
            if not isinstance(v, int) or v < 1 or in_range(v):
                raise CodeError(f"flag {v} lies in the range of the pairing")

    # -- pairing ----------------------------------------------------------
    def pair(self, m: Code, n: Code) -> Code:
        _check(m)
        _check(n)
        if isinstance(m, int) and isinstance(n, int) and m <= EXPLICIT_LIMIT and n <= EXPLICIT_LIMIT:
            v = 2 ** m + 3 ** n
            with self._lock:
                old = self._split.setdefault(v, (m, n))
            if old != (m, n):
                raise CodeError(f"pairing collision at {v}: {old} vs {(m, n)}")
            return v
        return Pair(m, n)

    def split(self, c: Code) -> tuple:
        if isinstance(c, Pair):
            return c.left, c.right
        try:
            return self._split[c]
        except KeyError:
            raise CodeError(f"unregistered code {c}") from None

    def is_flag(self, c: Code) -> bool:
        return isinstance(c, int) and (c == self.eps or c in self.flag_names)

    # -- sequences --------------------------------------------------------
    def enc(self, items: Iterable[Code], flag: Code) -> Code:
        """enc(a₁,…,a_k; flag) = e(…e(e(flag, a₁), a₂)…, a_k)."""
        c = flag
        for a in items:
            c = self.pair(c, a)
        return c

    def decode(self, c: Code) -> tuple[Code, tuple]:
        """(flag, elements) of a sequence code."""
        items = []
        while not self.is_flag(c):
            c, last = self.split(c)
            items.append(last)
        return c, tuple(reversed(items))

    def elements(self, c: Code) -> tuple:
        flag, items = self.decode(c)
        if flag != self.eps:
            raise CodeError(f"{c} is not a clause code")
        return items

    # -- atoms and clauses ------------------------------------------------
    def code_atom(self, a: GroundAtom) -> Code:
        if a.pred not in self.flags:
            raise CodeError(f"no flag reserved for predicate {a.pred}")
        return self.enc(a.args, self.flags[a.pred])

    def decode_atom(self, c: Code) -> GroundAtom:
        flag, items = self.decode(c)
        if flag not in self.flag_names:
            raise CodeError(f"{c} is not an atom code")
        return GroundAtom(self.flag_names[flag], items)

    def code_clause(self, clause: Iterable[GroundAtom]) -> Code:
        order = list(self.flags)
        atoms = sorted(clause, key=lambda a: (order.index(a.pred), clause_key([a])))
        return self.enc((self.code_atom(a) for a in atoms), self.eps)

    def decode_clause(self, c: Code) -> frozenset:
        return frozenset(self.decode_atom(x) for x in self.elements(c))

    # -- encoding predicates ---------------------------------------------
    def mrg(self, a: Code, b: Code) -> Code:
        return self.enc(self.elements(a) + self.elements(b), self.eps)

    def ext(self, a: Code, b: Code) -> Code:
        return self.enc((x for x in self.elements(a) if x != b), self.eps)

    def in_(self, b: Code, a: Code) -> bool:
        return b in self.elements(a)

    def subc(self, a: Code, b: Code) -> bool:
        inner = set(self.elements(b))
        return all(x in inner for x in self.elements(a))

    def equ(self, a: Code, b: Code) -> bool:
        return self.subc(a, b) and self.subc(b, a)

    def class_key(self, c: Code) -> frozenset:
        """Canonical label of the equ-class of a clause code."""
        return frozenset(self.elements(c))

    def dump(self) -> list[tuple[int, tuple]]:
        with self._lock:
            return sorted(self._split.items())


_default = CodeRegistry()


def pair(m: Code, n: Code) -> Code:
    """e(m, n) = 2^m + 3^n, written out while the arguments stay small."""
    return _default.pair(m, n)


def enc_chain(items: Iterable[Code], flag: Code) -> Code:
    return _default.enc(items, flag)


def code_atom(a: GroundAtom, registry: CodeRegistry) -> Code:
    return registry.code_atom(a)


def code_clause(c: Iterable[GroundAtom], registry: CodeRegistry) -> Code:
    return registry.code_clause(c)


# ---------------------------------------------------------------------------
# coded progression


def _bind(pattern, items, a: dict, s) -> bool:
    """Extend ``a`` so that ``pattern`` (a tuple of terms) matches ``items``; False on clash."""
    for t, v in zip(pattern, items):
        if isinstance(t, Var):
            if t.name in a and a[t.name] != v:
                return False
            a[t.name] = v
    return True


def _ground_ok(s, a, pattern, items) -> bool:
    try:
        return all(eval_term(s, a, t) == v for t, v in zip(pattern, items))
    except EvaluationError:
        return False


@dataclass
class DeltaRun:
    registry: CodeRegistry
    stages: list = field(default_factory=list)  # list of {class_key: representative code}


def delta_stages(p: Program, base: LazyStructure, n: int, registry: CodeRegistry | None = None) -> DeltaRun:
    """Δ⁰ … Δⁿ as equ-classes of clause codes derived by the coded progression rules.

    A rule fires on representative codes x₁…x_k from the previous stage: each
    x_i must contain the code of its i-th positive intensional body atom, which
    fixes the variables of that atom by decoding; the remaining variables are
    bound through the residue over ``base``.  The derived code is
    mrg(ext(x₁, z₁), …, ext(x_k, z_k), ⌈head⌉).
    """
    reg = registry or CodeRegistry(p.predicates)
    run = DeltaRun(reg, [{}])
    splits = [split_rule(r, p) for r in p.rules]
    ext_ok = lambda name: name not in p.intensional
    for _ in range(n):
        prev = run.stages[-1]
        cur = dict(prev)
        reps = sorted(prev.values(), key=code_key)
        for r, sp in zip(p.rules, splits):
            atoms = sp.positive_intensional_body
            for xs in itertools.product(reps, repeat=len(atoms)):
                choices = [reg.elements(x) for x in xs]
                for zs in itertools.product(*choices):
                    a: dict = {}
                    ok = True
                    decoded = []
                    for atom, z in zip(atoms, zs):
                        flag, items = reg.decode(z)
                        if flag != reg.flags[atom.name] or len(items) != len(atom.args):
                            ok = False
                            break
                        if not _bind(atom.args, items, a, base):
                            ok = False
                            break
                        decoded.append(items)
                    if not ok:
                        continue
                    for full in match(base, sp.residue, r.variables(), ext_ok, a):
                        if not all(_ground_ok(base, full, t.args, items) for t, items in zip(atoms, decoded)):
                            continue
                        head = reg.enc(
                            (reg.code_atom(GroundAtom(h.name, tuple(eval_term(base, full, t) for t in h.args)))
                             for h in r.head),
                            reg.eps,
                        )
                        ys = [reg.ext(x, z) for x, z in zip(xs, zs)]
                        w = ys[0] if ys else reg.eps
                        for y in ys[1:]:
                            w = reg.mrg(w, y)
                        v = reg.mrg(w, head)
                        cur.setdefault(reg.class_key(v), v)
        run.stages.append(cur)
    return run


def delta_n(p: Program, base: LazyStructure, n: int, registry: CodeRegistry | None = None) -> set:
    """Representative codes of the equ-classes in Δⁿ."""
    return set(delta_stages(p, base, n, registry).stages[-1].values())


@dataclass
class Claim1Report:
    passed: bool
    stages: list  # (n, |Γ↑n|, |Δⁿ classes|, missing codes, extra codes)
    registry: CodeRegistry

    def lines(self) -> list[str]:
        out = []
        for n, g, d, missing, extra in self.stages:
            status = "ok" if not missing and not extra else "MISMATCH"
            out.append(f"stage {n}: gamma={g} delta={d} {status}")
            for c in missing:
                out.append(f"  only in progression: {c}")
            for c in extra:
                out.append(f"  only in coded run: {c}")
        out.append("PASS" if self.passed else "FAIL")
        return out


def claim1_check(p: Program, base: LazyStructure, n: int) -> Claim1Report:
    """Compare the codes of Γ↑m with Δᵐ (modulo equ) for m = 0 … n."""
    reg = CodeRegistry(p.predicates)
    g = gl_reduct(p, base, occurrences=True)
    gamma = list(gamma_stages(g, max_stages=n))
    while len(gamma) < n + 1:
        gamma.append(gamma[-1])
    run = delta_stages(p, base, n, reg)
    rows = []
    passed = True
    for m in range(n + 1):
        coded = {reg.class_key(reg.code_clause(c)): c for c in gamma[m]}
        delta = run.stages[m]
        missing = sorted((" | ".join(map(str, sorted(c, key=GroundAtom.sort_key))) or "#false")
                         for k, c in coded.items() if k not in delta)
        extra = sorted(str(reg.decode_clause(delta[k])) for k in delta if k not in coded)
        if missing or extra:
            passed = False
        rows.append((m, len(coded), len(delta), missing, extra))
    return Claim1Report(passed, rows, reg)
