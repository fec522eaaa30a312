"""A compact CDCL SAT solver.

Literals are nonzero ints in DIMACS style.  Two watched literals, first-UIP
clause learning with backjumping, activity-ordered decisions, phase saving
and geometric restarts.  Learned clauses are kept across calls, so repeated
solving with blocking clauses (model enumeration) gets cheaper as it goes.
"""
from __future__ import annotations

import heapq
from typing import Iterable, Iterator, Sequence


class Solver:
    def __init__(self, nvars: int = 0):
        self.nvars = nvars
        self.clauses: list[list[int]] = []
        self.units: list[int] = []
        self.empty = False
        self.watches: dict[int, list[list[int]]] = {}
        self._activity: list[float] = []
        self._phase: list[bool] = []

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def add_clause(self, lits: Iterable[int]) -> None:
        seen: dict[int, None] = {}
        for l in lits:
            if -l in seen:
                return
            seen[l] = None
            if abs(l) > self.nvars:
                self.nvars = abs(l)
        c = list(seen)
        if not c:
            self.empty = True
        elif len(c) == 1:
            self.units.append(c[0])
        else:
            self._attach(c)

    def _attach(self, c: list[int]) -> None:
        self.clauses.append(c)
        self.watches.setdefault(c[0], []).append(c)
        self.watches.setdefault(c[1], []).append(c)

    def solve(self, assumptions: Sequence[int] = (), order: Sequence[int] | None = None,
              prefer_true: bool = False):
        """A satisfying assignment as a list of bools indexed by variable, or None."""
        if self.empty:
            return None
        n = self.nvars
        act = self._activity
        if len(act) < n + 1:
            rank = {v: i for i, v in enumerate(order or ())}
            for v in range(len(act), n + 1):
                # earlier variables in ``order`` win ties before any conflict
                act.append(1e-9 * (n + 1 - rank[v]) if v in rank else 0.0)
                self._phase.append(prefer_true)
        phase = self._phase
        val = [0] * (n + 1)
        level = [0] * (n + 1)
        reason: list = [None] * (n + 1)
        trail: list[int] = []
        trail_lim: list[int] = []
        watches = self.watches
        heap = [(-act[v], v) for v in range(1, n + 1)]
        heapq.heapify(heap)
        inc = [1.0]

        def enqueue(l, why) -> bool:
            v = abs(l)
            if val[v]:
                return (val[v] > 0) == (l > 0)
            val[v] = 1 if l > 0 else -1
            level[v] = len(trail_lim)
            reason[v] = why
            trail.append(l)
            return True

        def propagate(qhead):
            """Returns (conflict clause or None, new queue head)."""
            while qhead < len(trail):
                false_lit = -trail[qhead]
                qhead += 1
                ws = watches.get(false_lit)
                if not ws:
                    continue
                i = 0
                while i < len(ws):
                    c = ws[i]
                    if c[0] == false_lit:
                        c[0], c[1] = c[1], c[0]
                    other = c[0]
                    ov = val[abs(other)]
                    if (ov > 0 and other > 0) or (ov < 0 and other < 0):
                        i += 1
                        continue
                    for k in range(2, len(c)):
                        lk = c[k]
                        vk = val[abs(lk)]
                        if not ((vk > 0 and lk < 0) or (vk < 0 and lk > 0)):
                            c[1], c[k] = lk, c[1]
                            watches.setdefault(lk, []).append(c)
                            ws[i] = ws[-1]
                            ws.pop()
                            break
                    else:
                        if ov == 0:
                            enqueue(other, c)
                            i += 1
                        else:
                            return c, qhead
            return None, qhead

        def undo(lvl):
            if len(trail_lim) <= lvl:
                return
            stop = trail_lim[lvl]
            while len(trail) > stop:
                l = trail.pop()
                v = abs(l)
                phase[v] = l > 0
                val[v] = 0
                reason[v] = None
                heapq.heappush(heap, (-act[v], v))
            del trail_lim[lvl:]

        def bump(v):
            act[v] += inc[0]
            if act[v] > 1e100:
                for u in range(1, n + 1):
                    act[u] *= 1e-100
                inc[0] *= 1e-100
            if not val[v]:
                heapq.heappush(heap, (-act[v], v))

        def analyze(conflict):
            seen = set()
            learnt = [0]
            counter = 0
            p = None
            c = conflict
            idx = len(trail) - 1
            cur = len(trail_lim)
            while True:
                for q in (c if p is None else c[1:]):
                    v = abs(q)
                    if v not in seen and level[v] > 0:
                        seen.add(v)
                        bump(v)
                        if level[v] == cur:
                            counter += 1
                        else:
                            learnt.append(q)
                while abs(trail[idx]) not in seen:
                    idx -= 1
                p = trail[idx]
                idx -= 1
                seen.discard(abs(p))
                counter -= 1
                if counter == 0:
                    break
                c = reason[abs(p)]
            learnt[0] = -p
            if len(learnt) == 1:
                return learnt, 0
            j = max(range(1, len(learnt)), key=lambda i: level[abs(learnt[i])])
            learnt[1], learnt[j] = learnt[j], learnt[1]
            return learnt, level[abs(learnt[1])]

        for l in self.units:
            if not enqueue(l, None):
                self.empty = True
                return None
        conflict, qhead = propagate(0)
        if conflict is not None:
            self.empty = True
            return None
        conflicts = 0
        restart_at = 100
        while True:
            conflict, qhead = propagate(qhead)
            if conflict is not None:
                if not trail_lim:
                    self.empty = True
                    return None
                conflicts += 1
                learnt, back = analyze(conflict)
                inc[0] *= 1.05
                undo(back)
                qhead = len(trail)
                if len(learnt) == 1:
                    self.units.append(learnt[0])
                    enqueue(learnt[0], None)
                else:
                    self._attach(learnt)
                    enqueue(learnt[0], learnt)
                continue
            if conflicts >= restart_at:
                conflicts = 0
                restart_at = int(restart_at * 1.5)
                undo(0)
                qhead = len(trail)
                continue
            lit = 0
            while len(trail_lim) < len(assumptions):
                a = assumptions[len(trail_lim)]
                va = val[abs(a)]
                if va and (va > 0) == (a > 0):
                    trail_lim.append(len(trail))
                elif va:
                    return None
                else:
                    lit = a
                    break
            if not lit:
                while heap:
                    _, v = heapq.heappop(heap)
                    if not val[v]:
                        lit = v if phase[v] else -v
                        break
                if not lit:
                    return [False] + [x > 0 for x in val[1:]]
            trail_lim.append(len(trail))
            enqueue(lit, None)

    def models(self, project: Sequence[int], **kw) -> Iterator[list[bool]]:
        """All models, distinct on the projection variables (blocking clauses)."""
        while True:
            m = self.solve(**kw)
            if m is None:
                return
            yield m
            block = [-v if m[v] else v for v in project]
            if not block:
                return
            self.add_clause(block)


def satisfiable(clauses: Iterable[Iterable[int]]) -> list[bool] | None:
    s = Solver()
    for c in clauses:
        s.add_clause(c)
    return s.solve()
