"""Shared plumbing for program transforms: reports, manifests and fresh names."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from ..syntax import Program


class TransformError(ValueError):
    pass


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: str  # "pred" or "func"
    arity: int
    role: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "kind": self.kind, "arity": self.arity, "role": self.role}


@dataclass
class TransformReport:
    output: object
    manifest: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def program(self) -> Program:
        if not isinstance(self.output, Program):
            raise TypeError("transform output is not a program")
        return self.output

    def symbols(self, kind: str | None = None) -> dict[str, int]:
        return {s.name: s.arity for s in self.manifest if kind is None or s.kind == kind}

    def aux(self) -> list[str]:
        return [s.name for s in self.manifest]

    def manifest_json(self) -> dict:
        return {
            "schema": 1,
            "symbols": [s.to_json() for s in self.manifest],
            "counts": dict(self.counts),
            "notes": list(self.notes),
        }

    def manifest_text(self) -> str:
        return json.dumps(self.manifest_json(), indent=2, sort_keys=False)


class FreshNames:
    """Allocates ``__``-prefixed names that avoid a set of taken names."""

    def __init__(self, taken: Iterable[str] = ()):
        self.taken = set(taken)

    def __call__(self, base: str) -> str:
        name = base if base.startswith("__") else "__" + base
        candidate, n = name, 1
        while candidate in self.taken:
            n += 1
            candidate = f"{name}_{n}"
        self.taken.add(candidate)
        return candidate

    def var(self, base: str) -> str:
        """A fresh variable name (variables must start upper-case)."""
        candidate, n = f"{base}__", 0
        while candidate in self.taken:
            n += 1
            candidate = f"{base}__{n}"
        self.taken.add(candidate)
        return candidate


def program_names(p: Program) -> set[str]:
    names = set(p.predicates) | set(p.functions)
    for r in p.rules:
        names.update(r.variables())
    return names
