"""Command-line front end: ``lpx <subcommand> ...``.

Exit status 0 on success, 1 when a check fails (check-equiv mismatch,
claim1 FAIL), 2 on usage, parse or input errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .formula import parse_formula, render, sm_formula
from .grounding import RangeRestrictionError, gl_reduct, render_ground
from .infinite import CodeError, claim1_check
from .semantics import enumerate_stable_expansions, gamma_omega
from .structures import (
    EnumerationTooLarge, EvaluationError, LazyStructure, Structure, StructureError, load_structure, save_structure,
    structure_to_json,
)
from .syntax import ArityError, ParseError, Program, classify, load_program, render_program
from .transforms import (
    TransformError, combine_fin_inf, dlp_to_nlp_infinite, nlp_to_universal_theory, parity_program, shift,
    so2dlp, universal_theory_to_constraints,
)
from .transforms.universal import UniversalTheory

SCHEMA = 1
KINDS = ("shift", "dlp2nlp", "nlp2theory", "theory2lp", "so2dlp", "parity", "combine")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    domain_size: int | None = None
    max_domain: int = 2
    cap: int | None = None
    stages: int = 4
    output: str | None = None
    manifest: str | None = None
    json: bool = False
    verbose: bool = False
    options: dict = field(default_factory=dict)

    def validate(self) -> None:
        for name in ("domain_size", "max_domain", "cap", "stages"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        ins = {os.path.abspath(p) for p in self.inputs if p}
        for out in (self.output, self.manifest):
            if out and os.path.abspath(out) in ins:
                raise UsageError(f"output path {out} is also an input")
        if self.output and self.manifest and os.path.abspath(self.output) == os.path.abspath(self.manifest):
            raise UsageError("--out and --manifest must differ")


class _Out:
    """Collects text lines or a JSON report and writes them once."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.lines: list[str] = []
        self.report: dict = {"schema": SCHEMA, "command": cfg.command}

    def line(self, s: str = "") -> None:
        self.lines.append(s)

    def flush(self) -> None:
        if self.cfg.json:
            sys.stdout.write(json.dumps(self.report, indent=2) + "\n")
        elif self.lines:
            sys.stdout.write("\n".join(self.lines) + "\n")


def _names(text: str | None) -> list[str]:
    return [n.strip() for n in (text or "").split(",") if n.strip()]


def _signature(text: str | None) -> dict[str, int]:
    out = {}
    for item in _names(text):
        name, _, ar = item.partition(":")
        try:
            out[name] = int(ar) if ar else 0
        except ValueError:
            raise UsageError(f"bad arity in {item!r}; expected name:arity") from None
    return out


def _program(path: str) -> Program:
    return load_program(path)


def _base(cfg: RunConfig) -> Structure:
    path = cfg.options.get("structure")
    if path:
        return load_structure(Path(path).read_text(encoding="utf-8"))
    if cfg.domain_size is None:
        raise UsageError("give --structure or --domain-size")
    return Structure(range(1, cfg.domain_size + 1))


def _closed_base(cfg: RunConfig, p: Program) -> Structure:
    """The input structure with every uninterpreted predicate of ``p`` read as empty."""
    s = _base(cfg)
    missing = {n: a for n, a in p.predicates.items() if not s.interprets(n)}
    return s.expand({n: set() for n in missing}, pred_arity=missing) if missing else s


def _write_program(cfg: RunConfig, out: _Out, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text + "\n", encoding="utf-8")
    elif not cfg.json:
        out.line(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_parse(cfg: RunConfig, out: _Out) -> int:
    p = _program(cfg.inputs[0])
    c = classify(p)
    kind = "normal" if c.normal else "disjunctive"
    out.report.update({
        "rules": len(p.rules), "normal": c.normal, "plain": c.plain, "propositional": c.propositional,
        "intensional": sorted(c.intensional), "extensional": sorted(p.extensional),
        "predicates": dict(sorted(p.predicates.items())), "functions": dict(sorted(p.functions.items())),
        "program": render_program(p),
    })
    out.line(render_program(p))
    out.line(f"% {len(p.rules)} rules, {kind}{', plain' if c.plain else ''}"
             f"{', propositional' if c.propositional else ''}")
    out.line(f"% intensional: {', '.join(sorted(c.intensional)) or '-'}")
    out.line(f"% extensional: {', '.join(sorted(p.extensional)) or '-'}")
    return 0


def cmd_ground(cfg: RunConfig, out: _Out) -> int:
    p = _program(cfg.inputs[0])
    s = _closed_base(cfg, p)
    g = gl_reduct(p, s)
    text = render_ground(g)
    out.report.update({"rules": len(g), "ground": text.splitlines()})
    _write_program(cfg, out, text)
    return 0


def _aux_for(p: Program, base: Structure, names: list[str]) -> list[str]:
    if names:
        return names
    return sorted(n for n in p.vocabulary() if not base.interprets(n))


def cmd_solve(cfg: RunConfig, out: _Out) -> int:
    p = _program(cfg.inputs[0])
    base = _base(cfg)
    aux = _aux_for(p, base, _names(cfg.options.get("aux")))
    found = sorted(enumerate_stable_expansions(base, p, aux, cfg.options.get("method", "ground"), cfg.cap),
                   key=save_structure)
    out.report.update({"count": len(found), "expansions": [structure_to_json(s) for s in found]})
    for s in found:
        out.line(json.dumps(structure_to_json(s)))
    out.line(f"% {len(found)} stable expansion{'s' if len(found) != 1 else ''}")
    return 0


def cmd_progress(cfg: RunConfig, out: _Out) -> int:
    p = _program(cfg.inputs[0])
    s = _closed_base(cfg, p)
    fp = gamma_omega(s, p, trace_depth=cfg.options.get("depth", 64))
    stages = []
    for n, stage in enumerate(fp.stages):
        clauses = sorted(" | ".join(map(str, sorted(c, key=lambda a: a.sort_key()))) or "#false"
                         for c in stage)
        stages.append(clauses)
        out.line(f"% stage {n}: {len(clauses)} clauses")
        out.lines.extend(clauses)
    out.line(f"% fixed point reached at stage {fp.converged_at}")
    out.report.update({"stages": stages, "converged_at": fp.converged_at})
    return 0


def _transform(cfg: RunConfig):
    kind = cfg.options["kind"]
    opts = cfg.options
    if kind == "parity":
        return parity_program(opts.get("k") or 1)
    if kind == "so2dlp":
        if not opts.get("matrix"):
            raise UsageError("so2dlp needs --matrix")
        xs = _names(opts.get("xs")) or None
        return so2dlp(parse_formula(opts["matrix"]), _signature(opts.get("tau")), _signature(opts.get("sigma")),
                      opts.get("k") or 1, xs=xs)
    if kind == "theory2lp":
        if not opts.get("matrix"):
            raise UsageError("theory2lp needs --matrix")
        return universal_theory_to_constraints(UniversalTheory((), parse_formula(opts["matrix"])))
    if kind == "combine":
        if not (opts.get("fin") and opts.get("inf")):
            raise UsageError("combine needs --fin and --inf")
        return combine_fin_inf(_program(opts["fin"]), _program(opts["inf"]))
    if not cfg.inputs or not cfg.inputs[0]:
        raise UsageError(f"{kind} needs --program")
    p = _program(cfg.inputs[0])
    if kind == "shift":
        return shift(p)
    if kind == "dlp2nlp":
        return dlp_to_nlp_infinite(p)
    if kind == "nlp2theory":
        return nlp_to_universal_theory(p, opts.get("k") or max(p.predicates.values(), default=0))
    raise UsageError(f"unknown transform kind {kind}")


def cmd_transform(cfg: RunConfig, out: _Out) -> int:
    report = _transform(cfg)
    if isinstance(report.output, Program):
        text = render_program(report.output)
    else:
        text = render(report.output.sentence())
    _write_program(cfg, out, text)
    if cfg.manifest:
        Path(cfg.manifest).write_text(report.manifest_text() + "\n", encoding="utf-8")
    out.report.update({"kind": cfg.options["kind"], "output": text, **report.manifest_json(), "schema": SCHEMA})
    return 0


def _all_stable(p: Program, size: int, cap):
    """Stable models of ``p`` over every structure with domain 1..size."""
    return enumerate_stable_expansions(Structure(range(1, size + 1)), p, sorted(p.vocabulary()), cap=cap)


def cmd_check_equiv(cfg: RunConfig, out: _Out) -> int:
    a, b = (_program(x) for x in cfg.inputs[:2])
    aux_a, aux_b = _names(cfg.options.get("aux_a")), _names(cfg.options.get("aux_b"))
    shared = (a.vocabulary() - set(aux_a)) & (b.vocabulary() - set(aux_b))
    rows = []
    status = 0
    for size in range(1, cfg.max_domain + 1):
        sets = []
        for p in (a, b):
            found = _all_stable(p, size, cfg.cap)
            sets.append({json.dumps(structure_to_json(s.restrict(shared)), sort_keys=True) for s in found})
        only_a, only_b = sorted(sets[0] - sets[1]), sorted(sets[1] - sets[0])
        same = not only_a and not only_b
        rows.append({"size": size, "a": len(sets[0]), "b": len(sets[1]), "equal": same,
                     "only_a": [json.loads(x) for x in only_a[:3]], "only_b": [json.loads(x) for x in only_b[:3]]})
        out.line(f"size {size}: {len(sets[0])} vs {len(sets[1])} restricted expansions, "
                 f"{'equal' if same else 'DIFFERENT'}")
        for x in only_a[:3]:
            out.line(f"  only in A: {x}")
        for x in only_b[:3]:
            out.line(f"  only in B: {x}")
        if not same:
            status = 1
    out.line("EQUIVALENT" if status == 0 else "NOT EQUIVALENT")
    out.report.update({"shared": sorted(shared), "sizes": rows, "equivalent": status == 0})
    return status


def _provenance(reg, value) -> str:
    """What a pairing value codes: an atom, a clause, or an intermediate prefix."""
    try:
        return f"atom {reg.decode_atom(value)}"
    except CodeError:
        pass
    try:
        atoms = sorted(reg.decode_clause(value), key=lambda a: a.sort_key())
        return "clause " + (" | ".join(map(str, atoms)) or "#false")
    except CodeError:
        return ""


def cmd_claim1(cfg: RunConfig, out: _Out) -> int:
    p = _program(cfg.inputs[0])
    preds = {}
    facts = cfg.options.get("facts")
    if facts:
        data = json.loads(Path(facts).read_text(encoding="utf-8"))
        preds = {n: [tuple(t) for t in ts] for n, ts in data.get("predicates", {}).items()}
    # predicates missing from the facts file are empty
    base = LazyStructure(preds, pred_arity=dict(p.predicates))
    rep = claim1_check(p, base, cfg.stages)
    out.lines.extend(rep.lines())
    out.report.update({
        "passed": rep.passed,
        "stages": [{"n": n, "gamma": g, "delta": d, "missing": [str(c) for c in mi], "extra": [str(c) for c in ex]}
                   for n, g, d, mi, ex in rep.stages],
    })
    if cfg.options.get("dump_codes"):
        dump = rep.registry.dump()
        rows = [(v, l, r, _provenance(rep.registry, v)) for v, (l, r) in dump]
        for value, left, right, what in rows:
            out.line(f"{value} = e({left}, {right})" + (f"  % {what}" if what else ""))
        out.report["codes"] = [{"value": str(v), "left": str(l), "right": str(r), "denotes": w}
                               for v, l, r, w in rows]
    return 0 if rep.passed else 1


def cmd_sm_formula(cfg: RunConfig, out: _Out) -> int:
    p = _program(cfg.inputs[0])
    text = render(sm_formula(p))
    out.line(text)
    out.report["formula"] = text
    return 0


COMMANDS = {
    "parse": cmd_parse, "ground": cmd_ground, "solve": cmd_solve, "progress": cmd_progress,
    "transform": cmd_transform, "check-equiv": cmd_check_equiv, "claim1": cmd_claim1,
    "sm-formula": cmd_sm_formula,
}


def run(cfg: RunConfig) -> int:
    """Execute one subcommand; returns the exit status."""
    out = _Out(cfg)
    try:
        cfg.validate()
        if cfg.cap is not None:
            os.environ["LPX_ENUM_CAP"] = str(cfg.cap)
        status = COMMANDS[cfg.command](cfg, out)
    except ParseError as exc:
        print(exc if exc.source else f"lpx {cfg.command}: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ArityError, StructureError, TransformError, EvaluationError, RangeRestrictionError,
            EnumerationTooLarge, CodeError, OSError, json.JSONDecodeError) as exc:
        if cfg.verbose:
            raise
        print(f"lpx {cfg.command}: {exc}", file=sys.stderr)
        return 2
    out.flush()
    if status:
        print(f"lpx {cfg.command}: check failed", file=sys.stderr)
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lpx", description="First-order logic programs under the stable model semantics.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="show tracebacks on errors")
    common.add_argument("--cap", type=int, help="enumeration cap (overrides LPX_ENUM_CAP)")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_program(name, help_, positional=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if positional:
            sp.add_argument("file", nargs="?", help="program file (.lp)")
        sp.add_argument("--program", help="program file (.lp)")
        return sp

    def with_structure(sp):
        sp.add_argument("--structure", help="structure file (.struct.json)")
        sp.add_argument("--domain-size", type=int, help="use the empty structure over 1..N")

    with_program("parse", "validate, pretty-print and classify a program")
    sp = with_program("ground", "print the ground reduct over a structure")
    with_structure(sp)
    sp.add_argument("--out", help="write the ground program here")
    sp = with_program("solve", "enumerate stable expansions")
    with_structure(sp)
    sp.add_argument("--aux", help="comma-separated auxiliary symbols (default: all uninterpreted)")
    sp.add_argument("--method", choices=("ground", "brute"), default="ground")
    sp = with_program("progress", "trace the clause progression to its fixed point")
    with_structure(sp)
    sp.add_argument("--depth", type=int, default=64, help="stages to keep in the trace")
    sp = with_program("transform", "apply a program transformation")
    sp.add_argument("--kind", choices=KINDS, required=True)
    sp.add_argument("--out", help="write the transformed program here")
    sp.add_argument("--manifest", help="write the fresh-symbol manifest (JSON) here")
    sp.add_argument("--k", type=int, help="tuple width (so2dlp, parity) or arity bound (nlp2theory)")
    sp.add_argument("--matrix", help="quantifier-free formula (so2dlp, theory2lp)")
    sp.add_argument("--tau", help="existential predicate variables, name:arity,...")
    sp.add_argument("--sigma", help="universal predicate variables, name:arity,...")
    sp.add_argument("--xs", help="universal first-order variables, comma-separated")
    sp.add_argument("--fin", help="finite-branch program (combine)")
    sp.add_argument("--inf", help="infinite-branch program (combine)")
    sp = sub.add_parser("check-equiv", parents=[common], help="compare restricted stable expansions")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--max-domain", type=int, default=2)
    sp.add_argument("--aux-a", help="auxiliary symbols of the first program")
    sp.add_argument("--aux-b", help="auxiliary symbols of the second program")
    sp = with_program("claim1", "compare the progression with the coded simulation")
    sp.add_argument("--stages", type=int, default=4)
    sp.add_argument("--facts", help="JSON with a 'predicates' object over positive integers")
    sp.add_argument("--dump-codes", action="store_true", help="print every pairing value used")
    with_program("sm-formula", "print the second-order formula SM(program)")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    skip = {"command", "file", "program", "a", "b", "domain_size", "max_domain", "cap", "stages", "out",
            "manifest", "json", "verbose"}
    options = {k: v for k, v in vars(ns).items() if k not in skip and v is not None}
    if ns.command == "check-equiv":
        inputs = [ns.a, ns.b]
    else:
        prog = getattr(ns, "program", None) or getattr(ns, "file", None)
        if ns.command not in ("transform",) and not prog:
            raise UsageError("no program given")
        inputs = [prog] if prog else []
    return RunConfig(
        command=ns.command, inputs=inputs, domain_size=getattr(ns, "domain_size", None),
        max_domain=getattr(ns, "max_domain", 2) or 2, cap=ns.cap, stages=getattr(ns, "stages", 4) or 4,
        output=getattr(ns, "out", None), manifest=getattr(ns, "manifest", None), json=ns.json,
        verbose=ns.verbose, options=options,
    )


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        print(f"lpx {ns.command}: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
