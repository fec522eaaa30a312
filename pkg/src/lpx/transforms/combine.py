"""Flag-guarded union of a finite-branch and an infinite-branch program."""
from __future__ import annotations

from ..syntax import Literal, Pred, Program, Rule, Var
from .common import FreshNames, Symbol, TransformError, TransformReport, program_names
from .saturation import Skeleton

INF = "__inf"
FIN = "__fin"


def guard(p: Program, flag: str) -> Program:
    """Add the proposition ``flag`` as a body conjunct of every rule."""
    lit = Literal(Pred(flag, ()))
    return Program(tuple(Rule(r.head, (lit, *r.body)) for r in p.rules))


def infinity_test(arc: str, arc_bar: str, ok: str, inf_bar: str, inf: str = INF) -> list[Rule]:
    """Guess a transitive relation where every element has a successor; ``inf`` holds if it is irreflexive."""
    X, Y, Z = Var("X"), Var("Y"), Var("Z")
    a = lambda name, *args: Pred(name, tuple(args))
    return [
        Rule((a(arc_bar, X, Y),), (Literal(a(arc, X, Y), True),)),
        Rule((a(arc, X, Y),), (Literal(a(arc_bar, X, Y), True),)),
        Rule((a(ok, X),), (Literal(a(arc, X, Y)),)),
        Rule((a(ok, X),), (Literal(a(ok, X), True),)),
        Rule((a(inf_bar),), (Literal(a(arc, X, X)),)),
        Rule((a(inf),), (Literal(a(inf_bar), True),)),
        Rule((a(arc, X, Z),), (Literal(a(arc, X, Y)), Literal(a(arc, Y, Z)))),
    ]


def finiteness_test(sk: Skeleton, reach: str, fin: str = FIN) -> list[Rule]:
    """Order skeleton plus: ``fin`` holds when the greatest element is reached from the least one."""
    X, Y, Z = Var("X"), Var("Y"), Var("Z")
    a = lambda name, *args: Pred(name, tuple(args))
    return sk.rules() + [
        Rule((a(reach, X, Y),), (Literal(a(sk.succ, X, Y)),)),
        Rule((a(reach, X, Z),), (Literal(a(reach, X, Y)), Literal(a(sk.succ, Y, Z)))),
        Rule((a(fin),), (Literal(a(sk.first, X)), Literal(a(sk.last, X)))),
        Rule((a(fin),), (Literal(a(sk.first, X)), Literal(a(sk.last, Y)), Literal(a(reach, X, Y)))),
    ]


def combine_fin_inf(p_fin: Program, p_inf: Program) -> TransformReport:
    """Π_inf ∪ Π_fin ∪ p_inf guarded by the infinity flag ∪ p_fin guarded by the finiteness flag."""
    taken = program_names(p_fin) | program_names(p_inf)
    for flag in (INF, FIN):
        if flag in taken:
            raise TransformError(f"flag {flag} already occurs in the input programs")
    fresh = FreshNames(taken | {INF, FIN})
    arc, arc_bar, ok, inf_bar = fresh("arc"), fresh("arc_bar"), fresh("ok_a"), fresh("inf_bar")
    sk = Skeleton.allocate(fresh)
    reach = fresh("reach")
    pi_inf = infinity_test(arc, arc_bar, ok, inf_bar)
    pi_fin = finiteness_test(sk, reach)
    g_inf = guard(p_inf, INF).rules
    g_fin = guard(p_fin, FIN).rules
    rules = pi_inf + pi_fin + list(g_inf) + list(g_fin)
    manifest = [
        Symbol(INF, "pred", 0, "set when the structure admits an irreflexive serial transitive relation"),
        Symbol(FIN, "pred", 0, "set when a successor chain joins the least and greatest elements"),
        Symbol(arc, "pred", 2, "guessed transitive relation"),
        Symbol(arc_bar, "pred", 2, "complement of the guessed relation"),
        Symbol(ok, "pred", 1, "elements with an outgoing arc"),
        Symbol(inf_bar, "pred", 0, "the guessed relation has a loop"),
        *sk.manifest(),
        Symbol(reach, "pred", 2, "transitive closure of the successor relation"),
    ]
    counts = {"infinity_test": len(pi_inf), "finiteness_test": len(pi_fin),
              "guarded_inf": len(g_inf), "guarded_fin": len(g_fin)}
    return TransformReport(Program(tuple(rules)), manifest, counts)
