"""Program transformations end to end.

1. Shifting a head-cycle-free disjunctive program gives an equivalent normal one.
2. The clause-encoding program is normal but carries a fixed set of fresh symbols.
3. The saturation program for parity accepts a binary relation iff it has an even size.
4. Pairing codes: the clause encoding in action on concrete integers.
"""
from lpx import Structure, enumerate_stable_expansions, parse_program, render_program, save_structure
from lpx.infinite import CodeRegistry, as_int
from lpx.semantics import has_stable_expansion
from lpx.structures import GroundAtom
from lpx.transforms import dlp_to_nlp_infinite, parity_program, shift


def expansions(p, size):
    base = Structure(range(1, size + 1))
    return sorted(save_structure(s) for s in enumerate_stable_expansions(base, p, sorted(p.vocabulary())))


def show_shift():
    p = parse_program("a(X) ; b(X) :- n(X). c(X) :- a(X).")
    q = shift(p).program
    print("shift:\n" + render_program(q))
    print("same stable expansions over 1..2:", expansions(p, 2) == expansions(q, 2))


def show_encoding():
    rep = dlp_to_nlp_infinite(parse_program("p ; q. r :- p."))
    print("\nencoding program:", len(rep.program.rules), "rules;", rep.counts)
    print("fresh predicates:", ", ".join(f"{n}/{a}" for n, a in sorted(rep.symbols("pred").items())))


def show_parity():
    rep = parity_program(1)
    print("\nparity program:", len(rep.program.rules), "rules")
    dom = (0, 1)
    for rel in [set(), {(0, 1)}, {(0, 0), (1, 1)}, {(0, 0), (0, 1), (1, 0)}]:
        base = Structure(dom, {"p": rel}, {}, pred_arity={"p": 2})
        print(f"  |P| = {len(rel)}: stable expansion exists = {has_stable_expansion(base, rep.program, rep.aux())}")


def show_codes():
    reg = CodeRegistry(flags={"P1": 1, "P2": 2, "P3": 3}, eps=4)
    code = reg.code_atom(GroundAtom("P2", (1, 3, 5)))
    print("\nP2(1,3,5) codes to 2^155 + 3^5:", as_int(code) == 2 ** 155 + 3 ** 5)
    clause = reg.code_clause([GroundAtom("P1", (2, 4)), GroundAtom("P3", (2,))])
    text = str(clause)
    print(f"clause code: {text[:40]}...{text[-20:]} ({len(text)} characters)")
    print("decodes back to:", sorted(map(str, reg.decode_clause(clause))))


if __name__ == "__main__":
    show_shift()
    show_encoding()
    show_parity()
    show_codes()
