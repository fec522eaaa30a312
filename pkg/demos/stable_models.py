"""Stable models of a small disjunctive program, checked two ways.

The reduct checker minimizes a ground program; the progression checker
derives positive clauses until a fixed point and compares the structure
against it.  Both must agree on every candidate.
"""
from lpx import Structure, enumerate_stable_expansions, gamma_omega, is_stable_progression, is_stable_reduct
from lpx import parse_program, render_program

PROGRAM = """
colored(X, 1) ; colored(X, 2) :- node(X).
#false :- edge(X, Y), colored(X, C), colored(Y, C).
"""


def main():
    p = parse_program(PROGRAM)
    print(render_program(p))
    base = Structure([1, 2, 3], {"node": {(1,), (2,)}, "edge": {(1, 2)}})
    found = list(enumerate_stable_expansions(base, p, ["colored"]))
    print(f"\n{len(found)} colorings of the two-node graph:")
    for s in found:
        print("  ", sorted(s.tuples("colored")))
        assert is_stable_reduct(s, p) and is_stable_progression(s, p)

    print("\nclause progression over the first coloring:")
    fp = gamma_omega(found[0], p)
    for n, stage in enumerate(fp.stages):
        print(f"  stage {n}:", sorted(" | ".join(map(str, sorted(c, key=lambda a: a.sort_key()))) for c in stage))


if __name__ == "__main__":
    main()
