"""Walk through the rank-2, step-4 free-quotient algebra F24 and its modification s(1).

Run with ``python demos/f24_modification.py``.
"""
from tanaka import catalog
from tanaka.algebra import lower_central_series, nilpotency_step
from tanaka.contact import coordinate_symbols, development_action, psi_to_G
from tanaka.modification import closure_equations, modified_brackets
from tanaka.prolongation import aut_pg_algebra, derivation_algebra, largest_ideal_in, tanaka_prolong


def main():
    f24, _ = catalog.load("f24")
    print(f"F24: dimension {f24.dim}, nilpotency step {nilpotency_step(f24)}")
    print(f"strata-preserving derivations: dim {derivation_algebra(f24).dim}")

    p = tanaka_prolong(f24)
    print(f"full prolongation: layers {p.layer_vector()}, dim {p.dim}, rigid at degree {p.zero_degree}")
    print(f"aut(p, g) dim {aut_pg_algebra(p).dim}; largest ideal inside q dim "
          f"{largest_ideal_in(p, p.q_subspace()).dim}")

    m = catalog.load("f24-abc")
    print(f"\nsigma family {m.name}: closure equations {[str(e) for e in closure_equations(m)] or 'none'}")
    s = modified_brackets(m, {"a": 0, "b": 0, "c": 1}).algebra
    print("brackets of s(1):")
    for line in s.bracket_lines():
        print("  " + line)
    print(f"lower central series dims {[c.dim for c in lower_central_series(s)]}; "
          f"nilpotency step {nilpotency_step(s)}")

    decl, x = coordinate_symbols(f24.dim)
    A = development_action(m, {"a": 0, "b": 0, "c": 1}, x)
    psi = psi_to_G(f24, A, x)
    print("\ncontact map Psi = gamma(1) (unit Jacobian checked):")
    for line in psi.lines():
        print("  " + line)


if __name__ == "__main__":
    main()
