"""The Heisenberg group inside SL(3) and SU(2,1): modifications and their three-dimensional classes.

Run with ``python demos/heisenberg_cases.py``.
"""
from tanaka import catalog
from tanaka.algebra import heisenberg
from tanaka.modification import classify_3d, modified_brackets
from tanaka.prolongation import tanaka_prolong


def main():
    h = heisenberg()
    for g0 in ("diagonal", "full"):
        p = tanaka_prolong(h, g0=g0, max_degree=4)
        state = f"rigid at degree {p.zero_degree}" if p.rigid else "no zero layer up to degree 4"
        print(f"heisenberg, g0={g0}: layers {p.layer_vector()} ({state})")

    samples = [("heis-sl3-A", {"alpha": 0, "beta": 0}), ("heis-sl3-A", {"alpha": 2, "beta": 0}),
               ("heis-sl3-A", {"alpha": -1, "beta": 0}), ("heis-sl3-A", {"alpha": 3, "beta": 2}),
               ("heis-sl3-B", {}), ("heis-sl3-C", {}), ("heis-su21-D", {})]
    for name, bind in samples:
        s = modified_brackets(catalog.load(name), bind)
        cls = classify_3d(s.algebra, s.polarization)
        print(f"\n{name} {bind or ''}: class {cls}")
        for line in s.algebra.bracket_lines():
            print("  " + line)


if __name__ == "__main__":
    main()
