"""Acceptance suite: the ten end-to-end criteria of the library.

Every check is exact (tolerance zero) except the E(2) coset map, which
works with floating-point angles and uses an entry-wise tolerance of 1e-12.
Expected values are transcribed independently of the library code.
Each criterion prints one ``CRITERION n: PASS|FAIL`` line; the lines are
repeated in the pytest terminal summary.  ``python tests/test_acceptance.py``
runs the criteria without pytest.
"""
import math
import random
from fractions import Fraction as F

import pytest

from conftest import acceptance_line
from tanaka import catalog
from tanaka.algebra import (GradedLieAlgebra, check_axioms, heisenberg, is_solvable, killing_form,
                            nilpotency_step, random_stratified)
from tanaka.contact import (H_chart, NoIntersection, R_chart, coordinate_symbols, development_action,
                            development_rhs, integrate_development, ul_coset_project)
from tanaka.linalg import Subspace, det, zeros
from tanaka.modification import (classify_3d, functional_modification, is_modification_subalgebra,
                                 modified_brackets, symbolic_brackets, ultra_rigid_criterion)
from tanaka.poly import parse_poly
from tanaka.prolongation import (ProlongedAlgebra, ad_subspace, aut_pg_algebra, derivation_algebra,
                                 largest_ideal_in, tanaka_prolong)

PRODUCED = []   # every algebra built by criteria 1-9, re-checked by criterion 10


def produced(alg):
    if alg is not None:
        PRODUCED.append(alg)
    return alg


# ---------------------------------------------------------------------------
# transcribed reference data

# Brackets of s(a, b, c) as printed, 1-based, in the printed orientation.
S_ABC_TABLE = {
    (2, 1): {3: "1", 2: "-b"},
    (3, 1): {4: "1", 3: "-(a+b)"},
    (3, 2): {5: "1"},
    (4, 1): {6: "1", 5: "-c", 4: "-(2*a+b)"},
    (4, 2): {7: "1"},
    (5, 1): {7: "1", 5: "-(a+2*b)"},
    (1, 6): {7: "2*c", 6: "3*a+b"},
    (1, 7): {8: "c", 7: "2*(a+b)"},
    (1, 8): {8: "a+3*b"},
    (5, 2): {8: "1"},
}

# Development ODE right-hand sides for c = 1 (a = b = 0).
GAMMA_DOT = [
    "x1",
    "t*x1^2 + x2",
    "-1/2*t*x1^2*gamma1 - 1/2*x2*gamma1 + 1/2*x1*gamma2 + x3",
    "1/12*t*x1^2*gamma1^2 + 1/12*x2*gamma1^2 - 1/12*(gamma1*gamma2 - 6*gamma3)*x1 - 1/2*x3*gamma1 + x4",
    "1/12*x2*gamma1*gamma2 - 1/12*x1*gamma2^2 + 1/12*(x1^2*gamma1*gamma2 + 6*x1^2*gamma3 + 12*x1*x4)*t"
    " - 1/2*x3*gamma2 + 1/2*x2*gamma3 + x5",
    "1/12*x3*gamma1^2 - 1/12*(gamma1*gamma3 - 6*gamma4)*x1 - 1/2*x4*gamma1 + x6",
    "1/6*x3*gamma1*gamma2 - 1/12*x2*gamma1*gamma3"
    " - 1/12*(x1^2*gamma1*gamma3 + 6*x1*x4*gamma1 - 6*x1^2*gamma4 - 24*x1*x6)*t"
    " - 1/12*(gamma2*gamma3 - 6*gamma5)*x1 - 1/2*x5*gamma1 - 1/2*x4*gamma2 + 1/2*x2*gamma4 + x7",
    "t^2*x1^2*x6 + 1/12*x3*gamma2^2 - 1/12*x2*gamma2*gamma3"
    " - 1/12*(x1^2*gamma2*gamma3 + 6*x1*x4*gamma2 - 6*x1^2*gamma5 - 12*x1*x7)*t"
    " - 1/2*x5*gamma2 + 1/2*x2*gamma5 + x8",
]

# Its polynomial solution with gamma(0) = 0.
GAMMA = [
    "t*x1",
    "1/2*t^2*x1^2 + t*x2",
    "-1/12*t^3*x1^3 + t*x3",
    "t*x4",
    "-1/240*t^5*x1^5 + 1/12*t^3*x1^2*x3 + 1/2*t^2*x1*x4 + t*x5",
    "1/720*t^5*x1^5 + t*x6",
    "1/720*t^6*x1^6 + 1/360*t^5*x1^4*x2 + t^2*x1*x6 + t*x7",
    "1/5040*t^7*x1^7 + 1/720*t^6*x1^5*x2 + 1/720*(x1^3*x2^2 + 3*x1^4*x3)*t^5"
    " - 1/12*(x1*x2*x4 - x1^2*x5 - 4*x1^2*x6)*t^3 + 1/2*t^2*x1*x7 + t*x8",
]

# Three-dimensional normal forms, 0-based (i < j).
CASE_TABLES = {
    "B": {(0, 1): {2: 1}, (0, 2): {1: -1}, (1, 2): {0: 1}},
    "C": {(0, 1): {2: 1}, (0, 2): {0: -1}, (1, 2): {1: 1}},
    "D": {(0, 1): {2: 1}, (0, 2): {1: 1}, (1, 2): {0: -1}},
}


def s_abc_expected(values):
    """0-based ``{(i, j): {k: value}}`` with ``i < j`` of the transcribed table at ``values``."""
    out = {}
    for (i, j), vec in S_ABC_TABLE.items():
        ev = {k - 1: parse_poly(c, ("a", "b", "c")).evaluate(values) for k, c in vec.items()}
        ev = {k: x for k, x in ev.items() if x != 0}
        if i > j:
            i, j, ev = j, i, {k: -x for k, x in ev.items()}
        if ev:
            out[(i - 1, j - 1)] = ev
    return out


def table_of(alg):
    return {key: {k: c for k, c in vec.items() if c != 0} for key, vec in alg.structure_table().items()}


# ---------------------------------------------------------------------------

def test_criterion_01_derivation_dimensions():
    with acceptance_line(1, "Der(heisenberg) and Der(f24) both have dimension 4"):
        heis = catalog.load("heisenberg3")[0]
        f24 = catalog.load("f24")[0]
        assert derivation_algebra(heis).dim == 4
        assert derivation_algebra(f24).dim == 4
        produced(heis), produced(f24)


def test_criterion_02_prolongation_profiles():
    with acceptance_line(2, "prolongation profiles: heis/diagonal = 8-dim (1,2,2,2,1), f24/full = 12-dim, "
                            "heis/full has nonzero layers up to the cap"):
        heis = heisenberg()
        p = tanaka_prolong(heis, "diagonal")
        assert p.rigid and p.dim == 8
        assert p.layer_vector() == [1, 2, 2, 2, 1]
        assert det(killing_form(p.algebra)) != 0
        produced(p.algebra)

        f24 = catalog.load("f24")[0]
        q = tanaka_prolong(f24, "full")
        assert q.rigid and q.zero_degree == 1 and q.dim == 12
        produced(q.algebra)

        r = tanaka_prolong(heis, "full", max_degree=3)
        assert not r.rigid
        assert all(r.layer_dims[d] > 0 for d in range(-2, 4))


def test_criterion_03_modification_closure():
    with acceptance_line(3, "f24 sigma(a,b,c) closes and reproduces the 10-relation table (symbolic + 50 samples)"):
        m = catalog.load("f24-abc")
        # symbolic: the q-residual vanishes identically and the g-part is the table
        for i, j, _zg, res in m.pair_data():
            assert all(x == 0 for x in res), (i, j)
        sym = symbolic_brackets(m)
        want = {}
        for (i, j), vec in S_ABC_TABLE.items():
            polys = {k - 1: parse_poly(c, ("a", "b", "c")) for k, c in vec.items()}
            if i > j:
                i, j, polys = j, i, {k: -x for k, x in polys.items()}
            want[(i - 1, j - 1)] = polys
        for key, zg in sym.items():
            exp = want.get(key, {})
            for k, x in enumerate(zg):
                assert x == exp.get(k, 0), (key, k, str(x))

        rng = random.Random(3)
        for _ in range(50):
            vals = {v: F(rng.randint(-9, 9), rng.randint(1, 5)) for v in "abc"}
            assert is_modification_subalgebra(m, vals)
            s = produced(modified_brackets(m, vals).algebra)
            assert table_of(s) == s_abc_expected(vals), vals


def test_criterion_04_contact_map_golden():
    with acceptance_line(4, "development ODE for s(1): right-hand sides and all eight gamma_i(t) exact"):
        m = catalog.load("f24-abc")
        g = m.p.g
        decl, x = coordinate_symbols(g.dim)
        A = development_action(m, {"a": 0, "b": 0, "c": 1}, x)
        rhs = development_rhs(g, A, x)
        names = decl + tuple(f"gamma{k}" for k in range(1, 9))
        for k, text in enumerate(GAMMA_DOT):
            assert rhs[k] == parse_poly(text, names), (k + 1, str(rhs[k]))
        gamma = integrate_development(g, A, x)
        for k, text in enumerate(GAMMA):
            assert gamma[k] == parse_poly(text, decl), (k + 1, str(gamma[k]))
        assert gamma[7].sorted_terms()[0][1] == F(1, 5040)


def test_criterion_05_step_separation():
    with acceptance_line(5, "nilpotency_step(s(1)) = 5 and nilpotency_step(f24) = 4"):
        f24 = catalog.load("f24")[0]
        m = catalog.load("f24-abc")
        s1 = produced(modified_brackets(m, {"a": 0, "b": 0, "c": 1}).algebra)
        assert nilpotency_step(f24) == 4
        assert nilpotency_step(s1) == 5, f"nilpotency_step(s(1)) = {nilpotency_step(s1)}"


def _random_polarized_change(rng):
    """Invertible P whose first two columns stay in span(f1, f2)."""
    while True:
        P = zeros(3, 3)
        for r in range(2):
            for c in range(2):
                P[r, c] = F(rng.randint(-4, 4), rng.randint(1, 3))
        for r in range(3):
            P[r, 2] = F(rng.randint(-4, 4), rng.randint(1, 3))
        if det(P) != 0:
            return P


def _classify_with_conjugations(alg, label, alpha, rng, n=100):
    pol = Subspace.coordinate(3, [0, 1])
    got = classify_3d(alg, pol)
    assert (got.label, got.alpha) == (label, alpha), (str(got), label, alpha)
    for _ in range(n):
        P = _random_polarized_change(rng)
        conj = alg.change_basis(P)
        got = classify_3d(conj, pol)
        assert (got.label, got.alpha) == (label, alpha), (str(got), label, alpha)


def test_criterion_06_three_dimensional_classification():
    with acceptance_line(6, "sl3 cases A/B/C and su(2,1) case D close, match their normal forms and "
                            "classify correctly under 100 conjugations each"):
        rng = random.Random(6)
        mA = catalog.load("heis-sl3-A")
        for alpha in range(-2, 3):
            for beta in (0, 1):
                s = produced(modified_brackets(mA, {"alpha": alpha, "beta": beta}).algebra)
                want = {(0, 1): {2: F(1)}}
                col = {k: F(v) for k, v in ((1, alpha), (2, beta)) if v != 0}
                if col:
                    want[(0, 2)] = col
                assert table_of(s) == want, (alpha, beta)
                if beta:
                    label, al = "A4", F(alpha)
                else:
                    label, al = ("A1" if alpha == 0 else "A2" if alpha > 0 else "A3"), None
                _classify_with_conjugations(s, label, al, rng)
        for name, label in (("heis-sl3-B", "B"), ("heis-sl3-C", "C"), ("heis-su21-D", "D")):
            m = catalog.load(name)
            assert is_modification_subalgebra(m)
            s = produced(modified_brackets(m).algebra)
            assert table_of(s) == CASE_TABLES[label], name
            _classify_with_conjugations(s, label, None, rng)


def test_criterion_07_ultra_rigid_equivalence():
    with acceptance_line(7, "200 random g x R: closure <=> sigma kills layers <= -2; closing => solvable; "
                            "nilpotent <=> sigma = 0"):
        rng = random.Random(7)
        counts = {"closing": 0, "failing": 0, "nilpotent": 0}
        for _ in range(200):
            g = produced(random_stratified(rng, max_dim=6, max_step=4))
            mode = rng.choice(["zero", "first-layer", "generic"])
            sigma = [F(0)] * g.dim
            if mode != "zero":
                for i, d in enumerate(g.degrees):
                    if d == -1 or mode == "generic":
                        sigma[i] = F(rng.choice([-3, -1, 0, 1, 2]), rng.choice([1, 2]))
            m = functional_modification(g, sigma)
            produced(m.algebra)
            closes = bool(is_modification_subalgebra(m))
            assert closes == ultra_rigid_criterion(g, sigma), (g.structure_table(), sigma)
            if closes:
                counts["closing"] += 1
                s = produced(modified_brackets(m).algebra)
                assert is_solvable(s)
                nil = nilpotency_step(s) is not None
                assert nil == all(x == 0 for x in sigma), (g.structure_table(), sigma)
                counts["nilpotent"] += nil
            else:
                counts["failing"] += 1
        assert counts["failing"] > 0 and counts["closing"] > counts["nilpotent"] > 0, counts


def test_criterion_08_aut_pg():
    with acceptance_line(8, "aut(p,g) = ad(q) (dim 4) for f24 full; largest ideal in q is 0 for the rigid "
                            "bundled prolongations"):
        f24 = catalog.load("f24")[0]
        p = tanaka_prolong(f24, "full")
        aut = aut_pg_algebra(p)
        assert aut.dim == 4
        assert aut.subspace() == ad_subspace(p.algebra, p.q_indices)
        assert largest_ideal_in(p, p.q_subspace()).dim == 0
        for name in ("f24-prolonged", "sl3-graded"):
            alg, split = catalog.load(name)
            pp = ProlongedAlgebra.from_algebra(produced(alg), split)
            assert largest_ideal_in(pp, pp.q_subspace()).dim == 0, name


def test_criterion_09_e2_coset_map():
    with acceptance_line(9, "E(2): coset projection of R(y) is H(tan y1, y2, y3) within 1e-12; "
                            "NoIntersection at y1 = pi/2"):
        model = catalog.load("e2-matrix-model")
        produced(model.algebra)
        rng = random.Random(9)
        for _ in range(10):
            y1 = rng.uniform(-math.pi / 2, math.pi / 2)
            y2, y3 = rng.uniform(-5, 5), rng.uniform(-5, 5)
            g, q = ul_coset_project(model, R_chart(y1, y2, y3))
            want = H_chart(math.tan(y1), y2, y3)
            for a, b in zip(g.flat, want.flat):
                assert abs(float(a) - float(b)) <= 1e-12, (y1, a, b)
        with pytest.raises(NoIntersection):
            ul_coset_project(model, R_chart(math.pi / 2, rng.uniform(-5, 5), rng.uniform(-5, 5)))


def _fresh_outputs():
    """Algebras produced by the operations above, rebuilt so this criterion also runs on its own."""
    out = [tanaka_prolong(heisenberg(), "diagonal").algebra,
           tanaka_prolong(catalog.load("f24")[0], "full").algebra]
    m = catalog.load("f24-abc")
    out.append(modified_brackets(m, {"a": 0, "b": 0, "c": 1}).algebra)
    for name in ("heis-sl3-B", "heis-sl3-C", "heis-su21-D"):
        out.append(modified_brackets(catalog.load(name)).algebra)
    rng = random.Random(10)
    out.extend(random_stratified(rng) for _ in range(20))
    return out


def test_criterion_10_axiom_suite():
    with acceptance_line(10, "every produced algebra passes brute-force antisymmetry/Jacobi/grading checks"):
        algebras = PRODUCED + _fresh_outputs()
        assert len(algebras) > 20
        for alg in algebras:
            assert isinstance(alg, GradedLieAlgebra)
            assert check_axioms(alg) == [], alg


if __name__ == "__main__":
    import sys
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except Exception:
                failures += 1
    sys.exit(1 if failures else 0)
