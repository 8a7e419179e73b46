
import pytest
from hypothesis import given, strategies as st

from tanaka.algebra import GradedLieAlgebra, free_nilpotent, grading_derivation, heisenberg, is_derivation
from tanaka.catalog import build_algebra, build_f24, build_ultra_rigid
from tanaka.linalg import Subspace
from tanaka.prolongation import (ProlongationError, ProlongedAlgebra, aut_pg_algebra, ad_subspace,
                                 derivation_algebra, diagonal_derivations, dilation, is_automorphism,
                                 largest_ideal_in, semidirect, tanaka_prolong)


def test_heisenberg_derivations():
    h = heisenberg()
    der = derivation_algebra(h)
    assert der.dim == 4 and der.is_closed()
    for m in der.basis:
        assert is_derivation(h, m)
    assert diagonal_derivations(h).dim == 2


def test_grading_derivation_is_in_der():
    for g in (heisenberg(), build_f24(), build_ultra_rigid()):
        assert derivation_algebra(g).contains(grading_derivation(g))


def test_ultra_rigid_has_only_the_grading_derivation():
    g = build_ultra_rigid()
    der = derivation_algebra(g)
    assert der.dim == 1
    p = tanaka_prolong(g)
    assert p.rigid and p.zero_degree == 1 and p.dim == g.dim + 1
    assert p.layer_vector() == [2, 3, 3, 1]


def test_heisenberg_diagonal_prolongation_is_sl3():
    p = tanaka_prolong(heisenberg(), g0="diagonal")
    assert p.rigid and p.zero_degree == 3
    assert p.layer_vector() == [1, 2, 2, 2, 1] and p.dim == 8
    assert p.algebra is not None and p.algebra.dim == 8


def test_heisenberg_full_prolongation_is_infinite():
    p = tanaka_prolong(heisenberg(), g0="full", max_degree=3)
    assert not p.rigid and p.algebra is None
    assert p.layer_vector() == [1, 2, 4, 6, 9, 12]
    with pytest.raises(ProlongationError):
        p.splitting


def test_f24_prolongation():
    p = tanaka_prolong(build_f24())
    assert p.rigid and p.zero_degree == 1
    assert p.layer_vector() == [3, 2, 1, 2, 4] and p.dim == 12
    assert len(p.splitting) == 4
    assert largest_ideal_in(p, p.q_subspace()).dim == 0


def test_f24_aut_pg_is_ad_q():
    p = tanaka_prolong(build_f24())
    aut = aut_pg_algebra(p)
    assert aut.dim == 4
    assert aut.subspace() == ad_subspace(p.algebra, p.q_indices)


def test_prolongation_rejects_non_stratified():
    g = GradedLieAlgebra(["a", "b", "c"], {(0, 1): {2: 1}}, [-1, -2, -3])
    with pytest.raises(ProlongationError):
        tanaka_prolong(g)
    with pytest.raises(ProlongationError):
        tanaka_prolong(heisenberg(), g0="bogus")
    with pytest.raises(ProlongationError):
        tanaka_prolong(heisenberg(), max_degree=-1)


@given(st.fractions(min_value=-5, max_value=5).filter(lambda x: x != 0))
def test_dilations_are_automorphisms(lam):
    p = tanaka_prolong(heisenberg(), g0="diagonal").algebra
    assert is_automorphism(p, dilation(p, lam))


def test_dilation_of_zero_rejected():
    with pytest.raises(ProlongationError):
        dilation(heisenberg(), 0)


def test_semidirect():
    g = heisenberg()
    D = grading_derivation(g)
    p = semidirect(g, [D], labels=["d"])
    alg = p.algebra
    assert alg.dim == 4 and list(alg.degrees) == [-1, -1, -2, 0]
    # [d, e1] = D e1 = e1 and [d, e3] = 2 e3
    assert list(alg.bracket(alg.basis_vector(3), alg.basis_vector(0))) == [1, 0, 0, 0]
    assert list(alg.bracket(alg.basis_vector(3), alg.basis_vector(2))) == [0, 0, 2, 0]
    assert p.splitting == ["d"]


def test_semidirect_with_full_der_has_no_ideal_in_q():
    g = heisenberg()
    p = semidirect(g, derivation_algebra(g))
    assert largest_ideal_in(p, p.q_subspace()).dim == 0


def test_largest_ideal_finds_central_degree_zero_element():
    # heisenberg plus a central element of degree zero
    p = GradedLieAlgebra(["e1", "e2", "e3", "c"], {(0, 1): {2: 1}}, [-1, -1, -2, 0])
    wrapped = ProlongedAlgebra.from_algebra(p, ["c"])
    ideal = largest_ideal_in(wrapped, wrapped.q_subspace())
    assert ideal == Subspace.coordinate(4, [3])


def test_from_algebra_errors():
    p = GradedLieAlgebra(["c", "e1", "e2", "e3"], {(1, 2): {3: 1}}, [0, -1, -1, -2])
    with pytest.raises(ProlongationError):
        ProlongedAlgebra.from_algebra(p)
    q = GradedLieAlgebra(["e1", "e2", "e3", "c"], {(0, 1): {2: 1}}, [-1, -1, -2, 0])
    with pytest.raises(ProlongationError):
        ProlongedAlgebra.from_algebra(q, ["e1"])


def test_catalog_prolonged_matches_computation():
    bundled, split = build_algebra("f24-prolonged")
    computed = tanaka_prolong(build_f24()).algebra
    assert bundled.dim == computed.dim
    assert sorted(bundled.degrees) == sorted(computed.degrees)


def test_free_rank2_step3_prolongs_to_g2():
    # the classical (2,3,5) symbol: its prolongation is the 14-dimensional exceptional algebra
    p = tanaka_prolong(free_nilpotent(2, 3))
    assert p.rigid and p.zero_degree == 4
    assert p.layer_vector() == [2, 1, 2, 4, 2, 1, 2] and p.dim == 14
    from tanaka.algebra import killing_form
    from tanaka.linalg import det
    assert det(killing_form(p.algebra)) != 0
