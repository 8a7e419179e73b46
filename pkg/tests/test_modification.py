import json
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tanaka.algebra import GradedLieAlgebra, heisenberg, nilpotency_step
from tanaka.catalog import build_f24_prolonged, bundled_text, load
from tanaka.io import DescriptionError
from tanaka.linalg import Subspace, as_matrix
from tanaka.modification import (Modification, ModificationError, classify_3d, closure_equations,
                                 functional_modification, is_modification_subalgebra, modified_brackets,
                                 normal_form, parse_sigma, semidirect_R, sigma_to_data, solve_closure,
                                 ultra_rigid_criterion)
from tanaka.poly import MultiPoly

PLANE = Subspace.coordinate(3, [0, 1])


def generic_f24(params=("a", "b", "c", "d")):
    p = build_f24_prolonged()
    v = lambda n: MultiPoly.var(n, params)
    S = np.zeros((4, 8), dtype=object)
    S[0, 0], S[1, 0], S[2, 0], S[3, 0] = v("a"), v("c"), v("d"), v("b")
    return Modification(p, S, params, "generic")


def test_generic_first_layer_ansatz_forces_d12_coefficient_to_vanish():
    m = generic_f24()
    eqs = closure_equations(m)
    assert sorted(str(e) for e in eqs) == ["a*d", "b*d", "c*d", "d^2"]
    sol, free = solve_closure(eqs, m.parameters)
    assert sol["d"] == 0 and free == ["a", "b", "c"]


def test_abc_family_closes_and_is_step_six_at_c1():
    m = load("f24-abc")
    assert closure_equations(m) == []
    s = modified_brackets(m, {"a": 0, "b": 0, "c": 1})
    assert s.bracket_generating
    assert nilpotency_step(s.algebra) == 6


def test_failing_witness():
    m = generic_f24()
    res = is_modification_subalgebra(m, {"a": 0, "b": 0, "c": 0, "d": 1})
    assert not res
    i, j, residual = res.witness
    assert i in m.g_labels and j in m.g_labels and residual
    with pytest.raises(ModificationError):
        modified_brackets(m, {"a": 0, "b": 0, "c": 0, "d": 1})


def test_specialize_errors():
    m = generic_f24()
    with pytest.raises(ModificationError):
        m.specialize({"a": 1})
    with pytest.raises(ModificationError):
        m.specialize({"a": 1, "b": 1, "c": 1, "d": 1, "zz": 1})
    with pytest.raises(ModificationError):
        m.sigma_scalars()


def test_sigma_shape_and_parameters_checked():
    p = build_f24_prolonged()
    with pytest.raises(ModificationError):
        Modification(p, np.zeros((3, 8), dtype=object))
    S = np.zeros((4, 8), dtype=object)
    S[0, 0] = MultiPoly.var("z", ("z",))
    with pytest.raises(ModificationError):
        Modification(p, S, ("a",))


def test_functional_modification_of_heisenberg():
    params = ("s1", "s2", "s3")
    fm = functional_modification(heisenberg(), [MultiPoly.var(x, params) for x in params])
    sol, free = solve_closure(closure_equations(fm), fm.parameters)
    assert sol == {"s3": 0} and free == ["s1", "s2"]
    closed = functional_modification(heisenberg(), [1, 2, 0])
    assert is_modification_subalgebra(closed)
    assert ultra_rigid_criterion(heisenberg(), [1, 2, 0])
    assert not ultra_rigid_criterion(heisenberg(), [0, 0, 1])
    assert not is_modification_subalgebra(functional_modification(heisenberg(), [0, 0, 1]))


def test_ultra_rigid_template_solution():
    m = load("ultra-rigid-template")
    sol, free = solve_closure(closure_equations(m), m.parameters)
    assert free == ["s1", "s2", "s3"]
    assert all(sol[f"s{k}"] == 0 for k in range(4, 9))


def test_semidirect_R():
    p = semidirect_R(heisenberg())
    assert p.splitting == ["D"] and p.algebra.dim == 4


@pytest.mark.parametrize("name,label", [("heis-sl3-B", "B"), ("heis-sl3-C", "C"), ("heis-su21-D", "D")])
def test_catalog_simple_cases(name, label):
    m = load(name)
    s = modified_brackets(m)
    cls = classify_3d(s.algebra, s.polarization)
    assert cls.label == label


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B", "C", "D"])
def test_normal_forms_classify_to_themselves(label):
    cls = classify_3d(normal_form(label), PLANE)
    assert cls.label == label
    assert cls.basis is not None


def test_a4_parameter_scales_with_beta():
    # [e1,e2] = e3, [e1,e3] = 3 e2 + 2 e3 has invariant 3/4
    alg = GradedLieAlgebra(["e1", "e2", "e3"], {(0, 1): {2: 1}, (0, 2): {1: 3, 2: 2}})
    cls = classify_3d(alg, PLANE)
    assert cls.label == "A4" and cls.alpha == F(3, 4)
    assert str(cls) == "A4(alpha=3/4)"
    assert cls.basis is not None


def test_irrational_normalisation_has_no_basis():
    alg = GradedLieAlgebra(["e1", "e2", "e3"], {(0, 1): {2: 1}, (0, 2): {1: 2}})
    cls = classify_3d(alg, PLANE)
    assert cls.label == "A2" and cls.basis is None


def test_classify_errors():
    with pytest.raises(ModificationError):
        classify_3d(normal_form("A1"), Subspace.coordinate(3, [0, 2]))
    with pytest.raises(ModificationError):
        classify_3d(heisenberg(), Subspace.coordinate(3, [0]))


@st.composite
def polarized_change(draw):
    while True:
        a = [[draw(st.integers(-3, 3)) for _ in range(2)] for _ in range(2)]
        if a[0][0] * a[1][1] - a[0][1] * a[1][0] != 0:
            break
    c = [draw(st.integers(-3, 3)) for _ in range(2)]
    k = draw(st.integers(1, 3)) * draw(st.sampled_from([1, -1]))
    return as_matrix([[a[0][0], a[0][1], c[0]], [a[1][0], a[1][1], c[1]], [0, 0, k]])


@given(st.sampled_from(["A1", "A2", "A3", "B", "C", "D", "A4"]), polarized_change())
def test_class_is_invariant_under_polarized_basis_change(label, P):
    alg = normal_form(label, F(5, 7) if label == "A4" else None)
    alg2 = alg.change_basis(P)
    cls = classify_3d(alg2, PLANE)
    assert cls.label == label
    if label == "A4":
        assert cls.alpha == F(5, 7)


def test_parse_sigma_round_trip():
    m = load("f24-abc")
    data = sigma_to_data(m, base="f24-prolonged")
    m2 = parse_sigma(json.dumps(data))
    assert (m2.sigma == m.sigma).all() and m2.parameters == m.parameters
    inline = parse_sigma(json.dumps(sigma_to_data(m)))
    assert (inline.sigma == m.sigma).all()


@pytest.mark.parametrize("mutate,fragment", [
    (lambda d: d.update(colour=1), "unknown field"),
    (lambda d: d.pop("sigma"), "missing field"),
    (lambda d: d.update(base="nope"), "unknown base"),
    (lambda d: d["sigma"][0].update({"from": "d11"}), "unknown g label"),
    (lambda d: d["sigma"][0]["to"].append(["e3", "1"]), "unknown q label"),
    (lambda d: d["sigma"][0]["to"].append(["d12", "z"]), "undeclared"),
    (lambda d: d.update(parameters=["a", "a"]), "duplicate"),
    (lambda d: d.update(splitting=["d11"]), "splitting"),
])
def test_parse_sigma_errors(mutate, fragment):
    data = json.loads(bundled_text("f24-abc"))
    mutate(data)
    with pytest.raises(DescriptionError) as info:
        parse_sigma(json.dumps(data), "x.json")
    assert fragment in str(info.value)


def test_hand_typed_s1_table_has_step_six():
    # s(0, 0, 1) entered directly from its printed bracket table (1-based, printed orientation)
    table = {(2, 1): {3: 1}, (3, 1): {4: 1}, (3, 2): {5: 1}, (4, 1): {6: 1, 5: -1}, (4, 2): {7: 1},
             (5, 1): {7: 1}, (1, 6): {7: 2}, (1, 7): {8: 1}, (5, 2): {8: 1}}
    zero_based = {(i - 1, j - 1): {k - 1: c for k, c in v.items()} for (i, j), v in table.items()}
    s1 = GradedLieAlgebra([f"f{k}" for k in range(1, 9)], zero_based)
    from tanaka.algebra import lower_central_series
    assert [c.dim for c in lower_central_series(s1)] == [8, 6, 5, 3, 2, 1, 0]
    assert nilpotency_step(s1) == 6
    computed = modified_brackets(load("f24-abc"), {"a": 0, "b": 0, "c": 1}).algebra
    assert computed.structure_table() == s1.structure_table()
