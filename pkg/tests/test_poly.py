from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from tanaka.poly import MultiPoly, PolyError, parse_poly, symbols
from tanaka.scalars import GaussianRational

VARS = ("t", "x1", "x2")
coeffs = st.fractions(max_denominator=12).map(lambda q: q.limit_denominator(12))
monos = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))


@st.composite
def polys(draw):
    terms = {}
    for exps, c in draw(st.lists(st.tuples(monos, coeffs), max_size=5)):
        terms[tuple((v, e) for v, e in zip(VARS, exps) if e)] = c
    return MultiPoly(terms, VARS)


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert p - p == 0


@given(polys())
def test_integrate_then_diff(p):
    assert p.integrate("t").diff("t") == p
    assert p.integrate("t").subs({"t": 0}) == 0


@given(polys())
def test_str_parse_round_trip(p):
    assert parse_poly(str(p), VARS) == p


@given(polys())
def test_json_round_trip(p):
    assert MultiPoly.from_json(p.to_json(), VARS) == p


@given(polys(), polys())
def test_product_rule(p, q):
    assert (p * q).diff("x1") == p.diff("x1") * q + p * q.diff("x1")


@given(polys(), coeffs, coeffs, coeffs)
def test_evaluate_is_homomorphism(p, a, b, c):
    pt = {"t": a, "x1": b, "x2": c}
    q = p * p + p
    assert q.evaluate(pt) == p.evaluate(pt) ** 2 + p.evaluate(pt)


def test_printing_and_ordering():
    t, x1, x3 = symbols("t x1 x3")
    p = t * x3 - F(1, 12) * t ** 3 * x1 ** 3
    assert str(p) == "-1/12*t^3*x1^3 + t*x3"
    assert p.degree() == 6 and p.degree("t") == 3
    assert p.coeff("t", 3) == -F(1, 12) * x1 ** 3
    assert MultiPoly({}, ()).degree() == -1


def test_subs_polynomial():
    a, b = symbols("a b")
    assert (a * a + b).subs({"a": b + 1}) == b * b + 3 * b + 1


def test_gaussian_coefficients():
    p = parse_poly("1/2*alpha + i*beta", ("alpha", "beta"))
    assert p.evaluate({"alpha": 2, "beta": 1}) == GaussianRational(1, 1)


def test_errors():
    with pytest.raises(PolyError):
        MultiPoly.var("x", ("x",)).integrate("y")
    with pytest.raises(PolyError):
        parse_poly("x/y", ("x", "y"))
    with pytest.raises(PolyError):
        MultiPoly.var("x").evaluate({})
