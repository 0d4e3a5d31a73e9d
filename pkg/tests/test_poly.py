from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from gcx.errors import AmbientMismatch, ParseError
from gcx.poly import (
    QQ, GF, Block, DegRevLex, Field, Lex, PolyRing, elimination_order, format_polynomial, is_prime,
    monomials_of_degree, order_eliminates,
)

from conftest import to_sympy

R = PolyRing(QQ, ["x", "y", "z"])
R7 = PolyRing(GF(7), ["x", "y", "z"])

exponents = st.tuples(*[st.integers(0, 6)] * 3)
coeffs = st.integers(-9, 9)
polys = st.dictionaries(exponents, coeffs, max_size=5)


def build(ring, d):
    return ring.from_dict(d)


def test_field_parsing():
    assert Field.parse("QQ") == QQ
    assert Field.parse("GF(5)") == GF(5)
    with pytest.raises(ValueError):
        Field.parse("GF(6)")
    with pytest.raises(ValueError):
        Field.parse("ZZ")


def test_prime_detection():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_finite_field_inverse_and_reduction():
    F = GF(7)
    assert F(10) == 3
    assert F(3) * F.inv(3) % 7 == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@given(polys, polys, polys)
def test_ring_axioms_qq(a, b, c):
    a, b, c = build(R, a), build(R, b), build(R, c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == R.zero()
    assert a * R.one() == a


@given(polys, polys)
def test_ring_axioms_gf7(a, b):
    a, b = build(R7, a), build(R7, b)
    assert (a + b) ** 2 == a * a + R7.const(2) * a * b + b * b
    assert a * R7.const(7) == R7.zero()


@given(polys, polys)
def test_product_matches_sympy(a, b):
    a, b = build(R, a), build(R, b)
    xs = sympy.symbols("x y z")
    assert to_sympy(a * b, xs) == sympy.expand(to_sympy(a, xs) * to_sympy(b, xs))


@given(exponents, exponents, exponents)
def test_orders_are_monomial_orders(u, v, w):
    for order in (Lex(3), DegRevLex(3), Block([DegRevLex(1), DegRevLex(2)])):
        c = order.cmp(u, v)
        assert c == -order.cmp(v, u)
        assert (c == 0) == (u == v)
        uw = tuple(a + b for a, b in zip(u, w))
        vw = tuple(a + b for a, b in zip(v, w))
        assert order.cmp(uw, vw) == c
        assert order.cmp(uw, u) >= 0


def test_degrevlex_matches_sympy_grevlex():
    mons = list(monomials_of_degree(3, 3)) + list(monomials_of_degree(3, 2))
    ours = sorted(mons, key=DegRevLex(3).key)
    theirs = sorted(mons, key=sympy.polys.orderings.grevlex)
    assert ours == theirs


def test_elimination_orders():
    assert order_eliminates(elimination_order(2, 3), 2)
    assert not order_eliminates(elimination_order(2, 3), 1)
    assert order_eliminates(Lex(4), 3)
    assert not order_eliminates(DegRevLex(4), 2)
    assert order_eliminates(DegRevLex(4), 0)


def test_leading_terms_and_monic():
    f = R("3*x*y^2 - 2*z^4 + 1")
    assert f.leading_monomial() == (0, 0, 4)
    assert f.leading_monomial(Lex(3)) == (1, 2, 0)
    assert f.monic().leading_coeff() == 1


def test_evaluate_substitutes():
    f = R("x^2 - y*z")
    S = PolyRing(QQ, ["t"])
    t = S.var(0)
    assert f.evaluate([t ** 3, t ** 4, t ** 2], S) == S("t^6 - t^6")


def test_printing():
    assert format_polynomial(R("2*x^2*y - 1/2*z + 3")) == "2*x^2*y - 1/2*z + 3"
    assert str(R("0")) == "0"
    assert str(R("-x")) == "-x"
    assert str(R7("-x")) == "6*x"


@given(polys)
def test_parse_print_roundtrip(d):
    for ring in (R, R7):
        f = build(ring, d)
        assert ring(str(f)) == f


@given(polys)
def test_parse_roundtrip_rational_coefficients(d):
    f = build(R, d) * R.const(Fraction(2, 3))
    assert R(str(f)) == f


def test_parser_grammar():
    assert R("(x + y)^2") == R("x^2 + 2*x*y + y^2")
    assert R("−x") == -R.var(0)
    assert R("y^3 - x^4") == R.var(1) ** 3 - R.var(0) ** 4
    assert R("0").is_zero()


@pytest.mark.parametrize("src,col", [("x +", 4), ("2x", 2), ("x * w", 5), ("x^", 3), ("(x", 3), ("x $ y", 3)])
def test_parse_errors_have_columns(src, col):
    with pytest.raises(ParseError) as info:
        R(src)
    assert info.value.column == col


def test_parse_rejects_vanishing_denominator():
    with pytest.raises(ParseError):
        PolyRing(GF(2), ["x"])("1/2*x")
    assert PolyRing(GF(3), ["x"])("1/2*x") == PolyRing(GF(3), ["x"])("2*x")


def test_ambient_mismatch():
    S = PolyRing(QQ, ["a"])
    with pytest.raises(AmbientMismatch):
        R.var(0) + S.var(0)
