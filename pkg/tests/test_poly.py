from fractions import Fraction

import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester
from hypothesis import given, strategies as st

from arboreal.poly import Poly, discriminant, rational_roots, resultant

coeffs = st.lists(st.fractions(max_denominator=20, min_value=-30, max_value=30), min_size=2, max_size=7)
T = sympy.Symbol("t")


def to_sympy(p):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)], T)


def make(cs):
    p = Poly(cs)
    return p


def test_discriminant_examples():
    x = Poly.x("x")
    assert discriminant(x**2 + 3) == -12
    assert discriminant(x**4 + 6 * x**2 + 12) == 27648
    assert discriminant(x**2 - 1) == 4
    with pytest.raises(ValueError):
        discriminant(Poly([]))


@given(coeffs)
def test_discriminant_matches_sympy(cs):
    p = make(cs)
    if p.degree < 1:
        return
    assert discriminant(p) == sympy.discriminant(to_sympy(p).as_expr(), T)


@given(coeffs, coeffs)
def test_resultant_matches_sympy(a, b):
    p, q = make(a), make(b)
    if p.degree < 1 or q.degree < 1:
        return
    # the oracle is the Sylvester determinant itself: sympy.resultant returns
    # the wrong sign on some inputs, e.g. Res(t^3 + 2, t^5)
    syl = sylvester(to_sympy(p).as_expr(), to_sympy(q).as_expr(), T, 1).det()
    assert resultant(p, q) == syl
    assert abs(resultant(p, q)) == abs(sympy.resultant(to_sympy(p).as_expr(), to_sympy(q).as_expr(), T))


def test_resultant_sign_by_roots():
    # Res(t^3 + 2, t^5) = prod of r^5 over the roots of t^3 + 2 = (-2)^5
    t = Poly.x("t")
    assert resultant(t**3 + 2, t**5) == -32
    assert resultant(t**5, t**3 + 2) == 32


@given(coeffs, coeffs)
def test_divmod_and_gcd(a, b):
    p, q = make(a), make(b)
    if q.is_zero():
        return
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree
    g = p.gcd(q)
    if not g.is_zero():
        assert (p % g).is_zero() and (q % g).is_zero()
        expected = sympy.gcd(to_sympy(p).as_expr(), to_sympy(q).as_expr())
        assert to_sympy(g).monic() == sympy.Poly(expected, T).monic()


@given(coeffs, st.fractions(max_denominator=10, min_value=-5, max_value=5))
def test_compose_and_evaluate(cs, v):
    p = make(cs)
    inner = Poly([1, 2, 1])
    assert p.compose(inner)(v) == p(inner(v))


def test_rational_roots():
    x = Poly.x("x")
    p = (2 * x - 3) * (x + 5) * (x**2 + 1)
    assert sorted(rational_roots(p)) == [Fraction(-5), Fraction(3, 2)]
    assert rational_roots(x**2 - 2) == []


def test_separability():
    x = Poly.x("x")
    assert not ((x - 1) ** 2 * (x + 2)).is_separable()
    assert (x**2 + 3).is_separable()
