import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from arboreal.dynamics import (
    QuadMap,
    check_disc_recursion,
    critical_orbit,
    is_separable_iterate,
    iterate_discriminant,
    iterate_value_poly,
)
from arboreal.poly import Poly

small_q = st.fractions(max_denominator=8, min_value=-12, max_value=12)


def test_critical_orbit_examples():
    assert critical_orbit(QuadMap(0, 3), 3) == [3, 12, 147]
    assert critical_orbit(QuadMap(0, -2), 3) == [-2, 2, 2]
    assert critical_orbit(QuadMap(1, 0), 3) == [0, 1, 0]
    with pytest.raises(ValueError):
        critical_orbit(QuadMap(0, 1), 0)


def test_iterate_value_poly_examples():
    t = Poly.x()
    assert iterate_value_poly(0, 3) == t**4 + 2 * t**3 + t**2 + t
    assert iterate_value_poly(0, 1) == t
    assert iterate_value_poly(1, 3)(3) == 39


def test_iterate_value_poly_matches_sympy():
    t, g = sympy.symbols("t g")
    for gamma in (0, 1, Fraction(2, 3)):
        expr = t
        for _ in range(3):
            expr = sympy.expand((expr - sympy.Rational(gamma)) ** 2 + t)
        p = iterate_value_poly(gamma, 4)
        assert sympy.Poly(expr, t).all_coeffs()[::-1] == [sympy.Rational(c.numerator, c.denominator) for c in p.coeffs]


@given(small_q, small_q, st.integers(min_value=1, max_value=6))
def test_iterate_value_poly_degree_and_value(gamma, c, n):
    p = iterate_value_poly(gamma, n)
    assert p.degree == 2 ** (n - 1)
    assert p(c) == critical_orbit(QuadMap(gamma, c), n)[-1]


def test_random_degree_and_value_samples():
    rng = random.Random(3)
    for _ in range(200):
        gamma = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        n = rng.randint(1, 6)
        p = iterate_value_poly(gamma, n)
        assert p.degree == 2 ** (n - 1) and p(c) == critical_orbit(QuadMap(gamma, c), n)[n - 1]


def test_depth_cap():
    with pytest.raises(ValueError):
        iterate_value_poly(0, 9)


def test_disc_recursion_examples():
    assert iterate_discriminant(QuadMap(0, 3), 2) == 27648 == 12**2 * 16 * 12
    assert check_disc_recursion(QuadMap(0, 3), 2)
    assert check_disc_recursion(QuadMap(0, -1), 2)
    assert check_disc_recursion(QuadMap(0, 5), 3)


@given(small_q, small_q, st.integers(min_value=2, max_value=4))
def test_disc_recursion_property(gamma, c, n):
    m = QuadMap(gamma, c)
    if all(is_separable_iterate(m, k) for k in range(1, n + 1)):
        assert check_disc_recursion(m, n)


def test_iterate_disc_matches_sympy():
    x = sympy.Symbol("x")
    m = QuadMap(Fraction(1, 2), Fraction(-3, 4))
    expr = x
    for _ in range(3):
        expr = (expr - sympy.Rational(1, 2)) ** 2 + sympy.Rational(-3, 4)
    assert iterate_discriminant(m, 3) == sympy.discriminant(sympy.expand(expr), x)


@given(st.integers(min_value=1, max_value=50))
def test_orbit_increases_for_positive_c(c):
    orbit = critical_orbit(QuadMap(0, c), 6)
    assert all(a < b for a, b in zip(orbit, orbit[1:]))
