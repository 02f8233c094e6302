import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, strategies as st

from arboreal.padic import (
    ALPHA,
    G1,
    G2,
    G3,
    AlphaCurve,
    PrecisionError,
    QAlpha,
    RingElement,
    TruncSeries,
    base_point,
    formal_exp,
    formal_log,
    inverse_x_series,
    chabauty_report,
    root_multiplicity_at_zero,
    small_integer_roots,
    strassmann_zero_bound,
    x_inverse_of_multiple,
    z_exact,
    z_of_point,
)

small = st.integers(-6, 6)
qalphas = st.builds(QAlpha, small, small, small)


@pytest.fixture(scope="module")
def report():
    return chabauty_report()


# --- Q(alpha) -----------------------------------------------------------------------


def test_alpha_relation():
    a = ALPHA
    assert a**3 + a**2 - 1 == QAlpha(0)
    assert (a * a.inverse()) == QAlpha(1)


@given(qalphas, qalphas)
def test_qalpha_matches_sympy(u, v):
    a = sympy.Symbol("a")
    minpoly = sympy.Poly(a**3 + a**2 - 1, a)

    def sym(q):
        return sum(sympy.Rational(c.numerator, c.denominator) * a**i for i, c in enumerate(q.c))

    prod = sympy.Poly(sym(u) * sym(v), a).rem(minpoly)
    assert [prod.coeff_monomial(a**i) for i in range(3)] == [sympy.Rational(c.numerator, c.denominator) for c in (u * v).c]
    if v != QAlpha(0):
        assert (u / v) * v == u


def test_norm_and_valuation():
    assert (1 - ALPHA).norm() in (1, -1)
    assert QAlpha(9, 27, 3).valuation(3) == 1
    assert QAlpha(F(1, 3)).valuation(3) == -1


# --- truncated ring ---------------------------------------------------------------


def test_ring_element_reduction_and_precision():
    r = RingElement.from_qalpha(QAlpha(82, -1, F(1, 2)), 3, 4)
    assert r.coeffs == (1, 80, 41)
    with pytest.raises(PrecisionError):
        RingElement.from_qalpha(QAlpha(F(1, 3)), 3, 4)
    x = RingElement.from_qalpha(QAlpha(3, 6, 9), 3, 4)
    assert x.valuation() == 1
    assert x.divide_by_p().prec == 3


@given(qalphas, qalphas)
def test_reduction_is_a_ring_map(u, v):
    ru, rv = RingElement.from_qalpha(u), RingElement.from_qalpha(v)
    assert RingElement.from_qalpha(u * v) == ru * rv
    assert RingElement.from_qalpha(u + v) == ru + rv


# --- formal group series ---------------------------------------------------------


def test_log_displayed_coefficients():
    L = formal_log(G1, G2, G3, 9).coeffs
    assert L[1] == QAlpha(1)
    assert L[3] == G2 / 3
    assert L[2] == L[4] == QAlpha(0)
    zero = QAlpha(0)
    L0 = formal_log(G1, zero, G3, 7).coeffs
    assert L0[5] == F(2, 5) * G1 * G3


def _sympy_log(prec):
    g1, g2, g3, z = sympy.symbols("g1 g2 g3 z")
    u = sympy.Integer(0)
    for _ in range(prec):
        u = sympy.expand(z**2 * (g3 + g2 * u + g1 * u**2))
        u = sympy.series(u, z, 0, prec + 2).removeO()
    v = sympy.expand(u / z**2)
    integrand = sympy.series(1 + z * sympy.diff(v, z) / (2 * v), z, 0, prec).removeO()
    return sympy.Poly(sympy.integrate(integrand, z), z), (g1, g2, g3)


def test_log_matches_sympy_oracle():
    poly, gs = _sympy_log(9)
    ours = formal_log(G1, G2, G3, 9).coeffs
    for j in range(1, 9):
        coeff = sympy.Poly(poly.coeff_monomial(sympy.Symbol("z") ** j), *gs)
        val = QAlpha(0)
        for mon, c in coeff.terms():
            term = QAlpha(F(int(c.p), int(c.q)))
            for g, e in zip((G1, G2, G3), mon):
                term = term * g**e
            val = val + term
        assert ours[j] == val, j


def test_exp_inverts_log_random():
    rng = random.Random(1)
    for _ in range(20):
        g1 = QAlpha(*(rng.randint(-5, 5) for _ in range(3)))
        g2 = QAlpha(*(rng.randint(-5, 5) for _ in range(3)))
        g3 = QAlpha(1 + 3 * rng.randint(-3, 3), 3 * rng.randint(-3, 3), 3 * rng.randint(-3, 3))
        L = formal_log(g1, g2, g3, 7)
        X = formal_exp(g1, g2, g3, 7)
        comp = X.compose(L)
        assert comp.coeffs[1] == QAlpha(1)
        assert all(c == QAlpha(0) for j, c in enumerate(comp.coeffs[:7]) if j != 1)


def test_inverse_x_series_leading_terms():
    u = inverse_x_series(G1, G2, G3, 6).coeffs
    assert u[2] == G3 and u[4] == G2 * G3
    assert u[0] == u[1] == u[3] == QAlpha(0)


# --- z coordinates -----------------------------------------------------------------


def test_z_of_point_examples(report):
    C = AlphaCurve()
    Q = C.multiply(3, base_point())
    z = z_of_point(Q)
    assert z.coeffs == (27, 60, 15)
    assert z_of_point(C.negate(Q)) == -z
    assert z_of_point(C.multiply(0, Q)).is_zero()
    with pytest.raises(ValueError):
        z_of_point(base_point())
    assert report["z"] == z
    assert report["log_z"].coeffs == (18, 60, 15)


def test_series_agrees_with_group_law(report):
    C = AlphaCurve()
    Q = C.multiply(3, base_point())
    zn = report["z_n"]
    m = 3**4
    for n in range(1, 5):
        exact = z_of_point(C.multiply(n, Q)).coeffs
        val = [sum(int(zn[j].coeffs[i]) * n**j for j in range(len(zn))) % m for i in range(3)]
        assert tuple(val) == exact, n


def test_inverse_x_agrees_with_group_law(report):
    C = AlphaCurve()
    Q = C.multiply(3, base_point())
    m = 3**4
    for n in range(1, 5):
        x = C.multiply(n, Q).x
        exact = RingElement.from_qalpha(1 / x).coeffs
        val = tuple(sum(int(c) * n**j for j, c in enumerate(report["phi"][i])) % m for i in range(3))
        assert val == exact, n


def test_expansion_terms():
    zQ = z_exact(AlphaCurve().multiply(3, base_point()))
    exp = x_inverse_of_multiple(zQ)
    # 1/x vanishes to order two at n = 0
    assert all(int(exp.phi[i][0]) == 0 and int(exp.phi[i][1]) == 0 for i in range(3))
    with pytest.raises(ValueError):
        x_inverse_of_multiple(QAlpha(1))


# --- Strassmann ---------------------------------------------------------------------


def test_strassmann_examples(report):
    phi2 = report["phi"][2]
    assert strassmann_zero_bound(phi2) == 2
    assert root_multiplicity_at_zero(phi2) == 2
    assert strassmann_zero_bound([0, 3, 1], 3, 2) == 2
    assert strassmann_zero_bound([4], 3, 4) == 0
    assert strassmann_zero_bound([0, 81, 0], 3, 4) is None


def test_cases_only_zero(report):
    for name, phis in report["cases"].items():
        assert strassmann_zero_bound(phis[2]) == root_multiplicity_at_zero(phis[2]), name


@given(st.lists(st.integers(-500, 500), min_size=1, max_size=6))
def test_strassmann_bounds_integer_roots(coeffs):
    bound = strassmann_zero_bound(coeffs, 3, 6)
    if bound is None or all(c == 0 for c in coeffs):
        return
    assert len(small_integer_roots(coeffs)) <= bound
