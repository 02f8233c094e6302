import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from arboreal.analytic import (
    PUBLISHED_CONSTANTS,
    BoundReductionInput,
    DisconnectedRealLocusError,
    EllipticLogContext,
    ReductionFailure,
    multiplier_bound_pipeline,
    decay_pair,
    elliptic_exp,
    elliptic_log,
    gauss_reduce,
    real_period,
    real_period_quadrature,
    reduce_multiplier_bound,
    round_half_even,
)
from arboreal.curves import NAMED, CurvePoint, Weierstrass

E = NAMED["E"]
P = CurvePoint(1, 1)
REFERENCE = [E, Weierstrass(0, 0, 0, 0, -1), Weierstrass(0, 0, 0, 1, 1), NAMED["E1W"], NAMED["E2mid"]]


@pytest.fixture(scope="module")
def ctx():
    return EllipticLogContext(E)


def test_period_matches_quadrature():
    for W in REFERENCE:
        assert W.discriminant < 0
        assert abs(real_period(W, 30) - real_period_quadrature(W, 30)) < 1e-8


def test_period_scaling():
    W2 = Weierstrass(0, 0, 0, -(2**4), 2**6)
    with mpmath.workdps(80):
        assert abs(real_period(W2) - real_period(E) / 2) < mpmath.mpf(10) ** -70


def test_period_rejects_disconnected():
    with pytest.raises(DisconnectedRealLocusError):
        real_period(Weierstrass(0, 0, 0, -1, 0))


def test_psi_value_and_homomorphism(ctx):
    psi = elliptic_log(ctx, P)
    assert abs(psi - PUBLISHED_CONSTANTS["psi_P"]) < 5e-4
    assert 0 <= psi < ctx.omega
    tol = mpmath.mpf(10) ** -70
    with mpmath.workdps(ctx.digits):
        two = elliptic_log(ctx, E.multiply(2, P))
        assert abs(2 * psi - two - ctx.omega) < tol
        neg = elliptic_log(ctx, E.negate(P))
        assert abs(psi + neg - ctx.omega) < tol
    assert elliptic_log(ctx, CurvePoint.infinity()) == 0


def test_carlson_matches_quadrature(ctx):
    for k in (1, 2, 3, 7):
        Q = E.multiply(k, P)
        a = elliptic_log(ctx, Q)
        b = elliptic_log(EllipticLogContext(E, 30), Q, method="quadrature")
        assert abs(a - b) < 1e-12


def test_exp_log_round_trip(ctx):
    tol = mpmath.mpf(10) ** -(ctx.digits - 5)
    with mpmath.workdps(ctx.digits + 20):
        for k in list(range(-25, 0)) + list(range(1, 26)):
            Q = E.multiply(k, P)
            X, Y = elliptic_exp(ctx, elliptic_log(ctx, Q))
            assert abs(X - mpmath.mpf(Q.x.numerator) / Q.x.denominator) < tol
            assert abs(Y - mpmath.mpf(Q.y.numerator) / Q.y.denominator) < tol
    assert elliptic_exp(ctx, 0) is None


def test_round_half_even():
    assert round_half_even(mpmath.mpf("2.5")) == 2
    assert round_half_even(mpmath.mpf("3.5")) == 4
    assert round_half_even(mpmath.mpf("-2.5")) == -2
    assert round_half_even(mpmath.mpf("2.4999")) == 2


@given(st.tuples(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6)), st.tuples(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6)))
@settings(max_examples=200)
def test_gauss_reduce(b1, b2):
    det = b1[0] * b2[1] - b1[1] * b2[0]
    if det == 0:
        return
    r1, r2 = gauss_reduce(b1, b2)
    assert abs(r1[0] * r2[1] - r1[1] * r2[0]) == abs(det)
    n1 = r1[0] ** 2 + r1[1] ** 2
    n2 = r2[0] ** 2 + r2[1] ** 2
    assert n1 <= n2
    # reduced: |<r1, r2>| <= |r1|^2 / 2, so r1 is a shortest vector
    assert 2 * abs(r1[0] * r2[0] + r1[1] * r2[1]) <= n1
    for i in range(-3, 4):
        for j in range(-3, 4):
            if (i, j) != (0, 0):
                v = (i * b1[0] + j * b2[0], i * b1[1] + j * b2[1])
                assert v[0] ** 2 + v[1] ** 2 >= n1


def test_decay_pair_consistency():
    A, B = decay_pair()
    assert A == PUBLISHED_CONSTANTS["c5"]
    assert B == PUBLISHED_CONSTANTS["decay_B"]
    bad = dict(PUBLISHED_CONSTANTS, decay_B=0.06)
    with pytest.raises(ValueError):
        decay_pair(bad)


def _input(ctx, C=10**60, N0=10**25, A=35.785):
    return BoundReductionInput(C, N0, A, 0.049805, ctx.omega, elliptic_log(ctx, P))


def test_reduction_bound(ctx):
    res = reduce_multiplier_bound(_input(ctx), detail=True)
    assert 0 < res.N1 <= 50
    assert res.lower_bound > 0
    # the decay bound and the lattice bound are incompatible just past N1
    N = res.N1 + 1
    assert 35.785 * mpmath.exp(-0.049805 * N * N) < res.lower_bound


def test_reduction_monotone_and_trivial(ctx):
    full = reduce_multiplier_bound(_input(ctx))
    half = reduce_multiplier_bound(_input(ctx, A=35.785 / 2))
    assert half <= full
    assert reduce_multiplier_bound(_input(ctx, N0=0)) == 0


def test_reduction_rejects_bad_scaling(ctx):
    with pytest.raises(ValueError):
        _input(ctx, C=10**40)
    with pytest.raises(ReductionFailure):
        reduce_multiplier_bound(_input(ctx, C=10**50))


def test_bound_pipeline_runs_quickly():
    import time

    t0 = time.perf_counter()
    ctx, psi, res = multiplier_bound_pipeline()
    assert time.perf_counter() - t0 < 5
    assert res.matrix[0] == (1, 0)
    with mpmath.workdps(ctx.digits):
        assert res.matrix[1][0] == round_half_even(mpmath.mpf(10**60) * psi)
