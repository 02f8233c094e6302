"""Real periods, elliptic logarithms, and lattice reduction of integral-point multiplier bounds.

Conventions: for a Weierstrass model put Y = 2y + a1 x + a3, so that
Y^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 =: P(x).  The invariant differential is
dx / Y.  With the real locus connected (discriminant < 0), P has one real
root e1, and the elliptic logarithm of (x, y) is

    psi = int_x^oo dx / sqrt(P)            if Y < 0,
    psi = omega_1 - int_x^oo dx / sqrt(P)  if Y >= 0,

which lies in [0, omega_1) and makes psi a homomorphism to R / omega_1 Z.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

DEFAULT_DIGITS = 80

# Constants as published for y^2 = x^3 - x + 1 with P = (1, 1).  Stored as
# given; only decay_pair() and the reduction step use them.
PUBLISHED_CONSTANTS = {
    "h_E": 8.841,
    "mu_E": 2.9356,
    "c1": 160.07,
    "c2": 0.099617,
    "c3": 8,
    "c5": 35.785,
    "c7": 0.555,
    "c8": 24.032,
    "c9": 3.962,
    "omega1": 4.767,
    "psi_P": 3.676,
    "h_m_P": 8.841,
    "n": 2,
    "c10": 4.074e40,
    "decay_B": 0.049805,
    "decay_log_A": 3.578,
    "N0": 10**25,
    "C": 10**60,
}


class DisconnectedRealLocusError(ValueError):
    """Discriminant > 0: E(R) has two components, not handled here."""


class ReductionFailure(ValueError):
    """The reduced lattice is too short for the bound; raise C."""


def _mpf(q):
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


def _cubic_data(W):
    b2, b4, b6, _ = W.b_invariants
    return [_mpf(4), _mpf(b2), _mpf(2 * b4), _mpf(b6)]


def _real_root(W):
    coeffs = _cubic_data(W)
    roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=2 * mpmath.mp.dps)
    real = [r for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-mpmath.mp.dps // 2)]
    if len(real) != 1:
        raise DisconnectedRealLocusError("expected exactly one real root")
    return mpmath.re(real[0]), roots


def _check_connected(W):
    d = W.discriminant
    if d == 0:
        raise ValueError(f"{W} is singular")
    if d > 0:
        raise DisconnectedRealLocusError(f"{W} has positive discriminant; E(R) is not connected")


def real_period(W, digits=DEFAULT_DIGITS):
    """Fundamental real period omega_1 by the AGM (disc < 0 case)."""
    _check_connected(W)
    with mpmath.workdps(digits + 10):
        b2, b4, _, _ = (_mpf(v) for v in W.b_invariants)
        e1, _ = _real_root(W)
        beta = 3 * e1 + b2 / 4
        alpha = mpmath.sqrt(3 * e1 * e1 + b2 * e1 / 2 + b4 / 2)
        omega = 2 * mpmath.pi / mpmath.agm(2 * mpmath.sqrt(alpha), mpmath.sqrt(2 * alpha + beta))
        return +omega


def real_period_quadrature(W, digits=30):
    """Oracle: omega_1 = 2 * int_{e1}^oo dx / sqrt(P(x)) by numerical quadrature."""
    _check_connected(W)
    with mpmath.workdps(digits + 10):
        e1, _ = _real_root(W)
        c = _cubic_data(W)
        P = lambda x: ((c[0] * x + c[1]) * x + c[2]) * x + c[3]  # noqa: E731
        val = 2 * mpmath.quad(lambda x: 1 / mpmath.sqrt(P(x)), [e1, e1 + 1, mpmath.inf])
        # rounding in e1 can leave P(e1) a hair below zero
        return +mpmath.re(val)


def _tail_integral(W, x):
    """int_x^oo dx / sqrt(P) via Carlson's R_F."""
    _, roots = _real_root(W)
    # P = 4 (x - r1)(x - r2)(x - r3); int_x^oo = R_F(x - r1, x - r2, x - r3)
    args = [x - r for r in roots]
    return mpmath.re(mpmath.elliprf(*args))


def _tail_integral_quadrature(W, x):
    c = _cubic_data(W)
    P = lambda s: ((c[0] * s + c[1]) * s + c[2]) * s + c[3]  # noqa: E731
    return mpmath.quad(lambda s: 1 / mpmath.sqrt(P(s)), [x, x + 1, mpmath.inf])


@dataclass
class EllipticLogContext:
    curve: object
    digits: int = DEFAULT_DIGITS
    omega: object = field(init=False)

    def __post_init__(self):
        self.omega = real_period(self.curve, self.digits)

    def log(self, P):
        return elliptic_log(self, P)

    def exp(self, z):
        return elliptic_exp(self, z)


def elliptic_log(ctx, P, method="carlson"):
    """psi(P) in [0, omega_1); infinity maps to 0."""
    W = ctx.curve
    if P.is_infinity:
        return mpmath.mpf(0)
    if not W.contains(P):
        raise ValueError(f"{P} is not on {W}")
    with mpmath.workdps(ctx.digits + 10):
        x = _mpf(P.x)
        Y = 2 * Fraction(P.y) + W.a1 * Fraction(P.x) + W.a3
        if method == "carlson":
            tail = _tail_integral(W, x)
        elif method == "quadrature":
            tail = _tail_integral_quadrature(W, x)
        else:
            raise ValueError(f"unknown method {method!r}")
        psi = tail if Y < 0 else ctx.omega - tail
        if psi >= ctx.omega:
            psi -= ctx.omega
        return +psi


def _wp_invariants(W):
    c4, c6 = W.c4, W.c6
    return _mpf(Fraction(c4) / 12), _mpf(Fraction(c6) / 216)


def _wp_series(z, g2, g3, terms=24):
    """Laurent series of the Weierstrass p-function near 0."""
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, terms + 1):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3 * s / ((2 * k + 1) * (k - 3))
    z2 = z * z
    total = 1 / z2
    power = z2
    for k in range(2, terms + 1):
        total += c[k] * power
        power *= z2
    return total


def elliptic_exp(ctx, z):
    """(x, y) as mpf values with psi(x, y) = z mod omega_1, or None at a lattice point.

    p(z) comes from its Laurent series at z / 2^k followed by k x-only
    doublings; the sign of Y = p'(z) is negative on (0, omega/2).
    """
    W = ctx.curve
    with mpmath.workdps(ctx.digits + 30):
        omega = ctx.omega
        z = mpmath.fmod(mpmath.mpf(z), omega)
        if z < 0:
            z += omega
        if z == 0:
            return None
        # work with the representative of smallest size
        zz = z if z <= omega / 2 else omega - z
        g2, g3 = _wp_invariants(W)
        k = 0
        while zz / 2**k > mpmath.mpf("0.05"):
            k += 1
        wp = _wp_series(zz / 2**k, g2, g3)
        for _ in range(k):
            num = (6 * wp * wp - g2 / 2) ** 2
            den = 4 * (4 * wp**3 - g2 * wp - g3)
            wp = num / den - 2 * wp
        b2 = _mpf(W.b_invariants[0])
        x = wp - b2 / 12
        P = 4 * wp**3 - g2 * wp - g3
        Yabs = mpmath.sqrt(max(P, 0))
        Y = -Yabs if z < omega / 2 else Yabs
        y = (Y - _mpf(W.a1) * x - _mpf(W.a3)) / 2
        return +x, +y


# --- lattice reduction --------------------------------------------------

def round_half_even(v):
    """Nearest integer to an mpf, ties to even."""
    fl = int(mpmath.floor(v))
    frac = v - fl
    if frac > mpmath.mpf(0.5):
        return fl + 1
    if frac < mpmath.mpf(0.5):
        return fl
    return fl if fl % 2 == 0 else fl + 1


def gauss_reduce(b1, b2):
    """Lagrange-Gauss reduction of a rank-2 integer lattice; returns (shortest, second)."""
    def dot(u, v):
        return u[0] * v[0] + u[1] * v[1]

    if dot(b1, b1) > dot(b2, b2):
        b1, b2 = b2, b1
    while True:
        n1 = dot(b1, b1)
        if n1 == 0:
            raise ReductionFailure("degenerate lattice")
        # nearest integer to dot(b1, b2) / n1, exact
        num = dot(b1, b2)
        mu = (2 * num + n1) // (2 * n1)
        b2 = (b2[0] - mu * b1[0], b2[1] - mu * b1[1])
        if dot(b2, b2) >= n1:
            return b1, b2
        b1, b2 = b2, b1


@dataclass
class BoundReductionInput:
    """|m omega + N psi| <= A exp(-B N^2) for |N| <= N0, scaled by C."""

    C: int
    N0: int
    A: float
    B: float
    omega: object
    psi: object

    def __post_init__(self):
        if self.C < self.N0**2:
            raise ValueError("need C >= N0^2")

    def matrix(self):
        """Columns (1, [C psi]) and (0, [C omega]), rounding ties to even."""
        with mpmath.workdps(max(mpmath.mp.dps, len(str(self.C)) + 40)):
            cpsi = round_half_even(mpmath.mpf(self.C) * self.psi)
            comega = round_half_even(mpmath.mpf(self.C) * self.omega)
        return [[1, 0], [cpsi, comega]]


@dataclass(frozen=True)
class ReductionResult:
    N1: int
    shortest_sq: int
    lower_bound: object
    matrix: tuple
    reduced: tuple


def reduce_multiplier_bound(inp, detail=False):
    """Shrink N0 to N1 using the shortest vector of the scaled lattice.

    For |N| <= N0, |m omega + N psi| >= (sqrt(c - 2 N0^2) - (1/2 + N0)) / C
    with c the squared length of the shortest lattice vector.  Combined with
    the decay bound this forces N^2 <= log(A / lower) / B.
    """
    if inp.N0 == 0:
        res = ReductionResult(0, 0, None, (), ())
        return res if detail else 0
    X = inp.matrix()
    b1 = (X[0][0], X[1][0])
    b2 = (X[0][1], X[1][1])
    r1, r2 = gauss_reduce(b1, b2)
    c = r1[0] ** 2 + r1[1] ** 2
    slack = c - 2 * inp.N0**2
    if slack <= 0:
        raise ReductionFailure(f"shortest vector too short (c = {c}); increase C")
    with mpmath.workdps(len(str(inp.C)) + 40):
        lower = (mpmath.sqrt(slack) - (mpmath.mpf(1) / 2 + inp.N0)) / inp.C
        if lower <= 0:
            raise ReductionFailure("lattice too skewed for this N0; increase C")
        ratio = mpmath.mpf(inp.A) / lower
        if ratio <= 1:
            N1 = 0
        else:
            N1 = int(mpmath.floor(mpmath.sqrt(mpmath.log(ratio) / inp.B)))
    N1 = min(N1, inp.N0)
    res = ReductionResult(N1, c, lower, tuple(map(tuple, X)), (r1, r2))
    return res if detail else N1


def decay_pair(constants=PUBLISHED_CONSTANTS):
    """(A, B) of the decay bound from a constant table, with consistency checks.

    A is c5; the table's additive constant must equal log(c5), and B must
    agree with c2 / 2 to the printed precision.
    """
    A = constants["c5"]
    B = constants["decay_B"]
    if abs(mpmath.log(A) - constants["decay_log_A"]) > 5e-4:
        raise ValueError("log(c5) does not match the stated additive constant")
    if abs(constants["c2"] / 2 - B) > 5e-6:
        raise ValueError("decay exponent does not match c2 / 2")
    return A, B


def multiplier_bound_pipeline(digits=DEFAULT_DIGITS, C=None, N0=None, curve=None, generator=None):
    """The full pipeline on y^2 = x^3 - x + 1 with generator (1, 1)."""
    from .curves.models import CurvePoint, Weierstrass

    W = curve or Weierstrass(0, 0, 0, -1, 1)
    P = generator or CurvePoint(1, 1)
    ctx = EllipticLogContext(W, digits)
    psi = elliptic_log(ctx, P)
    A, B = decay_pair()
    inp = BoundReductionInput(
        C or PUBLISHED_CONSTANTS["C"], N0 if N0 is not None else PUBLISHED_CONSTANTS["N0"], A, B, ctx.omega, psi
    )
    return ctx, psi, reduce_multiplier_bound(inp, detail=True)
