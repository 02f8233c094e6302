"""Group law, Lutz-Nagell torsion, and integral points from a known generator."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from ..arith import factor, primes_up_to
from ..poly import Poly, rational_roots
from .models import INFINITY, CurvePoint, Weierstrass

MAZUR_BOUND = 12


def _require_on(W, *points):
    for P in points:
        if not W.contains(P):
            raise ValueError(f"point {P} is not on {W}")


def group_law(W, P, Q):
    """P + Q on W (chord and tangent, identity at infinity)."""
    if not W.is_nonsingular():
        raise ValueError(f"{W} is singular")
    _require_on(W, P, Q)
    return W.add(P, Q)


def scalar_mul(W, k, P):
    """k * P by double-and-add; negative k negates first."""
    if not W.is_nonsingular():
        raise ValueError(f"{W} is singular")
    _require_on(W, P)
    return W.multiply(k, P)


def integral_model(W):
    """(W', u) with W' integral and (x, y) -> (u^2 x, u^3 y) mapping W to W'."""
    u = 1
    for i, a in zip((1, 2, 3, 4, 6), W.a):
        den = Fraction(a).denominator
        if den == 1:
            continue
        for p, e in factor(den).factored_part.items():
            need = -(-e // i)  # ceil(e / i)
            cur = 0
            while u % p ** (cur + 1) == 0:
                cur += 1
            if need > cur:
                u *= p ** (need - cur)
    scaled = [a * u**i for i, a in zip((1, 2, 3, 4, 6), W.a)]
    return Weierstrass(*scaled, label=W.label), u


def _scale_point(P, u):
    if P.is_infinity:
        return P
    return CurvePoint(P.x * u * u, P.y * u**3)


def _short_model(W):
    """y^2 = x^3 - 27 c4 x - 54 c6, with the map (x, y) -> (36x + 3b2, 108(2y + a1 x + a3))."""
    return Weierstrass.short(-27 * W.c4, -54 * W.c6)


def _to_short(W, P):
    if P.is_infinity:
        return P
    b2 = W.b_invariants[0]
    return CurvePoint(36 * P.x + 3 * b2, 108 * (2 * P.y + W.a1 * P.x + W.a3))


def _from_short(W, P):
    if P.is_infinity:
        return P
    b2 = W.b_invariants[0]
    x = (P.x - 3 * b2) / 36
    y = (P.y / 108 - W.a1 * x - W.a3) / 2
    return CurvePoint(x, y)


def _square_divisors(n):
    """All y > 0 with y^2 | n."""
    ys = [1]
    for p, e in factor(n).factored_part.items():
        ys = [y * p**k for y in ys for k in range(e // 2 + 1)]
    return sorted(ys)


def _finite_order(S, P):
    """Order of P on integral short model S if it is at most the Mazur bound, else None."""
    Q = P
    for k in range(1, MAZUR_BOUND + 1):
        if Q.is_infinity:
            return k
        if not Q.is_integral():
            return None
        Q = S.add(Q, P)
    return None


def count_weierstrass_mod_p(W, p):
    """#E(F_p) for odd p of good reduction, by direct enumeration."""
    if p == 2:
        raise ValueError("odd primes only")
    a = [Fraction(v) for v in W.a]
    if any(v.denominator % p == 0 for v in a):
        raise ValueError(f"{W} has a denominator divisible by {p}")
    a1, a2, a3, a4, a6 = (v.numerator * pow(v.denominator, -1, p) % p for v in a)
    disc = Fraction(W.discriminant)
    if disc.numerator % p == 0:
        raise ValueError(f"bad reduction at {p}")
    total = 1
    for x in range(p):
        # (2y + a1 x + a3)^2 = 4 rhs + (a1 x + a3)^2
        d = (4 * (((x + a2) * x + a4) * x + a6) + (a1 * x + a3) ** 2) % p
        total += 1 if d == 0 else (2 if pow(d, (p - 1) // 2, p) == 1 else 0)
    return total


def good_primes(W, count=5, start=3):
    disc = Fraction(W.discriminant)
    out = []
    for p in primes_up_to(10_000):
        if p < start or p == 2:
            continue
        if disc.numerator % p == 0 or any(Fraction(v).denominator % p == 0 for v in W.a):
            continue
        out.append(p)
        if len(out) == count:
            break
    return out


def torsion_bound(W, nprimes=5):
    """gcd of #E(F_p) over the first ``nprimes`` odd good primes."""
    g = 0
    for p in good_primes(W, nprimes):
        g = gcd(g, count_weierstrass_mod_p(W, p))
    return g


def torsion(W):
    """Rational torsion subgroup of W, infinity first.

    Denominators are cleared first; candidates come from Lutz-Nagell on the
    short model (y = 0 or y^2 | disc) and are kept when their order is at most
    the Mazur bound.  The size is checked against #E(F_p) for several good p.
    """
    if not W.is_nonsingular():
        raise ValueError(f"{W} is singular")
    Wi, u = integral_model(W)
    S = _short_model(Wi)
    A, B = S.a4, S.a6
    D = int(4 * A**3 + 27 * B * B)
    found = [INFINITY]
    ys = [0] + _square_divisors(D)
    for y in ys:
        cubic = Poly((B - y * y, A, 0, 1), "x")
        for x in rational_roots(cubic):
            if x.denominator != 1:
                continue
            for yy in {y, -y}:
                P = CurvePoint(x, yy)
                if _finite_order(S, P) is not None:
                    found.append(P)
    points = []
    for P in found:
        Q = _from_short(Wi, P)
        if not Q.is_infinity:
            Q = CurvePoint(Q.x / (u * u), Q.y / u**3)
        points.append(Q)
    points = [INFINITY] + sorted(set(points[1:]), key=lambda P: (P.x, P.y))
    bound = torsion_bound(Wi)
    if bound % len(points):
        raise AssertionError(f"torsion size {len(points)} does not divide #E(F_p) gcd {bound}")
    return points


def integral_points_via_generator(W, gen, N):
    """Integral points among +-k*gen + T for 0 <= k <= N and T in the torsion subgroup."""
    _require_on(W, gen)
    if N <= 0:
        return []
    tors = torsion(W)
    out = {T for T in tors if T.is_integral()}
    P = INFINITY
    for _ in range(N):
        P = W.add(P, gen)
        for Q in (P, W.negate(P)):
            for T in tors:
                R = W.add(Q, T)
                if R.is_integral():
                    out.add(R)
    return sorted(out, key=lambda P: (P.x, P.y))
