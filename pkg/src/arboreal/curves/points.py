"""Point counts mod p, quadratic twists, and bounded-height rational point search."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import gcd, isqrt

from ..arith import is_rational_square, rational_sqrt, square_class
from ..poly import Poly
from .group import count_weierstrass_mod_p
from .models import CurvePoint, EvenModel, TwistedModel, Weierstrass


class BadReductionError(ValueError):
    pass


def _mod_p_coeffs(G, p):
    out = []
    for c in G.coeffs:
        if c.denominator % p == 0:
            raise BadReductionError(f"coefficient {c} has a denominator divisible by {p}")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return out


def _separable_mod_p(cs, p):
    # gcd(F, F') over F_p has degree 0
    def trim(a):
        while a and a[-1] == 0:
            a.pop()
        return a

    def polymod(a, b):
        a = a[:]
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] = (a[shift + i] - c * bc) % p
            trim(a)
            if not a:
                break
        return a

    a = trim(cs[:])
    b = trim([(i * c) % p for i, c in enumerate(cs)][1:])
    if not b:
        return False
    while b:
        a, b = b, polymod(a, b)
    return len(a) == 1


def count_points_mod_p(M, p):
    """#M(F_p) on the smooth projective model.

    Twisted and even models are counted as Y^2 = g(t) h(t); the points at
    infinity are one for odd degree, and two or none for even degree depending
    on whether the leading coefficient is a square mod p.
    """
    if p == 2:
        raise ValueError("p must be odd")
    if isinstance(M, Weierstrass):
        try:
            return count_weierstrass_mod_p(M, p)
        except ValueError as exc:
            raise BadReductionError(str(exc)) from exc
    G = M.product()
    cs = _mod_p_coeffs(G, p)
    if cs[-1] % p == 0:
        raise BadReductionError(f"leading coefficient vanishes mod {p}")
    if not _separable_mod_p(cs, p):
        raise BadReductionError(f"{G} is not separable mod {p}")
    total = 0
    for t in range(p):
        v = 0
        for c in reversed(cs):
            v = (v * t + c) % p
        total += 1 if v == 0 else (2 if pow(v, (p - 1) // 2, p) == 1 else 0)
    deg = len(cs) - 1
    if deg % 2:
        total += 1
    elif pow(cs[-1], (p - 1) // 2, p) == 1:
        total += 2
    return total


def _squarefree_rational(q):
    cls = square_class(q)
    return Fraction(cls.representative())


def quadratic_twist(M, d):
    """Twist by squarefree d: y^2 = h becomes d y^2 = h.

    Constant twisting factors are reduced modulo squares, so twisting twice by
    the same d gives back the original model.
    """
    d = Fraction(d)
    if d == 0:
        raise ValueError("d must be nonzero")
    label = f"{M.label}^({d})" if M.label else ""
    if isinstance(M, Weierstrass):
        if d == 1:
            return M
        b2, b4, b6, _ = M.b_invariants
        # complete the square, then y^2 = x^3 + d a2 x^2 + d^2 a4 x + d^3 a6
        a2, a4, a6 = b2 / 4, b4 / 2, b6 / 4
        return Weierstrass(0, d * a2, 0, d * d * a4, d**3 * a6, label)
    if M.g.is_constant():
        g = _squarefree_rational(M.g[0] * d)
        if g == 1:
            return EvenModel(M.h, label or M.label)
        return TwistedModel(Poly.const(g, M.h.var), M.h, label)
    return TwistedModel(M.g * d, M.h, label)


def _search_stripe(M, H, qs):
    out = []
    if isinstance(M, Weierstrass):
        for q in qs:
            for p in range(-H, H + 1):
                if gcd(p, q) != 1:
                    continue
                x = Fraction(p, q)
                b = M.a1 * x + M.a3
                disc = b * b + 4 * M.rhs(x)
                r = rational_sqrt(disc)
                if r is None:
                    continue
                for y in sorted({(-b + r) / 2, (-b - r) / 2}):
                    out.append(CurvePoint(x, y))
        return out
    g, h = M.g, M.h
    G = g * h
    cont, ints = G.primitive_integer()
    deg = len(ints) - 1
    D = deg + (deg % 2)
    for q in qs:
        for p in range(-H, H + 1):
            if gcd(p, q) != 1:
                continue
            t = Fraction(p, q)
            gt = g(t)
            if gt == 0:
                # vertical fibre: a whole line when h(t) also vanishes; skipped
                continue
            V = 0
            for i, c in enumerate(ints):
                if c:
                    V += c * p**i * q ** (D - i)
            val = cont * V  # = G(t) * q^D, q^D a square
            if not is_rational_square(val):
                continue
            Y = rational_sqrt(val) / Fraction(q) ** (D // 2)
            for y in sorted({Y / gt, -Y / gt}):
                out.append(CurvePoint(t, y))
    return out


def _point_key(P):
    x = Fraction(P.x)
    return (P.height(), x.denominator, abs(x.numerator), x.numerator, P.y)


def rational_point_search(M, H, workers=1):
    """All affine points with x = p/q, max(|p|, q) <= H, sorted by height.

    Deterministic for any worker count: denominators are split into stripes
    and the merged output is sorted.
    """
    if H < 1:
        raise ValueError("height bound must be >= 1")
    qs = list(range(1, H + 1))
    if workers <= 1:
        found = _search_stripe(M, H, qs)
    else:
        stripes = [qs[i::workers] for i in range(workers)]
        found = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_search_stripe, [M] * workers, [H] * workers, stripes):
                found.extend(part)
    return sorted(set(found), key=_point_key)
