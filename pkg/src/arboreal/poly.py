"""Dense univariate polynomials with exact rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def _frac(c):
    return c if isinstance(c, Fraction) else Fraction(c)


class Poly:
    """Polynomial over Q, coefficients stored low degree first.

    >>> t = Poly.x()
    >>> (t**2 + t)**2 + t
    Poly(t^4 + 2*t^3 + t^2 + t)
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=(), var="t"):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def x(cls, var="t"):
        return cls((0, 1), var)

    @classmethod
    def const(cls, c, var="t"):
        return cls((c,), var)

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        return Poly((other,), self.var)

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,))
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = _frac(other)
            return Poly([c * other for c in self.coeffs], self.var)
        if not self.coeffs or not other.coeffs:
            return Poly((), self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result, base = Poly((1,), self.var), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, c):
        c = _frac(c)
        return Poly([a / c for a in self.coeffs], self.var)

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        q = [Fraction(0)] * max(len(rem) - dq, 0)
        inv = 1 / other.lc
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv
            if c:
                q[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Poly(q, self.var), Poly(rem[:dq], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner):
        acc = Poly((), inner.var)
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def derivative(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def monic(self):
        return self / self.lc if self.coeffs else self

    def gcd(self, other):
        a, b = self, self._lift(other)
        while b:
            a, b = b, a % b
        return a.monic()

    def is_separable(self):
        return self.gcd(self.derivative()).degree == 0

    def primitive_integer(self):
        """(content, integer coefficient list) with self == content * poly(list)."""
        if not self.coeffs:
            return Fraction(0), []
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), [v // g for v in ints]

    def homogeneous_value(self, p, q, degree=None):
        """q^degree * self(p/q) as an exact integer-friendly value (default degree = deg self)."""
        d = self.degree if degree is None else degree
        total = Fraction(0)
        for i, c in enumerate(self.coeffs):
            if c:
                total += c * p**i * q ** (d - i)
        return total

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if mono:
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            else:
                body = str(abs(c))
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


def resultant(a, b):
    """Res(a, b) by the Euclidean algorithm over Q."""
    if a.is_zero() or b.is_zero():
        return Fraction(0)
    sign = 1
    result = Fraction(1)
    while True:
        m, n = a.degree, b.degree
        if n == 0:
            return sign * result * b.lc**m
        r = a % b
        if r.is_zero():
            return Fraction(0)
        if (m * n) % 2:
            sign = -sign
        result *= b.lc ** (m - r.degree)
        a, b = b, r


def discriminant(p):
    """(-1)^(d(d-1)/2) Res(p, p') / lc(p)."""
    if p.is_zero():
        raise ValueError("discriminant of the zero polynomial")
    d = p.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    if d == 1:
        return Fraction(1)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lc


def _squarefree(p):
    g = p.gcd(p.derivative())
    return p if g.degree < 1 else p // g


def rational_roots(p):
    """Distinct rational roots of p, ascending.

    Degrees 1 and 2 are solved exactly.  Higher degrees locate the roots of
    the squarefree part numerically, at a precision that separates every
    candidate of the form k / lc, and keep a candidate only after exact
    evaluation; no factoring of coefficients is needed.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has every root")
    roots = set()
    _, ints = p.primitive_integer()
    while ints and ints[0] == 0:
        roots.add(Fraction(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return sorted(roots)
    q = _squarefree(Poly(ints, p.var))
    _, ints = q.primitive_integer()
    q = Poly(ints, p.var)
    if q.degree == 1:
        roots.add(Fraction(-ints[0], ints[1]))
    elif q.degree == 2:
        from .arith import rational_sqrt

        c, b, a = ints
        r = rational_sqrt(Fraction(b * b - 4 * a * c))
        if r is not None:
            roots.update({(-b + r) / (2 * a), (-b - r) / (2 * a)})
    else:
        roots.update(_rational_roots_numeric(q, ints))
    return sorted(roots)


def _rational_roots_numeric(q, ints):
    import mpmath

    lc = ints[-1]
    digits = max(len(str(abs(c))) for c in ints)
    dps = 2 * digits + 30
    with mpmath.workdps(dps):
        approx = mpmath.polyroots(list(reversed(ints)), maxsteps=50 + 10 * dps, extraprec=2 * dps)
        out = set()
        for z in approx:
            if abs(mpmath.im(z)) > mpmath.mpf(10) ** (-digits - 5) * (1 + abs(z)):
                continue
            cand = Fraction(int(mpmath.nint(mpmath.re(z) * lc)), lc)
            if q(cand) == 0:
                out.add(cand)
    return out
