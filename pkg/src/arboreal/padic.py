"""Formal groups over Q(alpha), alpha^3 + alpha^2 - 1 = 0, reduced modulo 3^k.

Series are computed exactly in Q(alpha) and reduced only at the end, so the
rational denominators 3, 5, 7, ... of log and exp never cost p-adic precision
in intermediate steps.  The prime 3 is inert in Q(alpha) and Z[alpha] is
3-maximal, so the reduction of c0 + c1 alpha + c2 alpha^2 is coefficientwise.

Curves here have the shape y^2 = g3 x^3 + g2 x^2 + g1 x.  With u = 1/x and the
formal parameter z = -x/y one has u = z^2 (g3 + g2 u + g1 u^2), which fixes u
as a power series in z; the invariant differential dx / (2y) equals
(z u' / (2u)) dz, whose integral is the formal logarithm.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

# --- exact cubic field --------------------------------------------------


class QAlpha:
    """c0 + c1*alpha + c2*alpha^2 with alpha^3 = 1 - alpha^2."""

    __slots__ = ("c",)

    def __init__(self, c0=0, c1=0, c2=0):
        self.c = (Fraction(c0), Fraction(c1), Fraction(c2))

    @classmethod
    def alpha(cls):
        return cls(0, 1, 0)

    @staticmethod
    def _lift(v):
        return v if isinstance(v, QAlpha) else QAlpha(v)

    def __add__(self, o):
        o = self._lift(o)
        return QAlpha(*(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return QAlpha(*(-a for a in self.c))

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        a, b = self.c, o.c
        p = [Fraction(0)] * 5
        for i in range(3):
            if a[i]:
                for j in range(3):
                    p[i + j] += a[i] * b[j]
        # alpha^4 = alpha^2 + alpha - 1, alpha^3 = 1 - alpha^2
        c0 = p[0] + p[3] - p[4]
        c1 = p[1] + p[4]
        c2 = p[2] - p[3] + p[4]
        return QAlpha(c0, c1, c2)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return (1 / self) ** (-k)
        out, base = QAlpha(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _matrix(self):
        cols = [self, self * QAlpha.alpha(), self * QAlpha(0, 0, 1)]
        return [[cols[j].c[i] for j in range(3)] for i in range(3)]

    def inverse(self):
        if self == 0:
            raise ZeroDivisionError("inverse of 0 in Q(alpha)")
        M = [row + [Fraction(int(i == 0))] for i, row in enumerate(self._matrix())]
        for col in range(3):
            piv = next(r for r in range(col, 3) if M[r][col] != 0)
            M[col], M[piv] = M[piv], M[col]
            inv = 1 / M[col][col]
            M[col] = [v * inv for v in M[col]]
            for r in range(3):
                if r != col and M[r][col]:
                    f = M[r][col]
                    M[r] = [a - f * b for a, b in zip(M[r], M[col])]
        return QAlpha(M[0][3], M[1][3], M[2][3])

    def __truediv__(self, o):
        return self * self._lift(o).inverse()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inverse()

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = QAlpha(o)
        return isinstance(o, QAlpha) and self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def norm(self):
        M = self._matrix()
        return (
            M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
        )

    def valuation(self, p):
        """p-adic valuation, valid for p inert with Z[alpha] p-maximal."""
        vals = [_vp(c, p) for c in self.c if c]
        if not vals:
            return None
        return min(vals)

    def __repr__(self):
        return f"QAlpha({self.c[0]}, {self.c[1]}, {self.c[2]})"

    def __str__(self):
        terms = []
        for c, mono in zip(reversed(self.c), ("alpha^2", "alpha", "")):
            if c:
                terms.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(terms) if terms else "0"


def _vp(q, p):
    q = Fraction(q)
    if q == 0:
        return None
    v = 0
    n, d = q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


# --- residue ring elements with precision -------------------------------


class PrecisionError(ArithmeticError):
    """Not enough p-adic precision for the requested operation."""


@dataclass(frozen=True)
class RingElement:
    """c0 + c1 alpha + c2 alpha^2 in Z/p^prec [alpha], alpha^3 + alpha^2 - 1 = 0."""

    coeffs: tuple
    p: int = 3
    prec: int = 4

    def __post_init__(self):
        m = self.p**self.prec
        object.__setattr__(self, "coeffs", tuple(int(c) % m for c in self.coeffs))

    @classmethod
    def from_qalpha(cls, a, p=3, prec=4):
        out = []
        for c in a.c:
            if c.denominator % p == 0:
                raise PrecisionError(f"{a} is not {p}-integral")
            out.append(c.numerator * pow(c.denominator, -1, p**prec))
        return cls(tuple(out), p, prec)

    def _check(self, o):
        if not isinstance(o, RingElement):
            return RingElement((int(o), 0, 0), self.p, self.prec)
        if o.p != self.p:
            raise ValueError("mismatched primes")
        return o

    def valuation(self):
        """Valuation, capped at prec for elements that vanish mod p^prec."""
        v = self.prec
        for c in self.coeffs:
            if c:
                k = 0
                while c % self.p == 0:
                    c //= self.p
                    k += 1
                v = min(v, k)
        return v

    def is_zero(self):
        return not any(self.coeffs)

    def __add__(self, o):
        o = self._check(o)
        prec = min(self.prec, o.prec)
        return RingElement(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)), self.p, prec)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(tuple(-a for a in self.coeffs), self.p, self.prec)

    def __sub__(self, o):
        return self + (-self._check(o))

    def __mul__(self, o):
        o = self._check(o)
        prec = min(self.prec + o.valuation(), o.prec + self.valuation())
        q = QAlpha(*self.coeffs) * QAlpha(*o.coeffs)
        return RingElement(tuple(int(c) for c in q.c), self.p, prec)

    __rmul__ = __mul__

    def divide_by_p(self):
        """Exact division by p; one digit of precision is lost."""
        if any(c % self.p for c in self.coeffs):
            raise PrecisionError("element is not divisible by p")
        if self.prec < 1:
            raise PrecisionError("no precision left")
        return RingElement(tuple(c // self.p for c in self.coeffs), self.p, self.prec - 1)

    def __eq__(self, o):
        if isinstance(o, (int, QAlpha)):
            o = RingElement.from_qalpha(QAlpha._lift(o), self.p, self.prec) if isinstance(o, QAlpha) else self._check(o)
        if not isinstance(o, RingElement):
            return NotImplemented
        m = self.p ** min(self.prec, o.prec)
        return all((a - b) % m == 0 for a, b in zip(self.coeffs, o.coeffs))

    def __hash__(self):
        return hash((self.coeffs, self.p, self.prec))

    def __str__(self):
        c0, c1, c2 = self.coeffs
        return f"{c2}*alpha^2 + {c1}*alpha + {c0} (mod {self.p}^{self.prec})"


# --- truncated power series ---------------------------------------------


class TruncSeries:
    """sum a_i z^i + O(z^prec), coefficients in any commutative ring with 0 and 1."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs, prec):
        cs = list(coeffs)[:prec]
        zero = 0 * cs[0] if cs else 0
        cs += [zero] * (prec - len(cs))
        self.coeffs = cs
        self.prec = prec

    def __getitem__(self, i):
        return self.coeffs[i]

    def __add__(self, o):
        prec = min(self.prec, o.prec)
        return TruncSeries([a + b for a, b in zip(self.coeffs[:prec], o.coeffs[:prec])], prec)

    def __neg__(self):
        return TruncSeries([-a for a in self.coeffs], self.prec)

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c):
        return TruncSeries([c * a for a in self.coeffs], self.prec)

    def __mul__(self, o):
        if not isinstance(o, TruncSeries):
            return self.scale(o)
        prec = min(self.prec, o.prec)
        zero = 0 * self.coeffs[0]
        out = [zero] * prec
        for i in range(prec):
            a = self.coeffs[i]
            if a == 0:
                continue
            for j in range(prec - i):
                out[i + j] = out[i + j] + a * o.coeffs[j]
        return TruncSeries(out, prec)

    __rmul__ = __mul__

    def valuation(self):
        for i, a in enumerate(self.coeffs):
            if a != 0:
                return i
        return self.prec

    def inverse(self):
        """1 / self; needs an invertible constant term."""
        a0 = self.coeffs[0]
        inv0 = 1 / a0
        out = [inv0]
        for k in range(1, self.prec):
            s = 0 * a0
            for j in range(1, k + 1):
                s = s + self.coeffs[j] * out[k - j]
            out.append(-s * inv0)
        return TruncSeries(out, self.prec)

    def shift_down(self, k):
        """Divide by z^k; the first k coefficients must vanish."""
        if any(a != 0 for a in self.coeffs[:k]):
            raise ValueError("series not divisible by z^k")
        return TruncSeries(self.coeffs[k:], self.prec - k)

    def derivative(self):
        return TruncSeries([i * a for i, a in enumerate(self.coeffs)][1:], self.prec - 1)

    def integral(self):
        zero = 0 * self.coeffs[0]
        return TruncSeries([zero] + [a / (i + 1) for i, a in enumerate(self.coeffs)], self.prec + 1)

    def compose(self, inner):
        """self(inner) with inner(0) = 0, by Horner."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must have zero constant term")
        prec = min(self.prec, inner.prec) if inner.valuation() == 1 else inner.prec
        acc = TruncSeries([self.coeffs[-1]], prec)
        for a in reversed(self.coeffs[:-1]):
            acc = acc * inner + TruncSeries([a], prec)
        return acc

    def __call__(self, x):
        acc = 0 * x
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def reversion(self):
        """Compositional inverse for a series z + O(z^2) (Newton-free, term by term)."""
        if self.coeffs[0] != 0 or self.coeffs[1] != 1:
            raise ValueError("reversion needs z + O(z^2)")
        one = self.coeffs[1]
        zero = 0 * one
        inv = TruncSeries([zero, one], self.prec)
        for k in range(2, self.prec):
            err = self.compose(inv)
            # self(inv) = z + e_k z^k + ...; correct inv by -e_k z^k
            cs = list(inv.coeffs)
            cs[k] = cs[k] - err.coeffs[k]
            inv = TruncSeries(cs, self.prec)
        return inv

    def __repr__(self):
        return f"TruncSeries({self.coeffs}, O(z^{self.prec}))"


# --- formal group of y^2 = g3 x^3 + g2 x^2 + g1 x -----------------------


def inverse_x_series(g1, g2, g3, prec):
    """u = 1/x as a series in z = -x/y, from u = z^2 (g3 + g2 u + g1 u^2)."""
    zero = 0 * (g1 + g2 + g3)
    z2 = TruncSeries([zero, zero, zero + 1], prec)
    u = TruncSeries([zero], prec)
    for _ in range(prec // 2 + 1):
        u = z2 * (TruncSeries([g3], prec) + u.scale(g2) + (u * u).scale(g1))
    return u


def formal_log(g1, g2, g3, prec=9):
    """log(z) + O(z^prec), normalised to start with z."""
    u = inverse_x_series(g1, g2, g3, prec + 2)
    v = u.shift_down(2)  # u = z^2 v, v(0) = g3
    # z u' / (2u) = 1 + z v' / (2 v)
    dv = v.derivative()
    ratio = dv * TruncSeries(v.coeffs[: dv.prec], dv.prec).inverse()
    zero = 0 * g3
    z_ratio = TruncSeries([zero] + ratio.coeffs, ratio.prec + 1)
    integrand = TruncSeries([zero + 1], z_ratio.prec) + z_ratio.scale(Fraction(1, 2))
    return TruncSeries(integrand.integral().coeffs, prec)


def formal_exp(g1, g2, g3, prec=9):
    """Compositional inverse of formal_log."""
    return formal_log(g1, g2, g3, prec).reversion()


# --- the curve E_2 over Q(alpha) ----------------------------------------

ALPHA = QAlpha.alpha()
# y^2 = (1 - alpha) x (x^2 + (alpha + 1) x + (alpha^2 + alpha)), expanded:
# g3 = 1 - alpha, g2 = (1 - alpha)(1 + alpha) = 1 - alpha^2,
# g1 = (1 - alpha)(alpha^2 + alpha) = alpha^2 + alpha - 1 (using alpha^3 = 1 - alpha^2).
# The factor 1 - alpha is a unit (norm 1), so no further rescaling is needed.
G3 = 1 - ALPHA
G2 = 1 - ALPHA * ALPHA
G1 = ALPHA * ALPHA + ALPHA - 1


class AlphaCurve:
    """y^2 = g3 x^3 + g2 x^2 + g1 x over Q(alpha), exact group law."""

    def __init__(self, g1=G1, g2=G2, g3=G3):
        from .curves.models import Weierstrass

        self.g1, self.g2, self.g3 = g1, g2, g3
        # (x, y) -> (g3 x, g3 y) maps to the monic model Y^2 = X^3 + g2 X^2 + g1 g3 X
        zero = QAlpha(0)
        self.monic = Weierstrass(zero, g2, zero, g1 * g3, zero)

    def contains(self, P):
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        return y * y == ((self.g3 * x + self.g2) * x + self.g1) * x

    def _to_monic(self, P):
        from .curves.models import CurvePoint

        return P if P.is_infinity else CurvePoint(P.x * self.g3, P.y * self.g3)

    def _from_monic(self, P):
        from .curves.models import CurvePoint

        return P if P.is_infinity else CurvePoint(P.x / self.g3, P.y / self.g3)

    def add(self, P, Q):
        return self._from_monic(self.monic.add(self._to_monic(P), self._to_monic(Q)))

    def negate(self, P):
        from .curves.models import CurvePoint

        return P if P.is_infinity else CurvePoint(P.x, -P.y)

    def multiply(self, k, P):
        return self._from_monic(self.monic.multiply(k, self._to_monic(P)))


def _pt(x, y):
    from .curves.models import CurvePoint

    return CurvePoint(QAlpha._lift(x), QAlpha._lift(y))


def base_point():
    return _pt(1, 1)


def z_exact(P):
    """z = -x/y in Q(alpha); 0 at the identity."""
    if P.is_infinity:
        return QAlpha(0)
    return -P.x / P.y


def z_of_point(P, p=3, prec=4):
    """z(P) mod p^prec for P in the kernel of reduction."""
    z = z_exact(P)
    if z == 0:
        return RingElement((0, 0, 0), p, prec)
    v = z.valuation(p)
    if v is None or v < 1:
        raise ValueError(f"{P} is not in the kernel of reduction (v(z) = {v})")
    return RingElement.from_qalpha(z, p, prec)


@dataclass(frozen=True)
class MultipleExpansion:
    """Polynomials in n (coefficient lists, lowest degree first) mod p^prec."""

    log_z: RingElement
    z_n: list
    phi: tuple  # (phi0, phi1, phi2), each a list of ints mod p^prec

    def phi_poly(self, i):
        return self.phi[i]


def _multiple_series(zQ, g1, g2, g3, terms):
    """Exact z_n = exp(n log z) as a series in the formal variable n."""
    L = formal_log(g1, g2, g3, terms)(zQ)
    zero = QAlpha(0)
    nL = TruncSeries([zero, L], terms)
    z_n = formal_exp(g1, g2, g3, terms).compose(nL)
    return L, z_n


def _split_alpha(series, p, prec):
    m = p**prec
    phis = ([], [], [])
    for a in series.coeffs:
        r = RingElement.from_qalpha(a, p, prec)
        for i in range(3):
            phis[i].append(r.coeffs[i] % m)
    return tuple(phis)


def x_inverse_of_multiple(zQ, prec=4, p=3, terms=14, g=(G1, G2, G3)):
    """1/x(nQ) = phi0(n) + phi1(n) alpha + phi2(n) alpha^2 mod p^prec.

    ``zQ`` is the exact z-coordinate of Q in Q(alpha) (positive valuation).
    """
    zQ = QAlpha._lift(zQ)
    if zQ.valuation(p) is None or zQ.valuation(p) < 1:
        raise ValueError("zQ must lie in the maximal ideal")
    g1, g2, g3 = g
    L, z_n = _multiple_series(zQ, g1, g2, g3, terms)
    u = inverse_x_series(g1, g2, g3, terms)
    inv_x = u.compose(z_n)
    z_red = [RingElement.from_qalpha(c, p, prec) for c in z_n.coeffs]
    return MultipleExpansion(RingElement.from_qalpha(L, p, prec), z_red, _split_alpha(inv_x, p, prec))


def x_of_translate(x0, y0, zQ, prec=4, p=3, terms=14, g=(G1, G2, G3)):
    """x(S + nQ) mod p^prec as (phi0, phi1, phi2) in n, where S = (x0, y0) is not in the kernel.

    With T = nQ = (1/u, -1/(u z)) the chord slope is (-1/z - y0 u) / (1 - x0 u),
    and x(S + T) = (lambda^2 - g2) / g3 - x0 - 1/u.  Everything is multiplied
    by z^2 to stay within power series.
    """
    g1, g2, g3 = g
    x0, y0 = QAlpha._lift(x0), QAlpha._lift(y0)
    zQ = QAlpha._lift(zQ)
    _, z_n = _multiple_series(zQ, g1, g2, g3, terms)
    N = terms + 4
    u = inverse_x_series(g1, g2, g3, N)
    zero = QAlpha(0)
    zs = TruncSeries([zero, QAlpha(1)], N)
    one = TruncSeries([QAlpha(1)], N)
    # z * lambda = (-1 - y0 u z) / (1 - x0 u)
    zl = (-one - (u * zs).scale(y0)) * (one - u.scale(x0)).inverse()
    # z^2 / u = 1 / v with u = z^2 v
    v = u.shift_down(2)
    z2_over_u = TruncSeries(v.coeffs, v.prec).inverse()
    z2x3 = ((zl * zl) - TruncSeries([zero, zero, g2], N)).scale(1 / g3) - TruncSeries([zero, zero, x0], N) - TruncSeries(
        z2_over_u.coeffs, N - 2
    )
    x3 = z2x3.shift_down(2)
    # constant term of x3 is x0; substitute z = z_n(n)
    tail = TruncSeries([zero] + x3.coeffs[1:], x3.prec)
    series = tail.compose(TruncSeries(z_n.coeffs[: min(z_n.prec, x3.prec)], min(z_n.prec, x3.prec)))
    series = TruncSeries([series.coeffs[0] + x0] + series.coeffs[1:], series.prec)
    return _split_alpha(series, p, prec)


# --- Strassmann ---------------------------------------------------------


def _val_int(c, p, cap):
    if c == 0:
        return cap
    v = 0
    while c % p == 0 and v < cap:
        c //= p
        v += 1
    return v


def strassmann_zero_bound(coeffs, p=3, prec=4):
    """Strassmann bound for sum a_j n^j with a_j known mod p^prec.

    Returns the last index j of minimal valuation, provided that valuation is
    below prec (so every later coefficient is strictly smaller p-adically);
    returns None when no dominant coefficient is visible at this precision.
    """
    m = p**prec
    vals = [_val_int(int(c) % m, p, prec) for c in coeffs]
    if not vals:
        return None
    vmin = min(vals)
    if vmin >= prec:
        return None
    return max(j for j, v in enumerate(vals) if v == vmin)


def root_multiplicity_at_zero(coeffs, p=3, prec=4):
    m = p**prec
    k = 0
    while k < len(coeffs) and int(coeffs[k]) % m == 0:
        k += 1
    return k


def small_integer_roots(coeffs, bound=50):
    """Integers |n| <= bound where sum a_j n^j vanishes exactly (coefficients as integer lifts)."""
    return [n for n in range(-bound, bound + 1) if sum(int(c) * n**j for j, c in enumerate(coeffs)) == 0]


# --- the full reproduction ----------------------------------------------


def chabauty_report(prec=4, p=3):
    """All the mod-3^4 quantities of the elliptic Chabauty computation."""
    C = AlphaCurve()
    P = base_point()
    Q = C.multiply(3, P)
    zQ = z_exact(Q)
    exp_a = x_inverse_of_multiple(zQ, prec, p)
    cases = {}
    for name, S in (("b", _pt(0, 0)), ("c+", P), ("c-", C.negate(P))):
        phis = x_of_translate(S.x, S.y, zQ, prec, p)
        cases[name] = phis
    return {
        "Q": Q,
        "z": z_of_point(Q, p, prec),
        "log_z": exp_a.log_z,
        "z_n": exp_a.z_n,
        "phi": exp_a.phi,
        "cases": cases,
    }
