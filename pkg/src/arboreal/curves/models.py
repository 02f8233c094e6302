"""Curve models over Q (or any exact field) and their points."""
from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction

from ..arith import is_rational_square
from ..poly import Poly


def _coerce(v):
    if isinstance(v, (int, str)):
        return Fraction(v)
    return v


@dataclass(frozen=True)
class CurvePoint:
    """Affine point (x, y), or a point at infinity when x is None.

    Infinity branches: "single" for Weierstrass and odd-degree models, "+"/"-"
    for the two points of an even-degree model with square leading coefficient.
    """

    x: object = None
    y: object = None
    branch: str = "single"

    def __post_init__(self):
        if self.x is not None:
            object.__setattr__(self, "x", _coerce(self.x))
            object.__setattr__(self, "y", _coerce(self.y))
            object.__setattr__(self, "branch", "")

    @classmethod
    def infinity(cls, branch="single"):
        if branch not in ("single", "+", "-"):
            raise ValueError(f"bad infinity branch {branch!r}")
        return cls(None, None, branch)

    @property
    def is_infinity(self):
        return self.x is None

    def is_integral(self):
        return (
            not self.is_infinity
            and Fraction(self.x).denominator == 1
            and Fraction(self.y).denominator == 1
        )

    def height(self):
        if self.is_infinity:
            return 0
        x = Fraction(self.x)
        return max(abs(x.numerator), x.denominator)

    def __str__(self):
        if self.is_infinity:
            return "inf" if self.branch == "single" else f"inf{self.branch}"
        return f"({self.x}, {self.y})"

    def to_json(self):
        if self.is_infinity:
            return {"infinity": self.branch}
        return [str(self.x), str(self.y)]


INFINITY = CurvePoint.infinity()


class Weierstrass:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6.

    Coefficients may live in any exact field (Fractions by default); the
    arithmetic only uses field operations and comparison with zero.
    """

    def __init__(self, a1=0, a2=0, a3=0, a4=0, a6=0, label=""):
        self.a = tuple(_coerce(v) for v in (a1, a2, a3, a4, a6))
        self.label = label

    @classmethod
    def short(cls, a4, a6, label=""):
        return cls(0, 0, 0, a4, a6, label)

    a1 = property(lambda self: self.a[0])
    a2 = property(lambda self: self.a[1])
    a3 = property(lambda self: self.a[2])
    a4 = property(lambda self: self.a[3])
    a6 = property(lambda self: self.a[4])

    @property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def c4(self):
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @property
    def c6(self):
        b2, b4, b6, _ = self.b_invariants
        return -(b2**3) + 36 * b2 * b4 - 216 * b6

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self):
        return self.c4**3 / self.discriminant

    def is_nonsingular(self):
        return self.discriminant != 0

    def is_integral(self):
        return all(isinstance(v, Fraction) and v.denominator == 1 for v in self.a)

    def lhs(self, x, y):
        return y * y + self.a1 * x * y + self.a3 * y

    def rhs(self, x):
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def contains(self, P):
        if P.is_infinity:
            return P.branch == "single"
        return self.lhs(P.x, P.y) == self.rhs(P.x)

    def infinity_points(self):
        return [INFINITY]

    def negate(self, P):
        if P.is_infinity:
            return P
        return CurvePoint(P.x, -P.y - self.a1 * P.x - self.a3)

    def add(self, P, Q):
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        a1, a2, a3, a4, a6 = self.a
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            if y1 + y2 + a1 * x2 + a3 == 0:
                return INFINITY
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
            nu = (-(x1**3) + a4 * x1 + 2 * a6 - a3 * y1) / (2 * y1 + a1 * x1 + a3)
        else:
            lam = (y2 - y1) / (x2 - x1)
            nu = (y1 * x2 - y2 * x1) / (x2 - x1)
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return CurvePoint(x3, y3)

    def multiply(self, k, P):
        if k < 0:
            return self.multiply(-k, self.negate(P))
        result, addend = INFINITY, P
        while k:
            if k & 1:
                result = self.add(result, addend)
            addend = self.add(addend, addend)
            k >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Weierstrass) and self.a == other.a

    def __hash__(self):
        return hash(self.a)

    def __str__(self):
        a1, a2, a3, a4, a6 = self.a
        lhs = "y^2"
        if a1:
            lhs += f" + ({a1})*x*y"
        if a3:
            lhs += f" + ({a3})*y"
        rhs = str(Poly((a6, a4, a2, 1), "x")) if all(isinstance(v, Fraction) for v in self.a) else f"x^3 + {a2}x^2 + {a4}x + {a6}"
        return f"{lhs} = {rhs}"

    def __repr__(self):
        return f"Weierstrass({', '.join(str(v) for v in self.a)}, label={self.label!r})"


def _infinity_branches(G):
    if G.degree % 2:
        return [INFINITY]
    if is_rational_square(G.lc):
        return [CurvePoint.infinity("+"), CurvePoint.infinity("-")]
    return []


class TwistedModel:
    """g(t) y^2 = h(t)."""

    def __init__(self, g, h, label=""):
        self.g = g if isinstance(g, Poly) else Poly.const(g)
        self.h = h if isinstance(h, Poly) else Poly.const(h)
        if self.h.is_zero() or self.g.is_zero():
            raise ValueError("g and h must be nonzero")
        self.label = label

    def product(self):
        """G = g*h: the model is birational to Y^2 = G(t) via Y = g(t) y."""
        return self.g * self.h

    def contains(self, P):
        if P.is_infinity:
            return P in self.infinity_points()
        return self.g(P.x) * P.y * P.y == self.h(P.x)

    def infinity_points(self):
        return _infinity_branches(self.product())

    def genus(self):
        G = self.product()
        sqfree = G // G.gcd(G.derivative())
        return max((sqfree.degree - 1) // 2, 0)

    def __eq__(self, other):
        return type(other) is type(self) and (self.g, self.h) == (other.g, other.h)

    def __hash__(self):
        return hash((self.g, self.h))

    def __str__(self):
        g = self.g
        if g == 1:
            lhs = "y^2"
        elif g == -1:
            lhs = "-y^2"
        elif g.is_constant():
            lhs = f"{g[0]}*y^2"
        else:
            lhs = f"({g})*y^2"
        return f"{lhs} = {self.h}"

    def __repr__(self):
        return f"{type(self).__name__}({self}, label={self.label!r})"


class EvenModel(TwistedModel):
    """y^2 = h(t)."""

    def __init__(self, h, label=""):
        super().__init__(Poly.const(1, getattr(h, "var", "t")), h, label)


def on_model(M, P):
    return M.contains(P)


# --- parsing -------------------------------------------------------------

class _Bivariate(dict):
    """{(i, j): coeff} for coeff * x^i * y^j; just enough for parsing."""

    def __add__(self, other):
        out = _Bivariate(self)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return _Bivariate({k: v for k, v in out.items() if v != 0})

    def __neg__(self):
        return _Bivariate({k: -v for k, v in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = _Bivariate()
        for (i, j), a in self.items():
            for (k, l), b in other.items():
                out[(i + k, j + l)] = out.get((i + k, j + l), 0) + a * b
        return _Bivariate({k: v for k, v in out.items() if v != 0})

    def constant(self):
        if any(k != (0, 0) for k in self):
            return None
        return self.get((0, 0), Fraction(0))


def _eval_node(node, xvar):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, xvar)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return _Bivariate({(0, 0): Fraction(node.value)}) if node.value else _Bivariate()
    if isinstance(node, ast.Name):
        if node.id == "y":
            return _Bivariate({(0, 1): Fraction(1)})
        if node.id in ("x", "t") and node.id == xvar:
            return _Bivariate({(1, 0): Fraction(1)})
        raise ValueError(f"unexpected symbol {node.id!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, xvar)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left = _eval_node(node.left, xvar)
        if isinstance(node.op, ast.Pow):
            right = _eval_node(node.right, xvar).constant()
            if right is None or right.denominator != 1 or right < 0:
                raise ValueError("exponents must be nonnegative integers")
            out = _Bivariate({(0, 0): Fraction(1)})
            for _ in range(int(right)):
                out = out * left
            return out
        right = _eval_node(node.right, xvar)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            d = right.constant()
            if not d:
                raise ValueError("division only by nonzero constants")
            return _Bivariate({k: v / d for k, v in left.items()})
    raise ValueError(f"unsupported syntax: {ast.dump(node)}")


def parse_curve(text, label=""):
    """Parse "y^2=x^3-x+1", "-y^2=t^3+2*t^2+t+1", "(t+1)*y^2=h(t)" or a long Weierstrass form.

    A monic cubic right-hand side with y^2 on the left gives a Weierstrass
    model; other shapes give EvenModel / TwistedModel in the variable used.
    """
    if text.count("=") != 1:
        raise ValueError("curve must contain exactly one '='")
    xvar = "t" if "t" in text.replace("sqrt", "") else "x"
    lhs_s, rhs_s = (s.strip().replace("^", "**") for s in text.split("="))
    try:
        lhs = _eval_node(ast.parse(lhs_s, mode="eval"), xvar)
        rhs = _eval_node(ast.parse(rhs_s, mode="eval"), xvar)
    except SyntaxError as exc:
        raise ValueError(f"cannot parse curve {text!r}") from exc
    F = lhs - rhs  # F(x, y) = 0
    if any(j > 2 for (_, j) in F):
        raise ValueError("degree in y must be at most 2")

    def col(j):
        return Poly([F.get((i, j), 0) for i in range(1 + max([i for (i, jj) in F if jj == j], default=-1))], xvar)

    g, lin, h = col(2), col(1), -col(0)
    if g.is_zero():
        raise ValueError("no y^2 term")
    if not lin.is_zero():
        if g != 1 and g != -1:
            raise ValueError("mixed y terms need a constant y^2 coefficient")
        s = g[0]
        if h.degree != 3 or h.lc != s:
            raise ValueError("long Weierstrass form needs x^3 on the right")
        a1, a3 = lin[1] / s, lin[0] / s
        if lin.degree > 1:
            raise ValueError("y-linear coefficient must have degree <= 1")
        return Weierstrass(a1, h[2] / s, a3, h[1] / s, h[0] / s, label)
    if g == 1 and h.degree == 3 and h.lc == 1 and xvar == "x":
        return Weierstrass(0, h[2], 0, h[1], h[0], label)
    if g == 1:
        return EvenModel(h, label)
    return TwistedModel(g, h, label)


def parse_point(text):
    """Parse "(p/q, r/s)" or "inf" / "inf+" / "inf-"."""
    s = text.strip()
    if s.startswith("inf"):
        return CurvePoint.infinity(s[3:] or "single")
    s = s.strip("()[] ")
    parts = [p.strip() for p in s.split(",")]
    if len(parts) != 2:
        raise ValueError(f"cannot parse point {text!r}")
    return CurvePoint(Fraction(parts[0]), Fraction(parts[1]))
