"""Iteration of f(x) = (x - gamma)^2 + c: critical orbits, iterate polynomials, discriminants."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly, discriminant

MAX_PARAM_DEPTH = 8  # f_t^n(gamma) has degree 2^(n-1); 2^7 at n = 8


@dataclass(frozen=True)
class QuadMap:
    gamma: Fraction
    c: Fraction

    def __init__(self, gamma, c):
        object.__setattr__(self, "gamma", Fraction(gamma))
        object.__setattr__(self, "c", Fraction(c))

    def __call__(self, x):
        return (x - self.gamma) ** 2 + self.c

    def iterate(self, x, n):
        for _ in range(n):
            x = self(x)
        return x

    def poly(self, var="x"):
        """f as a polynomial in x."""
        x = Poly.x(var)
        return (x - self.gamma) ** 2 + self.c

    def iterate_poly(self, n, var="x"):
        """f^n(x) as a polynomial of degree 2^n."""
        if n < 1:
            raise ValueError("n must be >= 1")
        f = self.poly(var)
        p = f
        for _ in range(n - 1):
            p = (p - self.gamma) ** 2 + self.c
        return p


def critical_orbit(m, n):
    """[f(gamma), f^2(gamma), ..., f^n(gamma)]."""
    if n < 1:
        raise ValueError("depth must be >= 1")
    out = []
    x = m.gamma
    for _ in range(n):
        x = m(x)
        out.append(x)
    return out


def iterate_value_poly(gamma, n, var="t"):
    """f_t^n(gamma) as a polynomial in the parameter t (degree 2^(n-1))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_PARAM_DEPTH:
        raise ValueError(f"depth {n} exceeds the cap {MAX_PARAM_DEPTH}")
    gamma = Fraction(gamma)
    t = Poly.x(var)
    p = t
    for _ in range(n - 1):
        p = (p - gamma) ** 2 + t
    return p


def iterate_discriminant(m, n):
    """disc(f^n); zero exactly when f^n is inseparable."""
    return discriminant(m.iterate_poly(n))


def is_separable_iterate(m, n):
    return m.iterate_poly(n).is_separable()


def check_disc_recursion(m, n):
    """disc(f^n) == +-disc(f^(n-1))^2 * 2^(2^n) * f^n(gamma), exactly.

    Inseparable iterates are not rejected: both sides then vanish together.
    """
    if n < 2:
        raise ValueError("recursion needs n >= 2")
    lhs = iterate_discriminant(m, n)
    prev = iterate_discriminant(m, n - 1)
    rhs = prev**2 * 2 ** (2**n) * m.iterate(m.gamma, n)
    return lhs == rhs or lhs == -rhs
