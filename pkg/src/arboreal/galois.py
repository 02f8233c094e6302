"""Level-by-level maximality certificates for Gal(f^n) from critical-orbit square classes.

Generators of the Kummer span at level n are indexed by orbit depth:
index 1 is -f(gamma) = -c, index j >= 2 is f^j(gamma).  Witnesses are lists
of these indices.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .arith import (
    DEFAULT_BUDGET,
    InexactClassError,
    factor,
    is_rational_square,
    rational_sqrt,
    span_solve,
    square_class,
)
from .dynamics import QuadMap, critical_orbit, iterate_value_poly
from .poly import Poly

MAXIMAL = "Maximal"
NON_MAXIMAL = "NonMaximal"
REDUCIBLE = "Reducible"
UNKNOWN = "Unknown"


class DegenerateError(ValueError):
    """A Kummer generator vanishes, or K_1 = Q; the square-class description does not apply."""


@dataclass(frozen=True)
class LevelCertificate:
    gamma: Fraction
    c: Fraction
    level: int
    status: str
    witness: tuple = ()
    sqrt: Fraction | None = None
    reason: str = ""

    def to_json(self):
        return {
            "gamma": str(self.gamma),
            "c": str(self.c),
            "level": self.level,
            "status": self.status,
            "witness": list(self.witness),
            "sqrt": None if self.sqrt is None else str(self.sqrt),
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            Fraction(obj["gamma"]),
            Fraction(obj["c"]),
            int(obj["level"]),
            obj["status"],
            tuple(obj.get("witness", ())),
            None if obj.get("sqrt") is None else Fraction(obj["sqrt"]),
        )


def g_set(gamma, m):
    """The Kummer generator polynomials G_m in t, 2^m - 1 of them, in recursion order."""
    if not 1 <= m <= 6:
        raise ValueError("g_set supports 1 <= m <= 6")
    t = Poly.x()
    gs = [-t]
    for k in range(2, m + 1):
        fk = iterate_value_poly(gamma, k)
        gs = gs + [fk * g for g in gs] + [fk]
    return gs


def subfield_classes(m, k, budget=DEFAULT_BUDGET, cache=None):
    """Square classes of g(c) for g in G_k; raises DegenerateError if one vanishes or -c is a square."""
    if is_rational_square(-m.c):
        raise DegenerateError(f"-c = {-m.c} is a rational square, so K_1 = Q")
    out = []
    for i, g in enumerate(g_set(m.gamma, k)):
        v = g(m.c)
        if v == 0:
            raise DegenerateError(f"generator {i} ({g}) vanishes at c = {m.c}")
        out.append(square_class(v, budget, cache))
    return out


def _generator_values(orbit, n):
    # index j -> value, for 1 <= j < n
    return {1: -orbit[0], **{j: orbit[j - 1] for j in range(2, n)}}


def _certify_level(m, orbit, n, budget, cache):
    gamma, c = m.gamma, m.c
    if any(v == 0 for v in orbit[:n]):
        depth = next(j for j, v in enumerate(orbit[:n], 1) if v == 0)
        return LevelCertificate(gamma, c, n, REDUCIBLE, reason=f"orbit value f^{depth}(gamma) = 0")
    if n == 1:
        target = -c
        if is_rational_square(target):
            return LevelCertificate(gamma, c, 1, NON_MAXIMAL, (), rational_sqrt(target), "-c is a rational square")
        return LevelCertificate(gamma, c, 1, MAXIMAL)
    target = orbit[n - 1]
    gens = _generator_values(orbit, n)
    order = sorted(gens)
    try:
        classes = [square_class(gens[j], budget, cache) for j in order]
        target_class = square_class(target, budget, cache)
        subset = span_solve(target_class, classes)
    except InexactClassError as exc:
        return LevelCertificate(gamma, c, n, UNKNOWN, reason=str(exc))
    if subset is None:
        return LevelCertificate(gamma, c, n, MAXIMAL)
    witness = tuple(order[i] for i in subset)
    product = target
    for j in witness:
        product *= gens[j]
    root = rational_sqrt(product)
    if root is None:  # pragma: no cover - span_solve soundness guard
        raise AssertionError(f"witness {witness} does not give a square at {m}")
    return LevelCertificate(gamma, c, n, NON_MAXIMAL, witness, root)


def level_status(m, n, budget=DEFAULT_BUDGET, cache=None):
    """Certificate for level n.

    Lower levels are re-checked; if one of them is not Maximal its certificate
    is returned instead, so ``cert.level < n`` signals a failed precondition.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    orbit = critical_orbit(m, n)
    for k in range(1, n + 1):
        cert = _certify_level(m, orbit, k, budget, cache)
        if cert.status != MAXIMAL or k == n:
            return cert
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class SmallIterateResult:
    """small is True/False, or None when a square class stayed inexact."""

    small: bool | None
    trail: tuple
    semantics: str

    def __bool__(self):
        return bool(self.small)


def small_iterate(m, n, budget=DEFAULT_BUDGET, cache=None):
    """Does f have a small n-th iterate (levels < n Maximal, level n not)?

    Exact for n <= 3; for larger n the answer is a certificate of the
    square-class condition only.
    """
    if not 2 <= n <= 6:
        raise ValueError("small_iterate supports 2 <= n <= 6")
    orbit = critical_orbit(m, n)
    trail = []
    semantics = "exact" if n <= 3 else "certificate"
    for k in range(1, n + 1):
        cert = _certify_level(m, orbit, k, budget, cache)
        trail.append(cert)
        if cert.status == UNKNOWN:
            return SmallIterateResult(None, tuple(trail), semantics)
        if k < n and cert.status != MAXIMAL:
            return SmallIterateResult(False, tuple(trail), semantics)
    # a zero orbit value leaves f^n inseparable: degenerate, never small
    small = trail[-1].status == NON_MAXIMAL
    return SmallIterateResult(small, tuple(trail), semantics)


def witness_class_representative(cert, budget=DEFAULT_BUDGET, cache=None):
    """Squarefree d with d*y^2 = f^n(gamma)(c); the class of the witness product."""
    m = QuadMap(cert.gamma, cert.c)
    value = critical_orbit(m, cert.level)[-1]
    cls = square_class(value, budget, cache)
    if not cls.exact:
        raise InexactClassError(f"class of {value} is not exact")
    return cls


def ramification_support_check(m, n, budget=DEFAULT_BUDGET, cache=None):
    """Every prime of d divides 2 * prod_{j<n} f^j(0), where d*y^2 = f^n(0).

    Requires gamma = 0, integral c, and level n NonMaximal with levels below
    Maximal.  Raises InexactClassError when a needed factorization is incomplete.
    """
    if m.gamma != 0 or m.c.denominator != 1:
        raise ValueError("ramification check needs gamma = 0 and integral c")
    cert = level_status(m, n, budget, cache)
    if cert.level != n or cert.status != NON_MAXIMAL:
        raise ValueError(f"level {n} is not certified NonMaximal (got level {cert.level} {cert.status})")
    d = witness_class_representative(cert, budget, cache)
    primes_of_d = set(d.odd_support) | ({2} if d.two_exponent else set())
    orbit = critical_orbit(m, n)
    allowed = {2}
    for v in orbit[: n - 1]:
        r = factor(int(v), budget, cache)
        if not r.complete:
            raise InexactClassError(f"{v} not fully factored")
        allowed |= set(r.factored_part)
    return primes_of_d <= allowed


def certificates_json(trail):
    return json.dumps([c.to_json() for c in trail], indent=2)
