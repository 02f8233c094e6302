"""Rational maps between curve models, composed into chains, with inverses."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..poly import Poly, rational_roots
from .models import CurvePoint


class MapExceptionError(ValueError):
    """The point lies on the exception divisor of a step."""

    def __init__(self, step, name, point):
        super().__init__(f"step {step} ({name}) is undefined at {point}")
        self.step = step
        self.name = name
        self.point = point


@dataclass(frozen=True)
class MapStep:
    """(x, y) -> (fx(x, y), fy(x, y)).

    ``exception`` describes where a denominator vanishes; evaluation there
    raises ZeroDivisionError, which the chain reports as MapExceptionError.
    ``inverse`` maps a target point to the list of all its source preimages.
    """

    name: str
    fx: Callable
    fy: Callable
    exception: str = "none"
    inverse: Callable | None = None

    def __call__(self, P):
        return CurvePoint(self.fx(P.x, P.y), self.fy(P.x, P.y))


@dataclass(frozen=True)
class RationalMapChain:
    name: str
    steps: tuple
    models: tuple = field(default=())  # source, intermediates..., target (optional)

    def __post_init__(self):
        if self.models and len(self.models) != len(self.steps) + 1:
            raise ValueError("models must list the source and every step's target")

    @property
    def source(self):
        return self.models[0] if self.models else None

    @property
    def target(self):
        return self.models[-1] if self.models else None


def apply_map_chain(chain, P):
    """Image of P, or None for a point at infinity.

    When the chain carries models, P is checked on the source and every
    intermediate image on its model.
    """
    if P.is_infinity:
        return None
    if chain.models and not chain.models[0].contains(P):
        raise ValueError(f"{P} is not on the source model {chain.models[0]}")
    for i, step in enumerate(chain.steps):
        try:
            P = step(P)
        except ZeroDivisionError:
            raise MapExceptionError(i, step.name, P) from None
        if chain.models and not chain.models[i + 1].contains(P):
            raise AssertionError(f"step {i} ({step.name}) left the model: {P}")
    return P


def invert_map_chain(chain, Q):
    """Every source point mapping to Q (affine preimages only)."""
    if Q.is_infinity:
        return []
    current = [Q]
    for step in reversed(chain.steps):
        if step.inverse is None:
            raise ValueError(f"step {step.name} has no inverse")
        nxt = []
        for R in current:
            nxt.extend(step.inverse(R))
        current = nxt
    out = []
    for P in current:
        if chain.models and not chain.models[0].contains(P):
            continue
        try:
            if apply_map_chain(chain, P) == Q:
                out.append(P)
        except MapExceptionError:
            continue
    return sorted(set(out), key=lambda P: (P.x, P.y))


def linear_y_inverse(H, a, b, forward):
    """Inverse of a step on y^2 = H(x) whose first output is X = a(x) + b*y.

    Substituting y = (X - a(x)) / b into y^2 = H(x) gives a polynomial in x;
    its rational roots, with the matching y, are filtered by the forward map.
    """

    def inverse(Q):
        X = Q.x
        yx = (Poly.const(X, a.var) - a) / b
        eq = yx * yx - H
        if eq.is_zero():
            raise ValueError(f"the fibre over X = {X} is not finite")
        out = []
        for x in rational_roots(eq):
            P = CurvePoint(x, yx(x))
            try:
                if forward(P) == Q:
                    out.append(P)
            except ZeroDivisionError:
                continue
        return out

    return inverse


def affine_inverse(fx, fy, exception=None):
    """Inverse given as explicit formulas; ``exception(Q)`` true means no preimage."""

    def inverse(Q):
        if exception is not None and exception(Q):
            return []
        try:
            return [CurvePoint(fx(Q.x, Q.y), fy(Q.x, Q.y))]
        except ZeroDivisionError:
            return []

    return inverse
