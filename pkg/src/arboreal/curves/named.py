"""The specific curves and maps used in the small-third-iterate classification.

Labels are ASCII: a trailing ``p`` marks a prime (C3p is C3'), ``scr`` marks a
script letter (Cscr is the genus-two curve y^2 = X^6 + X^4 - 1), and the
``_g1`` suffix marks the curves for the critical point gamma = 1.

Ranks and generators recorded in ``GIVEN`` are inputs, not computed here;
the tests only check them for consistency (generator on the curve, torsion
size, search results).
"""
from __future__ import annotations

from fractions import Fraction

from ..dynamics import iterate_value_poly
from ..poly import Poly
from .group import integral_points_via_generator, torsion
from .maps import MapStep, RationalMapChain, affine_inverse, apply_map_chain, invert_map_chain, linear_y_inverse
from .models import CurvePoint, EvenModel, TwistedModel, Weierstrass

t = Poly.x("t")
x = Poly.x("x")
F = Fraction

_cubic = t**3 + 2 * t**2 + t + 1  # f_t^3(0) / t
_quartic_E2 = (x + 1) * (x**3 + 2 * x**2 + x + 1)


def _even(poly, label):
    return EvenModel(poly, label)


NAMED = {
    # gamma = 0, third iterate
    "E1": TwistedModel(Poly.const(-1), _cubic, "E1"),
    "E1W": Weierstrass(0, -2, 0, 1, -1, label="E1W"),
    "E2": TwistedModel(t + 1, _cubic, "E2"),
    "E2quartic": _even(_quartic_E2, "E2quartic"),
    "E2mid": Weierstrass(3, F(3, 4), 4, -4, -3, label="E2mid"),
    "E": Weierstrass(0, 0, 0, -1, 1, label="E"),
    "C": TwistedModel(-(t + 1), t**4 + 2 * t**3 + t**2 + t, "C"),
    "Chyp": _even(x * (x - 1) * (x**3 - 2 * x**2 + x - 1), "Chyp"),
    "C3": _even(t**4 + 2 * t**3 + t**2 + t, "C3"),
    "C3p": Weierstrass(0, 1, 0, 2, 1, label="C3p"),
    "H": _even(x**6 - 2 * x**4 + x**2 - 1, "H"),
    "Cscr": _even(x**6 + x**4 - 1, "Cscr"),
    "Escr": Weierstrass(0, 1, 0, 0, -1, label="Escr"),
    "Escrp": _even(-(x**3) + x + 1, "Escrp"),
    "Cscrp": _even(-(x - 1) * (x + 1) * (x**6 - 2 * x**4 + 3 * x**2 - 1), "Cscrp"),
    "ED": Weierstrass(0, 2, 0, 3, 1, label="ED"),
    "Ascr": _even(x**6 - 2 * x**4 + 3 * x**2 - 1, "Ascr"),
    "F": Weierstrass(0, -2, 0, 3, -1, label="F"),
    "Bscr": _even((1 - x**2) * (-(x**6) + 2 * x**4 - x**2 + 1), "Bscr"),
    "Uscr": _even(-(x**6) + 2 * x**4 - x**2 + 1, "Uscr"),
    # gamma = 1, third iterate
    "E_g1": _even(t**4 - 2 * t**3 + t**2 + t, "E_g1"),
    "C1_g1": _even(t**6 - 3 * t**5 + 4 * t**4 - 2 * t**3 + t, "C1_g1"),
    "C2_g1": _even(-(t**3) + 2 * t**2 - t - 1, "C2_g1"),
    "C3_g1": _even(-(t**5) + 3 * t**4 - 4 * t**3 + 2 * t**2 - 1, "C3_g1"),
    "Ep_g1": Weierstrass(-2, 0, 2, 0, 0, label="Ep_g1"),
    # fourth iterate, gamma = 0
    "C4": _even(iterate_value_poly(0, 4), "C4"),
    # genus-two quotient for f = x^2 + 3: the printed quintic, and (x - c) f^2(x)
    "B32": _even((x - 3) * (x**4 + 6 * x + 12), "B32"),
    "B32_true": _even((x - 3) * (x**4 + 6 * x**2 + 12), "B32_true"),
}

# Rational points stated for these curves (affine points; searches must agree).
KNOWN_POINTS = {
    "E1": [(-2, 1), (-2, -1), (F(-17, 4), F(-53, 8)), (F(-17, 4), F(53, 8))],
    "E2": [(3, F(7, 2)), (3, F(-7, 2)), (0, 1), (0, -1), (-2, 1), (-2, -1)],
    "C": [(0, 0)],
    "C3": [(0, 0)],
    "C3p": [(0, 1), (0, -1)],
    "Cscr": [(1, 1), (1, -1), (-1, 1), (-1, -1)],
    "Cscrp": [(1, 0), (-1, 0)],
    "Ascr": [(1, 1), (1, -1), (-1, 1), (-1, -1)],
    "F": [(1, 1), (1, -1)],
    "ED": [(0, 1), (0, -1)],
    "Bscr": [(0, 1), (0, -1), (1, 0), (-1, 0)],
    "C1_g1": [(-1, 3), (-1, -3), (0, 0), (1, 1), (1, -1)],
    "C3_g1": [(-1, 3), (-1, -3)],
    "C2_g1": [],
    "C4": [(0, 0), (-1, 0)],
    "E": [(0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1), (3, 5), (3, -5), (5, 11), (5, -11), (56, 419), (56, -419)],
}

# t-coordinates of the two E2 points obtained from the group law; y is recomputed.
E2_REMARK_T = (F(-2, 3), F(6, 19))

# Inputs taken as given: Mordell-Weil ranks and generators.
GIVEN = {
    "E": {"rank": 1, "generator": (1, 1)},
    "E1": {"rank": 1, "generator": (-2, 1)},
    "E2": {"rank": 1},
    "C3p": {"rank": 0},
    "E_g1": {"rank": 1},
}


def curve(label):
    try:
        return NAMED[label]
    except KeyError:
        raise KeyError(f"unknown curve {label!r}; known: {', '.join(sorted(NAMED))}") from None


def known_points(label):
    return [CurvePoint(a, b) for a, b in KNOWN_POINTS.get(label, [])]


# --- map chains ---------------------------------------------------------

def _e2_to_quartic():
    return MapStep(
        "E2 -> quartic: (t, y) -> (t, y(t+1))",
        lambda t_, y: t_,
        lambda t_, y: y * (t_ + 1),
        "none",
        affine_inverse(lambda X, Y: X, lambda X, Y: Y / (X + 1), exception=lambda Q: Q.x == -1),
    )


def _quartic_to_mid():
    fwd_x = lambda x_, y: 2 * (x_ * x_ - y) + 3 * x_  # noqa: E731
    fwd_y = lambda x_, y: x_ * (4 * x_ * x_ + 6 * x_ - 4 * y + F(3, 2))  # noqa: E731
    step = MapStep("quartic -> E2mid: (2(x^2-y)+3x, x(4x^2+6x-4y+3/2))", fwd_x, fwd_y, "none")
    inv = linear_y_inverse(_quartic_E2, 2 * x**2 + 3 * x, -2, step)
    return MapStep(step.name, fwd_x, fwd_y, "none", inv)


def _mid_to_E():
    return MapStep(
        "E2mid -> E: (x+1, y+3x/2+2)",
        lambda x_, y: x_ + 1,
        lambda x_, y: y + F(3, 2) * x_ + 2,
        "none",
        affine_inverse(lambda X, Y: X - 1, lambda X, Y: Y - F(3, 2) * (X - 1) - 2),
    )


E2_CHAIN = RationalMapChain(
    "E2 -> E",
    (_e2_to_quartic(), _quartic_to_mid(), _mid_to_E()),
    (NAMED["E2"], NAMED["E2quartic"], NAMED["E2mid"], NAMED["E"]),
)

C3_CHAIN = RationalMapChain(
    "C3 -> C3p",
    (
        MapStep(
            "(t, y) -> (1/t, y/t^2)",
            lambda t_, y: 1 / t_,
            lambda t_, y: y / (t_ * t_),
            "t = 0",
            affine_inverse(lambda X, Y: 1 / X, lambda X, Y: Y / (X * X)),
        ),
    ),
    (NAMED["C3"], NAMED["C3p"]),
)


def _g1_step():
    fwd_x = lambda t_, y: 2 * (t_ * t_ - y) - 2 * t_  # noqa: E731
    fwd_y = lambda t_, y: t_ * (4 * t_ * t_ - 4 * t_ - 4 * y)  # noqa: E731
    step = MapStep("(t, y) -> (2(t^2-y)-2t, t(4t^2-4t-4y))", fwd_x, fwd_y)
    inv = linear_y_inverse(NAMED["E_g1"].h, 2 * t**2 - 2 * t, -2, step)
    return MapStep(step.name, fwd_x, fwd_y, "none", inv)


G1_CHAIN = RationalMapChain("E_g1 -> Ep_g1", (_g1_step(),), (NAMED["E_g1"], NAMED["Ep_g1"]))

E1_CHAIN = RationalMapChain(
    "E1 -> E1W",
    (MapStep("(t, y) -> (-t, y)", lambda t_, y: -t_, lambda t_, y: y, "none", affine_inverse(lambda X, Y: -X, lambda X, Y: Y)),),
    (NAMED["E1"], NAMED["E1W"]),
)

C_CHAIN = RationalMapChain(
    "C -> Chyp",
    (
        MapStep(
            "(t, y) -> (-t, y(t+1))",
            lambda t_, y: -t_,
            lambda t_, y: y * (t_ + 1),
            "none",
            affine_inverse(lambda X, Y: -X, lambda X, Y: Y / (1 - X), exception=lambda Q: Q.x == 1),
        ),
    ),
    (NAMED["C"], NAMED["Chyp"]),
)

H_CHAIN = RationalMapChain(
    "H -> C3p",
    (MapStep("(x, y) -> (-1/x^2, y/x^3)", lambda a, y: -1 / (a * a), lambda a, y: y / a**3, "x = 0"),),
    (NAMED["H"], NAMED["C3p"]),
)

CSCR_CHAIN = RationalMapChain(
    "Cscr -> Escr",
    (MapStep("(X, y) -> (X^2, y)", lambda a, y: a * a, lambda a, y: y),),
    (NAMED["Cscr"], NAMED["Escr"]),
)

ASCR_CHAIN = RationalMapChain(
    "Ascr -> F",
    (MapStep("(a, v) -> (a^2, v)", lambda a, v: a * a, lambda a, v: v),),
    (NAMED["Ascr"], NAMED["F"]),
)

CHAINS = {c.name: c for c in (E2_CHAIN, C3_CHAIN, G1_CHAIN, E1_CHAIN, C_CHAIN, H_CHAIN, CSCR_CHAIN, ASCR_CHAIN)}


def invert_E2_chain(Q):
    """All affine E2 points mapping to Q on y^2 = x^3 - x + 1."""
    if Q.is_infinity:
        raise ValueError("Q must be affine")
    if not NAMED["E"].contains(Q):
        raise ValueError(f"{Q} is not on {NAMED['E']}")
    return invert_map_chain(E2_CHAIN, Q)


def integral_points_E(N=40):
    return integral_points_via_generator(NAMED["E"], CurvePoint(1, 1), N)


def e2_integer_t(N=40):
    """Integer t with (t, y) in E2(Q), found by retracing the integral points of E."""
    ts = set()
    for Q in integral_points_E(N):
        for P in invert_E2_chain(Q):
            if P.x.denominator == 1:
                ts.add(int(P.x))
    return sorted(ts)


def e1_integral_points(N=40):
    """Integral points of E1 via its integral model y^2 = x^3 - 2x^2 + x - 1 (x = -t)."""
    W = NAMED["E1W"]
    gen = apply_map_chain(E1_CHAIN, CurvePoint(-2, 1))
    out = []
    for Q in integral_points_via_generator(W, gen, N):
        out.extend(invert_map_chain(E1_CHAIN, Q))
    return sorted(set(out), key=lambda P: (P.x, P.y))


def g1_integer_t(N=40):
    """Integer t on E_g1 whose image on Ep_g1 has integral x.

    Ep_g1 has rank one; integral points are collected from multiples of the
    image of (1, 1) plus torsion, then pulled back.
    """
    W = NAMED["Ep_g1"]
    gen = apply_map_chain(G1_CHAIN, CurvePoint(1, 1))
    ts = set()
    for Q in integral_points_via_generator(W, gen, N):
        for P in invert_map_chain(G1_CHAIN, Q):
            if P.x.denominator == 1:
                ts.add(int(P.x))
    return sorted(ts)


def e2_remark_points():
    """The E2 points with the remark t-coordinates, y recomputed on E2 (both signs)."""
    from ..arith import rational_sqrt

    E2 = NAMED["E2"]
    out = []
    for tv in E2_REMARK_T:
        y = rational_sqrt(E2.h(tv) / E2.g(tv))
        if y is None:
            raise AssertionError(f"t = {tv} does not lift to E2(Q)")
        out.extend([CurvePoint(tv, y), CurvePoint(tv, -y)])
    return out
