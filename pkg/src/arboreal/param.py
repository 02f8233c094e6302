"""Parametrizing curves C_n, V_n, membership classification, scans, and the gamma-surface."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import DEFAULT_BUDGET, rational_sqrt
from .curves.models import CurvePoint, EvenModel, TwistedModel
from .curves.named import NAMED
from .dynamics import QuadMap, critical_orbit, iterate_value_poly
from .galois import REDUCIBLE, g_set, small_iterate
from .poly import Poly

# --- C_n and V_n --------------------------------------------------------


def build_C_n(gamma, n):
    """y^2 = f_t^n(gamma)."""
    if not 1 <= n <= 6:
        raise ValueError("build_C_n supports 1 <= n <= 6")
    return EvenModel(iterate_value_poly(gamma, n), f"C_{n}")


def build_V_n(gamma, n):
    """C_n followed by g(t) y^2 = f_t^n(gamma) for g in G_{n-1}: 2^(n-1) models."""
    if not 2 <= n <= 4:
        raise ValueError("build_V_n supports 2 <= n <= 4")
    h = iterate_value_poly(gamma, n)
    out = [build_C_n(gamma, n)]
    for i, g in enumerate(g_set(gamma, n - 1)):
        out.append(TwistedModel(g, h, f"V_{n}[{i}]"))
    return out


def _square_part(g):
    """(s, r) with g = s^2 r, r squarefree up to its constant, via Yun's factorization."""
    one = Poly.const(1, g.var)
    if g.is_constant():
        return one, g
    lc = g.lc
    f = g.monic()
    d = f.derivative()
    a = f.gcd(d)
    b = f // a
    c = d // a - b.derivative()
    s, r, i = one, one, 1
    while b.degree >= 1:
        factor = b.gcd(c)
        b, c = b // factor, c // factor - (b // factor).derivative()
        s = s * factor ** (i // 2)
        if i % 2:
            r = r * factor
        i += 1
    return s, r * lc


@dataclass(frozen=True)
class NormalizedComponent:
    """A V_n component after removing square factors of g and common factors of g and h.

    Points move by (t, y) -> (t, y_factor(t) * y); the result lies on
    ``model`` wherever ``removed(t)`` is nonzero.  ``even`` is the same curve
    as Y^2 = g h, reached by Y = g(t) * y.
    """

    raw: object
    model: object
    even: object
    y_factor: Poly
    removed: Poly
    label: str

    def transport(self, P):
        return CurvePoint(P.x, self.y_factor(P.x) * P.y)

    def to_even(self, P):
        return CurvePoint(P.x, self.model.g(P.x) * P.y)


def _match_label(model, even):
    for name, named in NAMED.items():
        if isinstance(named, TwistedModel):
            if named == model or (named.g == 1 and named.h == even.h):
                return name
    return ""


def normalize_component(M):
    g, h = M.g, M.h
    s, g1 = _square_part(g)
    d = g1.gcd(h)
    if d.degree >= 1:
        g1, h1 = g1 // d, h // d
    else:
        d, h1 = Poly.const(1, g.var), h
    # keep the sign in g; make g1 primitive up to squares of constants
    lc = g1.lc if g1.is_constant() else Fraction(1)
    if g1.is_constant():
        cls_rep = rational_sqrt(abs(lc))
        if cls_rep is not None:
            s = s * cls_rep
            g1 = g1 / (cls_rep * cls_rep)
    if g1 == 1:
        model = EvenModel(h1)
    else:
        model = TwistedModel(g1, h1)
    even = EvenModel(g1 * h1)
    label = _match_label(model, even) or M.label
    model.label = label
    even.label = label + "_even" if label else ""
    return NormalizedComponent(M, model, even, s, d, label)


def normalized_V_n(gamma, n):
    return [normalize_component(M) for M in build_V_n(gamma, n)]


# --- membership ---------------------------------------------------------


@dataclass
class MembershipRecord:
    gamma: Fraction
    c: Fraction
    depth: int
    in_S: bool | None
    witness_curve: str = ""
    y: Fraction | None = None
    trail: tuple = ()
    reason: str = ""

    def to_json(self):
        return {
            "gamma": str(self.gamma),
            "c": str(self.c),
            "depth": self.depth,
            "in_S": self.in_S,
            "witness_curve": self.witness_curve,
            "y": None if self.y is None else str(self.y),
            "reason": self.reason,
            "trail": [cert.to_json() for cert in self.trail],
        }

    @classmethod
    def from_json(cls, obj):
        from .galois import LevelCertificate

        return cls(
            Fraction(obj["gamma"]),
            Fraction(obj["c"]),
            int(obj["depth"]),
            obj["in_S"],
            obj.get("witness_curve", ""),
            None if obj.get("y") is None else Fraction(obj["y"]),
            tuple(LevelCertificate.from_json(c) for c in obj.get("trail", ())),
            obj.get("reason", ""),
        )


def records_to_json(records):
    return json.dumps([r.to_json() for r in records], indent=2)


def records_to_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["c", "in_S", "witness_curve", "y"])
    for r in records:
        w.writerow([str(r.c), "unknown" if r.in_S is None else str(r.in_S).lower(), r.witness_curve, "" if r.y is None else str(r.y)])
    return buf.getvalue()


def _witness_polynomial(gamma, witness):
    """Product of generator polynomials for orbit-depth indices (1 -> -t, j -> f_t^j(gamma))."""
    t = Poly.x()
    out = Poly.const(1)
    for j in witness:
        out = out * (-t if j == 1 else iterate_value_poly(gamma, j))
    return out


def _locate(gamma, c, witness, n):
    """Find the V_n component containing a point over c, with its normalized y."""
    g_w = _witness_polynomial(gamma, witness) if witness else Poly.const(1)
    for comp in normalized_V_n(gamma, n):
        if comp.raw.g != g_w:
            continue
        gc, hc = comp.raw.g(c), comp.raw.h(c)
        if gc == 0:
            continue
        y = rational_sqrt(hc / gc)
        if y is None:
            continue
        P = CurvePoint(c, y)
        if comp.removed(c) == 0:
            return comp.label, None
        Q = comp.transport(P)
        if not comp.model.contains(Q):
            raise AssertionError(f"transport of {P} left {comp.model}")
        return comp.label, abs(Q.y)
    return "", None


def classify(gamma, c, depth=3, budget=DEFAULT_BUDGET, cache=None):
    """Is c in S_gamma^(depth)?  Exact for depth <= 3 (see galois.small_iterate)."""
    gamma, c = Fraction(gamma), Fraction(c)
    m = QuadMap(gamma, c)
    res = small_iterate(m, depth, budget, cache)
    trail = res.trail
    last = trail[-1]
    if res.small is None:
        return MembershipRecord(gamma, c, depth, None, trail=trail, reason=f"level {last.level} unknown: {last.reason}")
    if not res.small:
        if any(cert.status == REDUCIBLE for cert in trail) or 0 in critical_orbit(m, depth):
            reason = "degenerate: a critical orbit value vanishes"
        elif last.level < depth:
            reason = f"level {last.level} non-maximal"
        else:
            reason = f"level {depth} maximal"
        return MembershipRecord(gamma, c, depth, False, trail=trail, reason=reason)
    label, y = _locate(gamma, c, last.witness, depth)
    return MembershipRecord(gamma, c, depth, True, label, y, trail, f"level {depth} non-maximal, levels below maximal")


def _classify_chunk(gamma, cs, depth, budget):
    out = []
    for c in cs:
        r = classify(gamma, c, depth, budget)
        if r.in_S is not False:
            out.append(r)
    return out


def scan(gamma, lo, hi, depth=3, workers=1, budget=DEFAULT_BUDGET, cache=None):
    """Classify every integer in [lo, hi]; returns (in-S records, unknown records), ordered by c."""
    cs = list(range(lo, hi + 1))
    if not cs:
        return [], []
    if workers <= 1:
        found = []
        for c in cs:
            r = classify(gamma, c, depth, budget, cache)
            if r.in_S is not False:
                found.append(r)
    else:
        size = max(1, len(cs) // (4 * workers))
        chunks = [cs[i : i + size] for i in range(0, len(cs), size)]
        found = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_classify_chunk, [gamma] * len(chunks), chunks, [depth] * len(chunks), [budget] * len(chunks)):
                found.extend(part)
    found.sort(key=lambda r: r.c)
    return [r for r in found if r.in_S], [r for r in found if r.in_S is None]


def scan_integers(gamma, lo, hi, depth=3, workers=1, budget=DEFAULT_BUDGET, cache=None):
    """Records with in_S true for integers c in [lo, hi]."""
    return scan(gamma, lo, hi, depth, workers, budget, cache)[0]


# --- S via the group law ------------------------------------------------

EXCLUDED_T = (Fraction(0), Fraction(-2))


def enumerate_S_via_generators(gens=None, N=3, check=True):
    """t-coordinates of +-k*gen (k <= N) on E1 and E2, minus {0, -2}, each certified small.

    ``gens`` maps "E1" / "E2" to a point on that curve.  E1 works on its
    Weierstrass model x = -t; E2 goes through the chain to y^2 = x^3 - x + 1
    and back, with the group law on E2 whose identity is the point over
    t = -1 (see e2_origin_image).
    """
    from .curves.maps import apply_map_chain, invert_map_chain
    from .curves.named import E1_CHAIN, E2_CHAIN, invert_E2_chain

    if gens is None:
        gens = {"E1": CurvePoint(-2, 1), "E2": default_E2_generator()}
    found = {}
    for label, P in gens.items():
        if label == "E1":
            chain, W, origin = E1_CHAIN, NAMED["E1W"], None
            back = lambda Q: invert_map_chain(E1_CHAIN, Q)  # noqa: E731
        elif label == "E2":
            chain, W, origin = E2_CHAIN, NAMED["E"], e2_origin_image()
            back = invert_E2_chain
        else:
            raise ValueError(f"unsupported curve {label!r}")
        G = apply_map_chain(chain, P)
        if origin is not None:
            G = W.add(G, W.negate(origin))
        Q = None
        for k in range(1, N + 1):
            Q = G if Q is None else W.add(Q, G)
            for R in (Q, W.negate(Q)):
                if origin is not None:
                    R = W.add(R, origin)
                if R.is_infinity:
                    continue
                for S in back(R):
                    if S.x not in EXCLUDED_T:
                        found.setdefault(S.x, label)
    out = sorted(found.items(), key=lambda kv: (max(abs(kv[0].numerator), kv[0].denominator), kv[0]))
    if check:
        for tv, label in out:
            if not small_iterate(QuadMap(0, tv), 3).small:
                raise AssertionError(f"t = {tv} from {label} is not certified small")
    return out


def e2_origin_image():
    """Image on y^2 = x^3 - x + 1 of the E2 point over t = -1 (where y is infinite).

    Taking that point as the identity of E2 makes (t, y) -> (t, -y) the
    negation map.  On the quartic model it is (-1, 0).
    """
    from .curves.named import E2_CHAIN

    P = CurvePoint(-1, 0)
    for step in E2_CHAIN.steps[1:]:
        P = step(P)
    return P


def default_E2_generator():
    """The E2 point over the generator (1, 1) of y^2 = x^3 - x + 1."""
    from .curves.named import invert_E2_chain

    pre = invert_E2_chain(CurvePoint(1, 1))
    if not pre:
        raise AssertionError("(1, 1) has no affine preimage on E2")
    return pre[0]


# --- the gamma-surface --------------------------------------------------

g = Poly.x("g")
F = Fraction

A2 = F(144, 13) * g**2 - F(147, 13) * g + F(67, 52)
A4 = F(6912, 169) * g**4 - F(14112, 169) * g**3 + F(8811, 169) * g**2 - F(4635, 338) * g + F(6003, 2704)
A6 = (
    F(110592, 2197) * g**6
    - F(338688, 2197) * g**5
    + F(384336, 2197) * g**4
    - F(228889, 2197) * g**3
    + F(365399, 8788) * g**2
    - F(307667, 35152) * g
    + F(169073, 140608)
)
SECTION_X = -2 * g**2 + 2 * g


@dataclass(frozen=True)
class SurfaceFiber:
    gamma: Fraction
    a2: Fraction
    a4: Fraction
    a6: Fraction

    def weierstrass(self):
        from .curves.models import Weierstrass

        return Weierstrass(0, self.a2, 0, self.a4, self.a6, label=f"E_gamma={self.gamma}")


def surface_fiber(gamma):
    gamma = Fraction(gamma)
    return SurfaceFiber(gamma, A2(gamma), A4(gamma), A6(gamma))


def section_residual():
    """x^3 + a2 x^2 + a4 x + a6 at x = -2 gamma^2 + 2 gamma, as a polynomial in gamma."""
    x = SECTION_X
    return x**3 + A2 * x**2 + A4 * x + A6


def section_residual_at(gamma):
    """The same residual by direct evaluation of the fibre, an independent path."""
    fib = surface_fiber(gamma)
    x = SECTION_X(Fraction(gamma))
    return ((x + fib.a2) * x + fib.a4) * x + fib.a6


def c3_gamma_base_point(gamma):
    """(0, gamma^2 - gamma) on y^2 = f_t^3(gamma): at t = 0 the value is (gamma^2 - gamma)^2."""
    gamma = Fraction(gamma)
    return CurvePoint(0, gamma * gamma - gamma)


def c3_gamma_model(gamma):
    return EvenModel(iterate_value_poly(gamma, 3), f"C3_gamma={gamma}")


@dataclass
class SurfaceReport:
    residual: Poly
    residual_is_zero: bool
    base_point_holds: bool
    printed_base_point_holds: bool
    samples: list = field(default_factory=list)

    def to_json(self):
        return {
            "section_residual": str(self.residual),
            "residual_is_zero": self.residual_is_zero,
            "base_point_(0,gamma^2-gamma)_on_C3gamma": self.base_point_holds,
            "base_point_(0,gamma^2)_on_C3gamma": self.printed_base_point_holds,
            "samples": [{"gamma": str(gm), "a2": str(a), "a4": str(b), "a6": str(c)} for gm, a, b, c in self.samples],
        }


def surface_report(sample_gammas=(2, 3, Fraction(1, 2), -1, Fraction(5, 7))):
    """Residual of the section, and which base point lies on y^2 = f_t^3(gamma) at t = 0."""
    r = section_residual()
    gam = Poly.x("g")
    # f_{gamma,0}(x) = (x - gamma)^2: orbit of gamma is 0, gamma^2, (gamma^2 - gamma)^2
    f2 = gam**2
    f3 = (f2 - gam) ** 2
    samples = [(Fraction(v), A2(Fraction(v)), A4(Fraction(v)), A6(Fraction(v))) for v in sample_gammas]
    return SurfaceReport(r, r.is_zero(), f3 == (gam**2 - gam) ** 2, f3 == gam**4, samples)
