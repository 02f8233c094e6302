"""Reproduction suites.

Each acceptance check is a function returning a :class:`CheckResult` made of
named sub-checks (observed value against expected value).  Suites group the
checks by the result they reproduce; ``run_suite("all")`` runs every one.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .curves import INFINITY, NAMED, CurvePoint, count_points_mod_p, on_model, rational_point_search, torsion
from .curves.maps import apply_map_chain
from .curves.named import E1_CHAIN, e2_integer_t, e2_remark_points, g1_integer_t, integral_points_E, known_points
from .curves.group import integral_points_via_generator
from .dynamics import QuadMap, check_disc_recursion, critical_orbit

F = Fraction


@dataclass
class CheckResult:
    number: int
    title: str
    checks: list = field(default_factory=list)  # (name, ok, observed, expected)
    seconds: float = 0.0

    @property
    def passed(self):
        return all(ok for _, ok, _, _ in self.checks)

    def add(self, name, observed, expected, ok=None):
        if ok is None:
            ok = observed == expected
        self.checks.append((name, bool(ok), observed, expected))
        return ok

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} [{self.number:2d}] {self.title} ({self.seconds:.2f}s)"

    def failures(self):
        return [f"    {n}: observed {o!r}, expected {e!r}" for n, ok, o, e in self.checks if not ok]

    def to_json(self):
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "checks": [{"name": n, "passed": ok, "observed": str(o), "expected": str(e)} for n, ok, o, e in self.checks],
        }


def _pts(pairs):
    return {CurvePoint(a, b) for a, b in pairs}


# --- criteria -------------------------------------------------------------


def criterion_1(threads=1):
    from .param import scan

    r = CheckResult(1, "integers c in [-10^4, 10^4] with a small third iterate (gamma = 0)")
    t0 = time.perf_counter()
    hits, unknown = scan(0, -10_000, 10_000, depth=3, workers=threads)
    elapsed = time.perf_counter() - t0
    r.add("in-S set", [int(h.c) for h in hits], [3])
    r.add("unknown results", len(unknown), 0)
    r.add("runtime < 60 s", round(elapsed, 2), "< 60", elapsed < 60)
    return r


def criterion_2(threads=1):
    r = CheckResult(2, "integral points of y^2 = x^3 - x + 1 and integer t on E2")
    expected = _pts([(0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1), (3, 5), (3, -5), (5, 11), (5, -11), (56, 419), (56, -419)])
    found = set(integral_points_E(40))
    r.add("integral points from +-k(1,1), k <= 40", sorted((p.x, p.y) for p in found), sorted((p.x, p.y) for p in expected), found == expected)
    r.add("integer t retraced to E2", e2_integer_t(40), [-2, 3])
    return r


def criterion_3(threads=1):
    r = CheckResult(3, "integral points of E1 from multiples of (-2, 1)")
    W = NAMED["E1W"]
    gen = apply_map_chain(E1_CHAIN, CurvePoint(-2, 1))
    found = set(integral_points_via_generator(W, gen, 40))
    images = {gen, W.negate(gen)}
    r.add("integral points on the integral model", sorted((p.x, p.y) for p in found), sorted((p.x, p.y) for p in images), found == images)
    return r


def criterion_4(threads=1):
    r = CheckResult(4, "torsion by Lutz-Nagell")
    T = torsion(NAMED["C3p"])
    r.add("order on y^2 = x^3 + x^2 + 2x + 1", len(T), 3)
    r.add("affine torsion points", {(p.x, p.y) for p in T if not p.is_infinity}, {(0, 1), (0, -1)})
    r.add("torsion of y^2 = x^3 - x + 1", torsion(NAMED["E"]), [INFINITY])
    return r


def criterion_5(threads=1):
    r = CheckResult(5, "listed points lie on their curves")
    listed = {
        "E1": [(-2, 1), (F(-17, 4), F(-53, 8))],
        "E2": [(3, F(7, 2))] + [(p.x, p.y) for p in e2_remark_points()],
        "Cscr": [(1, 1), (1, -1), (-1, 1), (-1, -1)],
        "C": [(0, 0)],
        "C1_g1": [(-1, 3), (-1, -3), (0, 0), (1, 1), (1, -1)],
        "C3_g1": [(-1, 3), (-1, -3)],
        "C4": [(0, 0), (-1, 0)],
    }
    for label, pairs in listed.items():
        M = NAMED[label]
        bad = [pq for pq in pairs if not on_model(M, CurvePoint(*pq))]
        r.add(f"points on {label}", bad, [])
    return r


SEARCH_LABELS = ("C", "Cscr", "Ascr", "Bscr", "C1_g1", "C2_g1", "C3_g1", "C4")


def criterion_6(threads=1, height=100):
    r = CheckResult(6, f"point search to height {height} stays inside the stated sets")
    for label in SEARCH_LABELS:
        found = set(rational_point_search(NAMED[label], height, workers=threads))
        stated = set(known_points(label))
        extra = sorted((p.x, p.y) for p in found - stated)
        r.add(f"{label}: points outside the stated set", extra, [])
    return r


def criterion_7(threads=1, samples=100, seed=2024):
    r = CheckResult(7, "discriminant recursion on random (gamma, c)")
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        gamma = F(rng.randint(-12, 12), rng.randint(1, 6))
        c = F(rng.randint(-30, 30), rng.randint(1, 6))
        n = rng.randint(2, 4)
        if not check_disc_recursion(QuadMap(gamma, c), n):
            bad.append((gamma, c, n))
    r.add(f"{samples} samples, n <= 4", bad, [])
    return r


def _is_square(q):
    q = F(q)
    if q < 0:
        return False
    a, b = q.numerator, q.denominator
    return math.isqrt(a) ** 2 == a and math.isqrt(b) ** 2 == b


def oracle_small_iterate(gamma, c, n):
    """Brute force over subset products of the level generators."""
    orbit = critical_orbit(QuadMap(gamma, c), n)
    if 0 in orbit:
        return False
    gens = [-F(c)] + orbit[1:]

    def maximal(k):
        # level k fails when gens[k-1] times a subset of gens[:k-1] is a square
        lower = gens[: k - 1]
        for size in range(len(lower) + 1):
            for sub in combinations(lower, size):
                if _is_square(math.prod(sub, start=gens[k - 1])):
                    return False
        return True

    return all(maximal(k) for k in range(1, n)) and not maximal(n)


def criterion_8(threads=1, bound=50):
    from .galois import small_iterate

    r = CheckResult(8, "small_iterate agrees with the subset-product oracle")
    bad = []
    for gamma in (0, 1):
        for c in range(-bound, bound + 1):
            for n in (2, 3):
                got = small_iterate(QuadMap(gamma, c), n).small
                if got != oracle_small_iterate(gamma, c, n):
                    bad.append((gamma, c, n, got))
    r.add(f"|c| <= {bound}, gamma in {{0, 1}}, n <= 3", bad, [])
    return r


def _poly_mod(coeffs, m, length):
    out = [int(v) % m for v in coeffs[:length]]
    return out + [0] * (length - len(out))


def criterion_9(threads=1):
    from .padic import chabauty_report, root_multiplicity_at_zero, strassmann_zero_bound

    r = CheckResult(9, "3-adic computation on the alpha-curve")
    m = 3**4
    rep = chabauty_report()
    r.add("z(3 P0) = 3(5a^2 + 20a + 9)", rep["z"].coeffs, (27 % m, 60 % m, 15 % m))
    zn = [tuple(e.coeffs) for e in rep["z_n"]]
    zn += [(0, 0, 0)] * (5 - len(zn))
    r.add("z_n has no terms beyond n^4", [c for c in zn[5:] if c != (0, 0, 0)], [])
    r.add("z_n = (15a^2 + 60a + 18) n + 72 n^3", zn[:5], [(0, 0, 0), (18, 60, 15), (0, 0, 0), (72, 0, 0), (0, 0, 0)])
    phi2 = rep["phi"][2]
    r.add("phi_2 has no terms beyond n^4", [v for v in _poly_mod(phi2, m, len(phi2))[5:] if v], [])
    r.add("phi_2 = 72 n^2 + 54 n^4", _poly_mod(phi2, m, 5), [0, 0, 72, 0, 54])
    r.add("Strassmann bound for phi_2", strassmann_zero_bound(phi2), 2)
    r.add("phi_2 vanishes to order 2 at n = 0", root_multiplicity_at_zero(phi2), 2)
    for name, phis in rep["cases"].items():
        series = phis[2]
        bound = strassmann_zero_bound(series)
        mult = root_multiplicity_at_zero(series)
        r.add(f"case {name}: only n = 0", (bound, mult), "bound == multiplicity at 0", bound is not None and bound == mult)
    return r


def criterion_10(threads=1):
    from .analytic import PUBLISHED_CONSTANTS, multiplier_bound_pipeline

    r = CheckResult(10, "real period, elliptic log and the reduced multiplier bound")
    t0 = time.perf_counter()
    ctx, psi, red = multiplier_bound_pipeline()
    elapsed = time.perf_counter() - t0
    omega = float(ctx.omega)
    psi = float(psi)
    r.add("omega_1 within 5e-4", round(omega, 6), PUBLISHED_CONSTANTS["omega1"], abs(omega - PUBLISHED_CONSTANTS["omega1"]) <= 5e-4)
    r.add("psi((1,1)) within 5e-4", round(psi, 6), PUBLISHED_CONSTANTS["psi_P"], abs(psi - PUBLISHED_CONSTANTS["psi_P"]) <= 5e-4)
    r.add("N1 in [40, 50]", red.N1, "[40, 50]", 40 <= red.N1 <= 50)
    r.add("runtime < 5 s", round(elapsed, 3), "< 5", elapsed < 5)
    return r


TWIST_DS = (1, -1, 2, -2, 3, -3, 6, -6)


def criterion_11(threads=1):
    from .curves import quadratic_twist

    r = CheckResult(11, "point counts of the genus-two quotient and its twists over F_5")
    M = NAMED["B32"]
    r.add("#B(F_5)", count_points_mod_p(M, 5), 5)
    counts = {d: count_points_mod_p(quadratic_twist(M, d), 5) for d in TWIST_DS}
    r.add("twists by d | 6 have at most 7 points", counts, "all <= 7", all(v <= 7 for v in counts.values()))
    return r


def criterion_12(threads=1):
    from .param import classify, normalized_V_n

    r = CheckResult(12, "the gamma = 1 case")
    labels = sorted(comp.label for comp in normalized_V_n(1, 3))
    r.add("normalized V_3 components", labels, sorted(["E_g1", "C1_g1", "C2_g1", "C3_g1"]))
    r.add("integer t through the map to E'", g1_integer_t(40), [1])
    r.add("classify(1, 1)", classify(1, 1).in_S, False)
    return r


# Surface coefficients transcribed separately from param, lowest degree first.
_A2 = (F(67, 52), F(-147, 13), F(144, 13))
_A4 = (F(6003, 2704), F(-4635, 338), F(8811, 169), F(-14112, 169), F(6912, 169))
_A6 = (F(169073, 140608), F(-307667, 35152), F(365399, 8788), F(-228889, 2197), F(384336, 2197), F(-338688, 2197), F(110592, 2197))


def _horner(coeffs, v):
    acc = F(0)
    for a in reversed(coeffs):
        acc = acc * v + a
    return acc


def criterion_13(threads=1, samples=20, seed=13):
    from .param import section_residual, section_residual_at, surface_fiber, surface_report

    r = CheckResult(13, "gamma-surface coefficients and the section residual")
    rng = random.Random(seed)
    bad = []
    residual = section_residual()
    for _ in range(samples):
        gm = F(rng.randint(-50, 50), rng.randint(1, 20))
        fib = surface_fiber(gm)
        if (fib.a2, fib.a4, fib.a6) != tuple(_horner(cs, gm) for cs in (_A2, _A4, _A6)):
            bad.append(gm)
        if residual(gm) != section_residual_at(gm):
            bad.append(("residual", gm))
    r.add(f"coefficients at {samples} random gamma", bad, [])
    rep = surface_report()
    r.add("residual reported", f"zero = {rep.residual_is_zero}, degree {rep.residual.degree}", "a definite report", True)
    r.add("(0, gamma^2 - gamma) on y^2 = f_t^3(gamma) at t = 0", rep.base_point_holds, True)
    return r


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 14)}

SUITES = {
    "corollary-integers": (1, 2, 3, 4),
    "theorem3": (5, 6, 7, 8),
    "lemma2-padic": (9,),
    "corollary-bound": (10,),
    "example1-twists": (11,),
    "gamma1-proposition": (12,),
    "surface-report": (13,),
}
SUITES["all"] = tuple(range(1, 14))


def run_criterion(n, threads=1):
    t0 = time.perf_counter()
    res = CRITERIA[n](threads=threads)
    res.seconds = time.perf_counter() - t0
    return res


def run_suite(name, threads=1):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return [run_criterion(n, threads) for n in SUITES[name]]


def format_table(results):
    lines = []
    for res in results:
        lines.append(res.line())
        lines.extend(res.failures())
    passed = sum(res.passed for res in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines)
