import random
from fractions import Fraction
from itertools import combinations
from math import prod

import pytest
import sympy
from hypothesis import given, strategies as st

from arboreal.arith import (
    FactorBudget,
    FactorCache,
    InexactClassError,
    SquareClass,
    factor,
    is_probable_prime,
    is_rational_square,
    primes_up_to,
    rational_sqrt,
    span_solve,
    square_class,
)

nonzero_ints = st.integers(min_value=-(10**12), max_value=10**12).filter(bool)
rationals = st.fractions(max_denominator=10**6).filter(bool)


def test_factor_examples():
    assert factor(147).factored_part == {3: 1, 7: 2}
    assert factor(147).complete
    r = factor(2809)
    assert r.factored_part == {53: 2} and r.cofactor == 1
    assert factor(-2809).factored_part == {53: 2}
    one = factor(1)
    assert one.factored_part == {} and one.cofactor == 1 and one.complete


def test_factor_rejects_zero():
    with pytest.raises(ValueError):
        factor(0)


@given(nonzero_ints)
def test_factor_matches_sympy(n):
    r = factor(n)
    assert r.complete
    assert r.factored_part == sympy.factorint(abs(n))
    assert r.value() == abs(n)


def test_factor_large_semiprime_uses_rho():
    p, q = 1_000_000_007, 998_244_353
    r = factor(p * q)
    assert r.complete and r.factored_part == {p: 1, q: 1}


def test_factor_budget_leaves_cofactor():
    p, q = 1_000_000_007, 998_244_353
    r = factor(p * q * 12, FactorBudget(trial_bound=100, rho_iterations=0))
    assert not r.complete
    assert r.factored_part == {2: 2, 3: 1}
    assert r.cofactor == p * q
    assert r.value() == p * q * 12


def test_primality_against_sympy():
    rng = random.Random(5)
    for _ in range(300):
        n = rng.randrange(2, 10**30)
        assert is_probable_prime(n) == sympy.isprime(n)
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_cache_roundtrip(tmp_path):
    cache = FactorCache()
    for n in (147, 2809, 10**12 + 39, 360):
        factor(n, cache=cache)
    p, q = 1_000_000_007, 998_244_353
    factor(p * q * 3, FactorBudget(trial_bound=10, rho_iterations=0), cache=cache)
    path = tmp_path / "factors.txt"
    cache.dump(path)
    lines = path.read_text().splitlines()
    assert [int(l.split()[0]) for l in lines] == sorted(int(l.split()[0]) for l in lines)
    assert "147 3^1 7^2" in lines
    again = FactorCache.load(path)
    assert len(again) == len(cache)
    assert again.get(147).factored_part == {3: 1, 7: 2}
    assert not again.get(3 * p * q).complete


def test_cache_rejects_bad_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("12 2^2 5^1\n")
    with pytest.raises(ValueError):
        FactorCache.load(path)


def test_incomplete_entry_is_resumed():
    p, q = 1_000_000_007, 998_244_353
    cache = FactorCache()
    factor(p * q, FactorBudget(trial_bound=10, rho_iterations=0), cache=cache)
    r = factor(p * q, cache=cache)
    assert r.complete and cache.get(p * q).complete


def test_square_class_examples():
    assert square_class(147) == SquareClass(1, (3,), 0, 1)
    assert square_class(-3) == SquareClass(-1, (3,), 0, 1)
    assert square_class(Fraction(25, 9)).is_trivial
    assert square_class(-36).representative() == -1
    assert square_class(12).representative() == 3


def test_square_class_inexact_under_small_budget():
    p, q = 1_000_000_007, 998_244_353
    cls = square_class(p * q, FactorBudget(trial_bound=10, rho_iterations=0))
    assert not cls.exact
    with pytest.raises(InexactClassError):
        span_solve(cls, [square_class(3)])


# Products of large primes can exhaust the factoring budget; such classes are
# reported inexact, and the identities below are claims about exact classes.


@given(rationals, rationals)
def test_square_class_ignores_squares(q, r):
    a, b = square_class(q * r * r), square_class(q)
    if a.exact and b.exact:
        assert a == b


@given(rationals, rationals)
def test_square_class_is_multiplicative(q, r):
    a, b, c = square_class(q * r), square_class(q), square_class(r)
    if a.exact and b.exact and c.exact:
        assert a == b * c


def test_prime_powers_factor_exactly():
    p = 956_703_387_413
    assert factor(p**3).factored_part == {p: 3}
    assert square_class(p**3) == square_class(p)
    assert factor(7 * p**6).complete


def test_is_rational_square_examples():
    assert is_rational_square(1764)
    assert not is_rational_square(147)
    assert is_rational_square(Fraction(49, 4))
    assert is_rational_square(0)
    assert not is_rational_square(-4)
    assert rational_sqrt(Fraction(49, 4)) == Fraction(7, 2)
    assert rational_sqrt(2) is None


@given(rationals, st.sampled_from(primes_up_to(200)))
def test_squares_and_prime_multiples(q, p):
    assert is_rational_square(q * q)
    assert not is_rational_square(p * q * q)


def test_span_solve_examples():
    assert span_solve(square_class(147), [square_class(-3), square_class(12)]) == [1]
    assert span_solve(square_class(3), []) is None
    assert span_solve(square_class(1), [square_class(-3)]) == []


def _brute_span(target, gens):
    for size in range(len(gens) + 1):
        for sub in combinations(range(len(gens)), size):
            if is_rational_square(target * prod((gens[i] for i in sub), start=Fraction(1))):
                return True
    return False


def test_span_solve_matches_brute_force():
    rng = random.Random(11)
    small = primes_up_to(100)
    for _ in range(1000):
        k = rng.randint(0, 12)

        def rand_value():
            v = Fraction(rng.choice((-1, 1)))
            for p in rng.sample(small, rng.randint(0, 3)):
                v *= p ** rng.randint(1, 3)
            return v * Fraction(rng.randint(1, 9), rng.randint(1, 9)) ** 2

        gens = [rand_value() for _ in range(k)]
        target = rand_value()
        sub = span_solve(square_class(target), [square_class(g) for g in gens])
        assert (sub is not None) == _brute_span(target, gens)
        if sub is not None:
            assert is_rational_square(target * prod((gens[i] for i in sub), start=Fraction(1)))
