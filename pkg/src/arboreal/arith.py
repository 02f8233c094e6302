"""Exact integer arithmetic: bounded-effort factoring, square classes, F2 span solving.

Factoring never raises on hard inputs; an unfinished factorization is returned
with its composite cofactor and ``complete=False``.  Square classes built from
such results carry the cofactor as ``unknown_cofactor`` and are refused by
:func:`span_solve`.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from pathlib import Path

# Deterministic below 3.317e24 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_EXTRA_BASES = (43, 47, 53, 59, 61, 67, 71)

# Primes tried before primality testing and rho; the full trial bound is only
# walked for cofactors that rho could not split.
_QUICK_TRIAL = 1 << 10


class InexactClassError(ValueError):
    """A square class has an unresolved cofactor; raise the factoring budget."""


@dataclass(frozen=True)
class FactorBudget:
    trial_bound: int = 10**6
    rho_iterations: int = 500_000


DEFAULT_BUDGET = FactorBudget()


def _sieve(limit):
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, f in enumerate(flags) if f]


_prime_cache = {"limit": 0, "primes": []}
_prime_lock = threading.Lock()


def primes_up_to(limit):
    with _prime_lock:
        if _prime_cache["limit"] < limit:
            _prime_cache["primes"] = _sieve(limit)
            _prime_cache["limit"] = limit
        primes = _prime_cache["primes"]
    if primes and primes[-1] > limit:
        from bisect import bisect_right

        return primes[: bisect_right(primes, limit)]
    return primes


def is_probable_prime(n):
    """Miller-Rabin with fixed bases; deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_DETERMINISTIC_LIMIT else _MR_BASES + _MR_EXTRA_BASES
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n, c, max_iter):
    """One Pollard-Brent run with polynomial x^2 + c; returns (factor or None, iterations used)."""
    y, r, q, g = 2, 1, 1, 1
    m = 128
    used = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        used += r
        r <<= 1
        if used > max_iter:
            return None, used
    if g == n:
        # backtrack one step at a time from the saved position
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
    if g == n:
        return None, used
    return g, used


def _rho_split(n, budget_left):
    """Find a nontrivial divisor of composite n; deterministic sequence of seeds."""
    c = 1
    while budget_left > 0:
        d, used = _brent(n, c, budget_left)
        budget_left -= used
        if d is not None:
            return d, budget_left
        c += 1
    return None, 0


@dataclass(frozen=True)
class FactorResult:
    factored_part: dict
    cofactor: int = 1
    complete: bool = True

    def value(self):
        v = self.cofactor
        for p, e in self.factored_part.items():
            v *= p**e
        return v


def _add(exps, p, e=1):
    exps[p] = exps.get(p, 0) + e


def _iroot(m, k):
    """Floor of the k-th root of m >= 0, by integer Newton iteration."""
    if m < 2:
        return m
    x = 1 << -(-m.bit_length() // k)
    while True:
        y = ((k - 1) * x + m // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _perfect_power(m):
    """(r, k) with m = r^k and k prime, or (m, 1) when m is not a perfect power."""
    for k in primes_up_to(m.bit_length()):
        r = _iroot(m, k)
        if r**k == m:
            return r, k
    return m, 1


def _factor_uncached(n, budget, start=None):
    exps = dict(start or {})
    rest = n
    for p in primes_up_to(min(_QUICK_TRIAL, budget.trial_bound)):
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            _add(exps, p, e)
    leftovers = []
    stack = [rest] if rest > 1 else []
    iters = budget.rho_iterations
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            _add(exps, m)
            continue
        root, k = _perfect_power(m)
        if k > 1:
            # rho struggles on p^k, so split prime powers off directly
            stack.extend([root] * k)
            continue
        d, iters = _rho_split(m, iters)
        if d is None:
            leftovers.append(m)
        else:
            stack.extend((d, m // d))
    cofactor = 1
    for m in leftovers:
        cofactor *= _trial_finish(m, budget, exps)
    return FactorResult(dict(sorted(exps.items())), cofactor, cofactor == 1)


def _trial_finish(m, budget, exps):
    """Walk the full trial bound over a composite rho could not split."""
    for p in primes_up_to(budget.trial_bound):
        if p < _QUICK_TRIAL:
            continue
        if p * p > m:
            break
        while m % p == 0:
            m //= p
            _add(exps, p)
    if m > 1 and is_probable_prime(m):
        _add(exps, m)
        return 1
    return m


class FactorCache:
    """Thread-safe memo of factorizations.

    Reads go straight to the dict; writes take a lock and keep whichever entry
    is more complete.  Incomplete entries are resumed rather than recomputed.
    """

    def __init__(self):
        self._data = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._data)

    def __contains__(self, n):
        return n in self._data

    def get(self, n):
        return self._data.get(n)

    def put(self, n, result):
        with self._lock:
            old = self._data.get(n)
            if old is None or (not old.complete and result.cofactor < old.cofactor):
                self._data[n] = result

    def merge(self, other):
        for n, r in list(other._data.items()):
            self.put(n, r)

    def dump(self, path):
        lines = []
        for n in sorted(self._data):
            r = self._data[n]
            parts = [str(n)] + [f"{p}^{e}" for p, e in r.factored_part.items()]
            if not r.complete:
                parts.append(f"cofactor={r.cofactor}")
            lines.append(" ".join(parts))
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")

    @classmethod
    def load(cls, path):
        cache = cls()
        path = Path(path)
        if not path.exists():
            return cache
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            head, *parts = line.split()
            n = int(head)
            exps, cof = {}, 1
            for part in parts:
                if part.startswith("cofactor="):
                    cof = int(part[len("cofactor=") :])
                else:
                    p, e = part.split("^")
                    exps[int(p)] = int(e)
            result = FactorResult(exps, cof, cof == 1)
            if result.value() != n:
                raise ValueError(f"{path}:{lineno}: entry does not multiply back to {n}")
            cache.put(n, result)
        return cache


def factor(n, budget=DEFAULT_BUDGET, cache=None):
    """Factor |n| within ``budget``.

    >>> factor(147).factored_part
    {3: 1, 7: 2}
    """
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    if n == 1:
        return FactorResult({}, 1, True)
    if cache is not None:
        hit = cache.get(n)
        if hit is not None:
            if hit.complete:
                return hit
            resumed = _factor_uncached(hit.cofactor, budget, hit.factored_part)
            cache.put(n, resumed)
            return resumed
    result = _factor_uncached(n, budget)
    if cache is not None:
        cache.put(n, result)
    return result


def is_rational_square(q):
    """True iff q = r**2 for a rational r; 0 counts as a square."""
    q = Fraction(q)
    if q < 0:
        return False
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    return ra * ra == a and rb * rb == b


def rational_sqrt(q):
    """Nonnegative rational square root, or None when q is not a square."""
    q = Fraction(q)
    if not is_rational_square(q):
        return None
    return Fraction(isqrt(q.numerator), isqrt(q.denominator))


def _reduce_cofactor(a, b):
    # a*b modulo squares, both squarefree-status-unknown
    g = gcd(a, b)
    u = (a // g) * (b // g)
    r = isqrt(u)
    return 1 if r * r == u else u


@dataclass(frozen=True)
class SquareClass:
    """A nonzero rational modulo squares: sign * 2^two_exponent * prod(odd_support) * unknown_cofactor."""

    sign: int = 1
    odd_support: tuple = ()
    two_exponent: int = 0
    unknown_cofactor: int = 1

    @property
    def exact(self):
        return self.unknown_cofactor == 1

    @property
    def is_trivial(self):
        return self.sign == 1 and not self.odd_support and self.two_exponent == 0 and self.exact

    def representative(self):
        v = self.sign * 2**self.two_exponent * self.unknown_cofactor
        for p in self.odd_support:
            v *= p
        return v

    def __mul__(self, other):
        return SquareClass(
            self.sign * other.sign,
            tuple(sorted(set(self.odd_support) ^ set(other.odd_support))),
            self.two_exponent ^ other.two_exponent,
            _reduce_cofactor(self.unknown_cofactor, other.unknown_cofactor),
        )

    def __str__(self):
        return str(self.representative()) + ("" if self.exact else "?")


def square_class(q, budget=DEFAULT_BUDGET, cache=None):
    q = Fraction(q)
    if q == 0:
        raise ValueError("0 has no square class")
    odd = {}
    two = 0
    cof = 1
    for part in (q.numerator, q.denominator):
        r = factor(part, budget, cache)
        for p, e in r.factored_part.items():
            if e % 2:
                if p == 2:
                    two ^= 1
                else:
                    odd[p] = odd.get(p, 0) ^ 1
        cof = _reduce_cofactor(cof, r.cofactor)
    support = tuple(sorted(p for p, bit in odd.items() if bit))
    return SquareClass(1 if q > 0 else -1, support, two, cof)


def class_vector(cls, index):
    """Bitmask of ``cls`` over the coordinate ``index`` (maps -1, 2, p -> bit)."""
    v = 0
    if cls.sign < 0:
        v |= 1 << index[-1]
    if cls.two_exponent:
        v |= 1 << index[2]
    for p in cls.odd_support:
        v |= 1 << index[p]
    return v


def span_solve(target, generators):
    """Indices S with prod(generators[S]) == target modulo squares, or None.

    Gaussian elimination over F2; each pivot row carries the mask of original
    generators it was built from.
    """
    for c in (target, *generators):
        if not c.exact:
            raise InexactClassError(f"square class {c} is not exact")
    index = {-1: 0, 2: 1}
    for c in (target, *generators):
        for p in c.odd_support:
            index.setdefault(p, len(index))
    pivots = {}  # pivot bit -> (vector, combination mask)
    for i, g in enumerate(generators):
        v, combo = class_vector(g, index), 1 << i
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = (v, combo)
                break
            pv, pc = pivots[top]
            v ^= pv
            combo ^= pc
    v, combo = class_vector(target, index), 0
    while v:
        top = v.bit_length() - 1
        if top not in pivots:
            return None
        pv, pc = pivots[top]
        v ^= pv
        combo ^= pc
    return [i for i in range(len(generators)) if combo >> i & 1]
