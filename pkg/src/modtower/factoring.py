"""Primality testing and integer factorization.

Trial division by the primes below 10**4, then Pollard rho with Brent's
cycle detection.  Rho runs under an iteration budget per cofactor; a
cofactor that survives the budget is reported rather than raised.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

TRIAL_LIMIT = 10_000
DEFAULT_BUDGET = 1 << 20

# Deterministic Miller-Rabin witnesses for n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_ROUNDS = 64


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return [i for i in range(limit) if sieve[i]]


SMALL_PRIMES = _small_primes(TRIAL_LIMIT)
_SMALL_SET = frozenset(SMALL_PRIMES)


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 2**64, 64 random rounds above."""
    if n < 2:
        return False
    if n < TRIAL_LIMIT:
        return n in _SMALL_SET
    for p in SMALL_PRIMES[:25]:
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 1 << 64:
        return all(_mr_round(n, d, s, a) for a in _MR_BASES[:12])
    # seeded so repeated calls agree
    rng = random.Random(n)
    bases = list(_MR_BASES) + [rng.randrange(2, n - 1) for _ in range(_MR_ROUNDS - len(_MR_BASES))]
    return all(_mr_round(n, d, s, a) for a in bases)


def _brent(n: int, c: int, budget: int) -> tuple[int | None, int]:
    """One Brent rho run with polynomial x^2 + c.  Returns (divisor or None, iterations used)."""
    y, r, q, g = 2, 1, 1, 1
    m = 128
    used = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        used += r
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        used += min(r, k)
        r *= 2
        if used > budget:
            break
    if g == n:
        # backtrack one step at a time
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    if 1 < g < n:
        return g, used
    return None, used


def pollard_rho(n: int, budget: int = DEFAULT_BUDGET) -> int | None:
    """Return a nontrivial divisor of the composite ``n``, or None if the budget runs out."""
    if n % 2 == 0:
        return 2
    remaining = budget
    c = 1
    while remaining > 0:
        g, used = _brent(n, c, remaining)
        if g is not None:
            return g
        remaining -= max(used, 1)
        c += 1
    return None


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]
    complete: bool = True
    cofactor: int = 1

    def __post_init__(self):
        prod = self.cofactor
        for p, e in self.factors:
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors do not multiply back to {self.n}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def multiplicity(self, p: int) -> int:
        return dict(self.factors).get(p, 0)

    def to_json(self) -> dict:
        return {
            "n": str(self.n),
            "factors": [[p, e] for p, e in self.factors],
            "cofactor": str(self.cofactor),
            "complete": self.complete,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Factorization":
        return cls(
            n=int(obj["n"]),
            factors=tuple((int(p), int(e)) for p, e in obj["factors"]),
            complete=bool(obj["complete"]),
            cofactor=int(obj["cofactor"]),
        )


def _merge(parts: list[Factorization], n: int) -> Factorization:
    counts: dict[int, int] = {}
    cofactor = 1
    for f in parts:
        for p, e in f.factors:
            counts[p] = counts.get(p, 0) + e
        cofactor *= f.cofactor
    complete = all(f.complete for f in parts)
    return Factorization(n, tuple(sorted(counts.items())), complete, cofactor)


def factor_integer(n: int, budget: int = DEFAULT_BUDGET) -> Factorization:
    """Factor a positive integer.

    ``budget`` caps the rho iterations spent on each composite cofactor.
    When it runs out the unsplit part is returned as ``cofactor`` with
    ``complete=False``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    counts: dict[int, int] = {}
    m = n
    for p in SMALL_PRIMES:
        if p * p > m:
            break
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    cofactor = 1
    stack = [m] if m > 1 else []
    while stack:
        k = stack.pop()
        if k == 1:
            continue
        if is_prime(k):
            counts[k] = counts.get(k, 0) + 1
            continue
        r = math.isqrt(k)
        if r * r == k:
            stack += [r, r]
            continue
        d = pollard_rho(k, budget)
        if d is None:
            cofactor *= k
        else:
            stack += [d, k // d]
    return Factorization(n, tuple(sorted(counts.items())), cofactor == 1, cofactor)


def merge_factorizations(parts: list[Factorization]) -> Factorization:
    n = 1
    for f in parts:
        n *= f.n
    return _merge(parts, n)
