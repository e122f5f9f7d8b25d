"""Arithmetic in a base field F_q, q = p**m.

Elements are coefficient vectors in the power basis of a root of the
modulus, constant coefficient first.  Internally every element is also
available as a packed index ``sum(c[i] * p**i)``, which doubles as the
enumeration order (constant coefficient varies fastest).  The tower code
works on packed indices only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    NNotDividingGroupOrder,
    NotPrime,
    ReducibleModulus,
    ZeroInput,
    ZeroToZero,
)
from .factoring import factor_integer, is_prime

# Precompute log/exp tables up to this field size, and an addition table
# (odd characteristic, m > 1) up to ADD_TABLE_LIMIT.
LOG_TABLE_LIMIT = 1 << 16
ADD_TABLE_LIMIT = 1 << 10


# -- polynomials over Z/p, coefficient lists constant term first ---------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _trim(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % p for c in out]


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_powmod(a: list[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, f, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over Z/p."""
    f = list(f)
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**m, f, p), x, p):
        return False
    for r, _ in factor_integer(m).factors:
        h = _poly_sub(_poly_powmod(x, p ** (m // r), f, p), x, p)
        if len(_poly_gcd(list(f), h, p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m, comparing constant term first."""
    for low in itertools.product(range(p), repeat=m):
        f = (*low, 1)
        if is_irreducible(f, p):
            return f
    raise ReducibleModulus(f"no irreducible polynomial of degree {m} over GF({p})")


# -- field ---------------------------------------------------------------------

@dataclass(frozen=True)
class Element:
    coeffs: tuple[int, ...]

    def __repr__(self):
        return f"Element({list(self.coeffs)})"


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """F_q with q = p**m, given by a monic irreducible modulus of degree m."""

    p: int
    m: int
    modulus: tuple[int, ...]
    q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.m)
        self._build_tables()

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.m, self.modulus) == (
            other.p,
            other.m,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, m={self.m}, modulus={list(self.modulus)})"

    # tables are filled once here and never touched afterwards
    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        exp = log = add = negt = None
        if m > 1 and q <= LOG_TABLE_LIMIT:
            g = self._find_generator()
            exp = [0] * (2 * (q - 1))
            log = [0] * q
            x = 1
            for k in range(q - 1):
                exp[k] = x
                log[x] = k
                x = self._slow_mul(x, g)
            exp[q - 1 :] = exp[: q - 1]
            if p > 2 and q <= ADD_TABLE_LIMIT:
                add = [self._slow_add(a, b) for a in range(q) for b in range(q)]
                negt = [self.pack([-c for c in self.unpack(a)]) for a in range(q)]
        object.__setattr__(self, "_negt", negt)
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)
        object.__setattr__(self, "_addt", add)

    def _find_generator(self) -> int:
        primes = factor_integer(self.q - 1).primes
        for g in range(2, self.q):
            if all(self._slow_pow(g, (self.q - 1) // r) != 1 for r in primes):
                return g
        return 1  # q == 2

    # -- packed index <-> coefficients
    def pack(self, coeffs: Sequence[int]) -> int:
        idx = 0
        for c in reversed(coeffs):
            idx = idx * self.p + c % self.p
        return idx

    def unpack(self, idx: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            idx, c = divmod(idx, self.p)
            out.append(c)
        return tuple(out)

    def element(self, value: int | Sequence[int] | Element) -> Element:
        """Build an element from a constant integer, a coefficient list, or an Element."""
        if isinstance(value, Element):
            coeffs = value.coeffs
        elif isinstance(value, int):
            coeffs = (value,)
        else:
            coeffs = tuple(value)
        if len(coeffs) > self.m:
            raise DegreeMismatch(f"{len(coeffs)} coefficients for a degree-{self.m} field")
        coeffs = tuple(c % self.p for c in coeffs) + (0,) * (self.m - len(coeffs))
        return Element(coeffs)

    def index(self, e: Element) -> int:
        return self.pack(e.coeffs)

    def from_index(self, idx: int) -> Element:
        return Element(self.unpack(idx))

    @property
    def zero(self) -> Element:
        return Element((0,) * self.m)

    @property
    def one(self) -> Element:
        return Element((1,) + (0,) * (self.m - 1))

    def elements(self) -> Iterator[Element]:
        """All q elements in enumeration order."""
        for idx in range(self.q):
            yield self.from_index(idx)

    # -- slow paths, polynomial arithmetic on coefficients
    def _slow_add(self, a: int, b: int) -> int:
        ca, cb = self.unpack(a), self.unpack(b)
        return self.pack([x + y for x, y in zip(ca, cb)])

    def _slow_mul(self, a: int, b: int) -> int:
        prod = _poly_mul(self.unpack(a), self.unpack(b), self.p)
        return self.pack(_poly_mod(prod, self.modulus, self.p))

    def _slow_pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            e >>= 1
        return result

    # -- packed arithmetic used by the towers
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._addt is not None:
            return self._addt[a * self.q + b]
        return self._slow_add(a, b)

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        if self.p == 2:
            return a
        if self._negt is not None:
            return self._negt[a]
        return self.pack([-c for c in self.unpack(a)])

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.m == 1:
            return pow(a, -1, self.p)
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._slow_pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent")
        if a == 0:
            if e == 0:
                raise ZeroToZero("0**0 is undefined")
            return 0
        if self.m == 1:
            return pow(a, e, self.p)
        if self._exp is not None:
            return self._exp[self._log[a] * e % (self.q - 1)]
        return self._slow_pow(a, e)

    def scalar(self, c: int) -> int:
        """Packed index of the integer c reduced into the prime subfield."""
        return c % self.p

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        return make_field(obj["p"], obj["m"], obj["modulus"])


def make_field(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Validate (p, m, modulus) and return the field.

    Without a modulus the lexicographically smallest monic irreducible of
    degree m is chosen; for m == 1 that is ``x``.
    """
    if not is_prime(p):
        raise NotPrime(p)
    if m < 1:
        raise DegreeMismatch(f"extension degree must be positive, got {m}")
    if modulus is None:
        mod = smallest_irreducible(p, m)
    else:
        mod = tuple(c % p for c in modulus)
        mod = tuple(_trim(list(mod)))
        if len(mod) - 1 != m:
            raise DegreeMismatch(f"modulus has degree {len(mod) - 1}, expected {m}")
        if mod[-1] != 1:
            raise DegreeMismatch("modulus must be monic")
        if not is_irreducible(mod, p):
            raise ReducibleModulus(f"{list(mod)} is reducible over GF({p})")
    return FieldSpec(p, m, mod)


# -- element-level operations ----------------------------------------------------

def element_add(f: FieldSpec, a: Element, b: Element) -> Element:
    return f.from_index(f.add(f.index(a), f.index(b)))


def element_sub(f: FieldSpec, a: Element, b: Element) -> Element:
    return f.from_index(f.sub(f.index(a), f.index(b)))


def element_mul(f: FieldSpec, a: Element, b: Element) -> Element:
    return f.from_index(f.mul(f.index(a), f.index(b)))


def element_inv(f: FieldSpec, a: Element) -> Element:
    return f.from_index(f.inv(f.index(a)))


def element_pow(f: FieldSpec, a: Element, e: int) -> Element:
    """a**e by square-and-multiply; e may be arbitrarily large."""
    return f.from_index(f.pow(f.index(a), e))


def is_nth_power(f: FieldSpec, x: Element, n: int) -> bool:
    """Power-residue test: for n | q-1, nonzero x is an n-th power iff x**((q-1)/n) == 1."""
    idx = f.index(x)
    if idx == 0:
        raise ZeroInput("zero is excluded from the residue test")
    if n < 1 or (f.q - 1) % n:
        raise NNotDividingGroupOrder(f"{n} does not divide q-1 = {f.q - 1}")
    return f.pow(idx, (f.q - 1) // n) == 1
