"""Quadratic and cubic towers of finite fields.

A tower over F_q is a chain F_q = K_0 < K_1 < ... < K_n with [K_k : K_{k-1}] = l,
l = 2 (quadratic) or 3 (cubic).  Level k is generated over level k-1 by a
root of

    quadratic:  f(X, Y) = Y^2 + (6 - 8X^2) Y + (9 - 8X^2)
    cubic:      g(X, Y) = Y^3 + (6 - 9X^3) Y^2 + (12 - 9X^3) Y + (8 - 9X^3)

with X the previous generator.  The marked element of level k is
gen^2 - 1 (quadratic) or gen^3 - 1 (cubic).

Elements are coordinate trees in the relative bases {1, a} / {1, b, b^2}.
They are stored flattened: a level-k element is a tuple of l**k packed
base-field indices, the first l**(k-1) entries being the constant
coordinate, the next block the coefficient of the generator, and so on.
Embedding a level-j element into level k pads with zeros, so subfield
membership is a check that the tail of the tuple vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .basefield import Element, FieldSpec, is_nth_power
from .errors import (
    DivisionByZero,
    EvenCharacteristic,
    InvalidTower,
    IrreducibilityFailure,
    JOutOfRange,
    LevelMismatch,
    NoCubeStructure,
    QIsFour,
    ZeroToZero,
)

QUADRATIC = "quadratic"
CUBIC = "cubic"
KINDS = {QUADRATIC: 2, CUBIC: 3}


@dataclass(frozen=True)
class TowerElement:
    level: int
    coords: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class TowerLevel:
    n: int
    rel_minpoly: tuple[TowerElement, ...]  # constant term first, monic
    gen: TowerElement
    marked: TowerElement


# -- flat-vector arithmetic ---------------------------------------------------------

class _Arith:
    """Arithmetic on flattened coordinate vectors for one tower."""

    def __init__(self, base: FieldSpec, ell: int, minpolys: Sequence[tuple[list[int], ...]]):
        self.F = base
        self.ell = ell
        # minpolys[k-1] holds the non-leading coefficients of level k's relative minimal polynomial
        self.minpolys = list(minpolys)

    def with_level(self, coeffs: tuple[list[int], ...]) -> "_Arith":
        return _Arith(self.F, self.ell, self.minpolys + [coeffs])

    # vector helpers
    def add(self, x, y):
        F = self.F
        if F.m == 1:
            p = F.p
            return [(a + b) % p for a, b in zip(x, y)]
        if F.p == 2:
            return [a ^ b for a, b in zip(x, y)]
        t = F._addt
        if t is not None:
            q = F.q
            return [t[a * q + b] for a, b in zip(x, y)]
        return [F.add(a, b) for a, b in zip(x, y)]

    def sub(self, x, y):
        F = self.F
        if F.m == 1:
            p = F.p
            return [(a - b) % p for a, b in zip(x, y)]
        if F.p == 2:
            return [a ^ b for a, b in zip(x, y)]
        t, n = F._addt, F._negt
        if t is not None:
            q = F.q
            return [t[a * q + n[b]] for a, b in zip(x, y)]
        return [F.sub(a, b) for a, b in zip(x, y)]

    def neg(self, x):
        return [self.F.neg(a) for a in x]

    def scale(self, x, c: int):
        """Multiply by a packed base-field scalar."""
        F = self.F
        if F.m == 1:
            p = F.p
            return [a * c % p for a in x]
        return [F.mul(a, c) for a in x]

    def one(self, k: int):
        v = [0] * self.ell**k
        v[0] = 1
        return v

    def const(self, k: int, c: int):
        v = [0] * self.ell**k
        v[0] = c
        return v

    def mul(self, k: int, x, y):
        if k == 0:
            a, b = x[0], y[0]
            F = self.F
            if F.m == 1:
                return [a * b % F.p]
            if not a or not b:
                return [0]
            if F._exp is not None:
                return [F._exp[F._log[a] + F._log[b]]]
            return [F.mul(a, b)]
        if k == 1:
            if self.F.m == 1:
                return self._mul1_prime(x, y)
            if self.F._exp is not None:
                return self._mul1_table(x, y)
        h = len(x) // self.ell
        if self.ell == 2:
            return self._mul2(k, h, x, y)
        return self._mul3(k, h, x, y)

    def _mul1_prime(self, x, y):
        p = self.F.p
        if self.ell == 2:
            c0, c1 = (c[0] for c in self.minpolys[0])
            u1, v1 = x
            u2, v2 = y
            vv = v1 * v2
            return [(u1 * u2 - vv * c0) % p, (u1 * v2 + v1 * u2 - vv * c1) % p]
        c0, c1, c2 = (c[0] for c in self.minpolys[0])
        x0, x1, x2 = x
        y0, y1, y2 = y
        d0 = x0 * y0
        d1 = x0 * y1 + x1 * y0
        d2 = x0 * y2 + x1 * y1 + x2 * y0
        d3 = x1 * y2 + x2 * y1
        d4 = x2 * y2 % p
        d3 = (d3 - c2 * d4) % p
        d2 -= c1 * d4 + c2 * d3
        d1 -= c0 * d4 + c1 * d3
        d0 -= c0 * d3
        return [d0 % p, d1 % p, d2 % p]

    def _base_ops(self):
        """Scalar add, sub and table multiply for a base field with log/exp tables."""
        F = self.F
        exp, log = F._exp, F._log

        def mul(a, b):
            return exp[log[a] + log[b]] if a and b else 0

        if F.p == 2:
            add = sub = int.__xor__
        elif F._addt is not None:
            t, n, q = F._addt, F._negt, F.q

            def add(a, b):
                return t[a * q + b]

            def sub(a, b):
                return t[a * q + n[b]]
        else:
            add, sub = F.add, F.sub
        return add, sub, mul

    def _mul1_table(self, x, y):
        add, sub, mul = self._base_ops()
        if self.ell == 2:
            c0, c1 = (c[0] for c in self.minpolys[0])
            u1, v1 = x
            u2, v2 = y
            vv = mul(v1, v2)
            return [sub(mul(u1, u2), mul(vv, c0)), sub(add(mul(u1, v2), mul(v1, u2)), mul(vv, c1))]
        c0, c1, c2 = (c[0] for c in self.minpolys[0])
        x0, x1, x2 = x
        y0, y1, y2 = y
        d0 = mul(x0, y0)
        d1 = add(mul(x0, y1), mul(x1, y0))
        d2 = add(add(mul(x0, y2), mul(x1, y1)), mul(x2, y0))
        d3 = add(mul(x1, y2), mul(x2, y1))
        d4 = mul(x2, y2)
        d3 = sub(d3, mul(c2, d4))
        d2 = sub(d2, add(mul(c1, d4), mul(c2, d3)))
        d1 = sub(d1, add(mul(c0, d4), mul(c1, d3)))
        d0 = sub(d0, mul(c0, d3))
        return [d0, d1, d2]

    def _mul2(self, k, h, x, y):
        c0, c1 = self.minpolys[k - 1]  # gen^2 = -c1 gen - c0
        u1, v1, u2, v2 = x[:h], x[h:], y[:h], y[h:]
        uu = self.mul(k - 1, u1, u2)
        vv = self.mul(k - 1, v1, v2)
        s = self.mul(k - 1, self.add(u1, v1), self.add(u2, v2))
        const = self.sub(uu, self.mul(k - 1, vv, c0))
        lin = self.sub(self.sub(s, uu), self.add(vv, self.mul(k - 1, vv, c1)))
        return const + lin

    def _mul3(self, k, h, x, y):
        c0, c1, c2 = self.minpolys[k - 1]  # gen^3 = -c2 gen^2 - c1 gen - c0
        km = k - 1
        mul, add, sub = self.mul, self.add, self.sub
        x0, x1, x2 = x[:h], x[h : 2 * h], x[2 * h :]
        y0, y1, y2 = y[:h], y[h : 2 * h], y[2 * h :]
        p00 = mul(km, x0, y0)
        p11 = mul(km, x1, y1)
        p22 = mul(km, x2, y2)
        p01 = mul(km, add(x0, x1), add(y0, y1))
        p02 = mul(km, add(x0, x2), add(y0, y2))
        p12 = mul(km, add(x1, x2), add(y1, y2))
        d0 = p00
        d1 = sub(p01, add(p00, p11))
        d2 = add(sub(p02, add(p00, p22)), p11)
        d3 = sub(p12, add(p11, p22))
        d4 = p22
        d3 = sub(d3, mul(km, c2, d4))
        d2 = sub(d2, add(mul(km, c1, d4), mul(km, c2, d3)))
        d1 = sub(d1, add(mul(km, c0, d4), mul(km, c1, d3)))
        d0 = sub(d0, mul(km, c0, d3))
        return d0 + d1 + d2

    def pow(self, k: int, x, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            if not any(x):
                raise ZeroToZero("0**0 is undefined")
            return self.one(k)
        result = None
        base = list(x)
        while True:
            if e & 1:
                result = base if result is None else self.mul(k, result, base)
            e >>= 1
            if not e:
                return result
            base = self.mul(k, base, base)

    def chunks(self, x):
        h = len(x) // self.ell
        return [x[i * h : (i + 1) * h] for i in range(self.ell)]

    def mult_matrix(self, k: int, x):
        """Columns of the multiplication-by-x map in the relative basis at level k (cubic)."""
        c0, c1, c2 = self.minpolys[k - 1]
        km = k - 1
        cols = [self.chunks(x)]
        for _ in range(2):
            y0, y1, y2 = cols[-1]
            cols.append(
                [
                    self.neg(self.mul(km, c0, y2)),
                    self.sub(y0, self.mul(km, c1, y2)),
                    self.sub(y1, self.mul(km, c2, y2)),
                ]
            )
        # matrix[row][col]
        return [[cols[c][r] for c in range(3)] for r in range(3)]

    def norm(self, k: int, x):
        """Norm from level k to level k-1."""
        km = k - 1
        if self.ell == 2:
            c0, c1 = self.minpolys[km]
            u, v = self.chunks(x)
            uu = self.mul(km, u, u)
            uv = self.mul(km, u, v)
            vv = self.mul(km, v, v)
            return self.add(self.sub(uu, self.mul(km, c1, uv)), self.mul(km, c0, vv))
        M = self.mult_matrix(k, x)
        return self._det3(km, M)

    def _det3(self, km, M):
        mul, add, sub = self.mul, self.add, self.sub

        def m2(a, b, c, d):
            return sub(mul(km, a, d), mul(km, b, c))

        cof0 = m2(M[1][1], M[1][2], M[2][1], M[2][2])
        cof1 = m2(M[1][0], M[1][2], M[2][0], M[2][2])
        cof2 = m2(M[1][0], M[1][1], M[2][0], M[2][1])
        return add(sub(mul(km, M[0][0], cof0), mul(km, M[0][1], cof1)), mul(km, M[0][2], cof2))

    def inv(self, k: int, x):
        if not any(x):
            raise DivisionByZero("inverse of zero")
        if k == 0:
            return [self.F.inv(x[0])]
        km = k - 1
        if self.ell == 2:
            c1 = self.minpolys[km][1]
            u, v = self.chunks(x)
            n_inv = self.inv(km, self.norm(k, x))
            # conjugate of u + v*gen is (u - c1*v) - v*gen
            conj_u = self.sub(u, self.mul(km, c1, v))
            return self.mul(km, conj_u, n_inv) + self.mul(km, self.neg(v), n_inv)
        M = self.mult_matrix(k, x)
        n_inv = self.inv(km, self._det3(km, M))
        mul, sub = self.mul, self.sub

        def m2(a, b, c, d):
            return sub(mul(km, a, d), mul(km, b, c))

        # first column of the adjugate: signed cofactors of the first row
        z0 = m2(M[1][1], M[1][2], M[2][1], M[2][2])
        z1 = self.neg(m2(M[1][0], M[1][2], M[2][0], M[2][2]))
        z2 = m2(M[1][0], M[1][1], M[2][0], M[2][1])
        return mul(km, z0, n_inv) + mul(km, z1, n_inv) + mul(km, z2, n_inv)


# -- towers -------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Tower:
    kind: str
    base: FieldSpec
    start: Element
    levels: tuple[TowerLevel, ...] = ()
    _arith: _Arith = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._arith is None:
            minpolys = [tuple(list(c.coords) for c in lv.rel_minpoly[:-1]) for lv in self.levels]
            object.__setattr__(self, "_arith", _Arith(self.base, self.ell, minpolys))

    @property
    def ell(self) -> int:
        return KINDS[self.kind]

    @property
    def height(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> TowerLevel:
        if not 1 <= n <= self.height:
            raise LevelMismatch(f"level {n} not built (height {self.height})")
        return self.levels[n - 1]

    def degree(self, n: int) -> int:
        """Absolute degree of level n over the base field."""
        return self.ell**n

    def order_of_level(self, n: int) -> int:
        """Size q**(l**n) of the field at level n."""
        return self.base.q ** (self.ell**n)

    # -- element constructors
    def element(self, n: int, coords: Sequence[int]) -> TowerElement:
        if len(coords) != self.ell**n:
            raise LevelMismatch(f"level {n} needs {self.ell**n} coordinates")
        q = self.base.q
        return TowerElement(n, tuple(int(c) % q if self.base.m > 1 else int(c) % self.base.p for c in coords))

    def zero(self, n: int) -> TowerElement:
        return TowerElement(n, (0,) * self.ell**n)

    def one(self, n: int) -> TowerElement:
        return TowerElement(n, tuple(self._arith.one(n)))

    def scalar(self, n: int, c: Element | int) -> TowerElement:
        """A base-field element (or integer) placed at level n."""
        idx = self.base.index(self.base.element(c))
        return TowerElement(n, tuple(self._arith.const(n, idx)))

    def embed(self, x: TowerElement, n: int) -> TowerElement:
        if x.level > n:
            raise LevelMismatch(f"cannot embed level {x.level} into level {n}")
        return TowerElement(n, x.coords + (0,) * (self.ell**n - len(x.coords)))

    def restrict(self, x: TowerElement, j: int) -> TowerElement:
        """View x as an element of level j; x must lie in that subfield."""
        if not lower_level(self, x, j):
            raise LevelMismatch(f"element does not lie in level {j}")
        return TowerElement(j, x.coords[: self.ell**j])

    def gen(self, n: int) -> TowerElement:
        if n == 0:
            return self.scalar(0, self.start)
        return self.level(n).gen

    def marked(self, n: int) -> TowerElement:
        if n == 0:
            a = self._arith
            g = list(self.gen(0).coords)
            return TowerElement(0, tuple(a.sub(a.pow(0, g, self.ell), a.one(0))))
        return self.level(n).marked

    def random_element(self, n: int, rng) -> TowerElement:
        q = self.base.q
        return TowerElement(n, tuple(rng.randrange(q) for _ in range(self.ell**n)))

    # convenience arithmetic
    def add(self, x, y):
        _same_level(x, y)
        return TowerElement(x.level, tuple(self._arith.add(x.coords, y.coords)))

    def sub(self, x, y):
        _same_level(x, y)
        return TowerElement(x.level, tuple(self._arith.sub(x.coords, y.coords)))

    def neg(self, x):
        return TowerElement(x.level, tuple(self._arith.neg(x.coords)))

    def mul(self, x, y):
        return tower_mul(self, x, y)

    def pow(self, x, e):
        return tower_pow(self, x, e)

    def inv(self, x):
        return tower_inv(self, x)

    def to_json(self) -> dict:
        return tower_to_json(self)


def _same_level(x: TowerElement, y: TowerElement):
    if x.level != y.level:
        raise LevelMismatch(f"levels differ: {x.level} vs {y.level}")


def _check_level(t: Tower, x: TowerElement):
    if not 0 <= x.level <= t.height or len(x.coords) != t.ell**x.level:
        raise LevelMismatch(f"element at level {x.level} does not belong to this tower")


# -- starters -------------------------------------------------------------------------

def _starter_ok(f: FieldSpec, x: Element, ell: int) -> bool:
    idx = f.index(x)
    delta = f.sub(f.pow(idx, ell), 1)
    return delta != 0 and not is_nth_power(f, f.from_index(delta), ell)


def find_alpha0(f: FieldSpec) -> Element:
    """First element a (enumeration order) with a^2 - 1 a nonzero nonsquare."""
    if f.p == 2:
        raise EvenCharacteristic("every element of a binary field is a square")
    for x in f.elements():
        if _starter_ok(f, x, 2):
            return x
    raise AssertionError("no quadratic starter in an odd field")  # excluded by the counting argument


def find_beta0(f: FieldSpec) -> Element:
    """First element b (enumeration order) with b^3 - 1 a nonzero noncube."""
    if f.q == 4:
        raise QIsFour("GF(4) has no cubic starter")
    if f.q % 3 != 1:
        raise NoCubeStructure(f"q = {f.q} is not 1 mod 3, cubing is a bijection")
    for x in f.elements():
        if _starter_ok(f, x, 3):
            return x
    raise AssertionError("no cubic starter although q = 1 mod 3, q != 4")


def check_base(f: FieldSpec, kind: str) -> None:
    if kind == QUADRATIC:
        if f.q % 4 != 1:
            raise InvalidTower(f"quadratic tower needs q = 1 mod 4, got q = {f.q}")
    elif kind == CUBIC:
        if f.q == 4:
            raise QIsFour("cubic tower needs q != 4")
        if f.q % 3 != 1:
            raise InvalidTower(f"cubic tower needs q = 1 mod 3, got q = {f.q}")
    else:
        raise InvalidTower(f"unknown tower kind {kind!r}")


def build_tower(f: FieldSpec, kind: str, start: Element | Sequence[int] | int | None = None, n: int = 0) -> Tower:
    """Validate the base field and starter, then extend n times."""
    check_base(f, kind)
    ell = KINDS[kind]
    if start is None:
        start = find_alpha0(f) if kind == QUADRATIC else find_beta0(f)
    start = f.element(start)
    if not _starter_ok(f, start, ell):
        what = "square" if ell == 2 else "cube"
        raise InvalidTower(f"starter {list(start.coeffs)}: start^{ell} - 1 is zero or a {what}")
    t = Tower(kind, f, start)
    for _ in range(n):
        t = extend(t)
    return t


# -- operations -------------------------------------------------------------------------

def _minpoly_coeffs(t: Tower, prev_gen: list[int], k: int) -> list[list[int]]:
    """Non-leading coefficients of f(prev, Y) or g(prev, Y) at level k (constant first)."""
    a = t._arith
    F = t.base
    power = a.pow(k, prev_gen, t.ell)
    if t.ell == 2:
        m8 = a.scale(power, F.scalar(8))
        return [a.sub(a.const(k, F.scalar(9)), m8), a.sub(a.const(k, F.scalar(6)), m8)]
    m9 = a.scale(power, F.scalar(9))
    return [a.sub(a.const(k, F.scalar(c)), m9) for c in (8, 12, 6)]


def extend(t: Tower) -> Tower:
    """Append the next level, certifying irreducibility by the residue test on the current marked element."""
    k = t.height  # level being extended from
    ell = t.ell
    prev_marked = list(t.marked(k).coords)
    exponent = (t.order_of_level(k) - 1) // ell
    if not any(prev_marked) or t._arith.pow(k, prev_marked, exponent) == t._arith.one(k):
        raise IrreducibilityFailure(f"marked element of level {k} is an {ell}-th power")
    coeffs = _minpoly_coeffs(t, list(t.gen(k).coords), k)
    arith = t._arith.with_level(tuple(coeffs))
    n = k + 1
    size = ell**k
    gen = [0] * ell**n
    gen[size] = 1
    marked = arith.sub(arith.pow(n, gen, ell), arith.one(n))
    rel = tuple(TowerElement(k, tuple(c)) for c in coeffs) + (TowerElement(k, tuple(t._arith.one(k))),)
    lv = TowerLevel(n, rel, TowerElement(n, tuple(gen)), TowerElement(n, tuple(marked)))
    return Tower(t.kind, t.base, t.start, t.levels + (lv,), arith)


def lower_level(t: Tower, x: TowerElement, j: int | None = None) -> bool:
    """True iff x lies in the subfield at level j (default: one level down)."""
    if j is None:
        j = x.level - 1
    if j < 0:
        return False
    return not any(x.coords[t.ell**j :])


def tower_mul(t: Tower, x: TowerElement, y: TowerElement) -> TowerElement:
    _same_level(x, y)
    _check_level(t, x)
    return TowerElement(x.level, tuple(t._arith.mul(x.level, x.coords, y.coords)))


def tower_pow(t: Tower, x: TowerElement, e: int) -> TowerElement:
    _check_level(t, x)
    return TowerElement(x.level, tuple(t._arith.pow(x.level, x.coords, e)))


def tower_inv(t: Tower, x: TowerElement) -> TowerElement:
    _check_level(t, x)
    return TowerElement(x.level, tuple(t._arith.inv(x.level, list(x.coords))))


def relative_norm(t: Tower, n: int, x: TowerElement) -> TowerElement:
    """Norm from level n down to level n-1 via the closed coordinate formula."""
    if x.level != n or n < 1:
        raise LevelMismatch(f"expected an element at level {n} >= 1, got level {x.level}")
    _check_level(t, x)
    return TowerElement(n - 1, tuple(t._arith.norm(n, list(x.coords))))


def norm_to(t: Tower, x: TowerElement, j: int) -> TowerElement:
    """The j-fold relative norm, landing at level x.level - j."""
    if not 1 <= j <= x.level:
        raise JOutOfRange(f"j = {j} outside 1..{x.level}")
    for _ in range(j):
        x = relative_norm(t, x.level, x)
    return x


def stated_norm_scalar(t: Tower, j: int) -> int:
    """(-64)^(2^j - 1) or (-729)^(3^j - 1), packed into the base field."""
    F = t.base
    if t.ell == 2:
        return F.pow(F.scalar(-64), 2**j - 1) if F.scalar(-64) else 0
    return F.pow(F.scalar(-729), 3**j - 1) if F.scalar(-729) else 0


def marked_norm_scalar(t: Tower, j: int) -> int:
    """c with norm_to(marked_n, j) == c * marked_{n-j}.

    Quadratic: (-64)^(2^j - 1).  Cubic: 729^((3^j - 1)/2); the minimal
    polynomial of marked_n over level n-1 has constant term -729 X, so
    each relative norm contributes a factor +729.
    """
    F = t.base
    if t.ell == 2:
        return stated_norm_scalar(t, j)
    c = F.scalar(729)
    return F.pow(c, (3**j - 1) // 2) if c else 0


def norm_exponent(q: int, ell: int, n: int) -> int:
    """Exponent e with x**e equal to the norm from level n to level n-1."""
    Q = q ** (ell ** (n - 1))
    return sum(Q**i for i in range(ell))


def verify_degree(t: Tower, n: int) -> bool:
    """gen and marked at level n lie outside level n-1, and marked is not an l-th power at level n."""
    if not 1 <= n <= t.height:
        return False
    lv = t.level(n)
    if lower_level(t, lv.gen) or lower_level(t, lv.marked):
        return False
    exponent = (t.order_of_level(n) - 1) // t.ell
    return tower_pow(t, lv.marked, exponent) != t.one(n)


def residue_symbol(t: Tower, n: int) -> TowerElement:
    """marked_n ** ((Q-1)/l), Q the size of level n; a primitive l-th root of unity in a valid tower."""
    return tower_pow(t, t.marked(n), (t.order_of_level(n) - 1) // t.ell)


def is_exceptional(t: Tower) -> bool:
    """q = 2 mod 3 and marked_0 = -3/4 in F_q (quadratic towers only)."""
    if t.kind != QUADRATIC or t.base.q % 3 != 2:
        return False
    F = t.base
    target = F.mul(F.neg(F.scalar(3)), F.inv(F.scalar(4)))
    return t.marked(0).coords[0] == target


def half_rule(t: Tower) -> bool:
    """Literal form of the exceptional starter: start = +-(p-1)/2 in the prime subfield."""
    F = t.base
    s = F.index(t.start)
    h = F.scalar((F.p - 1) // 2)
    return s in (h, F.neg(h))


# -- serialization --------------------------------------------------------------------

def element_to_tree(t: Tower, x: TowerElement):
    """Nested lists: a leaf is the base-field coefficient list, a node has l children."""
    F = t.base

    def build(coords):
        if len(coords) == 1:
            return list(F.unpack(coords[0]))
        h = len(coords) // t.ell
        return [build(coords[i * h : (i + 1) * h]) for i in range(t.ell)]

    return build(x.coords)


def element_from_tree(t: Tower, tree, level: int) -> TowerElement:
    F = t.base

    def flat(node, k):
        if k == 0:
            return [F.pack(node)]
        if len(node) != t.ell:
            raise LevelMismatch(f"node at level {k} has {len(node)} children, expected {t.ell}")
        return [c for child in node for c in flat(child, k - 1)]

    return TowerElement(level, tuple(flat(tree, level)))


def tower_to_json(t: Tower) -> dict:
    return {
        "kind": t.kind,
        "base": t.base.to_json(),
        "start": list(t.start.coeffs),
        "levels": [
            {"n": lv.n, "rel_minpoly": [element_to_tree(t, c) for c in lv.rel_minpoly]}
            for lv in t.levels
        ],
    }


def tower_from_json(obj: dict) -> Tower:
    """Rebuild a tower and check every stored relative minimal polynomial against the rebuilt one."""
    base = FieldSpec.from_json(obj["base"])
    t = build_tower(base, obj["kind"], obj["start"])
    for stored in obj["levels"]:
        t = extend(t)
        lv = t.level(stored["n"])
        expect = [element_to_tree(t, c) for c in lv.rel_minpoly]
        if expect != stored["rel_minpoly"]:
            raise InvalidTower(f"level {lv.n} relative minimal polynomial does not match")
    return t


def recursion_holds(t: Tower, n: int) -> bool:
    """gen_n is a root of its stored relative minimal polynomial (coefficients embedded at level n)."""
    lv = t.level(n)
    acc = t.zero(n)
    power = t.one(n)
    for c in lv.rel_minpoly:
        acc = t.add(acc, t.mul(t.embed(c, n), power))
        power = t.mul(power, lv.gen)
    return acc.is_zero()
