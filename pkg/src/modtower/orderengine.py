"""Group orders, exact element orders, and the lower bounds on them."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InexactOrder, ZeroElement
from .factoring import DEFAULT_BUDGET, Factorization, factor_integer, merge_factorizations
from .numtheory import ord_ell
from .towers import QUADRATIC, Tower, TowerElement, half_rule, is_exceptional, tower_pow


def telescoped_cofactor(q: int, ell: int, j: int) -> int:
    """C_j = q^(2^j) + 1 (ell = 2) or q^(2*3^j) + q^(3^j) + 1 (ell = 3)."""
    b = q ** (ell**j)
    return sum(b**i for i in range(ell))


def group_order_factored(q: int, ell: int, n: int, budget: int = DEFAULT_BUDGET, parallel: bool = False) -> Factorization:
    """Factor q^(ell^n) - 1 through (q - 1) * prod_{j<n} C_j."""
    parts = [q - 1] + [telescoped_cofactor(q, ell, j) for j in range(n)]
    if parallel and len(parts) > 1:
        with ProcessPoolExecutor() as ex:
            facs = list(ex.map(factor_integer, parts, [budget] * len(parts)))
    else:
        facs = [factor_integer(c, budget) for c in parts]
    return merge_factorizations(facs)


@dataclass(frozen=True)
class OrderResult:
    order: int
    factored: Factorization
    exact: bool

    @property
    def log2(self) -> float:
        return math.log2(self.order)


def multiplicative_order(t: Tower, x: TowerElement, g: Factorization) -> OrderResult:
    """Order of x given the factored order of the unit group at x's level.

    For each prime power r^e of the group order, x^(N / r^e) is raised to
    the r-th power until it reaches 1, which yields the r-part of the order.
    With an incomplete factorization the product of the r-parts divides the
    true order; it is exact when x already vanishes on it.
    """
    if x.is_zero():
        raise ZeroElement("zero has no multiplicative order")
    N = g.n
    if N != t.order_of_level(x.level) - 1:
        raise ValueError(f"factorization is for {N}, not the unit group at level {x.level}")
    one = t.one(x.level)
    parts = []
    order = 1
    for r, e in g.factors:
        y = tower_pow(t, x, N // r**e)
        k = 0
        while y != one:
            y = tower_pow(t, y, r)
            k += 1
        if k:
            parts.append((r, k))
            order *= r**k
    exact = g.complete or tower_pow(t, x, order) == one
    return OrderResult(order, Factorization(order, tuple(parts)), exact)


def check_order(t: Tower, x: TowerElement, res: OrderResult) -> bool:
    """x^order == 1 and x^(order/r) != 1 for every prime r of the order."""
    one = t.one(x.level)
    if tower_pow(t, x, res.order) != one:
        return False
    return all(tower_pow(t, x, res.order // r) != one for r in res.factored.primes)


# -- bounds ------------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    kind: str
    q: int
    n: int
    exponent: int
    exceptional: bool
    bound: int
    half_rule: bool | None = None  # literal +-(p-1)/2 starter test, quadratic only

    @property
    def ell(self) -> int:
        return 2 if self.kind == QUADRATIC else 3

    @property
    def exponent_fraction(self) -> Fraction:
        return Fraction(self.exponent)

    @property
    def log2(self) -> float:
        return self.exponent * math.log2(self.ell)


def bound_exponent(n: int, val: int) -> int:
    """n^2/2 + 3n/2 + val, an integer since n^2 + 3n is even."""
    return (n * n + 3 * n) // 2 + val


def bound_quadratic(q: int, n: int, t: Tower) -> BoundReport:
    exceptional = is_exceptional(t)
    exp = bound_exponent(n, ord_ell(q - 1, 2)) - (1 if exceptional else 0)
    return BoundReport(QUADRATIC, q, n, exp, exceptional, 2**exp, half_rule(t))


def bound_cubic(q: int, n: int) -> BoundReport:
    exp = bound_exponent(n, ord_ell(q - 1, 3))
    return BoundReport("cubic", q, n, exp, False, 3**exp)


def bound_for(t: Tower, n: int) -> BoundReport:
    if t.kind == QUADRATIC:
        return bound_quadratic(t.base.q, n, t)
    return bound_cubic(t.base.q, n)


# -- theorem clauses -------------------------------------------------------------------

PASS, WARN, FAIL = "PASS", "WARN", "FAIL"


@dataclass(frozen=True)
class Clause:
    name: str
    status: str
    detail: str


@dataclass(frozen=True)
class TheoremReport:
    kind: str
    q: int
    n: int
    order: int
    bound: int
    clauses: tuple[Clause, ...] = field(default_factory=tuple)

    @property
    def status(self) -> str:
        statuses = {c.status for c in self.clauses}
        for s in (FAIL, WARN):
            if s in statuses:
                return s
        return PASS


def verify_theorem(t: Tower, n: int, order: OrderResult, b: BoundReport) -> TheoremReport:
    """Check the three ingredients of the lower bound against a computed order.

    (i) order > bound, (ii) ord_l(order) >= n + ord_l(q - 1), (iii) a prime
    other than l dividing both the order and C_{n-j}/l, exceeding
    l^(n-j+1), for every j = 1..n (j = n may fail in the exceptional case).
    """
    if not order.exact:
        raise InexactOrder("theorem clauses need an exact order")
    q, ell = t.base.q, t.ell
    N = order.order
    clauses = []

    if N > b.bound:
        clauses.append(Clause("order>bound", PASS, f"{N} > {b.bound}"))
    elif N == b.bound:
        clauses.append(Clause("order>bound", WARN, f"bound attained, not exceeded: order {N} == bound {b.bound}"))
    else:
        clauses.append(Clause("order>bound", FAIL, f"{N} < {b.bound}"))

    need = n + ord_ell(q - 1, ell)
    have = ord_ell(N, ell)
    clauses.append(
        Clause(f"ord_{ell}(order)>=n+ord_{ell}(q-1)", PASS if have >= need else FAIL, f"{have} >= {need}")
    )

    primes = [r for r in order.factored.primes if r != ell]
    witnesses = {}
    failed = []
    for j in range(1, n + 1):
        c = telescoped_cofactor(q, ell, n - j) // ell
        threshold = ell ** (n - j + 1)
        hits = [r for r in primes if c % r == 0 and r > threshold]
        if hits:
            witnesses[j] = min(hits)
        else:
            failed.append(j)
    allowed = [n] if b.exceptional else []
    ok = all(j in allowed for j in failed) and len(set(witnesses.values())) == len(witnesses)
    required = n - 1 if b.exceptional else n
    detail = f"witnesses {dict(sorted(witnesses.items()))}, need {required} distinct"
    if failed:
        detail += f"; no witness for j in {failed}"
    clauses.append(Clause("odd-primes" if ell == 2 else "non-3-primes", PASS if ok else FAIL, detail))
    return TheoremReport(t.kind, q, n, N, b.bound, tuple(clauses))
