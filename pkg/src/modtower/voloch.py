"""Comparison with the coset-counting lower bound for the order of a - 1.

For a of order r and degree d over F_q with r < d^(2 - 2 eps), the order of
a - 1 is at least exp((1 - eta) (2 eps / 3) d^(eps/3) ln d) once d is large.
This module evaluates that bound, builds root-of-unity instances inside the
towers, checks the hypotheses that can be checked, and tabulates where the
tower bounds stop beating it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import mpmath

from .basefield import FieldSpec
from .errors import DomainError, NotApplicable, NotCoprime
from .numtheory import ord_ell
from .orderengine import OrderResult, bound_exponent, group_order_factored, multiplicative_order
from .towers import CUBIC, QUADRATIC, Tower, TowerElement, build_tower, tower_pow

_EXACT_DEN_LIMIT = 1000
_MP_DPS = 80


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def _power_cmp(x: int, d: int, a: Fraction) -> int:
    """Sign of x - d**a for integers x >= 0, d >= 1 and rational a >= 0."""
    if a.denominator <= _EXACT_DEN_LIMIT and a.numerator * d.bit_length() <= 1 << 20:
        lhs = x**a.denominator
        rhs = d**a.numerator
        return (lhs > rhs) - (lhs < rhs)
    with mpmath.workdps(_MP_DPS):
        diff = mpmath.mpf(x) - mpmath.power(d, mpmath.mpf(a.numerator) / a.denominator)
        if abs(diff) < mpmath.mpf(10) ** (-_MP_DPS // 2):
            return 0
        return 1 if diff > 0 else -1


def pow_floor(d: int, a) -> int:
    """floor(d**a), exact at integer values."""
    a = _frac(a)
    k = math.floor(d ** float(a))
    while _power_cmp(k + 1, d, a) <= 0:
        k += 1
    while k > 0 and _power_cmp(k, d, a) > 0:
        k -= 1
    return k


def pow_ceil(d: int, a) -> int:
    """ceil(d**a), exact at integer values."""
    a = _frac(a)
    k = pow_floor(d, a)
    return k if _power_cmp(k, d, a) == 0 else k + 1


def multiplicative_order_mod(q: int, r: int) -> int:
    if math.gcd(q, r) != 1:
        raise NotCoprime(f"gcd({q}, {r}) != 1")
    if r == 1:
        return 1
    k, x = 1, q % r
    while x != 1:
        x = x * q % r
        k += 1
    return k


def predicted_degree(q: int, ell: int, n: int) -> int:
    """ell^(n - ord_ell(q - 1)), the degree of a primitive ell^n-th root of unity when ell | q - 1 (and 4 | q - 1 for ell = 2)."""
    return ell ** (n - ord_ell(q - 1, ell))


# -- instances ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VolochInstance:
    q: int
    ell: int
    n: int
    a: TowerElement
    d: int
    r: int
    tower: Tower


def root_of_unity_instance(f: FieldSpec, ell: int, n: int) -> VolochInstance:
    """A primitive ell^n-th root of unity, built in the tower of height n - ord_ell(q - 1).

    Candidates are taken in enumeration order among elements outside the
    next-lower level; the first whose (Q-1)/ell^n power has exact order
    ell^n is used.
    """
    q = f.q
    if (q - 1) % ell:
        raise NotApplicable(f"{ell} does not divide q - 1 = {q - 1}")
    v = ord_ell(q - 1, ell)
    if n <= v:
        raise NotApplicable(f"n = {n} <= ord_{ell}(q-1) = {v}: the root of unity lies in F_q")
    kind = QUADRATIC if ell == 2 else CUBIC
    if (ell == 2 and q % 4 != 1) or (ell == 3 and q == 4):
        raise NotApplicable(f"no {kind} tower over F_{q}")
    h = n - v
    t = build_tower(f, kind, None, h)
    r = ell**n
    Q = t.order_of_level(h)
    cofactor = (Q - 1) // r
    one = t.one(h)
    size = ell**h
    idx = q ** (ell ** (h - 1))  # first element outside level h-1
    while True:
        coords = []
        k = idx
        for _ in range(size):
            k, c = divmod(k, q)
            coords.append(c)
        x = TowerElement(h, tuple(coords))
        a = tower_pow(t, x, cofactor)
        if tower_pow(t, a, r // ell) != one:
            return VolochInstance(q, ell, n, a, ell**h, r, t)
        idx += 1


# -- the bound ----------------------------------------------------------------------------

class VolochBound(NamedTuple):
    ln: float
    log2: float


def check_domain(eps, eta, bypass: bool = False):
    eps, eta = float(eps), float(eta)
    if bypass:
        ok = 0 < eps <= 1 and 0 <= eta < 1
    else:
        ok = 0 < eps < 1 and 0 < eta < 1
    if not ok:
        hint = "" if bypass else " (eps = 1, eta = 0 need the diagnostic bypass)"
        raise DomainError(f"eps = {eps}, eta = {eta} outside the admissible range{hint}")


def voloch_bound(d: int, eps, eta, bypass: bool = False) -> VolochBound:
    """(1 - eta) (2 eps / 3) d^(eps/3) ln d, with its base-2 counterpart."""
    check_domain(eps, eta, bypass)
    return _bound_from_log(math.log(d), float(eps), float(eta))


def _bound_from_log(log_d: float, eps: float, eta: float) -> VolochBound:
    ln = (1 - eta) * (2 * eps / 3) * math.exp(eps / 3 * log_d) * log_d
    return VolochBound(ln, ln / math.log(2))


@dataclass(frozen=True)
class VolochReport:
    eps: float
    eta: float
    d: int
    r: int
    N: int
    T: int
    bound_log: float
    hyp_r: bool
    hyp_NT: bool
    hyp_binomial: bool | None
    order_of_a_minus_1: OrderResult | None = None

    @property
    def bound_log2(self) -> float:
        return self.bound_log / math.log(2)

    @property
    def checkable_hold(self) -> bool:
        return self.hyp_r and self.hyp_NT


def coset_parameters(d: int, eps) -> tuple[int, int]:
    """N = ceil(d^(1 - eps)), T = floor(d^(eps/3))."""
    e = _frac(eps)
    return pow_ceil(d, 1 - e), pow_floor(d, e / 3)


def hypotheses_from(d: int, r: int, eps, eta, bypass: bool = False) -> VolochReport:
    check_domain(eps, eta, bypass)
    e = _frac(eps)
    N, T = coset_parameters(d, e)
    hyp_r = _power_cmp(r, d, 2 - 2 * e) < 0
    return VolochReport(
        float(eps), float(eta), d, r, N, T,
        voloch_bound(d, eps, eta, bypass).ln,
        hyp_r, N * T < d, None,
    )


def hypotheses_check(inst: VolochInstance, eps, eta, bypass: bool = False, order_limit: int = 16) -> VolochReport:
    """Evaluate r < d^(2-2eps) and N*T < d exactly; the binomial estimate stays undecided.

    When d <= order_limit the order of a - 1 is computed as well.
    """
    rep = hypotheses_from(inst.d, inst.r, eps, eta, bypass)
    if inst.d <= order_limit:
        t = inst.tower
        h = inst.a.level
        b = t.sub(inst.a, t.one(h))
        g = group_order_factored(inst.q, inst.ell, h)
        rep = VolochReport(**{**rep.__dict__, "order_of_a_minus_1": multiplicative_order(t, b, g)})
    return rep


# -- cosets -----------------------------------------------------------------------------

@dataclass(frozen=True)
class CosetProfile:
    r: int
    q: int
    N: int
    d: int
    cosets: tuple[tuple[int, ...], ...]
    sizes: tuple[int, ...]

    @property
    def coset_count(self) -> int:
        return len(self.cosets)

    @property
    def coprime_count(self) -> int:
        return sum(1 for k in range(1, self.N + 1) if math.gcd(k, self.r) == 1)


def coset_profile(r: int, q: int, N: int) -> CosetProfile:
    """Sizes |J_G| = #{1 <= k <= N : k mod r in G} for each coset G of <q> in (Z/r)*."""
    if math.gcd(q, r) != 1:
        raise NotCoprime(f"gcd({q}, {r}) != 1")
    d = multiplicative_order_mod(q, r)
    seen = set()
    cosets = []
    for u in range(1, r + 1):
        u %= r
        if math.gcd(u, r) != 1 or u in seen:
            continue
        coset = []
        x = u
        for _ in range(d):
            coset.append(x)
            x = x * q % r
        seen.update(coset)
        cosets.append(tuple(sorted(coset)))
    cosets.sort()
    member = {x: i for i, c in enumerate(cosets) for x in c}
    sizes = [0] * len(cosets)
    for k in range(1, N + 1):
        i = member.get(k % r)
        if i is not None:
            sizes[i] += 1
    return CosetProfile(r, q, N, d, tuple(cosets), tuple(sizes))


# -- crossover --------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossoverRow:
    n: int
    d: int
    tower_log2: float
    voloch_log2: float

    @property
    def dominator(self) -> str:
        if self.tower_log2 > self.voloch_log2:
            return "tower"
        if self.tower_log2 < self.voloch_log2:
            return "voloch"
        return "tie"


CROSSOVER_SEARCH_LIMIT = 1 << 20


def _crossover_row(n: int, ord2: int, eps: float, eta: float) -> CrossoverRow:
    k = max(n - ord2, 0)
    return CrossoverRow(n, 2**k, float(bound_exponent(n, ord2)), _bound_from_log(k * math.log(2), eps, eta).log2)


def crossover_compare(ord2: int = 1, eps=1, eta=0, n_max: int = 20, bypass: bool = True):
    """Tower exponent n^2/2 + 3n/2 + ord2 against the log2 bound at d = 2^(n - ord2).

    Returns (rows for n = 1..n_max, crossover), where crossover is the largest
    n such that the tower bound is strictly larger at every level up to n.
    The search for the crossover continues past n_max when needed.
    """
    check_domain(eps, eta, bypass)
    eps, eta = float(eps), float(eta)
    rows = [_crossover_row(n, ord2, eps, eta) for n in range(1, n_max + 1)]
    n = 1
    while n <= CROSSOVER_SEARCH_LIMIT and _crossover_row(n, ord2, eps, eta).dominator == "tower":
        n += 1
    return rows, n - 1


def crossover_csv(rows) -> str:
    lines = ["n,tower_log2_bound,voloch_log2_bound,dominator"]
    for r in rows:
        lines.append(f"{r.n},{r.tower_log2:.6f},{r.voloch_log2:.6f},{r.dominator}")
    return "\n".join(lines) + "\n"
