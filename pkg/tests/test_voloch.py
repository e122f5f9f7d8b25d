import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modtower.basefield import make_field
from modtower.errors import DomainError, NotApplicable, NotCoprime
from modtower.numtheory import ord_ell, prime_powers
from modtower.towers import tower_pow
from modtower.voloch import (
    coset_parameters,
    coset_profile,
    crossover_compare,
    crossover_csv,
    hypotheses_check,
    hypotheses_from,
    multiplicative_order_mod,
    pow_ceil,
    pow_floor,
    predicted_degree,
    root_of_unity_instance,
    voloch_bound,
)


# -- instances ---------------------------------------------------------------------------------

def test_instance_q5_n4():
    inst = root_of_unity_instance(make_field(5), 2, 4)
    assert (inst.d, inst.r) == (4, 16)
    assert multiplicative_order_mod(5, 16) == 4


def test_instance_not_applicable_inside_base():
    with pytest.raises(NotApplicable):
        root_of_unity_instance(make_field(5), 2, 2)


def test_instance_q7_cubic():
    inst = root_of_unity_instance(make_field(7), 3, 2)
    assert (inst.d, inst.r) == (3, 9)
    assert multiplicative_order_mod(7, 9) == 3


def test_instance_not_applicable_without_tower():
    with pytest.raises(NotApplicable):
        root_of_unity_instance(make_field(7), 2, 3)  # 7 = 3 mod 4
    with pytest.raises(NotApplicable):
        root_of_unity_instance(make_field(2, 2), 3, 2)
    with pytest.raises(NotApplicable):
        root_of_unity_instance(make_field(5), 3, 2)


@pytest.mark.parametrize("p,m,ell,n", [(5, 1, 2, 3), (5, 1, 2, 5), (3, 2, 2, 5), (13, 1, 2, 4), (13, 1, 3, 3), (7, 1, 3, 3), (2, 4, 3, 2)])
def test_instance_has_exact_order(p, m, ell, n):
    f = make_field(p, m)
    inst = root_of_unity_instance(f, ell, n)
    t = inst.tower
    one = t.one(inst.a.level)
    assert tower_pow(t, inst.a, inst.r) == one
    assert tower_pow(t, inst.a, inst.r // ell) != one
    assert inst.d == multiplicative_order_mod(f.q, inst.r) == predicted_degree(f.q, ell, n)
    assert inst.a.coords[inst.d // ell :] != (0,) * (inst.d - inst.d // ell)  # not in the next-lower level


def test_degree_formula_over_all_small_q():
    for p, m in prime_powers(121):
        q = p**m
        for ell in (2, 3):
            if (q - 1) % ell or (ell == 2 and q % 4 != 1):
                continue
            v = ord_ell(q - 1, ell)
            for n in range(v + 1, 13):
                assert multiplicative_order_mod(q, ell**n) == predicted_degree(q, ell, n)


def test_degree_formula_fails_for_q_3_mod_4():
    # order of 3 mod 2^n is 2^(n-2), not 2^(n-1)
    assert multiplicative_order_mod(3, 2**6) == 16 != predicted_degree(3, 2, 6)


def test_order_mod_requires_coprime():
    with pytest.raises(NotCoprime):
        multiplicative_order_mod(4, 16)


# -- bound -------------------------------------------------------------------------------------

def test_bound_examples():
    assert voloch_bound(1, 0.5, 0.5).ln == 0
    assert voloch_bound(2**10, 1, 0, bypass=True).log2 == pytest.approx(2 / 3 * 2 ** (10 / 3) * 10)
    assert round(voloch_bound(2**10, 1, 0, bypass=True).log2, 1) == 67.2
    assert round(voloch_bound(2**11, 1, 0, bypass=True).log2, 1) == 93.1


@pytest.mark.parametrize("eps,eta,bypass", [(1, 0, False), (0, 0.5, False), (1.5, 0, True), (0.5, 1, False), (0.5, -0.1, True), (0.5, 0, False)])
def test_domain_errors(eps, eta, bypass):
    with pytest.raises(DomainError):
        voloch_bound(16, eps, eta, bypass)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 10**6), st.floats(0.01, 1.0), st.floats(0.0, 0.99))
def test_bound_monotone_in_d(d, eps, eta):
    a = voloch_bound(d, eps, eta, bypass=True).ln
    b = voloch_bound(d + 1, eps, eta, bypass=True).ln
    assert b >= a


# -- hypotheses --------------------------------------------------------------------------------

def test_hyp_r_example_corrected():
    # eps = 0.5 gives the exponent 2 - 2 eps = 1, so r = 2^20 < d = 2^18 is false
    rep = hypotheses_from(2**18, 2**20, 0.5, 0.5)
    assert rep.hyp_r is False
    assert hypotheses_from(2**18, 2**17, 0.5, 0.5).hyp_r is True


def test_hyp_nt_example():
    assert coset_parameters(4, 0.9) == (2, 1)
    rep = hypotheses_from(4, 16, 0.9, 0.5)
    assert (rep.N, rep.T, rep.hyp_NT) == (2, 1, True)
    assert rep.hyp_binomial is None


def test_hypotheses_on_instance_computes_small_order():
    inst = root_of_unity_instance(make_field(5), 2, 4)
    rep = hypotheses_check(inst, 0.5, 0.5)
    assert rep.order_of_a_minus_1 is not None and rep.order_of_a_minus_1.exact
    assert rep.hyp_binomial is None
    # the comparison at small d is reported, not asserted
    assert isinstance(rep.order_of_a_minus_1.order >= math.exp(rep.bound_log), bool)


def test_exact_powers():
    assert pow_floor(2**18, Fraction(1, 2)) == 2**9
    assert pow_ceil(2**18, Fraction(1, 2)) == 2**9
    assert pow_ceil(2**18 + 1, Fraction(1, 2)) == 2**9 + 1
    assert pow_floor(1000, Fraction(1, 3)) == 10
    assert pow_floor(999, Fraction(1, 3)) == 9
    for d in range(1, 300):
        for a in (Fraction(1, 10), Fraction(3, 10), Fraction(1, 2), Fraction(2, 3)):
            k = pow_floor(d, a)
            assert k**a.denominator <= d**a.numerator < (k + 1) ** a.denominator


# -- cosets -------------------------------------------------------------------------------------

def test_coset_examples():
    prof = coset_profile(16, 5, 8)
    assert prof.cosets == ((1, 5, 9, 13), (3, 7, 11, 15))
    assert prof.sizes == (2, 2)
    prof = coset_profile(9, 7, 9)
    assert prof.cosets == ((1, 4, 7), (2, 5, 8))
    assert prof.sizes == (3, 3)
    with pytest.raises(NotCoprime):
        coset_profile(16, 4, 8)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 200), st.integers(2, 50), st.integers(1, 500))
def test_coset_counts(r, q, N):
    if math.gcd(q, r) != 1:
        return
    prof = coset_profile(r, q, N)
    phi = sum(1 for u in range(1, r + 1) if math.gcd(u, r) == 1)
    assert prof.coset_count * prof.d == phi
    assert sum(prof.sizes) == prof.coprime_count


# -- crossover -------------------------------------------------------------------------------

def test_crossover_default_is_11():
    rows, crossover = crossover_compare()
    assert crossover == 11
    assert rows[10].tower_log2 == 78 and rows[10].voloch_log2 == pytest.approx(67.196, abs=1e-3)
    assert rows[11].tower_log2 == 91 and rows[11].voloch_log2 == pytest.approx(93.128, abs=1e-3)
    assert rows[10].dominator == "tower" and rows[11].dominator == "voloch"


def test_crossover_weaker_bound_is_later():
    _, crossover = crossover_compare(1, 0.5, 0.5, n_max=5, bypass=False)
    assert crossover == 44


def test_crossover_csv_header():
    rows, _ = crossover_compare(n_max=2)
    assert crossover_csv(rows).splitlines()[0] == "n,tower_log2_bound,voloch_log2_bound,dominator"
