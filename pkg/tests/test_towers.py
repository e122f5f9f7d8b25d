import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modtower.basefield import Element, make_field
from modtower.errors import (
    DivisionByZero,
    EvenCharacteristic,
    InvalidTower,
    JOutOfRange,
    LevelMismatch,
    NoCubeStructure,
    QIsFour,
    ZeroToZero,
)
from modtower.towers import (
    CUBIC,
    QUADRATIC,
    build_tower,
    element_from_tree,
    element_to_tree,
    extend,
    find_alpha0,
    find_beta0,
    half_rule,
    is_exceptional,
    lower_level,
    marked_norm_scalar,
    norm_exponent,
    norm_to,
    recursion_holds,
    relative_norm,
    residue_symbol,
    stated_norm_scalar,
    tower_from_json,
    tower_inv,
    tower_mul,
    tower_pow,
    verify_degree,
)


def E(*c):
    return Element(tuple(c))


def coeffs(t, level):
    """Relative minimal polynomial of a level as lists of packed coordinates."""
    return [list(c.coords) for c in t.level(level).rel_minpoly]


# -- starters ----------------------------------------------------------------------------

def test_alpha0_q5():
    assert find_alpha0(make_field(5)) == E(2)


def test_alpha0_q13_by_brute_force():
    squares = {x * x % 13 for x in range(1, 13)}
    expected = next(a for a in range(13) if (a * a - 1) % 13 and (a * a - 1) % 13 not in squares)
    assert expected == 3
    assert find_alpha0(make_field(13)) == E(expected)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_alpha0_even_characteristic(m):
    with pytest.raises(EvenCharacteristic):
        find_alpha0(make_field(2, m))


def test_beta0_examples():
    assert find_beta0(make_field(7)) == E(3)
    with pytest.raises(QIsFour):
        find_beta0(make_field(2, 2))
    with pytest.raises(NoCubeStructure):
        find_beta0(make_field(5))


def test_beta0_first_in_enumeration():
    f = make_field(13)
    cubes = {x**3 % 13 for x in range(1, 13)}
    expected = next(b for b in range(13) if (b**3 - 1) % 13 and (b**3 - 1) % 13 not in cubes)
    assert find_beta0(f) == E(expected)


def test_build_rejects_bad_configurations():
    with pytest.raises(InvalidTower):
        build_tower(make_field(7), QUADRATIC)  # 7 = 3 mod 4
    with pytest.raises(QIsFour):
        build_tower(make_field(2, 2), CUBIC)
    with pytest.raises(InvalidTower):
        build_tower(make_field(5), CUBIC)
    with pytest.raises(InvalidTower):
        build_tower(make_field(5), "quartic")


def test_build_rejects_square_starter():
    with pytest.raises(InvalidTower):
        build_tower(make_field(5), QUADRATIC, 1)
    with pytest.raises(InvalidTower):
        build_tower(make_field(13), QUADRATIC, 0)  # -1 is a square mod 13


# -- extension ------------------------------------------------------------------------------

def test_extend_quadratic_q5():
    t = build_tower(make_field(5), QUADRATIC, 2, 1)
    assert coeffs(t, 1) == [[2], [4], [1]]  # Y^2 + 4Y + 2


def test_extend_cubic_q7():
    t = build_tower(make_field(7), CUBIC, 3, 1)
    # g(3, Y) = Y^3 + (6-243) Y^2 + (12-243) Y + (8-243) = Y^3 + Y^2 + 0 Y + 3 mod 7
    assert [(6 - 243) % 7, (12 - 243) % 7, (8 - 243) % 7] == [1, 0, 3]
    assert coeffs(t, 1) == [[3], [0], [1], [1]]


def test_extend_quadratic_q9_by_direct_expansion():
    f = make_field(3, 2, [1, 0, 1])
    t = build_tower(f, QUADRATIC, [2, 1], 1)
    a2 = f.mul(f.pack([2, 1]), f.pack([2, 1]))
    m8 = f.mul(f.scalar(8), a2)
    c1 = f.sub(f.scalar(6), m8)
    c0 = f.sub(f.scalar(9), m8)
    assert coeffs(t, 1) == [[c0], [c1], [1]]


def test_extend_shares_lower_levels():
    t2 = build_tower(make_field(5), QUADRATIC, 2, 2)
    t3 = extend(t2)
    assert t3.levels[:2] == t2.levels
    assert t3.height == 3


# -- arithmetic examples ------------------------------------------------------------------

@pytest.fixture(scope="module")
def t5():
    return build_tower(make_field(5), QUADRATIC, 2, 4)


@pytest.fixture(scope="module")
def t7():
    return build_tower(make_field(7), CUBIC, 3, 3)


def test_gen_squared_and_delta1(t5):
    a1 = t5.gen(1)
    assert tower_mul(t5, a1, a1) == t5.element(1, [3, 1])
    assert t5.marked(1) == t5.element(1, [2, 1])
    a0 = 2
    assert ((8 * a0 * a0 - 10) % 5, (8 * a0 * a0 - 6) % 5) == (2, 1)


def test_identity_and_pow_examples(t5):
    x = t5.element(2, [1, 2, 3, 4])
    assert tower_mul(t5, x, t5.one(2)) == x
    assert tower_pow(t5, x, 1) == x
    d1 = t5.marked(1)
    assert tower_pow(t5, d1, 8) == t5.one(1)
    assert tower_pow(t5, d1, 4) != t5.one(1)
    with pytest.raises(ZeroToZero):
        tower_pow(t5, t5.zero(1), 0)


def test_delta1_order_is_8_by_brute_force(t5):
    d1 = t5.marked(1)
    y = d1
    k = 1
    while y != t5.one(1):
        y = tower_mul(t5, y, d1)
        k += 1
    assert k == 8


def test_level_mismatch(t5):
    with pytest.raises(LevelMismatch):
        tower_mul(t5, t5.gen(1), t5.gen(2))
    with pytest.raises(LevelMismatch):
        t5.element(2, [1, 2])
    with pytest.raises(LevelMismatch):
        relative_norm(t5, 2, t5.gen(1))
    with pytest.raises(LevelMismatch):
        t5.level(9)


def test_inverse_of_zero(t5):
    with pytest.raises(DivisionByZero):
        tower_inv(t5, t5.zero(2))


def test_subfield_membership(t5):
    assert lower_level(t5, t5.embed(t5.gen(1), 3), 1)
    assert not lower_level(t5, t5.gen(3))
    assert t5.restrict(t5.embed(t5.gen(1), 3), 1) == t5.gen(1)
    with pytest.raises(LevelMismatch):
        t5.restrict(t5.gen(2), 1)


# -- norms --------------------------------------------------------------------------------

def test_norm_of_embedded_scalar(t5, t7):
    for t in (t5, t7):
        c = t.scalar(0, 3)
        for n in (1, 2):
            low = t.embed(c, n - 1)
            assert relative_norm(t, n, t.embed(c, n)) == tower_pow(t, low, t.ell)


def test_norm_examples(t5, t7):
    assert relative_norm(t5, 1, t5.marked(1)) == t5.scalar(0, 3)
    # the exponentiation oracle at q^2 + q + 1 = 57 gives gamma_0 = 5
    g1 = t7.marked(1)
    assert tower_pow(t7, g1, 57) == t7.embed(t7.scalar(0, 5), 1)
    assert relative_norm(t7, 1, g1) == t7.scalar(0, 5)


def test_norm_to_lands_in_base(t5):
    assert norm_to(t5, t5.marked(3), 3).level == 0
    with pytest.raises(JOutOfRange):
        norm_to(t5, t5.marked(2), 3)
    with pytest.raises(JOutOfRange):
        norm_to(t5, t5.marked(2), 0)


STATED_CONFIGS = [
    (make_field(5), QUADRATIC, 3),
    (make_field(3, 2, [1, 0, 1]), QUADRATIC, 3),
    (make_field(13), QUADRATIC, 3),
    (make_field(5, 2), QUADRATIC, 3),
    (make_field(7), CUBIC, 2),
    (make_field(13), CUBIC, 2),
    (make_field(2, 4, [1, 1, 0, 0, 1]), CUBIC, 2),
]


@pytest.mark.parametrize("f,kind,n_max", STATED_CONFIGS, ids=lambda v: str(getattr(v, "q", v)))
def test_stated_norm_identity(f, kind, n_max):
    t = build_tower(f, kind, None, n_max)
    for n in range(1, n_max + 1):
        for j in range(1, n + 1):
            c = t.scalar(n - j, f.from_index(stated_norm_scalar(t, j)))
            assert norm_to(t, t.marked(n), j) == t.mul(c, t.marked(n - j))


def test_cubic_norm_scalar_corrected_q19():
    f = make_field(19)
    t = build_tower(f, CUBIC, None, 2)
    stated_fails = False
    for n in (1, 2):
        for j in range(1, n + 1):
            lhs = norm_to(t, t.marked(n), j)
            fixed = t.mul(t.scalar(n - j, f.from_index(marked_norm_scalar(t, j))), t.marked(n - j))
            stated = t.mul(t.scalar(n - j, f.from_index(stated_norm_scalar(t, j))), t.marked(n - j))
            assert lhs == fixed
            stated_fails |= lhs != stated
    assert stated_fails


ORACLE_CONFIGS = [
    (make_field(5), QUADRATIC, 2, 3),
    (make_field(3, 2, [1, 0, 1]), QUADRATIC, [2, 1], 3),
    (make_field(11, 2, [2, 7, 1]), QUADRATIC, [4, 5], 2),
    (make_field(7), CUBIC, 3, 2),
    (make_field(2, 4, [1, 1, 0, 0, 1]), CUBIC, [0, 1], 2),
]


@pytest.mark.parametrize("f,kind,start,n_max", ORACLE_CONFIGS, ids=lambda v: str(getattr(v, "q", v)))
def test_relative_norm_matches_exponentiation(f, kind, start, n_max):
    t = build_tower(f, kind, start, n_max)
    rng = random.Random(f.q * 1000 + n_max)
    for n in range(1, n_max + 1):
        e = norm_exponent(f.q, t.ell, n)
        for _ in range(100):
            x = t.random_element(n, rng)
            assert t.embed(relative_norm(t, n, x), n) == tower_pow(t, x, e)


def test_residue_symbol_is_primitive_root_of_unity(t5, t7):
    for n in range(1, 5):
        assert residue_symbol(t5, n) == t5.neg(t5.one(n))
    for n in range(1, 4):
        w = residue_symbol(t7, n)
        assert w != t7.one(n)
        assert tower_pow(t7, w, 3) == t7.one(n)


def test_verify_degree(t5, t7):
    assert all(verify_degree(t5, n) for n in range(1, 5))
    assert all(verify_degree(t7, n) for n in range(1, 4))
    assert not verify_degree(t5, 7)


def _eval2(t, n, X, Y):
    """F(X, Y) = Y^2 - (48X + 64X^2) Y - 64X at level n."""
    s = lambda c: t.scalar(n, c)  # noqa: E731
    X2 = t.mul(X, X)
    lin = t.add(t.mul(s(48), X), t.mul(s(64), X2))
    return t.sub(t.sub(t.mul(Y, Y), t.mul(lin, Y)), t.mul(s(64), X))


def _eval3(t, n, X, Y):
    """G(X, Y) = Y^3 - (270X + 972X^2 + 729X^3) Y^2 - (972X + 729X^2) Y - 729X at level n."""
    s = lambda c: t.scalar(n, c)  # noqa: E731
    X2 = t.mul(X, X)
    X3 = t.mul(X2, X)
    Y2 = t.mul(Y, Y)
    a = t.add(t.add(t.mul(s(270), X), t.mul(s(972), X2)), t.mul(s(729), X3))
    b = t.add(t.mul(s(972), X), t.mul(s(729), X2))
    out = t.sub(t.mul(Y2, Y), t.mul(a, Y2))
    return t.sub(t.sub(out, t.mul(b, Y)), t.mul(s(729), X))


@pytest.mark.parametrize("f,kind,start,n_max", ORACLE_CONFIGS + [(make_field(19), CUBIC, None, 2)],
                         ids=lambda v: str(getattr(v, "q", v)))
def test_marked_recursion(f, kind, start, n_max):
    t = build_tower(f, kind, start, n_max)
    ev = _eval2 if kind == QUADRATIC else _eval3
    for n in range(1, n_max + 1):
        X = t.embed(t.marked(n - 1), n)
        assert ev(t, n, X, t.marked(n)).is_zero()
        assert recursion_holds(t, n)


# -- exceptional branch ---------------------------------------------------------------------

def test_exceptional_q5():
    t = build_tower(make_field(5), QUADRATIC, 2)
    assert is_exceptional(t) and half_rule(t)


@pytest.mark.parametrize("p,m", [(5, 1), (17, 1), (29, 1), (41, 1), (5, 3)])
def test_exceptional_rule_matches_half_rule(p, m):
    f = make_field(p, m)
    assert f.q % 3 == 2 and f.q % 4 == 1
    for x in f.elements():
        idx = f.index(x)
        d = f.sub(f.pow(idx, 2), 1)
        if d == 0 or f.pow(d, (f.q - 1) // 2) == 1:
            continue
        t = build_tower(f, QUADRATIC, x)
        assert is_exceptional(t) == half_rule(t)


def test_not_exceptional_when_q_not_2_mod_3():
    t = build_tower(make_field(13), QUADRATIC)
    assert not is_exceptional(t)


# -- field properties ---------------------------------------------------------------------

PROPERTY_TOWERS = [
    build_tower(make_field(5), QUADRATIC, 2, 3),
    build_tower(make_field(3, 2, [1, 0, 1]), QUADRATIC, [2, 1], 2),
    build_tower(make_field(7), CUBIC, 3, 2),
    build_tower(make_field(2, 4, [1, 1, 0, 0, 1]), CUBIC, [0, 1], 2),
]


@st.composite
def tower_triples(draw):
    t = draw(st.sampled_from(PROPERTY_TOWERS))
    n = draw(st.integers(0, t.height))
    size = t.ell**n
    q = t.base.q
    xs = [t.element(n, draw(st.lists(st.integers(0, q - 1), min_size=size, max_size=size))) for _ in range(3)]
    return t, xs


@settings(max_examples=300, deadline=None)
@given(tower_triples())
def test_tower_field_axioms(data):
    t, (x, y, z) = data
    assert t.mul(x, y) == t.mul(y, x)
    assert t.mul(x, t.add(y, z)) == t.add(t.mul(x, y), t.mul(x, z))
    assert t.mul(t.mul(x, y), z) == t.mul(x, t.mul(y, z))
    assert t.add(x, t.neg(x)).is_zero()
    if not x.is_zero():
        assert t.mul(x, tower_inv(t, x)) == t.one(x.level)


@settings(max_examples=200, deadline=None)
@given(tower_triples(), st.integers(0, 10**12), st.integers(0, 10**12))
def test_tower_pow_homomorphism(data, e1, e2):
    t, (x, y, _) = data
    if x.is_zero():
        return
    assert t.mul(t.pow(x, e1), t.pow(x, e2)) == t.pow(x, e1 + e2)
    if not y.is_zero():
        assert t.pow(t.mul(x, y), e1) == t.mul(t.pow(x, e1), t.pow(y, e1))
    assert t.pow(x, t.order_of_level(x.level) - 1) == t.one(x.level)


# -- serialization ---------------------------------------------------------------------------

@pytest.mark.parametrize("t", PROPERTY_TOWERS, ids=lambda t: f"{t.kind}-q{t.base.q}")
def test_tower_json_round_trip(t):
    text = json.dumps(t.to_json())
    back = tower_from_json(json.loads(text))
    assert back.levels == t.levels
    assert back.start == t.start and back.base == t.base


def test_tampered_json_rejected():
    t = PROPERTY_TOWERS[0]
    obj = json.loads(json.dumps(t.to_json()))
    obj["levels"][0]["rel_minpoly"][0] = [4]
    with pytest.raises(InvalidTower):
        tower_from_json(obj)


@pytest.mark.parametrize("t", PROPERTY_TOWERS, ids=lambda t: f"{t.kind}-q{t.base.q}")
def test_element_tree_round_trip(t):
    rng = random.Random(7)
    for n in range(t.height + 1):
        for _ in range(20):
            x = t.random_element(n, rng)
            tree = json.loads(json.dumps(element_to_tree(t, x)))
            assert element_from_tree(t, tree, n) == x


def test_element_tree_shape():
    t = PROPERTY_TOWERS[2]
    tree = element_to_tree(t, t.gen(1))
    assert tree == [[0], [1], [0]]
