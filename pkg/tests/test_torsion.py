import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from quotfib.errors import EnumerationTooLarge, InvalidUnit, NotGenerating, ParseError, WrongOrder
from quotfib.torsion import (
    EISENSTEIN,
    GAUSS,
    GENERIC,
    I_UNIT,
    MINUS_ONE,
    ZETA3,
    ZETA6,
    Divisor,
    TorsionPoint,
    Unit,
    brute_force_fix_divisors,
    cm_action,
    fix_divisors,
    fixed_group_of_unit,
    gamma_fixed_group,
    generating_pairs,
    is_single_cycle,
    point_arith,
    scalar_mul,
    solve_translation_start,
    translation_permutation,
)

from strategies import torsion_coords


def T(a, b):
    return TorsionPoint(F(a), F(b))


ZERO = T(0, 0)


def test_point_arith_examples():
    assert point_arith(T("1/3", 0), T("1/3", 0), "add") == T("2/3", 0)
    assert scalar_mul(3, T("1/3", "2/3")) == ZERO
    assert point_arith(T("1/2", "1/2"), T("1/2", "1/2"), "sub") == ZERO
    assert T("5/4", "-1/4") == T("1/4", "3/4")


def test_cm_action_examples():
    assert cm_action(GAUSS, I_UNIT, T("1/2", 0)) == T(0, "1/2")
    assert cm_action(GAUSS, MINUS_ONE, T("1/4", "1/4")) == T("3/4", "3/4")
    assert cm_action(EISENSTEIN, ZETA6, T("1/3", 0)) == T(0, "1/3")
    with pytest.raises(InvalidUnit):
        cm_action(GENERIC, I_UNIT, T("1/2", 0))


@given(torsion_coords(12), torsion_coords(12))
def test_units_act_with_their_order(a, b):
    P = TorsionPoint(a, b)
    for curve, u in ((GAUSS, I_UNIT), (EISENSTEIN, ZETA6), (EISENSTEIN, ZETA3)):
        Q = P
        for _ in range(u.order):
            Q = cm_action(curve, u, Q)
        assert Q == P


def test_fixed_group_orders():
    assert fixed_group_of_unit(GAUSS, MINUS_ONE).order == 4
    assert fixed_group_of_unit(GAUSS, I_UNIT).order == 2
    assert fixed_group_of_unit(EISENSTEIN, ZETA3).order == 3
    assert fixed_group_of_unit(EISENSTEIN, ZETA6).order == 1
    assert fixed_group_of_unit(GENERIC, MINUS_ONE).invariants == (2, 2)
    with pytest.raises(InvalidUnit):
        fixed_group_of_unit(GAUSS, Unit(1))


def test_fixed_groups_are_fixed():
    for curve, u in ((GAUSS, MINUS_ONE), (GAUSS, I_UNIT), (EISENSTEIN, ZETA3)):
        for (P,) in fixed_group_of_unit(curve, u).elements:
            assert cm_action(curve, u, P) == P


def test_gamma_fixed_group():
    G = gamma_fixed_group()
    assert G.order == 4
    assert G.generators == ((T("1/2", "1/2"), ZERO), (ZERO, T("1/2", "1/2")))
    assert all(2 * p == ZERO for e in G.elements for p in e)


def test_solve_translation_start():
    sols = solve_translation_start(2, T("1/3", 0))
    assert len(sols) == 9 and len(set(sols)) == 9
    assert set(sols) == {T(F(i, 3), F(j, 3)) for i in range(3) for j in range(3)}
    x = T("1/2", 0)
    sols = solve_translation_start(1, x)
    assert len(sols) == 4 and all(2 * s + x == ZERO for s in sols)
    with pytest.raises(WrongOrder):
        solve_translation_start(2, T("1/2", 0))


def test_fix_divisors_example():
    x, y = T("1/3", 0), T(0, "1/3")
    divs = fix_divisors(2, x, y)
    assert len(divs) == 3
    assert divs[0] == Divisor((ZERO, T("1/3", 0), T("2/3", 0)))
    assert translation_permutation(2, x, y) == (1, 2, 0)
    assert not set(divs) & set(fix_divisors(2, y, x))
    with pytest.raises(NotGenerating):
        fix_divisors(2, x, 2 * x)


def test_brute_force_examples():
    x = T("1/3", 0)
    found = brute_force_fix_divisors(2, x)
    assert len(found) == 3
    for _, y in [p for p in generating_pairs(3) if p[0] == x]:
        assert found == set(fix_divisors(2, x, y))
    assert len(brute_force_fix_divisors(1, T("1/2", 0))) == 2
    assert all(d.translate(x) == d for d in found)
    with pytest.raises(EnumerationTooLarge):
        brute_force_fix_divisors(5, T("1/6", 0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_oracle_agrees_on_every_generating_pair(n):
    for x, y in generating_pairs(n + 1):
        fix = fix_divisors(n, x, y)
        assert set(fix) == brute_force_fix_divisors(n, x)
        assert all(d.degree == n + 1 and d.point_sum() == ZERO for d in fix)
        assert not set(fix) & set(fix_divisors(n, y, x))


@given(st.data())
def test_translation_permutation_is_a_full_cycle(data):
    n = data.draw(st.integers(min_value=1, max_value=4))
    x, y = data.draw(st.sampled_from(generating_pairs(n + 1)))
    perm = translation_permutation(n, x, y)
    assert is_single_cycle(perm)
    assert all(perm[m] != m for m in range(n + 1))
    p = list(range(n + 1))
    for _ in range(n + 1):
        p = [perm[i] for i in p]
    assert p == list(range(n + 1))


def test_sampled_oracle_at_n4():
    pairs = random.Random(1).sample(generating_pairs(5), 5)
    for x, y in pairs:
        assert set(fix_divisors(4, x, y)) == brute_force_fix_divisors(4, x)


def test_json_round_trip():
    P = T("2/5", "-1/5")
    assert TorsionPoint.from_json(P.to_json()) == P
    D = Divisor((P, P, ZERO))
    assert Divisor.from_json(D.to_json()) == D
    with pytest.raises(ParseError):
        TorsionPoint.from_json({"a": "1/2"})
