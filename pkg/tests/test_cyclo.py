from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from quotfib.cyclo import (
    CycNum,
    arith,
    as_root_of_unity,
    cyclotomic_poly,
    embed,
    kth_root,
    root_of_unity,
    totient,
    unity,
)
from quotfib.errors import ConductorMismatch, DivisionByZero, ParseError

from strategies import CONDUCTORS, cycnums


def z(L, j=1):
    return root_of_unity(L, j)


def test_totient_and_cyclotomic_poly():
    assert [totient(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_root_of_unity_examples():
    assert z(4, 2) == CycNum.rational(4, -1)
    w = z(3)
    assert w * w + w + 1 == 0
    s = z(6)
    assert s * s - s + 1 == 0
    assert embed(s, 6) == 1 + embed(w, 6)


def test_arith_examples():
    i = z(4)
    assert arith(i, i, "mul") == CycNum.rational(4, -1)
    x = CycNum(5, [1, 2, 0, Fraction(1, 3)])
    assert arith(x, x, "div") == 1
    total = CycNum.zero(5)
    for j in range(5):
        total = arith(total, z(5, j), "add")
    assert total == 0


def test_embed_examples():
    assert embed(CycNum.rational(2, -1), 12) == CycNum.rational(12, -1)
    assert embed(z(3), 12) == z(12, 4)
    assert embed(z(4), 12) * embed(z(3), 12) == z(12, 7)


def test_as_root_of_unity_examples():
    assert as_root_of_unity(CycNum.one(1)) == (1, 0)
    assert as_root_of_unity(-z(3)) == (6, 5)
    assert as_root_of_unity(CycNum.rational(1, 2)) is None
    assert as_root_of_unity(1 + z(4)) is None


def test_unity_and_kth_root():
    assert unity(12, 3) == z(12, 4)
    assert unity(12, 5) is None
    two = CycNum.rational(8, 2)
    r = kth_root(two, 2)
    assert r is not None and r * r == two
    assert kth_root(CycNum.rational(4, 2), 2) is None
    assert kth_root(z(12), 3) is None
    assert kth_root(z(12, 3), 3) ** 3 == z(12, 3)
    assert kth_root(CycNum.rational(3, -8), 3) ** 3 == CycNum.rational(3, -8)


def test_errors():
    with pytest.raises(ConductorMismatch):
        z(3) + z(4)
    with pytest.raises(DivisionByZero):
        CycNum.one(5) / CycNum.zero(5)
    with pytest.raises(ParseError):
        CycNum.from_json({"conductor": 3, "coeffs": ["1/2"]})


def test_json_round_trip():
    x = CycNum(12, [Fraction(1, 2), -3, 0, Fraction(7, 5)])
    assert CycNum.from_json(x.to_json()) == x


def test_complex_embedding_matches():
    x = CycNum(12, [1, 2, -1, Fraction(1, 3)])
    y = CycNum(12, [0, -1, 2, 1])
    assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) < 1e-9


@pytest.mark.parametrize("L", CONDUCTORS)
@given(data=st.data())
def test_field_axioms(L, data):
    x, y, w = (data.draw(cycnums(L)) for _ in range(3))
    assert (x + y) + w == x + (y + w)
    assert (x * y) * w == x * (y * w)
    assert x * (y + w) == x * y + x * w
    assert x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == 1


@pytest.mark.parametrize("L", [3, 4, 5, 6])
@given(data=st.data())
def test_embed_is_a_homomorphism(L, data):
    x, y = data.draw(cycnums(L)), data.draw(cycnums(L))
    T = 2 * L
    assert embed(x * y, T) == embed(x, T) * embed(y, T)
    assert embed(x + y, T) == embed(x, T) + embed(y, T)


@given(L=st.integers(min_value=1, max_value=24), j=st.integers(min_value=-30, max_value=30))
def test_root_of_unity_order(L, j):
    k = L // gcd(L, j % L or L)
    w = z(L, j)
    assert w ** k == 1
    assert all(w ** d != 1 for d in range(1, k))
    assert as_root_of_unity(w)[0] == k


@given(L=st.sampled_from([3, 4, 5, 8, 12]), j=st.integers(min_value=0, max_value=23))
def test_galois_preserves_products(L, j):
    t = next(t for t in range(1, L + 1) if gcd(t, L) == 1 and t > 1) if L > 2 else 1
    x, y = z(L, j) + 2, z(L, j + 1) - 1
    assert (x * y).galois(t) == x.galois(t) * y.galois(t)
