from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from quotfib.canon import canonical_commuting_pair, diag_powers, reversal
from quotfib.classify import (
    DeltaSubgroup,
    FibrationClass,
    PairSpec,
    case5_delta,
    case5_delta_prime,
    classify,
    fiber_model,
    fixed_group,
    subgroup_normal_form,
    subgroup_span,
    verify_class,
)
from quotfib.cyclo import as_root_of_unity, root_of_unity
from quotfib.errors import NotASubgroup, ParseError
from quotfib.projlin import Mat, ProjMap, fixed_points, proj_eq
from quotfib.torsion import TorsionPoint

from strategies import small_ints


def T(a, b):
    return TorsionPoint(F(a), F(b))


def delta(*points):
    return DeltaSubgroup(tuple((p,) if isinstance(p, TorsionPoint) else p for p in points))


def diag(*entries, L=None):
    return ProjMap(Mat.diag(list(entries), L))


def all_pass(entries):
    return all(e["status"] == "pass" for e in entries)


def test_fixed_groups_of_pairs():
    assert fixed_group(PairSpec.alpha(3, 2)).invariants == (2, 2)
    assert fixed_group(PairSpec.beta(3)).invariants == (4, 4)
    assert fixed_group(PairSpec.gamma()).invariants == (2, 2)


def test_subgroup_normal_form_examples():
    assert (subgroup_normal_form(5, [(1, 0), (0, 1)]).a, subgroup_normal_form(5, [(1, 0), (0, 1)]).b) == (1, 1)
    nf = subgroup_normal_form(6, [])
    assert (nf.a, nf.b) == (6, 6)
    nf = subgroup_normal_form(4, [(2, 0), (0, 2)])
    assert (nf.a, nf.b) == (2, 2)


@given(st.integers(min_value=2, max_value=12), st.lists(st.tuples(small_ints(0, 11), small_ints(0, 11)), max_size=3))
def test_subgroup_normal_form_regenerates(m, gens):
    nf = subgroup_normal_form(m, gens)
    assert m % nf.b == 0 and nf.b % nf.a == 0
    t, u = nf.t, nf.u
    assert gcd((t[0] * u[1] - t[1] * u[0]) % m, m) == 1
    adapted = [((nf.a * t[0]) % m, (nf.a * t[1]) % m), ((nf.b * u[0]) % m, (nf.b * u[1]) % m)]
    assert subgroup_span(m, adapted) == subgroup_span(m, gens)


def test_classify_alpha_case4():
    pair = PairSpec.alpha(3, 2)
    cls = classify(pair, delta(T("1/2", 0), T(0, "1/2")))
    assert cls.case == 4
    assert proj_eq(cls.generators[0], diag(1, -1, 1, -1))
    assert proj_eq(cls.generators[1], reversal(4))
    assert all_pass(verify_class(pair, cls, samples=20))


def test_classify_alpha_small_cases():
    assert classify(PairSpec.alpha(4, 2), delta()).case == 1
    cls = classify(PairSpec.alpha(4, 3), delta(T("1/3", "1/3")))
    w = root_of_unity(3, 1)
    assert cls.case == 3 and proj_eq(cls.generators[0], diag(*[w ** i for i in range(5)]))
    cls = classify(PairSpec.alpha(2, 4), delta(T("1/2", "1/2")))
    assert cls.case == 2 and proj_eq(cls.generators[0], diag(1, -1, 1))
    assert classify(PairSpec.alpha(3, 6), delta()).case == 1


@pytest.mark.parametrize("n", [1, 2, 5])
def test_every_order_two_subgroup_gives_the_same_class(n):
    pair = PairSpec.alpha(n, 2)
    classes = {classify(pair, delta(p)) for p in (T("1/2", 0), T(0, "1/2"), T("1/2", "1/2"))}
    assert len(classes) == 1 and next(iter(classes)).case == 2


def test_classify_beta_full():
    cls = classify(PairSpec.beta(2), delta(T("1/3", 0), T(0, "1/3")))
    assert cls.case == 5 and cls.params == (1, 1)
    w = root_of_unity(3, 1)
    assert proj_eq(cls.generators[0], diag(1, w, w * w))
    assert proj_eq(cls.generators[1] ** 3, ProjMap.identity(3, 3))
    assert not proj_eq(cls.generators[1], ProjMap.identity(3, 3))


def test_classify_beta_small_subgroup_still_case5():
    cls = classify(PairSpec.beta(3), delta(T("1/2", "1/2")))
    assert cls.case == 5
    a, b = cls.params
    assert 4 % b == 0 and b % a == 0 and (4 // a) * (4 // b) == 2
    assert classify(PairSpec.beta(3), delta()).case == 1


def test_classify_gamma():
    pair = PairSpec.gamma()
    half = T("1/2", "1/2")
    cls = classify(pair, delta((half, T(0, 0))))
    assert cls.case == 2 and proj_eq(cls.generators[0], diag(1, -1, 1))
    cls = classify(pair, delta((half, T(0, 0)), (T(0, 0), half)))
    assert cls.case == 4 and proj_eq(cls.generators[1], reversal(3))
    assert all_pass(verify_class(pair, cls, samples=20))


def test_not_a_subgroup():
    with pytest.raises(NotASubgroup):
        classify(PairSpec.alpha(2, 4), delta(T("1/2", 0)))
    with pytest.raises(NotASubgroup):
        classify(PairSpec.beta(2), delta(T("1/2", 0)))


def test_verify_case5_fixed_points():
    pair = PairSpec.beta(4)
    cls = classify(pair, delta(T("1/5", 0), T(0, "1/5")))
    entries = verify_class(pair, cls)
    assert all_pass(entries)
    d, dp = cls.generators
    fd, fdp = fixed_points(d), fixed_points(dp)
    assert len(fd) == len(fdp) == 5 and not set(fd) & set(fdp)


def test_tampered_generator_is_reported():
    pair = PairSpec.alpha(3, 2)
    cls = classify(pair, delta(T("1/2", 0), T(0, "1/2")))
    bad = cls.generators[1].lift.rows
    bad = [list(r) for r in bad]
    bad[0][3] = -bad[0][3]
    tampered = FibrationClass(cls.case, cls.n, (cls.generators[0], ProjMap(Mat(bad))))
    failing = {e["check_id"] for e in verify_class(pair, tampered) if e["status"] != "pass"}
    assert "case4.gen1.sym_power" in failing and "case4.gen1.commutation" in failing


@settings(max_examples=25)
@given(st.integers(min_value=1, max_value=5), st.data())
def test_beta_independent_of_generators(n, data):
    N = n + 1
    gens = data.draw(st.lists(st.tuples(small_ints(0, n), small_ints(0, n)), min_size=1, max_size=3))
    span = subgroup_span(N, gens)
    extra = data.draw(st.lists(st.sampled_from(sorted(span)), max_size=2))
    other = [g for g in gens] + extra
    pts = lambda gs: delta(*[T(F(x, N), F(y, N)) for x, y in gs])
    assert classify(PairSpec.beta(n), pts(gens)) == classify(PairSpec.beta(n), pts(list(reversed(other))))


@pytest.mark.parametrize("n", range(1, 6))
def test_case5_pair_is_already_canonical(n):
    N = n + 1
    res = canonical_commuting_pair(case5_delta(n, 1), case5_delta_prime(n, 1))
    k, j = as_root_of_unity(res.lam)
    assert k == N and gcd(j, N) == 1
    assert proj_eq(res.phi_canon, diag_powers(N, res.lam))


def test_fiber_models_are_faithful():
    assert len(fiber_model(PairSpec.alpha(1, 2))) == 4
    assert len({m.normalized() for m in fiber_model(PairSpec.alpha(1, 2)).values()}) == 4
    assert len(fiber_model(PairSpec.alpha(1, 3))) == 3
    assert len(fiber_model(PairSpec.gamma())) == 4


def test_json_round_trips():
    pair = PairSpec.alpha(3, 4)
    assert PairSpec.from_json(pair.to_json()) == pair
    cls = classify(PairSpec.beta(2), delta(T("1/3", 0)))
    assert FibrationClass.from_json(cls.to_json()) == cls
    d = delta(T("1/3", 0))
    assert DeltaSubgroup.from_json(d.to_json()) == d
    with pytest.raises(ParseError):
        PairSpec.from_json({"kind": "alpha", "n": 2, "c_order": 5})
    with pytest.raises(ParseError):
        PairSpec.from_json({"kind": "gamma", "n": 3})


@pytest.mark.parametrize("n,b", [(3, 1), (3, 2), (5, 2), (5, 3)])
def test_case5_shift_moves_coordinates(n, b):
    from quotfib.projlin import ProjPoint
    N = n + 1
    z = list(range(1, N + 1))
    image = case5_delta_prime(n, b) @ ProjPoint(z, N)
    expected = z[N - b:] + z[:N - b]
    assert image == ProjPoint(expected, N)
