import pytest
from hypothesis import assume, given, strategies as st

from quotfib.canon import cyclic_shift, diag_powers, reversal
from quotfib.cyclo import CycNum, root_of_unity
from quotfib.errors import (
    ConductorTooSmall,
    DimMismatch,
    NonIsolatedFixedLocus,
    ParseError,
    SingularMatrix,
)
from quotfib.projlin import (
    Mat,
    ProjMap,
    ProjPoint,
    commutation_check,
    eigenpairs,
    eval_g,
    fixed_points,
    group_closure,
    nullspace,
    proj_eq,
    proj_order,
    sample_tuples,
    sym_power,
)

from strategies import cycnums


def P(*coords, L=1):
    return ProjPoint(list(coords), L)


def diag(*entries, L=None):
    return ProjMap(Mat.diag(list(entries), L))


SWAP = ProjMap(Mat([[0, 1], [1, 0]]))


def invertible_2x2(L):
    return st.lists(cycnums(L, -3, 3), min_size=4, max_size=4).map(
        lambda e: Mat([[e[0], e[1]], [e[2], e[3]]], L)).filter(lambda M: not M.det().is_zero())


def points(L):
    return st.tuples(st.integers(-5, 5), st.integers(-5, 5)).filter(any).map(lambda xy: P(*xy, L=L))


def test_proj_eq_examples():
    A = ProjMap(Mat([[1, 2], [3, 5]]))
    assert proj_eq(A, ProjMap(Mat([[2, 4], [6, 10]])))
    assert not proj_eq(ProjMap.identity(3), cyclic_shift(3))
    w = root_of_unity(3, 1)
    D = diag(1, w, w * w)
    assert proj_eq(D, ProjMap(D.lift.scale(w)))


def test_singular_lift_rejected():
    with pytest.raises(SingularMatrix):
        ProjMap(Mat([[1, 2], [2, 4]]))


@pytest.mark.parametrize("n", range(1, 9))
def test_proj_order_of_canonical_forms(n):
    assert proj_order(diag_powers(n, root_of_unity(n, 1))) == n
    assert proj_order(cyclic_shift(n)) == n
    assert proj_order(ProjMap.identity(n)) == 1


def test_nullspace_examples():
    assert nullspace(Mat.identity(3)) == []
    assert len(nullspace(Mat([[0] * 3] * 3))) == 3
    basis = nullspace(Mat.diag([0, 1, 1]))
    assert [[int(v.as_fraction()) for v in b] for b in basis] == [[1, 0, 0]]


def test_fixed_points_examples():
    w = root_of_unity(3, 1)
    assert set(fixed_points(diag(1, w, w * w))) == {P(1, 0, 0, L=3), P(0, 1, 0, L=3), P(0, 0, 1, L=3)}
    shift = cyclic_shift(3, 3)
    expected = {P(1, om, om * om, L=3) for om in (CycNum.one(3), w, w * w)}
    assert set(fixed_points(shift)) == expected
    with pytest.raises(NonIsolatedFixedLocus):
        fixed_points(diag(1, -1, -1))


def test_fixed_points_need_the_right_field():
    with pytest.raises(ConductorTooSmall):
        fixed_points(cyclic_shift(3))


def test_sym_power_examples():
    for n in range(1, 11):
        assert proj_eq(sym_power(diag(-1, 1), n), diag(*[(-1) ** i for i in range(n + 1)]))
        assert proj_eq(sym_power(SWAP, n), reversal(n + 1))
        assert sym_power(ProjMap.identity(2), n) == ProjMap.identity(n + 1)
        w = root_of_unity(3, 1)
        assert proj_eq(sym_power(diag(w, 1), n), diag(*[w ** i for i in range(n + 1)]))


def test_eval_g_examples():
    assert eval_g([P(0, 1)] * 4) == P(1, 0, 0, 0, 0)
    assert eval_g([P(2, 1), P(-5, 1)]) == P(1, -3, -10)
    assert eval_g([P(1, 0), P(1, 0)]) == P(0, 0, 1)
    with pytest.raises(DimMismatch):
        eval_g([P(1, 0, 0)])


def test_commutation_check_examples():
    for n in range(1, 7):
        assert commutation_check(sym_power(diag(-1, 1), n), diag(-1, 1), 50)
        w = root_of_unity(3, 1)
        assert commutation_check(sym_power(diag(w, 1), n), diag(w, 1), 50)
    assert not commutation_check(ProjMap.identity(2), diag(-1, 1), 50)


def test_samples_include_degenerate_points_and_are_seeded():
    first = list(sample_tuples(3, 1, 10, seed=4))
    assert [P(1, 0)] * 3 in first and [P(0, 1)] * 3 in first
    assert first == list(sample_tuples(3, 1, 10, seed=4))
    assert first != list(sample_tuples(3, 1, 10, seed=5))


def test_json_round_trip_and_errors():
    A = cyclic_shift(4, 4)
    assert ProjMap.from_json(A.to_json()) == A
    with pytest.raises(ParseError):
        Mat.from_json({"dim": 2, "entries": [[{"conductor": 1, "coeffs": ["1/1"]}]]})


def test_group_closure_of_klein_group():
    assert len(group_closure([diag(-1, 1), SWAP], ProjMap.identity(2))) == 4


@given(st.data())
def test_proj_eq_is_an_equivalence(data):
    A = ProjMap(data.draw(invertible_2x2(4)))
    s = data.draw(cycnums(4, nonzero=True))
    t = data.draw(cycnums(4, nonzero=True))
    B, C = ProjMap(A.lift.scale(s)), ProjMap(A.lift.scale(s * t))
    assert proj_eq(A, A) and proj_eq(B, A) and proj_eq(A, B) and proj_eq(A, C)


@given(st.data(), st.integers(min_value=1, max_value=5))
def test_sym_power_is_a_homomorphism(data, n):
    M, N = data.draw(invertible_2x2(3)), data.draw(invertible_2x2(3))
    assert sym_power(M @ N, n) == sym_power(M, n) @ sym_power(N, n)
    assert proj_eq(ProjMap(sym_power(M, n)) @ ProjMap(sym_power(M.inverse(), n)), ProjMap.identity(n + 1, 3))


@given(st.data(), st.integers(min_value=1, max_value=5))
def test_naturality_of_eval_g(data, n):
    M = ProjMap(data.draw(invertible_2x2(4)))
    pts = [data.draw(points(4)) for _ in range(n)]
    assert sym_power(M, n) @ eval_g(pts) == eval_g([M @ p for p in pts])


@given(st.data(), st.integers(min_value=2, max_value=5))
def test_eval_g_is_symmetric(data, n):
    pts = [data.draw(points(1)) for _ in range(n)]
    perm = data.draw(st.permutations(pts))
    assert eval_g(pts) == eval_g(perm)


@given(st.lists(st.integers(0, 11), min_size=3, max_size=3))
def test_fixed_points_of_diagonal_maps(exps):
    L = 12
    A = diag(*[root_of_unity(L, e) for e in exps], L=L)
    if len(set(exps)) == 2:
        with pytest.raises(NonIsolatedFixedLocus):
            fixed_points(A)
        return
    assume(len(set(exps)) == 3)
    fps = fixed_points(A)
    assert len(fps) == 3
    assert all(A @ p == p for p in fps)


@given(st.integers(min_value=2, max_value=6))
def test_eigenpairs_of_shift(n):
    L = n if n % 2 == 0 else 2 * n
    pairs = eigenpairs(cyclic_shift(n, L))
    assert len(pairs) == n
    for e, p in pairs:
        assert cyclic_shift(n, L).lift.apply(list(p.coords)) == [e * c for c in p.coords]
