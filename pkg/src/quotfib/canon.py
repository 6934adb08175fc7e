"""Normal forms for finite abelian groups of projective transformations.

The shift on P^(n-1) is the matrix N with N e_j = e_(j-1) (indices mod n),
i.e. [z_0 : ... : z_(n-1)] -> [z_1 : ... : z_(n-1) : z_0].
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .cyclo import CycNum, as_root_of_unity, embed, kth_root, unity
from .errors import (
    ConductorTooSmall,
    DimMismatch,
    FixedSetsNotDisjoint,
    InvariantMismatch,
    NotCommuting,
    NotFaithful,
    NotFullCycle,
    NotKlein,
    NotWeightedCycle,
    OrderExceedsCap,
    ProductNotOne,
    WrongOrder,
)
from .projlin import (
    Mat,
    ProjMap,
    _order_and_scalar,
    common_conductor,
    eigenpairs,
    group_closure,
    nullspace,
    proj_eq,
    proj_order,
)

# conductor multipliers tried when eigenvectors need a larger field
DEFAULT_LADDER = (4, 8, 12, 24)


def shift_matrix(n: int, L: int = 1) -> Mat:
    return Mat.permutation([(i + 1) % n for i in range(n)], L)


def cyclic_shift(n: int, L: int = 1) -> ProjMap:
    return ProjMap._trusted(shift_matrix(n, L))


def diag_powers(n: int, lam: CycNum) -> ProjMap:
    """diag(1, lam, lam^2, ..., lam^(n-1))."""
    entries = [lam ** i for i in range(n)]
    return ProjMap._trusted(Mat.diag(entries, lam.conductor))


def reversal(m: int, L: int = 1) -> ProjMap:
    return ProjMap._trusted(Mat.permutation([m - 1 - i for i in range(m)], L))


def _order_exact(A: ProjMap, n: int, name: str):
    """Check A has order exactly n; returns c with lift^n = c I."""
    try:
        k, c = _order_and_scalar(A.lift, n)
    except OrderExceedsCap:
        raise WrongOrder(f"{name} does not have order {n}") from None
    if k != n:
        raise WrongOrder(f"{name} has order {k}, expected {n}")
    return c


def _ladder(L: int, extra) -> list[int]:
    out = []
    for f in (1, *extra):
        M = lcm(L, f)
        if M not in out:
            out.append(M)
    return out


def _on_ladder(maps, extra, fn):
    """Run fn on the maps embedded at successively larger conductors until
    the eigen data fits in the field."""
    L = common_conductor(*maps)
    last = None
    for M in _ladder(L, extra):
        try:
            return fn([m.embed(M) for m in maps])
        except ConductorTooSmall as exc:
            last = exc
    raise last


def diagonal_rescale(M: ProjMap) -> ProjMap:
    """D with D M D^-1 equal to the shift, for a weighted cycle M.

    M must have superdiagonal entries v_1..v_(n-1), corner entry v_0 at
    (n-1, 0), zeros elsewhere and v_0 * ... * v_(n-1) = 1. Then
    D = diag(v_0, v_0 v_1, ..., v_0 ... v_(n-2), 1).
    """
    lift = M.lift
    n = lift.dim
    L = lift.conductor
    weights = [None] * n
    for i in range(n):
        for j in range(n):
            v = lift[i, j]
            on_cycle = (j == i + 1) or (i == n - 1 and j == 0) or (n == 1)
            if on_cycle:
                if not v:
                    raise NotWeightedCycle(f"zero weight at ({i}, {j})")
                weights[j] = v
            elif v:
                raise NotWeightedCycle(f"nonzero entry off the cycle at ({i}, {j})")
    prod = CycNum.one(L)
    for v in weights:
        prod = prod * v
    if prod != 1:
        raise ProductNotOne(f"weights multiply to {prod}, rescale the lift first")
    entries = []
    acc = CycNum.one(L)
    for i in range(n - 1):
        acc = acc * weights[i]
        entries.append(acc)
    entries.append(CycNum.one(L))
    return ProjMap._trusted(Mat.diag(entries, L))


@dataclass(frozen=True)
class CanonPairResult:
    xi: ProjMap
    phi_canon: ProjMap
    psi_canon: ProjMap
    lam: CycNum

    def to_json(self) -> dict:
        return {
            "xi": self.xi.to_json(),
            "phi_canon": self.phi_canon.to_json(),
            "psi_canon": self.psi_canon.to_json(),
            "lambda": self.lam.to_json(),
        }


def _columns(vectors, L) -> Mat:
    return Mat._trusted([list(r) for r in zip(*vectors)], L)


def _canon_pair_at(phi: ProjMap, psi: ProjMap, phi_scalar=None) -> CanonPairResult:
    n = phi.dim
    L = phi.conductor
    phi_pairs = eigenpairs(phi, order=n, scalar=phi_scalar)

    # psi permutes the eigenlines of phi, so it is monomial in that basis; a
    # fixed point of psi among them is a shared fixed point
    W = _columns([p.coords for _, p in phi_pairs], L)
    P = W.inverse() @ psi.lift @ W
    sigma = []
    for j in range(n):
        rows = [i for i in range(n) if P[i, j]]
        if len(rows) != 1:
            raise NotCommuting("psi does not permute the fixed points of phi")
        sigma.append(rows[0])
    if any(sigma[j] == j for j in range(n)):
        raise FixedSetsNotDisjoint("phi and psi share a fixed point")
    inv_sigma = [0] * n
    for j, s in enumerate(sigma):
        inv_sigma[s] = j
    order = [0]
    while len(order) < n:
        nxt = inv_sigma[order[-1]]
        if nxt == 0:
            raise NotFullCycle(f"psi permutes the fixed points of phi with a cycle of length {len(order)}")
        order.append(nxt)

    # psi u_j ~ u_(j-1): a weighted cycle in the basis u
    Wc = _columns([phi_pairs[k][1].coords for k in order], L)
    Q = Wc.inverse() @ psi.lift @ Wc
    prod = CycNum.one(L)
    for j in range(n):
        prod = prod * Q[(j - 1) % n, j]
    s = kth_root(prod, n)
    if s is None:
        raise ConductorTooSmall("cycle weights have no n-th root in the working field")
    Q = Q.scale(s.inverse())
    D = diagonal_rescale(ProjMap._trusted(Q))
    xi = ProjMap._trusted(D.lift @ Wc.inverse())

    eig = [phi_pairs[k][0] for k in order]
    lam = eig[1] / eig[0] if n > 1 else CycNum.one(L)
    rou = as_root_of_unity(lam)
    if rou is None or rou[0] != n:
        raise InvariantMismatch(f"eigenvalue ratio {lam} is not a primitive {n}-th root of unity")
    phi_canon = diag_powers(n, lam)
    psi_canon = cyclic_shift(n, L)
    xinv = xi.inverse()
    if not proj_eq(xi @ phi @ xinv, phi_canon):
        raise InvariantMismatch("conjugated phi is not diag(1, lam, ..., lam^(n-1))")
    if not proj_eq(xi @ psi @ xinv, psi_canon):
        raise InvariantMismatch("conjugated psi is not the cyclic shift")
    return CanonPairResult(xi, phi_canon, psi_canon, lam)


def canonical_commuting_pair(phi: ProjMap, psi: ProjMap) -> CanonPairResult:
    """Conjugate a commuting pair of order-n maps with n isolated, disjoint
    fixed points each to (diag(1, lam, ..., lam^(n-1)), shift)."""
    n = phi.dim
    if psi.dim != n:
        raise DimMismatch(f"dimensions {phi.dim} and {psi.dim}")
    L = common_conductor(phi, psi)
    phi, psi = phi.embed(L), psi.embed(L)
    c = _order_exact(phi, n, "phi")
    _order_exact(psi, n, "psi")
    if not proj_eq(phi @ psi, psi @ phi):
        raise NotCommuting("phi and psi do not commute in PGL")
    extra = (n, 2 * n, 4 * n)

    def run(ms):
        return _canon_pair_at(*ms, phi_scalar=embed(c, ms[0].conductor))

    return _on_ladder([phi, psi], extra, run)


def _cyclic_pgl2_at(M: ProjMap, m: int) -> ProjMap:
    L = M.conductor
    pairs = eigenpairs(M, order=m)
    if len(pairs) != 2:
        raise InvariantMismatch("expected two eigenlines")
    z = unity(L, m)
    (ea, pa), (eb, pb) = pairs
    if ea / eb != z:
        (ea, pa), (eb, pb) = (eb, pb), (ea, pa)
        if ea / eb != z:
            raise InvariantMismatch("eigenvalue ratio is not a primitive root of the expected order")
    W = _columns([pa.coords, pb.coords], L)
    return ProjMap._trusted(W.inverse())


def canonical_cyclic_pgl2(M: ProjMap, ladder=DEFAULT_LADDER) -> ProjMap:
    """xi with xi M xi^-1 = diag(zeta_m, 1), m the order of M (2, 3, 4 or 6).

    The conductor of xi may be larger than that of M when the eigenvectors
    need it.
    """
    if M.dim != 2:
        raise DimMismatch("expected a map of P^1")
    try:
        m = proj_order(M, cap=6)
    except OrderExceedsCap:
        raise WrongOrder("order is not in {2, 3, 4, 6}") from None
    if m not in (2, 3, 4, 6):
        raise WrongOrder(f"order {m} is not in {{2, 3, 4, 6}}")
    return _on_ladder([M], (*ladder, m), lambda ms: _cyclic_pgl2_at(ms[0], m))


def _klein_at(M1: ProjMap, M2: ProjMap) -> ProjMap:
    xi1 = _cyclic_pgl2_at(M1, 2)
    L = xi1.conductor
    A = (xi1 @ M2 @ xi1.inverse()).lift
    if A[0, 0] or A[1, 1]:
        raise NotKlein("second generator is not antidiagonal after diagonalizing the first")
    d = kth_root(A[1, 0] / A[0, 1], 2)
    if d is None:
        raise ConductorTooSmall("rescaling factor is not in the working field")
    D = ProjMap._trusted(Mat.diag([d, 1], L))
    return D @ xi1


def canonical_klein_pgl2(M1: ProjMap, M2: ProjMap, ladder=DEFAULT_LADDER) -> ProjMap:
    """xi taking a Klein four-group <M1, M2> to <diag(-1, 1), swap>, with
    xi M1 xi^-1 = diag(-1, 1) and xi M2 xi^-1 = swap."""
    if M1.dim != 2 or M2.dim != 2:
        raise DimMismatch("expected maps of P^1")
    L = common_conductor(M1, M2)
    M1, M2 = M1.embed(L), M2.embed(L)
    if not proj_eq(M1 @ M2, M2 @ M1):
        raise NotCommuting("generators do not commute")
    try:
        size = len(group_closure([M1, M2], ProjMap.identity(2, L), limit=8))
    except OrderExceedsCap:
        size = None
    if size != 4 or proj_order(M1, cap=8) != 2 or proj_order(M2, cap=8) != 2:
        raise NotKlein(f"generated group has order {size}, not a Klein four-group")
    return _on_ladder([M1, M2], ladder, lambda ms: _klein_at(*ms))


# PGL_3 involutions

_B3 = ((1, 0, 1), (0, 1, 0), (1, 0, -1))  # columns [1,0,1], [0,1,0], [1,0,-1]


def _det_one_lift(A: ProjMap) -> Mat:
    lift = A.lift
    c = (lift @ lift).scalar_value()
    mu = kth_root(c, 2)
    if mu is None:
        raise ConductorTooSmall("no square root of the lift's square in the working field")
    H = lift.scale(mu.inverse())
    if H.det() != 1:
        H = -H
    return H


def _involutions_at(gens) -> ProjMap:
    L = gens[0].conductor
    lifts = [_det_one_lift(g) for g in gens]
    ident = Mat.identity(3, L)
    if len(lifts) == 1:
        H = lifts[0]
        minus = nullspace(H + ident)
        plus = nullspace(H - ident)
        if len(minus) != 2 or len(plus) != 1:
            raise NotFaithful("lift does not have eigenvalues (1, -1, -1)")
        V = _columns([minus[0], plus[0], minus[1]], L)
        return ProjMap._trusted(V.inverse())
    H1, H2 = lifts
    cols = []
    for s1, s2 in ((-1, -1), (1, -1), (-1, 1)):
        stacked = Mat._trusted(list((H1 - ident.scale(s1)).rows) + list((H2 - ident.scale(s2)).rows), L)
        basis = nullspace(stacked)
        if len(basis) != 1:
            raise NotFaithful("generators are not simultaneously diagonalizable with distinct signatures")
        cols.append(basis[0])
    V = _columns(cols, L)
    B = Mat(_B3, L)
    return ProjMap._trusted(B @ V.inverse())


def canonical_involutions_pgl3(gens, ladder=DEFAULT_LADDER) -> ProjMap:
    """xi taking one or two commuting involutions of P^2 to diag(1, -1, 1)
    and (for two) the reversal [z0:z1:z2] -> [z2:z1:z0]."""
    gens = list(gens)
    if len(gens) not in (1, 2):
        raise ValueError("expected one or two generators")
    if any(g.dim != 3 for g in gens):
        raise DimMismatch("expected maps of P^2")
    L = common_conductor(*gens)
    gens = [g.embed(L) for g in gens]
    for g in gens:
        try:
            k = proj_order(g, cap=2)
        except OrderExceedsCap:
            raise WrongOrder("generator is not an involution") from None
        if k != 2:
            raise WrongOrder("generator is trivial in PGL_3")
    if len(gens) == 2:
        if not proj_eq(gens[0] @ gens[1], gens[1] @ gens[0]):
            raise NotCommuting("generators do not commute")
        size = len(group_closure(gens, ProjMap.identity(3, L), limit=8))
        if size != 4:
            raise NotFaithful(f"generated group has order {size}, expected 4")
    return _on_ladder(gens, ladder, _involutions_at)
