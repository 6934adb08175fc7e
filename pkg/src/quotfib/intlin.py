"""Integer Smith normal form and finite kernels on (Q/Z)^m."""
from __future__ import annotations

from fractions import Fraction
from itertools import product


def _identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def smith_normal_form(A):
    """Return (D, U, V) with U*A*V = D, U and V unimodular.

    D is diagonal with nonnegative entries d_1 | d_2 | ... ; A is a list of
    integer rows (k x m).
    """
    A = [list(map(int, r)) for r in A]
    k = len(A)
    m = len(A[0]) if k else 0
    U = _identity(k)
    V = _identity(m)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        for M in (A, U):
            M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for M in (A, V):
            for r in M:
                r[dst] += q * r[src]

    for t in range(min(k, m)):
        while True:
            best = None
            for i in range(t, k):
                for j in range(t, m):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, k):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, m):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, k) for j in range(t + 1, m) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            U[t] = [-v for v in U[t]]
    return A, U, V


def invariant_factors(A) -> list[int]:
    D, _, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def kernel_mod_one(A):
    """The finite group {x in (Q/Z)^m : A x = 0 in (Q/Z)^k}.

    Returns (generators, orders): generators are tuples of Fractions in [0, 1)
    and the group is the direct sum of the cyclic groups they generate, with
    the given orders (all > 1). Raises ValueError when the kernel is infinite.
    """
    m = len(A[0])
    D, _, V = smith_normal_form(A)
    diag = [D[i][i] if i < len(D) else 0 for i in range(m)]
    if any(d == 0 for d in diag):
        raise ValueError("kernel is not finite")
    gens, orders = [], []
    for i, d in enumerate(diag):
        if d > 1:
            gens.append(tuple(Fraction(V[r][i], d) % 1 for r in range(m)))
            orders.append(d)
    return gens, orders


def span_mod_one(gens, orders, m: int) -> set:
    """All elements of the subgroup of (Q/Z)^m generated by ``gens``."""
    out = set()
    for coeffs in product(*(range(o) for o in orders)):
        out.add(tuple(sum((c * g[r] for c, g in zip(coeffs, gens)), Fraction(0)) % 1 for r in range(m)))
    return out
