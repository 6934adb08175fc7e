"""Torsion points and divisors on CM elliptic curves C/Lambda.

Points are written in lattice coordinates (a, b) for a + b*tau, reduced mod 1,
with tau = i on the gauss curve and tau = zeta_6 on the eisenstein curve.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import gcd

import numpy as np

from .errors import EnumerationTooLarge, InvalidUnit, NotGenerating, ParseError, WrongOrder
from .intlin import invariant_factors, kernel_mod_one, span_mod_one

AUT_ORDER = {"gauss": 4, "eisenstein": 6, "generic": 2}

# multiplication by the generator of the automorphism group, on column (a, b)
_GEN_MATRIX = {
    "gauss": ((0, -1), (1, 0)),       # i(a + b i) = -b + a i
    "eisenstein": ((0, -1), (1, 1)),  # z6(a + b z6) = -b + (a + b) z6
    "generic": ((-1, 0), (0, -1)),
}


def _frac(v) -> Fraction:
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {v!r}") from exc
    return Fraction(v)


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class CMCurve:
    tau_kind: str

    def __post_init__(self):
        if self.tau_kind not in AUT_ORDER:
            raise ValueError(f"unknown curve kind {self.tau_kind!r}")

    @property
    def aut_order(self) -> int:
        return AUT_ORDER[self.tau_kind]


GAUSS = CMCurve("gauss")
EISENSTEIN = CMCurve("eisenstein")
GENERIC = CMCurve("generic")


@dataclass(frozen=True)
class Unit:
    """The root of unity zeta_order^exponent, stored with gcd(exponent, order) = 1."""

    order: int
    exponent: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise InvalidUnit("order must be positive")
        e = self.exponent % self.order
        g = gcd(e, self.order)
        object.__setattr__(self, "order", self.order // g)
        object.__setattr__(self, "exponent", e // g)

    def is_one(self) -> bool:
        return self.order == 1

    def matrix(self, curve: CMCurve):
        """Integer 2x2 matrix of multiplication by this unit in lattice coordinates."""
        w = curve.aut_order
        if w % self.order:
            raise InvalidUnit(f"zeta_{self.order} is not an automorphism of the {curve.tau_kind} curve")
        power = self.exponent * (w // self.order)
        M = ((1, 0), (0, 1))
        G = _GEN_MATRIX[curve.tau_kind]
        for _ in range(power):
            M = tuple(tuple(sum(G[i][k] * M[k][j] for k in range(2)) for j in range(2)) for i in range(2))
        return M


MINUS_ONE = Unit(2, 1)
I_UNIT = Unit(4, 1)
ZETA3 = Unit(3, 1)
ZETA6 = Unit(6, 1)


@dataclass(frozen=True, order=True)
class TorsionPoint:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a) % 1)
        object.__setattr__(self, "b", _frac(self.b) % 1)

    @classmethod
    def zero(cls) -> "TorsionPoint":
        return cls(Fraction(0), Fraction(0))

    def __add__(self, other: "TorsionPoint") -> "TorsionPoint":
        return TorsionPoint(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "TorsionPoint") -> "TorsionPoint":
        return TorsionPoint(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "TorsionPoint":
        return TorsionPoint(-self.a, -self.b)

    def __rmul__(self, m: int) -> "TorsionPoint":
        return TorsionPoint(m * self.a, m * self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def order(self) -> int:
        d1, d2 = self.a.denominator, self.b.denominator
        return d1 * d2 // gcd(d1, d2)

    def scaled(self, N: int) -> tuple[int, int]:
        """Integer coordinates of N*P as an element of (Z/N)^2."""
        a, b = self.a * N, self.b * N
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError(f"{self} is not {N}-torsion")
        return int(a) % N, int(b) % N

    def __repr__(self):
        return f"({self.a}, {self.b})"

    def to_json(self) -> dict:
        return {"a": _frac_str(self.a), "b": _frac_str(self.b)}

    @classmethod
    def from_json(cls, obj) -> "TorsionPoint":
        if not isinstance(obj, dict) or set(obj) != {"a", "b"}:
            raise ParseError(f"bad torsion point {obj!r}")
        if not all(isinstance(v, str) for v in obj.values()):
            raise ParseError("torsion point coordinates must be 'p/q' strings")
        return cls(_frac(obj["a"]), _frac(obj["b"]))


def point_arith(P: TorsionPoint, Q: TorsionPoint, op: str) -> TorsionPoint:
    if op == "add":
        return P + Q
    if op == "sub":
        return P - Q
    raise ValueError(f"unknown op {op!r}")


def scalar_mul(m: int, P: TorsionPoint) -> TorsionPoint:
    return m * P


def cm_action(curve: CMCurve, u: Unit, P: TorsionPoint) -> TorsionPoint:
    (p, q), (r, s) = u.matrix(curve)
    return TorsionPoint(p * P.a + q * P.b, r * P.a + s * P.b)


@dataclass(frozen=True)
class Divisor:
    """An effective divisor: a multiset of torsion points, stored sorted."""

    points: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted(self.points)))

    @property
    def degree(self) -> int:
        return len(self.points)

    def point_sum(self) -> TorsionPoint:
        s = TorsionPoint.zero()
        for p in self.points:
            s = s + p
        return s

    def translate(self, P: TorsionPoint) -> "Divisor":
        return Divisor(tuple(q + P for q in self.points))

    def multiplicities(self) -> list[tuple[TorsionPoint, int]]:
        return sorted(Counter(self.points).items())

    def __repr__(self):
        return "Divisor(" + " + ".join(f"[{p}]" for p in self.points) + ")"

    def to_json(self) -> dict:
        return {"points": [{"point": p.to_json(), "mult": k} for p, k in self.multiplicities()]}

    @classmethod
    def from_json(cls, obj) -> "Divisor":
        if not isinstance(obj, dict) or set(obj) != {"points"} or not isinstance(obj["points"], list):
            raise ParseError(f"bad divisor {obj!r}")
        pts = []
        for item in obj["points"]:
            if not isinstance(item, dict) or set(item) != {"point", "mult"}:
                raise ParseError(f"bad divisor entry {item!r}")
            k = item["mult"]
            if not isinstance(k, int) or isinstance(k, bool) or k < 1:
                raise ParseError("multiplicity must be a positive integer")
            pts.extend([TorsionPoint.from_json(item["point"])] * k)
        return cls(tuple(pts))


# finite subgroups of E or E^2

def _element_key(elem):
    coords = [c for p in elem for c in (p.a, p.b)]
    nnz = sum(1 for c in coords if c)
    first = next((i for i, c in enumerate(coords) if c), len(coords))
    order = 1
    for c in coords:
        order = order * c.denominator // gcd(order, c.denominator)
    return (-order, nnz, first, tuple(coords))


@dataclass(frozen=True)
class FiniteGroup:
    """A finite subgroup of E^k, elements stored as tuples of k torsion points.

    ``generators`` is a canonical generating set chosen greedily from the
    elements (largest order first, then sparsest, then lexicographic).
    """

    elements: frozenset
    generators: tuple
    invariants: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, elem) -> bool:
        return elem in self.elements


def _span(gens, rank):
    zero = tuple(TorsionPoint.zero() for _ in range(rank))
    elems = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                s = tuple(p + q for p, q in zip(e, g))
                if s not in elems:
                    elems.add(s)
                    nxt.append(s)
        frontier = nxt
    return elems


def group_from_elements(elements, rank: int) -> FiniteGroup:
    elements = frozenset(elements)
    gens = []
    span = _span(gens, rank)
    for e in sorted(elements, key=_element_key):
        if len(span) == len(elements):
            break
        if e not in span:
            gens.append(e)
            span = _span(gens, rank)
    return FiniteGroup(elements, tuple(gens), _invariants(gens, rank))


def _invariants(gens, rank: int) -> tuple:
    """Invariant factors of the subgroup generated by ``gens``, via Smith normal form.

    With M a common denominator the subgroup is L / M Z^k for the lattice L
    spanned by M*gens and M*Z^k, so it is a sum of Z/(M/d) over the diagonal d.
    """
    k = 2 * rank
    M = 1
    for g in gens:
        for p in g:
            M = M * p.order() // gcd(M, p.order())
    cols = [[int(c * M) for p in g for c in (p.a, p.b)] for g in gens]
    cols += [[M * (i == j) for i in range(k)] for j in range(k)]
    rows = [[col[i] for col in cols] for i in range(k)]
    diag = invariant_factors(rows)
    return tuple(sorted(M // d for d in diag if d < M))


def _kernel_group(blocks, rank: int) -> FiniteGroup:
    gens, orders = kernel_mod_one(blocks)
    vecs = span_mod_one(gens, orders, 2 * rank)
    elements = {tuple(TorsionPoint(v[2 * k], v[2 * k + 1]) for k in range(rank)) for v in vecs}
    return group_from_elements(elements, rank)


def fixed_group_of_unit(curve: CMCurve, u: Unit) -> FiniteGroup:
    """{P : uP = P}, as the kernel of (u - 1) on (Q/Z)^2; elements are 1-tuples."""
    if u.is_one():
        raise InvalidUnit("u = 1 fixes every point")
    M = u.matrix(curve)
    A = [[M[i][j] - (i == j) for j in range(2)] for i in range(2)]
    return _kernel_group(A, 1)


# generators over Z[i] of the order-16 group acting on E^2 for the gamma pair
GAMMA_GENERATORS = (
    ((-1, 0), (1, 1), (0, 0), (1, 0)),    # [[-1, 1+i], [0, 1]]
    ((0, -1), (-1, 1), (0, 0), (0, 1)),   # [[-i, i-1], [0, i]]
    ((-1, 0), (0, 0), (-1, 1), (1, 0)),   # [[-1, 0], [i-1, 1]]
)


def _gaussian_block(p: int, q: int):
    # multiplication by p + q i on (a, b)
    return [[p, -q], [q, p]]


def gamma_matrix(entries) -> list[list[int]]:
    """4x4 integer matrix on (a1, b1, a2, b2) of a 2x2 matrix over Z[i]."""
    (e11, e12, e21, e22) = entries
    rows = []
    for left, right in ((e11, e12), (e21, e22)):
        bl, br = _gaussian_block(*left), _gaussian_block(*right)
        for r in range(2):
            rows.append(bl[r] + br[r])
    return rows


def gamma_fixed_group() -> FiniteGroup:
    """Points of E^2 (gauss curve) fixed by all three gamma generators; elements are 2-tuples."""
    A = []
    for g in GAMMA_GENERATORS:
        M = gamma_matrix(g)
        A.extend([[M[i][j] - (i == j) for j in range(4)] for i in range(4)])
    return _kernel_group(A, 2)


# Fix(t_G) at divisor level

def solve_translation_start(n: int, x: TorsionPoint) -> list[TorsionPoint]:
    """All x0 with (n+1) x0 + n(n+1)/2 x = 0, sorted."""
    N = n + 1
    if x.order() != N:
        raise WrongOrder(f"{x} has order {x.order()}, expected {N}")
    t = -((n * N // 2) * x)
    return sorted(TorsionPoint((t.a + i) / N, (t.b + j) / N) for i in range(N) for j in range(N))


def _check_generating(n: int, x: TorsionPoint, y: TorsionPoint):
    N = n + 1
    try:
        xa, xb = x.scaled(N)
        ya, yb = y.scaled(N)
    except ValueError as exc:
        raise NotGenerating(str(exc)) from exc
    if gcd((xa * yb - xb * ya) % N, N) != 1:
        raise NotGenerating(f"{x}, {y} do not generate E[{N}]")


def fix_divisors(n: int, x: TorsionPoint, y: TorsionPoint) -> list[Divisor]:
    """The divisors D_m = sum_j [x_t + m y + j x], m = 0..n, in order of m."""
    _check_generating(n, x, y)
    x_t = solve_translation_start(n, x)[0]
    out = []
    for m in range(n + 1):
        base = x_t + m * y
        out.append(Divisor(tuple(base + j * x for j in range(n + 1))))
    return out


def translation_permutation(n: int, x: TorsionPoint, y: TorsionPoint) -> tuple[int, ...]:
    """perm[m] = m' with D_m + y = D_m'."""
    divs = fix_divisors(n, x, y)
    index = {d: i for i, d in enumerate(divs)}
    perm = []
    for d in divs:
        moved = d.translate(y)
        if moved not in index:
            raise NotGenerating("translation by y does not preserve Fix(t)")
        perm.append(index[moved])
    return tuple(perm)


def is_single_cycle(perm) -> bool:
    seen, i = set(), 0
    while i not in seen:
        seen.add(i)
        i = perm[i]
    return len(seen) == len(perm)


def generating_pairs(N: int) -> list[tuple[TorsionPoint, TorsionPoint]]:
    """All ordered pairs (x, y) generating E[N]."""
    pts = [(i, j) for i in range(N) for j in range(N)]
    out = []
    for (a, b), (c, d) in product(pts, pts):
        if gcd((a * d - b * c) % N, N) == 1:
            out.append((TorsionPoint(Fraction(a, N), Fraction(b, N)),
                        TorsionPoint(Fraction(c, N), Fraction(d, N))))
    return out


BRUTE_FORCE_MAX_N = 4


@lru_cache(maxsize=None)
def _sum_zero_multisets(N: int, M: int) -> np.ndarray:
    """Sorted index tuples of size N over E[M] (index = i*M + j for (i/M, j/M)) with point-sum 0."""
    combos = np.fromiter(
        (v for c in combinations_with_replacement(range(M * M), N) for v in c),
        dtype=np.int32,
    ).reshape(-1, N)
    sa = (combos // M).sum(axis=1) % M
    sb = (combos % M).sum(axis=1) % M
    return combos[(sa == 0) & (sb == 0)]


def brute_force_fix_divisors(n: int, x: TorsionPoint) -> set[Divisor]:
    """Every effective degree-(n+1) divisor with point-sum 0 that is invariant
    under translation by x, found by exhaustive search.

    An invariant divisor is a union of cosets z + <x>; a coset has point sum
    (n+1) z + n(n+1)/2 x, so z lies in E[n+1] when n+1 is odd and in E[2(n+1)]
    when n+1 is even. The search runs over all multisets on that support.
    """
    if n > BRUTE_FORCE_MAX_N:
        raise EnumerationTooLarge(f"n = {n} exceeds the enumeration bound {BRUTE_FORCE_MAX_N}")
    N = n + 1
    if x.order() != N:
        raise WrongOrder(f"{x} has order {x.order()}, expected {N}")
    M = N if N % 2 else 2 * N
    combos = _sum_zero_multisets(N, M)
    xa, xb = x.scaled(M)
    idx = np.arange(M * M)
    shifted = ((idx // M + xa) % M) * M + (idx % M + xb) % M
    moved = np.sort(shifted[combos], axis=1)
    keep = combos[(moved == combos).all(axis=1)]
    out = set()
    for row in keep:
        out.add(Divisor(tuple(TorsionPoint(Fraction(int(v) // M, M), Fraction(int(v) % M, M)) for v in row)))
    return out
