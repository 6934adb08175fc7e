"""Exact linear and projective algebra over cyclotomic fields.

Coordinates on P^n follow the binary-forms convention: coordinate i of a
point of P^n = Sym^n(P^1) is the coefficient of T^(n-i) S^i, and a point
[x:y] of P^1 corresponds to the linear form y*T + x*S.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

from .cyclo import CycNum, embed, kth_root, unity
from .errors import (
    ConductorMismatch,
    ConductorTooSmall,
    DimMismatch,
    NonIsolatedFixedLocus,
    OrderExceedsCap,
    ParseError,
    SingularMatrix,
)
from .rng import make_rng

DEFAULT_ORDER_CAP = 64


def _to_cyc(v, L: int) -> CycNum:
    if isinstance(v, CycNum):
        if v.conductor != L:
            raise ConductorMismatch(f"entry at conductor {v.conductor}, expected {L}")
        return v
    return CycNum.rational(L, v)


def _infer_conductor(values, conductor):
    if conductor is not None:
        return conductor
    Ls = {v.conductor for v in values if isinstance(v, CycNum)}
    if len(Ls) > 1:
        raise ConductorMismatch(f"mixed conductors {sorted(Ls)}")
    return Ls.pop() if Ls else 1


def _pivot_choice(rows, col, start):
    best, best_key = None, None
    for r in range(start, len(rows)):
        v = rows[r][col]
        if v:
            key = (not v.is_rational(), v.height())
            if best is None or key < best_key:
                best, best_key = r, key
    return best


def _rref(rows, ncols):
    """In-place reduced row echelon form; returns the pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        p = _pivot_choice(rows, c, r)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


class Mat:
    """A matrix over Q(zeta_L); square unless used as a linear system."""

    __slots__ = ("rows", "conductor", "_hash")

    def __init__(self, rows, conductor: int | None = None):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        L = _infer_conductor([v for r in rows for v in r], conductor)
        self.rows = tuple(tuple(_to_cyc(v, L) for v in r) for r in rows)
        self.conductor = L
        self._hash = None

    @classmethod
    def _trusted(cls, rows, L):
        obj = object.__new__(cls)
        obj.rows = tuple(tuple(r) for r in rows)
        obj.conductor = L
        obj._hash = None
        return obj

    @classmethod
    def identity(cls, m: int, L: int = 1) -> "Mat":
        one, zero = CycNum.one(L), CycNum.zero(L)
        return cls._trusted([[one if i == j else zero for j in range(m)] for i in range(m)], L)

    @classmethod
    def diag(cls, entries, L: int | None = None) -> "Mat":
        entries = list(entries)
        L = _infer_conductor(entries, L)
        zero = CycNum.zero(L)
        vals = [_to_cyc(e, L) for e in entries]
        m = len(vals)
        return cls._trusted([[vals[i] if i == j else zero for j in range(m)] for i in range(m)], L)

    @classmethod
    def permutation(cls, images, L: int = 1) -> "Mat":
        """Matrix with a 1 in row i, column images[i]."""
        m = len(images)
        one, zero = CycNum.one(L), CycNum.zero(L)
        return cls._trusted([[one if j == images[i] else zero for j in range(m)] for i in range(m)], L)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def dim(self) -> int:
        m, n = self.shape
        if m != n:
            raise DimMismatch(f"matrix is {m}x{n}, not square")
        return m

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list[CycNum]:
        return [r[j] for r in self.rows]

    def transpose(self) -> "Mat":
        return Mat._trusted(list(zip(*self.rows)), self.conductor)

    def embed(self, L: int) -> "Mat":
        if L == self.conductor:
            return self
        return Mat._trusted([[embed(v, L) for v in r] for r in self.rows], L)

    def _check(self, other: "Mat"):
        if other.conductor != self.conductor:
            raise ConductorMismatch(f"conductors {self.conductor} and {other.conductor}")

    def __matmul__(self, other):
        if isinstance(other, Mat):
            self._check(other)
            if self.shape[1] != other.shape[0]:
                raise DimMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other.rows))
            zero = CycNum.zero(self.conductor)
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    acc = zero
                    for a, b in zip(r, c):
                        if a and b:
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return Mat._trusted(out, self.conductor)
        return NotImplemented

    def apply(self, vec) -> list[CycNum]:
        if len(vec) != self.shape[1]:
            raise DimMismatch(f"vector of length {len(vec)} for {self.shape} matrix")
        zero = CycNum.zero(self.conductor)
        out = []
        for r in self.rows:
            acc = zero
            for a, b in zip(r, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def scale(self, s) -> "Mat":
        s = _to_cyc(s, self.conductor)
        return Mat._trusted([[v * s for v in r] for r in self.rows], self.conductor)

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat._trusted([[a + b for a, b in zip(r, q)] for r, q in zip(self.rows, other.rows)],
                            self.conductor)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat._trusted([[a - b for a, b in zip(r, q)] for r, q in zip(self.rows, other.rows)],
                            self.conductor)

    def __neg__(self) -> "Mat":
        return Mat._trusted([[-v for v in r] for r in self.rows], self.conductor)

    def __pow__(self, e: int) -> "Mat":
        base = self
        if e < 0:
            base, e = self.inverse(), -e
        result = Mat.identity(self.dim, self.conductor)
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def rref(self) -> tuple["Mat", list[int]]:
        rows = [list(r) for r in self.rows]
        pivots = _rref(rows, self.shape[1])
        return Mat._trusted(rows, self.conductor), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> CycNum:
        m = self.dim
        rows = [list(r) for r in self.rows]
        det = CycNum.one(self.conductor)
        for c in range(m):
            p = _pivot_choice(rows, c, c)
            if p is None:
                return CycNum.zero(self.conductor)
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                det = -det
            piv = rows[c][c]
            det = det * piv
            inv = piv.inverse()
            for i in range(c + 1, m):
                f = rows[i][c]
                if f:
                    f = f * inv
                    rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[c])]
        return det

    def inverse(self) -> "Mat":
        m = self.dim
        L = self.conductor
        one, zero = CycNum.one(L), CycNum.zero(L)
        rows = [list(r) + [one if i == j else zero for j in range(m)] for i, r in enumerate(self.rows)]
        pivots = _rref(rows, m)
        if pivots != list(range(m)):
            raise SingularMatrix("matrix is not invertible")
        return Mat._trusted([r[m:] for r in rows], L)

    def scalar_value(self) -> CycNum | None:
        """c when the matrix equals c*I, otherwise None."""
        m = self.dim
        c = self.rows[0][0]
        for i in range(m):
            for j in range(m):
                v = self.rows[i][j]
                if (i == j and v != c) or (i != j and v):
                    return None
        return c

    def first_nonzero(self) -> CycNum:
        for r in self.rows:
            for v in r:
                if v:
                    return v
        raise SingularMatrix("zero matrix")

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.conductor == other.conductor and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.conductor, self.rows))
        return self._hash

    def __repr__(self):
        body = "; ".join(", ".join(str(v) for v in r) for r in self.rows)
        return f"Mat[{body}]"

    def to_json(self) -> dict:
        m, n = self.shape
        if m != n:
            raise DimMismatch("only square matrices are serialised")
        return {"dim": m, "entries": [[v.to_json() for v in r] for r in self.rows]}

    @classmethod
    def from_json(cls, obj) -> "Mat":
        if not isinstance(obj, dict) or set(obj) != {"dim", "entries"}:
            raise ParseError(f"bad matrix encoding: {obj!r}")
        m, entries = obj["dim"], obj["entries"]
        if (not isinstance(m, int) or m < 1 or not isinstance(entries, list) or len(entries) != m
                or any(not isinstance(r, list) or len(r) != m for r in entries)):
            raise ParseError("matrix entries do not match dim")
        vals = [[CycNum.from_json(v) for v in r] for r in entries]
        try:
            return cls(vals)
        except ConductorMismatch as exc:
            raise ParseError(str(exc)) from exc


def common_conductor(*objs) -> int:
    return lcm(*(o.conductor for o in objs))


class ProjPoint:
    """A point of P^(m-1); stored scaled so that its first nonzero coordinate is 1."""

    __slots__ = ("coords", "conductor", "_hash")

    def __init__(self, coords, conductor: int | None = None):
        coords = list(coords)
        L = _infer_conductor(coords, conductor)
        vals = [_to_cyc(v, L) for v in coords]
        lead = next((v for v in vals if v), None)
        if lead is None:
            raise ValueError("the zero vector is not a projective point")
        if lead != 1:
            inv = lead.inverse()
            vals = [v * inv for v in vals]
        self.coords = tuple(vals)
        self.conductor = L
        self._hash = None

    @property
    def dim(self) -> int:
        return len(self.coords)

    def embed(self, L: int) -> "ProjPoint":
        return ProjPoint([embed(v, L) for v in self.coords], L)

    def sort_key(self):
        # nonzero coordinates sort before zeros, so e_0 < e_1 < ... < e_n
        return tuple((0, v.sort_key()) if v else (1, ()) for v in self.coords)

    def __lt__(self, other: "ProjPoint"):
        return self.sort_key() < other.sort_key()

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.conductor == other.conductor and self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.conductor, self.coords))
        return self._hash

    def __repr__(self):
        return "[" + " : ".join(str(v) for v in self.coords) + "]"

    def to_json(self) -> dict:
        return {"coords": [v.to_json() for v in self.coords]}

    @classmethod
    def from_json(cls, obj) -> "ProjPoint":
        if not isinstance(obj, dict) or set(obj) != {"coords"} or not isinstance(obj["coords"], list):
            raise ParseError(f"bad point encoding: {obj!r}")
        try:
            return cls([CycNum.from_json(v) for v in obj["coords"]])
        except (ValueError, ConductorMismatch) as exc:
            raise ParseError(str(exc)) from exc


class ProjMap:
    """An element of PGL_m: an invertible lift, compared up to nonzero scalars."""

    __slots__ = ("lift", "_norm")

    def __init__(self, lift):
        if not isinstance(lift, Mat):
            lift = Mat(lift)
        lift.dim
        if not lift.det():
            raise SingularMatrix("a projective transformation needs an invertible lift")
        self.lift = lift
        self._norm = None

    @classmethod
    def _trusted(cls, lift: Mat) -> "ProjMap":
        obj = object.__new__(cls)
        obj.lift = lift
        obj._norm = None
        return obj

    @classmethod
    def identity(cls, m: int, L: int = 1) -> "ProjMap":
        return cls._trusted(Mat.identity(m, L))

    @property
    def dim(self) -> int:
        return self.lift.dim

    @property
    def conductor(self) -> int:
        return self.lift.conductor

    def normalized(self) -> Mat:
        if self._norm is None:
            lead = self.lift.first_nonzero()
            self._norm = self.lift if lead == 1 else self.lift.scale(lead.inverse())
        return self._norm

    def embed(self, L: int) -> "ProjMap":
        return ProjMap._trusted(self.lift.embed(L))

    def inverse(self) -> "ProjMap":
        return ProjMap._trusted(self.lift.inverse())

    def __matmul__(self, other):
        if isinstance(other, ProjMap):
            return ProjMap._trusted(self.lift @ other.lift)
        if isinstance(other, ProjPoint):
            if other.conductor != self.conductor:
                raise ConductorMismatch("point and map over different fields")
            return ProjPoint(self.lift.apply(other.coords), self.conductor)
        return NotImplemented

    def __call__(self, point: ProjPoint) -> ProjPoint:
        return self @ point

    def __pow__(self, e: int) -> "ProjMap":
        return ProjMap._trusted(self.lift ** e)

    def __eq__(self, other):
        if not isinstance(other, ProjMap):
            return NotImplemented
        return (self.conductor == other.conductor and self.dim == other.dim
                and self.normalized() == other.normalized())

    def __hash__(self):
        return hash(self.normalized())

    def __repr__(self):
        return f"ProjMap({self.lift!r})"

    def to_json(self) -> dict:
        return self.lift.to_json()

    @classmethod
    def from_json(cls, obj) -> "ProjMap":
        mat = Mat.from_json(obj)
        try:
            return cls(mat)
        except SingularMatrix as exc:
            raise ParseError(str(exc)) from exc


def proj_eq(A: ProjMap, B: ProjMap) -> bool:
    """True iff the lifts of A and B differ by a nonzero scalar."""
    if A.dim != B.dim:
        raise DimMismatch(f"dimensions {A.dim} and {B.dim}")
    if A.conductor != B.conductor:
        raise ConductorMismatch(f"conductors {A.conductor} and {B.conductor}")
    return A.normalized() == B.normalized()


def _order_and_scalar(lift: Mat, cap: int):
    P = lift
    for k in range(1, cap + 1):
        c = P.scalar_value()
        if c is not None:
            return k, c
        P = P @ lift
    raise OrderExceedsCap(f"no power up to {cap} is scalar")


def proj_order(A: ProjMap, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Least k <= cap with A^k scalar."""
    return _order_and_scalar(A.lift, cap)[0]


def nullspace(M: Mat) -> list[list[CycNum]]:
    """Basis of the right kernel of M, itself in reduced row echelon form."""
    ncols = M.shape[1]
    R, pivots = M.rref()
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return []
    L = M.conductor
    one, zero = CycNum.one(L), CycNum.zero(L)
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row_idx, p in enumerate(pivots):
            v[p] = -R.rows[row_idx][f]
        basis.append(v)
    rows = [list(v) for v in basis]
    _rref(rows, ncols)
    return rows


def eigenpairs(A: ProjMap, order: int | None = None, cap: int = DEFAULT_ORDER_CAP, scalar=None):
    """Eigenvalues of A's lift with their one-dimensional eigenspaces.

    Eigenvalues are searched as mu * zeta_k^j where lift^k = c*I and mu^k = c.
    Returns a list of (eigenvalue, ProjPoint) sorted by point. ``scalar``
    may pass a known c for the given order.
    """
    lift = A.lift
    if order is None:
        k, c = _order_and_scalar(lift, cap)
    elif scalar is not None:
        k, c = order, scalar
    else:
        k = order
        c = (lift ** k).scalar_value()
        if c is None:
            raise OrderExceedsCap(f"A^{k} is not scalar")
    L = A.conductor
    mu = kth_root(c, k)
    zk = unity(L, k)
    if mu is None or zk is None:
        raise ConductorTooSmall(
            f"eigenvalues of this order-{k} map do not all lie in Q(zeta_{L})")
    m = A.dim
    ident = Mat.identity(m, L)
    pairs = []
    e = mu
    for _ in range(k):
        basis = nullspace(lift - ident.scale(e))
        if len(basis) >= 2:
            raise NonIsolatedFixedLocus(f"eigenspace of dimension {len(basis)}")
        if basis:
            pairs.append((e, ProjPoint(basis[0], L)))
        e = e * zk
    if len(pairs) != m:
        raise ConductorTooSmall("lift is not diagonalizable over the working field")
    pairs.sort(key=lambda p: p[1].sort_key())
    return pairs


def fixed_points(A: ProjMap, order: int | None = None, cap: int = DEFAULT_ORDER_CAP) -> tuple[ProjPoint, ...]:
    """The isolated fixed points of a finite-order projective map, sorted."""
    return tuple(p for _, p in eigenpairs(A, order, cap))


def _poly_mul(p, q, zero):
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] = out[i + j] + a * b
    return out


def sym_power(M, n: int):
    """The action induced by a 2x2 matrix on binary forms of degree n.

    Column i holds the coefficients of (d T + b S)^(n-i) (c T + a S)^i for
    M = [[a, b], [c, d]]. Returns a Mat for a Mat and a ProjMap for a ProjMap.
    """
    as_proj = isinstance(M, ProjMap)
    mat = M.lift if as_proj else M
    if mat.shape != (2, 2):
        raise DimMismatch("sym_power needs a 2x2 matrix")
    if n < 1:
        raise ValueError("n must be positive")
    L = mat.conductor
    (a, b), (c, d) = mat.rows
    zero, one = CycNum.zero(L), CycNum.one(L)
    t_image = [d, b]
    s_image = [c, a]
    t_pows = [[one]]
    s_pows = [[one]]
    for _ in range(n):
        t_pows.append(_poly_mul(t_pows[-1], t_image, zero))
        s_pows.append(_poly_mul(s_pows[-1], s_image, zero))
    cols = [_poly_mul(t_pows[n - i], s_pows[i], zero) for i in range(n + 1)]
    out = Mat._trusted([[cols[i][k] for i in range(n + 1)] for k in range(n + 1)], L)
    return ProjMap._trusted(out) if as_proj else out


def eval_g(points) -> ProjPoint:
    """The symmetric-product map (P^1)^n -> P^n: coefficients of prod_i (y_i T + x_i S)."""
    points = list(points)
    if not points:
        raise ValueError("need at least one point")
    L = points[0].conductor
    if any(p.dim != 2 for p in points):
        raise DimMismatch("eval_g takes points of P^1")
    if any(p.conductor != L for p in points):
        raise ConductorMismatch("points over different fields")
    zero = CycNum.zero(L)
    poly = [CycNum.one(L)]
    for p in points:
        x, y = p.coords
        poly = _poly_mul(poly, [y, x], zero)
    return ProjPoint(poly, L)


def _degenerate_tuples(n: int, L: int):
    inf = ProjPoint([1, 0], L)
    zero = ProjPoint([0, 1], L)
    cycle = [inf, zero, ProjPoint([1, 1], L), ProjPoint([1, -1], L), ProjPoint([2, 1], L)]
    yield [inf] * n
    yield [zero] * n
    yield [inf if i % 2 else zero for i in range(n)]
    yield [cycle[i % len(cycle)] for i in range(n)]
    yield [inf] + [cycle[(i + 2) % len(cycle)] for i in range(n - 1)]


def sample_tuples(n: int, L: int, samples: int, seed: int = 0):
    """Forced degenerate tuples followed by ``samples`` pseudorandom ones with
    coordinates in {-9, ..., 9}."""
    yield from _degenerate_tuples(n, L)
    rng = make_rng(seed, "commutation", n)
    for _ in range(samples):
        pts = []
        for _ in range(n):
            while True:
                x, y = (int(v) for v in rng.integers(-9, 10, size=2))
                if x or y:
                    break
            pts.append(ProjPoint([x, y], L))
        yield pts


def commutation_failures(T: ProjMap, tbar: ProjMap, samples: int, seed: int = 0) -> list:
    """Sample tuples P with T(g(P)) != g(tbar P)."""
    if tbar.dim != 2:
        raise DimMismatch("tbar must act on P^1")
    n = T.dim - 1
    L = common_conductor(T, tbar)
    T, tbar = T.embed(L), tbar.embed(L)
    bad = []
    for pts in sample_tuples(n, L, samples, seed):
        lhs = T @ eval_g(pts)
        rhs = eval_g([tbar @ p for p in pts])
        if lhs != rhs:
            bad.append(pts)
    return bad


def commutation_check(T: ProjMap, tbar: ProjMap, samples: int, seed: int = 0) -> bool:
    """Whether T g = g tbar on degenerate and pseudorandom exact sample tuples."""
    return not commutation_failures(T, tbar, samples, seed)


def group_closure(gens, identity: ProjMap, limit: int = 10_000) -> set:
    """All products of the generators, as normalized projective maps."""
    elems = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                p = g @ h
                if p not in elems:
                    elems.add(p)
                    nxt.append(p)
                    if len(elems) > limit:
                        raise OrderExceedsCap(f"group larger than {limit}")
        frontier = nxt
    return elems


def rational_point(values, L: int) -> ProjPoint:
    return ProjPoint([Fraction(v) for v in values], L)
