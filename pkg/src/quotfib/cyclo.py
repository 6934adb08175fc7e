"""Exact arithmetic in cyclotomic fields Q(zeta_L).

Elements are stored over the power basis 1, z, ..., z^(phi(L)-1) modulo the
L-th cyclotomic polynomial, as an integer numerator vector over one positive
common denominator. Two elements of the same field are equal exactly when
their stored data agree.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import mpmath

from .errors import (
    ConductorMismatch,
    DivisionByZero,
    NotADivisor,
    ParseError,
    RootSearchTooLarge,
)

# Upper bound on the number of branch combinations tried by kth_root.
ROOT_SEARCH_BUDGET = 200_000


def totient(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num, den):
    """Exact division of integer polynomials (low-to-high) by a monic divisor."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    assert not any(num), "inexact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(L: int) -> tuple[int, ...]:
    """Coefficients of the L-th cyclotomic polynomial, lowest degree first."""
    if L < 1:
        raise ValueError(f"conductor must be positive, got {L}")
    poly = [-1] + [0] * (L - 1) + [1]
    for d in range(1, L):
        if L % d == 0:
            poly = _poly_divexact(poly, cyclotomic_poly(d))
    return tuple(poly)


class _Field:
    __slots__ = ("L", "phi", "pow", "units", "W")

    def __init__(self, L: int):
        self.L = L
        phi = totient(L)
        self.phi = phi
        poly = cyclotomic_poly(L)
        # pow[e] = coefficient vector of z^e for 0 <= e < L
        vec = [0] * phi
        vec[0] = 1
        table = []
        for _ in range(L):
            table.append(tuple(vec))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                vec = [v - top * c for v, c in zip(vec, poly)]
        self.pow = tuple(table)
        self.units = tuple(t for t in range(1, L + 1) if gcd(t, L) == 1)
        # every root of unity in Q(zeta_L) has order dividing W
        self.W = L if L % 2 == 0 else 2 * L


@lru_cache(maxsize=None)
def field(L: int) -> _Field:
    if not isinstance(L, int) or L < 1:
        raise ValueError(f"conductor must be a positive integer, got {L!r}")
    return _Field(L)


def _reduce(F: _Field, poly) -> list[int]:
    res = list(poly[: F.phi]) + [0] * max(0, F.phi - len(poly))
    for d in range(F.phi, len(poly)):
        c = poly[d]
        if c:
            for r, v in enumerate(F.pow[d % F.L]):
                if v:
                    res[r] += c * v
    return res


def _mul_vec(F: _Field, a, b) -> list[int]:
    phi = F.phi
    prod = [0] * (2 * phi - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    return _reduce(F, prod)


def _galois_vec(F: _Field, a, t: int) -> list[int]:
    res = [0] * F.phi
    L = F.L
    for r, ar in enumerate(a):
        if ar:
            for s, v in enumerate(F.pow[(r * t) % L]):
                if v:
                    res[s] += ar * v
    return res


class CycNum:
    """An element of Q(zeta_L).

    ``CycNum(L, coeffs)`` accepts any finite list of rationals as polynomial
    coefficients in zeta_L (lowest degree first) and reduces it.
    """

    __slots__ = ("conductor", "_num", "_den", "_hash")

    def __init__(self, conductor: int, coeffs=()):
        F = field(conductor)
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = lcm(den, c.denominator)
        num = [c.numerator * (den // c.denominator) for c in fr]
        self._set(conductor, _reduce(F, num), den)

    def _set(self, L, num, den):
        g = gcd(den, *num)
        if g != 1:
            num = [v // g for v in num]
            den //= g
        if not any(num):
            den = 1
        self.conductor = L
        self._num = tuple(num)
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, L: int, num, den: int = 1) -> "CycNum":
        obj = object.__new__(cls)
        if den < 0:
            num = [-v for v in num]
            den = -den
        obj._set(L, num, den)
        return obj

    # constructors

    @classmethod
    def rational(cls, L: int, q) -> "CycNum":
        q = Fraction(q)
        F = field(L)
        num = [0] * F.phi
        num[0] = q.numerator
        return cls._raw(L, num, q.denominator)

    @classmethod
    def zero(cls, L: int) -> "CycNum":
        return cls.rational(L, 0)

    @classmethod
    def one(cls, L: int) -> "CycNum":
        return cls.rational(L, 1)

    # accessors

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self._den) for v in self._num)

    @property
    def phi(self) -> int:
        return len(self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def sort_key(self) -> tuple[Fraction, ...]:
        return self.coeffs

    def height(self) -> int:
        """Largest absolute value among numerators and the denominator."""
        return max(self._den, *(abs(v) for v in self._num))

    # arithmetic

    def _coerce(self, other) -> "CycNum":
        if isinstance(other, CycNum):
            if other.conductor != self.conductor:
                raise ConductorMismatch(
                    f"conductors differ: {self.conductor} vs {other.conductor}; embed first")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.rational(self.conductor, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d1, d2 = self._den, o._den
        if d1 == d2:
            num = [a + b for a, b in zip(self._num, o._num)]
            return CycNum._raw(self.conductor, num, d1)
        num = [a * d2 + b * d1 for a, b in zip(self._num, o._num)]
        return CycNum._raw(self.conductor, num, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(self.conductor, [-a for a in self._num], self._den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        F = field(self.conductor)
        if o.is_rational():
            c = o._num[0]
            num = [a * c for a in self._num]
        elif self.is_rational():
            c = self._num[0]
            num = [a * c for a in o._num]
        else:
            num = _mul_vec(F, self._num, o._num)
        return CycNum._raw(self.conductor, num, self._den * o._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        L = self.conductor
        if self.is_rational():
            num = [0] * self.phi
            num[0] = self._den
            return CycNum._raw(L, num, self._num[0])
        F = field(L)
        a = self._num
        prod = None
        for t in F.units[1:]:
            conj = _galois_vec(F, a, t)
            prod = conj if prod is None else _mul_vec(F, prod, conj)
        norm = _mul_vec(F, a, prod)
        assert not any(norm[1:]), "norm is not rational"
        return CycNum._raw(L, [v * self._den for v in prod], norm[0])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self
        if e < 0:
            base = self.inverse()
            e = -e
        result = CycNum.one(self.conductor)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def galois(self, t: int) -> "CycNum":
        """Image under the automorphism zeta_L -> zeta_L^t (gcd(t, L) = 1)."""
        F = field(self.conductor)
        if gcd(t, F.L) != 1:
            raise ValueError(f"{t} is not a unit mod {F.L}")
        return CycNum._raw(self.conductor, _galois_vec(F, self._num, t % F.L), self._den)

    # comparison

    def __eq__(self, other):
        if isinstance(other, CycNum):
            return (self.conductor == other.conductor and self._den == other._den
                    and self._num == other._num)
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._num[0], self._den))
            else:
                self._hash = hash((self.conductor, self._num, self._den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # display

    def __repr__(self):
        return f"CycNum({self.conductor}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        terms = []
        for r, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if r == 0:
                terms.append(str(c))
            else:
                mono = f"z{self.conductor}" + (f"^{r}" if r > 1 else "")
                coef = "" if c == 1 else "-" if c == -1 else f"{c}*"
                terms.append(coef + mono)
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def to_complex(self, t: int = 1) -> complex:
        """Numerical value under zeta_L -> exp(2 pi i t / L); for display and sanity checks."""
        z = mpmath.exp(2j * mpmath.pi * t / self.conductor)
        return complex(sum(Fraction(v, self._den) * z ** r for r, v in enumerate(self._num)))

    # json

    def to_json(self) -> dict:
        return {"conductor": self.conductor,
                "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "CycNum":
        if not isinstance(obj, dict) or set(obj) != {"conductor", "coeffs"}:
            raise ParseError(f"bad CycNum encoding: {obj!r}")
        L = obj["conductor"]
        coeffs = obj["coeffs"]
        if not isinstance(L, int) or isinstance(L, bool) or L < 1:
            raise ParseError(f"bad conductor: {L!r}")
        if not isinstance(coeffs, list) or len(coeffs) != totient(L):
            raise ParseError(f"conductor {L} needs {totient(L)} coefficients")
        try:
            return cls(L, [Fraction(str(c)) for c in coeffs])
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational in {coeffs!r}") from exc


def arith(x: CycNum, y: CycNum, op: str) -> CycNum:
    """Field operation by name: 'add', 'sub', 'mul' or 'div'."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def root_of_unity(L: int, j: int) -> CycNum:
    """zeta_L^j in Q(zeta_L)."""
    F = field(L)
    return CycNum._raw(L, list(F.pow[j % L]), 1)


def unity(L: int, k: int, j: int = 1) -> CycNum | None:
    """zeta_k^j written in Q(zeta_L), or None when it does not lie in that field."""
    if k < 1:
        raise ValueError("order must be positive")
    F = field(L)
    g = gcd(j % k, k)
    k2, j2 = k // g, (j % k) // g
    if F.W % k2:
        return None
    e = (j2 * (F.W // k2)) % F.W
    if F.W == L:
        return root_of_unity(L, e)
    # L odd: zeta_2L = -zeta_L^((L+1)/2)
    val = root_of_unity(L, e * ((L + 1) // 2))
    return -val if e % 2 else val


def embed(x: CycNum, L_target: int) -> CycNum:
    """The same element written over Q(zeta_{L_target}); requires conductor | L_target."""
    L = x.conductor
    if L_target % L:
        raise NotADivisor(f"{L} does not divide {L_target}")
    if L_target == L:
        return x
    F2 = field(L_target)
    m = L_target // L
    num = [0] * F2.phi
    for r, v in enumerate(x._num):
        if v:
            for s, w in enumerate(F2.pow[(r * m) % L_target]):
                if w:
                    num[s] += v * w
    return CycNum._raw(L_target, num, x._den)


def as_root_of_unity(x: CycNum) -> tuple[int, int] | None:
    """(k, j) with x = zeta_k^j and gcd(j, k) = 1, or None when x is not a root of unity."""
    if x._den != 1 or sum(abs(v) for v in x._num) == 0:
        return None
    F = field(x.conductor)
    for e in range(F.W):
        if unity(x.conductor, F.W, e) == x:
            g = gcd(e, F.W)
            return F.W // g, e // g
    return None


def _int_kth_root(n: int, k: int) -> int | None:
    if n < 0:
        if k % 2 == 0:
            return None
        r = _int_kth_root(-n, k)
        return None if r is None else -r
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else int(mpmath.floor(mpmath.root(n, k)))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** k == n else None


@lru_cache(maxsize=None)
def _reconstruction_matrix(L: int, dps: int):
    """Inverse of the real system mapping integer power-basis coefficients to the
    real and imaginary parts of the embeddings zeta -> zeta^t, t in a half system of units."""
    F = field(L)
    reps = [t for t in F.units if 2 * t < L]
    with mpmath.workdps(dps):
        rows = []
        for t in reps:
            z = [mpmath.exp(2j * mpmath.pi * t * r / L) for r in range(F.phi)]
            rows.append([mpmath.re(v) for v in z])
            rows.append([mpmath.im(v) for v in z])
        return reps, mpmath.inverse(mpmath.matrix(rows))


def kth_root(x: CycNum, k: int) -> CycNum | None:
    """Some mu in the same field with mu**k == x, or None if no such element exists.

    Roots of unity and rational inputs are handled directly. Otherwise the
    integral multiple mu*d (an algebraic integer, so integer coordinates) is
    recovered from high-precision complex embeddings by trying every
    consistent branch of the k-th root over a half system of embeddings, and
    every candidate is verified exactly.
    """
    if k < 1:
        raise ValueError("k must be positive")
    L = x.conductor
    if k == 1 or x.is_zero():
        return x
    F = field(L)

    ru = as_root_of_unity(x)
    if ru is not None:
        q, j = ru
        # x = zeta_W^s; need e with e*k = s mod W
        s = (j * (F.W // q)) % F.W
        g = gcd(k, F.W)
        if s % g:
            return None
        kk, ss, WW = k // g, s // g, F.W // g
        e = (ss * pow(kk, -1, WW)) % WW if WW > 1 else 0
        return unity(L, F.W, e)

    if x.is_rational():
        q = x.as_fraction()
        a, b = _int_kth_root(q.numerator, k), _int_kth_root(q.denominator, k)
        if a is not None and b is not None:
            return CycNum.rational(L, Fraction(a, b))

    if F.phi == 1:
        return None

    # integral model: x * d^k has integer coordinates; its root mu*d lies in Z[zeta]
    d = x._den
    target = CycNum._raw(L, [v * d ** (k - 1) for v in x._num], 1)
    digits = len(str(max(abs(v) for v in target._num)))
    dps = 30 + 2 * (digits // k + 1) + F.phi
    reps, inv = _reconstruction_matrix(L, dps)
    zk = unity(L, k)
    first_branches = [0] if zk is not None else list(range(k))
    n_combos = len(first_branches) * k ** (len(reps) - 1)
    if n_combos > ROOT_SEARCH_BUDGET:
        raise RootSearchTooLarge(
            f"{n_combos} branch combinations for a {k}-th root over conductor {L}")
    with mpmath.workdps(dps):
        roots_per_embedding = []
        for t in reps:
            val = sum(v * mpmath.exp(2j * mpmath.pi * t * r / L) for r, v in enumerate(target._num))
            mod = mpmath.root(abs(val), k)
            ang = mpmath.arg(val)
            roots_per_embedding.append([
                mod * mpmath.exp(1j * (ang + 2 * mpmath.pi * s) / k) for s in range(k)])
        branch_sets = [first_branches] + [range(k)] * (len(reps) - 1)
        for combo in itertools.product(*branch_sets):
            rhs = []
            for t_idx, s in enumerate(combo):
                z = roots_per_embedding[t_idx][s]
                rhs.extend([mpmath.re(z), mpmath.im(z)])
            sol = inv * mpmath.matrix(rhs)
            coeffs = [int(mpmath.nint(sol[r])) for r in range(F.phi)]
            cand = CycNum._raw(L, coeffs, 1)
            if cand ** k == target:
                return CycNum._raw(L, coeffs, d)
    return None
