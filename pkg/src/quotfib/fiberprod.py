"""A finite model of (A_0 x P^(n_1) x ... x P^(n_r)) / Delta and its factors.

A_0 is replaced by its N-torsion (Z/N)^k, and each P^(n_i) by a finite set of
exact points closed under the fiber action. Delta acts on the base by
translation and on factor i through the generators of a FibrationClass.
The combined quotient is compared with the fibered product of the factor
quotients (A_0 x P^(n_i)) / Delta over A_0 / Delta.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import islice, product
from math import gcd

from .classify import FibrationClass
from .cyclo import kth_root, unity
from .errors import (
    ActionOrderMismatch,
    Incompatible,
    LevelIncompatible,
    NoTransport,
    OrderExceedsCap,
    ParseError,
    QuotfibError,
)
from .projlin import Mat, ProjMap, ProjPoint, _order_and_scalar, common_conductor, nullspace, proj_order
from .torsion import _frac, _frac_str


@dataclass(frozen=True)
class DeltaGenerator:
    """A generator of Delta: its base translation and, for each factor, the
    exponents of that factor's normal-form generators giving its fiber action."""

    base: tuple
    actions: tuple

    def to_json(self) -> dict:
        return {"base": [_frac_str(Fraction(v)) for v in self.base],
                "actions": [list(a) for a in self.actions]}

    @classmethod
    def from_json(cls, obj) -> "DeltaGenerator":
        if not isinstance(obj, dict) or set(obj) != {"base", "actions"}:
            raise ParseError("delta generator needs exactly 'base' and 'actions'")
        base, actions = obj["base"], obj["actions"]
        if not isinstance(base, list) or not all(isinstance(v, str) for v in base):
            raise ParseError("base must be a list of 'p/q' strings")
        if not isinstance(actions, list) or not all(
                isinstance(a, list) and all(isinstance(e, int) and not isinstance(e, bool) for e in a)
                for a in actions):
            raise ParseError("actions must be lists of integer exponents")
        return cls(tuple(_frac(v) for v in base), tuple(tuple(a) for a in actions))


@dataclass(frozen=True)
class OrbitClass:
    representative: tuple
    orbit: frozenset


@dataclass(frozen=True)
class FiniteModel:
    level: int
    rank: int
    factors: tuple
    generators: tuple
    samples: tuple      # per factor: sorted tuple of ProjPoint
    elements: tuple     # Delta as sorted base translations in (Z/N)^rank
    action: dict        # element -> per-factor permutation of sample indices
    transport: dict     # element -> per-factor inverse permutation, used by psi_construct

    @property
    def r(self) -> int:
        return len(self.factors)

    def base_points(self):
        return list(product(range(self.level), repeat=self.rank))

    def translate(self, x, e):
        return tuple((a + b) % self.level for a, b in zip(x, e))


def _base_vector(values, N: int) -> tuple:
    out = []
    for v in values:
        q = Fraction(v) * N
        if q.denominator != 1:
            raise LevelIncompatible(f"{v} is not {N}-torsion")
        out.append(int(q) % N)
    return tuple(out)


def _base_order(x, N: int) -> int:
    g = N
    for v in x:
        g = gcd(g, v)
    return N // g


def _fiber_map(cls: FibrationClass, exps) -> ProjMap:
    m = cls.n + 1
    if len(exps) != len(cls.generators):
        raise ActionOrderMismatch(
            f"{len(exps)} exponents for a class with {len(cls.generators)} generators")
    if not cls.generators:
        return ProjMap.identity(m)
    L = common_conductor(*cls.generators)
    out = ProjMap.identity(m, L)
    for g, e in zip(cls.generators, exps):
        out = out @ (g.embed(L) ** e)
    return out


def _eigen_directions(A: ProjMap) -> list[ProjPoint]:
    """Basis vectors of every eigenspace of a finite-order map, when they fit in its field."""
    L = A.conductor
    try:
        k, c = _order_and_scalar(A.lift, 64)
    except OrderExceedsCap:
        return []
    mu = kth_root(c, k)
    z = unity(L, k)
    if mu is None or z is None:
        return []
    ident = Mat.identity(A.dim, L)
    out, e = [], mu
    for _ in range(k):
        out.extend(ProjPoint(v, L) for v in nullspace(A.lift - ident.scale(e)))
        e = e * z
    return out


def _sample_points(cls: FibrationClass, maps) -> tuple:
    m = cls.n + 1
    L = common_conductor(*maps) if maps else 1
    seeds = []
    for i in range(m):
        seeds.append(ProjPoint([int(i == j) for j in range(m)], L))
    seeds.append(ProjPoint([1] * m, L))
    seeds.append(ProjPoint(list(range(1, m + 1)) if m > 1 else [1], L))
    for g in cls.generators:
        seeds.extend(p.embed(L) for p in _eigen_directions(g))
    pts = set(seeds)
    frontier = list(pts)
    while frontier:
        nxt = []
        for p in frontier:
            for M in maps:
                q = M.embed(L) @ p
                if q not in pts:
                    pts.add(q)
                    nxt.append(q)
        frontier = nxt
    return tuple(sorted(pts))


def build_model(level: int, factors, delta0, rank: int | None = None) -> FiniteModel:
    """Validate the data and precompute the Delta action on the finite model."""
    N = level
    factors = tuple(factors)
    gens = tuple(delta0)
    if N < 1:
        raise LevelIncompatible("level must be positive")
    if rank is None:
        rank = len(gens[0].base) if gens else 2
    bases, fibers = [], []
    for g in gens:
        if len(g.base) != rank:
            raise LevelIncompatible("generators live in bases of different rank")
        if len(g.actions) != len(factors):
            raise ActionOrderMismatch(f"{len(g.actions)} fiber actions for {len(factors)} factors")
        x = _base_vector(g.base, N)
        maps = tuple(_fiber_map(cls, e) for cls, e in zip(factors, g.actions))
        ox = _base_order(x, N)
        for M in maps:
            try:
                k = proj_order(M, cap=max(ox, 1))
            except OrderExceedsCap:
                k = None
            if k is None or ox % k:
                raise ActionOrderMismatch(f"fiber action order does not divide the base order {ox}")
        bases.append(x)
        fibers.append(maps)

    zero = tuple([0] * rank)
    table = {zero: tuple(ProjMap.identity(cls.n + 1) for cls in factors)}
    frontier = [zero]
    while frontier:
        nxt = []
        for e in frontier:
            for x, maps in zip(bases, fibers):
                s = tuple((a + b) % N for a, b in zip(e, x))
                img = tuple(_mul(A, B) for A, B in zip(table[e], maps))
                if s in table:
                    if any(not _same(P, Q) for P, Q in zip(table[s], img)):
                        raise ActionOrderMismatch("fiber actions do not define a homomorphism on Delta")
                else:
                    table[s] = img
                    nxt.append(s)
        frontier = nxt

    samples = tuple(_sample_points(cls, [table[e][i] for e in table]) for i, cls in enumerate(factors))
    index = [{p: j for j, p in enumerate(s)} for s in samples]
    action, transport = {}, {}
    for e, maps in table.items():
        perms, invs = [], []
        for i, M in enumerate(maps):
            L = samples[i][0].conductor
            Me = M.embed(L)
            perm = tuple(index[i][Me @ p] for p in samples[i])
            inv = [0] * len(perm)
            for j, t in enumerate(perm):
                inv[t] = j
            perms.append(perm)
            invs.append(tuple(inv))
        action[e] = tuple(perms)
        transport[e] = tuple(invs)
    return FiniteModel(N, rank, factors, gens, samples, tuple(sorted(table)), action, transport)


def _mul(A: ProjMap, B: ProjMap) -> ProjMap:
    L = common_conductor(A, B)
    return A.embed(L) @ B.embed(L)


def _same(A: ProjMap, B: ProjMap) -> bool:
    L = common_conductor(A, B)
    return A.embed(L) == B.embed(L)


def corrupt_transport(model: FiniteModel, factor: int = -1) -> FiniteModel:
    """A copy whose transport table uses the identity for one element that acts
    nontrivially on the given factor (negative control)."""
    factor %= model.r
    transport = dict(model.transport)
    for e in model.elements:
        perm = model.action[e][factor]
        if perm != tuple(range(len(perm))):
            t = list(transport[e])
            t[factor] = tuple(range(len(perm)))
            transport[e] = tuple(t)
            break
    return replace(model, transport=transport)


def orbit_of(model: FiniteModel, point) -> OrbitClass:
    """The Delta-orbit of (x, (alpha_1, ..., alpha_r)), alpha_i sample indices."""
    x, alphas = point
    orbit = set()
    for e in model.elements:
        perms = model.action[e]
        orbit.add((model.translate(x, e), tuple(p[a] for p, a in zip(perms, alphas))))
    return OrbitClass(min(orbit), frozenset(orbit))


def factor_orbit(model: FiniteModel, i: int, point) -> OrbitClass:
    """The orbit of (x, alpha) in the i-th factor model (0-based i)."""
    x, alpha = point
    orbit = set()
    for e in model.elements:
        orbit.add((model.translate(x, e), model.action[e][i][alpha]))
    return OrbitClass(min(orbit), frozenset(orbit))


def base_class(model: FiniteModel, x) -> tuple:
    return min(model.translate(x, e) for e in model.elements)


def project_factor(model: FiniteModel, cls: OrbitClass, i: int) -> OrbitClass:
    """Image of a combined class in the i-th factor quotient (0-based i)."""
    x, alphas = cls.representative
    return factor_orbit(model, i, (x, alphas[i]))


def psi_construct(model: FiniteModel, factor_classes, representatives=None) -> OrbitClass:
    """The combined class over a compatible tuple of factor classes.

    Take the base point x_1 of the first class; for each i the difference
    a_i = x_i - x_1 lies in Delta, and alpha_i is moved back by the fiber
    action of a_i. ``representatives`` optionally picks the orbit element
    used for each class (default: the canonical representative).
    """
    factor_classes = list(factor_classes)
    if len(factor_classes) != model.r:
        raise Incompatible(f"expected {model.r} factor classes")
    if representatives is None:
        reps = [c.representative for c in factor_classes]
    else:
        reps = list(representatives)
        if any(p not in c.orbit for p, c in zip(reps, factor_classes)):
            raise Incompatible("representative is not in its class")
    base = {base_class(model, x) for x, _ in reps}
    if len(base) != 1:
        raise Incompatible("factor classes lie over different base points")
    x1 = reps[0][0]
    alphas = []
    for i, (xi, ai) in enumerate(reps):
        a = tuple((p - q) % model.level for p, q in zip(xi, x1))
        if a not in model.transport:
            raise NoTransport(f"{a} is not an element of Delta")
        alphas.append(model.transport[a][i][ai])
    return orbit_of(model, (x1, tuple(alphas)))


REPRESENTATIVE_CHOICES = 256


def combined_classes(model: FiniteModel) -> set:
    seen, out = set(), set()
    for x in model.base_points():
        for alphas in product(*(range(len(s)) for s in model.samples)):
            if (x, alphas) in seen:
                continue
            cls = orbit_of(model, (x, alphas))
            seen |= cls.orbit
            out.add(cls)
    return out


def factor_classes(model: FiniteModel, i: int) -> set:
    seen, out = set(), set()
    for x in model.base_points():
        for a in range(len(model.samples[i])):
            if (x, a) in seen:
                continue
            cls = factor_orbit(model, i, (x, a))
            seen |= cls.orbit
            out.add(cls)
    return out


def compatible_tuples(model: FiniteModel) -> list:
    by_base = []
    for i in range(model.r):
        groups = {}
        for c in factor_classes(model, i):
            groups.setdefault(base_class(model, c.representative[0]), []).append(c)
        by_base.append(groups)
    out = []
    for b in sorted({base_class(model, x) for x in model.base_points()}):
        lists = [sorted(g.get(b, []), key=lambda c: c.representative) for g in by_base]
        out.extend(product(*lists))
    return out


def check_universal_property(model: FiniteModel) -> list[dict]:
    """Existence, uniqueness and commutation of the map into the fibered
    product, checked exhaustively on the finite model."""
    entries = []

    def entry(cid, ok, detail):
        entries.append({"check_id": f"fiber_product.{cid}", "status": "pass" if ok else "fail",
                        "detail": detail})

    combined = combined_classes(model)
    size = len(model.elements)
    bad_orbits = sum(1 for c in combined if len(c.orbit) != size)
    entry("freeness", bad_orbits == 0, f"{bad_orbits} orbits of size != {size}")

    bad_proj = 0
    for c in combined:
        for i in range(model.r):
            images = {factor_orbit(model, i, (x, al[i])) for x, al in c.orbit}
            bad_proj += len(images) != 1
    entry("projection_well_defined", bad_proj == 0, f"{bad_proj} ill-defined projections")

    preimages = {}
    for c in combined:
        key = tuple(project_factor(model, c, i) for i in range(model.r))
        preimages.setdefault(key, set()).add(c)

    tuples = compatible_tuples(model)
    missing = errors = not_unique = not_commuting = 0
    for t in tuples:
        # the construction must not depend on the representatives chosen
        choices = islice(product(*(sorted(c.orbit) for c in t)), REPRESENTATIVE_CHOICES)
        outs = set()
        try:
            for reps in choices:
                outs.add(psi_construct(model, t, reps))
        except QuotfibError:
            errors += 1
            continue
        if not outs <= combined:
            missing += 1
        if preimages.get(tuple(t), set()) != outs:
            not_unique += 1
        for out in outs:
            if tuple(project_factor(model, out, i) for i in range(model.r)) != tuple(t):
                not_commuting += 1
                break
    entry("existence", errors == 0 and missing == 0 and all(tuple(t) in preimages for t in tuples),
          f"{len(tuples)} compatible tuples, {errors} construction errors, {missing} outside the quotient")
    entry("uniqueness", not_unique == 0, f"{not_unique} tuples whose preimage is not the constructed class")
    entry("commutation", not_commuting == 0, f"{not_commuting} tuples not recovered by projection")
    entry("cardinality", len(combined) == len(tuples),
          f"{len(combined)} combined classes, {len(tuples)} compatible tuples")
    return entries


def model_spec_to_json(rank: int, factors, delta0) -> dict:
    return {"format_version": 1, "rank": rank, "factors": [c.to_json() for c in factors],
            "delta0": [g.to_json() for g in delta0]}


def model_spec_from_json(obj):
    if not isinstance(obj, dict) or set(obj) != {"format_version", "rank", "factors", "delta0"}:
        raise ParseError("model spec needs exactly format_version, rank, factors, delta0")
    if obj["format_version"] != 1:
        raise ParseError(f"unsupported format_version {obj['format_version']!r}")
    if not isinstance(obj["factors"], list) or not isinstance(obj["delta0"], list):
        raise ParseError("factors and delta0 must be lists")
    factors = [FibrationClass.from_json(c) for c in obj["factors"]]
    delta0 = [DeltaGenerator.from_json(g) for g in obj["delta0"]]
    rank = obj["rank"]
    if not isinstance(rank, int) or rank < 1 or any(len(g.base) != rank for g in delta0):
        raise ParseError("rank must be a positive integer matching every base vector")
    return rank, factors, delta0
