"""The three non-trivial t-intersecting constructions and the predicates on families.

All families are materialized: ``members`` is a sorted tuple of (n,0)-subspaces.
Each builder has a targeted path (union of superset enumerations) and a
``method="filter"`` path that scans all of V[n,0] against the defining
predicate; the latter exists as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import reduce

from .errors import (
    BadC,
    BudgetExceeded,
    EmptyFamily,
    MalformedInput,
    NonCanonical,
    NotNested,
    TypeViolation,
)
from .qcount import gauss, nprime, valid_c
from .space import (
    SpaceContext,
    SubspaceType,
    enumerate_between,
    enumerate_typed,
    type_count,
    type_of,
)
from .subspace import (
    Subspace,
    contains,
    from_record as subspace_from_record,
    intersect,
    intersection_dim,
    rank_words,
)

KINDS = ("H1", "H2", "H3", "custom")


@dataclass(frozen=True)
class Family:
    ctx: SpaceContext
    t: int
    members: tuple[Subspace, ...]
    kind: str = "custom"
    generators: dict = dc_field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = self.ctx.n
        for F in self.members:
            if type_of(self.ctx, F) != (n, 0):
                raise TypeViolation(f"family member {F!r} is not an ({n},0)-subspace")
        if any(a >= b for a, b in zip(self.members, self.members[1:])):
            raise ValueError("members must be strictly ascending")

    @classmethod
    def of(cls, ctx, t, members, kind="custom", generators=None) -> "Family":
        return cls(ctx, t, tuple(sorted(set(members))), kind, dict(generators or {}))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, F):
        return F in self.member_set

    @property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    def without(self, F: Subspace) -> "Family":
        return Family.of(self.ctx, self.t, [G for G in self.members if G != F], "custom",
                         {"derived_from": self.kind})


def _expect(ctx: SpaceContext, U: Subspace, m: int, s: int | tuple, name: str) -> int:
    got = type_of(ctx, U)
    allowed = s if isinstance(s, tuple) else (s,)
    if got.m != m or got.s not in allowed:
        want = f"({m}, {s})" if not isinstance(s, tuple) else f"({m}, k) with k in {s}"
        raise TypeViolation(f"{name} must have type {want}, got {tuple(got)}")
    return got.s


def _nested(a: Subspace, b: Subspace, what: str) -> None:
    if not contains(b, a):
        raise NotNested(what)


def _subspaces_of(ctx, U: Subspace, m: int) -> list[Subspace]:
    return list(enumerate_between(ctx, ctx.zero, U, (m, 0), ordered=False))


def _supersets(ctx, D: Subspace, upper: Subspace | None = None):
    return enumerate_between(ctx, D, ctx.V if upper is None else upper, (ctx.n, 0), ordered=False)


def _all_members(ctx: SpaceContext, budget: int | None = None):
    projected = type_count(ctx, SubspaceType(ctx.n, 0))
    if budget is not None and projected > budget:
        raise BudgetExceeded(f"V[n,0] has {projected} elements, budget {budget}")
    return enumerate_typed(ctx, (ctx.n, 0), ordered=False)


def _a_part(ctx, t, X, M) -> set:
    """{F : X ⊆ F, dim(F ∩ M) >= t+1} via supersets of the (t+1,0)-subspaces D with X ⊆ D ⊆ M."""
    out = set()
    for D in enumerate_between(ctx, X, M, (t + 1, 0), ordered=False):
        out.update(_supersets(ctx, D))
    return out


def build_h1(ctx: SpaceContext, t: int, X: Subspace, M: Subspace, method: str = "targeted") -> Family:
    _expect(ctx, X, t, 0, "X")
    _expect(ctx, M, ctx.n + 1, 1, "M")
    _nested(X, M, "X must be contained in M")
    gens = {"X": X, "M": M}
    if method == "filter":
        members = [F for F in _all_members(ctx)
                   if (contains(F, X) and intersection_dim(F, M) >= t + 1) or contains(M, F)]
        return Family.of(ctx, t, members, "H1", gens)
    members = _a_part(ctx, t, X, M)
    members.update(enumerate_between(ctx, ctx.zero, M, (ctx.n, 0), ordered=False))
    return Family.of(ctx, t, members, "H1", gens)


def h2_parts(ctx: SpaceContext, t: int, X: Subspace, M: Subspace, C: Subspace) -> tuple[set, set, set]:
    """The three defining pieces (A, B, C) of the second construction, built independently."""
    n = ctx.n
    c = C.dim
    A = _a_part(ctx, t, X, M)
    B = set()
    if c <= 2 * n - t:
        for D in enumerate_between(ctx, X, C, (c - n + t, 0), ordered=False):
            if intersect(D, M) != X:
                continue
            B.update(F for F in _supersets(ctx, D) if intersect(F, C) == D)
    Cp = set()
    for D in _subspaces_of(ctx, M, n - 1):
        if contains(D, X):
            continue
        Cp.update(F for F in _supersets(ctx, D, C) if intersect(F, M) == D)
    return A, B, Cp


def _check_h2(ctx, t, X, M, C) -> int:
    n = ctx.n
    _expect(ctx, X, t, 0, "X")
    _expect(ctx, M, n, (0, 1), "M")
    c = C.dim
    if c not in valid_c(n, ctx.ell, t):
        raise BadC(f"dim C = {c} is not in {valid_c(n, ctx.ell, t)}")
    _expect(ctx, C, c, c - n, "C")
    _nested(X, M, "X must be contained in M")
    _nested(M, C, "M must be contained in C")
    return c


def build_h2(ctx: SpaceContext, t: int, X: Subspace, M: Subspace, C: Subspace,
             method: str = "targeted") -> Family:
    c = _check_h2(ctx, t, X, M, C)
    n = ctx.n
    gens = {"X": X, "M": M, "C": C}
    if method == "filter":
        members = []
        for F in _all_members(ctx):
            fm = intersection_dim(F, M)
            if contains(F, X) and fm >= t + 1:
                members.append(F)
            elif fm == t and contains(F, X) and intersection_dim(F, C) == c - n + t:
                members.append(F)
            elif contains(C, F) and intersection_dim(F, X) == t - 1 and fm == n - 1:
                members.append(F)
        return Family.of(ctx, t, members, "H2", gens)
    A, B, Cp = h2_parts(ctx, t, X, M, C)
    return Family.of(ctx, t, A | B | Cp, "H2", gens)


def build_h3(ctx: SpaceContext, t: int, Z: Subspace, method: str = "targeted") -> Family:
    _expect(ctx, Z, t + 2, (0, 1), "Z")
    gens = {"Z": Z}
    if method == "filter":
        members = [F for F in _all_members(ctx) if intersection_dim(F, Z) >= t + 1]
        return Family.of(ctx, t, members, "H3", gens)
    members = set()
    for D in _subspaces_of(ctx, Z, t + 1):
        members.update(_supersets(ctx, D))
    return Family.of(ctx, t, members, "H3", gens)


def build_star(ctx: SpaceContext, t: int, X: Subspace) -> Family:
    """The trivial family of all (n,0)-subspaces through a (t,0)-subspace X."""
    _expect(ctx, X, t, 0, "X")
    return Family.of(ctx, t, _supersets(ctx, X), "custom", {"X": X})


# canonical generators


def default_x(ctx: SpaceContext, t: int) -> Subspace:
    return ctx.span(ctx.e(i) for i in range(1, t + 1))


def default_h1_m(ctx: SpaceContext) -> Subspace:
    return ctx.span([ctx.e(i) for i in range(1, ctx.n + 1)] + [ctx.w(1)])


def default_h2_m(ctx: SpaceContext, k: int) -> Subspace:
    n = ctx.n
    if k == 0:
        return ctx.span(ctx.e(i) for i in range(1, n + 1))
    return ctx.span([ctx.e(i) for i in range(1, n)] + [ctx.w(1)])


def default_h2_c(ctx: SpaceContext, c: int) -> Subspace:
    # contains both default M's: e1..en plus the first c-n vectors of W
    n = ctx.n
    return ctx.span([ctx.e(i) for i in range(1, n + 1)] + [ctx.w(j) for j in range(1, c - n + 1)])


def default_z(ctx: SpaceContext, t: int, k: int) -> Subspace:
    if k == 0:
        return ctx.span(ctx.e(i) for i in range(1, t + 3))
    return ctx.span([ctx.e(i) for i in range(1, t + 2)] + [ctx.w(1)])


def build_default(ctx: SpaceContext, kind: str, t: int, k: int = 0, c: int | None = None) -> Family:
    kind = kind.upper()
    X = default_x(ctx, t)
    if kind == "H1":
        return build_h1(ctx, t, X, default_h1_m(ctx))
    if kind == "H2":
        if c is None:
            raise BadC("H2 requires c")
        if not ctx.n + 1 <= c <= ctx.dim:
            raise BadC(f"c = {c} is outside n+1..n+ell")
        return build_h2(ctx, t, X, default_h2_m(ctx, k), default_h2_c(ctx, c))
    if kind == "H3":
        return build_h3(ctx, t, default_z(ctx, t, k))
    if kind == "STAR":
        return build_star(ctx, t, X)
    raise ValueError(f"unknown family kind {kind!r}")


# predicates


def _meets_all(G: Subspace, members, t: int) -> bool:
    if G.field.q == 2:
        gw, gd = G.words, G.dim
        for F in members:
            if gd + F.dim - rank_words(gw + F.words) < t:
                return False
        return True
    return all(intersection_dim(G, F) >= t for F in members)


def is_t_intersecting(fam: Family) -> bool:
    ms = fam.members
    return all(_meets_all(A, ms[i + 1:], fam.t) for i, A in enumerate(ms))


def common_dim(fam: Family) -> int:
    if not fam.members:
        raise EmptyFamily("common_dim of an empty family")
    return reduce(intersect, fam.members).dim


def is_trivial(fam: Family) -> bool:
    return common_dim(fam) >= fam.t


def _covering_candidates(fam: Family, d: int) -> set:
    """(d,0)-subspaces meeting the first member in dim >= t; every cover is among them."""
    ctx, t = fam.ctx, fam.t
    F0 = fam.members[0]
    seeds = _subspaces_of(ctx, F0, t)
    projected = len(seeds) * nprime(ctx.q, ctx.n, ctx.ell, t, 0, d, 0)
    if projected > ctx.budget:
        raise BudgetExceeded(f"projected {projected} covering candidates exceeds budget {ctx.budget}")
    out = set()
    for S in seeds:
        out.update(enumerate_between(ctx, S, ctx.V, (d, 0), ordered=False))
    return out


def covers(fam: Family, d: int) -> list[Subspace]:
    """All (d,0)-subspaces T with dim(T ∩ F) >= t for every member F, sorted."""
    if not fam.members:
        raise EmptyFamily("covering sets of an empty family")
    return sorted(T for T in _covering_candidates(fam, d) if _meets_all(T, fam.members, fam.t))


def tau_t(fam: Family) -> int:
    """t-covering number: least d admitting a (d,0)-subspace meeting all members in dim >= t."""
    if not fam.members:
        raise EmptyFamily("tau_t of an empty family")
    t, n = fam.t, fam.ctx.n
    if t > n:
        raise ValueError(f"t = {t} exceeds n = {n}")
    for d in range(t, n + 1):
        if any(_meets_all(T, fam.members, t) for T in sorted(_covering_candidates(fam, d))):
            return d
    raise ValueError("family is not t-intersecting; no covering subspace of dim <= n")


def t_set(fam: Family) -> list[Subspace]:
    """The (t+1,0)-subspaces meeting every member in dim >= t."""
    return covers(fam, fam.t + 1)


def span_of(ctx: SpaceContext, subspaces) -> Subspace:
    rows = [r for U in subspaces for r in U.basis]
    return ctx.span(rows) if rows else ctx.zero


def restrict(fam: Family, S: Subspace) -> Family:
    """Members containing S."""
    ctx = fam.ctx
    if type_of(ctx, S).s != 0:
        raise TypeViolation("S must meet W trivially")
    return Family.of(ctx, fam.t, [F for F in fam.members if contains(F, S)], "custom",
                     {"restricted_from": fam.kind, "S": S})


def compatible_set(fam: Family, budget: int | None = None) -> Family:
    """Every (n,0)-subspace meeting all members in dim >= t."""
    ctx = fam.ctx
    limit = ctx.budget if budget is None else budget
    members = [G for G in _all_members(ctx, limit) if _meets_all(G, fam.members, fam.t)]
    return Family.of(ctx, fam.t, members, "custom", {"compatible_with": fam.kind})


def is_maximal(fam: Family, budget: int | None = None) -> bool:
    ctx = fam.ctx
    limit = ctx.budget if budget is None else budget
    own = fam.member_set
    for G in _all_members(ctx, limit):
        if G not in own and _meets_all(G, fam.members, fam.t):
            return False
    return True


# serialization


def to_record(fam: Family) -> dict:
    ctx = fam.ctx
    gens = {k: v.to_record() for k, v in sorted(fam.generators.items()) if isinstance(v, Subspace)}
    prov = {"kind": fam.kind, "generators": gens}
    return {
        "params": {"q": ctx.q, "n": ctx.n, "l": ctx.ell, "t": fam.t},
        "provenance": prov,
        "members": [F.to_record() for F in fam.members],
    }


def from_record(rec: dict, *, strict: bool = False, t: int | None = None,
                budget: int | None = None) -> Family:
    try:
        params = rec["params"]
        q, n, ell = params["q"], params["n"], params["l"]
        t = params["t"] if t is None else t
        raw = rec["members"]
        prov = rec.get("provenance", {})
        kind = prov.get("kind", "custom")
        gens_raw = prov.get("generators", {})
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedInput(f"malformed family record: {exc}") from exc
    if not isinstance(raw, list) or not isinstance(gens_raw, dict):
        raise MalformedInput("members must be a list and generators a mapping")
    ctx = SpaceContext.create(q, n, ell, budget)
    try:
        members = [from_subspace_record(r, strict, ctx) for r in raw]
        gens = {k: from_subspace_record(v, strict, ctx) for k, v in gens_raw.items()}
    except NonCanonical:
        raise
    except (ValueError, TypeError) as exc:
        raise MalformedInput(str(exc)) from exc
    if strict and members != sorted(set(members)):
        raise NonCanonical("members are not in strictly ascending canonical order")
    if kind not in KINDS:
        kind = "custom"
    try:
        return Family.of(ctx, t, members, kind, gens)
    except TypeViolation as exc:
        raise MalformedInput(str(exc)) from exc


def from_subspace_record(rec, strict: bool, ctx: SpaceContext) -> Subspace:
    U = subspace_from_record(rec, strict=strict)
    ctx.check(U)
    return U
