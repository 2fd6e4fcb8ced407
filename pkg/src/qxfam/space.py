"""The singular linear space V = F_q^(n+ell) with W spanned by the last ell coordinates.

Enumeration builds RREF matrices pattern by pattern: pick the pivot columns,
then fill the free entries.  Within one pivot pattern, filling the free
entries in row-major order with ``itertools.product`` already yields
ascending canonical order, so the global stream is a k-way merge of the
per-pattern blocks.  Nothing is deduplicated because nothing repeats.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field as dc_field
from itertools import combinations, product
from typing import Iterator, NamedTuple

from .errors import BudgetExceeded, DimensionMismatch, NotNested, TypeViolation
from .field import FieldSpec, make_field
from .qcount import gauss, nprime
from .subspace import (
    Subspace,
    canonicalize,
    contains,
    intersect,
    span_sum,
)

DEFAULT_BUDGET = 2**26


def default_budget() -> int:
    env = os.environ.get("QX_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class SubspaceType(NamedTuple):
    m: int
    s: int


# per-process tally of enumerated candidates, read by the verification runner
_stats = {"enumerated": 0}


def enumerated_count() -> int:
    return _stats["enumerated"]


@dataclass(frozen=True)
class SpaceContext:
    field: FieldSpec
    n: int
    ell: int
    budget: int = dc_field(default_factory=default_budget, compare=False)

    def __post_init__(self):
        if self.n < 1 or self.ell < 1:
            raise ValueError(f"n and ell must be positive (got n={self.n}, ell={self.ell})")

    @classmethod
    def create(cls, q: int, n: int, ell: int, budget: int | None = None) -> "SpaceContext":
        if budget is None:
            return cls(make_field(q), n, ell)
        return cls(make_field(q), n, ell, budget)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def dim(self) -> int:
        return self.n + self.ell

    def unit(self, i: int) -> tuple[int, ...]:
        """Standard basis vector e_i, 0-based."""
        return tuple(int(j == i) for j in range(self.dim))

    def e(self, i: int) -> tuple[int, ...]:
        """i-th basis vector (1-based) of the complement of W."""
        return self.unit(i - 1)

    def w(self, i: int) -> tuple[int, ...]:
        """i-th basis vector (1-based) of W."""
        return self.unit(self.n + i - 1)

    @property
    def W(self) -> Subspace:
        return self.span([self.w(i) for i in range(1, self.ell + 1)])

    @property
    def V(self) -> Subspace:
        return self.span([self.unit(i) for i in range(self.dim)])

    @property
    def zero(self) -> Subspace:
        return Subspace(self.field, self.dim, (), ())

    def span(self, rows) -> Subspace:
        return canonicalize(list(rows), self.field, self.dim)

    def check(self, u: Subspace) -> None:
        if u.ambient_dim != self.dim or u.field.q != self.q:
            raise DimensionMismatch(
                f"subspace of F_{u.q}^{u.ambient_dim} used in F_{self.q}^{self.dim}"
            )


def type_of(ctx: SpaceContext, u: Subspace) -> SubspaceType:
    """(dim U, dim(U ∩ W)); with W on the last coordinates this is a pivot count."""
    ctx.check(u)
    return SubspaceType(u.dim, sum(1 for p in u.pivots if p >= ctx.n))


def is_feasible(ctx: SpaceContext, t: SubspaceType) -> bool:
    m, s = t
    return 0 <= s <= min(m, ctx.ell) and 0 <= m - s <= ctx.n


def type_count(ctx: SpaceContext, t: SubspaceType) -> int:
    if not is_feasible(ctx, t):
        return 0
    return nprime(ctx.q, ctx.n, ctx.ell, 0, 0, t.m, t.s)


def _charge(ctx: SpaceContext, projected: int) -> None:
    if projected > ctx.budget:
        raise BudgetExceeded(f"projected {projected} candidates exceeds budget {ctx.budget}")


def _pattern_block(field: FieldSpec, d: int, pivots: tuple[int, ...]) -> Iterator[tuple]:
    """All RREF bases with the given pivot columns, ascending."""
    pivset = set(pivots)
    free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, d) if j not in pivset]
    template = [[0] * d for _ in pivots]
    for i, p in enumerate(pivots):
        template[i][p] = 1
    if not free:
        yield tuple(tuple(r) for r in template)
        return
    for vals in product(range(field.q), repeat=len(free)):
        for (i, j), v in zip(free, vals):
            template[i][j] = v
        yield tuple(tuple(r) for r in template)


def rref_bases(field: FieldSpec, d: int, m: int, pivot_filter=None,
               ordered: bool = True) -> Iterator[tuple]:
    """All m-dimensional RREF bases of F_q^d, optionally restricted by pivot pattern."""
    patterns = [p for p in combinations(range(d), m) if pivot_filter is None or pivot_filter(p)]
    blocks = [_pattern_block(field, d, p) for p in patterns]
    if ordered and len(blocks) > 1:
        return heapq.merge(*blocks)
    return (b for blk in blocks for b in blk)


def enumerate_typed(ctx: SpaceContext, t: SubspaceType, ordered: bool = True) -> Iterator[Subspace]:
    t = SubspaceType(*t)
    if not is_feasible(ctx, t):
        return iter(())
    _charge(ctx, type_count(ctx, t))
    n, f, d = ctx.n, ctx.field, ctx.dim

    def in_w_count(pivots):
        return sum(1 for p in pivots if p >= n) == t.s

    def gen():
        for basis in rref_bases(f, d, t.m, in_w_count, ordered):
            _stats["enumerated"] += 1
            yield Subspace(f, d, basis, _pivots_of(basis))

    return gen()


def _pivots_of(basis) -> tuple[int, ...]:
    return tuple(r.index(1) for r in basis)


def complement_basis(lower: Subspace, upper: Subspace) -> list[tuple[int, ...]]:
    """Rows of ``upper`` that extend a basis of ``lower`` to a basis of ``upper``."""
    ext: list[tuple[int, ...]] = []
    cur = lower
    for r in upper.basis:
        nxt = span_sum(cur, canonicalize([r], cur.field, cur.ambient_dim))
        if nxt.dim > cur.dim:
            ext.append(r)
            cur = nxt
    return ext


def enumerate_between(ctx: SpaceContext, lower: Subspace, upper: Subspace, t: SubspaceType,
                      ordered: bool = True) -> Iterator[Subspace]:
    """Every U of type t with lower ⊆ U ⊆ upper."""
    ctx.check(lower)
    ctx.check(upper)
    if not contains(upper, lower):
        raise NotNested("lower is not contained in upper")
    t = SubspaceType(*t)
    if not is_feasible(ctx, t):
        return iter(())
    if lower.dim == 0 and upper.dim == ctx.dim:
        return enumerate_typed(ctx, t, ordered)
    k = upper.dim - lower.dim
    j = t.m - lower.dim
    if j < 0 or j > k:
        return iter(())
    _charge(ctx, gauss(k, j, ctx.q))
    f, d = ctx.field, ctx.dim
    ext = complement_basis(lower, upper)

    def gen():
        for coeffs in rref_bases(f, k, j, ordered=False):
            _stats["enumerated"] += 1
            rows = list(lower.basis) + [tuple(f.lincomb(c, ext, d)) for c in coeffs]
            u = canonicalize(rows, f, d)
            if type_of(ctx, u) == t:
                yield u

    if ordered:
        return iter(sorted(gen()))
    return gen()


def count_exact_trace(ctx: SpaceContext, E: Subspace, O: Subspace, a: int,
                      exclude_WplusE: bool = False) -> int:
    """Brute-force count of (a,0)-subspaces F with F ∩ E = O (and F ⊄ W + E if flagged)."""
    ctx.check(E)
    ctx.check(O)
    if not contains(E, O):
        raise NotNested("O is not contained in E")
    m, so = type_of(ctx, O)
    if so != 0:
        raise TypeViolation(f"O must have type (m, 0), got ({m}, {so})")
    me, se = type_of(ctx, E)
    if exclude_WplusE:
        if (me, se) != (ctx.n, 1):
            raise TypeViolation(f"E must have type (n, 1) = ({ctx.n}, 1), got ({me}, {se})")
    elif me - se != ctx.n:
        raise TypeViolation(f"E must have type (n+r, r), got ({me}, {se})")
    if not m <= a <= ctx.n:
        raise TypeViolation(f"need m <= a <= n (m={m}, a={a}, n={ctx.n})")
    wpe = span_sum(ctx.W, E) if exclude_WplusE else None
    total = 0
    for F in enumerate_between(ctx, O, ctx.V, (a, 0), ordered=False):
        if intersect(F, E) != O:
            continue
        if wpe is not None and contains(wpe, F):
            continue
        total += 1
    return total


def tally_between(ctx: SpaceContext, lower: Subspace, upper: Subspace, m: int) -> dict[int, int]:
    """Counts of m-dimensional U with lower ⊆ U ⊆ upper, keyed by dim(U ∩ W)."""
    ctx.check(lower)
    ctx.check(upper)
    if not contains(upper, lower):
        raise NotNested("lower is not contained in upper")
    k, j = upper.dim - lower.dim, m - lower.dim
    if j < 0 or j > k:
        return {}
    _charge(ctx, gauss(k, j, ctx.q))
    f, d, n = ctx.field, ctx.dim, ctx.n
    out: dict[int, int] = {}
    if lower.dim == 0 and upper.dim == d:
        # RREF bases of V are already canonical; read the type off the pivots
        for basis in rref_bases(f, d, m, ordered=False):
            _stats["enumerated"] += 1
            s = sum(1 for p in _pivots_of(basis) if p >= n)
            out[s] = out.get(s, 0) + 1
        return out
    ext = complement_basis(lower, upper)
    for coeffs in rref_bases(f, k, j, ordered=False):
        _stats["enumerated"] += 1
        u = canonicalize(list(lower.basis) + [tuple(f.lincomb(c, ext, d)) for c in coeffs], f, d)
        s = sum(1 for p in u.pivots if p >= n)
        out[s] = out.get(s, 0) + 1
    return out
