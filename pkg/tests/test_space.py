from itertools import product

import pytest

from qxfam.errors import BudgetExceeded, DimensionMismatch, NotNested, TypeViolation
from qxfam.qcount import gauss, nprime
from qxfam.space import (
    SpaceContext,
    SubspaceType,
    complement_basis,
    count_exact_trace,
    enumerate_between,
    enumerate_typed,
    is_feasible,
    tally_between,
    type_count,
    type_of,
)
from qxfam.subspace import canonicalize, contains, intersect


def brute_typed(ctx, m, s):
    """All (m, s)-subspaces by spanning every m-tuple of vectors."""
    vecs = list(product(range(ctx.q), repeat=ctx.dim))
    out = set()
    for rows in product(vecs, repeat=m):
        u = ctx.span(rows) if rows else ctx.zero
        if u.dim == m and type_of(ctx, u) == (m, s):
            out.add(u)
    return out


def test_type_examples():
    ctx = SpaceContext.create(2, 2, 2)
    assert type_of(ctx, ctx.W) == (2, 2)
    assert type_of(ctx, ctx.zero) == (0, 0)
    assert type_of(ctx, ctx.span([(1, 0, 1, 0)])) == (1, 0)
    with pytest.raises(DimensionMismatch):
        type_of(ctx, canonicalize([(1, 0, 0)], 2))


def test_enumeration_examples():
    ctx = SpaceContext.create(2, 2, 2)
    assert len(list(enumerate_typed(ctx, (2, 0)))) == 16
    assert len(list(enumerate_typed(ctx, (1, 1)))) == 3
    assert list(enumerate_typed(ctx, (0, 0))) == [ctx.zero]
    assert list(enumerate_typed(ctx, (3, 0))) == []


@pytest.mark.parametrize("q,n,ell", [(2, 1, 2), (2, 2, 1), (3, 1, 1), (2, 2, 2)])
def test_enumeration_matches_brute_force(q, n, ell):
    ctx = SpaceContext.create(q, n, ell)
    for m in range(0, min(ctx.dim, 3) + 1):
        for s in range(0, m + 1):
            got = list(enumerate_typed(ctx, (m, s)))
            assert set(got) == brute_typed(ctx, m, s)
            assert len(got) == len(set(got)) == type_count(ctx, SubspaceType(m, s))


@pytest.mark.parametrize("q,n,ell", [(2, 2, 3), (3, 2, 2), (2, 3, 2), (4, 1, 2)])
def test_streams_sorted_and_counted(q, n, ell):
    ctx = SpaceContext.create(q, n, ell)
    for m in range(ctx.dim + 1):
        for s in range(m + 1):
            if not is_feasible(ctx, (m, s)):
                assert list(enumerate_typed(ctx, (m, s))) == []
                continue
            got = list(enumerate_typed(ctx, (m, s)))
            assert all(a < b for a, b in zip(got, got[1:]))
            assert len(got) == nprime(q, n, ell, 0, 0, m, s)
            assert all(type_of(ctx, u) == (m, s) for u in got)


def test_between_examples():
    ctx = SpaceContext.create(2, 3, 2)
    line = ctx.span([ctx.e(1)])
    above = list(enumerate_between(ctx, line, ctx.V, (2, 0)))
    assert len(above) == nprime(2, 3, 2, 1, 0, 2, 0) == 4 * 3
    assert all(contains(u, line) for u in above)
    assert list(enumerate_between(ctx, line, line, (1, 0))) == [line]
    assert list(enumerate_between(ctx, ctx.zero, ctx.V, (2, 1))) == list(enumerate_typed(ctx, (2, 1)))
    with pytest.raises(NotNested):
        list(enumerate_between(ctx, ctx.span([ctx.e(2)]), line, (1, 0)))


def test_between_inside_small_ambient():
    # (2,0)-subspaces through a (1,0)-line inside a (4,1)-subspace, n=3
    ctx = SpaceContext.create(2, 3, 2)
    X = ctx.span([ctx.e(1)])
    M = ctx.span([ctx.e(1), ctx.e(2), ctx.e(3), ctx.w(1)])
    assert len(list(enumerate_between(ctx, X, M, (2, 0)))) == 2 * 3
    ctx1 = SpaceContext.create(2, 3, 1)
    assert nprime(2, 3, 1, 1, 0, 2, 0) == 6
    assert len(list(enumerate_between(ctx1, ctx1.span([ctx1.e(1)]), ctx1.V, (2, 0)))) == 6


@pytest.mark.parametrize("q,n,ell", [(2, 2, 2), (3, 2, 1), (2, 3, 1)])
def test_between_agrees_with_filtered_typed(q, n, ell):
    ctx = SpaceContext.create(q, n, ell)
    lower = ctx.span([ctx.e(1)])
    upper = ctx.span([ctx.e(1), ctx.e(2), ctx.w(1)])
    for m, s in [(2, 0), (2, 1), (3, 1)]:
        want = [u for u in enumerate_typed(ctx, (m, s)) if contains(u, lower) and contains(upper, u)]
        assert list(enumerate_between(ctx, lower, upper, (m, s))) == want


def test_tally_matches_nprime():
    ctx = SpaceContext.create(3, 2, 2)
    lower = ctx.span([ctx.e(1), ctx.w(1)])
    tally = tally_between(ctx, lower, ctx.V, 3)
    assert tally == {1: nprime(3, 2, 2, 2, 1, 3, 1), 2: nprime(3, 2, 2, 2, 1, 3, 2)}
    assert sum(tally.values()) == gauss(2, 1, 3)


def test_complement_basis():
    ctx = SpaceContext.create(3, 2, 2)
    lower = ctx.span([ctx.e(1)])
    upper = ctx.span([ctx.e(1), ctx.e(2), ctx.w(2)])
    ext = complement_basis(lower, upper)
    assert len(ext) == 2
    assert ctx.span(list(lower.basis) + ext) == upper


def test_budget():
    ctx = SpaceContext.create(2, 3, 4, budget=100)
    with pytest.raises(BudgetExceeded):
        enumerate_typed(ctx, (3, 0))
    with pytest.raises(BudgetExceeded):
        enumerate_between(ctx, ctx.zero, ctx.span([ctx.e(1), ctx.e(2), ctx.w(1), ctx.w(2), ctx.w(3)]), (3, 1))


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("QX_BUDGET", "10")
    ctx = SpaceContext.create(2, 2, 2)
    assert ctx.budget == 10
    with pytest.raises(BudgetExceeded):
        enumerate_typed(ctx, (2, 0))


def test_trace_examples():
    ctx = SpaceContext.create(2, 2, 2)
    E = ctx.span([ctx.e(1), ctx.e(2)])
    assert count_exact_trace(ctx, E, ctx.zero, 2) == 6
    E1 = ctx.span([ctx.e(1), ctx.w(1)])
    O = ctx.span([ctx.e(1)])
    assert count_exact_trace(ctx, E1, O, 2, exclude_WplusE=True) == 4
    assert count_exact_trace(ctx, E, O, 1) == 1


def test_trace_matches_direct_filter():
    ctx = SpaceContext.create(2, 2, 2)
    E = ctx.span([ctx.e(1), ctx.e(2)])
    direct = sum(1 for F in enumerate_typed(ctx, (2, 0)) if intersect(F, E) == ctx.zero)
    assert count_exact_trace(ctx, E, ctx.zero, 2) == direct


def test_trace_type_errors():
    ctx = SpaceContext.create(2, 2, 2)
    E = ctx.span([ctx.e(1), ctx.e(2)])
    with pytest.raises(TypeViolation):
        count_exact_trace(ctx, E, ctx.zero, 2, exclude_WplusE=True)
    with pytest.raises(TypeViolation):
        count_exact_trace(ctx, ctx.span([ctx.e(1)]), ctx.zero, 1)
    with pytest.raises(TypeViolation):
        count_exact_trace(ctx, ctx.span([ctx.e(1), ctx.e(2), ctx.w(1)]), ctx.span([ctx.w(1)]), 2)
    with pytest.raises(NotNested):
        count_exact_trace(ctx, E, ctx.span([ctx.w(1)]), 1)
