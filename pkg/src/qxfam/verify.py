"""Verification runner: closed forms against enumeration, inequality grids, family identities.

A check is identified by a lemma id.  Its grid (lists of q, n, t, l and a few
extras) is expanded into independent tasks; each task evaluates to one or
more ``PointResult`` rows.  Tasks never share state, so running them in a
process pool changes nothing but wall time.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable, NamedTuple

from . import families as fam_mod
from . import qcount as qc
from .errors import BudgetExceeded, HypothesisViolated, InternalInconsistency, QxError
from .space import (
    SpaceContext,
    count_exact_trace,
    default_budget,
    enumerate_between,
    enumerate_typed,
    enumerated_count,
    tally_between,
)
from .subspace import intersection_dim, rank_words

FULL_SCAN_LIMIT = 2**20

MODES = ("oracle", "inequality", "identity")


class Skip(Exception):
    """Raised inside an evaluator to mark the whole task as skipped."""


@dataclass
class PointResult:
    lemma: str
    check: str
    params: dict
    outcome: str
    relation: str = ""
    lhs: object = None
    rhs: object = None
    reason: str = ""
    note: str = ""
    enumerated: int = 0
    elapsed_ms: float | None = None

    def to_record(self, timing: bool = False) -> dict:
        rec = {
            "lemma": self.lemma,
            "check": self.check,
            "params": dict(self.params),
            "outcome": self.outcome,
            "relation": self.relation,
            "lhs": _show(self.lhs),
            "rhs": _show(self.rhs),
            "reason": self.reason,
            "note": self.note,
            "enumerated": self.enumerated,
        }
        if timing:
            rec["elapsed_ms"] = round(self.elapsed_ms or 0.0, 3)
        return rec


def _show(v) -> str | None:
    if v is None:
        return None
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


_RELATIONS: dict[str, Callable] = {
    "==": lambda a, b: a == b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def _compare(check: str, lhs, rel: str, rhs, note: str = "") -> PointResult:
    ok = _RELATIONS[rel](lhs, rhs)
    return PointResult("", check, {}, "pass" if ok else "fail", rel, lhs, rhs, note=note)


def _skip(check: str, reason: str) -> PointResult:
    return PointResult("", check, {}, "skip", reason=reason)


@dataclass(frozen=True)
class CheckSpec:
    lemma_id: str
    grid: dict = dc_field(default_factory=dict)
    mode: str | None = None

    def resolved(self) -> "CheckSpec":
        if self.lemma_id not in LEMMAS:
            raise ValueError(f"unknown lemma id {self.lemma_id!r}; choose from {', '.join(LEMMAS)}")
        lem = LEMMAS[self.lemma_id]
        if self.mode is not None and self.mode != lem.mode:
            raise ValueError(f"{self.lemma_id} runs in {lem.mode} mode, not {self.mode}")
        grid = dict(lem.default_grid)
        for key, vals in self.grid.items():
            if key not in lem.default_grid:
                raise ValueError(f"{self.lemma_id} takes no grid key {key!r}")
            if vals is not None:
                vals = sorted(set(int(v) for v in vals))
                if not vals:
                    raise ValueError(f"grid key {key!r} is empty")
            grid[key] = vals
        return CheckSpec(self.lemma_id, grid, lem.mode)

    def to_record(self) -> dict:
        grid = {k: ("auto" if v is None else list(v)) for k, v in self.grid.items()}
        return {"lemma": self.lemma_id, "mode": self.mode, "grid": grid}


@dataclass
class Report:
    spec: CheckSpec
    budget: int
    points: list[PointResult]
    elapsed_ms: float | None = None

    def summary(self) -> dict:
        out = {"total": len(self.points), "pass": 0, "fail": 0, "skip": 0}
        for p in self.points:
            out[p.outcome] += 1
        out["enumerated"] = sum(p.enumerated for p in self.points)
        return out

    @property
    def failed(self) -> bool:
        return any(p.outcome == "fail" for p in self.points)

    @property
    def all_skipped(self) -> bool:
        return all(p.outcome == "skip" for p in self.points)

    def to_record(self, timing: bool = False) -> dict:
        rec = {
            "spec": self.spec.to_record(),
            "budget": self.budget,
            "points": [p.to_record(timing) for p in self.points],
            "summary": self.summary(),
        }
        if timing:
            rec["elapsed_ms"] = round(self.elapsed_ms or 0.0, 3)
        return rec


# grid expansion helpers


def _ts(grid, n):
    return grid["t"] if grid.get("t") is not None else list(range(1, n - 1))


def _ls(grid, n, t):
    if grid.get("l") is not None:
        return grid["l"]
    return list(range(n, n + t + 7))


def _qnt_l(grid):
    for q in grid["q"]:
        for n in grid["n"]:
            for t in _ts(grid, n):
                for ell in _ls(grid, n, t):
                    yield {"q": q, "n": n, "t": t, "l": ell}


def _qnl(grid):
    for q in grid["q"]:
        for n in grid["n"]:
            for ell in grid["l"]:
                yield {"q": q, "n": n, "l": ell}


def _qm(grid):
    for q in grid["q"]:
        for m in grid["m"]:
            yield {"q": q, "m": m}


def _need(cond: bool, reason: str) -> None:
    if not cond:
        raise Skip(reason)


def _need_t(p) -> None:
    _need(1 <= p["t"] <= p["n"] - 2, "requires 1 <= t <= n-2")


def _need_standard(p) -> None:
    # the shared hypothesis of the size comparisons: 4 <= n+1 <= ell
    _need_t(p)
    _need(4 <= p["n"] + 1 <= p["l"], "requires 4 <= n+1 <= ell")


def _need_main_range(p) -> None:
    _need_t(p)
    n, t, ell, q = p["n"], p["t"], p["l"], p["q"]
    _need(ell >= n + t + 2, "requires ell >= n+t+2")
    _need(not (q == 2 and ell in (n + t + 2, n + t + 3)), "excluded pair (ell, q) = (n+t+2, 2) or (n+t+3, 2)")


# evaluators: each takes the task params and the budget, returns a list of rows


def _eval_pascal(p, budget):
    q, m = p["q"], p["m"]
    rows = []
    for i in range(1, m):
        rhs = qc.gauss(m - 1, i - 1, q) + q**i * qc.gauss(m - 1, i, q)
        rows.append(_compare(f"i={i}", qc.gauss(m, i, q), "==", rhs))
    return rows


def _eval_sandwich(p, budget):
    q, m = p["q"], p["m"]
    rows = []
    for i in range(1, m):
        num, den = q**m - 1, q**i - 1
        rows.append(_compare(f"i={i} lower", q ** (m - i) * den, "<", num, "q^(m-i) (q^i - 1) < q^m - 1"))
        rows.append(_compare(f"i={i} upper", num, "<", q ** (m - i + 1) * den, "q^m - 1 < q^(m-i+1) (q^i - 1)"))
    return rows


def _expand_nprime(grid):
    for base in _qnl(grid):
        n, ell = base["n"], base["l"]
        for m in grid["m"]:
            if m > n + ell:
                continue
            for m1 in range(0, m + 1):
                for h1 in range(0, min(m1, ell) + 1):
                    if m1 - h1 <= n:
                        yield {**base, "m": m, "m1": m1, "h1": h1}


def _std_subspace(ctx: SpaceContext, a: int, b: int):
    """span{e_1..e_a, w_1..w_b}: a canonical (a+b, b)-subspace."""
    rows = [ctx.e(i) for i in range(1, a + 1)] + [ctx.w(j) for j in range(1, b + 1)]
    return ctx.span(rows) if rows else ctx.zero


def _eval_nprime(p, budget):
    q, n, ell, m, m1, h1 = p["q"], p["n"], p["l"], p["m"], p["m1"], p["h1"]
    ctx = SpaceContext.create(q, n, ell, budget)
    lower = _std_subspace(ctx, m1 - h1, h1)
    tally = tally_between(ctx, lower, ctx.V, m)
    rows = []
    feasible = [h for h in range(h1, min(m, ell) + 1) if m1 - h1 <= m - h <= n]
    for h in feasible:
        rows.append(_compare(f"h={h}", tally.get(h, 0), "==", qc.nprime(q, n, ell, m1, h1, m, h)))
    for h in sorted(set(tally) - set(feasible)):
        rows.append(_compare(f"h={h} (infeasible)", tally[h], "==", 0))
    return rows


# family labels used by the desk-scale checks


def family_labels(n: int, ell: int, t: int) -> list[str]:
    labels = ["H1"]
    for k in (0, 1):
        labels += [f"H2:k={k}:c={c}" for c in qc.valid_c(n, ell, t)]
    labels += ["H3:k=0", "H3:k=1"]
    return labels


def build_label(ctx: SpaceContext, t: int, label: str):
    parts = label.split(":")
    opts = dict(x.split("=") for x in parts[1:])
    k = int(opts.get("k", 0))
    c = int(opts["c"]) if "c" in opts else None
    return fam_mod.build_default(ctx, parts[0], t, k, c)


def _size_formula(p, label: str) -> int:
    q, n, ell, t = p["q"], p["n"], p["l"], p["t"]
    parts = label.split(":")
    opts = dict(x.split("=") for x in parts[1:])
    if parts[0] == "H1":
        return qc.h1_size(q, n, ell, t)
    if parts[0] == "H2":
        return qc.h2_size(q, n, ell, t, int(opts["k"]), int(opts["c"]))
    return qc.h3_size(q, n, ell, t, int(opts["k"]))


def _expand_families(grid):
    for base in _qnt_l(grid):
        n, ell, t = base["n"], base["l"], base["t"]
        for label in family_labels(n, ell, t):
            yield {**base, "family": label}


def _desk_ctx(p, budget) -> SpaceContext:
    _need_t(p)
    _need(p["l"] >= p["n"] + 1, "requires ell >= n+1")
    return SpaceContext.create(p["q"], p["n"], p["l"], budget)


def _eval_sizes(p, budget):
    ctx = _desk_ctx(p, budget)
    fam = build_label(ctx, p["t"], p["family"])
    return [_compare("size", len(fam), "==", _size_formula(p, p["family"]))]


def _meet_dims(S, members) -> list[int]:
    if S.field.q == 2:
        sw, sd = S.words, S.dim
        return [sd + F.dim - rank_words(sw + F.words) for F in members]
    return [intersection_dim(S, F) for F in members]


def _eval_fs(p, budget):
    ctx = _desk_ctx(p, budget)
    t, n = p["t"], p["n"]
    fam = build_label(ctx, t, p["family"])
    rows = []
    for s in range(max(t - 1, 0), n):
        worst: dict[int, int] = {}
        for S in enumerate_typed(ctx, (s, 0), ordered=False):
            dims = _meet_dims(S, fam.members)
            rs = sorted({r for r in dims if r <= t - 1})
            if not rs:
                continue
            size = sum(1 for d in dims if d == s)
            for r in rs:
                worst[r] = max(worst.get(r, 0), size)
        for r in sorted(worst):
            check = f"s={s} r={r}"
            try:
                bound = qc.bound_fs(ctx.q, n, ctx.ell, t, s, r)
            except HypothesisViolated as exc:
                # n < s+t-r: every member through S would meet the witness in < t
                rows.append(_compare(check, worst[r], "==", 0, f"bound undefined ({exc}); family restricted to S must be empty"))
                continue
            rows.append(_compare(check, worst[r], "<=", bound, "largest restriction over all S"))
    return rows


def _eval_tau_identity(p, budget):
    _need_t(p)
    q, n, ell, t = p["q"], p["n"], p["l"], p["t"]
    _need(n <= ell, "requires n <= ell")
    _need(ell >= n + t + 1, "requires ell >= n+t+1")
    return [_compare("m=t+2", qc.bound_tau_large(q, n, ell, t, t + 2), "==",
                     qc.bound_tau_large_simplified(q, n, ell, t))]


def _eval_nonint_tset(p, budget):
    _need_standard(p)
    q, n, ell, t = p["q"], p["n"], p["l"], p["t"]
    rows = []
    try:
        here, nxt = qc.bound_nonint_tset(q, n, ell, t), qc.bound_nonint_tset(q, n, ell + 1, t)
        rows.append(_compare("increasing in ell", here, "<", nxt))
    except HypothesisViolated as exc:
        rows.append(_skip("increasing in ell", str(exc)))
    try:
        _need_main_range(p)
        _need(ell < 3 * n - 3 * t - 2, "requires ell < 3n-3t-2 (otherwise the covering set is t-intersecting)")
        rows.append(_compare("below f'", qc.bound_nonint_tset(q, n, ell, t), "<", qc.fprime(q, n, ell, t)))
    except Skip as exc:
        rows.append(_skip("below f'", str(exc)))
    return rows


def _eval_covering(p, budget):
    _need_standard(p)
    _need_main_range(p)
    q, n, ell, t = p["q"], p["n"], p["l"], p["t"]
    fp = qc.fprime(q, n, ell, t)
    rows = [_compare("dim M=t+1", qc.bounds_covering_t(q, n, ell, t, t + 1), "<", fp)]
    if t + 2 <= n - 1:
        rows.append(_compare("dim M=t+2", qc.bounds_covering_t(q, n, ell, t, t + 2), "<", fp))
    for dm in range(t + 3, n):
        rows.append(_compare(f"dim M={dm}", qc.bounds_covering_t(q, n, ell, t, dm), "<", fp))
    return rows


def _eval_h2_vs_fprime(p, budget):
    _need_standard(p)
    q, n, ell, t = p["q"], p["n"], p["l"], p["t"]
    fp = qc.fprime(q, n, ell, t)
    rows = []
    for k in (0, 1):
        for c in qc.valid_c(n, ell, t):
            rows.append(_compare(f"k={k} c={c} lower", qc.h2_size(q, n, ell, t, k, c), ">=", fp))
        if t <= n - 3:
            cap = q ** (ell * (n - t - 1) + 1) * qc.theta(n - t, q)
            rows.append(_compare(f"k={k} c={n + 1} upper", qc.h2_size(q, n, ell, t, k, n + 1), "<=", cap))
    return rows


def _eval_h3_order(p, budget):
    _need_t(p)
    q, n, ell, t = p["q"], p["n"], p["l"], p["t"]
    _need(ell >= n, "requires ell >= n")
    return [_compare("k=0 vs k=1", qc.h3_size(q, n, ell, t, 0), ">", qc.h3_size(q, n, ell, t, 1))]


def _eval_tau_large(p, budget):
    _need_standard(p)
    _need_main_range(p)
    q, n, ell, t = p["q"], p["n"], p["l"], p["t"]
    fp = qc.fprime(q, n, ell, t)
    rows = [_compare("simplified", qc.bound_tau_large_simplified(q, n, ell, t), "<", fp)]
    for m in range(t + 2, n + 1):
        rows.append(_compare(f"m={m}", qc.bound_tau_large(q, n, ell, t, m), "<", fp))
    return rows


def _eval_h3_vs_fprime(p, budget):
    _need_standard(p)
    q, n, ell, t = p["q"], p["n"], p["l"], p["t"]
    fp = qc.fprime(q, n, ell, t)
    h30, h31 = qc.h3_size(q, n, ell, t, 0), qc.h3_size(q, n, ell, t, 1)
    if 2 * t <= n - 3:
        return [_compare("h3(k=0) < f'", h30, "<", fp)]
    if 2 * t == n - 2:
        return [_compare("h3(k=0) > f'", h30, ">", fp), _compare("f' > h3(k=1)", fp, ">", h31)]
    return [_compare("h3(k=1) > f'", h31, ">", fp)]


def _expand_trace(grid, exclude):
    for base in _qnl(grid):
        n, ell = base["n"], base["l"]
        if exclude:
            for m in range(0, n):
                for a in range(m + 1, n + 1):
                    for variant in ("std", "skew") if m >= 1 else ("std",):
                        yield {**base, "m": m, "a": a, "variant": variant}
        else:
            for r in range(0, ell + 1):
                for m in range(0, n + 1):
                    for a in range(m, n + 1):
                        for variant in ("std", "skew") if m >= 1 and r >= 1 else ("std",):
                            yield {**base, "r": r, "m": m, "a": a, "variant": variant}


def _trace_pair(ctx, e_rows, m, variant):
    E = ctx.span(e_rows)
    o_rows = [ctx.e(i) for i in range(1, m + 1)]
    if variant == "skew":
        # tilt the first generator into W; the type of O is still (m, 0)
        o_rows[0] = tuple(ctx.field.add(x, y) for x, y in zip(ctx.e(1), ctx.w(1)))
    O = ctx.span(o_rows) if o_rows else ctx.zero
    return E, O


def _eval_trace(p, budget):
    q, n, ell, r, m, a = p["q"], p["n"], p["l"], p["r"], p["m"], p["a"]
    ctx = SpaceContext.create(q, n, ell, budget)
    e_rows = [ctx.e(i) for i in range(1, n + 1)] + [ctx.w(j) for j in range(1, r + 1)]
    E, O = _trace_pair(ctx, e_rows, m, p["variant"])
    return [_compare("count", count_exact_trace(ctx, E, O, a), "==", qc.lemma41_count(q, n, ell, r, m, a))]


def _eval_trace_excl(p, budget):
    q, n, ell, m, a = p["q"], p["n"], p["l"], p["m"], p["a"]
    ctx = SpaceContext.create(q, n, ell, budget)
    e_rows = [ctx.e(i) for i in range(1, n)] + [ctx.w(1)]
    E, O = _trace_pair(ctx, e_rows, m, p["variant"])
    return [_compare("count", count_exact_trace(ctx, E, O, a, exclude_WplusE=True), "==",
                     qc.lemma42_count(q, n, ell, m, a))]


def _eval_h2_monotone(p, budget):
    _need_standard(p)
    q, n, ell, t = p["q"], p["n"], p["l"], p["t"]
    h1 = qc.h1_size(q, n, ell, t)
    rows = []
    for k in (0, 1):
        rows.append(_compare(f"k={k} c={n + 1} equals h1", qc.h2_size(q, n, ell, t, k, n + 1), "==", h1))
        for c in range(n + 1, 2 * n - t):
            rows.append(_compare(f"k={k} c={c} vs c={c + 1}", qc.h2_size(q, n, ell, t, k, c), ">",
                                 qc.h2_size(q, n, ell, t, k, c + 1)))
    top0, top1 = qc.h2_size(q, n, ell, t, 0, n + ell), qc.h2_size(q, n, ell, t, 1, n + ell)
    rows.append(_compare("c=n+l k=0 vs k=1", top0, ">", top1))
    if t <= n - 3:
        rows.append(_compare("h1 vs c=n+l k=0", h1, ">", top0))
    else:
        rows.append(_compare("c=n+l k=0 vs h1", top0, ">", h1))
    return rows


def _eval_h1_h3(p, budget):
    _need_standard(p)
    q, n, ell, t = p["q"], p["n"], p["l"], p["t"]
    h1, h30 = qc.h1_size(q, n, ell, t), qc.h3_size(q, n, ell, t, 0)
    rows = []
    if 2 * t == n - 2:
        rows.append(_compare("h1 > h3(k=0)", h1, ">", h30))
    if n - 1 <= 2 * t and t <= n - 3:
        rows.append(_compare("h3(k=0) > h1", h30, ">", h1))
    if t == n - 2:
        rows.append(_compare("h3(k=0) = h2(k=0, c=n+l)", h30, "==", qc.h2_size(q, n, ell, t, 0, n + ell)))
    if not rows:
        raise Skip("no case applies (needs t = n/2-1 or t >= (n-1)/2)")
    return rows


def _set_compare(check: str, a, b) -> PointResult:
    same = a.member_set == b.member_set
    return PointResult("", check, {}, "pass" if same else "fail", "set==", len(a), len(b),
                       note="member-for-member" if same else "member sets differ")


def _eval_degenerations(p, budget):
    ctx = _desk_ctx(p, budget)
    n, t = ctx.n, p["t"]
    X = fam_mod.default_x(ctx, t)
    rows = []
    for k in (0, 1):
        M, C = fam_mod.default_h2_m(ctx, k), fam_mod.default_h2_c(ctx, n + 1)
        rows.append(_set_compare(f"k={k} dim C=n+1: H2(X,M,C) = H1(X,C)",
                                 fam_mod.build_h2(ctx, t, X, M, C), fam_mod.build_h1(ctx, t, X, C)))
    for k in (0, 1):
        check = f"k={k} t=n-2: H2(X,M,V) = H3(M)"
        if t != n - 2:
            rows.append(_skip(check, "requires t = n-2"))
            continue
        M = fam_mod.default_h2_m(ctx, k)
        rows.append(_set_compare(check, fam_mod.build_h2(ctx, t, X, M, ctx.V), fam_mod.build_h3(ctx, t, M)))
    return rows


def _expand_theorem(grid):
    # by default only ell >= n+t+2 is generated; explicit ell values are taken as given
    for q in grid["q"]:
        for n in grid["n"]:
            for t in _ts(grid, n):
                ells = grid["l"] if grid.get("l") is not None else range(n + t + 2, n + t + 7)
                for ell in ells:
                    yield {"q": q, "n": n, "t": t, "l": ell}


def _theorem_candidates(q, n, ell, t) -> dict[str, tuple[int, str]]:
    """Candidate sizes keyed by label, each with the family it is identical to."""
    out = {"H1": (qc.h1_size(q, n, ell, t), "H1")}
    for k in (0, 1):
        for c in qc.valid_c(n, ell, t):
            same = "H1" if c == n + 1 else (f"H3:k={k}" if c == n + ell and t == n - 2 else f"H2:k={k}:c={c}")
            out[f"H2:k={k}:c={c}"] = (qc.h2_size(q, n, ell, t, k, c), same)
    for k in (0, 1):
        out[f"H3:k={k}"] = (qc.h3_size(q, n, ell, t, k), f"H3:k={k}")
    return out


def _eval_theorem(p, budget):
    _need_main_range(p)
    q, n, ell, t = p["q"], p["n"], p["l"], p["t"]
    cands = _theorem_candidates(q, n, ell, t)
    best = max(v for v, _ in cands.values())
    winners = sorted(lab for lab, (v, _) in cands.items() if v == best)
    if 2 * t <= n - 2:
        claimed, claimed_value = "H1", qc.h1_size(q, n, ell, t)
    else:
        claimed = "H3:k=0"
        claimed_value = q ** (ell * (n - t - 1)) * qc.theta(t + 2, q) - q ** (ell * (n - t - 2) + 1) * qc.theta(t + 1, q)
    note = "winners: " + ", ".join(winners)
    rows = [_compare(f"max is {claimed}", best, "==", claimed_value, note)]
    # every family attaining the maximum must be the claimed one (possibly under another name)
    foreign = [lab for lab in winners if cands[lab][1] != claimed]
    rows.append(PointResult("", "unique witness", {}, "fail" if foreign else "pass", "==",
                            len(foreign), 0, note=("other maxima: " + ", ".join(foreign)) if foreign else ""))
    if t == n - 2:
        rows.append(_compare("tie h3(k=0) = h2(k=0, c=n+l)", cands["H3:k=0"][0], "==",
                             cands[f"H2:k=0:c={n + ell}"][0]))
    return rows


def _structural_tset(ctx, t, label):
    """The covering set the structure theory predicts for each construction."""
    parts = label.split(":")
    opts = dict(x.split("=") for x in parts[1:])
    n, ell = ctx.n, ctx.ell
    X = fam_mod.default_x(ctx, t)
    if parts[0] == "H3":
        Z = fam_mod.default_z(ctx, t, int(opts["k"]))
        return list(enumerate_between(ctx, ctx.zero, Z, (t + 1, 0)))
    if parts[0] == "H1":
        span = fam_mod.default_h1_m(ctx)
    else:
        k, c = int(opts["k"]), int(opts["c"])
        M = fam_mod.default_h2_m(ctx, k)
        if c == n + 1:
            span = fam_mod.default_h2_c(ctx, c)
        elif c == n + ell and t == n - 2:
            return list(enumerate_between(ctx, ctx.zero, M, (t + 1, 0)))
        else:
            span = M
    return list(enumerate_between(ctx, X, span, (t + 1, 0)))


def _expand_suite(grid):
    for base in _qnt_l(grid):
        n, ell, t = base["n"], base["l"], base["t"]
        for label in family_labels(n, ell, t) + ["star"]:
            yield {**base, "family": label}


def _eval_suite(p, budget):
    ctx = _desk_ctx(p, budget)
    t, label = p["t"], p["family"]
    full = ctx.q ** (ctx.ell * ctx.n) <= FULL_SCAN_LIMIT
    if label == "star":
        fam = fam_mod.build_star(ctx, t, fam_mod.default_x(ctx, t))
        rows = [
            _compare("t-intersecting", fam_mod.is_t_intersecting(fam), "==", True),
            _compare("trivial", fam_mod.is_trivial(fam), "==", True),
            _compare("tau_t = t", fam_mod.tau_t(fam), "==", t),
        ]
        return rows
    fam = build_label(ctx, t, label)
    rows = [
        _compare("t-intersecting", fam_mod.is_t_intersecting(fam), "==", True),
        _compare("common_dim <= t-1", fam_mod.common_dim(fam), "<=", t - 1),
        _compare("tau_t = t+1", fam_mod.tau_t(fam), "==", t + 1),
    ]
    got = fam_mod.t_set(fam)
    want = sorted(_structural_tset(ctx, t, label))
    rows.append(PointResult("", "covering set structure", {}, "pass" if got == want else "fail", "set==",
                            len(got), len(want)))
    if label.startswith("H2"):
        opts = dict(x.split("=") for x in label.split(":")[1:])
        X = fam_mod.default_x(ctx, t)
        M = fam_mod.default_h2_m(ctx, int(opts["k"]))
        C = fam_mod.default_h2_c(ctx, int(opts["c"]))
        A, B, Cp = fam_mod.h2_parts(ctx, t, X, M, C)
        overlap = len(A & B) + len(A & Cp) + len(B & Cp)
        rows.append(_compare("pieces pairwise disjoint", overlap, "==", 0, f"|A|={len(A)} |B|={len(B)} |C|={len(Cp)}"))
    if not full:
        rows.append(_skip("maximal", f"q^(ell n) exceeds {FULL_SCAN_LIMIT}"))
        rows.append(_skip("filter cross-check", f"q^(ell n) exceeds {FULL_SCAN_LIMIT}"))
        return rows
    rows.append(_compare("maximal", fam_mod.is_maximal(fam), "==", True))
    parts = label.split(":")
    opts = dict(x.split("=") for x in parts[1:])
    X = fam_mod.default_x(ctx, t)
    if parts[0] == "H1":
        other = fam_mod.build_h1(ctx, t, X, fam_mod.default_h1_m(ctx), method="filter")
    elif parts[0] == "H2":
        other = fam_mod.build_h2(ctx, t, X, fam_mod.default_h2_m(ctx, int(opts["k"])),
                                 fam_mod.default_h2_c(ctx, int(opts["c"])), method="filter")
    else:
        other = fam_mod.build_h3(ctx, t, fam_mod.default_z(ctx, t, int(opts["k"])), method="filter")
    rows.append(_set_compare("filter cross-check", fam, other))
    return rows


class CheckDef(NamedTuple):
    mode: str
    default_grid: dict
    expand: Callable
    evaluate: Callable
    summary: str


_DESK = {"q": [2], "n": [3], "t": [1], "l": [4]}
_INEQ = {"q": [2, 3, 4, 5], "n": list(range(3, 9)), "t": None, "l": None}

LEMMAS: dict[str, CheckDef] = {
    "eq1": CheckDef("identity", {"q": [2, 3, 4, 5], "m": list(range(2, 13))}, _qm, _eval_pascal,
                 "q-Pascal recurrence for Gaussian binomials"),
    "eq2": CheckDef("inequality", {"q": [2, 3, 4, 5], "m": list(range(2, 13))}, _qm, _eval_sandwich,
                 "q^(m-i) < (q^m-1)/(q^i-1) < q^(m-i+1)"),
    "L2.1": CheckDef("oracle", {"q": [2, 3], "n": [2, 3], "l": [2, 3, 4], "m": [0, 1, 2, 3, 4]},
                  _expand_nprime, _eval_nprime, "typed superspace counts against enumeration"),
    "L2.3": CheckDef("inequality", dict(_DESK), _expand_families, _eval_fs,
                  "restriction to an (s,0)-subspace is bounded"),
    "L2.4": CheckDef("identity", dict(_INEQ), _qnt_l, _eval_tau_identity,
                  "the m-free covering-number bound equals the general bound at m = t+2"),
    "L2.9": CheckDef("inequality", dict(_INEQ), _qnt_l, _eval_nonint_tset,
                  "non-intersecting covering set bound: increasing in ell, below f'"),
    "L2.10": CheckDef("inequality", dict(_INEQ), _qnt_l, _eval_covering,
                   "intersecting covering set bounds are below f'"),
    "L3.1": CheckDef("inequality", dict(_INEQ), _qnt_l, _eval_h2_vs_fprime,
                  "second construction is at least f', and bounded when dim C = n+1"),
    "L3.2": CheckDef("inequality", dict(_INEQ), _qnt_l, _eval_h3_order,
                  "h3(k=0) > h3(k=1)"),
    "L3.3": CheckDef("inequality", dict(_INEQ), _qnt_l, _eval_tau_large,
                  "large covering number bounds are below f'"),
    "L3.4": CheckDef("inequality", dict(_INEQ), _qnt_l, _eval_h3_vs_fprime,
                  "h3 against f' by range of t"),
    "L4.1": CheckDef("oracle", {"q": [2, 3], "n": [2, 3], "l": [2, 3]},
                  lambda g: _expand_trace(g, False), _eval_trace, "exact-trace product count"),
    "L4.2": CheckDef("oracle", {"q": [2, 3], "n": [2, 3], "l": [2, 3]},
                  lambda g: _expand_trace(g, True), _eval_trace_excl,
                  "exact-trace count avoiding W+E"),
    "L4.3": CheckDef("oracle", dict(_DESK), _expand_families, _eval_sizes,
                  "built family sizes against closed forms"),
    "L4.4": CheckDef("inequality", dict(_INEQ), _qnt_l, _eval_h2_monotone,
                  "second construction decreases in c and k"),
    "L4.5": CheckDef("inequality", dict(_INEQ), _qnt_l, _eval_h1_h3,
                  "first vs third construction"),
    "R1.1": CheckDef("identity", dict(_DESK), _qnt_l, _eval_degenerations,
                  "degenerate cases of the second construction as set equalities"),
    "T1.3-compare": CheckDef("inequality", {"q": [2, 3, 4, 5], "n": list(range(3, 9)), "t": None, "l": None},
                          _expand_theorem, _eval_theorem, "largest construction by range of t"),
    "family-suite": CheckDef("oracle", dict(_DESK), _expand_suite, _eval_suite,
                          "intersecting, non-trivial, maximal, covering number, covering set"),
}


def _run_task(task) -> list[PointResult]:
    lemma_id, params, budget = task
    lem = LEMMAS[lemma_id]
    start = time.perf_counter()
    before = enumerated_count()
    try:
        rows = lem.evaluate(params, budget)
    except Skip as exc:
        rows = [_skip("*", str(exc))]
    except HypothesisViolated as exc:
        rows = [_skip("*", f"hypothesis violated: {exc}")]
    except BudgetExceeded as exc:
        rows = [_skip("*", f"budget exceeded: {exc}")]
    used = enumerated_count() - before
    ms = (time.perf_counter() - start) * 1000
    for i, row in enumerate(rows):
        row.lemma = lemma_id
        row.params = dict(params)
        row.enumerated = used if i == 0 else 0
        row.elapsed_ms = ms if i == 0 else 0.0
    return rows


def tasks_for(spec: CheckSpec, budget: int) -> list:
    spec = spec.resolved()
    return [(spec.lemma_id, p, budget) for p in LEMMAS[spec.lemma_id].expand(spec.grid)]


def _execute(tasks: list, threads: int) -> list[list[PointResult]]:
    if threads <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    chunk = max(1, len(tasks) // (threads * 4))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_task, tasks, chunksize=chunk))


def run_many(specs: list[CheckSpec], budget: int | None = None, threads: int = 1,
             replay: bool = False) -> list[Report]:
    """Run several checks through one worker pool; reports come back in spec order."""
    budget = default_budget() if budget is None else budget
    resolved = [s.resolved() for s in specs]
    per_spec = [tasks_for(s, budget) for s in resolved]
    flat = [t for ts in per_spec for t in ts]
    start = time.perf_counter()
    results = _execute(flat, threads)
    if replay:
        again = _execute(flat, 1)
        for task, a, b in zip(flat, results, again):
            if [r.to_record() for r in a] != [r.to_record() for r in b]:
                raise InternalInconsistency(f"{task[0]} at {task[1]} differs between runs")
    elapsed = (time.perf_counter() - start) * 1000
    reports, i = [], 0
    for spec, ts in zip(resolved, per_spec):
        points = [row for rows in results[i:i + len(ts)] for row in rows]
        i += len(ts)
        reports.append(Report(spec, budget, points, sum(p.elapsed_ms or 0.0 for p in points)))
    if len(reports) == 1:
        reports[0].elapsed_ms = elapsed
    return reports


def run_check(spec: CheckSpec, budget: int | None = None, threads: int = 1,
              replay: bool = False) -> Report:
    return run_many([spec], budget, threads, replay)[0]


def theorem13_compare(grid: dict | None = None, budget: int | None = None, threads: int = 1,
                      strict: bool = False) -> Report:
    """Compare every construction's size across the grid; strict mode rejects bad points."""
    spec = CheckSpec("T1.3-compare", grid or {})
    report = run_check(spec, budget, threads)
    if strict:
        bad = [p for p in report.points if p.outcome == "skip"]
        if bad:
            raise HypothesisViolated(f"{bad[0].params}: {bad[0].reason}")
    return report


def default_suite() -> list[CheckSpec]:
    """Oracle checks at the desk point plus the inequality grid."""
    return [
        CheckSpec("eq1"),
        CheckSpec("eq2"),
        CheckSpec("L2.1", {"q": [2, 3], "n": [2, 3], "l": [2, 3], "m": [0, 1, 2, 3]}),
        CheckSpec("L2.3"),
        CheckSpec("L2.4"),
        CheckSpec("L2.9"),
        CheckSpec("L2.10"),
        CheckSpec("L3.1"),
        CheckSpec("L3.2"),
        CheckSpec("L3.3"),
        CheckSpec("L3.4"),
        CheckSpec("L4.1"),
        CheckSpec("L4.2"),
        CheckSpec("L4.3"),
        CheckSpec("L4.4"),
        CheckSpec("L4.5"),
        CheckSpec("R1.1"),
        CheckSpec("T1.3-compare"),
        CheckSpec("family-suite"),
    ]


# serialization


def suite_record(reports: list[Report], timing: bool = False) -> dict:
    summary = {"total": 0, "pass": 0, "fail": 0, "skip": 0, "enumerated": 0}
    for r in reports:
        for k, v in r.summary().items():
            summary[k] += v
    return {"reports": [r.to_record(timing) for r in reports], "summary": summary}


def to_json(reports: list[Report], timing: bool = False) -> str:
    if len(reports) == 1:
        rec = reports[0].to_record(timing)
    else:
        rec = suite_record(reports, timing)
    return json.dumps(rec, indent=2, ensure_ascii=False) + "\n"


CSV_FIELDS = ["lemma", "check", "params", "outcome", "relation", "lhs", "rhs", "enumerated", "reason", "note"]


def to_csv(reports: list[Report], timing: bool = False) -> str:
    buf = io.StringIO()
    fields = CSV_FIELDS + (["elapsed_ms"] if timing else [])
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for report in reports:
        for p in report.points:
            rec = p.to_record(timing)
            rec["params"] = ";".join(f"{k}={v}" for k, v in rec["params"].items())
            writer.writerow({k: "" if rec.get(k) is None else rec[k] for k in fields})
    return buf.getvalue()


def to_text(reports: list[Report], timing: bool = False) -> str:
    lines = []
    for report in reports:
        for p in report.points:
            params = " ".join(f"{k}={v}" for k, v in p.params.items())
            if p.outcome == "skip":
                lines.append(f"SKIP {p.lemma} {p.check} [{params}]: {p.reason}")
            else:
                lines.append(f"{p.outcome.upper()} {p.lemma} {p.check} [{params}]: "
                             f"{_show(p.lhs)} {p.relation} {_show(p.rhs)}")
        s = report.summary()
        tail = f" in {report.elapsed_ms:.0f} ms" if timing and report.elapsed_ms is not None else ""
        lines.append(f"== {report.spec.lemma_id}: {s['pass']} pass, {s['fail']} fail, {s['skip']} skip{tail}")
    return "\n".join(lines) + "\n"


__all__ = [
    "CheckSpec",
    "PointResult",
    "Report",
    "LEMMAS",
    "run_check",
    "run_many",
    "theorem13_compare",
    "default_suite",
    "to_json",
    "to_csv",
    "to_text",
    "QxError",
]
