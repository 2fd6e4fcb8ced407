"""Acceptance criteria, one test per criterion; each prints a PASS/FAIL line."""

import subprocess
import sys
import time

import pytest

from qxfam import families as fm
from qxfam import verify as V
from qxfam.qcount import h1_size, h2_size, h3_size, valid_c
from qxfam.space import SpaceContext, enumerate_between, enumerate_typed
from qxfam.subspace import contains

DESK = (2, 3, 1, 4)  # q, n, t, ell


@pytest.fixture(scope="module")
def desk():
    q, n, t, ell = DESK
    ctx = SpaceContext.create(q, n, ell)
    fams = {"H1": fm.build_default(ctx, "H1", t)}
    for k in (0, 1):
        fams[f"H3:k={k}"] = fm.build_default(ctx, "H3", t, k)
        for c in valid_c(n, ell, t):
            fams[f"H2:k={k}:c={c}"] = fm.build_default(ctx, "H2", t, k, c)
    return ctx, t, fams


def _clean(report):
    assert not report.failed, [p.to_record() for p in report.points if p.outcome == "fail"][:5]


def test_1_superspace_counts(criterion):
    with criterion(1, "typed superspace counts equal the closed form over q<=3, n<=3, l<=4, m<=4"):
        start = time.perf_counter()
        report = V.run_check(V.CheckSpec("L2.1", {"q": [2, 3], "n": [2, 3], "l": [2, 3, 4], "m": [0, 1, 2, 3, 4]}))
        _clean(report)
        assert report.summary()["skip"] == 0 and report.summary()["pass"] > 500
        assert time.perf_counter() - start < 300


def test_2_family_sizes(criterion, desk):
    with criterion(2, "built family sizes at (2,3,1,4) equal the closed forms (92 / 106 / 64 / every h2)"):
        start = time.perf_counter()
        ctx, t, fams = desk
        q, n, _, ell = DESK
        assert len(fams["H1"]) == h1_size(q, n, ell, t) == 92
        assert len(fams["H3:k=0"]) == h3_size(q, n, ell, t, 0) == 106
        assert len(fams["H3:k=1"]) == h3_size(q, n, ell, t, 1) == 64
        for k in (0, 1):
            for c in valid_c(n, ell, t):
                assert len(fams[f"H2:k={k}:c={c}"]) == h2_size(q, n, ell, t, k, c)
        assert h2_size(q, n, ell, t, 0, n + ell) == 106 == h3_size(q, n, ell, t, 0)
        assert time.perf_counter() - start < 120


def test_3_family_properties(criterion, desk):
    with criterion(3, "every construction is t-intersecting, non-trivial, maximal over all 4096 (3,0)-subspaces, tau_t = t+1; star has tau_t = t"):
        start = time.perf_counter()
        ctx, t, fams = desk
        assert sum(1 for _ in enumerate_typed(ctx, (ctx.n, 0))) == 4096
        for name, fam in fams.items():
            assert fm.is_t_intersecting(fam), name
            assert fm.common_dim(fam) <= t - 1, name
            assert fm.compatible_set(fam).members == fam.members, name
            assert fm.tau_t(fam) == t + 1, name
        star = fm.build_star(ctx, t, fm.default_x(ctx, t))
        assert fm.is_trivial(star) and fm.tau_t(star) == t
        assert time.perf_counter() - start < 600


def test_4_degenerations(criterion, desk):
    with criterion(4, "H2(X,M,C) = H1(X,C) for dim C = n+1 and H2(X,M,V) = H3(M) for t = n-2, member for member"):
        ctx, t, _ = desk
        X = fm.default_x(ctx, t)
        for k in (0, 1):
            M = fm.default_h2_m(ctx, k)
            C = fm.default_h2_c(ctx, ctx.n + 1)
            assert fm.build_h2(ctx, t, X, M, C).members == fm.build_h1(ctx, t, X, C).members
            assert fm.build_h2(ctx, t, X, M, ctx.V).members == fm.build_h3(ctx, t, M).members


def test_5_trace_products(criterion):
    with criterion(5, "exact-trace product counts equal brute force on q, n, l in {2,3} (both variants)"):
        grid = {"q": [2, 3], "n": [2, 3], "l": [2, 3]}
        for lemma in ("L4.1", "L4.2"):
            report = V.run_check(V.CheckSpec(lemma, grid))
            _clean(report)
            assert report.summary()["skip"] == 0


def test_6_inequalities(criterion):
    with criterion(6, "sandwich, h3 order, h3 vs f', monotonicity in c and k, h1 vs h3, h2 vs f', large-tau bound < f': zero violations"):
        start = time.perf_counter()
        specs = [V.CheckSpec(x) for x in ("eq2", "L3.1", "L3.2", "L3.3", "L3.4", "L4.4", "L4.5")]
        reports = V.run_many(specs)
        for report in reports:
            _clean(report)
            assert report.summary()["pass"] > 0, report.spec.lemma_id
        # skips are hypothesis filters, each with its reason
        assert all(p.reason for r in reports for p in r.points if p.outcome == "skip")
        assert time.perf_counter() - start < 60


def test_7_theorem_comparison(criterion):
    with criterion(7, "largest construction is H1 for 2t <= n-2 and H3(k=0) otherwise, at every admissible grid point"):
        start = time.perf_counter()
        report = V.theorem13_compare()
        _clean(report)
        skipped = [p for p in report.points if p.outcome == "skip"]
        assert all("excluded pair" in p.reason for p in skipped)
        assert time.perf_counter() - start < 60


def _structure_holds(ctx, t, fam):
    """The covering set is either the (t+1,0)-subspaces through X inside its span, or all of them in a (t+2)-space."""
    tset = fm.t_set(fam)
    span = fm.span_of(ctx, tset)
    common = tset[0]
    for T in tset[1:]:
        common = fm.intersect(common, T)
    if common.dim >= t:
        X = common if common.dim == t else None
        assert X is not None
        return tset == list(enumerate_between(ctx, X, span, (t + 1, 0)))
    return span.dim == t + 2 and tset == list(enumerate_between(ctx, ctx.zero, span, (t + 1, 0)))


def test_8_covering_set_structure(criterion, desk):
    with criterion(8, "t_set(H3(Z)) = all (t+1,0)-subspaces of Z; t_set(H2(X,M,C)) = those of M through X"):
        ctx, t, fams = desk
        X = fm.default_x(ctx, t)
        for k in (0, 1):
            Z = fm.default_z(ctx, t, k)
            assert fm.t_set(fams[f"H3:k={k}"]) == list(enumerate_between(ctx, ctx.zero, Z, (t + 1, 0)))
            M = fm.default_h2_m(ctx, k)
            for c in range(ctx.n + 2, 2 * ctx.n - t + 1):
                assert fm.t_set(fams[f"H2:k={k}:c={c}"]) == list(enumerate_between(ctx, X, M, (t + 1, 0)))
        # the degenerate c (= H1 or H3 in disguise) follow the same dichotomy with M read as the span
        for name, fam in fams.items():
            assert _structure_holds(ctx, t, fam), name


def test_9_parallel_determinism(criterion, tmp_path):
    with criterion(9, "verify --suite default gives byte-identical JSON with --threads 1 and --threads 8"):
        outs = []
        for threads in ("1", "8"):
            dest = tmp_path / f"r{threads}.json"
            proc = subprocess.run([sys.executable, "-m", "qxfam", "verify", "--suite", "default",
                                   "--threads", threads, "--out", str(dest)], capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
            outs.append(dest.read_bytes())
        assert outs[0] == outs[1]
        assert b'"fail": 0' in outs[0]
