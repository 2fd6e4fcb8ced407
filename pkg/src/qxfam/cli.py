"""Command-line front end.

Exit codes:
  0   success
  1   a verification point failed
  2   hypothesis, type or nesting violation
  3   enumeration budget exceeded, or every verification point skipped
  64  bad command-line usage
  65  malformed input file
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import families as fam_mod
from . import qcount as qc
from . import verify
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    HypothesisViolated,
    MalformedInput,
    NonCanonical,
    NotNested,
    QxError,
    TypeViolation,
)
from .space import SpaceContext

EXIT_OK, EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_BUDGET, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3, 64, 65


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def int_list(text: str) -> list[int]:
    """Parse '2,3,5' or '2..5' (inclusive) or a mix such as '2,4..6'."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like 2,3 or 2..5, got {text!r}")
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


# count


FORMULAS = {
    "gauss": (("a", "b", "q"), qc.gauss),
    "theta": (("a", "q"), qc.theta),
    "nprime": (("q", "n", "l", "m1", "h1", "m", "h"), qc.nprime),
    "fprime": (("q", "n", "l", "t"), qc.fprime),
    "h1": (("q", "n", "l", "t"), qc.h1_size),
    "h2": (("q", "n", "l", "t", "k", "c"), qc.h2_size),
    "h3": (("q", "n", "l", "t", "k"), qc.h3_size),
    "lemma41": (("q", "n", "l", "r", "m", "a"), qc.lemma41_count),
    "lemma42": (("q", "n", "l", "m", "a"), qc.lemma42_count),
    "bound:fs": (("q", "n", "l", "t", "s", "r"), qc.bound_fs),
    "bound:tau-large": (("q", "n", "l", "t", "m"), qc.bound_tau_large),
    "bound:tau-large-simplified": (("q", "n", "l", "t"), qc.bound_tau_large_simplified),
    "bound:nonint-tset": (("q", "n", "l", "t"), qc.bound_nonint_tset),
    "bound:covering": (("q", "n", "l", "t", "m"), qc.bounds_covering_t),
}


def cmd_count(args) -> int:
    names, fn = FORMULAS[args.formula]
    missing = [f"--{x}" for x in names if getattr(args, x) is None]
    if missing:
        raise UsageError(f"count {args.formula} needs {' '.join(missing)}")
    extra = [f"--{x}" for x in _COUNT_FLAGS if x not in names and getattr(args, x) is not None]
    if extra:
        raise UsageError(f"count {args.formula} does not take {' '.join(extra)}")
    print(fn(*(getattr(args, x) for x in names)))
    return EXIT_OK


_COUNT_FLAGS = ("q", "n", "l", "t", "k", "c", "a", "b", "m", "m1", "h1", "h", "r", "s")


# family


def _parse_gen(ctx: SpaceContext, text: str):
    name, _, rows = text.partition("=")
    if not rows:
        raise UsageError(f"--gen expects NAME=ROWS, got {text!r}")
    vecs = []
    for row in rows.split(","):
        if len(row) != ctx.dim or not row.isdigit():
            raise UsageError(f"generator row {row!r} must be {ctx.dim} digits")
        vecs.append(tuple(int(ch) for ch in row))
    return name.strip().upper(), ctx.span(vecs)


def _build(args, ctx: SpaceContext):
    kind = args.kind.upper()
    if kind == "H2" and args.c is None:
        raise UsageError("--kind h2 needs --c")
    gens = dict(_parse_gen(ctx, g) for g in args.gen or [])
    t = args.t
    if not gens:
        return fam_mod.build_default(ctx, kind, t, args.k, args.c)
    X = gens.get("X", fam_mod.default_x(ctx, t))
    if kind == "H1":
        return fam_mod.build_h1(ctx, t, X, gens.get("M", fam_mod.default_h1_m(ctx)))
    if kind == "H2":
        M = gens.get("M", fam_mod.default_h2_m(ctx, args.k))
        C = gens.get("C", fam_mod.default_h2_c(ctx, args.c))
        return fam_mod.build_h2(ctx, t, X, M, C)
    if kind == "H3":
        return fam_mod.build_h3(ctx, t, gens.get("Z", fam_mod.default_z(ctx, t, args.k)))
    return fam_mod.build_star(ctx, t, X)


def cmd_family_build(args) -> int:
    ctx = SpaceContext.create(args.q, args.n, args.l, args.budget)
    fam = _build(args, ctx)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(fam_mod.to_record(fam), fh, indent=1)
            fh.write("\n")
    print(len(fam))
    return EXIT_OK


def _load_family(args):
    try:
        with open(args.infile) as fh:
            rec = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {args.infile}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{args.infile} is not valid JSON: {exc}") from exc
    return fam_mod.from_record(rec, strict=args.strict, t=args.t, budget=args.budget)


def cmd_family_check(args) -> int:
    fam = _load_family(args)
    ctx = fam.ctx
    out = {"size": len(fam), "t": fam.t}
    out["t_intersecting"] = fam_mod.is_t_intersecting(fam)
    if len(fam):
        out["common_dim"] = fam_mod.common_dim(fam)
        out["trivial"] = fam_mod.is_trivial(fam)
        out["tau_t"] = fam_mod.tau_t(fam) if out["t_intersecting"] else None
    limit = verify.FULL_SCAN_LIMIT if args.budget is None else args.budget
    if args.no_maximal or ctx.q ** (ctx.ell * ctx.n) > limit:
        out["maximal"] = None
    else:
        out["maximal"] = fam_mod.is_maximal(fam, limit)
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        for k, v in out.items():
            print(f"{k}={'skipped' if v is None else str(v).lower()}")
    return EXIT_OK


# verify


def cmd_verify(args) -> int:
    grid = {}
    for key in ("q", "n", "t", "l", "m"):
        v = getattr(args, key)
        if v is not None:
            grid[key] = v
    if args.suite:
        if grid:
            raise UsageError("--suite default takes no grid flags")
        specs = verify.default_suite()
    else:
        specs = [verify.CheckSpec(args.lemma, grid)]
    try:
        reports = verify.run_many(specs, args.budget, args.threads, args.replay)
    except ValueError as exc:
        if isinstance(exc, QxError):
            raise
        raise UsageError(str(exc)) from exc
    render = {"json": verify.to_json, "csv": verify.to_csv, "text": verify.to_text}[args.format]
    text = render(reports, args.timing)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if any(r.failed for r in reports):
        return EXIT_FAIL
    if all(r.all_skipped for r in reports):
        return EXIT_BUDGET
    return EXIT_OK


def build_parser() -> Parser:
    parser = Parser(prog="qxfam", description="Exact counts and t-intersecting families of (n,0)-subspaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("count", help="evaluate a closed-form count")
    p.add_argument("formula", choices=sorted(FORMULAS))
    for name in _COUNT_FLAGS:
        p.add_argument(f"--{name}", type=int)
    p.set_defaults(func=cmd_count)

    fam = sub.add_parser("family", help="build or check a family")
    fsub = fam.add_subparsers(dest="action", required=True, parser_class=Parser)

    b = fsub.add_parser("build", help="construct a family and print its size")
    b.add_argument("--kind", required=True, type=str.lower, choices=["h1", "h2", "h3", "star"])
    for name in ("q", "n", "l", "t"):
        b.add_argument(f"--{name}", required=True, type=positive)
    b.add_argument("--k", type=int, default=0, choices=[0, 1])
    b.add_argument("--c", type=int)
    b.add_argument("--gen", action="append", metavar="NAME=ROWS",
                   help="generator X, M, C or Z as comma-separated digit rows")
    b.add_argument("--out")
    b.add_argument("--budget", type=positive)
    b.set_defaults(func=cmd_family_build)

    c = fsub.add_parser("check", help="report predicates of a family file")
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--t", type=positive, help="override the intersection parameter in the file")
    c.add_argument("--strict", action="store_true", help="reject non-canonical input")
    c.add_argument("--no-maximal", action="store_true", help="skip the full maximality scan")
    c.add_argument("--format", choices=["json", "text"], default="text")
    c.add_argument("--budget", type=positive)
    c.set_defaults(func=cmd_family_check)

    v = sub.add_parser("verify", help="run verification checks")
    which = v.add_mutually_exclusive_group(required=True)
    which.add_argument("--lemma", choices=list(verify.LEMMAS))
    which.add_argument("--suite", choices=["default"])
    for name in ("q", "n", "t", "l", "m"):
        v.add_argument(f"--{name}", type=int_list)
    v.add_argument("--format", choices=["json", "csv", "text"], default="json")
    v.add_argument("--threads", type=positive, default=1)
    v.add_argument("--out")
    v.add_argument("--budget", type=positive)
    v.add_argument("--timing", action="store_true", help="include wall times (output no longer reproducible)")
    v.add_argument("--replay", action="store_true", help="rerun serially and compare")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qxfam: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MalformedInput, NonCanonical) as exc:
        print(f"qxfam: malformed input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (HypothesisViolated, TypeViolation, NotNested, DimensionMismatch) as exc:
        print(f"qxfam: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except BudgetExceeded as exc:
        print(f"qxfam: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except QxError as exc:
        print(f"qxfam: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
