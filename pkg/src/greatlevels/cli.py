"""Command-line interface.

Exit status: 0 on success, 1 when a verified bound or lemma fails, 2 on
bad input or usage.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import levels
from .arrangement import build_graph
from .cliques import HalfCircle, HalfInterval, circle_clique_counts, line_clique_counts
from .errors import InputError, PreconditionError
from .fileio import load_arrangement, save_arrangement
from .quadrature import DEFAULT_TOL
from .random_model import level_envelope, mc_level, qk_table
from .sphere_core import random_arrangement
from .verify import run_suite

DEFAULT_SEED = 0
DEFAULT_CHUNKS = 16


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def write_csv(path: str | None, header: Sequence[str], rows) -> None:
    lines = [",".join(header)] + [",".join(fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def prefixed(prefix: str, name: str) -> str:
    if prefix.endswith(os.sep) or os.path.isdir(prefix):
        return os.path.join(prefix, name)
    return prefix + name


def parse_n_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
    else:
        lo = hi = text
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None
    if lo_i > hi_i or lo_i < 0:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}")
    return lo_i, hi_i


def positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def non_negative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    arr = random_arrangement(args.d, args.n, rng)
    if args.build:
        build_graph(arr)
    save_arrangement(arr, args.out)
    return 0


def cmd_stats(args) -> int:
    graph = build_graph(load_arrangement(args.inp))
    table = levels.level_table(graph)
    rows = [(f, k, int(table[f, k])) for f in range(table.shape[0]) for k in range(table.shape[1])]
    write_csv(prefixed(args.out, "levels.csv"), ["cell_id", "k", "count"], rows)
    exp_rows = []
    for k, e in enumerate(levels.expected_level(graph)):
        bound = levels.expected_level_bound(k)
        exp_rows.append((k, float(e), bound, bound - float(e)))
    write_csv(prefixed(args.out, "expected.csv"), ["k", "expected", "bound_4e(k+2)^2", "margin"], exp_rows)
    return 0


def _verify_graphs(args):
    if args.inp:
        yield args.inp, build_graph(load_arrangement(args.inp))
        return
    lo, hi = args.n
    if lo < 3:
        raise PreconditionError("generated verification needs n >= 3")
    rng = np.random.default_rng(args.seed)
    for t in range(args.trials):
        n = lo + t % (hi - lo + 1)
        yield f"trial {t} (n={n})", build_graph(random_arrangement(2, n, rng))


def cmd_verify(args) -> int:
    lines = []
    first_failure = None
    for label, graph in _verify_graphs(args):
        lines.append(f"# {label}")
        for check in run_suite(graph, args.kmax):
            lines.append(check.line())
            if check.asserted and not check.passed and first_failure is None:
                first_failure = f"{label}: {check.line()}"
    lines.append("# result: " + ("FAIL" if first_failure else "PASS"))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if first_failure:
        print(f"first failing assertion: {first_failure}", file=sys.stderr)
        return 1
    return 0


def cmd_zones(args) -> int:
    graph = build_graph(load_arrangement(args.inp))
    n = graph.n
    jmax = n if args.jmax is None else args.jmax
    circles = range(n) if args.circle is None else [args.circle]
    rows = []
    failed = False
    for c in circles:
        if not 0 <= c < n:
            raise PreconditionError(f"circle {c} out of range 0..{n - 1}")
        for j in range(jmax + 1):
            both = levels.zone_count(graph, c, j, "both")
            pos = levels.zone_count(graph, c, j, "+")
            neg = levels.zone_count(graph, c, j, "-")
            bb, bs = levels.zone_bound_both(j, n), levels.zone_bound_strict(j, n)
            failed |= both > bb or pos > bs or neg > bs
            rows.append((c, j, both, pos, neg, bb, bs))
    write_csv(args.out, ["circle", "j", "both", "strict_pos", "strict_neg", "bound_4e(j+2)n", "bound_2e(j+2)n"], rows)
    return 1 if failed else 0


def cmd_cliques(args) -> int:
    rng = np.random.default_rng(args.seed)
    n = args.n
    worst = np.full(n + 1, 0, dtype=np.int64)
    for _ in range(args.trials):
        if args.mode == "line":
            ends = rng.standard_normal(n)
            kinds = rng.random(n) < 0.5
            fam = [HalfInterval("left" if kd else "right", float(e)) for kd, e in zip(kinds, ends)]
            hist = line_clique_counts(fam)
        else:
            fam = [HalfCircle(float(a)) for a in rng.uniform(0.0, 2 * math.pi, n)]
            hist = circle_clique_counts(fam)
        worst = np.maximum(worst, hist)
    rows = []
    failed = False
    for k in range(n + 1):
        asserted = args.mode == "line" or n > 3 * k
        ok = worst[k] <= k + 1
        failed |= asserted and not ok
        rows.append((k, int(worst[k]), k + 1, "yes" if asserted else "no"))
    write_csv(args.out, ["k", "max_count", "bound_k+1", "asserted"], rows)
    return 1 if failed else 0


def _qk_rows(table):
    return [(r.k, r.q_exact, r.q_lower, r.q_upper, r.q_mc, r.stderr) for r in table.rows]


QK_HEADER = ["k", "q_exact", "q_lower", "q_upper", "q_mc", "stderr"]


def cmd_qk(args) -> int:
    table = qk_table(
        args.n, args.d, args.kmax, args.tol, args.samples, args.seed, args.chunks, args.threads
    )
    write_csv(args.out, QK_HEADER, _qk_rows(table))
    return 0


def cmd_mc_levels(args) -> int:
    run = mc_level(
        args.m, args.d, args.samples, args.seed, args.chunks, args.threads, args.kmax, args.tol
    )
    rows = [(r.k, r.mc_mean, r.mc_stderr, r.analytic, r.ratio) for r in run.rows]
    write_csv(args.out, ["k", "mc_mean", "mc_stderr", "analytic", "ratio_to_(k+1)^(d-1)"], rows)
    if run.overflow_mean:
        print(f"mean vertices above kmax: {fmt(run.overflow_mean)}", file=sys.stderr)
    failed = False
    n_free = args.m - args.d
    for r in run.rows:
        if 2 * r.k <= n_free:
            lo, up = level_envelope(args.m, args.d, r.k)
            failed |= not lo <= r.analytic / (r.k + 1) ** (args.d - 1) <= up
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="greatlevels", description="k-levels and zones of great-circle arrangements")
    sub = p.add_subparsers(dest="command", required=True)

    def mc_flags(sp, samples_required=False, samples_default=None):
        sp.add_argument("--samples", type=positive, required=samples_required, default=samples_default)
        sp.add_argument("--seed", type=non_negative, default=DEFAULT_SEED)
        sp.add_argument("--chunks", type=positive, default=DEFAULT_CHUNKS)
        sp.add_argument("--threads", type=positive, default=1)

    g = sub.add_parser("gen", help="write a random arrangement file")
    g.add_argument("--d", type=positive, default=2)
    g.add_argument("--n", type=non_negative, required=True)
    g.add_argument("--seed", type=non_negative, default=DEFAULT_SEED)
    g.add_argument("--out", required=True)
    g.add_argument("--build", action="store_true", help="also build the arrangement graph as a check")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("stats", help="level profiles and expected levels")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", default="./", help="output prefix or directory")
    s.set_defaults(func=cmd_stats)

    v = sub.add_parser("verify", help="check every bound on a file or generated batch")
    v.add_argument("--in", dest="inp")
    v.add_argument("--n", type=parse_n_range, default=(3, 10), help="N or LO..HI for generated batches")
    v.add_argument("--trials", type=positive, default=20)
    v.add_argument("--seed", type=non_negative, default=DEFAULT_SEED)
    v.add_argument("--kmax", type=non_negative, default=None)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    z = sub.add_parser("zones", help="(<=j)-zone sizes of circles")
    z.add_argument("--in", dest="inp", required=True)
    z.add_argument("--circle", type=non_negative, default=None)
    z.add_argument("--jmax", type=non_negative, default=None)
    z.add_argument("--out")
    z.set_defaults(func=cmd_zones)

    c = sub.add_parser("cliques", help="random half-interval / half-circle clique counts")
    c.add_argument("--mode", choices=["line", "circle"], required=True)
    c.add_argument("--n", type=positive, default=100)
    c.add_argument("--trials", type=positive, default=100)
    c.add_argument("--seed", type=non_negative, default=DEFAULT_SEED)
    c.add_argument("--out")
    c.set_defaults(func=cmd_cliques)

    q = sub.add_parser("qk", help="q_k by quadrature with bounds, optionally Monte Carlo")
    q.add_argument("--d", type=positive, default=2)
    q.add_argument("--n", type=non_negative, required=True)
    q.add_argument("--kmax", type=non_negative, default=None)
    q.add_argument("--tol", type=float, default=DEFAULT_TOL)
    q.add_argument("--out")
    mc_flags(q)
    q.set_defaults(func=cmd_qk)

    mq = sub.add_parser("mc-qk", help="Monte Carlo estimate of q_k next to quadrature")
    mq.add_argument("--d", type=positive, default=2)
    mq.add_argument("--n", type=non_negative, required=True)
    mq.add_argument("--kmax", type=non_negative, default=None)
    mq.add_argument("--tol", type=float, default=DEFAULT_TOL)
    mq.add_argument("--out")
    mc_flags(mq, samples_required=True)
    mq.set_defaults(func=cmd_qk)

    ml = sub.add_parser("mc-levels", help="Monte Carlo k-level sizes of random arrangements")
    ml.add_argument("--d", type=positive, default=2)
    ml.add_argument("--m", type=positive, required=True)
    ml.add_argument("--kmax", type=non_negative, default=None)
    ml.add_argument("--tol", type=float, default=DEFAULT_TOL)
    ml.add_argument("--out")
    mc_flags(ml, samples_default=1000)
    ml.set_defaults(func=cmd_mc_levels)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
