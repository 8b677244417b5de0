"""Command-line front end: ``favard <subcommand> [flags]``.

Every subcommand prints one summary line (method, parameters, seed, error
indicator) and, with ``--out``, writes a CSV table.  Exit codes: 0 success,
2 bad arguments, 3 numerical precondition failure.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from fractions import Fraction

from . import buffon, cantor, curve as curvemod, curveproj, decay, linproj, pairs
from .errors import ArgumentError, FavardError, PreconditionError
from .estimate import QuadratureSpec

DEFAULT_SEED = 20240607
DEFAULT_CURVE = "halfcircle:R=2,sign=-"


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FAVARD_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env, 0)
    except ValueError:
        raise ArgumentError(f"FAVARD_SEED must be an integer, got {env!r}") from None


def _write_csv(path, header, rows):
    if not path:
        return
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row])


def _gen(args):
    return cantor.cantor_2d(args.n)


def _estimate(args, curve, gen):
    if args.method == "quadrature":
        return curveproj.favard_curve_quadrature(curve, gen, QuadratureSpec(args.quad_points))
    if args.method == "grid":
        return curveproj.favard_curve_grid(curve, gen, args.pitch)
    return buffon.mc_favard_curve(gen, curve, args.samples, buffon.RngSpec(_seed(args)))


# ------------------------------------------------------------- subcommands


def cmd_cantor(args):
    gen = _gen(args)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            cantor.squares_csv(gen, fh)
    measure = Fraction(2**args.n, 4**args.n)
    print(f"cantor method=exact n={args.n} squares={len(gen)} measure_1d={measure} seed=None error=0")


def cmd_fav(args):
    est = linproj.favard_length(_gen(args), QuadratureSpec(args.quad_points))
    _write_csv(args.out, ["theta", "measure"], est.trace.tolist())
    if args.summary:
        _write_csv(args.summary, ["n", "favard", "error"], [(args.n, est.value, est.error_indicator)])
    print(f"fav n={args.n} {est.summary()}")


def cmd_favc(args):
    curve = curvemod.parse_curve(args.curve)
    est = _estimate(args, curve, _gen(args))
    seed = est.seed
    _write_csv(args.out, ["n", "method", "value", "error", "seed"], [(args.n, est.method, est.value, est.error_indicator, seed)])
    if args.trace and est.trace is not None:
        _write_csv(args.trace, ["alpha", "measure"], est.trace.tolist())
    print(f"favc n={args.n} curve={args.curve} {est.summary()}")


def cmd_buffon(args):
    curve = curvemod.parse_curve(args.curve)
    seed = _seed(args)
    rng = buffon.RngSpec(seed)
    gen = _gen(args)
    area, hist = buffon.hit_histogram(gen, curve, args.samples, rng)
    rows = []
    for order in (1, 2):
        value, err = buffon.moment_from_histogram(area, hist, order)
        rows.append((args.n, order, value, err, args.samples, seed))
    _write_csv(args.out, ["n", "order", "value", "stderr", "samples", "seed"], rows)
    if args.raw:
        drops = buffon.drop_samples(gen, curve, args.samples, rng)
        _write_csv(args.raw, ["z1", "z2", "fn"], [(d.z[0], d.z[1], d.hit_count) for d in drops])
    (_, _, m1, e1, _, _), (_, _, m2, e2, _, _) = rows
    print(
        f"buffon method=monte-carlo n={args.n} curve={args.curve} samples={args.samples} seed={seed} "
        f"moment1={m1:.6g} error={e1:.3g} moment2={m2:.6g} error2={e2:.3g}"
    )


def cmd_counting(args):
    curve = curvemod.parse_curve(args.curve)
    try:
        z1, z2 = (float(v) for v in args.z.split(","))
    except ValueError:
        raise ArgumentError(f"--z must be 'z1,z2', got {args.z!r}") from None
    f = buffon.counting_function(_gen(args), curve, (z1, z2))
    _write_csv(args.out, ["z1", "z2", "fn"], [(z1, z2, f)])
    print(f"counting method=exact n={args.n} curve={args.curve} z=({z1!r},{z2!r}) fn={f} seed=None error=0")


def cmd_pairs(args):
    n = cantor._check_n(args.n)
    check = args.check
    if check and n > pairs.EXHAUSTIVE_MAX_2D:
        raise ArgumentError(f"--check enumerates all pairs; needs n <= {pairs.EXHAUSTIVE_MAX_2D}")
    rows = pairs.pair_table(n, exhaustive=check)
    _write_csv(args.out, ["n", "k", "ell", "count_formula", "count_exhaustive"], rows)
    status = ""
    if check:
        ok = all(r[3] == r[4] for r in rows) and pairs.count_pairs_1d(n) == pairs.count_pairs_1d(n, "exhaustive")
        status = " formula == exhaustive" if ok else " formula != exhaustive"
    print(f"pairs method={'exhaustive' if check else 'formula'} n={n} classes={len(rows)} seed=None error=0{status}")
    return 0 if not check or status.endswith("== exhaustive") else 1


def cmd_compare_local(args):
    curve = curvemod.parse_curve(args.curve)
    rows = curveproj.local_block_comparison(curve, args.n, args.block, args.alpha_samples)
    _write_csv(args.out, ["alpha", "lhs", "rhs", "ratio"], rows)
    ratios = [r[3] for r in rows]
    print(
        f"compare-local method=quadrature n={args.n} block={args.block} curve={args.curve} "
        f"alpha_samples={args.alpha_samples} seed=None ratio_min={min(ratios):.4g} "
        f"ratio_max={max(ratios):.4g} error={max(ratios) / min(ratios):.4g}"
    )


def cmd_decay(args):
    curve = curvemod.parse_curve(args.curve)
    rows, points = [], []
    for n in range(args.n_min, args.n + 1):
        est = _estimate(args, curve, cantor.cantor_2d(n))
        rows.append((n, est.method, est.value, est.error_indicator, est.seed))
        points.append((n, est.value))
    _write_csv(args.out, ["n", "method", "value", "error", "seed"], rows)
    fit = decay.fit_decay(points)
    err = max(r[3] for r in rows)
    print(
        f"decay method={args.method} n={args.n_min}..{args.n} curve={args.curve} seed={rows[-1][4]} "
        f"exponent={fit.exponent:.4f} r2={fit.r_squared:.4f} min_value_times_n={fit.min_value_times_n:.6g} "
        f"error={err:.3g}"
    )


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="favard", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, curve=False, method=False, mc=False):
        sp.add_argument("--n", type=int, required=True, help="generation of K_n")
        sp.add_argument("--out", help="CSV output path")
        if curve:
            sp.add_argument("--curve", default=DEFAULT_CURVE, help=curvemod.CURVE_GRAMMAR)
        if method:
            sp.add_argument("--method", choices=["quadrature", "grid", "mc"], default="quadrature")
            sp.add_argument("--quad-points", type=int, default=4096)
            sp.add_argument("--pitch", type=float, default=None, help="grid pitch (default 4^-(n+2))")
        if mc or method:
            sp.add_argument("--samples", type=int, default=10**6)
            sp.add_argument("--seed", type=int, default=None, help="master seed (env FAVARD_SEED)")

    common(sub.add_parser("cantor", help="list the squares of K_n"))
    sp = sub.add_parser("fav", help="classical Favard length of K_n")
    common(sp)
    sp.add_argument("--quad-points", type=int, default=4096)
    sp.add_argument("--summary", help="CSV path for the n,favard,error row")
    sp = sub.add_parser("favc", help="Favard curve length of K_n")
    common(sp, curve=True, method=True)
    sp.add_argument("--trace", help="CSV path for the alpha,measure trace (quadrature)")
    sp = sub.add_parser("buffon", help="Monte Carlo moments of the counting function")
    common(sp, curve=True, mc=True)
    sp.add_argument("--raw", help="CSV path for raw z1,z2,fn samples")
    sp = sub.add_parser("counting", help="evaluate f_n at one translation")
    common(sp, curve=True)
    sp.add_argument("--z", required=True, help="translation as z1,z2")
    sp = sub.add_parser("pairs", help="(k, l)-pair counts")
    common(sp)
    sp.add_argument("--check", action="store_true", help="compare with exhaustive enumeration")
    sp = sub.add_parser("compare-local", help="block-level curve vs linear projection comparison")
    common(sp, curve=True)
    sp.add_argument("--block", type=int, default=0)
    sp.add_argument("--alpha-samples", type=int, default=64)
    sp = sub.add_parser("decay", help="Favard curve length over n with a log-log fit")
    common(sp, curve=True, method=True)
    sp.add_argument("--n-min", type=int, default=2)
    return p


COMMANDS = {
    "cantor": cmd_cantor,
    "fav": cmd_fav,
    "favc": cmd_favc,
    "buffon": cmd_buffon,
    "counting": cmd_counting,
    "pairs": cmd_pairs,
    "compare-local": cmd_compare_local,
    "decay": cmd_decay,
}


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args) or 0
    except ArgumentError as exc:
        print(f"favard {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"favard {args.command}: precondition failed: {exc}", file=sys.stderr)
        return 3
    except FavardError as exc:
        print(f"favard {args.command}: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
