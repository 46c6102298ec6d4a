"""Command-line interface.

Subcommands: synth | factorize | eval | render | check.
Exit codes: 0 success, 1 verification failure, 2 usage or format error.

Matrix files are dense ('0'/'1' rows, extension .dns) or sparse ("n m"
header then "i j" lines, extension .spm); --format overrides the extension
guess.  Thread count comes from --threads, then the CONTILE_THREADS
environment variable, then the machine's CPU count.  All randomness flows
from a single --rng seed.
"""

from __future__ import annotations

import argparse
import os
import random
import sys

import numpy as np

from . import bitmat, oracle, synth
from .bitmat import BinaryMatrix, FormatError
from .factorizer import (
    StepState,
    factorize,
    format_report,
    obmf_step,
    parse_report,
    seeds_all,
    seeds_sample,
)
from .optset import best_compatible_set, compute_counters
from .pqtree import PQTree
from .render import RenderSpec, render_circular, render_heatmap, render_linear

THREADS_ENV = "CONTILE_THREADS"


def _read_matrix(path: str, fmt: str | None) -> BinaryMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fmt is None:
        fmt = "sparse" if path.endswith(".spm") else "dense" if path.endswith(".dns") else None
    if fmt is None:
        raise ValueError(f"cannot guess format of {path!r}; pass --format dense|sparse")
    return bitmat.load_sparse(text) if fmt == "sparse" else bitmat.load_dense(text)


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _resolve_threads(value: int | None) -> int:
    if value is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            value = int(env)
        else:
            value = os.cpu_count() or 1
    if value < 1:
        raise ValueError(f"thread count must be positive, got {value}")
    return value


def _stats(m: BinaryMatrix) -> str:
    cells = m.n_rows * m.n_cols
    dens = m.nnz / cells if cells else 0.0
    return f"{m.n_rows}x{m.n_cols} nnz={m.nnz} density={dens:.4f}"


# -- synth -------------------------------------------------------------------


def cmd_synth(args) -> int:
    if args.kind == "blocks":
        m = synth.gen_blocks(synth.BlockSpec(args.blocks, args.size, args.overlap))
        if args.noise > 0:
            m = synth.flip_noise(m, args.noise, args.rng)
    else:
        m = synth.gen_random(args.n, args.density, args.rng)
    fmt = args.format
    if fmt is None and args.output is not None:
        fmt = "sparse" if args.output.endswith(".spm") else "dense" if args.output.endswith(".dns") else None
    if fmt is None:
        fmt = "sparse"
    text = bitmat.dump_sparse(m) if fmt == "sparse" else bitmat.dump_dense(m)
    _write_text(text, args.output)
    print(_stats(m), file=sys.stderr)
    return 0


def cmd_factorize(args) -> int:
    if args.k < 1:
        raise ValueError(f"rank must be at least 1, got {args.k}")
    d = _read_matrix(args.matrix, args.format)
    if args.seeds == "all":
        seeds = seeds_all(d)
    elif args.seeds.startswith("sample:"):
        seeds = seeds_sample(d, float(args.seeds.split(":", 1)[1]), args.rng)
    else:
        raise ValueError(f"--seeds must be 'all' or 'sample:FRACTION', got {args.seeds!r}")
    threads = _resolve_threads(args.threads)
    f = factorize(d, args.k, variant=args.variant, seeds=seeds, threads=threads)
    report = format_report(f)
    sys.stdout.write(report)
    if args.output:
        _write_text(report, args.output)
    return 0


def cmd_eval(args) -> int:
    with open(args.factors, "r", encoding="utf-8") as fh:
        f = parse_report(fh.read())
    z = bitmat.reconstruct(f)
    for path in args.matrix:
        d = _read_matrix(path, args.format)
        err = bitmat.hamming_error(d, z)
        rel = bitmat.relative_error(d, z) if d.nnz else 0.0
        print(f"{path} ERROR {err} RELERR {rel:.4f}")
    return 0


def cmd_render(args) -> int:
    with open(args.factors, "r", encoding="utf-8") as fh:
        f = parse_report(fh.read())
    labels = None
    if args.labels:
        with open(args.labels, "r", encoding="utf-8") as fh:
            labels = tuple(line.rstrip("\n") for line in fh if line.rstrip("\n"))
    spec = RenderSpec(labels=labels, opacity=args.opacity)
    if args.layout == "circular":
        text = render_circular(f, spec)
    elif args.layout == "linear":
        text = render_linear(f, spec)
    else:
        if not args.matrix:
            raise ValueError("heatmap layout needs --matrix")
        d = _read_matrix(args.matrix, args.format)
        text = render_heatmap(d, f, spec)
    _write_text(text, args.output)
    return 0


# -- check: oracle batteries ---------------------------------------------------


def _check_orders(rng: random.Random, cases: int) -> str | None:
    for _ in range(cases):
        n = rng.randint(3, 6)
        tree = PQTree.universal(n)
        family: list[frozenset] = []
        for _ in range(rng.randint(1, 5)):
            s = frozenset(rng.sample(range(n), rng.randint(1, n)))
            expect = oracle.brute_orders(family + [s], n)
            ok = tree.reduce(s)
            if ok != bool(expect):
                return f"orders: family={family} set={set(s)} n={n}: reduce={ok}, brute says {bool(expect)}"
            if not ok:
                break
            family.append(s)
            if tree.enumerate_orders() != expect:
                return f"orders: family={[set(x) for x in family]} n={n}: enumerate != brute"
    return None


def _compatible_families(tree: PQTree):
    comp = {frozenset()}
    bord = set()
    for o in tree.enumerate_orders():
        n = len(o)
        for i in range(n):
            for j in range(i + 1, n + 1):
                comp.add(frozenset(o[i:j]))
        for j in range(1, n + 1):
            bord.add(frozenset(o[:j]))
            bord.add(frozenset(o[-j:]))
    return comp, bord


def _check_optset(rng: random.Random, cases: int) -> str | None:
    for _ in range(cases):
        n = rng.randint(2, 8)
        tree = PQTree.universal(n)
        for _ in range(rng.randint(0, 3)):
            tree.reduce(frozenset(rng.sample(range(n), rng.randint(2, n))))
        w = [rng.randint(-5, 5) for _ in range(n)]
        comp, bord = _compatible_families(tree)
        want_inner = max(sum(w[u] for u in s) for s in comp)
        want_border = max(sum(w[u] for u in s) for s in bord)
        c = compute_counters(tree, w)
        s, g = best_compatible_set(tree, w)
        if g != want_inner or c.border[c.root] != want_border or sum(w[u] for u in s) != g:
            return f"optset: tree={tree.to_string()} w={w}: got inner={g} border={c.border[c.root]}, want {want_inner}/{want_border}"
    return None


def _check_step(rng: random.Random, cases: int) -> str | None:
    for _ in range(cases):
        n, m = rng.randint(3, 8), rng.randint(3, 8)
        dense = np.array([[rng.random() < 0.4 for _ in range(m)] for _ in range(n)])
        d = BinaryMatrix(dense)
        state = StepState.initial(d, "plain")
        for _ in range(rng.randint(0, 3)):
            r = tuple(sorted(rng.sample(range(n), rng.randint(1, n))))
            cset = tuple(sorted(rng.sample(range(m), rng.randint(1, m))))
            if state.row_tree.admits(r) and state.col_tree.admits(cset):
                state.row_tree.reduce(r)
                state.col_tree.reduce(cset)
                state.mark(r, cset)
        fixed = tuple(sorted(rng.sample(range(n), rng.randint(1, n))))
        s, g = obmf_step(d, state, fixed)
        s2, g2 = oracle.brute_best_row(d, state.cover, fixed, state.col_tree)
        if g != g2:
            return (
                f"step: D={dense.astype(int).tolist()} fixed={fixed} "
                f"tree={state.col_tree.to_string()}: got {s}/{g}, brute {s2}/{g2}"
            )
    return None


def cmd_check(args) -> int:
    if args.cases < 1:
        raise ValueError(f"--cases must be positive, got {args.cases}")
    rng = random.Random(args.rng)
    batteries = [
        ("pq-tree orders vs brute force", _check_orders),
        ("set selection vs brute force", _check_optset),
        ("factor step vs brute force", _check_step),
    ]
    total = 0
    for name, battery in batteries:
        failure = battery(rng, args.cases)
        if failure:
            print(f"FAIL [{name}]\n  counterexample: {failure}")
            return 1
        print(f"ok   [{name}] {args.cases} cases")
        total += args.cases
    print(f"all {total} cases passed")
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="contile", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("synth", help="generate benchmark matrices")
    kinds = ps.add_subparsers(dest="kind", required=True)
    pb = kinds.add_parser("blocks", help="overlapping diagonal blocks, optional flip noise")
    pb.add_argument("--blocks", type=int, default=6)
    pb.add_argument("--size", type=int, default=20)
    pb.add_argument("--overlap", type=int, default=5)
    pb.add_argument("--noise", type=float, default=0.0)
    pr = kinds.add_parser("random", help="uniform random square matrix")
    pr.add_argument("--n", type=int, required=True)
    pr.add_argument("--density", type=float, required=True)
    for q in (pb, pr):
        q.add_argument("--rng", type=int, default=0)
        q.add_argument("-o", "--output", default=None, help="output path (default: stdout)")
        q.add_argument("--format", choices=("dense", "sparse"), default=None)
        q.set_defaults(func=cmd_synth)

    pf = sub.add_parser("factorize", help="run the greedy factorizer")
    pf.add_argument("matrix")
    pf.add_argument("-k", type=int, required=True, help="number of factors")
    pf.add_argument("--variant", choices=("plain", "cyclic", "sym", "cyclic-sym"), default="plain")
    pf.add_argument("--seeds", default="all", help="'all' or 'sample:FRACTION'")
    pf.add_argument("--rng", type=int, default=0)
    pf.add_argument("--threads", type=int, default=None,
                    help=f"seed-loop parallelism (default: ${THREADS_ENV} or CPU count)")
    pf.add_argument("--format", choices=("dense", "sparse"), default=None)
    pf.add_argument("-o", "--output", default=None, help="also write the report here")
    pf.set_defaults(func=cmd_factorize)

    pe = sub.add_parser("eval", help="score a factor file against matrices")
    pe.add_argument("--factors", required=True)
    pe.add_argument("--matrix", action="append", required=True)
    pe.add_argument("--format", choices=("dense", "sparse"), default=None)
    pe.set_defaults(func=cmd_eval)

    pv = sub.add_parser("render", help="draw a factorization as SVG")
    pv.add_argument("--factors", required=True)
    pv.add_argument("--layout", choices=("circular", "linear", "heatmap"), default="circular")
    pv.add_argument("--matrix", default=None, help="data matrix (heatmap layout)")
    pv.add_argument("--labels", default=None, help="file with one node name per line")
    pv.add_argument("--opacity", type=float, default=0.35)
    pv.add_argument("--format", choices=("dense", "sparse"), default=None)
    pv.add_argument("-o", "--output", default=None, help="output path (default: stdout)")
    pv.set_defaults(func=cmd_render)

    pc = sub.add_parser("check", help="run brute-force oracle batteries")
    pc.add_argument("--cases", type=int, default=200)
    pc.add_argument("--rng", type=int, default=0)
    pc.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
