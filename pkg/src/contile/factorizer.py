"""Greedy alternating factorization of binary matrices into contiguous tiles.

One factor is accepted per round: every seed column starts an alternating
loop (best row set for the fixed columns, best column set for the fixed
rows, repeat while the tile's net gain strictly improves), the best seed
wins, and the PQ-trees are reduced so all accepted sets stay simultaneously
contiguous.  Cyclic variants allow sets wrapping around the order; the
symmetric variants keep a single tree over the nodes of a square matrix and
score a 2-approximation surrogate per step.

Seed evaluations inside a round are independent and can run across worker
processes (fork); the winner is selected by (gain, seed position), so the
result does not depend on completion order.
"""

from __future__ import annotations

import math
import multiprocessing
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bitmat import BinaryMatrix, IndexSet, hamming_error, reconstruct
from .optset import best_compatible_set, best_cyclic_set
from .pqtree import PQTree

VARIANTS = ("plain", "cyclic", "sym", "cyclic-sym")

MAX_SWEEPS = 100  # safety cap for alternation under tie-breaks


@dataclass
class Factorization:
    variant: str
    factors: list[tuple[IndexSet, IndexSet]]
    row_order: tuple[int, ...]
    col_order: tuple[int, ...]
    error: int
    rank_requested: int
    rank_used: int
    rel_error: float = 0.0
    round_errors: list[int] = field(default_factory=list, repr=False, compare=False)

    @property
    def node_order(self) -> tuple[int, ...]:
        if self.variant not in ("sym", "cyclic-sym"):
            raise ValueError("node order only exists for symmetric variants")
        return self.row_order


@dataclass
class StepState:
    """Working state between rounds: trees, cover marks, accepted factors.

    `uncov` and `uncov_ones` are caches derived from `cover`; mutate the
    cover only through `mark` so they stay in sync.
    """

    variant: str
    row_tree: PQTree
    col_tree: PQTree  # same object as row_tree for symmetric variants
    cover: np.ndarray
    accepted: list[tuple[tuple[int, ...], tuple[int, ...]]]
    current_error: int
    dd: np.ndarray
    uncov: np.ndarray
    uncov_ones: np.ndarray

    @classmethod
    def initial(cls, d: BinaryMatrix, variant: str) -> "StepState":
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        symmetric = variant in ("sym", "cyclic-sym")
        if symmetric and d.n_rows != d.n_cols:
            raise ValueError("symmetric variants require a square matrix")
        if symmetric:
            tree = PQTree.universal(d.n_rows)
            row_tree = col_tree = tree
        else:
            row_tree = PQTree.universal(d.n_rows)
            col_tree = PQTree.universal(d.n_cols)
        cover = np.zeros(d.shape, dtype=bool)
        dd = d.dense()
        return cls(variant, row_tree, col_tree, cover, [], d.nnz, dd, ~cover, dd.copy())

    def mark(self, rows: Sequence[int], cols: Sequence[int]) -> None:
        """Mark a tile (and its transpose for symmetric variants) as covered."""
        r = np.asarray(tuple(rows), dtype=np.int64)
        c = np.asarray(tuple(cols), dtype=np.int64)
        if r.size and c.size:
            self.cover[np.ix_(r, c)] = True
            if self.symmetric:
                self.cover[np.ix_(c, r)] = True
        np.logical_not(self.cover, out=self.uncov)
        np.logical_and(self.dd, self.uncov, out=self.uncov_ones)

    @property
    def cyclic(self) -> bool:
        return self.variant in ("cyclic", "cyclic-sym")

    @property
    def symmetric(self) -> bool:
        return self.variant in ("sym", "cyclic-sym")


# -- per-step weights -----------------------------------------------------


def _weights_cols(uncov_ones: np.ndarray, uncov: np.ndarray, fixed: np.ndarray) -> np.ndarray:
    """Per-column uncovered ones minus uncovered zeros over the fixed rows."""
    p = uncov_ones[fixed].sum(axis=0, dtype=np.int64)
    cells = uncov[fixed].sum(axis=0, dtype=np.int64)
    return 2 * p - cells


def step_weights(d: BinaryMatrix, state: StepState, fixed_rows: Sequence[int]) -> np.ndarray:
    """Column weights for extending the factorization by one tile row."""
    fixed = np.asarray(sorted(fixed_rows), dtype=np.int64)
    if fixed.size == 0:
        raise ValueError("fixed row set is empty")
    return _weights_cols(state.uncov_ones, state.uncov, fixed)


def symmetric_step_weights(d: BinaryMatrix, state: StepState, fixed: Sequence[int]) -> np.ndarray:
    """Node weights for the symmetric surrogate (both objective terms).

    A cell contributes once per term it appears in, so diagonal cells of
    the candidate region count twice.
    """
    if d.n_rows != d.n_cols:
        raise ValueError("symmetric weights require a square matrix")
    fx = np.asarray(sorted(fixed), dtype=np.int64)
    if fx.size == 0:
        raise ValueError("fixed node set is empty")
    return _weights_cols(state.uncov_ones, state.uncov, fx) + _weights_cols(
        state.uncov_ones.T, state.uncov.T, fx
    )


def obmf_step(d: BinaryMatrix, state: StepState, fixed_rows: Sequence[int]):
    """Best new column set compatible with the accepted column sets."""
    if state.symmetric:
        w = symmetric_step_weights(d, state, fixed_rows)
    else:
        w = step_weights(d, state, fixed_rows)
    pick = best_cyclic_set if state.cyclic else best_compatible_set
    return pick(state.col_tree, w)


# -- alternation ------------------------------------------------------------


@dataclass
class AlternateResult:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    gain: int           # exact decrease in disagreements if the tile is added
    step_gains: list[int]  # optimization objective after each half-step


def _true_gain(dd, cover, rows, cols, symmetric: bool) -> int:
    """Exact error decrease of adding tile rows x cols (plus transpose if symmetric)."""
    if not rows or not cols:
        return 0
    r = np.asarray(rows, dtype=np.int64)
    c = np.asarray(cols, dtype=np.int64)
    region = np.zeros(dd.shape, dtype=bool)
    region[np.ix_(r, c)] = True
    if symmetric:
        region[np.ix_(c, r)] = True
    region &= ~cover
    ones = int(np.count_nonzero(dd & region))
    return 2 * ones - int(np.count_nonzero(region))


def alternate(d: BinaryMatrix, state: StepState, seed: Sequence[int]) -> AlternateResult:
    """Grow one tile from a seed column set until the gain stops improving."""
    return _alternate_raw(state, tuple(sorted(seed)))


def _alternate_raw(state: StepState, seed: tuple[int, ...]) -> AlternateResult:
    pick = best_cyclic_set if state.cyclic else best_compatible_set
    sym = state.symmetric
    u1, unc = state.uncov_ones, state.uncov
    u1T, uncT = u1.T, unc.T
    cols = seed
    rows: tuple[int, ...] = ()
    gains: list[int] = []
    prev = None
    gain = 0
    for _ in range(MAX_SWEEPS):
        fx = np.asarray(cols, dtype=np.int64)
        w = _weights_cols(u1T, uncT, fx)
        if sym:
            w += _weights_cols(u1, unc, fx)
        rows, g = pick(state.row_tree, w)
        if not rows:
            return AlternateResult((), (), 0, gains)
        gains.append(g)
        fx = np.asarray(rows, dtype=np.int64)
        w = _weights_cols(u1, unc, fx)
        if sym:
            w += _weights_cols(u1T, uncT, fx)
        cols, gain = pick(state.col_tree, w)
        if not cols:
            return AlternateResult((), (), 0, gains)
        gains.append(gain)
        if prev is not None and gain <= prev:
            break
        prev = gain
    if sym:
        true = _true_gain(state.dd, state.cover, rows, cols, True)
    else:
        true = gain
    return AlternateResult(rows, cols, true, gains)


# -- seeds --------------------------------------------------------------------


def seeds_all(d: BinaryMatrix) -> list[IndexSet]:
    """One singleton seed per column."""
    return [IndexSet.of(d.n_cols, (j,)) for j in range(d.n_cols)]


def seeds_sample(d: BinaryMatrix, fraction: float, rng_seed: int) -> list[IndexSet]:
    """Uniform sample (without replacement) of the singleton column seeds.

    The sample size is floor(fraction * n_cols), at least 1.
    """
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    m = d.n_cols
    count = max(1, math.floor(fraction * m))
    rng = np.random.Generator(np.random.Philox(rng_seed))
    picked = sorted(rng.choice(m, size=count, replace=False).tolist())
    return [IndexSet.of(m, (j,)) for j in picked]


# -- full factorization ---------------------------------------------------------


_PAR: dict = {}  # state inherited by forked seed-evaluation workers


def _eval_seed_at(pos: int):
    res = _alternate_raw(_PAR["state"], _PAR["seeds"][pos])
    return res.rows, res.cols, res.gain


def _anchored(s: Sequence[int], n: int) -> tuple[int, ...]:
    """The set or its complement, whichever avoids the anchor element 0."""
    s = tuple(sorted(s))
    if 0 not in s:
        return s
    inside = set(s)
    return tuple(u for u in range(n) if u not in inside)


def _seed_compatible(tree: PQTree, seed: tuple[int, ...], cyclic: bool) -> bool:
    if len(seed) <= 1:
        return True
    if tree.admits(seed):
        return True
    return cyclic and tree.admits(_anchored(seed, tree.n))


def factorize(
    d: BinaryMatrix,
    k: int,
    variant: str = "plain",
    seeds: Sequence[IndexSet] | None = None,
    threads: int = 1,
) -> Factorization:
    """Greedy rank-k factorization; stops early when no tile helps.

    Deterministic for fixed inputs: seed evaluations are reduced by
    (gain, seed position) regardless of parallel completion order.
    """
    if k < 1:
        raise ValueError(f"rank must be at least 1, got {k}")
    state = StepState.initial(d, variant)
    if seeds is None:
        seeds = seeds_all(d)
    seed_tuples = [tuple(sorted(s)) for s in seeds]
    if not seed_tuples:
        raise ValueError("seed list is empty")
    factors: list[tuple[IndexSet, IndexSet]] = []
    round_errors: list[int] = []

    use_pool = threads > 1 and hasattr(os, "fork") and len(seed_tuples) > 1
    for _ in range(k):
        alive = [
            pos
            for pos, s in enumerate(seed_tuples)
            if _seed_compatible(state.col_tree, s, state.cyclic)
        ]
        if not alive:
            break
        if use_pool:
            _PAR.update(state=state, seeds=seed_tuples)
            ctx = multiprocessing.get_context("fork")
            chunk = max(1, len(alive) // (threads * 4))
            with ctx.Pool(threads) as pool:
                results = pool.map(_eval_seed_at, alive, chunksize=chunk)
        else:
            results = []
            for pos in alive:
                res = _alternate_raw(state, seed_tuples[pos])
                results.append((res.rows, res.cols, res.gain))

        best = None
        for (rows, cols, gain), pos in zip(results, alive):
            if rows and cols and (best is None or gain > best[0]):
                best = (gain, pos, rows, cols)
        if best is None or best[0] <= 0:
            break
        gain, _, rows, cols = best
        _accept(state, rows, cols)
        factors.append((IndexSet.of(d.n_rows, rows), IndexSet.of(d.n_cols, cols)))
        state.current_error -= gain
        round_errors.append(state.current_error)

    row_order = state.row_tree.frontier()
    col_order = state.col_tree.frontier()
    f = Factorization(
        variant=variant,
        factors=factors,
        row_order=row_order,
        col_order=col_order,
        error=0,
        rank_requested=k,
        rank_used=len(factors),
        round_errors=round_errors,
    )
    f.error = hamming_error(d, reconstruct(f))
    f.rel_error = f.error / d.nnz if d.nnz else 0.0
    return f


def _accept(state: StepState, rows: tuple[int, ...], cols: tuple[int, ...]) -> None:
    row_set = _anchored(rows, state.row_tree.n) if state.cyclic else rows
    col_set = _anchored(cols, state.col_tree.n) if state.cyclic else cols
    if not state.row_tree.reduce(row_set):
        raise AssertionError(f"accepted row set {rows} incompatible with its tree")
    if not state.col_tree.reduce(col_set):
        raise AssertionError(f"accepted column set {cols} incompatible with its tree")
    state.mark(rows, cols)
    state.accepted.append((rows, cols))


# -- report format -----------------------------------------------------------


def format_report(f: Factorization) -> str:
    """Stable plain-text serialization of a factorization."""
    lines = [
        f"VARIANT {f.variant}",
        f"RANK {f.rank_used}/{f.rank_requested}",
        f"ERROR {f.error} RELERR {f.rel_error:.4f}",
    ]
    if f.variant in ("sym", "cyclic-sym"):
        lines.append("NODE-ORDER " + " ".join(map(str, f.node_order)))
    else:
        lines.append("ROW-ORDER " + " ".join(map(str, f.row_order)))
        lines.append("COL-ORDER " + " ".join(map(str, f.col_order)))
    for t, (rows, cols) in enumerate(f.factors):
        lines.append(
            f"FACTOR {t} ROWS " + " ".join(map(str, rows)) + " COLS " + " ".join(map(str, cols))
        )
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Factorization:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("VARIANT "):
        raise ValueError("not a factorization report")
    variant = lines[0].split(None, 1)[1].strip()
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    used, requested = lines[1].split()[1].split("/")
    parts = lines[2].split()
    error, rel = int(parts[1]), float(parts[3])
    idx = 3
    if variant in ("sym", "cyclic-sym"):
        node_order = tuple(int(x) for x in lines[idx].split()[1:])
        row_order = col_order = node_order
        idx += 1
    else:
        row_order = tuple(int(x) for x in lines[idx].split()[1:])
        col_order = tuple(int(x) for x in lines[idx + 1].split()[1:])
        idx += 2
    factors = []
    n, m = len(row_order), len(col_order)
    for ln in lines[idx:]:
        toks = ln.split()
        if toks[0] != "FACTOR":
            raise ValueError(f"unexpected line in report: {ln!r}")
        split_at = toks.index("COLS")
        rows = tuple(int(x) for x in toks[3:split_at])
        cols = tuple(int(x) for x in toks[split_at + 1 :])
        factors.append((IndexSet.of(n, rows), IndexSet.of(m, cols)))
    return Factorization(
        variant=variant,
        factors=factors,
        row_order=row_order,
        col_order=col_order,
        error=error,
        rank_requested=int(requested),
        rank_used=int(used),
        rel_error=rel,
    )
