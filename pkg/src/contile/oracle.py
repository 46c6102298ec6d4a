"""Exponential brute-force references.

These are deliberately naive: they define correct answers for the engine,
the set-selection DP, and the rank-1 heuristic at test scale.  Hard size
guards keep them from ever running on production inputs.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .bitmat import BinaryMatrix, is_cyclic_under, is_unimodal_under
from .pqtree import PQTree

MAX_ORDER_UNIVERSE = 8
MAX_STEP_UNIVERSE = 10
MAX_RANK1_CELLS = 16


def brute_orders(sets: Iterable[Iterable[int]], n: int, cyclic: bool = False) -> set[tuple[int, ...]]:
    """All permutations of range(n) keeping every set contiguous."""
    if n > MAX_ORDER_UNIVERSE:
        raise ValueError(f"universe {n} exceeds brute-force bound {MAX_ORDER_UNIVERSE}")
    sets = [tuple(s) for s in sets]
    check = is_cyclic_under if cyclic else is_unimodal_under
    return {p for p in permutations(range(n)) if check(sets, p)}


def brute_best_row(d: BinaryMatrix, cover: np.ndarray, fixed: Sequence[int], tree: PQTree):
    """Exhaustive best tree-compatible column set for the given fixed rows.

    Maximizes the sum of per-column weights (uncovered ones minus uncovered
    zeros restricted to the fixed rows) over every admissible subset plus
    the empty set.  Ties prefer fewer columns, then lexicographic order.
    """
    if tree.n > MAX_STEP_UNIVERSE:
        raise ValueError(f"universe {tree.n} exceeds brute-force bound {MAX_STEP_UNIVERSE}")
    fixed = np.asarray(sorted(fixed), dtype=np.int64)
    if fixed.size == 0:
        raise ValueError("fixed row set is empty")
    sub = d.dense()[fixed, :]
    uncov = ~cover[fixed, :]
    w = (sub & uncov).sum(axis=0).astype(np.int64) - (~sub & uncov).sum(axis=0).astype(np.int64)
    m = tree.n
    best_set: tuple[int, ...] = ()
    best_gain = 0
    for mask in range(1, 1 << m):
        s = tuple(j for j in range(m) if mask >> j & 1)
        gain = int(w[list(s)].sum())
        if gain < best_gain or (gain == best_gain and len(s) >= len(best_set) > 0):
            continue
        if gain == best_gain and len(best_set) > 0 and len(s) == len(best_set) and s >= best_set:
            continue
        if tree.admits(s):
            best_set, best_gain = s, gain
    return best_set, best_gain


def brute_rank1(d: BinaryMatrix):
    """Exhaustive best single tile (row set x column set) by disagreements."""
    n, m = d.shape
    if n + m > MAX_RANK1_CELLS:
        raise ValueError(f"{n}+{m} exceeds brute-force bound {MAX_RANK1_CELLS}")
    dense = d.dense()
    nnz = d.nnz
    best = ((), (), nnz)  # empty tile
    for rmask in range(1, 1 << n):
        rows = [i for i in range(n) if rmask >> i & 1]
        col_ones = dense[rows, :].sum(axis=0)
        for cmask in range(1, 1 << m):
            cols = [j for j in range(m) if cmask >> j & 1]
            inside_ones = int(col_ones[cols].sum())
            err = nnz - 2 * inside_ones + len(rows) * len(cols)
            if err < best[2]:
                best = (tuple(rows), tuple(cols), err)
    return best
