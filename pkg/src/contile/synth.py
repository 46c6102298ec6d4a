"""Synthetic benchmark inputs: overlapping diagonal blocks, bit-flip noise,
and uniform random matrices.

All randomness flows through numpy's counter-based Philox generator keyed by
an explicit seed, so outputs are reproducible regardless of call order or
parallelism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bitmat import BinaryMatrix


@dataclass(frozen=True)
class BlockSpec:
    n_blocks: int
    block_size: int
    overlap: int

    def __post_init__(self):
        if self.n_blocks < 1 or self.block_size < 1:
            raise ValueError("need at least one block of positive size")
        if not 0 <= self.overlap < self.block_size:
            raise ValueError("overlap must satisfy 0 <= overlap < block_size")

    @property
    def side(self) -> int:
        return self.n_blocks * self.block_size - (self.n_blocks - 1) * self.overlap


def gen_blocks(spec: BlockSpec) -> BinaryMatrix:
    """Symmetric union of all-ones diagonal blocks, consecutive blocks
    sharing `overlap` indices."""
    side = spec.side
    dense = np.zeros((side, side), dtype=bool)
    stride = spec.block_size - spec.overlap
    for t in range(spec.n_blocks):
        lo = t * stride
        hi = lo + spec.block_size
        dense[lo:hi, lo:hi] = True
    return BinaryMatrix(dense)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def flip_count(rate: float, n_cells: int) -> int:
    # round half up, so e.g. 10% of 95x95 flips exactly 903 cells
    return math.floor(rate * n_cells + 0.5)


def flip_noise(m: BinaryMatrix, rate: float, rng_seed: int) -> BinaryMatrix:
    """Flip an exact count of distinct uniformly chosen cells."""
    if not 0 <= rate <= 0.5:
        raise ValueError(f"flip rate must be in [0, 0.5], got {rate}")
    cells = m.n_rows * m.n_cols
    count = flip_count(rate, cells)
    if count == 0:
        return BinaryMatrix(m.dense())
    flips = _rng(rng_seed).choice(cells, size=count, replace=False)
    dense = m.dense().copy()
    flat = dense.reshape(-1)
    flat[flips] ^= True
    return BinaryMatrix(dense)


def gen_random(n: int, density: float, rng_seed: int) -> BinaryMatrix:
    """n x n matrix with i.i.d. ones at the given density."""
    if n < 1:
        raise ValueError("matrix side must be positive")
    if not 0 < density < 1:
        raise ValueError(f"density must be in (0, 1), got {density}")
    dense = _rng(rng_seed).random((n, n)) < density
    return BinaryMatrix(dense)
