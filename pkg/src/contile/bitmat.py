"""Binary matrices: I/O, Boolean algebra, error metrics, contiguity checks.

Matrices are immutable 0/1 matrices indexed from 0. Storage is a dense
boolean array (fast vectorized slicing) with per-row/per-column index
lists derived on demand, so the set-of-ones view is always available.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np


class FormatError(ValueError):
    """Malformed matrix text; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class IndexSet:
    """Sorted set of indices drawn from a universe [0, universe)."""

    universe: int
    members: tuple[int, ...]

    def __post_init__(self):
        mem = tuple(sorted(set(int(m) for m in self.members)))
        if mem and (mem[0] < 0 or mem[-1] >= self.universe):
            raise ValueError(f"index out of range for universe {self.universe}: {mem}")
        object.__setattr__(self, "members", mem)

    @classmethod
    def of(cls, universe: int, members: Iterable[int]) -> "IndexSet":
        return cls(universe, tuple(members))

    def complement(self) -> "IndexSet":
        inside = set(self.members)
        return IndexSet(self.universe, tuple(i for i in range(self.universe) if i not in inside))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, item) -> bool:
        return item in set(self.members)


class BinaryMatrix:
    """Immutable rectangular 0/1 matrix."""

    def __init__(self, dense: np.ndarray):
        arr = np.asarray(dense, dtype=bool)
        if arr.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        arr = arr.copy()
        arr.setflags(write=False)
        self._dense = arr
        self._nnz = int(np.count_nonzero(arr))
        self._row_adj: list[np.ndarray] | None = None
        self._col_adj: list[np.ndarray] | None = None

    # -- construction --------------------------------------------------

    @classmethod
    def from_pairs(cls, n_rows: int, n_cols: int, pairs: Iterable[tuple[int, int]]) -> "BinaryMatrix":
        dense = np.zeros((n_rows, n_cols), dtype=bool)
        for i, j in pairs:
            if not (0 <= i < n_rows and 0 <= j < n_cols):
                raise ValueError(f"cell ({i}, {j}) outside {n_rows}x{n_cols}")
            dense[i, j] = True
        return cls(dense)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "BinaryMatrix":
        return cls(np.zeros((n_rows, n_cols), dtype=bool))

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls(np.eye(n, dtype=bool))

    # -- views ----------------------------------------------------------

    @property
    def n_rows(self) -> int:
        return self._dense.shape[0]

    @property
    def n_cols(self) -> int:
        return self._dense.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._dense.shape

    @property
    def nnz(self) -> int:
        return self._nnz

    def dense(self) -> np.ndarray:
        """Read-only dense boolean view."""
        return self._dense

    def has(self, i: int, j: int) -> bool:
        return bool(self._dense[i, j])

    def iter_ones(self) -> Iterator[tuple[int, int]]:
        rs, cs = np.nonzero(self._dense)
        return zip(rs.tolist(), cs.tolist())

    @property
    def ones(self) -> set[tuple[int, int]]:
        return set(self.iter_ones())

    def row_ones(self, i: int) -> np.ndarray:
        """Sorted column indices of the ones in row i."""
        if self._row_adj is None:
            self._row_adj = [np.nonzero(r)[0] for r in self._dense]
        return self._row_adj[i]

    def col_ones(self, j: int) -> np.ndarray:
        """Sorted row indices of the ones in column j."""
        if self._col_adj is None:
            self._col_adj = [np.nonzero(c)[0] for c in self._dense.T]
        return self._col_adj[j]

    def transpose(self) -> "BinaryMatrix":
        return BinaryMatrix(self._dense.T)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._dense, other._dense))

    def __hash__(self):
        return hash((self.shape, self._nnz))

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


# -- text formats --------------------------------------------------------


def load_dense(text: str) -> BinaryMatrix:
    """Parse rows of '0'/'1' characters, one row per line."""
    lines = text.splitlines()
    if not lines:
        return BinaryMatrix.zeros(0, 0)
    width = len(lines[0])
    rows = []
    for lineno, line in enumerate(lines, start=1):
        if len(line) != width:
            raise FormatError(f"expected {width} characters, got {len(line)}", lineno)
        bad = set(line) - {"0", "1"}
        if bad:
            raise FormatError(f"invalid characters {sorted(bad)}", lineno)
        rows.append([ch == "1" for ch in line])
    return BinaryMatrix(np.array(rows, dtype=bool).reshape(len(lines), width))


def dump_dense(m: BinaryMatrix) -> str:
    d = m.dense()
    return "\n".join("".join("1" if x else "0" for x in row) for row in d) + ("\n" if m.n_rows else "")


def load_sparse(text: str) -> BinaryMatrix:
    """Parse 'n m' header followed by 'i j' cell lines (0-based, dupes ok)."""
    lines = text.splitlines()
    header_at = None
    for lineno, line in enumerate(lines, start=1):
        if line.strip():
            header_at = lineno
            break
    if header_at is None:
        raise FormatError("missing 'n m' header", 1)
    parts = lines[header_at - 1].split()
    if len(parts) != 2:
        raise FormatError("header must be 'n m'", header_at)
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError("header must contain two integers", header_at) from None
    if n < 0 or m < 0:
        raise FormatError("negative dimensions", header_at)
    dense = np.zeros((n, m), dtype=bool)
    for lineno in range(header_at + 1, len(lines) + 1):
        line = lines[lineno - 1]
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError("cell line must be 'i j'", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError("cell indices must be integers", lineno) from None
        if not (0 <= i < n and 0 <= j < m):
            raise FormatError(f"index ({i}, {j}) out of range for {n}x{m}", lineno)
        dense[i, j] = True
    return BinaryMatrix(dense)


def dump_sparse(m: BinaryMatrix) -> str:
    out = [f"{m.n_rows} {m.n_cols}"]
    out.extend(f"{i} {j}" for i, j in m.iter_ones())
    return "\n".join(out) + "\n"


# -- Boolean algebra ------------------------------------------------------


def boolean_product(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """A^T o B: (result)_ij = OR_l a_li * b_lj, for k x n and k x m operands."""
    if a.n_rows != b.n_rows:
        raise ValueError(f"inner dimensions differ: {a.n_rows} vs {b.n_rows}")
    prod = a.dense().astype(np.int64).T @ b.dense().astype(np.int64)
    return BinaryMatrix(prod > 0)


def boolean_sum(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return BinaryMatrix(a.dense() | b.dense())


def hamming_error(a: BinaryMatrix, b: BinaryMatrix) -> int:
    """Number of disagreeing cells."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return int(np.count_nonzero(a.dense() != b.dense()))


def relative_error(d: BinaryMatrix, z: BinaryMatrix) -> float:
    """Disagreements divided by nnz(d)."""
    if d.nnz == 0:
        raise ValueError("relative error undefined for an all-zero reference matrix")
    return hamming_error(d, z) / d.nnz


def reconstruct(f) -> BinaryMatrix:
    """Union of a factorization's rank-1 tiles (plus transposes for symmetric variants).

    Accepts any object with .factors (list of (row IndexSet, col IndexSet)),
    .row_order / .col_order permutations (define the target shape) and
    .variant in {plain, cyclic, sym, cyclic-sym}.
    """
    n, m = len(f.row_order), len(f.col_order)
    dense = np.zeros((n, m), dtype=bool)
    symmetric = f.variant in ("sym", "cyclic-sym")
    for rows, cols in f.factors:
        r = np.fromiter(rows, dtype=np.int64, count=len(rows))
        c = np.fromiter(cols, dtype=np.int64, count=len(cols))
        if len(r) and len(c):
            dense[np.ix_(r, c)] = True
            if symmetric:
                dense[np.ix_(c, r)] = True
    return BinaryMatrix(dense)


# -- contiguity checks ----------------------------------------------------


def _positions(order: Sequence[int]) -> dict[int, int]:
    n = len(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order is not a permutation of 0..n-1")
    return {v: p for p, v in enumerate(order)}


def is_unimodal_under(sets: Iterable[Iterable[int]], order: Sequence[int]) -> bool:
    """True iff every set occupies consecutive positions under the order."""
    pos = _positions(order)
    for s in sets:
        ps = sorted(pos[u] for u in s)
        if ps and ps[-1] - ps[0] + 1 != len(ps):
            return False
    return True


def is_cyclic_under(sets: Iterable[Iterable[int]], order: Sequence[int]) -> bool:
    """True iff every set is consecutive modulo the universe size."""
    pos = _positions(order)
    n = len(pos)
    for s in sets:
        ps = sorted(pos[u] for u in s)
        if not ps or len(ps) == n:
            continue
        # count circular gaps; one arc <=> exactly one gap
        gaps = sum(1 for a, b in zip(ps, ps[1:]) if b - a > 1)
        gaps += 0 if (ps[0] + n) - ps[-1] <= 1 else 1
        if gaps > 1:
            return False
    return True
