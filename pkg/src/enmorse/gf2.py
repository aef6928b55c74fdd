"""Sparse vectors and matrices over GF(2) with deterministic elimination.

Values store only the positions carrying a 1.  All elimination goes through
the dense kernels in :mod:`enmorse._kernels`, which use the smallest-index
pivot rule, so every basis returned here is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels


class InconsistentSystem(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in the column space."""


@dataclass(frozen=True)
class BitVector:
    length: int
    support: tuple[int, ...] = ()

    def __post_init__(self):
        support = tuple(int(i) for i in self.support)
        if any(b <= a for a, b in zip(support, support[1:])):
            raise ValueError(f"support must be strictly increasing: {support}")
        if support and (support[0] < 0 or support[-1] >= self.length):
            raise ValueError(f"support {support} out of range for length {self.length}")
        object.__setattr__(self, "support", support)

    @classmethod
    def from_dense(cls, arr) -> BitVector:
        arr = np.asarray(arr)
        return cls(arr.shape[0], tuple(int(i) for i in np.flatnonzero(arr & 1)))

    @classmethod
    def unit(cls, length: int, i: int) -> BitVector:
        return cls(length, (i,))

    @cached_property
    def dense(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.uint8)
        out[list(self.support)] = 1
        out.flags.writeable = False
        return out

    def __add__(self, other: BitVector) -> BitVector:
        if other.length != self.length:
            raise ValueError("length mismatch")
        return BitVector(self.length, tuple(sorted(set(self.support) ^ set(other.support))))

    def __bool__(self):
        return bool(self.support)


@dataclass(frozen=True)
class BitMatrix:
    rows: int
    cols: int
    entries: frozenset = frozenset()

    def __post_init__(self):
        entries = frozenset((int(r), int(c)) for r, c in self.entries)
        for r, c in entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry ({r}, {c}) outside a {self.rows}x{self.cols} matrix")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, frozenset((i, i) for i in range(n)))

    @classmethod
    def from_dense(cls, arr) -> BitMatrix:
        arr = np.asarray(arr)
        rr, cc = np.nonzero(arr & 1)
        return cls(arr.shape[0], arr.shape[1], frozenset(zip(rr.tolist(), cc.tolist())))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[BitVector]) -> BitMatrix:
        return cls(rows, len(columns), frozenset((r, j) for j, v in enumerate(columns) for r in v.support))

    @cached_property
    def dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        if self.entries:
            rr, cc = zip(*self.entries)
            out[list(rr), list(cc)] = 1
        out.flags.writeable = False
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not self.entries

    def column(self, j: int) -> BitVector:
        return BitVector(self.rows, tuple(sorted(r for r, c in self.entries if c == j)))

    def transpose(self) -> BitMatrix:
        return BitMatrix(self.cols, self.rows, frozenset((c, r) for r, c in self.entries))

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return BitMatrix(self.rows, self.cols, self.entries ^ other.entries)

    def __matmul__(self, other):
        if isinstance(other, BitVector):
            if other.length != self.cols:
                raise ValueError("length mismatch")
            return BitVector.from_dense(_kernels.matmul(self.dense, other.dense.reshape(-1, 1)).ravel())
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        return BitMatrix.from_dense(_kernels.matmul(self.dense, other.dense))


# dense helpers shared by the homology and spectral code


def rank_dense(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(_kernels.rref(a)[1])


def kernel_dense(a: np.ndarray) -> np.ndarray:
    """Kernel basis as the rows of a ``(k, cols)`` array, one row per free column."""
    nrows, ncols = a.shape
    if nrows == 0:
        return np.eye(ncols, dtype=np.uint8)
    r_mat, pivots = _kernels.rref(a)
    pivot_set = set(pivots.tolist())
    free = [c for c in range(ncols) if c not in pivot_set]
    out = np.zeros((len(free), ncols), dtype=np.uint8)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, pc in enumerate(pivots):
            out[k, pc] = r_mat[i, f]
    return out


def solve_dense(a: np.ndarray, b: np.ndarray):
    """One solution of ``a x = b`` with free variables zero, or ``None``."""
    nrows, ncols = a.shape
    aug = np.zeros((nrows, ncols + 1), dtype=np.uint8)
    aug[:, :ncols] = a
    aug[:, ncols] = b
    r_mat, pivots = _kernels.rref(aug)
    if len(pivots) and pivots[-1] == ncols:
        return None
    x = np.zeros(ncols, dtype=np.uint8)
    for i, pc in enumerate(pivots):
        x[pc] = r_mat[i, ncols]
    return x


def independent_rows(vectors: np.ndarray, base: np.ndarray | None = None) -> np.ndarray:
    """Greedy in-order selection of rows of ``vectors`` independent modulo ``base``.

    Returns the boolean mask of selected rows.
    """
    n = vectors.shape[1] if vectors.ndim == 2 else 0
    chosen = np.zeros(len(vectors), dtype=bool)
    span = np.zeros((0, n), dtype=np.uint8) if base is None else np.asarray(base, dtype=np.uint8).reshape(-1, n)
    current = rank_dense(span)
    for i, v in enumerate(vectors):
        trial = np.vstack([span, v[None, :]])
        r = rank_dense(trial)
        if r > current:
            chosen[i] = True
            span, current = trial, r
    return chosen


def basis_rows(vectors: np.ndarray) -> np.ndarray:
    """A deterministic basis of the row span (nonzero rows of the RREF)."""
    if len(vectors) == 0:
        return vectors.reshape(0, vectors.shape[1] if vectors.ndim == 2 else 0)
    r_mat, pivots = _kernels.rref(vectors)
    return r_mat[: len(pivots)]


def inverse_dense(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("square matrix required")
    if n == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    aug = np.hstack([a.astype(np.uint8), np.eye(n, dtype=np.uint8)])
    r_mat, pivots = _kernels.rref(aug)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise ValueError("matrix is singular over GF(2)")
    return np.ascontiguousarray(r_mat[:, n:])


def _stack(vectors: Sequence[BitVector], length: int | None = None) -> np.ndarray:
    if not vectors:
        return np.zeros((0, length or 0), dtype=np.uint8)
    lengths = {v.length for v in vectors}
    if len(lengths) != 1 or (length is not None and lengths != {length}):
        raise ValueError("all vectors must have the same length")
    return np.vstack([v.dense for v in vectors])


# public operations


def rank(m: BitMatrix) -> int:
    """GF(2) rank of ``m``."""
    return rank_dense(m.dense)


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    """Basis of the null space, one vector per non-pivot column in increasing order."""
    return [BitVector.from_dense(row) for row in kernel_dense(m.dense)]


def solve(m: BitMatrix, b: BitVector) -> BitVector:
    """Return some ``x`` with ``m @ x == b``; free variables are set to zero.

    Raises :class:`InconsistentSystem` if ``b`` is not in the column space.
    """
    if b.length != m.rows:
        raise ValueError(f"right-hand side has length {b.length}, expected {m.rows}")
    x = solve_dense(m.dense, b.dense)
    if x is None:
        raise InconsistentSystem("right-hand side is not in the column space")
    return BitVector.from_dense(x)


def relative_rank(generators: Iterable[BitVector], subspace: Iterable[BitVector]) -> int:
    """dim(span(generators + subspace) / span(subspace))."""
    generators, subspace = list(generators), list(subspace)
    lengths = {v.length for v in generators + subspace}
    if len(lengths) > 1:
        raise ValueError("all vectors must have the same length")
    if not lengths:
        return 0
    n = lengths.pop()
    s = _stack(subspace, n)
    return rank_dense(np.vstack([_stack(generators, n), s])) - rank_dense(s)
