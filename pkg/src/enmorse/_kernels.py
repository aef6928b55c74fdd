"""Dense GF(2) elimination kernels.

Two interchangeable backends operate on ``uint8`` arrays holding 0/1 entries:
a numba ``@njit`` path and a pure-numpy path.  The numba path is used when
numba imports cleanly and ``ENMORSE_DISABLE_NUMBA`` is unset (or ``0``).
Both backends are always importable so tests and the benchmark can compare
them directly.
"""

import os

import numpy as np

try:
    import numba as nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None


def _env_disabled():
    return os.environ.get("ENMORSE_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")


HAVE_NUMBA = nb is not None
USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def rref_numpy(a):
    """Reduced row echelon form over GF(2).

    Columns are scanned left to right; the pivot is the smallest row index at
    or below the current row holding a 1.  Returns ``(reduced, pivot_cols)``.
    The input is not modified.
    """
    r_mat = np.array(a, dtype=np.uint8, copy=True)
    nrows, ncols = r_mat.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.flatnonzero(r_mat[row:, col])
        if nz.size == 0:
            continue
        p = row + int(nz[0])
        if p != row:
            r_mat[[row, p]] = r_mat[[p, row]]
        hits = np.flatnonzero(r_mat[:, col])
        hits = hits[hits != row]
        if hits.size:
            r_mat[hits] ^= r_mat[row]
        pivots.append(col)
        row += 1
    return r_mat, np.asarray(pivots, dtype=np.int64)


def matmul_numpy(a, b):
    """Product of two 0/1 matrices reduced mod 2."""
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    return ((a.astype(np.int64) @ b.astype(np.int64)) & 1).astype(np.uint8)


if HAVE_NUMBA:

    @nb.njit(cache=True)
    def _rref_nb(r_mat):
        nrows, ncols = r_mat.shape
        pivots = np.empty(min(nrows, ncols), dtype=np.int64)
        row = 0
        for col in range(ncols):
            if row == nrows:
                break
            p = -1
            for i in range(row, nrows):
                if r_mat[i, col]:
                    p = i
                    break
            if p < 0:
                continue
            if p != row:
                for j in range(col, ncols):
                    tmp = r_mat[row, j]
                    r_mat[row, j] = r_mat[p, j]
                    r_mat[p, j] = tmp
            for i in range(nrows):
                if i != row and r_mat[i, col]:
                    for j in range(col, ncols):
                        r_mat[i, j] ^= r_mat[row, j]
            pivots[row] = col
            row += 1
        return pivots[:row]

    @nb.njit(cache=True)
    def _matmul_nb(a, b):
        n, k = a.shape
        m = b.shape[1]
        out = np.zeros((n, m), dtype=np.uint8)
        for i in range(n):
            for t in range(k):
                if a[i, t]:
                    for j in range(m):
                        out[i, j] ^= b[t, j]
        return out

    def rref_numba(a):
        r_mat = np.ascontiguousarray(a, dtype=np.uint8).copy()
        pivots = _rref_nb(r_mat)
        return r_mat, pivots

    def matmul_numba(a, b):
        return _matmul_nb(np.ascontiguousarray(a, dtype=np.uint8), np.ascontiguousarray(b, dtype=np.uint8))

else:  # pragma: no cover
    rref_numba = rref_numpy
    matmul_numba = matmul_numpy


if USE_NUMBA:
    rref = rref_numba
    matmul = matmul_numba
    BACKEND = "numba"
else:
    rref = rref_numpy
    matmul = matmul_numpy
    BACKEND = "numpy"
