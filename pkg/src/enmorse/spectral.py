"""Spectral sequence of a finitely filtered complex over GF(2).

Pages are computed straight from the cycle/boundary description

    Z^r_p = {x in F_p C : dx in F_{p-r} C}
    E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1})

in each total degree, with ``Z^r_p = F_p C`` for ``r <= 0``.  Each page keeps
explicit representatives, and ``d_r`` is read off by writing the boundary of
a representative in the target page basis.  Bigrading is ``(p, q)`` with
``p`` the filtration level and ``p + q`` the total degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from . import _kernels
from .chains import GradedComplex, homology_dims
from .gf2 import BitMatrix, BitVector, basis_rows, independent_rows, kernel_dense, rank_dense, solve_dense

Bidegree = tuple[int, int]


@dataclass(frozen=True)
class FiltrationWitness:
    generator: str
    target: str


@dataclass(frozen=True)
class FilteredComplex:
    complex: GradedComplex
    level: Mapping[str, int]

    def __post_init__(self):
        names = set(self.complex._where)
        if set(self.level) != names:
            missing = sorted(names - set(self.level))
            extra = sorted(set(self.level) - names)
            raise ValueError(f"filtration levels must cover exactly the generators (missing {missing}, extra {extra})")

    @cached_property
    def levels(self) -> dict[int, np.ndarray]:
        return {d: np.array([self.level[g] for g in self.complex.gens(d)], dtype=np.int64) for d in self.complex.degrees}

    @property
    def min_level(self) -> int:
        return min(self.level.values(), default=0)

    @property
    def max_level(self) -> int:
        return max(self.level.values(), default=0)

    @property
    def width(self) -> int:
        return self.max_level - self.min_level

    def degree_levels(self, d: int) -> np.ndarray:
        return self.levels.get(d, np.zeros(0, dtype=np.int64))


@dataclass(frozen=True)
class SpectralPage:
    r: int
    dims: dict[Bidegree, int]
    representatives: dict[Bidegree, list[BitVector]]
    differentials: dict[Bidegree, BitMatrix] = field(default_factory=dict)

    def target(self, pq: Bidegree) -> Bidegree:
        p, q = pq
        return (p - self.r, q + self.r - 1)

    def differential_ranks(self) -> dict[Bidegree, int]:
        ranks = {pq: rank_dense(m.dense) for pq, m in self.differentials.items()}
        return {pq: k for pq, k in ranks.items() if k}

    def total_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (p, q), n in self.dims.items():
            out[p + q] = out.get(p + q, 0) + n
        return out


def validate_filtration(fc: FilteredComplex) -> FiltrationWitness | None:
    """``None`` iff no boundary raises the filtration level."""
    c = fc.complex
    for d in c.degrees:
        m = c.boundary_dense(d)
        lv_src, lv_tgt = fc.degree_levels(d), fc.degree_levels(d - 1)
        for j in range(m.shape[1]):
            rows = np.flatnonzero(m[:, j])
            bad = rows[lv_tgt[rows] > lv_src[j]]
            if bad.size:
                return FiltrationWitness(c.gens(d)[j], c.gens(d - 1)[int(bad[0])])
    return None


def _require_filtration(fc: FilteredComplex):
    w = validate_filtration(fc)
    if w is not None:
        raise ValueError(f"boundary of {w.generator!r} reaches {w.target!r} at a higher filtration level")


class _PageBuilder:
    def __init__(self, fc: FilteredComplex):
        self.fc = fc
        self.c = fc.complex
        self._z: dict = {}

    def zeros(self, n: int) -> np.ndarray:
        return np.zeros((0, self.c.dim(n)), dtype=np.uint8)

    def z(self, r: int, p: int, n: int) -> np.ndarray:
        """Rows spanning Z^r_p in total degree n."""
        key = (r, p, n)
        if key in self._z:
            return self._z[key]
        lv = self.fc.degree_levels(n)
        dim = len(lv)
        cols = np.flatnonzero(lv <= p)
        if r <= 0:
            out = np.zeros((len(cols), dim), dtype=np.uint8)
            out[np.arange(len(cols)), cols] = 1
        else:
            rows = np.flatnonzero(self.fc.degree_levels(n - 1) > p - r)
            sub = self.c.boundary_dense(n)[np.ix_(rows, cols)]
            k = kernel_dense(np.ascontiguousarray(sub))
            out = np.zeros((len(k), dim), dtype=np.uint8)
            out[:, cols] = k
        self._z[key] = out
        return out

    def b(self, r: int, p: int, n: int) -> np.ndarray:
        """Rows spanning Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1} in total degree n."""
        lower = self.z(r - 1, p - 1, n)
        upper = self.z(r - 1, p + r - 1, n + 1)
        if len(upper):
            upper = _kernels.matmul(upper, np.ascontiguousarray(self.c.boundary_dense(n + 1).T))
        else:
            upper = self.zeros(n)
        return basis_rows(np.vstack([lower, upper]).astype(np.uint8))


def _bidegrees(fc: FilteredComplex):
    for n in fc.complex.degrees:
        for p in range(fc.min_level, fc.max_level + 1):
            yield p, n


def page(fc: FilteredComplex, r: int) -> SpectralPage:
    """The page E^r with representatives and the differential d_r."""
    if r < 0:
        raise ValueError("page index must be nonnegative")
    _require_filtration(fc)
    pb = _PageBuilder(fc)
    dims, reps, denoms = {}, {}, {}
    for p, n in _bidegrees(fc):
        z = pb.z(r, p, n)
        if not len(z):
            continue
        bnd = pb.b(r, p, n)
        chosen = independent_rows(z, bnd)
        if chosen.any():
            dims[(p, n - p)] = int(chosen.sum())
            reps[(p, n - p)] = z[chosen]
            denoms[(p, n - p)] = bnd
    c = fc.complex
    diffs = {}
    for (p, q), rows in reps.items():
        n = p + q
        tgt = (p - r, q + r - 1)
        images = _kernels.matmul(rows, np.ascontiguousarray(c.boundary_dense(n).T))
        if tgt not in reps:
            diffs[(p, q)] = BitMatrix.zeros(0, len(rows))
            continue
        k = len(reps[tgt])
        basis = np.ascontiguousarray(np.vstack([reps[tgt], denoms[tgt]]).T)
        cols = []
        for img in images:
            x = solve_dense(basis, img)
            if x is None:  # pragma: no cover - boundary of a representative always lands in Z^r
                raise AssertionError(f"d_{r} image from {(p, q)} escaped Z^{r}")
            cols.append(x[:k])
        diffs[(p, q)] = BitMatrix.from_dense(np.array(cols, dtype=np.uint8).T.reshape(k, len(rows)))
    return SpectralPage(
        r,
        dims,
        {pq: [BitVector.from_dense(v) for v in rows] for pq, rows in reps.items()},
        diffs,
    )


def page_differential(fc: FilteredComplex, r: int) -> dict[Bidegree, BitMatrix]:
    return page(fc, r).differentials


def infinity_page(fc: FilteredComplex) -> tuple[SpectralPage, int]:
    """E^infinity together with the first page index ``r >= 1`` from which dims stay fixed.

    d_r vanishes once r exceeds the filtration width, so E^{width+1} is
    already the limit; that bound is the stabilization certificate.
    """
    last = fc.width + 1
    final = page(fc, last)
    r_star = last
    for r in range(last - 1, 0, -1):
        if page(fc, r).dims != final.dims:
            break
        r_star = r
    return final, r_star


def associated_graded_of_homology(fc: FilteredComplex) -> dict[Bidegree, int]:
    """Dimensions of F_p H_n / F_{p-1} H_n, computed from cycles and boundaries directly."""
    _require_filtration(fc)
    c = fc.complex
    out = {}
    for n in c.degrees:
        lv = fc.degree_levels(n)
        bounds = basis_rows(np.ascontiguousarray(c.boundary_dense(n + 1).T))
        base = rank_dense(bounds)
        prev = 0
        for p in range(fc.min_level, fc.max_level + 1):
            cols = np.flatnonzero(lv <= p)
            k = kernel_dense(np.ascontiguousarray(c.boundary_dense(n)[:, cols]))
            cyc = np.zeros((len(k), len(lv)), dtype=np.uint8)
            cyc[:, cols] = k
            here = rank_dense(np.vstack([cyc, bounds])) - base
            if here > prev:
                out[(p, n - p)] = here - prev
            prev = here
    return out


def single_level(c: GradedComplex, p: int = 0) -> FilteredComplex:
    return FilteredComplex(c, {g: p for d in c.degrees for g in c.gens(d)})


def convergence_holds(fc: FilteredComplex) -> bool:
    """E^infinity matches the associated graded and sums to the homology in each degree."""
    inf, _ = infinity_page(fc)
    return inf.dims == associated_graded_of_homology(fc) and inf.total_dims() == homology_dims(fc.complex)
