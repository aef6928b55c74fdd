"""Morse complexes with coefficients in fiber chain complexes.

A datum lists critical points with their indices, one fiber complex per
point, and for each pair ``x -> y`` with ``|x| > |y|`` a transport operator of
shift ``|x| - |y| - 1`` (standing for transport along the chain of flow lines
from ``x`` to ``y``).  Over GF(2) the flow-line relation becomes

    d_y T(x,y) + T(x,y) d_x = sum over |x| > |z| > |y| of T(z,y) T(x,z)

and under it the total differential

    D(a@x) = (d a)@x + sum_y T(x,y)(a)@y

squares to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .chains import DegreeMap, GradedComplex, direct_sum_with_shifts, homology
from .gf2 import BitMatrix, basis_rows, rank_dense, solve_dense
from .spectral import FilteredComplex


@dataclass(frozen=True)
class CriticalPoint:
    id: str
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"Morse index of {self.id!r} must be nonnegative")
        if not self.id or "@" in self.id:
            raise ValueError(f"invalid critical point id {self.id!r}")


@dataclass(frozen=True)
class StructureWitness:
    source: str
    target: str
    degree: int
    generator: str


class StructureEquationError(ValueError):
    def __init__(self, witnesses: Sequence[StructureWitness]):
        self.witnesses = list(witnesses)
        w = self.witnesses[0]
        super().__init__(
            f"structure equation fails for {w.source}->{w.target} in degree {w.degree} at {w.generator!r}"
            + (f" (+{len(self.witnesses) - 1} more)" if len(self.witnesses) > 1 else "")
        )


@dataclass(frozen=True)
class EnrichedMorseDatum:
    points: tuple[CriticalPoint, ...]
    fibers: Mapping[str, GradedComplex]
    transport: Mapping[tuple[str, str], DegreeMap] = field(default_factory=dict)

    def __post_init__(self):
        points = tuple(sorted(self.points, key=lambda x: (x.index, x.id)))
        ids = [x.id for x in points]
        if len(set(ids)) != len(ids):
            raise ValueError("critical point ids must be unique")
        if set(self.fibers) != set(ids):
            missing = sorted(set(ids) - set(self.fibers))
            extra = sorted(set(self.fibers) - set(ids))
            raise ValueError(f"fibers must be given for exactly the critical points (missing {missing}, extra {extra})")
        index = {x.id: x.index for x in points}
        transport = {}
        for (x, y), t in sorted(self.transport.items()):
            if x not in index or y not in index:
                raise ValueError(f"transport {x}->{y} names an unknown critical point")
            if index[x] <= index[y]:
                raise ValueError(f"transport {x}->{y} must decrease the Morse index")
            if t.shift != index[x] - index[y] - 1:
                raise ValueError(f"transport {x}->{y} has shift {t.shift}, expected {index[x] - index[y] - 1}")
            if t.source != self.fibers[x] or t.target != self.fibers[y]:
                raise ValueError(f"transport {x}->{y} does not act between the fibers of {x} and {y}")
            if not t.is_zero():
                transport[(x, y)] = t
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "fibers", {k: self.fibers[k] for k in ids})
        object.__setattr__(self, "transport", transport)

    @property
    def index(self) -> dict[str, int]:
        return {x.id: x.index for x in self.points}

    @property
    def max_index(self) -> int:
        return max((x.index for x in self.points), default=0)

    def transport_map(self, x: str, y: str) -> DegreeMap:
        t = self.transport.get((x, y))
        if t is None:
            idx = self.index
            t = DegreeMap.zero(self.fibers[x], self.fibers[y], idx[x] - idx[y] - 1)
        return t


def check_structure_equation(datum: EnrichedMorseDatum) -> list[StructureWitness]:
    """Every (pair, degree, generator) where the structure equation fails; empty means it holds."""
    out = []
    for x in datum.points:
        for y in datum.points:
            if x.index <= y.index:
                continue
            fx, fy = datum.fibers[x.id], datum.fibers[y.id]
            t = datum.transport_map(x.id, y.id)
            mids = [z.id for z in datum.points if x.index > z.index > y.index]
            for d in fx.degrees:
                k = t.shift
                lhs = _kernels.matmul(fy.boundary_dense(d + k), t.component(d).dense)
                lhs ^= _kernels.matmul(t.component(d - 1).dense, fx.boundary_dense(d))
                for z in mids:
                    first = datum.transport_map(x.id, z)
                    second = datum.transport_map(z, y.id)
                    lhs ^= _kernels.matmul(second.component(d + first.shift).dense, first.component(d).dense)
                bad = np.flatnonzero(lhs.any(axis=0))
                if bad.size:
                    out.append(StructureWitness(x.id, y.id, d, fx.gens(d)[int(bad[0])]))
    return out


def total_generator(fiber_generator: str, point: str) -> str:
    return f"{fiber_generator}@{point}"


def build_total_complex(datum: EnrichedMorseDatum) -> FilteredComplex:
    """The enriched complex, filtered by Morse index.

    Raises :class:`StructureEquationError` when the datum is inconsistent.
    """
    witnesses = check_structure_equation(datum)
    if witnesses:
        raise StructureEquationError(witnesses)
    ids = [x.id for x in datum.points]
    base = direct_sum_with_shifts([(datum.fibers[x.id], x.index) for x in datum.points], tags=ids)
    entries = {d: set(m.entries) for d, m in base.differential.items()}
    for (x, y), t in datum.transport.items():
        fx, fy = datum.fibers[x], datum.fibers[y]
        px = datum.index[x]
        for d, m in t.components.items():
            n = d + px
            for r, c in m.entries:
                src = base.locate(total_generator(fx.gens(d)[c], x))[1]
                tgt = base.locate(total_generator(fy.gens(d + t.shift)[r], y))[1]
                entries.setdefault(n, set()).symmetric_difference_update({(tgt, src)})
    diff = {n: BitMatrix(base.dim(n - 1), base.dim(n), frozenset(e)) for n, e in entries.items()}
    total = GradedComplex(base.generators, diff)
    level = {g: datum.index[g.rsplit("@", 1)[1]] for d in total.degrees for g in total.gens(d)}
    return FilteredComplex(total, level)


@dataclass(frozen=True)
class E1Complex:
    """Columns of fiber homology per critical point with the induced first differential.

    ``complex`` is graded by total degree and its boundary is d_1;
    ``bidegree`` gives (p, q) for each generator.
    """

    complex: GradedComplex
    bidegree: dict[str, tuple[int, int]]

    def block(self, p: int, q: int) -> np.ndarray:
        """Matrix of d_1 restricted to (p, q) -> (p - 1, q)."""
        n = p + q
        c = self.complex
        src = [i for i, g in enumerate(c.gens(n)) if self.bidegree[g] == (p, q)]
        tgt = [i for i, g in enumerate(c.gens(n - 1)) if self.bidegree[g] == (p - 1, q)]
        return np.ascontiguousarray(c.boundary_dense(n)[np.ix_(tgt, src)])

    def dims(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for pq in self.bidegree.values():
            out[pq] = out.get(pq, 0) + 1
        return out

    def ranks(self) -> dict[tuple[int, int], int]:
        out = {}
        for p, q in self.dims():
            r = rank_dense(self.block(p, q))
            if r:
                out[(p, q)] = r
        return out


def e1_complex(datum: EnrichedMorseDatum) -> E1Complex:
    """E^1 from fiber homology, with d_1 induced by the shift-0 transports."""
    witnesses = check_structure_equation(datum)
    if witnesses:
        raise StructureEquationError(witnesses)
    reps = {}
    bounds = {}
    for x in datum.points:
        f = datum.fibers[x.id]
        h = homology(f)
        reps[x.id] = {q: np.array([v.dense for v in vs]) for q, vs in h.representatives.items()}
        bounds[x.id] = {q: basis_rows(np.ascontiguousarray(f.boundary_dense(q + 1).T)) for q in f.degrees}

    def name(x, q, i):
        return f"h{q}.{i}@{x}"

    gens: dict[int, list[str]] = {}
    bideg = {}
    for x in datum.points:
        for q, rows in reps[x.id].items():
            for i in range(len(rows)):
                gens.setdefault(x.index + q, []).append(name(x.id, q, i))
                bideg[name(x.id, q, i)] = (x.index, q)
    bdry: dict[str, list[str]] = {}
    for (x, y), t in datum.transport.items():
        if t.shift != 0:
            continue
        for q, rows in reps[x].items():
            ry = reps[y].get(q)
            if ry is None:
                continue
            images = _kernels.matmul(rows, np.ascontiguousarray(t.component(q).dense.T))
            basis = np.ascontiguousarray(np.vstack([ry, bounds[y][q]]).T)
            for i, img in enumerate(images):
                coords = solve_dense(basis, img)
                if coords is None:  # pragma: no cover - guarded by the chain-map part of the structure equation
                    raise AssertionError(f"transport {x}->{y} does not send cycles to cycles")
                bdry.setdefault(name(x, q, i), []).extend(name(y, q, j) for j in np.flatnonzero(coords[: len(ry)]))
    return E1Complex(GradedComplex.build(gens, bdry), bideg)


def e2_dims(datum: EnrichedMorseDatum) -> dict[tuple[int, int], int]:
    """Homology of the E^1 columns under d_1, i.e. base homology with fiber-homology coefficients."""
    e1 = e1_complex(datum)
    out = {}
    for (p, q), dim in e1.dims().items():
        ker = dim - rank_dense(e1.block(p, q))
        img = rank_dense(e1.block(p + 1, q))
        if ker - img:
            out[(p, q)] = ker - img
    return out
