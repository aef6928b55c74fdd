"""Finite-rank graded chain complexes over GF(2) and maps between them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .gf2 import BitMatrix, BitVector, independent_rows, kernel_dense, rank_dense, basis_rows
from . import _kernels


@dataclass(frozen=True)
class GradedComplex:
    """Generators per degree (sorted names) and boundary matrices ``C_d -> C_{d-1}``.

    Degrees without generators are dropped and missing boundaries are zero, so
    two complexes compare equal exactly when they have the same generators and
    the same nonzero boundary entries.
    """

    generators: Mapping[int, tuple[str, ...]] = field(default_factory=dict)
    differential: Mapping[int, BitMatrix] = field(default_factory=dict)

    def __post_init__(self):
        gens = {}
        for d in sorted(self.generators):
            names = tuple(self.generators[d])
            if not names:
                continue
            if list(names) != sorted(names):
                raise ValueError(f"generators in degree {d} must be sorted: {names}")
            gens[int(d)] = names
        seen = set()
        for names in gens.values():
            for n in names:
                if n in seen:
                    raise ValueError(f"duplicate generator name {n!r}")
                seen.add(n)
        diff = {}
        for d in sorted(self.differential):
            m = self.differential[d]
            shape = (len(gens.get(d - 1, ())), len(gens.get(d, ())))
            if m.shape != shape:
                raise ValueError(f"boundary in degree {d} has shape {m.shape}, expected {shape}")
            if not m.is_zero():
                diff[int(d)] = m
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "differential", diff)

    @classmethod
    def build(cls, generators: Mapping[int, Iterable[str]], boundary: Mapping[str, Iterable[str]] | None = None):
        """Build from generator names and a ``name -> [names in its boundary]`` table.

        Repeated names in a boundary cancel in pairs.
        """
        gens = {d: tuple(sorted(names)) for d, names in generators.items()}
        where = {n: (d, i) for d, names in gens.items() for i, n in enumerate(names)}
        entries: dict[int, set] = {}
        for src, targets in (boundary or {}).items():
            d, j = where[src]
            for t in targets:
                td, i = where[t]
                if td != d - 1:
                    raise ValueError(f"{t!r} is not in degree {d - 1} (boundary of {src!r})")
                entries.setdefault(d, set()).symmetric_difference_update({(i, j)})
        diff = {
            d: BitMatrix(len(gens.get(d - 1, ())), len(gens[d]), frozenset(e)) for d, e in entries.items()
        }
        return cls(gens, diff)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self.generators)

    @cached_property
    def _where(self) -> dict[str, tuple[int, int]]:
        return {n: (d, i) for d, names in self.generators.items() for i, n in enumerate(names)}

    def dim(self, d: int) -> int:
        return len(self.generators.get(d, ()))

    def gens(self, d: int) -> tuple[str, ...]:
        return self.generators.get(d, ())

    def locate(self, name: str) -> tuple[int, int]:
        """(degree, position) of a generator."""
        return self._where[name]

    def boundary(self, d: int) -> BitMatrix:
        m = self.differential.get(d)
        return m if m is not None else BitMatrix.zeros(self.dim(d - 1), self.dim(d))

    def boundary_dense(self, d: int) -> np.ndarray:
        return self.boundary(d).dense

    def vector(self, d: int, names: Iterable[str]) -> BitVector:
        pos = set()
        for n in names:
            nd, i = self._where[n]
            if nd != d:
                raise ValueError(f"{n!r} lives in degree {nd}, not {d}")
            pos ^= {i}
        return BitVector(self.dim(d), tuple(sorted(pos)))

    def names_of(self, d: int, v: BitVector) -> list[str]:
        return [self.generators[d][i] for i in v.support]

    def total_rank(self) -> int:
        return sum(len(v) for v in self.generators.values())


@dataclass(frozen=True)
class ComplexWitness:
    degree: int
    generator: str


@dataclass(frozen=True)
class Homology:
    dims: dict[int, int]
    representatives: dict[int, list[BitVector]]


@dataclass(frozen=True)
class DegreeMap:
    """A linear map ``C_d(source) -> C_{d+shift}(target)`` in every degree."""

    source: GradedComplex
    target: GradedComplex
    shift: int
    components: Mapping[int, BitMatrix] = field(default_factory=dict)

    def __post_init__(self):
        comps = {}
        for d in sorted(self.components):
            m = self.components[d]
            shape = (self.target.dim(d + self.shift), self.source.dim(d))
            if m.shape != shape:
                raise ValueError(f"component in degree {d} has shape {m.shape}, expected {shape}")
            if not m.is_zero():
                comps[int(d)] = m
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_images(cls, source: GradedComplex, target: GradedComplex, shift: int, images: Mapping[str, Iterable[str]]):
        """Build from ``source generator -> [target generators]``; unlisted generators map to zero."""
        entries: dict[int, set] = {}
        for src, targets in images.items():
            d, j = source.locate(src)
            for t in targets:
                td, i = target.locate(t)
                if td != d + shift:
                    raise ValueError(f"{src!r} (degree {d}) cannot map to {t!r} (degree {td}) with shift {shift}")
                entries.setdefault(d, set()).symmetric_difference_update({(i, j)})
        comps = {d: BitMatrix(target.dim(d + shift), source.dim(d), frozenset(e)) for d, e in entries.items()}
        return cls(source, target, shift, comps)

    @classmethod
    def identity(cls, c: GradedComplex) -> DegreeMap:
        return cls(c, c, 0, {d: BitMatrix.identity(c.dim(d)) for d in c.degrees})

    @classmethod
    def zero(cls, source: GradedComplex, target: GradedComplex, shift: int) -> DegreeMap:
        return cls(source, target, shift, {})

    def component(self, d: int) -> BitMatrix:
        m = self.components.get(d)
        return m if m is not None else BitMatrix.zeros(self.target.dim(d + self.shift), self.source.dim(d))

    def is_zero(self) -> bool:
        return not self.components

    def then(self, other: DegreeMap) -> DegreeMap:
        """``other`` after ``self``."""
        comps = {}
        for d in self.source.degrees:
            a = self.component(d)
            b = other.component(d + self.shift)
            if not a.is_zero() and not b.is_zero():
                comps[d] = BitMatrix.from_dense(_kernels.matmul(b.dense, a.dense))
        return DegreeMap(self.source, other.target, self.shift + other.shift, comps)


def validate_complex(c: GradedComplex) -> ComplexWitness | None:
    """Return ``None`` when the boundary squares to zero, else the first failing (degree, generator)."""
    for d in c.degrees:
        sq = _kernels.matmul(c.boundary_dense(d - 1), c.boundary_dense(d))
        bad = np.flatnonzero(sq.any(axis=0))
        if bad.size:
            return ComplexWitness(d, c.gens(d)[int(bad[0])])
    return None


def homology(c: GradedComplex) -> Homology:
    """Homology dimensions (nonzero degrees only) with cycle representatives.

    Representatives are kernel basis vectors picked greedily, in order, when
    they are independent of the boundaries and of the ones already picked.
    """
    witness = validate_complex(c)
    if witness is not None:
        raise ValueError(f"boundary does not square to zero (degree {witness.degree}, {witness.generator!r})")
    dims, reps = {}, {}
    for d in c.degrees:
        cycles = kernel_dense(c.boundary_dense(d))
        bounds = basis_rows(np.ascontiguousarray(c.boundary_dense(d + 1).T))
        if len(cycles) == 0:
            continue
        chosen = independent_rows(cycles, bounds)
        if chosen.any():
            dims[d] = int(chosen.sum())
            reps[d] = [BitVector.from_dense(v) for v in cycles[chosen]]
    return Homology(dims, reps)


def homology_dims(c: GradedComplex) -> dict[int, int]:
    return homology(c).dims


def boundary_rank(c: GradedComplex, d: int) -> int:
    return rank_dense(c.boundary_dense(d))


def validate_chain_map(f: DegreeMap) -> ComplexWitness | None:
    """``None`` iff ``d_target f + f d_source = 0`` in every degree (GF(2), any shift)."""
    s, t, k = f.source, f.target, f.shift
    for d in s.degrees:
        lhs = _kernels.matmul(t.boundary_dense(d + k), f.component(d).dense)
        rhs = _kernels.matmul(f.component(d - 1).dense, s.boundary_dense(d))
        bad = np.flatnonzero((lhs ^ rhs).any(axis=0))
        if bad.size:
            return ComplexWitness(d, s.gens(d)[int(bad[0])])
    return None


def tensor_product(c: GradedComplex, d: GradedComplex, sep: str = "*") -> GradedComplex:
    """Tensor product; the generator ``x*y`` has boundary ``dx*y + x*dy``."""
    gens: dict[int, list[str]] = {}
    bdry: dict[str, list[str]] = {}
    for i in c.degrees:
        for x in c.gens(i):
            dx = c.names_of(i - 1, c.boundary(i).column(c.locate(x)[1]))
            for j in d.degrees:
                for y in d.gens(j):
                    name = f"{x}{sep}{y}"
                    gens.setdefault(i + j, []).append(name)
                    dy = d.names_of(j - 1, d.boundary(j).column(d.locate(y)[1]))
                    bdry[name] = [f"{a}{sep}{y}" for a in dx] + [f"{x}{sep}{b}" for b in dy]
    return GradedComplex.build(gens, bdry)


def direct_sum_with_shifts(
    parts: Sequence[tuple[GradedComplex, int]], tags: Sequence[str] | None = None
) -> GradedComplex:
    """Block sum of shifted copies; part ``i``'s generator ``g`` becomes ``g@tag_i``.

    Tags default to the part index.  Only the internal differentials appear.
    """
    if tags is None:
        tags = [str(i) for i in range(len(parts))]
    if len(tags) != len(parts) or len(set(tags)) != len(tags):
        raise ValueError("need one distinct tag per part")
    gens: dict[int, list[str]] = {}
    bdry: dict[str, list[str]] = {}
    for (c, shift), tag in zip(parts, tags):
        for d in c.degrees:
            col = c.boundary(d)
            for j, g in enumerate(c.gens(d)):
                gens.setdefault(d + shift, []).append(f"{g}@{tag}")
                bdry[f"{g}@{tag}"] = [f"{h}@{tag}" for h in c.names_of(d - 1, col.column(j))]
    return GradedComplex.build(gens, bdry)
