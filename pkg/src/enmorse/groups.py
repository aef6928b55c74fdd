"""Finite groups, monodromy local systems and group-algebra cellular complexes.

Local systems act in path order: the operator for ``g`` followed by the one
for ``h`` equals the operator for ``gh``.  With that convention the regular
system is right multiplication ``k -> k h`` and the conjugation system is
``k -> h^-1 k h``, and both are homomorphisms in the same sense, which is
what makes them comparable by :func:`systems_isomorphic`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .chains import DegreeMap, GradedComplex, homology_dims, validate_complex
from .gf2 import BitMatrix, inverse_dense, kernel_dense, rank_dense, solve_dense
from .morse import CriticalPoint, EnrichedMorseDatum


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its element names and full multiplication table."""

    elements: tuple[str, ...]
    table: Mapping[tuple[str, str], str]

    def __post_init__(self):
        els = tuple(self.elements)
        if not els or len(set(els)) != len(els):
            raise ValueError("group elements must be distinct and nonempty")
        table = {(a, b): self.table[(a, b)] for a in els for b in els}
        if any(v not in els for v in table.values()):
            raise ValueError("multiplication table leaves the group")
        units = [e for e in els if all(table[(e, a)] == a == table[(a, e)] for a in els)]
        if len(units) != 1:
            raise ValueError("multiplication table has no identity")
        for a, b, c in itertools.product(els, repeat=3):
            if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
                raise ValueError(f"multiplication is not associative at ({a}, {b}, {c})")
        for a in els:
            if not any(table[(a, b)] == units[0] for b in els):
                raise ValueError(f"{a!r} has no inverse")
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_rows(cls, elements: Sequence[str], rows: Sequence[Sequence[str]]) -> FiniteGroup:
        """``rows[i][j]`` is ``elements[i] * elements[j]``."""
        if len(rows) != len(elements) or any(len(r) != len(elements) for r in rows):
            raise ValueError("multiplication table must be square in the number of elements")
        return cls(tuple(elements), {(a, b): rows[i][j] for i, a in enumerate(elements) for j, b in enumerate(elements)})

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> str:
        return next(e for e in self.elements if all(self.table[(e, a)] == a for a in self.elements))

    def mul(self, a: str, b: str) -> str:
        return self.table[(a, b)]

    def inv(self, a: str) -> str:
        e = self.identity
        return next(b for b in self.elements if self.table[(a, b)] == e)

    def rows(self) -> list[list[str]]:
        return [[self.mul(a, b) for b in self.elements] for a in self.elements]

    def is_abelian(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a) for a in self.elements for b in self.elements)


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


def cyclic_group(n: int) -> FiniteGroup:
    """Elements ``1, t, t^2, ...``."""
    if n < 1:
        raise ValueError("group order must be positive")
    names = ["1", "t"] + [f"t^{k}" for k in range(2, n)]
    names = names[:n]
    return FiniteGroup(tuple(names), {(names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)})


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of ``0..n-1`` in one-line notation; ``(a*b)(i) = a(b(i))``."""
    perms = ["".join(map(str, p)) for p in itertools.permutations(range(n))]
    table = {}
    for a in perms:
        for b in perms:
            table[(a, b)] = "".join(a[int(b[i])] for i in range(n))
    return FiniteGroup(tuple(perms), table)


@dataclass(frozen=True)
class MonodromyLocalSystem:
    group: FiniteGroup
    fiber: GradedComplex
    action: Mapping[str, DegreeMap] = field(default_factory=dict)

    def __post_init__(self):
        if self.fiber.differential:
            raise ValueError("the fiber of a monodromy system is a graded vector space (zero differential)")
        if set(self.action) != set(self.group.elements):
            raise ValueError("action must be given for every group element")
        for g, m in self.action.items():
            if m.shift != 0 or m.source != self.fiber or m.target != self.fiber:
                raise ValueError(f"action of {g!r} must be a degree-0 map of the fiber")
        for d in self.fiber.degrees:
            ident = np.eye(self.fiber.dim(d), dtype=np.uint8)
            if not np.array_equal(self.matrix(self.group.identity, d), ident):
                raise ValueError("the identity element must act trivially")
            for g in self.group.elements:
                for h in self.group.elements:
                    lhs = self.matrix(self.group.mul(g, h), d)
                    rhs = _kernels.matmul(self.matrix(h, d), self.matrix(g, d))
                    if not np.array_equal(lhs, rhs):
                        raise ValueError(f"action is not compatible with the product {g}*{h} in degree {d}")

    def matrix(self, g: str, d: int) -> np.ndarray:
        return self.action[g].component(d).dense

    def expand(self, coefficients: Iterable[str], d: int) -> np.ndarray:
        """Sum of the operators of the listed elements (a group-algebra element) in degree d."""
        n = self.fiber.dim(d)
        out = np.zeros((n, n), dtype=np.uint8)
        for g in coefficients:
            out ^= self.matrix(g, d)
        return out

    @property
    def rank(self) -> int:
        return self.fiber.total_rank()


def _permutation_system(g: FiniteGroup, move) -> MonodromyLocalSystem:
    fiber = GradedComplex({0: tuple(sorted(g.elements))})
    action = {h: DegreeMap.from_images(fiber, fiber, 0, {k: [move(k, h)] for k in g.elements}) for h in g.elements}
    return MonodromyLocalSystem(g, fiber, action)


def left_regular_system(g: FiniteGroup) -> MonodromyLocalSystem:
    """The group algebra in degree 0 with its regular action (``k -> k h`` in path order)."""
    return _permutation_system(g, lambda k, h: g.mul(k, h))


def conjugation_system(g: FiniteGroup) -> MonodromyLocalSystem:
    """The group algebra in degree 0 with ``h`` acting by ``k -> h^-1 k h``."""
    return _permutation_system(g, lambda k, h: g.mul(g.mul(g.inv(h), k), h))


def trivial_system(g: FiniteGroup, rank: int = 1) -> MonodromyLocalSystem:
    fiber = GradedComplex({0: tuple(sorted(f"v{i}" for i in range(rank)))})
    return MonodromyLocalSystem(g, fiber, {h: DegreeMap.identity(fiber) for h in g.elements})


def end_mon_system(g: FiniteGroup) -> MonodromyLocalSystem:
    """Span of the regular operators inside End of the group algebra, acted on by conjugation.

    ``h`` sends an operator ``phi`` to ``rho(h) phi rho(h)^-1``.
    """
    reg = left_regular_system(g)
    ops = {k: reg.matrix(k, 0) for k in g.elements}
    names = sorted(f"rho[{k}]" for k in g.elements)
    by_name = {f"rho[{k}]": k for k in g.elements}
    flat = np.array([ops[by_name[n]].ravel() for n in names], dtype=np.uint8)
    if rank_dense(flat) != len(names):  # pragma: no cover - regular operators are always independent
        raise AssertionError("regular operators are dependent")
    fiber = GradedComplex({0: tuple(names)})
    basis = np.ascontiguousarray(flat.T)
    action = {}
    for h in g.elements:
        rho_h = ops[h]
        rho_h_inv = inverse_dense(rho_h)
        images = {}
        for n in names:
            conj = _kernels.matmul(_kernels.matmul(rho_h, ops[by_name[n]]), rho_h_inv)
            coords = solve_dense(basis, conj.ravel())
            if coords is None:  # pragma: no cover - the span is closed under conjugation
                raise AssertionError("conjugate left the span of the regular operators")
            images[n] = [names[i] for i in np.flatnonzero(coords)]
        action[h] = DegreeMap.from_images(fiber, fiber, 0, images)
    return MonodromyLocalSystem(g, fiber, action)


def _intertwiner_space(a: MonodromyLocalSystem, b: MonodromyLocalSystem, d: int) -> np.ndarray:
    na, nb = a.fiber.dim(d), b.fiber.dim(d)
    blocks = []
    for h in a.group.elements:
        blocks.append(np.kron(np.eye(nb, dtype=np.uint8), a.matrix(h, d).T) ^ np.kron(b.matrix(h, d), np.eye(na, dtype=np.uint8)))
    return kernel_dense(np.ascontiguousarray(np.vstack(blocks) & 1).astype(np.uint8))


def _invertible_in_span(basis: np.ndarray, n: int) -> np.ndarray | None:
    if n == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    for size in range(1, len(basis) + 1):
        for combo in itertools.combinations(range(len(basis)), size):
            u = np.bitwise_xor.reduce(basis[list(combo)], axis=0).reshape(n, n)
            if rank_dense(u) == n:
                return u
    return None


def systems_isomorphic(a: MonodromyLocalSystem, b: MonodromyLocalSystem) -> DegreeMap | None:
    """An invertible ``U`` with ``U a(h) = b(h) U`` for all ``h``, or ``None``.

    The intertwiners form the kernel of a linear system; invertible elements
    are searched among sums of its basis vectors, smallest sums first.
    """
    if a.group != b.group:
        raise ValueError("systems over different groups")
    if set(a.fiber.degrees) != set(b.fiber.degrees):
        return None
    comps = {}
    for d in a.fiber.degrees:
        n = a.fiber.dim(d)
        if b.fiber.dim(d) != n:
            return None
        ident = np.eye(n, dtype=np.uint8)
        if all(np.array_equal(a.matrix(h, d), b.matrix(h, d)) for h in a.group.elements):
            u = ident
        else:
            u = _invertible_in_span(_intertwiner_space(a, b, d), n)
            if u is None:
                return None
        comps[d] = BitMatrix.from_dense(u)
    return DegreeMap(a.fiber, b.fiber, 0, comps)


@dataclass(frozen=True)
class GroupAlgebraComplex:
    """Free modules over GF(2)[G] with boundary entries given as sets of group elements.

    ``boundary[d][(i, j)]`` is the coefficient of cell ``i`` of degree ``d-1``
    in the boundary of cell ``j`` of degree ``d``.
    """

    group: FiniteGroup
    ranks: Mapping[int, int]
    boundary: Mapping[int, Mapping[tuple[int, int], frozenset]] = field(default_factory=dict)

    def __post_init__(self):
        ranks = {int(d): int(n) for d, n in sorted(self.ranks.items()) if n}
        bdry = {}
        for d, entries in sorted(self.boundary.items()):
            clean = {}
            for (i, j), coeff in entries.items():
                if not (0 <= i < ranks.get(d - 1, 0) and 0 <= j < ranks.get(d, 0)):
                    raise ValueError(f"boundary entry ({i}, {j}) out of range in degree {d}")
                coeff = _reduce_coefficients(coeff)
                if not set(coeff) <= set(self.group.elements):
                    raise ValueError(f"unknown group element in {sorted(coeff)}")
                if coeff:
                    clean[(i, j)] = coeff
            if clean:
                bdry[int(d)] = clean
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "boundary", bdry)
        expanded = expand_complex(self, left_regular_system(self.group))
        if validate_complex(expanded) is not None:
            raise ValueError("group-algebra boundaries do not compose to zero")


def _reduce_coefficients(coeff: Iterable[str]) -> frozenset:
    out: set = set()
    for g in coeff:
        out ^= {g}
    return frozenset(out)


def expand_complex(c: GroupAlgebraComplex, s: MonodromyLocalSystem) -> GradedComplex:
    """GF(2) complex obtained by replacing each coefficient with its operator on the fiber."""
    if c.group != s.group:
        raise ValueError("complex and local system are over different groups")
    gens: dict[int, list[str]] = {}
    bdry: dict[str, list[str]] = {}

    def name(d, i, b):
        return f"c{d}.{i}|{b}"

    for d, n in c.ranks.items():
        for q in s.fiber.degrees:
            for i in range(n):
                for b in s.fiber.gens(q):
                    gens.setdefault(d + q, []).append(name(d, i, b))
    for d, entries in c.boundary.items():
        for q in s.fiber.degrees:
            basis = s.fiber.gens(q)
            for (i, j), coeff in entries.items():
                block = s.expand(coeff, q)
                for col, b in enumerate(basis):
                    bdry.setdefault(name(d, j, b), []).extend(name(d - 1, i, basis[r]) for r in np.flatnonzero(block[:, col]))
    return GradedComplex.build(gens, bdry)


def cellular_local_homology(c: GroupAlgebraComplex, s: MonodromyLocalSystem) -> dict[int, int]:
    """Homology of ``c`` with coefficients in the local system ``s``."""
    return homology_dims(expand_complex(c, s))


def group_algebra_complex(
    points: Sequence[CriticalPoint], index1_transports: Mapping[tuple[str, str], Iterable[str]], group: FiniteGroup
) -> GroupAlgebraComplex:
    """Cells are the critical points (ordered by id within an index)."""
    cells: dict[int, list[str]] = {}
    for x in sorted(points, key=lambda x: (x.index, x.id)):
        cells.setdefault(x.index, []).append(x.id)
    where = {x: (d, i) for d, names in cells.items() for i, x in enumerate(names)}
    bdry: dict[int, dict] = {}
    for (x, y), coeff in index1_transports.items():
        dx, j = where[x]
        dy, i = where[y]
        if dx - dy != 1:
            raise ValueError(f"transport {x}->{y} must join consecutive indices")
        bdry.setdefault(dx, {})[(i, j)] = frozenset(coeff)
    return GroupAlgebraComplex(group, {d: len(v) for d, v in cells.items()}, bdry)


class MonodromyError(ValueError):
    def __init__(self, pair: tuple[str, str], message: str):
        self.pair = pair
        super().__init__(f"{pair[0]}->{pair[1]}: {message}")


def datum_from_monodromy(
    points: Sequence[CriticalPoint],
    index1_transports: Mapping[tuple[str, str], Iterable[str]],
    s: MonodromyLocalSystem,
) -> EnrichedMorseDatum:
    """Enriched datum whose fibers are all ``s.fiber`` and whose only transports join consecutive indices.

    Each transport is the sum of the operators of the listed group elements.
    """
    if set(s.fiber.degrees) - {0}:
        raise ValueError("the fiber must be concentrated in degree 0")
    idx = {x.id: x.index for x in points}
    ops = {}
    for (x, y), coeff in sorted(index1_transports.items()):
        if x not in idx or y not in idx:
            raise MonodromyError((x, y), "unknown critical point")
        if idx[x] - idx[y] != 1:
            raise MonodromyError((x, y), "transport must join consecutive indices")
        ops[(x, y)] = s.expand(_reduce_coefficients(coeff), 0) if s.fiber.dim(0) else np.zeros((0, 0), np.uint8)
    n = s.fiber.dim(0)
    for x in points:
        for y in points:
            if x.index - y.index != 2:
                continue
            total = np.zeros((n, n), dtype=np.uint8)
            for z in points:
                if z.index == x.index - 1 and (x.id, z.id) in ops and (z.id, y.id) in ops:
                    total ^= _kernels.matmul(ops[(z.id, y.id)], ops[(x.id, z.id)])
            if total.any():
                raise MonodromyError((x.id, y.id), "composed transports through intermediate points do not cancel")
    fibers = {x.id: s.fiber for x in points}
    transport = {pair: DegreeMap(s.fiber, s.fiber, 0, {0: BitMatrix.from_dense(m)}) for pair, m in ops.items()}
    return EnrichedMorseDatum(tuple(points), fibers, transport)
