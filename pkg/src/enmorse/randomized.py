"""Random inputs for property checks and benchmarks.

Random data satisfy d^2 = 0 and the structure equation by construction:
differentials are conjugates ``P N P^-1`` of a pairing differential ``N`` by
filtration-preserving automorphisms, and enriched data are product data
(base Morse complex times one fiber) conjugated by block-triangular gauge
automorphisms ``alpha@x -> sum_y H(x,y)(alpha)@y`` with ``|y| <= |x|``.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .chains import DegreeMap, GradedComplex
from .gf2 import BitMatrix, inverse_dense, rank_dense
from .morse import CriticalPoint, EnrichedMorseDatum
from .spectral import FilteredComplex


def random_invertible(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        m = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
        if rank_dense(m) == n:
            return m


def random_unitriangular(rng: np.random.Generator, n: int, density: float = 0.5) -> np.ndarray:
    m = np.triu((rng.random((n, n)) < density).astype(np.uint8), 1)
    m[np.arange(n), np.arange(n)] = 1
    return m


def _pairing_differentials(rng, dims: dict[int, int]) -> dict[int, np.ndarray]:
    """Differentials sending some generators of degree d to distinct generators of degree d-1."""
    free = {d: list(range(n)) for d, n in dims.items()}
    out = {}
    for d in sorted(dims):
        m = np.zeros((dims.get(d - 1, 0), dims[d]), dtype=np.uint8)
        targets = free.get(d - 1, [])
        # a generator that receives a boundary may not also have one
        sources = [j for j in free[d]]
        rng.shuffle(sources)
        npairs = int(rng.integers(0, min(len(sources), len(targets)) + 1))
        for j, i in zip(sources[:npairs], targets[:npairs]):
            m[i, j] = 1
        free[d] = [j for j in free[d] if j not in set(sources[:npairs])]
        if d - 1 in free:
            free[d - 1] = [i for i in free[d - 1] if i not in set(targets[:npairs])]
        out[d] = m
    return out


def random_complex(
    rng: np.random.Generator, max_degree: int = 3, max_rank: int = 3, prefix: str = "g", min_rank: int = 0
) -> GradedComplex:
    dims = {d: int(rng.integers(min_rank, max_rank + 1)) for d in range(max_degree + 1)}
    dims = {d: n for d, n in dims.items() if n}
    if not dims:
        dims = {0: 1}
    pair = _pairing_differentials(rng, dims)
    p = {d: random_invertible(rng, n) for d, n in dims.items()}
    pinv = {d: inverse_dense(m) for d, m in p.items()}
    names = {d: tuple(sorted(f"{prefix}{d}.{i}" for i in range(n))) for d, n in dims.items()}
    diff = {}
    for d in dims:
        if d - 1 in dims:
            m = _kernels.matmul(_kernels.matmul(p[d - 1], pair[d]), pinv[d])
            diff[d] = BitMatrix.from_dense(m)
    return GradedComplex(names, diff)


def random_filtered_complex(
    rng: np.random.Generator, max_degree: int = 3, max_rank: int = 4, max_level: int = 3
) -> FilteredComplex:
    """Random filtered complex: pairing differential conjugated by level-unitriangular bases."""
    dims = {d: int(rng.integers(1, max_rank + 1)) for d in range(max_degree + 1)}
    levels = {d: np.sort(rng.integers(0, max_level + 1, size=n)) for d, n in dims.items()}
    # pair only downward in level so the pairing itself is filtered
    free = {d: list(range(n)) for d, n in dims.items()}
    pair = {}
    for d in sorted(dims):
        m = np.zeros((dims.get(d - 1, 0), dims[d]), dtype=np.uint8)
        if d - 1 in dims:
            srcs = list(free[d])
            rng.shuffle(srcs)
            used_src, used_tgt = set(), set()
            for j in srcs:
                if rng.random() < 0.5:
                    continue
                options = [i for i in free[d - 1] if i not in used_tgt and levels[d - 1][i] <= levels[d][j]]
                if options:
                    i = options[int(rng.integers(0, len(options)))]
                    m[i, j] = 1
                    used_src.add(j)
                    used_tgt.add(i)
            free[d] = [j for j in free[d] if j not in used_src]
            free[d - 1] = [i for i in free[d - 1] if i not in used_tgt]
        pair[d] = m
    # generators are sorted by level, so upper unitriangular bases preserve the filtration
    p = {d: random_unitriangular(rng, n) for d, n in dims.items()}
    pinv = {d: inverse_dense(m) for d, m in p.items()}
    names = {d: [f"c{d}.{i:02d}" for i in range(n)] for d, n in dims.items()}
    diff = {}
    for d in dims:
        if d - 1 in dims:
            m = _kernels.matmul(_kernels.matmul(p[d - 1], pair[d]), pinv[d])
            diff[d] = BitMatrix.from_dense(m)
    c = GradedComplex({d: tuple(v) for d, v in names.items()}, diff)
    level = {names[d][i]: int(levels[d][i]) for d in dims for i in range(dims[d])}
    return FilteredComplex(c, level)


def random_datum(
    rng: np.random.Generator, max_index: int = 2, max_points: int = 2, fiber_degree: int = 2, fiber_rank: int = 2
) -> EnrichedMorseDatum:
    """Product datum (random base complex, random fiber) perturbed by a random gauge automorphism."""
    base = random_complex(rng, max_degree=max_index, max_rank=max_points, prefix="x", min_rank=1)
    fiber = random_complex(rng, max_degree=fiber_degree, max_rank=fiber_rank, prefix="a")
    points = [CriticalPoint(x, d) for d in base.degrees for x in base.gens(d)]
    index = {x.id: x.index for x in points}

    # total basis: (point, fiber generator), indexed per total degree
    basis: dict[int, list[tuple[str, str]]] = {}
    for x in points:
        for q in fiber.degrees:
            for a in fiber.gens(q):
                basis.setdefault(x.index + q, []).append((x.id, a))
    pos = {n: {g: i for i, g in enumerate(gs)} for n, gs in basis.items()}
    fdeg = {a: q for q in fiber.degrees for a in fiber.gens(q)}

    def fcol(a):
        q = fdeg[a]
        return [fiber.gens(q - 1)[i] for i in np.flatnonzero(fiber.boundary_dense(q)[:, fiber.locate(a)[1]])]

    diff = {}
    for n, gs in basis.items():
        m = np.zeros((len(basis.get(n - 1, [])), len(gs)), dtype=np.uint8)
        for j, (x, a) in enumerate(gs):
            for b in fcol(a):
                m[pos[n - 1][(x, b)], j] ^= 1
            bx = base.boundary_dense(index[x])[:, base.locate(x)[1]]
            for i in np.flatnonzero(bx):
                y = base.gens(index[x] - 1)[i]
                m[pos[n - 1][(y, a)], j] ^= 1
        diff[n] = m

    # gauge: invertible blocks on the diagonal point by point, random blocks toward lower index
    gauge = {}
    for n, gs in basis.items():
        g = np.zeros((len(gs), len(gs)), dtype=np.uint8)
        for x in points:
            idx = [i for i, (y, _) in enumerate(gs) if y == x.id]
            if idx:
                g[np.ix_(idx, idx)] = random_invertible(rng, len(idx))
        for j, (x, _) in enumerate(gs):
            for i, (y, _) in enumerate(gs):
                if index[y] < index[x] and rng.random() < 0.4:
                    g[i, j] = 1
        gauge[n] = g
    ginv = {n: inverse_dense(g) for n, g in gauge.items()}
    new = {}
    for n, m in diff.items():
        if n - 1 in basis:
            new[n] = _kernels.matmul(_kernels.matmul(gauge[n - 1], m), ginv[n])

    # read the perturbed differential back as fibers and transports
    fib_entries: dict[str, dict[int, set]] = {x.id: {} for x in points}
    tr_entries: dict[tuple[str, str], dict[int, set]] = {}
    for n, m in new.items():
        for i, j in zip(*np.nonzero(m)):
            x, a = basis[n][j]
            y, b = basis[n - 1][i]
            ca, cb = fiber.locate(a)[1], fiber.locate(b)[1]
            if x == y:
                fib_entries[x].setdefault(fdeg[a], set()).add((cb, ca))
            else:
                tr_entries.setdefault((x, y), {}).setdefault(fdeg[a], set()).add((cb, ca))
    fibers = {}
    for x in points:
        d = {q: BitMatrix(fiber.dim(q - 1), fiber.dim(q), frozenset(e)) for q, e in fib_entries[x.id].items()}
        fibers[x.id] = GradedComplex(fiber.generators, d)
    transport = {}
    for (x, y), comps in tr_entries.items():
        shift = index[x] - index[y] - 1
        mats = {q: BitMatrix(fiber.dim(q + shift), fiber.dim(q), frozenset(e)) for q, e in comps.items()}
        transport[(x, y)] = DegreeMap(fibers[x], fibers[y], shift, mats)
    return EnrichedMorseDatum(tuple(points), fibers, transport)
