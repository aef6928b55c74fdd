import numpy as np
import pytest
from hypothesis import given, strategies as st

from enmorse.catalog import circle_model, hopf, torus_product
from enmorse.chains import GradedComplex, homology_dims
from enmorse.gf2 import BitVector
from enmorse.morse import build_total_complex
from enmorse.randomized import random_complex, random_filtered_complex
from enmorse.spectral import (
    FilteredComplex,
    associated_graded_of_homology,
    convergence_holds,
    infinity_page,
    page,
    page_differential,
    single_level,
    validate_filtration,
)

from oracles import apply, brute_page_dims, complex_data, span, span_dim, xor_rank

HOPF_E2 = {(0, 0): 1, (0, 1): 1, (2, 0): 1, (2, 1): 1}
TORUS_E = {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): 1}


@pytest.fixture(scope="module")
def hopf_fc():
    return build_total_complex(hopf().datum)


@pytest.fixture(scope="module")
def torus_fc():
    return build_total_complex(torus_product().datum)


def brute_associated_graded(fc):
    """F_p H_n / F_{p-1} H_n by enumerating cycles inside each F_p."""
    dims, bnd = complex_data(fc.complex)
    lv = {d: [fc.level[g] for g in gens] for d, gens in fc.complex.generators.items()}
    levels = sorted(set(fc.level.values()))
    out = {}
    for n, size in dims.items():
        cols = bnd.get(n, [0] * size)
        bounds = [apply(bnd.get(n + 1, []), 1 << j) for j in range(dims.get(n + 1, 0))]
        base = span_dim(bounds)
        prev = 0
        for p in levels:
            gens = [1 << i for i in range(size) if lv[n][i] <= p]
            cycles = [x for x in span(gens) if apply(cols, x) == 0]
            here = span_dim(cycles + bounds) - base
            if here > prev:
                out[(p, n - p)] = here - prev
            prev = here
    return out


def test_validate_filtration_examples(hopf_fc):
    assert validate_filtration(hopf_fc) is None
    assert validate_filtration(single_level(circle_model(), 5)) is None
    c = GradedComplex.build({0: ["v"], 1: ["e"]}, {"e": ["v"]})
    w = validate_filtration(FilteredComplex(c, {"e": 0, "v": 1}))
    assert (w.generator, w.target) == ("e", "v")
    with pytest.raises(ValueError):
        page(FilteredComplex(c, {"e": 0, "v": 1}), 1)
    with pytest.raises(ValueError):
        FilteredComplex(c, {"e": 0})


def test_hopf_pages(hopf_fc):
    for r in (0, 1, 2):
        assert page(hopf_fc, r).dims == brute_page_dims(hopf_fc, r) == HOPF_E2
    p2 = page(hopf_fc, 2)
    assert p2.differential_ranks() == {(2, 0): 1}
    assert p2.target((2, 0)) == (0, 1)
    inf, r_star = infinity_page(hopf_fc)
    assert inf.dims == brute_page_dims(hopf_fc, 3) == {(0, 0): 1, (2, 1): 1}
    assert r_star == 3
    assert associated_graded_of_homology(hopf_fc) == brute_associated_graded(hopf_fc) == inf.dims


def test_pages_beyond_width_have_zero_differential(hopf_fc):
    for r in (3, 4, 7):
        assert all(m.is_zero() for m in page_differential(hopf_fc, r).values())


def test_torus_pages(torus_fc):
    p2 = page(torus_fc, 2)
    assert p2.dims == brute_page_dims(torus_fc, 2) == TORUS_E
    assert p2.differential_ranks() == {}
    inf, r_star = infinity_page(torus_fc)
    assert inf.dims == TORUS_E
    # E^1 already equals E^inf here, so the first stable index is 1
    assert r_star == 1
    assert associated_graded_of_homology(torus_fc) == brute_associated_graded(torus_fc) == TORUS_E


@given(st.integers(0, 2**32 - 1), st.integers(-2, 3))
def test_single_level(seed, p):
    c = random_complex(np.random.default_rng(seed), max_degree=3, max_rank=3)
    fc = single_level(c, p)
    expected = {(p, d - p): n for d, n in homology_dims(c).items()}
    assert page(fc, 1).dims == expected
    inf, r_star = infinity_page(fc)
    assert r_star == 1 and inf.dims == expected
    assert associated_graded_of_homology(fc) == expected


def homology_of_page(pg):
    """dim of H(E^r, d_r) at every bidegree, with ranks from the oracle's xor basis."""
    def rank_of(m):
        cols = [0] * m.cols
        for i, j in m.entries:
            cols[j] ^= 1 << i
        return xor_rank(cols)

    incoming: dict = {}
    for pq, m in pg.differentials.items():
        incoming[pg.target(pq)] = rank_of(m)
    out = {}
    for pq, n in pg.dims.items():
        k = n - rank_of(pg.differentials[pq]) - incoming.get(pq, 0)
        if k:
            out[pq] = k
    return out


@given(st.integers(0, 2**32 - 1))
def test_random_filtered_pages(seed):
    fc = random_filtered_complex(np.random.default_rng(seed))
    assert validate_filtration(fc) is None
    last = fc.width + 2
    pages = [page(fc, r) for r in range(last + 1)]
    for r, pg in enumerate(pages):
        if r <= 2:
            assert pg.dims == brute_page_dims(fc, r)
        # representatives live in F_p with boundary in F_{p-r}
        for (p, q), reps in pg.representatives.items():
            n = p + q
            for v in reps:
                assert all(fc.level[fc.complex.gens(n)[i]] <= p for i in v.support)
                dv = fc.complex.boundary(n) @ v
                assert all(fc.level[fc.complex.gens(n - 1)[i]] <= p - r for i in dv.support)
        # d_r d_r = 0
        for pq, m in pg.differentials.items():
            nxt = pg.differentials.get(pg.target(pq))
            if nxt is not None and m.rows:
                assert (nxt @ m).is_zero()
        if r < last:
            assert pages[r + 1].dims == homology_of_page(pg)
    assert convergence_holds(fc)
    assert associated_graded_of_homology(fc) == brute_associated_graded(fc)


def test_page_index_must_be_nonnegative(hopf_fc):
    with pytest.raises(ValueError):
        page(hopf_fc, -1)


def test_representatives_are_bitvectors(hopf_fc):
    reps = page(hopf_fc, 2).representatives
    assert all(isinstance(v, BitVector) for vs in reps.values() for v in vs)
