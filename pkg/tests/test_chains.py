import numpy as np
import pytest
from hypothesis import given, strategies as st

from enmorse.catalog import circle_model, interval_model, point_model
from enmorse.chains import (
    DegreeMap,
    GradedComplex,
    direct_sum_with_shifts,
    homology,
    homology_dims,
    tensor_product,
    validate_chain_map,
    validate_complex,
)
from enmorse.gf2 import BitMatrix, relative_rank
from enmorse.randomized import random_complex

from oracles import brute_homology, complex_data, kunneth


def broken_complex():
    return GradedComplex.build({0: ["v"], 1: ["e1"], 2: ["e2"]}, {"e2": ["e1"], "e1": ["v"]})


def lifted_rp3():
    gens = {d: [f"c{d}.1", f"c{d}.t"] for d in range(4)}
    bdry = {f"c{d}.{g}": [f"c{d - 1}.1", f"c{d - 1}.t"] for d in range(1, 4) for g in ("1", "t")}
    return GradedComplex.build(gens, bdry)


def test_validate_complex_examples():
    assert validate_complex(circle_model()) is None
    assert validate_complex(interval_model()) is None
    w = validate_complex(broken_complex())
    assert (w.degree, w.generator) == (2, "e2")


def test_construction_checks():
    with pytest.raises(ValueError):
        GradedComplex({0: ("b", "a")})
    with pytest.raises(ValueError):
        GradedComplex({0: ("a",), 1: ("a",)})
    with pytest.raises(ValueError):
        GradedComplex({0: ("a",), 1: ("b",)}, {1: BitMatrix.zeros(2, 1)})
    with pytest.raises(ValueError):
        GradedComplex.build({0: ["a"], 1: ["b"]}, {"b": ["b"]})


def test_homology_examples():
    assert homology_dims(circle_model()) == {0: 1, 1: 1}
    assert homology_dims(interval_model()) == {0: 1}
    c = lifted_rp3()
    assert homology_dims(c) == brute_homology(*complex_data(c)) == {0: 1, 3: 1}
    with pytest.raises(ValueError):
        homology(broken_complex())


def test_chain_map_examples():
    circ, iv = circle_model(), interval_model()
    assert validate_chain_map(DegreeMap.identity(circ)) is None
    assert validate_chain_map(DegreeMap.from_images(circ, circ, 1, {"e": ["f"]})) is None
    bad = DegreeMap.from_images(iv, iv, 0, {"a": ["a"], "b": ["a"], "e": ["e"]})
    w = validate_chain_map(bad)
    assert (w.degree, w.generator) == (1, "e")


def test_degree_map_shapes_and_composition():
    circ = circle_model()
    with pytest.raises(ValueError):
        DegreeMap(circ, circ, 0, {0: BitMatrix.zeros(2, 1)})
    with pytest.raises(ValueError):
        DegreeMap.from_images(circ, circ, 0, {"e": ["f"]})
    up = DegreeMap.from_images(circ, circ, 1, {"e": ["f"]})
    assert up.then(up).is_zero()
    assert DegreeMap.identity(circ).then(up) == up


def test_tensor_examples():
    circ, iv, pt = circle_model(), interval_model(), point_model()
    cc = tensor_product(circ, circ)
    assert homology_dims(cc) == brute_homology(*complex_data(cc)) == {0: 1, 1: 2, 2: 1}
    pc = tensor_product(pt, iv)
    assert {d: len(g) for d, g in pc.generators.items()} == {0: 2, 1: 1}
    assert homology_dims(pc) == homology_dims(iv)
    ic = tensor_product(iv, circ)
    assert homology_dims(ic) == brute_homology(*complex_data(ic)) == {0: 1, 1: 1}


def test_direct_sum_examples():
    circ = circle_model()
    same = direct_sum_with_shifts([(circ, 0)])
    assert {d: len(g) for d, g in same.generators.items()} == {0: 1, 1: 1}
    assert homology_dims(same) == homology_dims(circ)
    two = direct_sum_with_shifts([(circ, 0), (circ, 2)])
    assert {d: len(g) for d, g in two.generators.items()} == {0: 1, 1: 1, 2: 1, 3: 1}
    assert direct_sum_with_shifts([]) == GradedComplex()
    iv = direct_sum_with_shifts([(interval_model(), 1), (circ, 0)], tags=["i", "c"])
    assert homology_dims(iv) == {0: 1, 1: 2}


@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_kunneth(seed_a, seed_b):
    a = random_complex(np.random.default_rng(seed_a), max_degree=2, max_rank=3, prefix="a")
    b = random_complex(np.random.default_rng(seed_b), max_degree=2, max_rank=3, prefix="b")
    t = tensor_product(a, b)
    assert validate_complex(t) is None
    assert homology_dims(t) == kunneth(homology_dims(a), homology_dims(b))


@given(st.integers(0, 2**32 - 1))
def test_homology_matches_enumeration_and_representatives(seed):
    c = random_complex(np.random.default_rng(seed), max_degree=3, max_rank=4)
    h = homology(c)
    assert h.dims == brute_homology(*complex_data(c))
    for d, reps in h.representatives.items():
        assert len(reps) == h.dims[d]
        for v in reps:
            assert not (c.boundary(d) @ v)
        bounds = [c.boundary(d + 1).column(j) for j in range(c.dim(d + 1))]
        assert relative_rank(reps, bounds) == len(reps)
