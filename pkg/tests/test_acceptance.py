"""Acceptance gate: ten exact criteria, one PASS/FAIL line each.

Run under pytest (the lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import os
import subprocess
import sys
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

from enmorse.catalog import all_fixtures, catalog, circle_model  # noqa: E402
from enmorse.chains import homology_dims, tensor_product, validate_complex  # noqa: E402
from enmorse.groups import (  # noqa: E402
    cellular_local_homology,
    conjugation_system,
    cyclic_group,
    end_mon_system,
    left_regular_system,
    symmetric_group,
    systems_isomorphic,
    trivial_group,
)
from enmorse.morse import build_total_complex, check_structure_equation, e1_complex, e2_dims  # noqa: E402
from enmorse.randomized import random_datum  # noqa: E402
from enmorse.spectral import associated_graded_of_homology, infinity_page, page  # noqa: E402

from oracles import boundary_of_simplices, brute_homology, brute_page_dims, kunneth, square_is_zero  # noqa: E402

RANDOM_SEED = 7
RANDOM_COUNT = 100
RESULTS: dict[int, tuple[bool, str]] = {}


@lru_cache(maxsize=None)
def random_data():
    rng = np.random.default_rng(RANDOM_SEED)
    return tuple(random_datum(rng) for _ in range(RANDOM_COUNT))


@lru_cache(maxsize=None)
def fixtures():
    return tuple(all_fixtures())


def every_datum():
    return [(s.name, s.datum) for s in fixtures()] + [(f"random[{i}]", d) for i, d in enumerate(random_data())]


def criterion_1():
    bad = []
    for name, datum in every_datum():
        if check_structure_equation(datum):
            bad.append(f"{name}: structure equation")
            continue
        c = build_total_complex(datum).complex
        if validate_complex(c) is not None or not square_is_zero(c):
            bad.append(name)
    return not bad, f"d^2 = 0 on {len(fixtures())} fixtures and {RANDOM_COUNT} random data" + (f"; failing {bad}" if bad else "")


def criterion_2():
    fc = build_total_complex(catalog("hopf").datum)
    h = homology_dims(fc.complex)
    s3 = brute_homology(*boundary_of_simplices(5))
    full = {d: h.get(d, 0) for d in range(4)}
    e2 = page(fc, 2)
    inf, r_star = infinity_page(fc)
    p3 = page(fc, 3)
    want_e2 = {(0, 0): 1, (0, 1): 1, (2, 0): 1, (2, 1): 1}
    checks = {
        "homology": full == {0: 1, 1: 0, 2: 0, 3: 1} and h == s3,
        "E2": e2.dims == want_e2 == brute_page_dims(fc, 2),
        "d2": e2.differential_ranks() == {(2, 0): 1},
        "E3=Einf": p3.dims == inf.dims == brute_page_dims(fc, 3) == {(0, 0): 1, (2, 1): 1} and r_star == 3,
    }
    return all(checks.values()), "hopf " + ", ".join(f"{k} {'ok' if v else 'WRONG'}" for k, v in checks.items())


def criterion_3():
    fc = build_total_complex(catalog("torus-product").datum)
    circ = circle_model()
    oracle = homology_dims(tensor_product(circ, circ))
    h = homology_dims(fc.complex)
    inf, _ = infinity_page(fc)
    ok = page(fc, 2).dims == inf.dims and h == oracle == kunneth({0: 1, 1: 1}, {0: 1, 1: 1}) == {0: 1, 1: 2, 2: 1}
    return ok, f"torus-product homology {h}, tensor oracle {oracle}, E2 = Einf {page(fc, 2).dims == inf.dims}"


def criterion_4():
    parts = []
    ok = True
    for name, want in (("rp2-lifted", {0: 1, 2: 1}), ("rp3-lifted", {0: 1, 3: 1})):
        spec = catalog(name)
        h = homology_dims(build_total_complex(spec.datum).complex)
        cell = cellular_local_homology(spec.group_algebra_complex(), left_regular_system(spec.group))
        ok &= h == cell == want
        parts.append(f"{name} {h} vs cellular {cell}")
    return ok, "; ".join(parts)


def criterion_5():
    spec = catalog("s2-pathloop-8")
    h = homology_dims(build_total_complex(spec.datum).complex)
    window = {d: h.get(d, 0) for d in range(0, 9)}
    ok = window == {0: 1, **{d: 0 for d in range(1, 9)}}
    return ok, f"s2-pathloop-8 homology in degrees 0..8: {window}"


def criterion_6():
    bad = []
    for name, datum in every_datum():
        fc = build_total_complex(datum)
        inf, _ = infinity_page(fc)
        if inf.dims != associated_graded_of_homology(fc) or inf.total_dims() != homology_dims(fc.complex):
            bad.append(name)
    return not bad, f"E-infinity = associated graded on {len(every_datum())} data" + (f"; failing {bad}" if bad else "")


def criterion_7():
    groups = {
        "trivial": trivial_group(),
        "2-element": cyclic_group(2),
        "cyclic-4": cyclic_group(4),
        "symmetric-3": symmetric_group(3),
    }
    found = {name: systems_isomorphic(end_mon_system(g), conjugation_system(g)) is not None for name, g in groups.items()}
    return all(found.values()), "intertwiner found: " + ", ".join(f"{k} {v}" for k, v in found.items())


def criterion_8():
    a = build_total_complex(catalog("hopf").datum)
    b = build_total_complex(catalog("hopf-4crit").datum)
    top = max(a.width, b.width) + 3
    same_h = homology_dims(a.complex) == homology_dims(b.complex)
    diff = [r for r in range(2, top + 1) if page(a, r).dims != page(b, r).dims]
    return same_h and not diff, f"homology equal {same_h}; pages r = 2..{top} equal" + (f" except {diff}" if diff else "")


def criterion_9():
    bad = []
    for name, datum in every_datum():
        fc = build_total_complex(datum)
        p1, p2 = page(fc, 1), page(fc, 2)
        e1 = e1_complex(datum)
        if e1.dims() != p1.dims or e1.ranks() != p1.differential_ranks() or e2_dims(datum) != p2.dims:
            bad.append(name)
    return not bad, f"E1/E2 paths agree on {len(every_datum())} data" + (f"; failing {bad}" if bad else "")


def _cli(*args, stdin=None):
    env = dict(os.environ)
    return subprocess.run([sys.executable, "-m", "enmorse", *args], input=stdin, capture_output=True, env=env, check=False)


def criterion_10():
    problems = []
    for spec in fixtures():
        emitted = [_cli("catalog", "emit", spec.name).stdout for _ in range(2)]
        if emitted[0] != emitted[1] or not emitted[0]:
            problems.append(f"{spec.name}: emit")
        runs = [_cli("pages", "-", "--format", "json", stdin=emitted[0]) for _ in range(2)]
        if runs[0].returncode or runs[0].stdout != runs[1].stdout or not runs[0].stdout:
            problems.append(f"{spec.name}: pages")
        cmp = _cli("compare", "-", stdin=emitted[0])
        if cmp.returncode:
            problems.append(f"{spec.name}: compare")
    return not problems, f"emit/pages byte-identical and compare passes on {len(fixtures())} fixtures" + (
        f"; problems {problems}" if problems else ""
    )


CRITERIA = {
    1: ("d^2 = 0", criterion_1),
    2: ("hopf homology and pages", criterion_2),
    3: ("product collapse", criterion_3),
    4: ("lifted complexes vs cellular homology", criterion_4),
    5: ("path-space fibration contractible", criterion_5),
    6: ("convergence", criterion_6),
    7: ("end/conjugation coefficient systems", criterion_7),
    8: ("invariance across Morse data", criterion_8),
    9: ("E1/E2 cross-path consistency", criterion_9),
    10: ("CLI determinism and compare", criterion_10),
}


def line(k: int) -> str:
    ok, detail = RESULTS[k]
    return f"[{'PASS' if ok else 'FAIL'}] criterion {k:>2} {CRITERIA[k][0]}: {detail}"


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    RESULTS[k] = CRITERIA[k][1]()
    print(line(k))
    assert RESULTS[k][0], line(k)


if __name__ == "__main__":
    for k in sorted(CRITERIA):
        RESULTS[k] = CRITERIA[k][1]()
        print(line(k))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
