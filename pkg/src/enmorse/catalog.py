"""Built-in fixtures: classical fibrations modeled as enriched Morse data.

Each fixture carries a hand-derived reference block (homology of the total
space and page dimensions) used by ``compare``.  Geometric provenance is noted
per fixture; the data themselves are never checked for geometric
admissibility, only for the structure equation.
"""

from __future__ import annotations

import re

from .chains import DegreeMap, GradedComplex
from .groups import cyclic_group, datum_from_monodromy, left_regular_system
from .morse import CriticalPoint, EnrichedMorseDatum
from .specfile import FibrationSpec, Monodromy, Reference

DEFAULT_LOOP_TRUNCATION = 8


def point_model() -> GradedComplex:
    return GradedComplex.build({0: ["pt"]})


def circle_model() -> GradedComplex:
    """One generator in degrees 0 (``e``) and 1 (``f``), zero differential."""
    return GradedComplex.build({0: ["e"], 1: ["f"]})


def interval_model() -> GradedComplex:
    return GradedComplex.build({0: ["a", "b"], 1: ["e"]}, {"e": ["a", "b"]})


def truncated_loop_model(n: int) -> GradedComplex:
    """Tensor algebra on one degree-1 class, cut off above degree ``n`` (chains on the loop space of S^2)."""
    return GradedComplex.build({k: [f"x^{k}"] for k in range(n + 1)})


def _dims(*triples):
    return {(p, q): n for p, q, n in triples}


def hopf() -> FibrationSpec:
    # S^1 -> S^3 -> S^2 with the height function on S^2.  The single flow-line
    # family from M to m is a circle, and transport along it wraps the fiber
    # once: the basepoint class goes to the fundamental class.
    circ = circle_model()
    pts = (CriticalPoint("m", 0), CriticalPoint("M", 2))
    t = DegreeMap.from_images(circ, circ, 1, {"e": ["f"]})
    datum = EnrichedMorseDatum(pts, {"m": circ, "M": circ}, {("M", "m"): t})
    e2 = _dims((0, 0, 1), (0, 1, 1), (2, 0, 1), (2, 1, 1))
    einf = _dims((0, 0, 1), (2, 1, 1))
    ref = Reference({0: 1, 3: 1}, {"1": e2, "2": e2, "3": einf, "inf": einf}, 3)
    return FibrationSpec("hopf", datum, reference=ref)


def hopf_4crit() -> FibrationSpec:
    # Same fibration over S^2 with a Morse function having a minimum m, a
    # saddle s and two maxima.  The two flow lines s->m cancel mod 2, each
    # maximum has one flow line to s, and all twisting sits on M1.
    circ = circle_model()
    pts = (CriticalPoint("m", 0), CriticalPoint("s", 1), CriticalPoint("M1", 2), CriticalPoint("M2", 2))
    ident = DegreeMap.identity(circ)
    transport = {
        ("M1", "s"): ident,
        ("M2", "s"): ident,
        ("M1", "m"): DegreeMap.from_images(circ, circ, 1, {"e": ["f"]}),
    }
    datum = EnrichedMorseDatum(pts, {p.id: circ for p in pts}, transport)
    e1 = _dims((0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1), (2, 0, 2), (2, 1, 2))
    e2 = _dims((0, 0, 1), (0, 1, 1), (2, 0, 1), (2, 1, 1))
    einf = _dims((0, 0, 1), (2, 1, 1))
    ref = Reference({0: 1, 3: 1}, {"1": e1, "2": e2, "3": einf, "inf": einf}, 3)
    return FibrationSpec("hopf-4crit", datum, reference=ref)


def torus_product() -> FibrationSpec:
    # Trivial circle bundle over S^1: the two flow lines M->m carry the same
    # (identity) transport and cancel.
    circ = circle_model()
    pts = (CriticalPoint("m", 0), CriticalPoint("M", 1))
    datum = EnrichedMorseDatum(pts, {"m": circ, "M": circ}, {})
    e = _dims((0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1))
    ref = Reference({0: 1, 1: 2, 2: 1}, {"1": e, "2": e, "inf": e}, 1)
    return FibrationSpec("torus-product", datum, reference=ref)


def _lifted(name: str, top: int) -> FibrationSpec:
    # Degree-0 chains of the based loop space of RP^n are the group algebra of
    # Z/2.  With one cell per dimension, the two flow lines between consecutive
    # cells differ by the generator t, so each transport is 1 + t.
    g = cyclic_group(2)
    system = left_regular_system(g)
    pts = tuple(CriticalPoint(f"x{k}", k) for k in range(top + 1))
    coeffs = {(f"x{k}", f"x{k - 1}"): frozenset({"1", "t"}) for k in range(1, top + 1)}
    datum = datum_from_monodromy(pts, coeffs, system)
    e1 = {(k, 0): 2 for k in range(top + 1)}
    e2 = {(0, 0): 1, (top, 0): 1}
    ref = Reference({0: 1, top: 1}, {"1": e1, "2": e2, "inf": e2}, 2)
    return FibrationSpec(name, datum, g, Monodromy("left-regular", coeffs), reference=ref)


def rp2_lifted() -> FibrationSpec:
    return _lifted("rp2-lifted", 2)


def rp3_lifted() -> FibrationSpec:
    return _lifted("rp3-lifted", 3)


def s2_pathloop(n: int = DEFAULT_LOOP_TRUNCATION) -> FibrationSpec:
    # Based path fibration Omega S^2 -> P S^2 -> S^2.  Transport along the
    # flow-line sphere is right multiplication by the degree-1 generator.
    # The total space is contractible; the truncation at degree n leaves a
    # spurious class in degree n + 2, outside the validity window n - 2.
    if n < 2:
        raise ValueError("truncation degree must be at least 2")
    fib = truncated_loop_model(n)
    pts = (CriticalPoint("m", 0), CriticalPoint("M", 2))
    t = DegreeMap.from_images(fib, fib, 1, {f"x^{k}": [f"x^{k + 1}"] for k in range(n)})
    datum = EnrichedMorseDatum(pts, {"m": fib, "M": fib}, {("M", "m"): t})
    window = n - 2
    e2 = {(p, q): 1 for p in (0, 2) for q in range(n + 1) if p + q <= window}
    ref = Reference({0: 1}, {"1": e2, "2": e2, "inf": {(0, 0): 1}})
    return FibrationSpec(f"s2-pathloop-{n}", datum, truncation=n, reference=ref)


def point_fiber_s2() -> FibrationSpec:
    # Identity fibration of S^2 (point fibers): the enriched complex is the
    # classical mod 2 Morse complex of m, s, M1, M2.
    pt = point_model()
    pts = (CriticalPoint("m", 0), CriticalPoint("s", 1), CriticalPoint("M1", 2), CriticalPoint("M2", 2))
    ident = DegreeMap.identity(pt)
    datum = EnrichedMorseDatum(pts, {p.id: pt for p in pts}, {("M1", "s"): ident, ("M2", "s"): ident})
    e1 = _dims((0, 0, 1), (1, 0, 1), (2, 0, 2))
    e2 = _dims((0, 0, 1), (2, 0, 1))
    ref = Reference({0: 1, 2: 1}, {"1": e1, "2": e2, "inf": e2}, 2)
    return FibrationSpec("point-fiber-s2", datum, reference=ref)


FIXTURES = {
    "hopf": hopf,
    "hopf-4crit": hopf_4crit,
    "torus-product": torus_product,
    "rp2-lifted": rp2_lifted,
    "rp3-lifted": rp3_lifted,
    "s2-pathloop-N": s2_pathloop,
    "point-fiber-s2": point_fiber_s2,
}


def names() -> list[str]:
    return list(FIXTURES)


def catalog(name: str, param: int | None = None) -> FibrationSpec:
    """Look up a fixture; ``s2-pathloop-N`` takes N from the name or from ``param``."""
    m = re.fullmatch(r"s2-pathloop(?:-(\d+))?", name)
    if m:
        n = int(m.group(1)) if m.group(1) else (param if param is not None else DEFAULT_LOOP_TRUNCATION)
        return s2_pathloop(n)
    if name == "s2-pathloop-N":
        return s2_pathloop(param if param is not None else DEFAULT_LOOP_TRUNCATION)
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    if param is not None:
        raise ValueError(f"fixture {name!r} takes no parameter")
    return FIXTURES[name]()


def all_fixtures() -> list[FibrationSpec]:
    return [catalog(n) for n in FIXTURES]
