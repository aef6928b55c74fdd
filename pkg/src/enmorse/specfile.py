"""JSON fibration spec files: parsing with located errors and canonical emission.

Layout (all degree keys are strings, matrices are lists of ``[row, col]``
positions carrying a 1)::

    {
      "format": "enmorse-fibration/1",
      "name": "hopf",
      "base": [{"id": "m", "index": 0}, ...],
      "fibers": {"m": {"generators": {"0": ["e"], "1": ["f"]},
                       "differential": {"1": [[0, 0]]}}, ...},
      "transports": [{"from": "M", "to": "m", "shift": 1,
                      "matrices": {"0": [[0, 0]]}}, ...],
      "group": {"elements": ["1", "t"], "table": [["1", "t"], ["t", "1"]]},
      "monodromy": {"system": "left-regular",
                    "transports": [{"from": "x1", "to": "x0", "coefficients": ["1", "t"]}]},
      "truncation": {"degree": 8},
      "reference": {"homology": {"0": 1}, "pages": {"2": [[0, 0, 1], ...], "inf": [...]},
                    "stabilization": 3}
    }

``group``, ``monodromy``, ``truncation`` and ``reference`` are optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .chains import DegreeMap, GradedComplex, validate_complex
from .gf2 import BitMatrix
from .groups import (
    FiniteGroup,
    MonodromyError,
    MonodromyLocalSystem,
    conjugation_system,
    datum_from_monodromy,
    end_mon_system,
    group_algebra_complex,
    GroupAlgebraComplex,
    left_regular_system,
    trivial_system,
)
from .morse import CriticalPoint, EnrichedMorseDatum

FORMAT = "enmorse-fibration/1"

SYSTEMS = {
    "left-regular": left_regular_system,
    "conjugation": conjugation_system,
    "end-mon": end_mon_system,
    "trivial": trivial_system,
}


class SpecError(ValueError):
    """A spec document failed to parse; ``errors`` lists ``location: message`` strings."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class Monodromy:
    system: str
    transports: Mapping[tuple[str, str], frozenset] = field(default_factory=dict)

    def local_system(self, group: FiniteGroup) -> MonodromyLocalSystem:
        return SYSTEMS[self.system](group)


@dataclass(frozen=True)
class Reference:
    homology: Mapping[int, int] = field(default_factory=dict)
    pages: Mapping[str, Mapping[tuple[int, int], int]] = field(default_factory=dict)
    stabilization: int | None = None


@dataclass(frozen=True)
class FibrationSpec:
    name: str
    datum: EnrichedMorseDatum
    group: FiniteGroup | None = None
    monodromy: Monodromy | None = None
    truncation: int | None = None
    reference: Reference | None = None

    @property
    def base(self) -> tuple[CriticalPoint, ...]:
        return self.datum.points

    @property
    def validity_window(self) -> int | None:
        """Highest total degree unaffected by fiber truncation, if any."""
        if self.truncation is None:
            return None
        return self.truncation - self.datum.max_index

    def group_algebra_complex(self) -> GroupAlgebraComplex | None:
        if self.group is None or self.monodromy is None:
            return None
        return group_algebra_complex(self.datum.points, self.monodromy.transports, self.group)


# emission


def _matrix_json(m: BitMatrix) -> list[list[int]]:
    return sorted([r, c] for r, c in m.entries)


def _complex_json(c: GradedComplex) -> dict:
    return {
        "generators": {str(d): list(c.gens(d)) for d in c.degrees},
        "differential": {str(d): _matrix_json(m) for d, m in c.differential.items()},
    }


def _dims_json(dims: Mapping[tuple[int, int], int]) -> list[list[int]]:
    return [[p, q, n] for (p, q), n in sorted(dims.items()) if n]


def spec_to_dict(s: FibrationSpec) -> dict:
    d = s.datum
    doc: dict[str, Any] = {
        "format": FORMAT,
        "name": s.name,
        "base": [{"id": x.id, "index": x.index} for x in d.points],
        "fibers": {x.id: _complex_json(d.fibers[x.id]) for x in d.points},
        "transports": [
            {"from": x, "to": y, "shift": t.shift, "matrices": {str(k): _matrix_json(m) for k, m in t.components.items()}}
            for (x, y), t in sorted(d.transport.items())
        ],
    }
    if s.group is not None:
        doc["group"] = {"elements": list(s.group.elements), "table": s.group.rows()}
    if s.monodromy is not None:
        doc["monodromy"] = {
            "system": s.monodromy.system,
            "transports": [
                {"from": x, "to": y, "coefficients": sorted(c)} for (x, y), c in sorted(s.monodromy.transports.items())
            ],
        }
    if s.truncation is not None:
        doc["truncation"] = {"degree": s.truncation}
    if s.reference is not None:
        ref: dict[str, Any] = {
            "homology": {str(k): v for k, v in sorted(s.reference.homology.items()) if v},
            "pages": {k: _dims_json(v) for k, v in s.reference.pages.items()},
        }
        if s.reference.stabilization is not None:
            ref["stabilization"] = s.reference.stabilization
        doc["reference"] = ref
    return doc


def dumps_canonical(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit_spec(s: FibrationSpec) -> bytes:
    return dumps_canonical(spec_to_dict(s)).encode("utf-8")


# parsing


class _Collector:
    def __init__(self):
        self.errors: list[str] = []

    def add(self, where: str, msg: str):
        self.errors.append(f"{where}: {msg}")

    def expect(self, value, kind, where: str, what: str):
        if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
            self.add(where, f"expected {what}")
            return False
        return True


def _degree_key(key, where, err: _Collector):
    try:
        return int(key)
    except (TypeError, ValueError):
        err.add(where, f"degree key {key!r} is not an integer")
        return None


def _parse_matrix(raw, rows: int, cols: int, where: str, err: _Collector) -> BitMatrix | None:
    if not err.expect(raw, list, where, "a list of [row, col] positions"):
        return None
    seen = set()
    ok = True
    for k, e in enumerate(raw):
        loc = f"{where}[{k}]"
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in e)):
            err.add(loc, f"entry {e!r} is not a [row, col] pair of integers (only GF(2) positions carrying 1 are allowed)")
            ok = False
            continue
        r, c = e
        if not (0 <= r < rows and 0 <= c < cols):
            err.add(loc, f"position {e} outside a {rows}x{cols} matrix")
            ok = False
        elif (r, c) in seen:
            err.add(loc, f"position {e} repeated (coefficients must be 0 or 1 in GF(2))")
            ok = False
        seen.add((r, c))
    return BitMatrix(rows, cols, frozenset(seen)) if ok else None


def _parse_complex(raw, where: str, err: _Collector) -> GradedComplex | None:
    if not err.expect(raw, dict, where, "an object with 'generators' and 'differential'"):
        return None
    start = len(err.errors)
    gens: dict[int, tuple[str, ...]] = {}
    graw = raw.get("generators", {})
    if err.expect(graw, dict, f"{where}.generators", "an object mapping degrees to name lists"):
        for key, names in graw.items():
            d = _degree_key(key, f"{where}.generators", err)
            if d is None:
                continue
            if not (isinstance(names, list) and all(isinstance(n, str) and n for n in names)):
                err.add(f"{where}.generators.{key}", "expected a list of nonempty generator names")
                continue
            if names != sorted(names) or len(set(names)) != len(names):
                err.add(f"{where}.generators.{key}", "generator names must be distinct and sorted")
                continue
            gens[d] = tuple(names)
    diff = {}
    draw = raw.get("differential", {})
    if err.expect(draw, dict, f"{where}.differential", "an object mapping degrees to matrices"):
        for key, m in draw.items():
            d = _degree_key(key, f"{where}.differential", err)
            if d is None:
                continue
            parsed = _parse_matrix(m, len(gens.get(d - 1, ())), len(gens.get(d, ())), f"{where}.differential.{key}", err)
            if parsed is not None:
                diff[d] = parsed
    for key in sorted(set(raw) - {"generators", "differential"}):
        err.add(where, f"unknown field {key!r}")
    if len(err.errors) > start:
        return None
    try:
        c = GradedComplex(gens, diff)
    except ValueError as exc:
        err.add(where, str(exc))
        return None
    w = validate_complex(c)
    if w is not None:
        err.add(where, f"boundary does not square to zero (degree {w.degree}, generator {w.generator!r})")
        return None
    return c


def _parse_dims(raw, where: str, err: _Collector) -> dict[tuple[int, int], int]:
    out = {}
    if not err.expect(raw, list, where, "a list of [p, q, dim] triples"):
        return out
    for k, e in enumerate(raw):
        if not (isinstance(e, list) and len(e) == 3 and all(isinstance(v, int) and not isinstance(v, bool) for v in e)):
            err.add(f"{where}[{k}]", "expected [p, q, dim]")
            continue
        if e[2]:
            out[(e[0], e[1])] = e[2]
    return out


def parse_spec(data: bytes | str) -> FibrationSpec:
    """Parse and fully validate a spec document; raise :class:`SpecError` listing every problem found."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SpecError([f"byte {exc.start}: input is not UTF-8"]) from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SpecError([f"line {exc.lineno}, column {exc.colno}: {exc.msg}"]) from None
    err = _Collector()
    if not err.expect(doc, dict, "$", "a JSON object"):
        raise SpecError(err.errors)
    if doc.get("format") != FORMAT:
        err.add("$.format", f"expected {FORMAT!r}")
    known = {"format", "name", "base", "fibers", "transports", "group", "monodromy", "truncation", "reference"}
    for key in sorted(set(doc) - known):
        err.add("$", f"unknown field {key!r}")
    name = doc.get("name")
    if not isinstance(name, str):
        err.add("$.name", "expected a string")
        name = ""

    points: list[CriticalPoint] = []
    seen_ids = set()
    base = doc.get("base")
    if err.expect(base, list, "$.base", "a list of critical points"):
        for k, raw in enumerate(base):
            loc = f"$.base[{k}]"
            if not (isinstance(raw, dict) and isinstance(raw.get("id"), str) and isinstance(raw.get("index"), int)):
                err.add(loc, "expected {\"id\": string, \"index\": integer}")
                continue
            if raw["id"] in seen_ids:
                err.add(loc, f"duplicate critical point {raw['id']!r}")
                continue
            try:
                points.append(CriticalPoint(raw["id"], raw["index"]))
                seen_ids.add(raw["id"])
            except ValueError as exc:
                err.add(loc, str(exc))
    index = {x.id: x.index for x in points}

    fibers: dict[str, GradedComplex] = {}
    fraw = doc.get("fibers")
    if err.expect(fraw, dict, "$.fibers", "an object mapping critical points to complexes"):
        for pid in index:
            if pid not in fraw:
                err.add("$.fibers", f"missing fiber for critical point {pid!r}")
        for pid, raw in fraw.items():
            if pid not in index:
                err.add(f"$.fibers.{pid}", f"unknown critical point {pid!r}")
                continue
            c = _parse_complex(raw, f"$.fibers.{pid}", err)
            if c is not None:
                fibers[pid] = c

    transport: dict[tuple[str, str], DegreeMap] = {}
    traw = doc.get("transports", [])
    if err.expect(traw, list, "$.transports", "a list of transport operators"):
        for k, raw in enumerate(traw):
            loc = f"$.transports[{k}]"
            if not isinstance(raw, dict):
                err.add(loc, "expected an object")
                continue
            x, y, shift = raw.get("from"), raw.get("to"), raw.get("shift")
            pair = f"{x}->{y}"
            if x not in index or y not in index:
                err.add(loc, f"transport {pair} names an unknown critical point")
                continue
            if not isinstance(shift, int) or shift != index[x] - index[y] - 1:
                err.add(loc, f"transport {pair} has shift {shift!r}, expected |{x}|-|{y}|-1 = {index[x] - index[y] - 1}")
                continue
            if (x, y) in transport:
                err.add(loc, f"transport {pair} given twice")
                continue
            if x not in fibers or y not in fibers:
                continue
            mraw = raw.get("matrices", {})
            if not err.expect(mraw, dict, f"{loc}.matrices", "an object mapping source degrees to matrices"):
                continue
            comps = {}
            for key, m in mraw.items():
                d = _degree_key(key, f"{loc}.matrices", err)
                if d is None:
                    continue
                parsed = _parse_matrix(m, fibers[y].dim(d + shift), fibers[x].dim(d), f"{loc}.matrices.{key}", err)
                if parsed is not None:
                    comps[d] = parsed
            transport[(x, y)] = DegreeMap(fibers[x], fibers[y], shift, comps)

    group = None
    if "group" in doc:
        graw = doc["group"]
        if err.expect(graw, dict, "$.group", "an object with 'elements' and 'table'"):
            try:
                group = FiniteGroup.from_rows(graw.get("elements", []), graw.get("table", []))
            except (ValueError, KeyError, TypeError) as exc:
                err.add("$.group", f"invalid group: {exc}")

    monodromy = None
    if "monodromy" in doc:
        mraw = doc["monodromy"]
        if group is None:
            err.add("$.monodromy", "a monodromy block needs a group block")
        elif err.expect(mraw, dict, "$.monodromy", "an object"):
            system = mraw.get("system")
            if system not in SYSTEMS:
                err.add("$.monodromy.system", f"unknown system {system!r} (expected one of {sorted(SYSTEMS)})")
            coeffs = {}
            for k, raw in enumerate(mraw.get("transports", [])):
                loc = f"$.monodromy.transports[{k}]"
                if not (isinstance(raw, dict) and isinstance(raw.get("coefficients"), list)):
                    err.add(loc, "expected {\"from\", \"to\", \"coefficients\"}")
                    continue
                bad = [g for g in raw["coefficients"] if g not in group.elements]
                if bad:
                    err.add(loc, f"unknown group elements {bad}")
                    continue
                coeffs[(raw.get("from"), raw.get("to"))] = frozenset(raw["coefficients"])
            if system in SYSTEMS:
                monodromy = Monodromy(system, coeffs)

    truncation = None
    if "truncation" in doc:
        t = doc["truncation"]
        if isinstance(t, dict) and isinstance(t.get("degree"), int) and t["degree"] >= 0:
            truncation = t["degree"]
        else:
            err.add("$.truncation", "expected {\"degree\": nonnegative integer}")

    reference = None
    if "reference" in doc:
        rraw = doc["reference"]
        if err.expect(rraw, dict, "$.reference", "an object"):
            hom = {}
            for key, v in rraw.get("homology", {}).items():
                d = _degree_key(key, "$.reference.homology", err)
                if d is not None and isinstance(v, int) and v:
                    hom[d] = v
            pages = {}
            for key, dims in rraw.get("pages", {}).items():
                if key != "inf" and not key.isdigit():
                    err.add("$.reference.pages", f"page key {key!r} must be a page number or 'inf'")
                    continue
                pages[key] = _parse_dims(dims, f"$.reference.pages.{key}", err)
            stab = rraw.get("stabilization")
            if stab is not None and not isinstance(stab, int):
                err.add("$.reference.stabilization", "expected an integer")
                stab = None
            reference = Reference(hom, pages, stab)

    if err.errors:
        raise SpecError(err.errors)
    try:
        datum = EnrichedMorseDatum(tuple(points), fibers, transport)
    except ValueError as exc:
        raise SpecError([f"$: {exc}"]) from None
    if monodromy is not None:
        try:
            system = monodromy.local_system(group)
            derived = datum_from_monodromy(datum.points, monodromy.transports, system)
        except MonodromyError as exc:
            raise SpecError([f"$.monodromy: transport {exc.pair[0]}->{exc.pair[1]}: {exc}"]) from None
        except ValueError as exc:
            raise SpecError([f"$.monodromy: {exc}"]) from None
        if derived != datum:
            raise SpecError(["$.monodromy: fibers and transports disagree with the expansion of the monodromy block"])
    return FibrationSpec(name, datum, group, monodromy, truncation, reference)
