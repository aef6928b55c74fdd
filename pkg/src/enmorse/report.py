"""Reports: checks, total homology, pages up to stabilization and oracle cross-checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .chains import homology_dims, validate_complex
from .groups import cellular_local_homology
from .morse import build_total_complex, check_structure_equation, e1_complex, e2_dims
from .specfile import FibrationSpec, dumps_canonical
from .spectral import associated_graded_of_homology, infinity_page, page, validate_filtration


def _triples(dims) -> list[list[int]]:
    return [[p, q, n] for (p, q), n in sorted(dims.items()) if n]


def _degrees(dims) -> dict[str, int]:
    return {str(d): n for d, n in sorted(dims.items()) if n}


@dataclass
class Report:
    name: str
    checks: dict[str, Any]
    validity_window: int | None = None
    homology: dict[int, int] | None = None
    pages: list[dict[str, Any]] = field(default_factory=list)
    stabilization: int | None = None
    infinity: dict | None = None
    associated_graded: dict | None = None
    e2: dict[str, Any] | None = None
    oracle: dict[str, Any] | None = None
    comparison: dict[str, Any] | None = None

    @property
    def checks_ok(self) -> bool:
        return all(c["ok"] for c in self.checks.values())

    @property
    def convergence_ok(self) -> bool:
        if self.infinity is None:
            return False
        totals: dict[int, int] = {}
        for (p, q), n in self.infinity.items():
            totals[p + q] = totals.get(p + q, 0) + n
        return self.infinity == self.associated_graded and totals == self.homology

    @property
    def ok(self) -> bool:
        if not self.checks_ok or not self.convergence_ok:
            return False
        for part in (self.e2, self.oracle, self.comparison):
            if part is not None and not part["ok"]:
                return False
        return True

    def truncation_artifacts(self) -> list[int]:
        if self.validity_window is None or self.homology is None:
            return []
        return [d for d in sorted(self.homology) if d > self.validity_window]

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "checks": self.checks, "ok": self.ok}
        if not self.checks_ok:
            return out
        out["validity_window"] = self.validity_window
        out["homology"] = _degrees(self.homology)
        out["truncation_artifacts"] = self.truncation_artifacts()
        out["pages"] = self.pages
        out["stabilization"] = self.stabilization
        out["infinity_page"] = _triples(self.infinity)
        out["associated_graded"] = _triples(self.associated_graded)
        out["convergence"] = self.convergence_ok
        if self.e2 is not None:
            out["e2"] = self.e2
        if self.oracle is not None:
            out["oracle"] = self.oracle
        if self.comparison is not None:
            out["comparison"] = self.comparison
        return out

    def to_json(self) -> str:
        return dumps_canonical(self.to_dict())

    def to_text(self, sections=("checks", "homology", "pages", "e2", "oracle", "comparison")) -> str:
        lines = [f"fibration: {self.name}"]
        if "checks" in sections or not self.checks_ok:
            lines.append("checks:")
            for key, c in self.checks.items():
                lines.append(f"  {key:<20} {'ok' if c['ok'] else 'FAILED'}")
                for w in c.get("witnesses", []):
                    lines.append("    witness: " + ", ".join(f"{k}={v}" for k, v in w.items()))
        if not self.checks_ok:
            return "\n".join(lines) + "\n"
        if self.validity_window is not None:
            lines.append(
                f"truncated fiber: degrees <= {self.validity_window} are trustworthy; higher degrees are truncation artifacts"
            )
        if "homology" in sections:
            lines.append("homology of the total complex:")
            lines.append(_degree_table(self.homology, self.validity_window))
        if "pages" in sections:
            for pg in self.pages:
                dims = {(p, q): n for p, q, n in pg["dims"]}
                lines.append(f"E^{pg['r']}:")
                lines.append(_page_table(dims))
                r = pg["r"]
                ranks = ", ".join(f"({p},{q})->({p - r},{q + r - 1}) rank {k}" for p, q, k in pg["differential_ranks"])
                lines.append(f"  d_{pg['r']}: {ranks or 'zero'}")
            lines.append(f"stabilization: E^{self.stabilization} = E^inf")
            lines.append("E^inf:")
            lines.append(_page_table(self.infinity))
            lines.append(
                "E^inf vs associated graded of homology: " + ("agree" if self.infinity == self.associated_graded else "DIFFER")
            )
            lines.append("convergence: " + ("ok" if self.convergence_ok else "FAILED"))
        if "e2" in sections and self.e2 is not None:
            lines.append("E^2 from fiber homology:")
            lines.append(_page_table({(p, q): n for p, q, n in self.e2["enriched"]}))
            lines.append("E^1/E^2 cross-check against the filtered complex: " + ("agree" if self.e2["ok"] else "DISCREPANCY"))
        if "oracle" in sections and self.oracle is not None:
            lines.append(
                f"cellular homology with local coefficients ({self.oracle['system']}): "
                + _inline(self.oracle["cellular_homology"])
                + ("  [matches]" if self.oracle["ok"] else "  [MISMATCH]")
            )
        if "comparison" in sections and self.comparison is not None:
            lines.append("reference comparison: " + ("pass" if self.comparison["ok"] else "FAIL"))
            for m in self.comparison["mismatches"]:
                lines.append(f"  {m}")
        return "\n".join(lines) + "\n"


def _inline(d: dict) -> str:
    return "{" + ", ".join(f"{k}: {v}" for k, v in d.items()) + "}"


def _degree_table(dims: dict[int, int], window: int | None) -> str:
    if not dims:
        return "  (zero)"
    rows = []
    top = max(dims)
    for d in range(min(0, min(dims)), top + 1):
        mark = "  (truncation artifact)" if window is not None and d > window and dims.get(d) else ""
        rows.append(f"  H_{d:<3} {dims.get(d, 0):>3}{mark}")
    return "\n".join(rows)


def _page_table(dims: dict) -> str:
    if not dims:
        return "  (zero)"
    ps = [p for p, _ in dims]
    qs = [q for _, q in dims]
    cols = range(min(ps), max(ps) + 1)
    header = "  " + " " * 5 + "".join(f"{'p=' + str(p):>6}" for p in cols)
    rows = [header]
    for q in range(max(qs), min(qs) - 1, -1):
        cells = "".join(f"{(dims.get((p, q)) or '.'):>6}" for p in cols)
        rows.append(f"  {'q=' + str(q):<5}{cells}")
    return "\n".join(rows)


def _restrict(dims, window):
    if window is None:
        return dict(dims)
    return {k: v for k, v in dims.items() if (sum(k) if isinstance(k, tuple) else k) <= window}


def run_report(spec: FibrationSpec, max_page: int | None = None, compare: bool = False, cross_check: bool = True) -> Report:
    """Run every check and computation on a spec.

    A failing structure equation yields a report whose checks list the
    witnesses; nothing is raised.
    """
    datum = spec.datum
    checks: dict[str, Any] = {}
    bad_fibers = []
    for x in datum.points:
        w = validate_complex(datum.fibers[x.id])
        if w is not None:
            bad_fibers.append({"point": x.id, "degree": w.degree, "generator": w.generator})
    checks["fibers"] = {"ok": not bad_fibers, "witnesses": bad_fibers}
    witnesses = check_structure_equation(datum)
    checks["structure_equation"] = {
        "ok": not witnesses,
        "witnesses": [{"from": w.source, "to": w.target, "degree": w.degree, "generator": w.generator} for w in witnesses],
    }
    report = Report(spec.name, checks, spec.validity_window)
    if witnesses or bad_fibers:
        return report
    fc = build_total_complex(datum)
    sq = validate_complex(fc.complex)
    sq_w = [] if sq is None else [{"degree": sq.degree, "generator": sq.generator}]
    checks["d_squared"] = {"ok": sq is None, "witnesses": sq_w}
    fw = validate_filtration(fc)
    fw_w = [] if fw is None else [{"generator": fw.generator, "target": fw.target}]
    checks["filtration"] = {"ok": fw is None, "witnesses": fw_w}
    if not report.checks_ok:
        return report

    report.homology = homology_dims(fc.complex)
    inf, r_star = infinity_page(fc)
    report.stabilization = r_star
    report.infinity = inf.dims
    report.associated_graded = associated_graded_of_homology(fc)
    last = max_page if max_page is not None else max(r_star, 2)
    computed = {}
    for r in range(1, last + 1):
        pg = page(fc, r)
        computed[r] = pg
        report.pages.append({"r": r, "dims": _triples(pg.dims), "differential_ranks": _triples(pg.differential_ranks())})

    if cross_check:
        p1 = computed[1] if 1 in computed else page(fc, 1)
        p2 = computed[2] if 2 in computed else page(fc, 2)
        e1 = e1_complex(datum)
        enriched = e2_dims(datum)
        e1_ok = e1.dims() == p1.dims and e1.ranks() == p1.differential_ranks()
        report.e2 = {
            "enriched": _triples(enriched),
            "spectral": _triples(p2.dims),
            "e1_agrees": e1_ok,
            "ok": e1_ok and enriched == p2.dims,
        }

    gac = spec.group_algebra_complex()
    if gac is not None:
        cell = cellular_local_homology(gac, spec.monodromy.local_system(spec.group))
        report.oracle = {"system": spec.monodromy.system, "cellular_homology": _degrees(cell), "ok": cell == report.homology}

    if compare:
        report.comparison = compare_reference(spec, report, fc)
    return report


def compare_reference(spec: FibrationSpec, report: Report, fc=None) -> dict[str, Any]:
    """Diff the report against the spec file's reference block (inside the validity window, if any)."""
    ref = spec.reference
    if ref is None:
        return {"ok": False, "mismatches": ["spec has no reference block"]}
    window = spec.validity_window
    mismatches = []
    got_h = _restrict(report.homology, window)
    want_h = _restrict(ref.homology, window)
    if got_h != want_h:
        mismatches.append(f"homology: expected {_inline(want_h)}, got {_inline(got_h)}")
    if fc is None:
        fc = build_total_complex(spec.datum)
    for key, want in sorted(ref.pages.items()):
        got = report.infinity if key == "inf" else page(fc, int(key)).dims
        got, want = _restrict(got, window), _restrict(want, window)
        if got != want:
            mismatches.append(f"E^{key}: expected {_triples(want)}, got {_triples(got)}")
    if ref.stabilization is not None and ref.stabilization != report.stabilization:
        mismatches.append(f"stabilization: expected {ref.stabilization}, got {report.stabilization}")
    return {"ok": not mismatches, "mismatches": mismatches}
