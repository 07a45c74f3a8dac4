"""Invariant reports for projective varieties and checks for almost minimal degree.

A report bundles the Betti diagram, Hilbert series and numeric invariants of
``S/I``.  For varieties with ``deg = codim + 2`` it also carries the case
label of the codimension 2, 3, 4 classification and a list of named checks
(Hilbert series formula, quadric count, Betti number bounds, cubic count,
regularity, dimension caps).  Checks record failures instead of raising, so a
report can be used to look for counterexamples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from math import comb
from typing import Dict, List, Optional, Tuple

import yaml

from .groebner import Ideal, leading_term_ideal
from .hilbert import (
    HilbertSeries,
    NumericInvariants,
    hilbert_amd_predicted,
    hilbert_series_monomial,
    numeric_invariants,
)
from .resolution import BettiDiagram, betti_diagram, minimal_resolution

CASE_LABELS = ("2.1a", "2.1b", "2.1c", "2.2a", "2.2b", "2.2c",
               "2.4a", "2.4b-i", "2.4b-ii", "2.4c", "2.4d", "out_of_table")

# largest dimension allowed in each case; cases without an entry are unbounded
DIMENSION_CAPS = {"2.1b": 4, "2.2a": 6, "2.2b": 4, "2.2c": 5,
                  "2.4a": 4, "2.4b-i": 4, "2.4b-ii": 4, "2.4c": 5, "2.4d": 6}


def case_tables() -> Dict[str, List[List[int]]]:
    """Expected Betti rows (row 1, row 2) for every case label."""
    text = resources.files("amdeg").joinpath("data/case_tables.yaml").read_text()
    return {str(k): v for k, v in yaml.safe_load(text).items()}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class VarietyReport:
    invariants: NumericInvariants
    betti: BettiDiagram
    series: HilbertSeries
    num_vars: int
    degree_class: str
    theorem_case: Optional[str] = None
    checks: List[Check] = field(default_factory=list)

    @property
    def nondegenerate(self) -> bool:
        return self.betti[(1, 0)] == 0

    @property
    def quadrics(self) -> int:
        return self.betti[(1, 1)]

    @property
    def cubics(self) -> int:
        return self.betti[(1, 2)]

    @property
    def is_gorenstein(self) -> bool:
        pd = self.invariants.projective_dimension
        return self.invariants.is_acm and self.betti.column_total(pd) == 1

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "invariants": self.invariants.to_dict(),
            "betti": self.betti.to_dict(),
            "hilbert_series": self.series.to_dict(),
            "degree_class": self.degree_class,
            "theorem_case": self.theorem_case,
            "nondegenerate": self.nondegenerate,
            "acm": self.invariants.is_acm,
            "gorenstein": self.is_gorenstein,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def pretty(self) -> str:
        inv = self.invariants
        lines = [
            f"ambient P^{self.num_vars - 1}: dim {inv.dim}, codim {inv.codim}, degree {inv.degree}",
            f"depth {inv.depth}, codepth {inv.codepth}, regularity {inv.regularity}"
            + (", ACM" if inv.is_acm else "") + (", Gorenstein" if self.is_gorenstein else ""),
            f"degree class: {self.degree_class}"
            + (f", case {self.theorem_case}" if self.theorem_case else ""),
            f"Hilbert series numerator {self.series.reduced_numerator} over (1-t)^{self.series.dimension}",
            self.betti.pretty(),
        ]
        for c in self.checks:
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        return "\n".join(lines)


# --- Betti number bounds ---------------------------------------------------------


@dataclass(frozen=True)
class BettiBounds:
    """Intervals for ``u_i = beta_{i,i+1}`` and ``v_i = beta_{i,i+2}``, ``1 <= i <= c+q``."""

    c: int
    q: int
    u: Dict[int, Tuple[int, int]]
    v: Dict[int, Tuple[int, int]]

    def difference(self, i: int) -> int:
        """Prescribed value of ``v_i - u_{i+1}`` for ``1 <= i < c``."""
        c, q = self.c, self.q
        if not 1 <= i < c:
            raise ValueError("difference identity holds for 1 <= i < c")
        return comb(c + q + 1, i + 1) - (c + 1) * comb(c, i + 1) + comb(c, i + 2)

    @property
    def length(self) -> int:
        return self.c + self.q


def lemma32_bounds(c: int, q: int) -> BettiBounds:
    """Bounds on the two Betti rows of a non-ACM variety of almost minimal degree."""
    if c < 2 or q < 1:
        raise ValueError(f"need c >= 2 and q >= 1 (got c={c}, q={q})")
    u: Dict[int, Tuple[int, int]] = {}
    v: Dict[int, Tuple[int, int]] = {}
    for i in range(1, c + q + 1):
        if i == 1:
            val = comb(c + 1, 2) - q - 1
            u[i] = (val, val)
        elif i < c - q:
            u[i] = (i * comb(c, i + 1), (c + 1) * comb(c, i) - comb(c, i + 1))
        elif i < c:
            u[i] = (i * comb(c, i + 1),) * 2
        else:
            u[i] = (0, 0)
        if i < c - q - 1:
            v[i] = (max(0, comb(c + q - 1, i + 1) - (i + 2) * comb(c, i + 1)), comb(c + q + 1, i + 1))
        elif i < c:
            val = comb(c + q + 1, i + 1) - (i + 2) * comb(c, i + 1)
            v[i] = (val, val)
        else:
            v[i] = (comb(c + q + 1, i + 1),) * 2
    return BettiBounds(c, q, u, v)


def check_bounds(betti: BettiDiagram, bounds: BettiBounds) -> List[Check]:
    """Compare a diagram against ``bounds``; one check for the rows, one for the identity."""
    bad = []
    for i in range(1, bounds.length + 1):
        for row, name, table in ((1, "u", bounds.u), (2, "v", bounds.v)):
            lo, hi = table[i]
            val = betti[(i, row)]
            if not lo <= val <= hi:
                bad.append(f"{name}_{i}={val} not in [{lo},{hi}]")
    for (i, j), val in sorted(betti.entries.items()):
        if j not in (1, 2) or i > bounds.length:
            bad.append(f"beta_{{{i},{i + j}}}={val} outside rows 1-2 / columns 1-{bounds.length}")
    checks = [Check("betti_bounds", not bad, "; ".join(bad))]
    bad = []
    for i in range(1, bounds.c):
        got = betti[(i, 2)] - betti[(i + 1, 1)]
        want = bounds.difference(i)
        if got != want:
            bad.append(f"v_{i}-u_{i + 1}={got}, expected {want}")
    checks.append(Check("betti_difference_identity", not bad, "; ".join(bad)))
    return checks


# --- classification --------------------------------------------------------------


def degree_class(inv: NumericInvariants) -> str:
    if inv.degree == inv.codim + 1:
        return "minimal"
    if inv.degree == inv.codim + 2:
        return "almost_minimal"
    return "other"


def dispatch_case(inv: NumericInvariants, betti: BettiDiagram) -> str:
    """Case label for an almost-minimal-degree variety of codimension 2, 3 or 4."""
    c, q = inv.codim, inv.codepth
    if c == 2:
        if q == 0:
            return "2.1a"
        # the exceptional case has no quadrics at all
        return "2.1c" if betti[(1, 1)] == 0 else "2.1b"
    if c == 3:
        return {0: "2.2a", 1: "2.2b", 2: "2.2c"}.get(q, "out_of_table")
    if c == 4:
        if q == 1:
            return "2.4b-i" if betti[(1, 2)] == 1 else "2.4b-ii"
        return {0: "2.4a", 2: "2.4c", 3: "2.4d"}.get(q, "out_of_table")
    raise ValueError("case labels exist only for codimension 2, 3, 4")


def check_report(report: VarietyReport) -> List[Check]:
    """Named checks for an almost-minimal-degree report (empty list otherwise)."""
    if report.degree_class != "almost_minimal":
        return []
    inv, betti = report.invariants, report.betti
    c, d, q = inv.codim, inv.dim, inv.codepth
    checks: List[Check] = [Check("nondegenerate", report.nondegenerate,
                                 "" if report.nondegenerate else f"{betti[(1, 0)]} linear forms in the ideal")]

    try:
        pred = hilbert_amd_predicted(c, d, q)
        ok = pred == report.series
        checks.append(Check("hilbert_series", ok, "" if ok else
                            f"computed {report.series.reduced_numerator}, predicted {pred.reduced_numerator}"))
    except ValueError as e:
        checks.append(Check("hilbert_series", False, str(e)))

    want = comb(c + 1, 2) - q - 1
    checks.append(Check("quadric_count", report.quadrics == want,
                        f"{report.quadrics} quadrics, expected {want}"))

    if q >= 1 and c >= 2:
        checks.extend(check_bounds(betti, lemma32_bounds(c, q)))

    if q == 1 and c >= 4:
        checks.append(Check("at_most_one_cubic", report.cubics <= 1, f"{report.cubics} cubic generators"))

    checks.append(Check("regularity", inv.regularity <= 2, f"reg A_X = {inv.regularity}"))

    if q >= 1:
        checks.append(Check("depth_range", 1 <= inv.depth <= 4, f"depth {inv.depth}"))

    if d > c + 2 and c >= 3:
        ok = c == 3 and report.is_gorenstein
        checks.append(Check("large_dimension_gorenstein", ok,
                            f"dim {d} > codim + 2 with codim {c}" + ("" if ok else ", not codim-3 Gorenstein")))

    case = report.theorem_case
    if case is not None:
        if case == "out_of_table":
            checks.append(Check("case_table", False, f"no case for codim {c}, codepth {q}"))
        else:
            cap = DIMENSION_CAPS.get(case)
            if cap is not None:
                checks.append(Check("dimension_cap", d <= cap, f"dim {d}, cap {cap}"))
            expected = BettiDiagram.from_rows(case_tables()[case])
            ok = expected == betti
            checks.append(Check("case_table", ok, "" if ok else
                                f"diagram {betti.rows()} differs from case {case} {expected.rows()}"))
    return checks


def report_from(ideal_vars: int, betti: BettiDiagram, series: HilbertSeries) -> VarietyReport:
    inv = numeric_invariants(series, betti, ideal_vars)
    cls = degree_class(inv)
    case = dispatch_case(inv, betti) if cls == "almost_minimal" and inv.codim in (2, 3, 4) else None
    report = VarietyReport(inv, betti, series, ideal_vars, cls, case)
    report.checks = check_report(report)
    return report


def analyze(I: Ideal, degree_cap: Optional[int] = None, resolution=None) -> VarietyReport:
    """Minimal resolution, Hilbert series, invariants, case label and checks of ``S/I``.

    A minimal resolution already at hand may be passed in ``resolution``.
    """
    if I.is_zero:
        raise ValueError("cannot analyze the zero ideal")
    if I.is_unit():
        raise ValueError("cannot analyze the unit ideal")
    if resolution is None:
        resolution = minimal_resolution(I, degree_cap=degree_cap)
    betti = betti_diagram(resolution)
    series = hilbert_series_monomial(leading_term_ideal(I))
    return report_from(I.ring.num_vars, betti, series)
