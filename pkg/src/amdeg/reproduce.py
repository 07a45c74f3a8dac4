"""Run the reproduction manifest and compare against the stored tables."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Sequence

import yaml

from .classify import VarietyReport, analyze, case_tables
from .groebner import minimal_generators
from .pipeline import evaluate, is_generic, parse_source
from .polyring import DEFAULT_PRIME
from .resolution import BettiDiagram, minimal_resolution
from .varieties import PointOnVarietyError, enumerate_scroll_types

MAX_ATTEMPTS = 8

TARGETS = ("thm2.1", "thm2.2", "thm2.4", "ex4.0", "ex4.1", "ex4.2", "ex4.3", "ex4.4",
           "ex4.5", "ex4.6", "ex4.7", "tables-c2", "tables-c3", "tables-c4", "all")


def _data(name: str):
    return yaml.safe_load(resources.files("amdeg").joinpath(f"data/{name}").read_text())


def load_manifest() -> dict:
    return _data("manifest.yaml")


def partition_tables() -> Dict[int, list]:
    return {int(k): v for k, v in _data("partition_tables.yaml").items()}


@dataclass
class ItemResult:
    id: str
    passed: bool
    detail: str = ""
    seed: Optional[int] = None
    choices: List[str] = field(default_factory=list)
    report: Optional[dict] = None
    seconds: float = 0.0
    case: Optional[str] = None

    def to_dict(self) -> dict:
        return {"id": self.id, "passed": self.passed, "detail": self.detail, "seed": self.seed,
                "choices": self.choices, "case": self.case, "seconds": round(self.seconds, 3),
                "report": self.report}

    def line(self) -> str:
        extra = f" (seed {self.seed})" if self.seed is not None else ""
        return f"{'PASS' if self.passed else 'FAIL'} {self.id}{extra}" + (f": {self.detail}" if self.detail else "")


def compare(report: VarietyReport, expect: dict, ideal=None, resolution=None) -> List[str]:
    """Differences between a report and the expectations of a manifest item."""
    bad = []
    inv = report.invariants
    for key in ("dim", "codim", "degree", "depth", "codepth"):
        if key in expect and getattr(inv, key) != expect[key]:
            bad.append(f"{key} {getattr(inv, key)} != {expect[key]}")
    if "case" in expect:
        if report.theorem_case != expect["case"]:
            bad.append(f"case {report.theorem_case} != {expect['case']}")
        want = BettiDiagram.from_rows(case_tables()[expect["case"]])
        if report.betti != want:
            bad.append(f"diagram {report.betti.rows()} != {want.rows()}")
    if "case_one_of" in expect and report.theorem_case not in expect["case_one_of"]:
        bad.append(f"case {report.theorem_case} not in {expect['case_one_of']}")
    if "rows" in expect:
        want = BettiDiagram.from_rows(expect["rows"])
        if report.betti != want:
            bad.append(f"diagram {report.betti.rows()} != {want.rows()}")
    if "gorenstein" in expect and report.is_gorenstein != expect["gorenstein"]:
        bad.append(f"gorenstein {report.is_gorenstein} != {expect['gorenstein']}")
    if "generators" in expect and ideal is not None:
        got = [list(t) for t in minimal_generators(ideal)[0]]
        if got != expect["generators"]:
            bad.append(f"minimal generators {got} != {expect['generators']}")
    if "twists" in expect and resolution is not None:
        got = [sorted(F.degrees) for F in resolution.modules]
        if got != [sorted(t) for t in expect["twists"]]:
            bad.append(f"twists {got} != {expect['twists']}")
    for c in report.failed():
        bad.append(f"check {c.name} failed: {c.detail}")
    return bad


def run_item(item: dict, modulus: int = DEFAULT_PRIME, seed: int = 0,
             degree_cap: Optional[int] = None) -> ItemResult:
    t0 = time.perf_counter()
    node = parse_source(item["construct"])
    generic = is_generic(node)
    start = item.get("seed", 0) + seed
    attempts = MAX_ATTEMPTS if generic else 1
    last = None
    for k in range(attempts):
        s = start + k
        try:
            ev = evaluate(node, modulus, s)
        except PointOnVarietyError as e:
            last = ItemResult(item["id"], False, str(e), s if generic else None)
            continue
        res = minimal_resolution(ev.ideal, degree_cap=degree_cap)
        report = analyze(ev.ideal, resolution=res)
        bad = compare(report, item.get("expect", {}), ev.ideal, res)
        last = ItemResult(item["id"], not bad, "; ".join(bad), s if generic else None,
                          ev.choices, report.to_dict(), case=report.theorem_case)
        if not bad:
            break
    last.seconds = time.perf_counter() - t0
    return last


def run_group(group: dict, results: Dict[str, ItemResult]) -> ItemResult:
    missing = [i for i in group["items"] if i not in results]
    if missing:
        return ItemResult(group["id"], False, f"items not run: {missing}")
    got = sorted(results[i].case or "none" for i in group["items"])
    ok = got == sorted(group["cases"])
    return ItemResult(group["id"], ok, f"cases {got}" + ("" if ok else f", expected {sorted(group['cases'])}"))


def run_table(c: int) -> ItemResult:
    want = partition_tables()[c]
    got = [[list(t.parts), r1, d] for t, r1, d in enumerate_scroll_types(c)]
    ok = got == want
    detail = f"{len(got)} rows, max dim X {max(r[2] for r in got)}"
    if not ok:
        detail += f"; expected {want}"
    return ItemResult(f"tables-c{c}", ok, detail)


def select(target: str, manifest: Optional[dict] = None):
    """Items, groups and partition tables belonging to ``target``."""
    if target not in TARGETS:
        raise KeyError(target)
    manifest = manifest or load_manifest()
    if target == "all":
        return manifest["items"], manifest.get("groups", []), list(manifest.get("tables", []))
    if target.startswith("tables-c"):
        return [], [], [int(target[len("tables-c"):])]
    items = [it for it in manifest["items"] if target in it["targets"]]
    groups = [g for g in manifest.get("groups", []) if target in g["targets"]]
    return items, groups, []


def reproduce(target: str, modulus: int = DEFAULT_PRIME, seed: int = 0,
              degree_cap: Optional[int] = None, jobs: int = 1) -> List[ItemResult]:
    """Results in manifest order (items, then groups, then partition tables)."""
    items, groups, tables = select(target)
    args = [(it, modulus, seed, degree_cap) for it in items]
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_item_star, args))
    else:
        results = [run_item(*a) for a in args]
    by_id = {r.id: r for r in results}
    results += [run_group(g, by_id) for g in groups]
    results += [run_table(c) for c in tables]
    return results


def _run_item_star(a: Sequence):
    return run_item(*a)
