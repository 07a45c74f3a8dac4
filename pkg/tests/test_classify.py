import json

import pytest

from amdeg.classify import (
    CASE_LABELS,
    DIMENSION_CAPS,
    analyze,
    case_tables,
    check_bounds,
    dispatch_case,
    lemma32_bounds,
    report_from,
)
from amdeg.groebner import Ideal
from amdeg.hilbert import HilbertSeries, NumericInvariants, binomial_power, hilbert_amd_predicted, poly_add, poly_mul
from amdeg.pipeline import evaluate
from amdeg.polyring import RingContext
from amdeg.resolution import BettiDiagram

# (codim, codepth) of each tabulated case
CASE_CQ = {"2.1a": (2, 0), "2.1b": (2, 1), "2.1c": (2, 2), "2.2a": (3, 0), "2.2b": (3, 1),
           "2.2c": (3, 2), "2.4a": (4, 0), "2.4b-i": (4, 1), "2.4b-ii": (4, 1), "2.4c": (4, 2),
           "2.4d": (4, 3)}


def betti_numerator(b: BettiDiagram):
    num = [1]
    for (i, j), v in b.entries.items():
        num = poly_add(num, [0] * (i + j) + [(-1) ** i * v])
    return num


def synthetic_report(case, d):
    """Report for a variety of dimension ``d`` with the tabulated diagram of ``case``."""
    c, q = CASE_CQ[case]
    betti = BettiDiagram.from_rows(case_tables()[case])
    n = d + c + 1
    return report_from(n, betti, HilbertSeries(hilbert_amd_predicted(c, d, q).numerator, d + 1))


def test_analyze_examples():
    r = analyze(evaluate("segre22").ideal)
    assert r.degree_class == "almost_minimal" and r.theorem_case == "2.4a" and r.all_passed
    R = RingContext(4)
    r = analyze(Ideal.from_strings(R, ["x0*x3 - x1*x2"]))
    assert r.degree_class == "minimal" and r.theorem_case is None and r.checks == []
    r = analyze(evaluate("project(S(4,1), (0:1:0:0:0:0:0))").ideal)
    assert r.invariants.codepth == 1 and r.theorem_case == "2.2b" and r.all_passed


def test_analyze_rejects_trivial_ideals():
    R = RingContext(3)
    with pytest.raises(ValueError):
        analyze(Ideal.zero(R))
    with pytest.raises(ValueError):
        analyze(Ideal(R, [R.one()]))


def test_degenerate_flagged_not_raised():
    R = RingContext(5)
    I = Ideal.from_strings(R, ["x4", "x0*x3 - x1*x2", "x0*x2 - x1^2"])
    r = analyze(I)
    assert not r.nondegenerate
    if r.checks:
        assert not r.all_passed


def test_bounds_examples():
    b = lemma32_bounds(3, 2)
    assert [b.v[i] for i in (3, 4, 5)] == [(15, 15), (6, 6), (1, 1)]
    b = lemma32_bounds(4, 1)
    assert b.u[4] == (0, 0) and b.v[4] == (6, 6)
    b = lemma32_bounds(2, 1)
    assert b.u[1] == (1, 1) and [b.v[i] for i in (1, 2, 3)] == [(3, 3), (4, 4), (1, 1)]
    with pytest.raises(ValueError):
        lemma32_bounds(1, 1)
    with pytest.raises(ValueError):
        lemma32_bounds(3, 0)


@pytest.mark.parametrize("c", range(2, 9))
def test_bounds_well_formed(c):
    for q in range(1, c + 2):
        b = lemma32_bounds(c, q)
        for i in range(1, c + q + 1):
            assert b.u[i][0] <= b.u[i][1] and b.v[i][0] <= b.v[i][1]
            if i >= c:
                assert b.u[i] == (0, 0)


def test_fabricated_diagram_fails_bounds():
    rows = [list(r) for r in case_tables()["2.2b"]]
    rows[0][0] += 1
    checks = {ch.name: ch for ch in check_bounds(BettiDiagram.from_rows(rows), lemma32_bounds(3, 1))}
    assert not checks["betti_bounds"].passed
    assert "u_1=5" in checks["betti_bounds"].detail


def test_curve_with_one_cubic():
    r = analyze(evaluate("project(S(8), (0:0:0:0:0:0:1:0:0))").ideal)
    (cubic,) = [ch for ch in r.checks if ch.name == "at_most_one_cubic"]
    assert cubic.passed and r.cubics == 1
    assert r.theorem_case is None and r.invariants.codim == 6


def test_two_codepth_one_tables_differ_in_one_place():
    a = BettiDiagram.from_rows(case_tables()["2.4b-i"])
    b = BettiDiagram.from_rows(case_tables()["2.4b-ii"])
    assert (a[(1, 2)], a[(2, 1)]) == (1, 12) and (b[(1, 2)], b[(2, 1)]) == (0, 11)
    diff = {k for k in set(a.entries) | set(b.entries) if a[k] != b[k]}
    assert diff == {(1, 2), (2, 1)}
    bounds = lemma32_bounds(4, 1)
    for t in (a, b):
        assert t[(1, 2)] - t[(2, 1)] == bounds.difference(1) == -11


@pytest.mark.parametrize("case", sorted(CASE_CQ))
def test_case_tables_consistent(case):
    """Stored diagrams match the closed-form series and, for q >= 1, the bounds."""
    c, q = CASE_CQ[case]
    b = BettiDiagram.from_rows(case_tables()[case])
    pred = hilbert_amd_predicted(c, q + 1, q).numerator
    assert betti_numerator(b) == poly_mul(pred, binomial_power(c))
    assert b[(1, 1)] == c * (c + 1) // 2 - q - 1
    assert b.num_columns == c + q
    if q >= 1:
        assert all(ch.passed for ch in check_bounds(b, lemma32_bounds(c, q)))


@pytest.mark.parametrize("case", sorted(CASE_CQ))
def test_dispatch_recovers_label(case):
    c, q = CASE_CQ[case]
    r = synthetic_report(case, max(q, 1) + (1 if case == "2.1c" else 0))
    assert r.theorem_case == case
    assert r.all_passed, r.failed()


def test_dispatch_out_of_table():
    inv = NumericInvariants(dim=4, codim=3, degree=5, depth=1, codepth=4, regularity=2, projective_dimension=7)
    assert dispatch_case(inv, BettiDiagram()) == "out_of_table"
    with pytest.raises(ValueError):
        dispatch_case(NumericInvariants(1, 5, 7, 1, 1, 2, 6), BettiDiagram())
    assert set(CASE_CQ) | {"out_of_table"} == set(CASE_LABELS)


def test_dimension_cap_violation_reported():
    r = synthetic_report("2.1b", DIMENSION_CAPS["2.1b"] + 1)
    assert r.theorem_case == "2.1b"
    failed = {ch.name for ch in r.failed()}
    # depth d + 1 - q = 5 is also out of range
    assert failed == {"dimension_cap", "depth_range"}


def test_large_dimension_needs_gorenstein():
    r = synthetic_report("2.2b", 6)
    failed = {ch.name for ch in r.failed()}
    assert "large_dimension_gorenstein" in failed
    r = synthetic_report("2.2a", 6)
    assert r.all_passed and r.is_gorenstein


def test_report_json_schema():
    r = analyze(evaluate("segre111").ideal)
    d = json.loads(r.to_json())
    assert set(d) == {"num_vars", "invariants", "betti", "hilbert_series", "degree_class", "theorem_case",
                      "nondegenerate", "acm", "gorenstein", "checks"}
    assert set(d["invariants"]) == {"dim", "codim", "degree", "depth", "codepth", "regularity",
                                    "projective_dimension"}
    assert set(d["hilbert_series"]) == {"numerator", "den_exp", "reduced_numerator", "reduced_den_exp"}
    assert all(set(ch) == {"name", "passed", "detail"} for ch in d["checks"])
    assert "| 1 |" in r.pretty()
