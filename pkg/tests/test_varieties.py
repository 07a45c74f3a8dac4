import pytest
import sympy

from amdeg.classify import analyze
from amdeg.groebner import Ideal, buchberger, minimal_generators
from amdeg.pipeline import evaluate
from amdeg.polyring import LinearChange, RingMismatchError, apply_linear_change
from amdeg.varieties import (
    PointOnVarietyError,
    ProjectivePoint,
    ScrollType,
    center_change,
    enumerate_scroll_types,
    generic_linear_section,
    partitions,
    pfaffian_5x5_generic,
    project_from_point,
    random_point,
    scroll_ideal,
    scroll_variable_names,
    segre_p1p1p1,
    segre_p2xp2,
    veronese_ideal,
    veronese_secant_det,
)

P = 32003


def test_scroll_type_validation():
    t = ScrollType.parse("S(1, 3)")
    assert t.parts == (3, 1) and t.k == 2 and t.degree == 4 and t.ambient_dim == 5 and t.codim == 3
    for bad in ("S()", "S(0,2)", "T(1)", "S(1,-1)"):
        with pytest.raises(ValueError):
            ScrollType.parse(bad)


def test_point_normalization():
    p = ProjectivePoint.parse("(2:0:4)")
    assert p.coords == (2 * pow(4, -1, P) % P, 0, 1)
    assert str(ProjectivePoint.parse("(-1:0:1)")) == "(-1:0:1)"
    with pytest.raises(ValueError):
        ProjectivePoint([0, 0, 0])
    with pytest.raises(ValueError):
        ProjectivePoint.parse("(1,2)")


def test_smallest_scroll():
    I = scroll_ideal(ScrollType((1, 1)))
    assert scroll_variable_names(ScrollType((1, 1))) == ["x10", "x11", "x20", "x21"]
    assert len(I.generators) == 1
    (g,) = I.generators
    # x10*x21 - x11*x20 in flattened names
    assert g == I.ring.parse("x0*x3 - x1*x2") or g == -I.ring.parse("x0*x3 - x1*x2")


def test_scroll_invariants():
    r = analyze(scroll_ideal(ScrollType((3,))))
    assert (r.invariants.dim, r.invariants.degree, r.invariants.codim) == (1, 3, 2)
    I = scroll_ideal(ScrollType((5, 1)))
    assert I.ring.num_vars == 8 and len(I.generators) == 15
    r = analyze(I)
    assert (r.invariants.dim, r.invariants.degree, r.invariants.codim) == (2, 6, 5)


@pytest.mark.parametrize("c", [1, 2, 3])
def test_scrolls_have_minimal_degree(c):
    for t, _, _ in enumerate_scroll_types(c):
        r = analyze(scroll_ideal(t))
        assert r.degree_class == "minimal"
        assert r.invariants.dim == t.k and r.invariants.degree == t.degree == r.invariants.codim + 1
        assert r.theorem_case is None


def test_veronese():
    I = veronese_ideal()
    assert len(I.generators) == 6 and I.ring.num_vars == 6
    assert minimal_generators(I)[0] == [(2, 6)]
    r = analyze(I)
    assert (r.invariants.dim, r.invariants.degree, r.invariants.codim) == (2, 4, 3)
    assert veronese_secant_det().evaluate([1, 0, 0, 1, 0, 1]) == 1


@pytest.mark.parametrize("seed", range(4))
def test_generic_veronese_projection_has_seven_cubics(seed):
    P_ = random_point(6, 100 + seed)
    assert veronese_secant_det().evaluate(P_.coords) != 0
    J = project_from_point(veronese_ideal(), P_)
    assert minimal_generators(J)[0] == [(3, 7)]


def test_segre_and_pfaffian():
    r = analyze(segre_p2xp2())
    inv = r.invariants
    assert (inv.dim, inv.codim, inv.degree, inv.depth, inv.codepth) == (4, 4, 6, 5, 0)
    I = segre_p1p1p1()
    assert I.ring.num_vars == 8 and minimal_generators(I)[0] == [(2, 9)]
    r = analyze(I)
    assert (r.invariants.dim, r.invariants.codim, r.invariants.degree) == (3, 4, 6) and r.is_gorenstein
    r = analyze(pfaffian_5x5_generic())
    assert (r.invariants.dim, r.invariants.codim, r.invariants.degree) == (6, 3, 5)
    assert r.is_gorenstein and r.betti.rows() == [[5, 5, 0], [0, 0, 1]]


def test_projection_errors():
    I = scroll_ideal(ScrollType((3,)))
    with pytest.raises(PointOnVarietyError):
        project_from_point(I, ProjectivePoint([1, 0, 0, 0]))
    with pytest.raises(RingMismatchError):
        project_from_point(I, ProjectivePoint([1, 0, 1]))


@pytest.mark.parametrize("spec,point", [
    ("S(4)", (0, 1, 0, 0, 1)),
    ("S(3,1)", (0, 1, 0, 0, 3, 0)),
    ("S(2,2)", (1, 0, 3, 0, 1, 5)),
    ("S(3,3)", (1, 0, 0, 0, 0, 0, 0, 1)),
])
def test_projection_independent_of_completion(spec, point):
    """Two completions give the same image up to the induced change on the target."""
    I = evaluate(spec).ideal
    P_ = ProjectivePoint(point)
    nz = [i for i, v in enumerate(P_.coords) if v]
    a, b = nz[0], nz[-1]
    A = project_from_point(I, P_, pivot=a)
    B = project_from_point(I, P_, pivot=b)
    n = len(P_)
    T1 = sympy.Matrix(center_change(P_, a).matrix)
    T2 = sympy.Matrix(center_change(P_, b).matrix)
    M = (T2.inv_mod(P) * T1).applyfunc(lambda v: v % P)
    assert list(M[:, n - 1]) == [0] * (n - 1) + [1]
    back = M[: n - 1, : n - 1].inv_mod(P)
    change = LinearChange(back.tolist(), P)
    moved = Ideal(B.ring, [apply_linear_change(g, change).with_ring(B.ring) for g in A.generators])
    assert buchberger(moved) == buchberger(B)
    assert analyze(A).betti == analyze(B).betti
    with pytest.raises(ValueError):
        project_from_point(I, P_, pivot=next(i for i, v in enumerate(P_.coords) if not v))


def test_projection_depth_bound():
    r = analyze(evaluate("project(S(1,1,1,1,1), (0:1:1:0:0:0:0:0:0:0))").ideal)
    assert r.invariants.depth == 4 and r.invariants.codepth == 2


def test_generic_section():
    I = scroll_ideal(ScrollType((1, 1)))
    assert generic_linear_section(I, 0, 5) is I
    C = generic_linear_section(I, 1, 5)
    r = analyze(C)
    assert C.ring.num_vars == 3 and (r.invariants.dim, r.invariants.degree) == (1, 2)
    with pytest.raises(ValueError):
        generic_linear_section(I, 3, 5)
    S = segre_p2xp2()
    H = generic_linear_section(S, 1, 0)
    assert analyze(H).betti == analyze(S).betti


def test_partitions():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_enumerate_small():
    rows = enumerate_scroll_types(1)
    assert [t.parts for t, _, _ in rows] == [(3,), (2, 1), (1, 1, 1)]
    rows = enumerate_scroll_types(2)
    assert [(t.parts, d) for t, _, d in rows] == [((4,), 1), ((3, 1), 2), ((2, 2), 2), ((2, 1, 1), 3), ((1, 1, 1, 1), 4)]
    assert [r1 for _, r1, _ in rows] == [4, 5, 5, 6, 7]
    for c in range(1, 7):
        assert max(d for _, _, d in enumerate_scroll_types(c)) == c + 2
    with pytest.raises(ValueError):
        enumerate_scroll_types(0)


def test_second_codepth_one_diagram_center_search():
    """The center with seven listed coordinates needs one more; only one completion
    by an inserted zero gives a codepth one surface, and it has no cubic generator."""
    listed = [1, 0, 0, 0, 0, 0, 1]
    I = scroll_ideal(ScrollType((3, 3)))
    found = {}
    for pos in range(len(listed) + 1):
        coords = listed[:pos] + [0] + listed[pos:]
        try:
            r = analyze(project_from_point(I, ProjectivePoint(coords)))
        except PointOnVarietyError:
            continue
        found[tuple(coords)] = r.theorem_case
    assert found[(1, 0, 0, 0, 0, 0, 0, 1)] == "2.4b-ii"
    assert [c for c, case in found.items() if case == "2.4b-ii"] == [(1, 0, 0, 0, 0, 0, 0, 1)]
    p1 = analyze(project_from_point(I, ProjectivePoint((0, 0, 0, 0, 1, 0, 0, 1))))
    assert p1.theorem_case == "2.4b-i"
