"""Constructors for the varieties of minimal and almost minimal degree used here.

Scroll variables are flattened to ``x0 .. x_s`` block by block; the display
names ``x{i}{j}`` of the two-row matrix are available from
:func:`scroll_variable_names`.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .groebner import Ideal, eliminate, minimalized, monomials_of_degree
from .polyring import (
    DEFAULT_PRIME,
    LinearChange,
    Polynomial,
    RingContext,
    RingMismatchError,
    apply_linear_change,
)


class PointOnVarietyError(ValueError):
    pass


@dataclass(frozen=True)
class ScrollType:
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(a) for a in self.parts)
        if not parts:
            raise ValueError("a scroll needs at least one part")
        if any(a < 1 for a in parts):
            raise ValueError("scroll parts must be >= 1 (a zero part gives a cone)")
        object.__setattr__(self, "parts", tuple(sorted(parts, reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "ScrollType":
        m = re.fullmatch(r"\s*S\s*\(\s*([0-9,\s]*)\)\s*", text)
        if not m:
            raise ValueError(f"not a scroll type: {text!r}")
        body = m.group(1).strip()
        if not body:
            raise ValueError("a scroll needs at least one part")
        return cls(tuple(int(a) for a in body.split(",")))

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def dim(self) -> int:
        return self.k

    @property
    def degree(self) -> int:
        return sum(self.parts)

    @property
    def ambient_dim(self) -> int:
        return self.k - 1 + sum(self.parts)

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.k

    def __str__(self):
        return "S(" + ",".join(map(str, self.parts)) + ")"


class ProjectivePoint:
    """Point of ``P^{n-1}`` over GF(p), scaled so its last nonzero coordinate is 1."""

    def __init__(self, coords: Sequence[int], modulus: int = DEFAULT_PRIME):
        c = [int(v) % modulus for v in coords]
        nz = [i for i, v in enumerate(c) if v]
        if not nz:
            raise ValueError("the zero vector is not a projective point")
        inv = pow(c[nz[-1]], -1, modulus)
        self.coords = tuple(v * inv % modulus for v in c)
        self.modulus = modulus

    @classmethod
    def parse(cls, text: str, modulus: int = DEFAULT_PRIME) -> "ProjectivePoint":
        m = re.fullmatch(r"\s*\(\s*(-?\d+(?:\s*:\s*-?\d+)*)\s*\)\s*", text)
        if not m:
            raise ValueError(f"not a projective point: {text!r}")
        return cls([int(v) for v in m.group(1).split(":")], modulus)

    def __len__(self):
        return len(self.coords)

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __str__(self):
        p = self.modulus
        return "(" + ":".join(str(v if v <= p // 2 else v - p) for v in self.coords) + ")"

    __repr__ = __str__


def random_point(n: int, seed: int, modulus: int = DEFAULT_PRIME) -> ProjectivePoint:
    rng = random.Random(seed)
    while True:
        c = [rng.randrange(modulus) for _ in range(n)]
        if any(c):
            return ProjectivePoint(c, modulus)


# --- constructors ---------------------------------------------------------------


def _minors2(ring: RingContext, top: Sequence[int], bottom: Sequence[int]) -> List[Polynomial]:
    x = ring.gens()
    out = []
    for i, j in combinations(range(len(top)), 2):
        out.append(x[top[i]] * x[bottom[j]] - x[top[j]] * x[bottom[i]])
    return out


def scroll_variable_names(t: ScrollType) -> List[str]:
    return [f"x{i}{j}" if len(t.parts) < 10 and a < 10 else f"x{i}_{j}"
            for i, a in enumerate(t.parts, start=1) for j in range(a + 1)]


def scroll_matrix(t: ScrollType) -> Tuple[List[int], List[int]]:
    """Variable indices of the top and bottom rows of the two-row scroll matrix."""
    top, bottom = [], []
    base = 0
    for a in t.parts:
        top.extend(range(base, base + a))
        bottom.extend(range(base + 1, base + a + 1))
        base += a + 1
    return top, bottom


def scroll_ideal(t: ScrollType, modulus: int = DEFAULT_PRIME) -> Ideal:
    """2x2 minors of the scroll matrix, in ``k + sum(a)`` variables."""
    if not isinstance(t, ScrollType):
        t = ScrollType(tuple(t))
    ring = RingContext(t.ambient_dim + 1, modulus=modulus)
    top, bottom = scroll_matrix(t)
    return Ideal(ring, _minors2(ring, top, bottom))


def _independent(ring: RingContext, polys: Sequence[Polynomial]) -> List[Polynomial]:
    picked = linalg.independent_rows([f.term_dict() for f in polys], ring.modulus)
    return [polys[i] for i in picked]


VERONESE_MATRIX = ((0, 1, 2), (1, 3, 4), (2, 4, 5))


def veronese_ideal(modulus: int = DEFAULT_PRIME) -> Ideal:
    """Veronese surface in P^5: 2x2 minors of the symmetric 3x3 matrix."""
    ring = RingContext(6, modulus=modulus)
    x = ring.gens()
    M = VERONESE_MATRIX
    minors = []
    for r1, r2 in combinations(range(3), 2):
        for c1, c2 in combinations(range(3), 2):
            minors.append(x[M[r1][c1]] * x[M[r2][c2]] - x[M[r1][c2]] * x[M[r2][c1]])
    return Ideal(ring, _independent(ring, minors))


def veronese_secant_det(modulus: int = DEFAULT_PRIME) -> Polynomial:
    """Determinant of the symmetric matrix; its zero set is the secant variety."""
    ring = RingContext(6, modulus=modulus)
    x = ring.gens()
    a = [[x[v] for v in row] for row in VERONESE_MATRIX]
    return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))


def segre_p2xp2(modulus: int = DEFAULT_PRIME) -> Ideal:
    """P^2 x P^2 in P^8: 2x2 minors of the generic 3x3 matrix."""
    ring = RingContext(9, modulus=modulus)
    x = ring.gens()
    minors = []
    for r1, r2 in combinations(range(3), 2):
        for c1, c2 in combinations(range(3), 2):
            minors.append(x[3 * r1 + c1] * x[3 * r2 + c2] - x[3 * r1 + c2] * x[3 * r2 + c1])
    return Ideal(ring, minors)


def segre_p1p1p1(modulus: int = DEFAULT_PRIME) -> Ideal:
    """P^1 x P^1 x P^1 in P^7, as the degree-2 kernel of the monomial map.

    Variable ``x_{4a+2b+c}`` maps to ``s_a t_b u_c``.
    """
    ring = RingContext(8, modulus=modulus)
    image = [((a, 1 - a), (b, 1 - b), (c, 1 - c))
             for a in (1, 0) for b in (1, 0) for c in (1, 0)]
    # exponent of s_0 etc.; the image of x_i is a triple of (s-exponents, t-, u-)
    quads = monomials_of_degree(8, 2)
    targets = {}
    cols = []
    for m in quads:
        img = [0] * 6
        for i, e in enumerate(m):
            for f in range(3):
                img[2 * f] += e * image[i][f][0]
                img[2 * f + 1] += e * image[i][f][1]
        cols.append(targets.setdefault(tuple(img), len(targets)))
    A = np.zeros((len(targets), len(quads)), dtype=np.int64)
    for j, r in enumerate(cols):
        A[r, j] = 1
    N = linalg.nullspace(A, modulus)
    gens = [Polynomial(ring, {quads[j]: int(v) for j, v in enumerate(row) if v}) for row in N]
    return Ideal(ring, gens)


def _skew(i: int, j: int) -> int:
    """Variable index of the (i, j) entry, i < j, of the generic skew 5x5 matrix."""
    return sum(4 - r for r in range(i)) + (j - i - 1)


def pfaffian_5x5_generic(modulus: int = DEFAULT_PRIME) -> Ideal:
    """The five 4x4 Pfaffians of the generic skew-symmetric 5x5 matrix (10 variables)."""
    ring = RingContext(10, modulus=modulus)
    x = ring.gens()
    gens = []
    for drop in range(5):
        a, b, c, d = [i for i in range(5) if i != drop]
        gens.append(x[_skew(a, b)] * x[_skew(c, d)] - x[_skew(a, c)] * x[_skew(b, d)]
                    + x[_skew(a, d)] * x[_skew(b, c)])
    return Ideal(ring, gens)


# --- projection and sections -----------------------------------------------------


def center_change(P: ProjectivePoint, pivot: Optional[int] = None) -> LinearChange:
    """Invertible change whose last column is ``P``.

    The remaining columns are the unit vectors other than ``e_pivot``; by
    default the pivot is the first nonzero coordinate of ``P``.
    """
    n = len(P)
    if pivot is None:
        pivot = next(i for i, v in enumerate(P.coords) if v)
    if not P.coords[pivot]:
        raise ValueError("pivot coordinate of the point is zero")
    rest = [j for j in range(n) if j != pivot]
    T = [[0] * n for _ in range(n)]
    for k, j in enumerate(rest):
        T[j][k] = 1
    for i in range(n):
        T[i][n - 1] = P.coords[i]
    return LinearChange(T, P.modulus)


def pull_back(I: Ideal, T: LinearChange) -> Ideal:
    return Ideal(I.ring, [apply_linear_change(g, T) for g in I.generators])


def project_from_point(I: Ideal, P: ProjectivePoint, pivot: Optional[int] = None) -> Ideal:
    """Ideal of the image of ``V(I)`` under projection from ``P`` (one fewer variable)."""
    if len(P) != I.ring.num_vars or P.modulus != I.ring.modulus:
        raise RingMismatchError("point does not live in the ambient space of the ideal")
    if all(g.evaluate(P.coords) == 0 for g in I.generators):
        raise PointOnVarietyError(f"point {P} lies on the variety")
    J = pull_back(I, center_change(P, pivot))
    return minimalized(eliminate(J, 1))


def random_change(n: int, seed: int, modulus: int = DEFAULT_PRIME) -> LinearChange:
    rng = random.Random(seed)
    while True:
        try:
            return LinearChange([[rng.randrange(modulus) for _ in range(n)] for _ in range(n)], modulus)
        except ValueError:
            continue


def generic_linear_section(I: Ideal, count: int, seed: int = 0, dim_ring: Optional[int] = None) -> Ideal:
    """Intersect with ``count`` seeded random hyperplanes.

    After a random change of coordinates the hyperplanes are ``x_{n-1} = ... = 0``;
    substituting zero drops those variables.  ``dim_ring`` is ``dim S/I`` if
    already known, used for the range check.
    """
    n = I.ring.num_vars
    if count < 0:
        raise ValueError("count must be non-negative")
    if count == 0:
        return I
    if dim_ring is None:
        from .groebner import leading_term_ideal
        from .hilbert import hilbert_series_monomial

        dim_ring = hilbert_series_monomial(leading_term_ideal(I)).dimension
    if count >= dim_ring:
        raise ValueError(f"cannot cut {count} times a ring of dimension {dim_ring}")
    J = pull_back(I, random_change(n, seed, I.ring.modulus))
    sub = I.ring.subring(n - count)
    gens = []
    for g in J.generators:
        t = {m[: n - count]: c for m, c in g.term_dict().items() if not any(m[n - count:])}
        gens.append(Polynomial(sub, t))
    return minimalized(Ideal(sub, gens))


# --- scroll types ---------------------------------------------------------------


def partitions(total: int, largest: Optional[int] = None):
    """Partitions of ``total`` in lexicographically decreasing order."""
    if largest is None:
        largest = total
    if total == 0:
        yield ()
        return
    for a in range(min(total, largest), 0, -1):
        for rest in partitions(total - a, a):
            yield (a,) + rest


def enumerate_scroll_types(c: int) -> List[Tuple[ScrollType, int, int]]:
    """Scrolls ``S(a_1..a_k)`` with ``sum a = c + 2``, with ``r + 1`` and ``dim X``.

    ``r = k - 2 + sum a`` is the ambient dimension after projecting from a point.
    Rows are ordered by the number of parts, then lexicographically decreasing.
    """
    if c < 1:
        raise ValueError("codimension must be >= 1")
    out = []
    for parts in sorted(partitions(c + 2), key=len):
        k = len(parts)
        out.append((ScrollType(parts), k - 2 + sum(parts) + 1, k))
    return out
