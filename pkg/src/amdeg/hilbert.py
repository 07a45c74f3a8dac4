"""Hilbert series of S/I and the numeric invariants read off from them."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import List, Optional, Sequence

from .groebner import MonomialIdeal, minimalize
from .polyring import Monomial, mono_div, mono_gcd


def _trim(c: List[int]) -> List[int]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_add(a: Sequence[int], b: Sequence[int]) -> List[int]:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def one_minus_power(k: int) -> List[int]:
    """Coefficients of ``1 - lam^k``."""
    if k == 0:
        return []
    c = [0] * (k + 1)
    c[0], c[k] = 1, -1
    return c


def binomial_power(e: int) -> List[int]:
    """Coefficients of ``(1 - lam)^e``."""
    return [(-1) ** i * comb(e, i) for i in range(e + 1)]


class HilbertSeries:
    """``numerator(lam) / (1 - lam)^den_exp`` with integer coefficients."""

    def __init__(self, numerator: Sequence[int], den_exp: int):
        self.numerator = _trim(list(numerator))
        self.den_exp = int(den_exp)

    def reduced(self) -> "HilbertSeries":
        """Divide out every factor ``(1 - lam)`` of the numerator."""
        num = list(self.numerator)
        e = self.den_exp
        while num and sum(num) == 0 and e > 0:
            # synthetic division by (1 - lam): q_k = sum_{i<=k} a_i
            q, acc = [], 0
            for a in num[:-1]:
                acc += a
                q.append(acc)
            num = _trim(q)
            e -= 1
        return HilbertSeries(num, e)

    @property
    def reduced_numerator(self) -> List[int]:
        return self.reduced().numerator

    @property
    def dimension(self) -> int:
        """Krull dimension of the graded ring (reduced denominator exponent)."""
        return self.reduced().den_exp

    @property
    def degree(self) -> int:
        return sum(self.reduced().numerator)

    def coefficients(self, upto: int) -> List[int]:
        """``dim_K A_d`` for ``d = 0..upto``."""
        out = []
        for d in range(upto + 1):
            total = 0
            for i, a in enumerate(self.numerator):
                if i <= d:
                    k = d - i
                    total += a * (comb(k + self.den_exp - 1, k) if self.den_exp else int(k == 0))
            out.append(total)
        return out

    def __eq__(self, other):
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        a, b = self.reduced(), other.reduced()
        return a.numerator == b.numerator and a.den_exp == b.den_exp

    def __repr__(self):
        return f"HilbertSeries({self.numerator}, den_exp={self.den_exp})"

    def to_dict(self) -> dict:
        r = self.reduced()
        return {
            "numerator": self.numerator,
            "den_exp": self.den_exp,
            "reduced_numerator": r.numerator,
            "reduced_den_exp": r.den_exp,
        }


# --- monomial ideals -----------------------------------------------------------


def _is_pure_power(m: Monomial) -> bool:
    return sum(1 for e in m if e) == 1


def _pivot_variable(gens: List[Monomial], worst: bool) -> int:
    counts = Counter()
    for m in gens:
        if not _is_pure_power(m):
            for i, e in enumerate(m):
                if e:
                    counts[i] += 1
    if worst:
        return min(counts, key=lambda i: (counts[i], i))
    return max(counts, key=lambda i: (counts[i], -i))


def _numerator(gens: List[Monomial], worst: bool) -> List[int]:
    if not gens:
        return [1]
    if any(sum(m) == 0 for m in gens):
        return []
    if all(_is_pure_power(m) for m in gens):
        out = [1]
        for m in gens:
            out = poly_mul(out, one_minus_power(sum(m)))
        return out
    x = _pivot_variable(gens, worst)
    n = len(gens[0])
    px = tuple(int(i == x) for i in range(n))
    # N(M) = N(M + (x)) + lam * N(M : x)
    plus = minimalize([m for m in gens if not m[x]] + [px])
    colon = minimalize([mono_div(m, mono_gcd(m, px)) for m in gens])
    return poly_add(_numerator(plus, worst), poly_mul([0, 1], _numerator(colon, worst)))


def hilbert_series_monomial(M: MonomialIdeal, worst_pivot: bool = False) -> HilbertSeries:
    """Series of ``S/M`` over ``(1 - lam)^n`` by recursive pivoting on a variable.

    The pivot is the variable occurring in the most non-pure-power generators;
    ``worst_pivot`` takes the least frequent one instead (same answer).
    """
    return HilbertSeries(_numerator(list(M.minimal_generators), worst_pivot), M.ring.num_vars)


def hilbert_from_resolution(R) -> HilbertSeries:
    """Alternating sum of the twists of a free resolution of ``S/I``."""
    num: List[int] = []
    for i, F in enumerate(R.modules):
        for a in F.degrees:
            term = [0] * a + [(-1) ** i]
            num = poly_add(num, term)
    return HilbertSeries(num, R.ring.num_vars)


def count_standard_monomials(M: MonomialIdeal, upto: int) -> List[int]:
    """Brute-force ``dim (S/M)_d`` by listing monomials (test oracle)."""
    from .groebner import monomials_of_degree

    n = M.ring.num_vars
    return [sum(1 for m in monomials_of_degree(n, d) if not M.contains(m)) for d in range(upto + 1)]


# --- invariants ---------------------------------------------------------------


@dataclass(frozen=True)
class NumericInvariants:
    dim: int          # projective dimension d of X
    codim: int
    degree: int
    depth: int        # of A_X
    codepth: int
    regularity: int   # of A_X = S/I_X
    projective_dimension: int

    @property
    def is_acm(self) -> bool:
        return self.codepth == 0

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "codim": self.codim,
            "degree": self.degree,
            "depth": self.depth,
            "codepth": self.codepth,
            "regularity": self.regularity,
            "projective_dimension": self.projective_dimension,
        }


def numeric_invariants(series: HilbertSeries, betti, num_vars: int) -> NumericInvariants:
    if betti.is_empty:
        raise ValueError("invariants are undefined for the zero ideal")
    r = series.reduced()
    if not r.numerator:
        raise ValueError("invariants are undefined for the unit ideal")
    dim_a = r.den_exp
    pd = betti.num_columns
    depth = num_vars - pd
    return NumericInvariants(
        dim=dim_a - 1,
        codim=num_vars - dim_a,
        degree=sum(r.numerator),
        depth=depth,
        codepth=dim_a - depth,
        regularity=betti.last_row,
        projective_dimension=pd,
    )


# --- closed formulas for varieties of almost minimal degree ----------------------


def hilbert_amd_predicted(c: int, d: int, q: int) -> HilbertSeries:
    """``(1 + (c+1) lam - lam (1 - lam)^(q+1)) / (1 - lam)^(d+1)``."""
    if c < 1 or d < 1 or not 0 <= q <= d:
        raise ValueError(f"need c >= 1, d >= 1, 0 <= q <= d (got c={c}, d={d}, q={q})")
    num = poly_add([1, c + 1], poly_mul([0, -1], binomial_power(q + 1)))
    return HilbertSeries(num, d + 1)


def quadric_count_predicted(c: int, q: int) -> int:
    n = comb(c + 1, 2) - q - 1
    if n < 0:
        raise ValueError(f"inconsistent codim/codepth: c={c}, q={q}")
    return n
