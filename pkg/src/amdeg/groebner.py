"""Groebner bases of homogeneous ideals, elimination and generator counts."""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import independent_rows
from .polyring import (
    Monomial,
    Polynomial,
    RingContext,
    RingMismatchError,
    TermOrder,
    Terms,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    reduce_terms,
    terms_add_scaled,
)


class InhomogeneousError(ValueError):
    pass


class Ideal:
    """Homogeneous ideal given by generators.

    The zero ideal has an empty generator list and ``is_zero`` set.  Reduced
    Groebner bases are cached per term order, each written once.
    """

    def __init__(self, ring: RingContext, generators: Sequence[Polynomial] = ()):
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                raise TypeError("generators must be Polynomials")
            if g.ring.num_vars != ring.num_vars or g.ring.modulus != ring.modulus or (
                g.ring.var_names != ring.var_names
            ):
                raise RingMismatchError("generator from a different ring")
            if g.is_zero():
                continue
            if not g.is_homogeneous():
                raise InhomogeneousError(f"generator is not homogeneous: {g}")
            gens.append(g.with_ring(ring) if g.ring != ring else g)
        self.ring = ring
        self.generators: Tuple[Polynomial, ...] = tuple(gens)
        self.is_zero = not gens
        self._gb: Dict[TermOrder, Tuple[Polynomial, ...]] = {}

    @classmethod
    def zero(cls, ring: RingContext) -> "Ideal":
        return cls(ring, ())

    @classmethod
    def from_strings(cls, ring: RingContext, texts: Sequence[str]) -> "Ideal":
        return cls(ring, [ring.parse(t) for t in texts])

    @property
    def num_vars(self) -> int:
        return self.ring.num_vars

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in groebner_basis(self))

    def generator_degrees(self) -> List[int]:
        return sorted(g.homogeneous_degree for g in self.generators)

    def __repr__(self):
        if self.is_zero:
            return f"Ideal(zero, {self.ring.num_vars} vars)"
        return f"Ideal({len(self.generators)} generators in {self.ring.num_vars} vars)"


class MonomialIdeal:
    def __init__(self, ring: RingContext, monomials):
        self.ring = ring
        self.minimal_generators: Tuple[Monomial, ...] = tuple(minimalize(monomials))

    def __eq__(self, other):
        return (
            isinstance(other, MonomialIdeal)
            and self.ring.num_vars == other.ring.num_vars
            and set(self.minimal_generators) == set(other.minimal_generators)
        )

    def __hash__(self):
        return hash(frozenset(self.minimal_generators))

    def __repr__(self):
        return f"MonomialIdeal({list(self.minimal_generators)})"

    def contains(self, m: Monomial) -> bool:
        return any(mono_divides(g, m) for g in self.minimal_generators)


def minimalize(monomials) -> List[Monomial]:
    """Antichain of the divisibility-minimal elements, sorted by degree then exponents."""
    ms = sorted(set(tuple(m) for m in monomials), key=lambda m: (sum(m), m))
    out: List[Monomial] = []
    for m in ms:
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return out


# --- Buchberger --------------------------------------------------------------


def _gm_update(G, lms, pairs, h):
    """Gebauer-Moeller update: new pair list after adding element ``h``.

    Applies the coprime (product) criterion and the chain criterion.
    """
    lm_h = lms[h]
    cands = [(g, mono_lcm(lms[g], lm_h)) for g in G]
    kept = []
    for idx, (g, l) in enumerate(cands):
        if mono_coprime(lms[g], lm_h):
            kept.append((g, l, True))
            continue
        dominated = False
        for j, (g2, l2) in enumerate(cands):
            if j == idx:
                continue
            if mono_divides(l2, l) and (l2 != l or j < idx):
                dominated = True
                break
        if not dominated:
            kept.append((g, l, False))
    new_pairs = []
    for g1, g2, l in pairs:
        if (
            mono_divides(lm_h, l)
            and mono_lcm(lms[g1], lm_h) != l
            and mono_lcm(lms[g2], lm_h) != l
        ):
            continue
        new_pairs.append((g1, g2, l))
    new_pairs.extend((g, h, l) for g, l, coprime in kept if not coprime)
    return new_pairs


def _buchberger_terms(polys: Sequence[Terms], order: TermOrder, p: int) -> List[Tuple[Monomial, Terms]]:
    key = order.key
    by_degree: Dict[int, List[Terms]] = defaultdict(list)
    for f in polys:
        if f:
            by_degree[sum(next(iter(f)))].append(f)

    basis: List[Tuple[Monomial, Terms]] = []  # (lm, monic terms)
    lms: List[Monomial] = []
    active: List[int] = []
    pairs: List[Tuple[int, int, Monomial]] = []

    def add(h: Terms):
        lm = max(h, key=key)
        inv = pow(h[lm], -1, p)
        h = {m: c * inv % p for m, c in h.items()}
        basis.append((lm, h))
        lms.append(lm)
        idx = len(basis) - 1
        nonlocal pairs
        pairs = _gm_update(active, lms, pairs, idx)
        active[:] = [g for g in active if not mono_divides(lm, lms[g])]
        active.append(idx)

    def current():
        return [basis[g] for g in active]

    while by_degree or pairs:
        d = min(list(by_degree) + [sum(l) for _, _, l in pairs])
        todo = sorted((pr for pr in pairs if sum(pr[2]) == d), key=lambda pr: key(pr[2]))
        pairs = [pr for pr in pairs if sum(pr[2]) != d]
        for g1, g2, l in todo:
            lm1, f1 = basis[g1]
            lm2, f2 = basis[g2]
            s = {}
            terms_add_scaled(s, f1, 1, mono_div(l, lm1), p)
            terms_add_scaled(s, f2, -1, mono_div(l, lm2), p)
            if not s:
                continue
            r = reduce_terms(s, current(), key, p)
            if r:
                if all(sum(m) == 0 for m in r):
                    return [((0,) * len(next(iter(r))), {next(iter(r)): 1})]
                add(r)
        for f in by_degree.pop(d, []):
            r = reduce_terms(f, current(), key, p) if active else dict(f)
            if r:
                if d == 0:
                    return [((0,) * len(next(iter(r))), {next(iter(r)): 1})]
                add(r)

    # interreduce
    final = [basis[g] for g in active]
    final = [(lm, f) for lm, f in final if not any(lm2 != lm and mono_divides(lm2, lm) for lm2, _ in final)]
    reduced = []
    for i, (lm, f) in enumerate(final):
        others = [b for j, b in enumerate(final) if j != i]
        tail = {m: c for m, c in f.items() if m != lm}
        tail = reduce_terms(tail, others, key, p) if others else tail
        tail[lm] = 1
        reduced.append((lm, tail))
    reduced.sort(key=lambda b: key(b[0]))
    return reduced


def buchberger(I: Ideal, order: Optional[TermOrder] = None) -> Tuple[Polynomial, ...]:
    """Reduced Groebner basis of ``I``, monic and sorted by increasing leading monomial.

    The polynomials live in ``I.ring`` with its order replaced by ``order``.
    """
    order = order or I.ring.order
    cached = I._gb.get(order)
    if cached is not None:
        return cached
    ring = I.ring if order == I.ring.order else I.ring.with_order(order)
    if I.is_zero:
        gb: Tuple[Polynomial, ...] = ()
    else:
        raw = _buchberger_terms([g._t for g in I.generators], order, ring.modulus)
        gb = tuple(Polynomial(ring, f, _trusted=True) for _, f in raw)
    I._gb[order] = gb
    return gb


groebner_basis = buchberger


def eliminate(I: Ideal, t: int) -> Ideal:
    """``I`` intersected with the subring of the first ``num_vars - t`` variables."""
    n = I.ring.num_vars
    if not 1 <= t < n:
        raise ValueError(f"cannot eliminate {t} of {n} variables")
    gb = buchberger(I, TermOrder.block(t))
    sub = I.ring.subring(n - t)
    keep = []
    for g in gb:
        if all(not any(m[n - t:]) for m in g._t):
            keep.append(Polynomial(sub, {m[: n - t]: c for m, c in g._t.items()}, _trusted=True))
    return Ideal(sub, keep)


def leading_term_ideal(I: Ideal, order: Optional[TermOrder] = None) -> MonomialIdeal:
    gb = buchberger(I, order)
    return MonomialIdeal(I.ring, [g.leading_monomial() for g in gb])


def ideal_member(f: Polynomial, I: Ideal) -> bool:
    if f.ring.num_vars != I.ring.num_vars or f.ring.modulus != I.ring.modulus:
        raise RingMismatchError("polynomial and ideal live in different rings")
    if f.is_zero():
        return True
    gb = buchberger(I)
    if not gb:
        return False
    key = I.ring.order.key
    basis = [(g.leading_monomial(), g._t) for g in gb]
    return not reduce_terms(f._t, basis, key, I.ring.modulus)


def monomials_of_degree(n: int, d: int) -> List[Monomial]:
    """All exponent vectors of total degree ``d`` in ``n`` variables."""
    if n == 1:
        return [(d,)]
    out = []
    for e in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - e):
            out.append((e,) + rest)
    return out


def macaulay_rows(polys: Sequence[Polynomial], d: int) -> List[Terms]:
    """All products ``m * f`` of degree ``d`` with ``m`` a monomial."""
    rows = []
    for f in polys:
        e = d - f.homogeneous_degree
        if e < 0:
            continue
        for m in monomials_of_degree(f.ring.num_vars, e):
            rows.append({tuple(a + b for a, b in zip(k, m)): c for k, c in f._t.items()})
    return rows


def minimal_generators(I: Ideal):
    """Degree counts ``[(d, count)]`` and a minimal generating set.

    Degree by degree a basis of ``I_d`` modulo ``S_1 I_{d-1}`` is picked
    greedily from the given generators.
    """
    if I.is_zero:
        return [], []
    p = I.ring.modulus
    chosen: List[Polynomial] = []
    counts = []
    by_deg = defaultdict(list)
    for g in I.generators:
        by_deg[g.homogeneous_degree].append(g)
    for d in sorted(by_deg):
        lower = macaulay_rows(chosen, d)
        cand = [g._t for g in by_deg[d]]
        picked = independent_rows(lower + cand, p, start=len(lower))
        new = [by_deg[d][i - len(lower)] for i in picked]
        if new:
            counts.append((d, len(new)))
            chosen.extend(new)
    return counts, chosen


def minimalized(I: Ideal) -> Ideal:
    """Same ideal on a minimal generating set."""
    if I.is_zero:
        return I
    return Ideal(I.ring, minimal_generators(I)[1])
