"""Graded free resolutions of cyclic modules S/I and Betti diagrams.

``free_resolution`` builds a Schreyer resolution: level 1 is the reduced
Groebner basis of ``I``, and each further level consists of the syzygies of
S-pairs of the previous level, which form a Groebner basis for the induced
Schreyer order.  Within each lead component the elements are kept in
decreasing lex order of their lead monomials, which bounds the length by the
number of variables.  ``minimize`` then cancels unit entries.

``betti_via_koszul`` is an independent check: it computes Tor by linear
algebra on the Koszul complex of the variables tensored with S/I.
"""

from __future__ import annotations

import heapq
import json
from collections import defaultdict
from itertools import combinations
from math import comb
from operator import add
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .groebner import Ideal, buchberger, minimalize, monomials_of_degree
from .polyring import (
    Monomial,
    Polynomial,
    RingContext,
    RingMismatchError,
    Terms,
    mono_div,
    mono_divides,
    mono_gcd,
    mono_lcm,
    terms_add_scaled,
    terms_mul,
)


class ResolutionError(RuntimeError):
    pass


class GradedFreeModule:
    """Free module ``sum S(-a)``; stores the twists ``a``."""

    def __init__(self, degrees: Sequence[int] = ()):
        self.degrees = tuple(int(d) for d in degrees)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def __eq__(self, other):
        return isinstance(other, GradedFreeModule) and self.degrees == other.degrees

    def __repr__(self):
        return f"GradedFreeModule({list(self.degrees)})"


Column = Dict[int, Terms]


class GradedMap:
    """Map ``source -> target``; ``columns[c]`` maps row index to entry terms."""

    def __init__(self, ring: RingContext, source: GradedFreeModule, target: GradedFreeModule,
                 columns: Sequence[Column]):
        if len(columns) != source.rank:
            raise ValueError("one column per source generator")
        self.ring = ring
        self.source = source
        self.target = target
        self.columns: List[Column] = [dict(c) for c in columns]

    @classmethod
    def from_polynomials(cls, ring, source_degrees, target_degrees, matrix):
        """Build from a row-major matrix of Polynomials (or 0)."""
        cols = []
        for c in range(len(source_degrees)):
            col = {}
            for r in range(len(target_degrees)):
                f = matrix[r][c]
                if isinstance(f, Polynomial) and not f.is_zero():
                    col[r] = f.term_dict()
            cols.append(col)
        return cls(ring, GradedFreeModule(source_degrees), GradedFreeModule(target_degrees), cols)

    def entry(self, r: int, c: int) -> Polynomial:
        return Polynomial(self.ring, self.columns[c].get(r, {}), _trusted=True)

    def check_degrees(self) -> None:
        for c, col in enumerate(self.columns):
            for r, f in col.items():
                want = self.source.degrees[c] - self.target.degrees[r]
                if any(sum(m) != want for m in f):
                    raise ResolutionError(f"entry ({r}, {c}) is not of degree {want}")

    def compose(self, other: "GradedMap") -> "GradedMap":
        """``self o other``."""
        if other.target.degrees != self.source.degrees:
            raise ValueError("maps do not compose")
        p = self.ring.modulus
        cols = []
        for col in other.columns:
            out: Column = {}
            for k, f in col.items():
                for r, g in self.columns[k].items():
                    acc = out.setdefault(r, {})
                    terms_add_scaled(acc, terms_mul(f, g, p), 1, None, p)
            cols.append({r: t for r, t in out.items() if t})
        return GradedMap(self.ring, other.source, self.target, cols)

    def is_zero(self) -> bool:
        return all(not f for col in self.columns for f in col.values())

    def unit_entries(self) -> List[Tuple[int, int]]:
        return [(r, c) for c, col in enumerate(self.columns) for r, f in col.items()
                if f and all(sum(m) == 0 for m in f)]

    def matrix_in_degree(self, d: int) -> np.ndarray:
        """Matrix of the K-linear map ``source_d -> target_d`` (rows = target basis)."""
        n = self.ring.num_vars
        tgt_index = {}
        for r, a in enumerate(self.target.degrees):
            for m in monomials_of_degree(n, d - a) if d >= a else []:
                tgt_index[(r, m)] = len(tgt_index)
        src = []
        for c, a in enumerate(self.source.degrees):
            if d >= a:
                src.extend((c, m) for m in monomials_of_degree(n, d - a))
        A = np.zeros((len(tgt_index), len(src)), dtype=np.int64)
        for j, (c, m) in enumerate(src):
            for r, f in self.columns[c].items():
                for fm, v in f.items():
                    A[tgt_index[(r, tuple(map(add, fm, m)))], j] = v
        return A


class FreeResolution:
    """Modules ``F_0 .. F_l`` with ``maps[i - 1] = d_i : F_i -> F_{i-1}``."""

    def __init__(self, ring: RingContext, modules: Sequence[GradedFreeModule],
                 maps: Sequence[GradedMap], minimal: bool = False):
        self.ring = ring
        self.modules = list(modules)
        self.maps = list(maps)
        self.minimal = minimal

    @property
    def length(self) -> int:
        return len(self.maps)

    def d(self, i: int) -> GradedMap:
        return self.maps[i - 1]

    def ranks(self) -> List[int]:
        return [F.rank for F in self.modules]

    def check_complex(self) -> bool:
        """``d_{i-1} o d_i = 0`` for all i."""
        return all(self.maps[i - 1].compose(self.maps[i]).is_zero() for i in range(1, len(self.maps)))

    def check_exact(self, max_degree: int) -> bool:
        """Spot-check exactness at ``F_i`` (i >= 1) in each degree up to ``max_degree``."""
        p = self.ring.modulus
        for i in range(1, len(self.maps)):
            for d in range(max_degree + 1):
                A = self.maps[i - 1].matrix_in_degree(d)
                B = self.maps[i].matrix_in_degree(d)
                kernel = A.shape[1] - linalg.rank(A, p)
                if kernel != linalg.rank(B, p):
                    return False
        if self.maps:
            for d in range(max_degree + 1):
                A = self.maps[-1].matrix_in_degree(d)
                if A.shape[1] != linalg.rank(A, p):
                    return False
        return True

    def __repr__(self):
        return f"FreeResolution(ranks={self.ranks()}, minimal={self.minimal})"


class BettiDiagram:
    """``entries[(i, j)] = beta_{i, i+j}``: column ``i`` and row ``j``."""

    CONVENTION = "column i>=1, row j, entry = dim Tor_i in degree i+j"

    def __init__(self, entries: Optional[Dict[Tuple[int, int], int]] = None):
        self.entries = {(int(i), int(j)): int(v) for (i, j), v in (entries or {}).items() if v}
        if any(v < 0 for v in self.entries.values()):
            raise ValueError("Betti numbers are non-negative")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], first_row: int = 1) -> "BettiDiagram":
        entries = {}
        for j, row in enumerate(rows, start=first_row):
            for i, v in enumerate(row, start=1):
                if v:
                    entries[(i, j)] = v
        return cls(entries)

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __eq__(self, other):
        return isinstance(other, BettiDiagram) and self.entries == other.entries

    def __repr__(self):
        return f"BettiDiagram({self.rows()})"

    @property
    def is_empty(self) -> bool:
        return not self.entries

    @property
    def num_columns(self) -> int:
        return max((i for i, _ in self.entries), default=0)

    @property
    def first_row(self) -> int:
        return min([1] + [j for _, j in self.entries])

    @property
    def last_row(self) -> int:
        return max((j for _, j in self.entries), default=0)

    def rows(self) -> List[List[int]]:
        ncol = self.num_columns
        return [[self[(i, j)] for i in range(1, ncol + 1)]
                for j in range(self.first_row, self.last_row + 1)]

    def row(self, j: int) -> List[int]:
        return [self[(i, j)] for i in range(1, self.num_columns + 1)]

    def column_total(self, i: int) -> int:
        return sum(v for (c, _), v in self.entries.items() if c == i)

    def to_dict(self) -> dict:
        return {"rows": self.rows(), "first_row": self.first_row, "convention": self.CONVENTION}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def pretty(self) -> str:
        if self.is_empty:
            return "(empty Betti diagram)"
        ncol = self.num_columns
        rows = self.rows()
        w = max(len(str(v)) for r in rows for v in r + [ncol])
        lw = len(str(self.last_row))
        head = "| " + " " * lw + " | " + " ".join(str(i).rjust(w) for i in range(1, ncol + 1)) + " |"
        rule = "+" + "-" * (lw + 2) + "+" + "-" * (len(head) - lw - 5) + "+"
        lines = [rule, head, rule]
        for j, r in zip(range(self.first_row, self.last_row + 1), rows):
            lines.append("| " + str(j).rjust(lw) + " | " + " ".join(str(v).rjust(w) for v in r) + " |")
        lines.append(rule)
        return "\n".join(lines)


# --- Schreyer frames ---------------------------------------------------------


class _Level:
    """GB elements spanning the image of ``F_i -> F_{i-1}``."""

    def __init__(self):
        self.comp: List[int] = []      # lead component in F_{i-1}
        self.mono: List[Monomial] = []  # lead monomial
        self.deg: List[int] = []
        self.total: List[Monomial] = []  # lead monomial times the total of its component
        self.pos: List[int] = []       # rank of the Schreyer tie-break chain
        self.vec: List[Dict[Tuple[int, Monomial], int]] = []

    def __len__(self):
        return len(self.comp)


def _lex_desc(m: Monomial):
    return tuple(-e for e in m)


def _finish_level(lv: _Level, prev_pos: Sequence[int]) -> None:
    # chain order: first the component's chain, then smaller index wins
    order = sorted(range(len(lv)), key=lambda j: (prev_pos[lv.comp[j]], -j))
    lv.pos = [0] * len(lv)
    for r, j in enumerate(order):
        lv.pos[j] = r


def _make_key(order_key, lv_prev_total, lv_prev_pos):
    npos = max(len(lv_prev_pos), 1)
    cache = {}

    def key(term):
        k = cache.get(term)
        if k is None:
            u, m = term
            k = order_key(tuple(map(add, m, lv_prev_total[u]))) * npos + lv_prev_pos[u]
            cache[term] = k
        return k

    return key


def _divide_out(f, lv: _Level, key, p: int, syz: Dict[Tuple[int, Monomial], int]) -> None:
    """Reduce ``f`` to zero by the elements of ``lv``, subtracting quotients into ``syz``."""
    by_comp = defaultdict(list)
    for l in range(len(lv)):
        by_comp[lv.comp[l]].append(l)
    heap = []
    keymap = {}
    for t in f:
        k = key(t)
        keymap[k] = t
        heap.append(-k)
    heapq.heapify(heap)
    while heap:
        k = -heapq.heappop(heap)
        t = keymap[k]
        c = f.get(t)
        if c is None:
            continue
        u, m = t
        for l in by_comp.get(u, ()):
            if mono_divides(lv.mono[l], m):
                break
        else:
            raise ResolutionError("S-pair does not reduce to zero; not a Groebner basis")
        s = mono_div(m, lv.mono[l])
        st = (l, s)
        syz[st] = (syz.get(st, 0) - c) % p
        if not syz[st]:
            del syz[st]
        for (v, gm), gc in lv.vec[l].items():
            nt = (v, tuple(map(add, gm, s)))
            old = f.get(nt)
            val = ((old or 0) - c * gc) % p
            if val:
                if old is None:
                    nk = key(nt)
                    keymap[nk] = nt
                    heapq.heappush(heap, -nk)
                f[nt] = val
            elif old is not None:
                del f[nt]


def _next_level(cur: _Level, key, p: int, shift_cache=None) -> _Level:
    groups = defaultdict(list)
    for j in range(len(cur)):
        groups[cur.comp[j]].append(j)
    frame = []
    for idxs in groups.values():
        for a, j in enumerate(idxs):
            mj = cur.mono[j]
            partner = {}
            for k in idxs[a + 1:]:
                mk = cur.mono[k]
                q = mono_div(mk, mono_gcd(mj, mk))
                partner.setdefault(q, k)
            for q in minimalize(partner):
                frame.append((j, q, partner[q]))
    frame.sort(key=lambda t: (t[0], _lex_desc(t[1])))
    nxt = _Level()
    for j, q, k in frame:
        lcm = mono_lcm(cur.mono[j], cur.mono[k])
        sk = mono_div(lcm, cur.mono[k])
        f: Dict[Tuple[int, Monomial], int] = {}
        for (v, gm), gc in cur.vec[j].items():
            f[(v, tuple(map(add, gm, q)))] = gc
        for (v, gm), gc in cur.vec[k].items():
            t = (v, tuple(map(add, gm, sk)))
            val = (f.get(t, 0) - gc) % p
            if val:
                f[t] = val
            else:
                f.pop(t, None)
        syz = {(j, q): 1, (k, sk): p - 1}
        _divide_out(f, cur, key, p, syz)
        nxt.comp.append(j)
        nxt.mono.append(q)
        nxt.deg.append(cur.deg[j] + sum(q))
        nxt.total.append(tuple(map(add, q, cur.total[j])))
        nxt.vec.append(syz)
    return nxt


def _level_to_map(ring, lv: _Level, source_degs, target_degs) -> GradedMap:
    cols = []
    for vec in lv.vec:
        col: Column = {}
        for (u, m), c in vec.items():
            col.setdefault(u, {})[m] = c
        cols.append(col)
    return GradedMap(ring, GradedFreeModule(source_degs), GradedFreeModule(target_degs), cols)


def free_resolution(I: Ideal, degree_cap: Optional[int] = None) -> FreeResolution:
    """Schreyer resolution of ``S/I`` (not minimal in general).

    ``degree_cap`` bounds ``twist - homological degree`` of frame elements.
    """
    ring = I.ring
    p = ring.modulus
    n = ring.num_vars
    F0 = GradedFreeModule([0])
    if I.is_zero:
        return FreeResolution(ring, [F0], [], minimal=True)
    gb = buchberger(I)
    if any(g.is_constant() for g in gb):
        return FreeResolution(ring, [F0], [], minimal=True)

    order_key = ring.order.key
    lv = _Level()
    elems = sorted(gb, key=lambda g: g.leading_monomial(), reverse=True)
    for g in elems:
        lm = g.leading_monomial()
        lv.comp.append(0)
        lv.mono.append(lm)
        lv.deg.append(g.homogeneous_degree)
        lv.total.append(lm)
        lv.vec.append({(0, m): c for m, c in g._t.items()})
    _finish_level(lv, [0])
    prev_total, prev_pos, prev_degs = [(0,) * n], [0], [0]

    modules = [F0]
    maps = []
    i = 1
    while len(lv):
        if degree_cap is not None and max(lv.deg) - i > degree_cap:
            raise ResolutionError(f"degree cap {degree_cap} exceeded at homological degree {i}")
        modules.append(GradedFreeModule(lv.deg))
        maps.append(_level_to_map(ring, lv, lv.deg, prev_degs))
        if i > n:
            raise ResolutionError("resolution longer than the number of variables")
        key = _make_key(order_key, prev_total, prev_pos)
        nxt = _next_level(lv, key, p)
        _finish_level(nxt, lv.pos)
        prev_total, prev_pos, prev_degs = lv.total, lv.pos, lv.deg
        lv = nxt
        i += 1
    return FreeResolution(ring, modules, maps, minimal=False)


# --- general syzygies ---------------------------------------------------------


def _module_gb(cols: List[Dict[Tuple[int, Monomial], int]], key, p):
    """Buchberger for submodules, tracking each basis element in terms of ``cols``.

    Returns a list of (lead term, vec, representation) with monic leads.
    """
    basis = []

    def reduce(f, rep):
        f = dict(f)
        rep = dict(rep)
        changed = True
        while f and changed:
            changed = False
            lt = max(f, key=key)
            for lt2, g, r2 in basis:
                if lt2[0] == lt[0] and mono_divides(lt2[1], lt[1]):
                    c = f[lt]
                    s = mono_div(lt[1], lt2[1])
                    for (v, m), gc in g.items():
                        t = (v, tuple(map(add, m, s)))
                        val = (f.get(t, 0) - c * gc) % p
                        if val:
                            f[t] = val
                        else:
                            f.pop(t, None)
                    for (v, m), rc in r2.items():
                        t = (v, tuple(map(add, m, s)))
                        val = (rep.get(t, 0) - c * rc) % p
                        if val:
                            rep[t] = val
                        else:
                            rep.pop(t, None)
                    changed = True
                    break
        return f, rep

    def push(f, rep):
        lt = max(f, key=key)
        inv = pow(f[lt], -1, p)
        f = {t: c * inv % p for t, c in f.items()}
        rep = {t: c * inv % p for t, c in rep.items()}
        basis.append((lt, f, rep))

    n = None
    pairs = []
    for j, col in enumerate(cols):
        if not col:
            continue
        n = len(next(iter(col))[1])
        f, rep = reduce(col, {(j, (0,) * n): 1})
        if f:
            push(f, rep)
            new = len(basis) - 1
            pairs.extend((a, new) for a in range(new))
    while pairs:
        a, b = pairs.pop(0)
        lta, fa, ra = basis[a]
        ltb, fb, rb = basis[b]
        if lta[0] != ltb[0]:
            continue
        l = mono_lcm(lta[1], ltb[1])
        sa, sb = mono_div(l, lta[1]), mono_div(l, ltb[1])
        f, rep = {}, {}
        for src, dst, s, sign in ((fa, f, sa, 1), (fb, f, sb, -1), (ra, rep, sa, 1), (rb, rep, sb, -1)):
            for (v, m), c in src.items():
                t = (v, tuple(map(add, m, s)))
                val = (dst.get(t, 0) + sign * c) % p
                if val:
                    dst[t] = val
                else:
                    dst.pop(t, None)
        f, rep = reduce(f, rep)
        if f:
            push(f, rep)
            new = len(basis) - 1
            pairs.extend((x, new) for x in range(new))
    return basis


def syzygies(M: GradedMap) -> GradedMap:
    """Generators of the kernel of ``M`` as a map into ``M.source``."""
    ring = M.ring
    p = ring.modulus
    n = ring.num_vars
    order_key = ring.order.key
    ntgt = max(M.target.rank, 1)
    for c, col in enumerate(M.columns):
        for r, f in col.items():
            want = M.source.degrees[c] - M.target.degrees[r]
            if any(sum(m) != want for m in f):
                raise ResolutionError(f"entry ({r}, {c}) has inconsistent degree")

    def key(t):
        return order_key(t[1]) * ntgt + (ntgt - 1 - t[0])

    cols = [{(r, m): c for r, f in col.items() for m, c in f.items()} for col in M.columns]
    basis = _module_gb(cols, key, p)
    one = (0,) * n
    relations = []
    # relations among Groebner basis elements, pulled back to the columns
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            lta, fa, ra = basis[a]
            ltb, fb, rb = basis[b]
            if lta[0] != ltb[0]:
                continue
            l = mono_lcm(lta[1], ltb[1])
            sa, sb = mono_div(l, lta[1]), mono_div(l, ltb[1])
            f, rep = {}, {}
            for src, dst, s, sign in ((fa, f, sa, 1), (fb, f, sb, -1), (ra, rep, sa, 1), (rb, rep, sb, -1)):
                for (v, m), c in src.items():
                    t = (v, tuple(map(add, m, s)))
                    val = (dst.get(t, 0) + sign * c) % p
                    if val:
                        dst[t] = val
                    else:
                        dst.pop(t, None)
            rep = _reduce_with_rep(f, rep, basis, key, p)
            relations.append(rep)
    # each column minus its expression in the basis
    for j, col in enumerate(cols):
        relations.append(_reduce_with_rep(dict(col), {(j, one): 1}, basis, key, p))
    # drop zero and scalar-duplicate relations
    seen = set()
    out_cols = []
    out_degs = []
    for rep in relations:
        rep = {t: c for t, c in rep.items() if c}
        if not rep:
            continue
        lt = max(rep, key=lambda t: order_key(t[1]) * M.source.rank + t[0])
        inv = pow(rep[lt], -1, p)
        rep = {t: c * inv % p for t, c in rep.items()}
        sig = frozenset(rep.items())
        if sig in seen:
            continue
        seen.add(sig)
        col: Column = {}
        for (v, m), c in rep.items():
            col.setdefault(v, {})[m] = c
        v0, m0 = next(iter(rep))
        out_degs.append(M.source.degrees[v0] + sum(m0))
        out_cols.append(col)
    out_cols, out_degs = _prune_relations(ring, M.source, out_cols, out_degs)
    return GradedMap(ring, GradedFreeModule(out_degs), M.source, out_cols)


def _reduce_with_rep(f, rep, basis, key, p):
    """Reduce ``f`` to zero, returning ``rep`` minus the quotient combination."""
    f = dict(f)
    rep = dict(rep)
    while f:
        lt = max(f, key=key)
        c = f[lt]
        for lt2, g, r2 in basis:
            if lt2[0] == lt[0] and mono_divides(lt2[1], lt[1]):
                break
        else:
            raise ResolutionError("element does not reduce to zero")
        s = mono_div(lt[1], lt2[1])
        for src, dst in ((g, f), (r2, rep)):
            for (v, m), gc in src.items():
                t = (v, tuple(map(add, m, s)))
                val = (dst.get(t, 0) - c * gc) % p
                if val:
                    dst[t] = val
                else:
                    dst.pop(t, None)
    return rep


def _prune_relations(ring, source, cols, degs):
    """Drop relations lying in the span of lower-degree ones and earlier equal-degree ones."""
    n = ring.num_vars
    p = ring.modulus
    order = sorted(range(len(cols)), key=lambda k: degs[k])
    kept: List[int] = []
    for d in sorted(set(degs)):
        rows = []
        for k in kept:
            for m in monomials_of_degree(n, d - degs[k]):
                rows.append({(v, tuple(map(add, fm, m))): c for v, f in cols[k].items() for fm, c in f.items()})
        start = len(rows)
        cand = [k for k in order if degs[k] == d]
        rows += [{(v, fm): c for v, f in cols[k].items() for fm, c in f.items()} for k in cand]
        picked = linalg.independent_rows(rows, p, start=start)
        kept.extend(cand[i - start] for i in picked)
    kept.sort(key=lambda k: degs[k])
    return [cols[k] for k in kept], [degs[k] for k in kept]


# --- minimization ------------------------------------------------------------


def minimize(R: FreeResolution, scan: str = "lowest") -> FreeResolution:
    """Cancel unit entries until none remain.

    ``scan`` picks the next pivot among unit entries: ``"lowest"`` twist
    first (default) or ``"highest"``.
    """
    if R.minimal:
        return R
    if scan not in ("lowest", "highest"):
        raise ValueError("scan must be 'lowest' or 'highest'")
    p = R.ring.modulus
    L = len(R.maps)
    # cols[i][c] = {r: terms} for d_{i+1}; rows[i][r] = set of c
    cols = [{c: {r: dict(f) for r, f in col.items()} for c, col in enumerate(m.columns)} for m in R.maps]
    rows = []
    for i in range(L):
        rw = defaultdict(set)
        for c, col in cols[i].items():
            for r in col:
                rw[r].add(c)
        rows.append(rw)
    alive = [set(range(F.rank)) for F in R.modules]
    degs = [F.degrees for F in R.modules]
    sign = 1 if scan == "lowest" else -1

    def is_unit(f):
        return len(f) == 1 and sum(next(iter(f))) == 0

    for i in range(L):
        heap = []
        for c, col in cols[i].items():
            for r, f in col.items():
                if is_unit(f):
                    heap.append((sign * degs[i + 1][c], c, r))
        heapq.heapify(heap)
        while heap:
            _, c, r = heapq.heappop(heap)
            col = cols[i].get(c)
            if col is None or r not in col or not is_unit(col[r]) or r not in alive[i]:
                continue
            u = next(iter(col[r].values()))
            uinv = pow(u, -1, p)
            pivot_row = {c2: cols[i][c2][r] for c2 in rows[i][r] if c2 != c}
            pivot_col = {r2: f for r2, f in col.items() if r2 != r}
            for c2, g in pivot_row.items():
                target = cols[i][c2]
                for r2, f in pivot_col.items():
                    prod = terms_mul(f, g, p)
                    acc = target.get(r2)
                    if acc is None:
                        acc = {}
                        target[r2] = acc
                        rows[i][r2].add(c2)
                    terms_add_scaled(acc, prod, -uinv, None, p)
                    if not acc:
                        del target[r2]
                        rows[i][r2].discard(c2)
                    elif is_unit(acc):
                        heapq.heappush(heap, (sign * degs[i + 1][c2], c2, r2))
            # drop column c and row r of d_{i+1}
            for r2 in col:
                rows[i][r2].discard(c)
            del cols[i][c]
            for c2 in list(rows[i].get(r, ())):
                cols[i][c2].pop(r, None)
            rows[i].pop(r, None)
            alive[i + 1].discard(c)
            alive[i].discard(r)
            # row c of d_{i+2} and column r of d_i
            if i + 1 < L:
                for c2 in list(rows[i + 1].get(c, ())):
                    cols[i + 1][c2].pop(c, None)
                rows[i + 1].pop(c, None)
            if i >= 1:
                for r2 in list(cols[i - 1].get(r, {})):
                    rows[i - 1][r2].discard(r)
                cols[i - 1].pop(r, None)

    # renumber survivors
    index = [{old: new for new, old in enumerate(sorted(a))} for a in alive]
    modules = [GradedFreeModule([degs[k][old] for old in sorted(alive[k])]) for k in range(L + 1)]
    maps = []
    for i in range(L):
        new_cols = []
        for old in sorted(alive[i + 1]):
            new_cols.append({index[i][r]: f for r, f in cols[i][old].items() if r in index[i]})
        maps.append(GradedMap(R.ring, modules[i + 1], modules[i], new_cols))
    while maps and modules[-1].rank == 0:
        modules.pop()
        maps.pop()
    return FreeResolution(R.ring, modules, maps, minimal=True)


def betti_diagram(R: FreeResolution) -> BettiDiagram:
    if not R.minimal:
        raise ValueError("betti_diagram needs a minimal resolution")
    entries: Dict[Tuple[int, int], int] = defaultdict(int)
    for i, F in enumerate(R.modules):
        if i == 0:
            continue
        for a in F.degrees:
            entries[(i, a - i)] += 1
    return BettiDiagram(entries)


def minimal_resolution(I: Ideal, degree_cap: Optional[int] = None) -> FreeResolution:
    return minimize(free_resolution(I, degree_cap=degree_cap))


def betti_numbers(I: Ideal, degree_cap: Optional[int] = None) -> BettiDiagram:
    return betti_diagram(minimal_resolution(I, degree_cap))


# --- Koszul homology oracle ------------------------------------------------------


def torus_weights(I: Ideal) -> np.ndarray:
    """Integer weight vectors (rows) for which every generator is homogeneous.

    The first row is always the standard grading.  Found as an integer basis of
    the rational nullspace of all exponent differences within generators.
    """
    import sympy

    n = I.ring.num_vars
    diffs = []
    for g in I.generators:
        ms = list(g._t)
        for m in ms[1:]:
            diffs.append([a - b for a, b in zip(m, ms[0])])
    W = [[1] * n]
    if diffs:
        basis = sympy.Matrix(diffs).nullspace()
    else:
        basis = [sympy.Matrix([int(i == k) for i in range(n)]) for k in range(n)]
    for v in basis:
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in v])
        W.append([int(x * den) for x in v])
    return np.array(W, dtype=np.int64)


class _QuotientDegree:
    """Standard monomials of ``(S/I)_d`` and normal forms of all degree-d monomials.

    ``I_d`` is the row space of the Macaulay matrix, reduced one weight block at
    a time; the non-pivot monomials form a basis of the quotient.
    """

    def __init__(self, I: Ideal, d: int, W: np.ndarray, gen_weights):
        p = I.ring.modulus
        n = I.ring.num_vars
        by_block: Dict[tuple, List[Monomial]] = defaultdict(list)
        for m in monomials_of_degree(n, d):
            by_block[tuple(W @ m)].append(m)
        lower: Dict[int, List[Tuple[Monomial, np.ndarray]]] = {}
        self.std: List[Monomial] = []
        self.weight: List[tuple] = []
        normal: Dict[Monomial, Dict[Monomial, int]] = {}
        for mu, monos in by_block.items():
            rows = []
            for g, wg in zip(I.generators, gen_weights):
                e = d - g.homogeneous_degree
                if e < 0:
                    continue
                if e not in lower:
                    lower[e] = [(m, W @ m) for m in monomials_of_degree(n, e)]
                for m, wm in lower[e]:
                    if tuple(wm + wg) != mu:
                        continue
                    rows.append({tuple(a + b for a, b in zip(k, m)): c for k, c in g._t.items()})
            col = {m: k for k, m in enumerate(monos)}
            if rows:
                A = np.zeros((len(rows), len(monos)), dtype=np.int64)
                for r, row in enumerate(rows):
                    for m, c in row.items():
                        A[r, col[m]] = c
                R, piv = linalg.rref(A, p)
            else:
                R, piv = np.zeros((0, len(monos)), dtype=np.int64), []
            pivset = set(piv)
            free = [k for k in range(len(monos)) if k not in pivset]
            for k in free:
                normal[monos[k]] = {monos[k]: 1}
                self.std.append(monos[k])
                self.weight.append(mu)
            for r, c in enumerate(piv):
                normal[monos[c]] = {monos[f]: (-int(R[r, f])) % p for f in free if R[r, f]}
        self.normal = normal
        self.index = {m: a for a, m in enumerate(self.std)}

    def __len__(self):
        return len(self.std)


def _multiplication_tables(src: _QuotientDegree, dst: _QuotientDegree, n: int):
    """For each variable, the map ``A_j -> A_{j+1}`` as COO arrays (a, b, coeff)."""
    tables = []
    for k in range(n):
        ra, rb, rc = [], [], []
        for a, m in enumerate(src.std):
            xm = m[:k] + (m[k] + 1,) + m[k + 1:]
            for u, c in dst.normal[xm].items():
                ra.append(a)
                rb.append(dst.index[u])
                rc.append(c)
        tables.append((np.array(ra, dtype=np.int64), np.array(rb, dtype=np.int64),
                       np.array(rc, dtype=np.int64)))
    return tables


def _block_rank(rows, cols, vals, labels, p: int) -> int:
    """Rank of a sparse matrix that is block diagonal with respect to ``labels`` of rows."""
    if rows.size == 0:
        return 0
    order = np.argsort(labels, kind="stable")
    rows, cols, vals, labels = rows[order], cols[order], vals[order], labels[order]
    cuts = np.flatnonzero(np.diff(labels)) + 1
    total = 0
    for r, c, v in zip(np.split(rows, cuts), np.split(cols, cuts), np.split(vals, cuts)):
        ur, ri = np.unique(r, return_inverse=True)
        uc, ci = np.unique(c, return_inverse=True)
        M = np.zeros((ur.size, uc.size), dtype=np.int64)
        np.add.at(M, (ri, ci), v)
        total += linalg.rank(M % p, p)
    return total


def betti_via_koszul(I: Ideal, max_col: Optional[int] = None, max_row: int = 3) -> BettiDiagram:
    """``beta_{i,i+j}`` for ``1 <= i <= max_col``, ``0 <= j <= max_row`` from Koszul homology.

    ``Tor_i(K, S/I)_{i+j}`` is the homology of
    ``wedge^{i+1} V (x) A_{j-1} -> wedge^i V (x) A_j -> wedge^{i-1} V (x) A_{j+1}``
    with ``A = S/I``.  ``A_d`` comes from the Macaulay matrix of ``I`` in degree
    ``d`` (no Groebner basis involved), and each differential is split into
    blocks of a torus grading under which ``I`` is homogeneous.
    """
    n = I.ring.num_vars
    p = I.ring.modulus
    max_col = n if max_col is None else min(max_col, n)
    if I.is_zero:
        return BettiDiagram()
    W = torus_weights(I)
    gen_weights = [W @ np.array(g.leading_monomial()) for g in I.generators]
    A = [_QuotientDegree(I, d, W, gen_weights) for d in range(max_row + 2)]
    mult = {j: _multiplication_tables(A[j], A[j + 1], n) for j in range(max_row + 1)}

    # intern weights so that a block label is a single integer
    wvar = [tuple(W[:, k]) for k in range(n)]
    label_ids: Dict[tuple, int] = {}
    subsets = {i: list(combinations(range(n), i)) for i in range(max_col + 2)}
    sub_index = {S: s for i in subsets for s, S in enumerate(subsets[i])}

    def labels_for(i: int, j: int) -> np.ndarray:
        """Weight label of every basis element (S, a) of wedge^i (x) A_j, row-major."""
        out = np.empty(len(subsets[i]) * len(A[j]), dtype=np.int64)
        pos = 0
        for S in subsets[i]:
            ws = np.sum([wvar[k] for k in S], axis=0) if S else np.zeros(len(W), dtype=np.int64)
            for mu in A[j].weight:
                out[pos] = label_ids.setdefault(tuple(np.asarray(mu) + ws), len(label_ids))
                pos += 1
        return out

    rank_cache: Dict[Tuple[int, int], int] = {}

    def rank_d(i: int, j: int) -> int:
        """Rank of the Koszul differential out of wedge^i (x) A_j."""
        if i < 1 or i > n or j < 0 or j > max_row:
            return 0
        if (i, j) in rank_cache:
            return rank_cache[(i, j)]
        nj, nj1 = len(A[j]), len(A[j + 1])
        R, C, V = [], [], []
        for S in subsets[i]:
            s = sub_index[S]
            for pos, k in enumerate(S):
                t = sub_index[S[:pos] + S[pos + 1:]]
                ra, rb, rc = mult[j][k]
                R.append(s * nj + ra)
                C.append(t * nj1 + rb)
                V.append(rc if pos % 2 == 0 else (p - rc) % p)
        if not R or nj == 0:
            rank_cache[(i, j)] = 0
            return 0
        R, C, V = np.concatenate(R), np.concatenate(C), np.concatenate(V)
        labels = labels_for(i, j)[R]
        rk = _block_rank(R, C, V, labels, p)
        rank_cache[(i, j)] = rk
        return rk

    entries = {}
    for i in range(1, max_col + 1):
        for j in range(0, max_row + 1):
            dim = comb(n, i) * len(A[j])
            if dim == 0:
                continue
            b = dim - rank_d(i, j) - rank_d(i + 1, j - 1)
            if b:
                entries[(i, j)] = b
    return BettiDiagram(entries)
