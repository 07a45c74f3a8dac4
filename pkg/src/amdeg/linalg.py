"""Dense linear algebra over GF(p) on int64 numpy arrays.

Entries stay in ``[0, p)``; products fit in int64 for p < 2**31.
"""

from __future__ import annotations

from typing import Dict, Hashable, List, Sequence, Tuple

import numba
import numpy as np


def to_matrix(rows: Sequence[Dict[Hashable, int]], columns: Sequence[Hashable] = None):
    """Stack sparse rows into a dense array; columns default to the union of keys."""
    if columns is None:
        seen = {}
        for r in rows:
            for k in r:
                seen.setdefault(k, len(seen))
        columns = list(seen)
        index = seen
    else:
        index = {k: i for i, k in enumerate(columns)}
    A = np.zeros((len(rows), len(columns)), dtype=np.int64)
    for i, r in enumerate(rows):
        for k, v in r.items():
            A[i, index[k]] = v
    return A, list(columns)


def rref(A: np.ndarray, p: int, full: bool = True) -> Tuple[np.ndarray, List[int]]:
    """Row echelon form; reduced when ``full``.  Returns (nonzero rows, pivot columns)."""
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    pivots: List[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = A[r, c:] * inv % p
        if full:
            col = A[:, c].copy()
            col[r] = 0
        else:
            col = np.zeros(m, dtype=np.int64)
            col[r + 1:] = A[r + 1:, c]
        rows = np.flatnonzero(col)
        if rows.size:
            A[np.ix_(rows, np.arange(c, n))] = (
                A[np.ix_(rows, np.arange(c, n))] - np.outer(col[rows], A[r, c:])
            ) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


@numba.njit(cache=True)
def _rank_kernel(A, p):
    # Row reduction with lazy modular reduction: a row receives at most
    # min(m, n) updates of size < p^2 before it is reduced, so int64 is safe.
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            A[i, c] %= p
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(c, n):
                t = A[r, k]
                A[r, k] = A[piv, k]
                A[piv, k] = t
        a = A[r, c]
        e = p - 2
        inv = 1
        while e:
            if e & 1:
                inv = inv * a % p
            a = a * a % p
            e >>= 1
        for k in range(c, n):
            A[r, k] = A[r, k] % p * inv % p
        for i in range(r + 1, m):
            f = A[i, c] % p
            if f != 0:
                g = p - f
                for k in range(c, n):
                    A[i, k] += g * A[r, k]
        r += 1
    return r


def rank(A: np.ndarray, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.T
    return int(_rank_kernel(np.ascontiguousarray(A, dtype=np.int64) % p, p))


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of ``{v : A v = 0}`` as rows."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    R, piv = rref(A, p) if A.shape[0] else (np.zeros((0, n), dtype=np.int64), [])
    free = [c for c in range(n) if c not in set(piv)]
    N = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        N[k, f] = 1
        for i, c in enumerate(piv):
            N[k, c] = (-R[i, f]) % p
    return N


def independent_rows(rows: Sequence[Dict[Hashable, int]], p: int, start: int = 0) -> List[int]:
    """Indices ``>= start`` of rows that enlarge the span when taken in order."""
    if len(rows) <= start:
        return []
    A, _ = to_matrix(rows)
    if A.shape[1] == 0:
        return []
    _, piv = rref(A.T, p, full=False)
    return [i for i in piv if i >= start]


def solve_in_span(basis_rref: np.ndarray, pivots: Sequence[int], v: np.ndarray, p: int) -> np.ndarray:
    """Reduce ``v`` modulo the row space of a reduced echelon matrix."""
    v = np.array(v, dtype=np.int64) % p
    for i, c in enumerate(pivots):
        if v[c]:
            v = (v - v[c] * basis_rref[i]) % p
    return v
