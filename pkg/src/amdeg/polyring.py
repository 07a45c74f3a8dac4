"""Homogeneous polynomials over a prime field.

Monomials are dense exponent tuples.  A :class:`Polynomial` keeps its terms
in a dict ``{exponents: coefficient}``; the sorted view is produced on demand
from the ring's term order.  The hot loops in :mod:`amdeg.groebner` and
:mod:`amdeg.resolution` work on those raw dicts directly.
"""

from __future__ import annotations

import re
from operator import add
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]
Terms = Dict[Monomial, int]

DEFAULT_PRIME = 32003

# exponent digit width for the packed order keys; exponents must stay below it
_KEY_BASE = 1 << 10


class RingMismatchError(ValueError):
    pass


class ParseError(ValueError):
    pass


class UnknownVariableError(ParseError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(add, a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if ``a`` divides ``b``."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(min, a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class TermOrder:
    """degrevlex, or ``block(t)`` eliminating the last ``t`` variables.

    ``key(m)`` returns an int that is larger for larger monomials.  Keys are
    cached per order instance.
    """

    def __init__(self, kind: str = "degrevlex", t: int = 0):
        if kind not in ("degrevlex", "block"):
            raise ValueError(f"unknown term order {kind!r}")
        if kind == "block" and t < 1:
            raise ValueError("block order needs t >= 1")
        self.kind = kind
        self.t = t if kind == "block" else 0
        self._cache: Dict[Monomial, int] = {}

    @classmethod
    def block(cls, t: int) -> "TermOrder":
        return cls("block", t)

    def __eq__(self, other):
        return isinstance(other, TermOrder) and (self.kind, self.t) == (other.kind, other.t)

    def __hash__(self):
        return hash((self.kind, self.t))

    def __repr__(self):
        return "degrevlex" if self.kind == "degrevlex" else f"block({self.t})"

    def key(self, m: Monomial) -> int:
        k = self._cache.get(m)
        if k is None:
            if self.kind == "degrevlex":
                k = _revlex_key(m)
            else:
                n = len(m) - self.t
                lo = _revlex_key(m[:n])
                hi = _revlex_key(m[n:])
                k = (hi << (11 * (n + 1) + 16)) | lo
            self._cache[m] = k
        return k


def _revlex_key(m: Sequence[int]) -> int:
    # total degree first, then the smaller exponent in the last variable wins
    k = sum(m)
    top = _KEY_BASE - 1
    for e in reversed(m):
        if e > top:
            raise OverflowError("exponent too large for the order key")
        k = k * _KEY_BASE + (top - e)
    return k


class RingContext:
    """``GF(p)[x0, ..., x_{n-1}]`` with a term order."""

    def __init__(
        self,
        num_vars: int,
        var_names: Optional[Sequence[str]] = None,
        modulus: int = DEFAULT_PRIME,
        order: Optional[TermOrder] = None,
    ):
        if num_vars < 1:
            raise ValueError("num_vars must be positive")
        if modulus <= 2 or not is_prime(modulus):
            raise ValueError(f"modulus must be an odd prime, got {modulus}")
        if var_names is None:
            var_names = [f"x{i}" for i in range(num_vars)]
        var_names = list(var_names)
        if len(var_names) != num_vars:
            raise ValueError("var_names has the wrong length")
        if len(set(var_names)) != num_vars:
            raise ValueError("duplicate variable names")
        self.num_vars = num_vars
        self.var_names = tuple(var_names)
        self.modulus = modulus
        self.order = order or TermOrder()
        self._index = {name: i for i, name in enumerate(self.var_names)}

    def __eq__(self, other):
        return (
            isinstance(other, RingContext)
            and self.num_vars == other.num_vars
            and self.var_names == other.var_names
            and self.modulus == other.modulus
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.num_vars, self.var_names, self.modulus, self.order))

    def __repr__(self):
        return f"RingContext({self.num_vars}, p={self.modulus}, order={self.order!r})"

    def with_order(self, order: TermOrder) -> "RingContext":
        return RingContext(self.num_vars, self.var_names, self.modulus, order)

    def subring(self, k: int) -> "RingContext":
        """Ring on the first ``k`` variables (degrevlex)."""
        return RingContext(k, self.var_names[:k], self.modulus)

    def var_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def one_mono(self) -> Monomial:
        return (0,) * self.num_vars

    def var_mono(self, i: int, e: int = 1) -> Monomial:
        m = [0] * self.num_vars
        m[i] = e
        return tuple(m)

    def var(self, i: int) -> "Polynomial":
        return Polynomial(self, {self.var_mono(i): 1})

    def gens(self) -> List["Polynomial"]:
        return [self.var(i) for i in range(self.num_vars)]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {self.one_mono(): 1})

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)


# --- raw dict arithmetic, shared with the Groebner and resolution code ----


def terms_add_scaled(f: Terms, g: Terms, c: int, shift: Optional[Monomial], p: int) -> None:
    """In place: ``f += c * shift * g``."""
    if shift is None:
        for m, a in g.items():
            v = (f.get(m, 0) + c * a) % p
            if v:
                f[m] = v
            else:
                f.pop(m, None)
    else:
        for m, a in g.items():
            m = tuple(map(add, m, shift))
            v = (f.get(m, 0) + c * a) % p
            if v:
                f[m] = v
            else:
                f.pop(m, None)


def terms_mul(f: Terms, g: Terms, p: int) -> Terms:
    out: Terms = {}
    for m1, a in f.items():
        for m2, b in g.items():
            m = tuple(map(add, m1, m2))
            v = (out.get(m, 0) + a * b) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def terms_leading(f: Terms, key) -> Monomial:
    return max(f, key=key)


class Polynomial:
    """Immutable polynomial tied to one :class:`RingContext`."""

    __slots__ = ("ring", "_t", "_hash")

    def __init__(self, ring: RingContext, terms: Optional[Terms] = None, *, _trusted: bool = False):
        self.ring = ring
        if terms is None:
            terms = {}
        if not _trusted:
            p = ring.modulus
            n = ring.num_vars
            clean: Terms = {}
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n or min(m, default=0) < 0:
                    raise ValueError(f"bad exponent vector {m}")
                c %= p
                if c:
                    clean[m] = c
            terms = clean
        self._t = terms
        self._hash = None

    # -- views
    @property
    def terms(self) -> List[Tuple[int, Monomial]]:
        """(coefficient, monomial) pairs, strictly decreasing in the ring order."""
        key = self.ring.order.key
        return [(self._t[m], m) for m in sorted(self._t, key=key, reverse=True)]

    def term_dict(self) -> Terms:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    @property
    def homogeneous_degree(self) -> Optional[int]:
        """Degree if homogeneous, ``None`` otherwise (and for zero)."""
        degs = {sum(m) for m in self._t}
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self) -> bool:
        return self.homogeneous_degree is not None

    @property
    def degree(self) -> int:
        if not self._t:
            return -1
        return max(sum(m) for m in self._t)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self._t)

    def leading_monomial(self) -> Monomial:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        return max(self._t, key=self.ring.order.key)

    def leading_coefficient(self) -> int:
        return self._t[self.leading_monomial()]

    def variables(self) -> List[int]:
        used = set()
        for m in self._t:
            used.update(i for i, e in enumerate(m) if e)
        return sorted(used)

    # -- arithmetic
    def _check(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatchError("polynomials live in different rings")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial(self.ring, {self.ring.one_mono(): other})
        self._check(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self._t)
        terms_add_scaled(t, other._t, 1, None, self.ring.modulus)
        return Polynomial(self.ring, t, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.modulus
        return Polynomial(self.ring, {m: p - c for m, c in self._t.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        t = dict(self._t)
        terms_add_scaled(t, other._t, -1, None, self.ring.modulus)
        return Polynomial(self.ring, t, _trusted=True)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        return Polynomial(self.ring, terms_mul(self._t, other._t, self.ring.modulus), _trusted=True)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.modulus
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: a * c % p for m, a in self._t.items()}, _trusted=True)

    def monic(self) -> "Polynomial":
        if not self._t:
            return self
        return self.scale(pow(self.leading_coefficient(), -1, self.ring.modulus))

    def shift(self, m: Monomial) -> "Polynomial":
        return Polynomial(self.ring, {mono_mul(k, m): c for k, c in self._t.items()}, _trusted=True)

    def evaluate(self, point: Sequence[int]) -> int:
        p = self.ring.modulus
        total = 0
        for m, c in self._t.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * pow(x, e, p) % p
            total += v
        return total % p

    def with_ring(self, ring: RingContext) -> "Polynomial":
        """Reinterpret in a ring with the same variables (e.g. another order)."""
        if ring.num_vars != self.ring.num_vars or ring.modulus != self.ring.modulus:
            raise RingMismatchError("incompatible ring")
        return Polynomial(ring, self._t, _trusted=True)

    # -- comparisons
    def __eq__(self, other):
        if isinstance(other, int):
            return self == self._coerce(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._t.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_polynomial(self)


# --- printing and parsing ----------------------------------------------------


def format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial, names: Optional[Sequence[str]] = None) -> str:
    if not f._t:
        return "0"
    names = names or f.ring.var_names
    out = []
    for c, m in f.terms:
        mono = format_monomial(m, names)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        num, name, sym = mt.groups()
        if num is not None:
            tokens.append(("int", int(num), mt.start(1)))
        elif name is not None:
            tokens.append(("name", name, mt.start(2)))
        elif sym is not None:
            if sym not in "+-*^":
                raise ParseError(f"unexpected character {sym!r} at {mt.start(3)}")
            tokens.append((sym, sym, mt.start(3)))
        pos = mt.end()
    return tokens


class _Parser:
    # poly := term (('+'|'-') term)* ; term := [int] ['*'] factor* ; factor := name ['^' int]

    def __init__(self, text: str, ring: RingContext):
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0
        if not self.toks:
            raise ParseError("empty input")

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind):
        if self.peek() != kind:
            where = self.toks[self.i][2] if self.i < len(self.toks) else "end"
            raise ParseError(f"expected {kind!r} at {where}")
        tok = self.toks[self.i]
        self.i += 1
        return tok[1]

    def poly(self) -> Terms:
        p = self.ring.modulus
        out: Terms = {}
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take(self.peek()) == "-" else 1
        while True:
            c, m = self.term()
            v = (out.get(m, 0) + sign * c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
            nxt = self.peek()
            if nxt is None:
                return out
            if nxt not in ("+", "-"):
                raise ParseError(f"expected '+' or '-' at {self.toks[self.i][2]}")
            sign = -1 if self.take(nxt) == "-" else 1

    def term(self):
        coeff = None
        if self.peek() == "int":
            coeff = self.take("int")
        exps = [0] * self.ring.num_vars
        seen_factor = False
        while True:
            if self.peek() == "*":
                if coeff is None and not seen_factor:
                    raise ParseError(f"dangling '*' at {self.toks[self.i][2]}")
                self.take("*")
                if self.peek() != "name":
                    raise ParseError("expected a variable after '*'")
            if self.peek() != "name":
                break
            idx = self.ring.var_index(self.take("name"))
            e = 1
            if self.peek() == "^":
                self.take("^")
                e = self.take("int")
            exps[idx] += e
            seen_factor = True
        if coeff is None and not seen_factor:
            raise ParseError("empty term")
        return (1 if coeff is None else coeff), tuple(exps)


def parse_polynomial(text: str, ring: RingContext) -> Polynomial:
    if text is None or not text.strip():
        raise ParseError("empty input")
    terms = _Parser(text, ring).poly()
    return Polynomial(ring, terms, _trusted=True)


# --- linear changes of coordinates ------------------------------------------


class LinearChange:
    """Invertible matrix acting by ``x_i -> sum_j T[i][j] x_j``."""

    def __init__(self, matrix: Sequence[Sequence[int]], modulus: int):
        rows = [[int(v) % modulus for v in row] for row in matrix]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if _det_mod(rows, modulus) == 0:
            raise ValueError("singular matrix")
        self.matrix = tuple(tuple(r) for r in rows)
        self.modulus = modulus
        self.size = n

    @classmethod
    def identity(cls, n: int, modulus: int) -> "LinearChange":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], modulus)

    @classmethod
    def permutation(cls, perm: Sequence[int], modulus: int) -> "LinearChange":
        """``x_i -> x_{perm[i]}``."""
        n = len(perm)
        return cls([[int(j == perm[i]) for j in range(n)] for i in range(n)], modulus)

    def compose(self, other: "LinearChange") -> "LinearChange":
        """The change equal to applying ``self`` and then ``other``."""
        p = self.modulus
        a, b = self.matrix, other.matrix
        n = self.size
        return LinearChange(
            [[sum(a[i][k] * b[k][j] for k in range(n)) % p for j in range(n)] for i in range(n)], p
        )


def _det_mod(rows: List[List[int]], p: int) -> int:
    a = [list(r) for r in rows]
    n = len(a)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c] % p
        inv = pow(a[c][c], -1, p)
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] * inv % p
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[c])]
    return det % p


def apply_linear_change_terms(f: Terms, change: LinearChange, n: int) -> Terms:
    p = change.modulus
    images = []
    for i in range(n):
        row = change.matrix[i]
        images.append({tuple(int(k == j) for k in range(n)): c for j, c in enumerate(row) if c})
    powers: Dict[Tuple[int, int], Terms] = {}

    def power(i: int, e: int) -> Terms:
        key = (i, e)
        if key not in powers:
            powers[key] = images[i] if e == 1 else terms_mul(power(i, e - 1), images[i], p)
        return powers[key]

    out: Terms = {}
    one = (0,) * n
    for m, c in f.items():
        acc: Terms = {one: c}
        for i, e in enumerate(m):
            if e:
                acc = terms_mul(acc, power(i, e), p)
        terms_add_scaled(out, acc, 1, None, p)
    return out


def apply_linear_change(f: Polynomial, change: LinearChange) -> Polynomial:
    if change.size != f.ring.num_vars or change.modulus != f.ring.modulus:
        raise RingMismatchError("linear change does not match the ring")
    return Polynomial(f.ring, apply_linear_change_terms(f._t, change, f.ring.num_vars), _trusted=True)


# --- division ----------------------------------------------------------------


def reduce_terms(f: Terms, basis: Sequence[Tuple[Monomial, Terms]], key, p: int) -> Terms:
    """Full reduction of ``f`` by monic ``(leading monomial, terms)`` pairs."""
    import heapq

    f = dict(f)
    rem: Terms = {}
    heap = [-key(m) for m in f]
    keymap = {key(m): m for m in f}
    heapq.heapify(heap)
    while heap:
        k = -heapq.heappop(heap)
        m = keymap.get(k)
        if m is None or m not in f:
            continue
        c = f[m]
        for lm, g in basis:
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                for gm, gc in g.items():
                    t = tuple(map(add, gm, q))
                    old = f.get(t)
                    v = ((old or 0) - c * gc) % p
                    if v:
                        if old is None:
                            kt = key(t)
                            keymap[kt] = t
                            heapq.heappush(heap, -kt)
                        f[t] = v
                    elif old is not None:
                        del f[t]
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def normal_form(f: Polynomial, G: Iterable[Polynomial], ring: Optional[RingContext] = None) -> Polynomial:
    """Remainder of ``f`` on division by ``G`` in ``ring``'s term order."""
    ring = ring or f.ring
    G = list(G)
    if not G:
        raise ValueError("normal_form needs a non-empty divisor list")
    for g in [f, *G]:
        if g.ring.num_vars != ring.num_vars or g.ring.modulus != ring.modulus:
            raise RingMismatchError("polynomials live in different rings")
    key = ring.order.key
    p = ring.modulus
    basis = []
    for g in G:
        if g.is_zero():
            continue
        lm = max(g._t, key=key)
        inv = pow(g._t[lm], -1, p)
        basis.append((lm, {m: c * inv % p for m, c in g._t.items()}))
    rem = reduce_terms(f._t, basis, key, p) if basis else dict(f._t)
    return Polynomial(ring, rem, _trusted=True)
