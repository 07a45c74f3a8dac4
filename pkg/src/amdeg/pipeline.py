"""Text descriptions of ideals: named constructions, projections and sections.

Grammar::

    source  := base | "project(" source "," point ")" | "section(" source "," int ")"
    base    := "S(" ints ")" | "veronese" | "segre22" | "segre111" | "pfaffian5"
             | "ci(" n "," d1 "," d2 ... ")"
    point   := "(" c0 ":" c1 ":" ... ")" | "generic"

``generic`` centers, linear sections and ``ci`` forms are drawn from a seeded
generator; the k-th random choice made while evaluating uses seed
``1000 * seed + k`` so a single integer reproduces a whole pipeline.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

from .groebner import Ideal, monomials_of_degree
from .polyring import DEFAULT_PRIME, ParseError, Polynomial, RingContext
from .varieties import (
    PointOnVarietyError,
    ProjectivePoint,
    ScrollType,
    generic_linear_section,
    pfaffian_5x5_generic,
    project_from_point,
    random_point,
    scroll_ideal,
    segre_p1p1p1,
    segre_p2xp2,
    veronese_ideal,
    veronese_secant_det,
)

NAMED = {
    "veronese": veronese_ideal,
    "segre22": segre_p2xp2,
    "segre111": segre_p1p1p1,
    "pfaffian5": pfaffian_5x5_generic,
}


@dataclass
class Node:
    kind: str                      # scroll | named | ci | project | section
    arg: object = None
    child: Optional["Node"] = None


@dataclass
class Evaluation:
    ideal: Ideal
    seed: int
    choices: List[str] = field(default_factory=list)


def _split_top(text: str) -> List[str]:
    """Split on commas that are not nested in parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_source(text: str) -> Node:
    s = text.strip()
    if not s:
        raise ParseError("empty ideal description")
    if s in NAMED:
        return Node("named", s)
    head, _, rest = s.partition("(")
    head = head.strip()
    if not rest or not s.endswith(")"):
        raise ParseError(f"unknown construction {s!r}")
    body = s[len(s) - len(rest): -1]
    if head == "S":
        try:
            return Node("scroll", ScrollType.parse(s))
        except ValueError as e:
            raise ParseError(str(e)) from None
    args = _split_top(body)
    if head == "ci":
        try:
            nums = [int(a) for a in args]
        except ValueError:
            raise ParseError(f"ci needs integers: {s!r}") from None
        if len(nums) < 2 or nums[0] < 1 or any(d < 1 for d in nums[1:]) or len(nums) - 1 >= nums[0]:
            raise ParseError(f"ci(n, d1, ..., dk) needs 1 <= k < n and degrees >= 1: {s!r}")
        return Node("ci", tuple(nums))
    if head in ("project", "section"):
        if len(args) != 2:
            raise ParseError(f"{head} takes two arguments: {s!r}")
        child = parse_source(args[0])
        if head == "project":
            if args[1] == "generic":
                return Node("project", "generic", child)
            try:
                ProjectivePoint.parse(args[1])
                return Node("project", args[1], child)
            except ValueError as e:
                raise ParseError(str(e)) from None
        try:
            count = int(args[1])
        except ValueError:
            raise ParseError(f"section count must be an integer: {s!r}") from None
        return Node("section", count, child)
    raise ParseError(f"unknown construction {head!r}")


class _Chooser:
    def __init__(self, seed: int):
        self.seed = seed
        self.k = 0

    def next_seed(self) -> int:
        s = 1000 * self.seed + self.k
        self.k += 1
        return s


def _evaluate(node: Node, modulus: int, chooser: _Chooser, choices: List[str]) -> Ideal:
    if node.kind == "named":
        return NAMED[node.arg](modulus)
    if node.kind == "scroll":
        return scroll_ideal(node.arg, modulus)
    if node.kind == "ci":
        n, *degs = node.arg
        ring = RingContext(n, modulus=modulus)
        rng = random.Random(chooser.next_seed())
        gens = []
        for d in degs:
            gens.append(Polynomial(ring, {m: rng.randrange(1, modulus) for m in monomials_of_degree(n, d)}))
        choices.append(f"ci forms of degrees {degs}")
        return Ideal(ring, gens)
    I = _evaluate(node.child, modulus, chooser, choices)
    if node.kind == "project":
        if node.arg == "generic":
            P = random_point(I.ring.num_vars, chooser.next_seed(), modulus)
            if node.child.kind == "named" and node.child.arg == "veronese":
                if veronese_secant_det(modulus).evaluate(P.coords) == 0:
                    raise PointOnVarietyError(f"generic center {P} lies on the secant variety")
            choices.append(f"center {P}")
        else:
            try:
                P = ProjectivePoint.parse(node.arg, modulus)
            except ValueError as e:
                raise ParseError(str(e)) from None
            if len(P) != I.ring.num_vars:
                raise ParseError(f"point {node.arg} has {len(P)} coordinates, need {I.ring.num_vars}")
        return project_from_point(I, P)
    if node.kind == "section":
        s = chooser.next_seed()
        choices.append(f"{node.arg} generic hyperplanes (seed {s})")
        return generic_linear_section(I, node.arg, s)
    raise ParseError(f"bad node {node.kind}")


def is_generic(node: Node) -> bool:
    """Whether evaluating ``node`` involves random choices."""
    while node is not None:
        if node.kind in ("ci", "section") or (node.kind == "project" and node.arg == "generic"):
            return True
        node = node.child
    return False


def evaluate(text: Union[str, Node], modulus: int = DEFAULT_PRIME, seed: int = 0) -> Evaluation:
    node = parse_source(text) if isinstance(text, str) else text
    choices: List[str] = []
    I = _evaluate(node, modulus, _Chooser(seed), choices)
    return Evaluation(I, seed, choices)


def read_ideal_file(path: Union[str, Path], modulus: int = DEFAULT_PRIME) -> Ideal:
    """Ideal file: first line ``ring n``, then one polynomial per line.

    Blank lines and lines starting with ``#`` are ignored.
    """
    lines = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty ideal file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "ring":
        raise ParseError("first line must be 'ring n'")
    try:
        n = int(head[1])
    except ValueError:
        raise ParseError("first line must be 'ring n'") from None
    if n < 1:
        raise ParseError("ring needs at least one variable")
    ring = RingContext(n, modulus=modulus)
    return Ideal(ring, [ring.parse(ln) for ln in lines[1:]])


def load_source(text: str, modulus: int = DEFAULT_PRIME, seed: int = 0) -> Evaluation:
    """Ideal file path or construction description."""
    p = Path(text)
    if p.is_file():
        return Evaluation(read_ideal_file(p, modulus), seed)
    return evaluate(text, modulus, seed)
