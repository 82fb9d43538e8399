"""Nested-orders families of sequences and the set families they induce.

A nested-orders family is a set of duplicate-free sequences over ``{1..m}``
built from a linear order on the ground plus linear orders on nested initial
segments.  An *n-nested* family keeps only sequences of length ``<= n + 2``.
The induced family ``F(S, n)`` holds every ``A`` such that whenever the first
``n + 1`` entries of a length-``(n + 2)`` sequence lie in ``A`` so does the
last one.

Sequence ``(s, t)`` in a family means ``t`` sits below ``s`` in the root
order; ``(u, s, t)`` means ``t`` sits below ``s`` in the order attached to
prefix ``u``.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product
from typing import Iterator

from . import kernels
from .family import Family, mask_of
from .orders import LinearOrder, ResourceGuardError

Seq = tuple[int, ...]


@dataclass(frozen=True)
class NestedOrders:
    m: int
    depth_bound: int | None  # n + 2 for an n-nested family, None when unbounded
    seqs: frozenset[Seq]

    @property
    def n(self) -> int | None:
        return None if self.depth_bound is None else self.depth_bound - 2

    @cached_property
    def children(self) -> dict[Seq, set[int]]:
        out: dict[Seq, set[int]] = defaultdict(set)
        for s in self.seqs:
            out[s[:-1]].add(s[-1])
        return dict(out)

    def __contains__(self, seq: object) -> bool:
        return seq in self.seqs

    def with_seqs(self, seqs) -> "NestedOrders":
        return NestedOrders(self.m, self.depth_bound, frozenset(seqs))

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "seqs": [list(s) for s in sorted(self.seqs)]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> "NestedOrders":
        n = data["n"]
        return cls(data["m"], None if n is None else n + 2, frozenset(tuple(s) for s in data["seqs"]))


# -- validation -------------------------------------------------------------

@dataclass
class Clause:
    ok: bool = True
    violation: tuple | None = None

    def fail(self, *witness) -> None:
        if self.ok:
            self.ok = False
            self.violation = witness


@dataclass
class ValidationReport:
    n: int | None
    length: Clause = field(default_factory=Clause)
    c1: Clause = field(default_factory=Clause)
    c2: Clause = field(default_factory=Clause)
    c3: Clause = field(default_factory=Clause)
    c4: Clause = field(default_factory=Clause)
    c5: dict[int, Clause] = field(default_factory=dict)

    def _base_ok(self) -> bool:
        return all(c.ok for c in (self.length, self.c1, self.c2, self.c3, self.c4))

    @property
    def ok(self) -> bool:
        """Comparability demanded only at prefix lengths ``k < n`` (literal reading)."""
        return self._base_ok() and all(c.ok for k, c in self.c5.items() if self.n is None or k < self.n)

    @property
    def ok_strict(self) -> bool:
        """Comparability demanded at every prefix length ``k <= n``."""
        return self._base_ok() and all(c.ok for c in self.c5.values())

    def to_json(self) -> dict:
        def cj(c):
            return {"ok": c.ok, "violation": c.violation}

        return {
            "n": self.n,
            "ok": self.ok,
            "ok_strict": self.ok_strict,
            "length": cj(self.length),
            "clauses": {str(i): cj(getattr(self, f"c{i}")) for i in range(1, 5)},
            "comparability_by_k": {str(k): cj(c) for k, c in sorted(self.c5.items())},
        }


def validate(s: NestedOrders, n: int | None = None) -> ValidationReport:
    """Check the five defining clauses; ``n`` switches to n-nested mode."""
    if n is None and s.depth_bound is not None:
        n = s.n
    rep = ValidationReport(n)
    ground = set(range(1, s.m + 1))
    seqs = s.seqs
    if n is not None:
        for q in sorted(seqs):
            if len(q) > n + 2:
                rep.length.fail(q)
    for t in sorted(ground):
        if (t,) not in seqs:
            rep.c1.fail((t,))
    for q in sorted(seqs):
        if not q or len(set(q)) != len(q) or not set(q) <= ground:
            rep.c2.fail(q)
    for q in sorted(seqs):
        if len(q) >= 2:
            if q[:-1] not in seqs:
                rep.c3.fail(q, q[:-1])
            elif q[:-2] + q[-1:] not in seqs:
                rep.c3.fail(q, q[:-2] + q[-1:])

    pairs: dict[Seq, set[tuple[int, int]]] = defaultdict(set)
    for q in seqs:
        if len(q) >= 2:
            pairs[q[:-2]].add((q[-2], q[-1]))
    for p in sorted(pairs):
        below = defaultdict(set)
        for a, b in pairs[p]:
            below[a].add(b)
        for a, b in sorted(pairs[p]):
            for c in sorted(below.get(b, ())):
                if (a, c) not in pairs[p]:
                    rep.c4.fail(p + (a, b), p + (b, c))

    max_k = n if n is not None else max((len(q) for q in seqs), default=1) - 1
    for k in range(0, max_k + 1):
        rep.c5[k] = Clause()
    for p, kids in sorted(s.children.items()):
        k = len(p)
        if k not in rep.c5:
            continue
        kl = sorted(kids)
        for i, a in enumerate(kl):
            for b in kl[i + 1:]:
                if (a, b) not in pairs.get(p, ()) and (b, a) not in pairs.get(p, ()):
                    rep.c5[k].fail(p + (a,), p + (b,))
    return rep


# -- induced families -------------------------------------------------------

def family_of(s: NestedOrders, n: int) -> Family:
    """All ``A ⊆ X`` closed under every length-``(n + 2)`` sequence of ``s``."""
    if n < -1:
        raise ValueError("n must be >= -1")
    premises, conclusions = [], []
    for q in sorted(s.seqs):
        if len(q) == n + 2:
            premises.append(mask_of(q[:-1]))
            conclusions.append(1 << (q[-1] - 1))
    return Family.from_bits(s.m, kernels.family_of_rules(s.m, premises, conclusions))


def nested_from_orders(orders: list[LinearOrder]) -> NestedOrders:
    """The (k-1)-nested family of sequences with ``t_i <_j t_j`` for ``j < i, j <= k``."""
    k = len(orders)
    if k < 1:
        raise ValueError("need at least one order")
    m = orders[0].m
    if any(o.m != m for o in orders):
        raise ValueError("orders must share a ground")
    seqs: set[Seq] = set()

    def grow(q: Seq) -> None:
        seqs.add(q)
        if len(q) == k + 1:
            return
        for t in range(1, m + 1):
            if all(orders[j].less(t, q[j]) for j in range(min(len(q), k))):
                grow(q + (t,))

    for t in range(1, m + 1):
        grow((t,))
    return NestedOrders(m, k + 1, frozenset(seqs))


def extend(s: NestedOrders, n: int) -> NestedOrders:
    """Grow an n-nested family to an (n+1)-nested one.

    Each length-``(n + 1)`` sequence gets the increasing-label order on its
    segment; the existing sequences are untouched.
    """
    rep = validate(s, n)
    if not rep.ok_strict:
        raise ValueError("extend needs a valid n-nested family (comparability at every k <= n)")
    new = set(s.seqs)
    for u, kids in s.children.items():
        if len(u) == n + 1:
            for x in kids:
                for y in kids:
                    if y < x:
                        new.add(u + (x, y))
    return NestedOrders(s.m, n + 3, frozenset(new))


# -- generator (order-tree) form -------------------------------------------

@dataclass(frozen=True)
class OrderTree:
    """Root order plus an order on each admissible prefix's segment.

    ``orders[u]`` lists the segment of prefix ``u`` from least to greatest;
    the segment of ``u + (x,)`` is everything before ``x`` in ``orders[u]``.
    Orders are present for prefixes of length ``<= n``.
    """

    m: int
    n: int
    orders: dict[Seq, tuple[int, ...]]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "orders": {",".join(map(str, u)): list(o) for u, o in sorted(self.orders.items())},
        }


def to_nested(tree: OrderTree) -> NestedOrders:
    n = tree.n
    seqs: set[Seq] = {(t,) for t in range(1, tree.m + 1)}

    def walk(u: Seq) -> None:
        order = tree.orders[u]
        for i, x in enumerate(order):
            child = u + (x,)
            seqs.add(child)
            if len(child) <= n:
                walk(child)
            else:
                for y in order[:i]:
                    seqs.add(child + (y,))

    if n >= 0:
        walk(())
    return NestedOrders(tree.m, n + 2, frozenset(seqs))


def _subtrees(u: Seq, domain: tuple[int, ...], n: int) -> Iterator[dict]:
    if len(u) > n:
        yield {}
        return
    for perm in permutations(domain):
        kids = [list(_subtrees(u + (x,), tuple(sorted(perm[:i])), n)) for i, x in enumerate(perm)]
        for combo in product(*kids):
            d = {u: perm}
            for c in combo:
                d.update(c)
            yield d


def enumerate_order_trees(m: int, n: int) -> Iterator[OrderTree]:
    """Every order tree of depth ``n + 1`` on ``{1..m}``."""
    if m > 6 or n > 3:
        raise ResourceGuardError("order-tree enumeration limited to m <= 6, n <= 3")
    if n < -1:
        raise ValueError("n must be >= -1")
    for d in _subtrees((), tuple(range(1, m + 1)), n):
        yield OrderTree(m, n, d)
