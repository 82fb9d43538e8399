"""Linear orders and intersection-of-initial-segments representability.

A family is *k-order representable* when every member is
``{t : t ≤_1 s_1, ..., t ≤_k s_k}`` for some selectors ``s_i`` drawn from the
ground set.  Such a witness bounds the freedom index by ``k - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement, permutations

from .family import Family, elements_of, mask_of

SEARCH_LIMIT = 3_000_000


class ResourceGuardError(RuntimeError):
    """Requested search exceeds the desk-scale limits."""


@dataclass(frozen=True)
class LinearOrder:
    """A permutation of ``{1..m}`` listed from least to greatest."""

    seq: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.seq) != list(range(1, len(self.seq) + 1)):
            raise ValueError(f"{self.seq} is not a permutation of 1..{len(self.seq)}")

    @classmethod
    def parse(cls, text: str) -> "LinearOrder":
        text = text.strip()
        if "," in text or text.startswith("["):
            return cls(tuple(int(t) for t in text.strip("[]").split(",")))
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def usual(cls, m: int) -> "LinearOrder":
        return cls(tuple(range(1, m + 1)))

    @property
    def m(self) -> int:
        return len(self.seq)

    @cached_property
    def rank(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.seq)}

    def less(self, a: int, b: int) -> bool:
        return self.rank[a] < self.rank[b]

    def initial_segment(self, s: int) -> int:
        """Mask of ``{t : t ≤ s}``."""
        return mask_of(self.seq[: self.rank[s] + 1])

    def maximum(self, mask: int) -> int:
        return max(elements_of(mask), key=self.rank.__getitem__)

    def predecessor(self, s: int) -> int | None:
        r = self.rank[s]
        return self.seq[r - 1] if r else None

    def reversed(self) -> "LinearOrder":
        return LinearOrder(self.seq[::-1])

    def to_json(self):
        return str(self) if self.m <= 9 else list(self.seq)

    def __str__(self) -> str:
        if self.m <= 9:
            return "".join(map(str, self.seq))
        return "[" + ",".join(map(str, self.seq)) + "]"


def initial_segment(o: LinearOrder, s: int) -> int:
    return o.initial_segment(s)


@dataclass
class Representation:
    ok: bool
    selectors: dict[int, tuple[int, ...]] = field(default_factory=dict)
    failing: list[int] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def intersect_segments(orders: list[LinearOrder], selectors: tuple[int, ...]) -> int:
    out = -1
    for o, s in zip(orders, selectors):
        out &= o.initial_segment(s)
    return out


def is_representable(f: Family, orders: list[LinearOrder]) -> Representation:
    """Check every member is an intersection of one initial segment per order.

    The tightest choice is always optimal: the segment up to each order's
    maximum of ``A`` (its minimum, for ``A = ∅``).
    """
    if not orders:
        raise ValueError("need at least one order")
    if any(o.m != f.m for o in orders):
        raise ValueError("orders must live on the family's ground")
    rep = Representation(True)
    for a in f.sets:
        if a:
            sel = tuple(o.maximum(a) for o in orders)
        else:
            sel = tuple(o.seq[0] for o in orders)
        if intersect_segments(orders, sel) == a:
            rep.selectors[a] = sel
        else:
            rep.ok = False
            rep.failing.append(a)
    return rep


def _requirements(f: Family) -> list[tuple[int, int]]:
    """(A, x) pairs: some order must put x above every element of A."""
    reqs = []
    for a in f.sets:
        if a:
            for x in range(1, f.m + 1):
                if not a >> (x - 1) & 1:
                    reqs.append((a, x))
    return reqs


def _covered(o: LinearOrder, reqs: list[tuple[int, int]]) -> int:
    bits = 0
    for i, (a, x) in enumerate(reqs):
        r = o.rank[x]
        if all(o.rank[t] < r for t in elements_of(a)):
            bits |= 1 << i
    return bits


def _complete(m: int, need: list[int], forbidden_min: int | None) -> tuple[int, ...] | None:
    """Topologically sort ``need`` (need[x] = mask that must sit below x)."""
    placed = 0
    seq = []
    full = (1 << m) - 1
    while placed != full:
        for x in range(1, m + 1):
            bit = 1 << (x - 1)
            if placed & bit or need[x] & ~placed:
                continue
            if not seq and x == forbidden_min:
                continue
            break
        else:
            return None
        seq.append(x)
        placed |= bit
    return tuple(seq)


@dataclass
class OrderSearch:
    k: int
    witness: list[LinearOrder] | None
    tuples_covered: int
    prefixes_examined: int


def search_orders(f: Family, k: int) -> OrderSearch:
    """Exhaustive search for ``k`` orders representing ``f``.

    The first ``k - 1`` orders run over multisets (orders are interchangeable);
    the last one is solved exactly by topological sorting of what remains.
    ``tuples_covered`` is the size of the full ``(m!)^k`` space this decides.
    """
    m = f.m
    if k < 1 or m < 1:
        raise ValueError("need k >= 1 and a nonempty ground")
    nfact = math.factorial(m)
    prefixes = math.comb(nfact + k - 2, k - 1)
    if m > 6 or prefixes > SEARCH_LIMIT:
        raise ResourceGuardError(f"order search over m={m}, k={k} exceeds the desk-scale limit")
    covered_total = nfact ** k
    has_empty = bool(f.sets) and f.sets[0] == 0
    if k == 1 and has_empty and m > 0:
        return OrderSearch(k, None, covered_total, 0)
    reqs = _requirements(f)
    allmask = (1 << len(reqs)) - 1
    orders = [LinearOrder(p) for p in permutations(range(1, m + 1))]
    cov = [_covered(o, reqs) for o in orders]
    cache: dict[tuple[int, int | None], tuple[int, ...] | None] = {}
    examined = 0
    for combo in combinations_with_replacement(range(len(orders)), k - 1):
        examined += 1
        done = 0
        for i in combo:
            done |= cov[i]
        left = allmask & ~done
        forbidden = None
        if has_empty:
            mins = {orders[i].seq[0] for i in combo}
            if len(mins) == 1:
                forbidden = mins.pop()
        ck = (left, forbidden)
        if ck not in cache:
            need = [0] * (m + 1)
            rest = left
            while rest:
                low = rest & -rest
                a, x = reqs[low.bit_length() - 1]
                need[x] |= a
                rest ^= low
            cache[ck] = _complete(m, need, forbidden)
        last = cache[ck]
        if last is not None:
            witness = [orders[i] for i in combo] + [LinearOrder(last)]
            assert is_representable(f, witness).ok
            return OrderSearch(k, witness, covered_total, examined)
    return OrderSearch(k, None, covered_total, examined)


def min_orders(f: Family, max_orders: int) -> OrderSearch | None:
    """Smallest ``k <= max_orders`` with a witness, skipping guarded sizes."""
    for k in range(1, max_orders + 1):
        try:
            res = search_orders(f, k)
        except ResourceGuardError:
            return None
        if res.witness is not None:
            return res
    return None


# -- explicit constructions -------------------------------------------------

def proper_orders(m: int, missing: int) -> list[LinearOrder]:
    """``m - 1`` orders whose last two elements are ``n, k`` for each ``k`` in ``missing``.

    ``n`` is the single element outside ``missing``; the remaining elements
    come first in increasing label.  Together they represent every subset
    except ``missing`` itself.
    """
    full = (1 << m) - 1
    if m < 2 or missing & ~full or bin(missing).count("1") != m - 1:
        raise ValueError("missing must be an (m-1)-subset of {1..m}, m >= 2")
    (n,) = elements_of(full & ~missing)
    out = []
    for k in elements_of(missing):
        head = [x for x in range(1, m + 1) if x not in (n, k)]
        out.append(LinearOrder(tuple(head + [n, k])))
    return out


def proper_selectors(orders: list[LinearOrder], missing: int, a_set: int) -> tuple[int, ...] | None:
    """Selectors for ``a_set`` following the two explicit recipes.

    Orders are indexed by the element ``k`` they end with.  Strict segments
    ``{x <_k n}`` become the segment of n's predecessor; ``None`` when that
    predecessor does not exist (only for ``m = 2``).
    """
    if a_set == missing:
        raise ValueError("the missing set is not representable")
    m = orders[0].m
    (n,) = elements_of(((1 << m) - 1) & ~missing)
    sel = []
    for o in orders:
        k = o.seq[-1]
        if a_set >> (k - 1) & 1:
            sel.append(k)
        elif a_set >> (n - 1) & 1:
            sel.append(n)
        else:
            p = o.predecessor(n)
            if p is None:
                return None
            sel.append(p)
    return tuple(sel)


def full_cube_orders(m: int) -> list[LinearOrder]:
    """``m`` orders, the ``k``-th with maximum ``k``; they represent every subset."""
    if not 2 <= m <= 6:
        raise ValueError("full_cube_orders needs 2 <= m <= 6")
    return [LinearOrder(tuple([x for x in range(1, m + 1) if x != k] + [k])) for k in range(1, m + 1)]


def full_cube_selectors(orders: list[LinearOrder], a_set: int) -> tuple[int, ...]:
    """Whole order when its maximum is in ``a_set``, else the segment below the maximum."""
    sel = []
    for o in orders:
        top = o.seq[-1]
        sel.append(top if a_set >> (top - 1) & 1 else o.seq[-2])
    return tuple(sel)


def segment_family(orders: list[LinearOrder]) -> Family:
    """Every intersection of one initial segment per order."""
    m = orders[0].m
    out = set()
    for sel in _product_elements(m, len(orders)):
        out.add(intersect_segments(orders, sel))
    return Family.from_masks(m, out)


def _product_elements(m: int, k: int):
    if k == 0:
        yield ()
        return
    for rest in _product_elements(m, k - 1):
        for s in range(1, m + 1):
            yield rest + (s,)
