"""Two-order families ``F[≺]`` and the one-minimum certificate.

``X = {1..m}`` carries its usual order and ``≺`` is an order on
``{1..m-1}``.  ``S[≺]`` keeps sequences of length ``<= 3`` with
``t2 < t1``, ``t3 < t1`` and ``t3 ≺ t2``; ``F[≺] = F(S[≺], 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator

from . import kernels
from .family import Family
from .nested import NestedOrders, family_of, nested_from_orders
from .orders import LinearOrder, ResourceGuardError


@dataclass(frozen=True)
class PrecOrder:
    order: tuple[int, ...]  # ≺ on {1..m-1}, least first
    m: int

    def __post_init__(self):
        if self.m < 1 or sorted(self.order) != list(range(1, self.m)):
            raise ValueError(f"{self.order} is not an order on 1..{self.m - 1}")

    @classmethod
    def parse(cls, text: str, m: int | None = None) -> "PrecOrder":
        order = LinearOrder.parse(text).seq if text.strip() else ()
        return cls(order, len(order) + 1 if m is None else m)

    @classmethod
    def usual(cls, m: int) -> "PrecOrder":
        return cls(tuple(range(1, m)), m)

    def as_linear_order(self) -> LinearOrder:
        """``≺`` with ``m`` placed on top, as an order on the whole ground."""
        return LinearOrder(self.order + (self.m,))

    def to_json(self) -> str | list[int]:
        if self.m <= 10:
            return "".join(map(str, self.order))
        return list(self.order)

    def __str__(self) -> str:
        return "≺".join(map(str, self.order))


def sprec(p: PrecOrder) -> NestedOrders:
    if p.m < 2:
        raise ValueError("need m >= 2")
    return nested_from_orders([LinearOrder.usual(p.m), p.as_linear_order()])


def fprec(p: PrecOrder) -> Family:
    return family_of(sprec(p), 1)


def onemin_holds(p: PrecOrder) -> int | None:
    """Least pivot ``t`` with ``t ≺ t+1 ≺ ... ≺ m-1`` and ``t ≺ t-1 ≺ ... ≺ 1``."""
    rank = {x: i for i, x in enumerate(p.order)}
    for t in range(1, p.m):
        up = list(range(t, p.m))
        down = list(range(t, 0, -1))
        if all(rank[a] < rank[b] for a, b in zip(up, up[1:])) and all(
            rank[a] < rank[b] for a, b in zip(down, down[1:])
        ):
            return t
    return None


def onemin_orders(m: int) -> Iterator[PrecOrder]:
    """Every ``≺`` satisfying the one-minimum hypothesis, by pivot then interleaving."""
    for t in range(1, m):
        up = list(range(t + 1, m))
        down = list(range(t - 1, 0, -1))
        slots = len(up) + len(down)
        for up_pos in combinations(range(slots), len(up)):
            ui, di = iter(up), iter(down)
            upset = set(up_pos)
            rest = [next(ui) if i in upset else next(di) for i in range(slots)]
            yield PrecOrder((t, *rest), m)


@lru_cache(maxsize=64)
def _fprec_bits(p: PrecOrder) -> int:
    return fprec(p).bits


def onemin_certificate(f: Family) -> tuple[tuple[int, ...], PrecOrder] | None:
    """Relabeling ``π`` and one-minimum ``≺`` with ``π·f ⊆ F[≺]``, if any."""
    if f.m > 6:
        raise ResourceGuardError("one-minimum certificate search limited to m <= 6")
    if f.m < 2:
        return None
    perms = list(permutations(range(1, f.m + 1)))
    bits = f.bits
    for p in onemin_orders(f.m):
        target = _fprec_bits(p)
        for perm in perms:
            if kernels.permute_fm(bits, perm) & ~target == 0:
                return perm, p
    return None
