"""Cycles in set families and the classification of families on {1,2,3,4}."""

from __future__ import annotations

from dataclasses import dataclass

from .family import Family, elements_of, is_chain, is_intersection_closed, popcount


@dataclass(frozen=True)
class CycleWitness:
    support: int
    cycle: tuple[int, ...]

    def to_json(self) -> dict:
        return {"support": list(elements_of(self.support)), "cycle": list(self.cycle)}


def _hamiltonian_cycle(nodes: tuple[int, ...], edges: set[int]) -> tuple[int, ...] | None:
    """Held-Karp over subsets; ``edges`` holds 2-element masks."""
    k = len(nodes)
    start = nodes[0]

    def adj(x, y):
        return (1 << (x - 1)) | (1 << (y - 1)) in edges

    # reach[(visited, end)] = predecessor
    reach: dict[tuple[int, int], int | None] = {(1, 0): None}
    layer = [(1, 0)]
    for _ in range(k - 1):
        nxt = []
        for visited, end in layer:
            for j in range(1, k):
                if not visited >> j & 1 and adj(nodes[end], nodes[j]):
                    key = (visited | 1 << j, j)
                    if key not in reach:
                        reach[key] = end
                        nxt.append(key)
        layer = nxt
    full = (1 << k) - 1
    for j in range(1, k):
        if (full, j) in reach and adj(nodes[j], start):
            path = []
            visited, end = full, j
            while end is not None:
                path.append(nodes[end])
                prev = reach[(visited, end)]
                visited &= ~(1 << end)
                end = prev
            return tuple(reversed(path))
    return None


def contains_cycle(f: Family) -> CycleWitness | None:
    """First ``A`` (by size, then mask) of size >= 3 whose traces hold a Hamiltonian cycle."""
    candidates = sorted((a for a in range(1 << f.m) if popcount(a) >= 3), key=lambda a: (popcount(a), a))
    for a in candidates:
        edges = {b & a for b in f.sets if popcount(b & a) == 2}
        if len(edges) < popcount(a):
            continue
        cyc = _hamiltonian_cycle(elements_of(a), edges)
        if cyc is not None:
            return CycleWitness(a, cyc)
    return None


def classify4(f: Family) -> int:
    """0 chain, 3 all subsets, 2 proper with a cycle, 1 otherwise."""
    if f.m != 4:
        raise ValueError("classify4 needs the ground {1,2,3,4}")
    if not is_intersection_closed(f):
        raise ValueError("classify4 needs an intersection-closed family containing X")
    if is_chain(f):
        return 0
    if len(f) == 16:
        return 3
    if contains_cycle(f) is not None:
        return 2
    return 1
