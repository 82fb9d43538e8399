"""Pure-Python kernels over family bitsets.

A family of subsets of ``{1..m}`` is packed into one integer ``fm`` whose
bit ``B`` is set iff the subset with mask ``B`` is a member.  Every routine
here has a twin in ``_kernels.pyx`` with the same signature and results; the
compiled one only covers ``m <= 6`` (families fit in a uint64).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

MAX_M = 16
MAX_CANON_M = 8


def memo_key(fm: int, m: int) -> int:
    return (fm << 5) | m


def members(fm: int) -> list[int]:
    out = []
    while fm:
        low = fm & -fm
        out.append(low.bit_length() - 1)
        fm ^= low
    return out


def compress(mask: int, onto: int) -> int:
    """Squeeze the bits of ``mask`` lying in ``onto`` down to consecutive positions."""
    out = 0
    j = 0
    while onto:
        low = onto & -onto
        if mask & low:
            out |= 1 << j
        j += 1
        onto ^= low
    return out


def link_fm(fm: int, m: int, a_set: int, a: int) -> int:
    abit = 1 << (a - 1)
    keep = a_set & ~abit
    out = 0
    for b in members(fm):
        if b & abit:
            out |= 1 << compress(b & keep, keep)
    return out


def restrict_fm(fm: int, m: int, y: int) -> int:
    out = 0
    for b in members(fm):
        out |= 1 << compress(b & y, y)
    return out


def is_chain_fm(fm: int, m: int) -> bool:
    ms = sorted(members(fm), key=lambda b: bin(b).count("1"))
    return all(ms[i] & ~ms[i + 1] == 0 for i in range(len(ms) - 1))


def closure_fm(fm: int, m: int) -> int:
    fm |= 1 << ((1 << m) - 1)
    frontier = members(fm)
    while frontier:
        current = members(fm)
        new = []
        for b in frontier:
            for c in current:
                d = b & c
                if not (fm >> d) & 1:
                    fm |= 1 << d
                    new.append(d)
        frontier = new
    return fm


@lru_cache(maxsize=None)
def _perm_table(m: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    rows = []
    for p in permutations(range(1, m + 1)):
        img = []
        for b in range(1 << m):
            c = 0
            for i in range(m):
                if b >> i & 1:
                    c |= 1 << (p[i] - 1)
            img.append(c)
        rows.append((p, tuple(img)))
    return tuple(rows)


def permute_fm(fm: int, perm: tuple[int, ...]) -> int:
    out = 0
    for b in members(fm):
        c = 0
        for i, target in enumerate(perm):
            if b >> i & 1:
                c |= 1 << (target - 1)
        out |= 1 << c
    return out


def _better(x: int, y: int) -> bool:
    # Same cardinality on both sides, so the lexicographically smaller sorted
    # member list is the one owning the lowest differing bit.
    d = x ^ y
    return d != 0 and bool(x & d & -d)


def canon_fm(fm: int, m: int) -> tuple[int, tuple[int, ...]]:
    if m > MAX_CANON_M:
        raise ValueError(f"canonical form limited to m <= {MAX_CANON_M}")
    ms = members(fm)
    best = -1
    best_p: tuple[int, ...] = tuple(range(1, m + 1))
    if m <= 6:
        for p, img in _perm_table(m):
            x = 0
            for b in ms:
                x |= 1 << img[b]
            if best < 0 or _better(x, best):
                best, best_p = x, p
    else:
        for p in permutations(range(1, m + 1)):
            x = permute_fm(fm, p)
            if best < 0 or _better(x, best):
                best, best_p = x, p
    return best, best_p


@lru_cache(maxsize=None)
def subsets_by_size(m: int) -> tuple[int, ...]:
    """Nonempty subsets of {1..m}, largest first, then by mask."""
    return tuple(sorted(range(1, 1 << m), key=lambda a: (-bin(a).count("1"), a)))


def no_value(fm: int, m: int, memo: dict, stats: list) -> int:
    """Index of the family via the max-min recursion, memoized in ``memo``.

    ``stats[0]`` counts recursion expansions (memo misses that recurse).
    """
    full = 1 << ((1 << m) - 1)
    if fm & ~full == 0:
        return -1
    key = memo_key(fm, m)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if is_chain_fm(fm, m):
        memo[key] = 0
        return 0
    ckey = key
    if m <= MAX_CANON_M:
        cfm, _ = canon_fm(fm, m)
        ckey = memo_key(cfm, m)
        hit = memo.get(ckey)
        if hit is not None:
            memo[key] = hit
            return hit
    stats[0] += 1
    best = -1
    for a_set in subsets_by_size(m):
        size = bin(a_set).count("1")
        if size - 1 <= best:
            break
        cur = size
        rest = a_set
        while rest:
            low = rest & -rest
            rest ^= low
            v = no_value(link_fm(fm, m, a_set, low.bit_length()), m=size - 1, memo=memo, stats=stats)
            if v < cur:
                cur = v
                if cur + 1 <= best:
                    break
        if cur + 1 > best:
            best = cur + 1
    memo[key] = best
    memo[ckey] = best
    return best


def family_of_rules(m: int, premises: list[int], conclusions: list[int]) -> int:
    """Bitset of all A with (premise ⊆ A ⟹ conclusion bit ∈ A) for every rule."""
    out = 0
    for a in range(1 << m):
        for p, c in zip(premises, conclusions):
            if a & p == p and not a & c:
                break
        else:
            out |= 1 << a
    return out
