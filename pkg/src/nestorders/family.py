"""Finite set families over ``{1..m}`` stored as sorted bitmasks.

Element ``i`` is bit ``i - 1``.  A :class:`Family` always carries its ground
set explicitly, even when no member covers it, because the index recursion
treats ``F ⊆ {X}`` differently depending on what ``X`` is.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import kernels

MAX_M = 16


class ParseError(ValueError):
    """Malformed family text; ``pos`` is the 0-based offset of the problem."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def mask_of(elements: Iterable[int]) -> int:
    out = 0
    for x in elements:
        out |= 1 << (x - 1)
    return out


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Family:
    m: int
    sets: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.m <= MAX_M:
            raise ValueError(f"ground size must be in 0..{MAX_M}, got {self.m}")
        full = self.full
        prev = -1
        for s in self.sets:
            if s <= prev:
                raise ValueError("member masks must be strictly increasing")
            if s & ~full:
                raise ValueError(f"mask {s:#x} has elements outside {{1..{self.m}}}")
            prev = s

    @classmethod
    def from_masks(cls, m: int, masks: Iterable[int]) -> "Family":
        return cls(m, tuple(sorted(set(masks))))

    @classmethod
    def from_sets(cls, m: int, sets: Iterable[Iterable[int]]) -> "Family":
        return cls.from_masks(m, (mask_of(s) for s in sets))

    @classmethod
    def from_bits(cls, m: int, fm: int) -> "Family":
        return cls(m, tuple(kernels.members(fm)))

    @property
    def full(self) -> int:
        return (1 << self.m) - 1

    @property
    def bits(self) -> int:
        """The family as one integer: bit ``B`` set iff mask ``B`` is a member."""
        out = 0
        for s in self.sets:
            out |= 1 << s
        return out

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sets)

    def __contains__(self, mask: object) -> bool:
        return mask in self.sets

    def issubfamily(self, other: "Family") -> bool:
        return self.m == other.m and set(self.sets) <= set(other.sets)

    def as_sets(self) -> list[tuple[int, ...]]:
        return [elements_of(s) for s in self.sets]

    def __str__(self) -> str:
        return format_family(self)


# -- named families ---------------------------------------------------------

def full_cube(m: int) -> Family:
    return Family(m, tuple(range(1 << m)))


def uniform(m: int, k: int) -> Family:
    """All ``k``-element subsets of ``{1..m}``."""
    return Family.from_masks(m, (a for a in range(1 << m) if popcount(a) == k))


def intervals(m: int) -> Family:
    """∅ plus every interval ``{i..j}`` of ``{1..m}``."""
    sets = [0]
    for i in range(1, m + 1):
        for j in range(i, m + 1):
            sets.append(mask_of(range(i, j + 1)))
    return Family.from_masks(m, sets)


def problem2() -> Family:
    return parse_family("6: 12,23,34,35,56,123,235,356,2356")


BUILTINS = {
    "problem2": problem2,
}


# -- text form --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(\{)|(\})|(,)|(:))")


def parse_family(text: str) -> Family:
    """Parse ``"6: 12,23,{1,10}"``-style text.

    Without an ``m:`` prefix the ground is ``{1..largest element}``.  Digit
    runs denote one element per digit and need ``m <= 9``; ``0`` alone is
    the empty set.  Named built-ins (``problem2``) are accepted too.
    """
    stripped = text.strip()
    if stripped in BUILTINS:
        return BUILTINS[stripped]()
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if mt is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = next(i for i in range(1, 6) if mt.group(i) is not None)
        tokens.append((kind, mt.group(kind), mt.start(kind)))
        pos = mt.end()

    declared = None
    i = 0
    if len(tokens) >= 2 and tokens[0][0] == 1 and tokens[1][0] == 5:
        declared = int(tokens[0][1])
        if declared > MAX_M:
            raise ParseError(f"ground size {declared} exceeds {MAX_M}", tokens[0][2])
        i = 2

    raw: list[tuple[tuple[int, ...], int, bool]] = []  # elements, pos, digit-form

    def expect(kind, what):
        nonlocal i
        if i >= len(tokens):
            raise ParseError(f"expected {what}, got end of input", len(text))
        if tokens[i][0] != kind:
            raise ParseError(f"expected {what}, got {tokens[i][1]!r}", tokens[i][2])
        i += 1
        return tokens[i - 1]

    if i < len(tokens) or declared is None:
        while True:
            if i >= len(tokens):
                raise ParseError("expected a set, got end of input", len(text))
            kind, val, p = tokens[i]
            if kind == 1:
                i += 1
                if val == "0":
                    raw.append(((), p, False))
                else:
                    if "0" in val:
                        raise ParseError("element 0 is only allowed as the empty-set token", p + val.index("0"))
                    raw.append((tuple(int(ch) for ch in val), p, True))
            elif kind == 2:
                i += 1
                elems = [int(expect(1, "an element")[1])]
                while i < len(tokens) and tokens[i][0] == 4:
                    i += 1
                    elems.append(int(expect(1, "an element")[1]))
                for e in elems:
                    if e == 0:
                        raise ParseError("element 0 is only allowed as the empty-set token", p)
                raw.append((tuple(elems), p, False))
                expect(3, "'}'")
            else:
                raise ParseError(f"expected a set, got {val!r}", p)
            if i >= len(tokens):
                break
            expect(4, "','")

    largest = max((max(e) for e, _, _ in raw if e), default=0)
    m = declared if declared is not None else largest
    if m > MAX_M:
        raise ParseError(f"ground size {m} exceeds {MAX_M}", 0)
    masks = []
    for elems, p, digits in raw:
        if digits and m > 9:
            raise ParseError("digit-form sets need a ground of at most 9 elements", p)
        for e in elems:
            if e > m:
                raise ParseError(f"element {e} exceeds the declared ground {{1..{m}}}", p)
        masks.append(mask_of(elems))
    return Family.from_masks(m, masks)


def format_set(mask: int, m: int) -> str:
    if mask == 0:
        return "0"
    elems = elements_of(mask)
    if m <= 9:
        return "".join(str(e) for e in elems)
    return "{" + ",".join(str(e) for e in elems) + "}"


def format_family(f: Family) -> str:
    body = ",".join(format_set(s, f.m) for s in f.sets)
    return f"{f.m}: {body}" if body else f"{f.m}:"


# -- operations -------------------------------------------------------------

def is_chain(f: Family) -> bool:
    return kernels.is_chain_fm(f.bits, f.m)


def intersection_closure(f: Family) -> Family:
    return Family.from_bits(f.m, kernels.closure_fm(f.bits, f.m))


def is_intersection_closed(f: Family) -> bool:
    return intersection_closure(f) == f


def restrict(f: Family, y: int) -> Family:
    """``{A ∩ Y}`` relabeled onto ``{1..|Y|}`` by increasing original label."""
    if y & ~f.full:
        raise ValueError("restriction set leaves the ground")
    return Family.from_bits(popcount(y), kernels.restrict_fm(f.bits, f.m, y))


def link_family(f: Family, a_set: int, a: int) -> Family:
    """``{B ∩ A ∖ {a} : a ∈ B ∈ f}`` over the ground ``A ∖ {a}`` (relabeled)."""
    if a_set & ~f.full or not a_set >> (a - 1) & 1:
        raise ValueError("need a in A and A inside the ground")
    return Family.from_bits(popcount(a_set) - 1, kernels.link_fm(f.bits, f.m, a_set, a))


def relabel(f: Family, perm: tuple[int, ...]) -> Family:
    """Image of ``f`` under element ``i ↦ perm[i-1]``."""
    if sorted(perm) != list(range(1, f.m + 1)):
        raise ValueError("not a permutation of the ground")
    return Family.from_bits(f.m, kernels.permute_fm(f.bits, perm))


def canonicalize(f: Family) -> tuple[Family, tuple[int, ...]]:
    """Lexicographically least relabeling of ``f`` and a permutation reaching it."""
    cfm, perm = kernels.canon_fm(f.bits, f.m)
    return Family.from_bits(f.m, cfm), perm


def canonical_key(f: Family) -> str:
    c, _ = canonicalize(f)
    return serialize(c)


def serialize(f: Family) -> str:
    return f"{f.m}|" + ".".join(format(s, "x") for s in f.sets)


def deserialize(key: str) -> Family:
    m, _, body = key.partition("|")
    return Family.from_masks(int(m), (int(h, 16) for h in body.split(".") if h))


def augment(f: Family) -> Family:
    """``f ∪ {X} ∪`` all singletons."""
    return Family.from_masks(f.m, [*f.sets, f.full, *(1 << i for i in range(f.m))])


def all_families(m: int) -> Iterator[Family]:
    for fm in range(1 << (1 << m)):
        yield Family.from_bits(m, fm)
