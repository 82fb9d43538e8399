"""Exact computation of the nested-orders index and the freedom bracket.

Two independent routes compute the index:

* :func:`no_rec` runs the max-min recursion over links ``{B ∩ A ∖ {a}}``,
  memoized on canonical forms (hot loop in the compiled kernel);
* :func:`no_direct` searches order trees level by level and returns the least
  ``n`` with ``F ⊆ F(S, n)`` together with the witnessing sequence family.

Base conventions for the recursion: ``-1`` when every member equals the
ground set (including the empty family), ``0`` for other chains.
"""

from __future__ import annotations

import json
import logging
import math
import os
import tempfile
from dataclasses import dataclass, field

from . import kernels
from .family import Family, deserialize, elements_of, is_chain, serialize
from .nested import NestedOrders, OrderTree, family_of, to_nested, validate
from .orders import ResourceGuardError, full_cube_orders, is_representable, min_orders, proper_orders

log = logging.getLogger(__name__)


class Memo:
    """Index values keyed by ``kernels.memo_key``; raw and canonical keys share it."""

    def __init__(self):
        self.table: dict[int, int] = {}
        self.stats = [0]
        self.skipped = 0

    @property
    def expansions(self) -> int:
        return self.stats[0]

    def __len__(self) -> int:
        return len(self.table)

    def clear(self) -> None:
        self.table.clear()
        self.stats[0] = 0

    def merge(self, other: dict[int, int]) -> None:
        self.table.update(other)

    def canonical_entries(self) -> dict[str, int]:
        out = {}
        for key, value in self.table.items():
            m = key & 31
            f = Family.from_bits(m, key >> 5)
            if m <= kernels.py.MAX_CANON_M:
                cfm, _ = kernels.canon_fm(f.bits, m)
                f = Family.from_bits(m, cfm)
            out[serialize(f)] = value
        return out

    def save(self, path: str) -> int:
        entries = self.canonical_entries()
        folder = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=folder, prefix=".memo-", suffix=".jsonl")
        with os.fdopen(fd, "w") as fh:
            for key in sorted(entries):
                fh.write(json.dumps({"v": 1, "key": key, "no": entries[key]}) + "\n")
        os.replace(tmp, path)
        return len(entries)

    def load(self, path: str) -> int:
        if not os.path.exists(path):
            return 0
        loaded = 0
        with open(path) as fh:
            for line in fh:
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    if rec.get("v") != 1:
                        raise ValueError("unknown version")
                    f = deserialize(rec["key"])
                    value = int(rec["no"])
                except (ValueError, KeyError, TypeError, AttributeError):
                    self.skipped += 1
                    continue
                self.table[kernels.memo_key(f.bits, f.m)] = value
                loaded += 1
        if self.skipped:
            log.warning("skipped %d corrupt memo lines in %s", self.skipped, path)
        return loaded


DEFAULT_MEMO = Memo()


@dataclass
class UpperCertificate:
    kind: str  # chain | orders | onemin | proper | full
    bound: int
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "bound": self.bound, "witness": self.witness}


@dataclass
class TraceStep:
    a_set: tuple[int, ...]
    a: int
    value: int  # index of the linked family

    def to_json(self) -> dict:
        return {"A": list(self.a_set), "a": self.a, "value": self.value}


@dataclass
class IndexCertificate:
    value: int | None  # None: exceeds the searched range (direct method)
    method: str  # recursion | direct | bracket
    trace: list[TraceStep] = field(default_factory=list)
    witness: NestedOrders | None = None
    tree: OrderTree | None = None
    n_max: int | None = None
    fr_lower: int | None = None
    fr_upper_certificates: list[UpperCertificate] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)

    @property
    def fr_upper(self) -> int | None:
        return min((c.bound for c in self.fr_upper_certificates), default=None)

    @property
    def status(self) -> str:
        up = self.fr_upper
        if up is None or self.fr_lower is None:
            return "open"
        if up < self.fr_lower:
            return "contradiction"
        return "tight" if up == self.fr_lower else "gap"

    def to_json(self) -> dict:
        out: dict = {"value": self.value, "method": self.method}
        if self.method == "recursion":
            out["trace"] = [s.to_json() for s in self.trace]
        if self.method == "direct":
            out["n_max"] = self.n_max
            out["witness"] = None if self.witness is None else self.witness.to_json()
        if self.fr_lower is not None:
            out["fr_lower"] = self.fr_lower
            out["fr_upper"] = self.fr_upper
            out["status"] = self.status
            out["certificates"] = [c.to_json() for c in self.fr_upper_certificates]
        if self.findings:
            out["findings"] = list(self.findings)
        return out


# -- recursion --------------------------------------------------------------

def no_value(f: Family, memo: Memo | None = None) -> int:
    memo = DEFAULT_MEMO if memo is None else memo
    return kernels.no_value(f.bits, f.m, memo.table, memo.stats)


def _trace(fm: int, m: int, labels: tuple[int, ...], value: int, memo: Memo) -> list[TraceStep]:
    steps = []
    while value >= 1:
        for a_set in kernels.subsets_by_size(m):
            best_a, best_v = None, None
            rest = a_set
            while rest:
                low = rest & -rest
                rest ^= low
                a = low.bit_length()
                v = kernels.no_value(kernels.link_fm(fm, m, a_set, a), bin(a_set).count("1") - 1, memo.table, memo.stats)
                if best_v is None or v < best_v:
                    best_a, best_v = a, v
            if best_v + 1 == value:
                break
        else:  # pragma: no cover - the recursion value is always attained
            raise AssertionError("no optimal set found while tracing")
        kept = a_set & ~(1 << (best_a - 1))
        steps.append(TraceStep(tuple(labels[i - 1] for i in elements_of(a_set)), labels[best_a - 1], best_v))
        fm = kernels.link_fm(fm, m, a_set, best_a)
        labels = tuple(labels[i - 1] for i in elements_of(kept))
        m = len(labels)
        value = best_v
    return steps


def no_rec(f: Family, memo: Memo | None = None) -> IndexCertificate:
    """Index via ``1 + max_A min_{a∈A} no(link(f, A, a))`` with one optimal trace."""
    memo = DEFAULT_MEMO if memo is None else memo
    value = no_value(f, memo)
    trace = _trace(f.bits, f.m, tuple(range(1, f.m + 1)), value, memo)
    return IndexCertificate(value, "recursion", trace=trace)


# -- direct search ----------------------------------------------------------

class _TreeSearch:
    """Order-tree search for one level ``n``.

    A subtree's feasibility depends only on the *set* of its prefix entries,
    its segment and its remaining depth, so those are memoized; within one
    node, orders are built bottom-up with a cache of dead partial segments.
    """

    def __init__(self, f: Family):
        self.sets = f.sets
        self.full = f.full
        self._need: dict[int, int] = {}
        self._solved: dict[tuple[int, int, int], tuple | None] = {}
        self.nodes = 0

    def need(self, prefix: int) -> int:
        got = self._need.get(prefix)
        if got is None:
            got = self.full
            for a in self.sets:
                if a & prefix == prefix:
                    got &= a
            self._need[prefix] = got
        return got

    def solve(self, prefix: int, domain: int, r: int):
        key = (prefix, domain, r)
        if key in self._solved:
            return self._solved[key]
        self.nodes += 1
        elems = elements_of(domain)
        failed: set[int] = set()
        seq: list[int] = []

        def fits(x: int, below: int) -> bool:
            px = prefix | (1 << (x - 1))
            if r == 0:
                return below & ~self.need(px) == 0
            return self.solve(px, below, r - 1) is not None

        def dfs(placed: int) -> bool:
            if placed == domain:
                return True
            if placed in failed:
                return False
            for x in elems:
                bit = 1 << (x - 1)
                if placed & bit == 0 and fits(x, placed):
                    seq.append(x)
                    if dfs(placed | bit):
                        return True
                    seq.pop()
            failed.add(placed)
            return False

        result = tuple(seq) if dfs(0) else None
        self._solved[key] = result
        return result

    def build(self, n: int) -> OrderTree | None:
        if self.solve(0, self.full, n) is None:
            return None
        orders: dict[tuple[int, ...], tuple[int, ...]] = {}

        def grow(u, prefix, domain, r):
            order = self._solved[(prefix, domain, r)]
            orders[u] = order
            if r > 0:
                below = 0
                for x in order:
                    grow(u + (x,), prefix | (1 << (x - 1)), below, r - 1)
                    below |= 1 << (x - 1)

        grow((), 0, self.full, n)
        m = bin(self.full).count("1")
        return OrderTree(m, n, orders)


def no_direct(f: Family, n_max: int = 3) -> IndexCertificate:
    """Least ``n <= n_max`` admitting an n-nested ``S`` with ``f ⊆ F(S, n)``."""
    if f.m > 6 or n_max > 3:
        raise ResourceGuardError("direct search limited to m <= 6, n_max <= 3")
    cert = IndexCertificate(None, "direct", n_max=n_max)
    if all(a == f.full for a in f.sets):
        cert.value = -1
        cert.tree = OrderTree(f.m, -1, {})
        cert.witness = to_nested(cert.tree)
        return cert
    for n in range(0, n_max + 1):
        tree = _TreeSearch(f).build(n)
        if tree is not None:
            cert.value = n
            cert.tree = tree
            cert.witness = to_nested(tree)
            return cert
    return cert


def witness_holds(f: Family, cert: IndexCertificate) -> bool:
    """Re-check a direct witness: valid n-nested family whose induced family covers ``f``."""
    if cert.witness is None or cert.value is None:
        return False
    n = cert.value
    return validate(cert.witness, n).ok_strict and f.issubfamily(family_of(cert.witness, n))


# -- nestbound --------------------------------------------------------------

def _binom(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


@dataclass
class NestboundRow:
    k: int
    count: int
    bound_printed: int
    bound_derived: int

    @property
    def printed_ok(self) -> bool:
        return self.count <= self.bound_printed

    @property
    def derived_ok(self) -> bool:
        return self.count <= self.bound_derived

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "count": self.count,
            "bound_printed": self.bound_printed,
            "bound_derived": self.bound_derived,
            "printed_ok": self.printed_ok,
            "derived_ok": self.derived_ok,
        }


@dataclass
class NestboundReport:
    no: int
    rows: list[NestboundRow]

    @property
    def printed_ok(self) -> bool:
        return all(r.printed_ok for r in self.rows)

    @property
    def derived_ok(self) -> bool:
        return all(r.derived_ok for r in self.rows)

    def to_json(self) -> dict:
        return {"no": self.no, "printed_ok": self.printed_ok, "derived_ok": self.derived_ok,
                "rows": [r.to_json() for r in self.rows]}


def nestbound_check(f: Family, no: int | None = None) -> NestboundReport:
    """Count members of size ``no + k`` against both binomial bounds.

    Printed bound: ``C(no, |X| - k)``; bound from the counting argument:
    ``C(|X| - k, no)``.  Rows run over ``0 <= k <= |X| - no``; nothing is
    checked when ``no = -1``.
    """
    if no is None:
        no = no_value(f)
    rows = []
    if no >= 0:
        sizes = [bin(a).count("1") for a in f.sets]
        for k in range(0, f.m - no + 1):
            rows.append(NestboundRow(k, sizes.count(no + k), _binom(no, f.m - k), _binom(f.m - k, no)))
    return NestboundReport(no, rows)


# -- freedom bracket --------------------------------------------------------

def _orders_witness(f: Family, orders) -> dict:
    rep = is_representable(f, orders)
    return {
        "orders": [o.to_json() for o in orders],
        "selectors": {format(a, "x"): list(s) for a, s in sorted(rep.selectors.items())},
    }


def fr_bracket(f: Family, max_orders: int = 3, memo: Memo | None = None) -> IndexCertificate:
    """Lower bound from the index, upper bounds from every certificate that applies."""
    from .fprec import onemin_certificate

    value = no_value(f, memo)
    cert = IndexCertificate(value, "bracket", fr_lower=max(0, value))
    ups = cert.fr_upper_certificates
    if is_chain(f):
        ups.append(UpperCertificate("chain", 0))
    if f.m >= 1:
        found = min_orders(f, max_orders)
        if found is not None:
            ups.append(UpperCertificate("orders", found.k - 1, _orders_witness(f, found.witness)))
    if f.m <= 6:
        hit = onemin_certificate(f)
        if hit is not None:
            perm, prec = hit
            ups.append(UpperCertificate("onemin", 1, {"relabeling": list(perm), "prec": prec.to_json(), "m": f.m}))
    if f.m >= 2:
        present = set(f.sets)
        for missing in sorted(f.full & ~(1 << i) for i in range(f.m)):
            if missing not in present:
                orders = proper_orders(f.m, missing)
                if is_representable(f, orders):
                    ups.append(UpperCertificate("proper", f.m - 2, dict(_orders_witness(f, orders), missing=format(missing, "x"))))
                break
    if 2 <= f.m <= 6:
        ups.append(UpperCertificate("full", f.m - 1, _orders_witness(f, full_cube_orders(f.m))))
    for c in ups:
        if c.bound < cert.fr_lower:
            cert.findings.append(f"{c.kind} certificate bound {c.bound} below index {value}")
    return cert
