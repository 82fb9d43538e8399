"""Exhaustive and sampled sweeps over all families on a small ground set.

Work is split into contiguous ranges of canonical keys; every worker gets a
snapshot of the memo and hands back its own table, which the parent merges.
Records come out in increasing family-bitset order whatever the job count.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import kernels
from .family import Family, serialize
from .index import DEFAULT_MEMO, Memo, fr_bracket, no_direct
from .orders import ResourceGuardError
from .structure import classify4

EXHAUSTIVE_MAX_M = 4
SAMPLED_MAX_M = 6


@dataclass
class SweepReport:
    parameters: dict
    records: list[dict] = field(default_factory=list)
    findings: list[dict] = field(default_factory=list)
    expansions: int = 0
    memo_entries: int = 0

    @property
    def histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.records:
            out[r["no"]] = out.get(r["no"], 0) + 1
        return dict(sorted(out.items()))

    def aggregates(self) -> dict:
        agg: dict = {"records": len(self.records),
                     "no_histogram": {str(k): v for k, v in self.histogram.items()}}
        status: dict[str, int] = {}
        for r in self.records:
            if "status" in r:
                status[r["status"]] = status.get(r["status"], 0) + 1
        if status:
            agg["bracket_status"] = dict(sorted(status.items()))
        labelled = [r for r in self.records if r.get("class4") is not None]
        if labelled:
            agg["class4_agreement"] = sum(r["class4"] == max(0, r["no"]) for r in labelled)
            agg["class4_checked"] = len(labelled)
        checked = [r for r in self.records if "direct" in r]
        if checked:
            agg["oracle_checked"] = len(checked)
            agg["oracle_disagreements"] = sum(r["direct"] != r["no"] for r in checked)
        return agg

    def to_json(self) -> dict:
        return {
            "parameters": self.parameters,
            "aggregates": self.aggregates(),
            "findings": self.findings,
            "cache": {"expansions": self.expansions, "memo_entries": self.memo_entries},
            "records": self.records,
        }


def _families(m: int, sample: int | None, seed: int) -> list[int]:
    if sample is None:
        if m > EXHAUSTIVE_MAX_M:
            raise ResourceGuardError(f"exhaustive sweeps stop at m = {EXHAUSTIVE_MAX_M}; pass a sample budget")
        return list(range(1 << (1 << m)))
    if m > SAMPLED_MAX_M:
        raise ResourceGuardError(f"sampled sweeps stop at m = {SAMPLED_MAX_M}")
    rng = random.Random(seed)
    return sorted({rng.getrandbits(1 << m) for _ in range(sample)})


def _work(m: int, items: list[tuple[int, int]], snapshot: dict[int, int], brackets: bool, oracle: bool,
          closed: bool):
    memo = Memo()
    memo.table.update(snapshot)
    out = []
    bracket_cache: dict[int, dict] = {}
    for fm, cfm in items:
        rec: dict = {"family": serialize(Family.from_bits(m, fm)),
                     "canonical": serialize(Family.from_bits(m, cfm)),
                     "no": kernels.no_value(fm, m, memo.table, memo.stats)}
        if closed and m == 4:
            rec["class4"] = classify4(Family.from_bits(m, fm))
        if oracle:
            rec["direct"] = no_direct(Family.from_bits(m, fm)).value
        if brackets:
            b = bracket_cache.get(cfm)
            if b is None:
                c = fr_bracket(Family.from_bits(m, cfm), memo=memo)
                b = {"bracket": [c.fr_lower, c.fr_upper], "status": c.status,
                     "certificates": [f"{u.kind}:{u.bound}" for u in c.fr_upper_certificates]}
                bracket_cache[cfm] = b
            rec.update(b)
        out.append((fm, rec))
    return out, memo.table, memo.expansions


def _findings(rec: dict) -> list[dict]:
    found = []
    if "direct" in rec and rec["direct"] != rec["no"]:
        found.append({"kind": "oracle-disagreement", "family": rec["family"],
                      "recursion": rec["no"], "direct": rec["direct"]})
    if rec.get("status") == "contradiction":
        found.append({"kind": "bracket-contradiction", "family": rec["family"], "bracket": rec["bracket"]})
    if rec.get("class4") is not None and rec["class4"] != max(0, rec["no"]):
        found.append({"kind": "classification-mismatch", "family": rec["family"],
                      "class4": rec["class4"], "no": rec["no"]})
    return found


def sweep(m: int, filt: str = "all", jobs: int = 1, seed: int = 0, sample: int | None = None,
          memo: Memo | None = None, brackets: bool = True, oracle: bool = False) -> SweepReport:
    if filt not in ("all", "closed"):
        raise ValueError(f"unknown filter {filt!r}")
    if oracle and m > 6:
        raise ResourceGuardError("direct oracle limited to m <= 6")
    memo = DEFAULT_MEMO if memo is None else memo
    fams = _families(m, sample, seed)
    if filt == "closed":
        fams = sorted({kernels.closure_fm(fm, m) for fm in fams})
    items = sorted(((kernels.canon_fm(fm, m)[0], fm) for fm in fams))
    jobs = max(1, min(jobs, len(items) or 1))

    # contiguous canonical ranges, never splitting one class across workers
    chunks: list[list[tuple[int, int]]] = [[] for _ in range(jobs)]
    target = -(-len(items) // jobs) if items else 0
    w = 0
    for i, (cfm, fm) in enumerate(items):
        if w < jobs - 1 and len(chunks[w]) >= target and cfm != items[i - 1][0]:
            w += 1
        chunks[w].append((fm, cfm))

    snapshot = dict(memo.table)
    closed = filt == "closed"
    if jobs == 1:
        results = [_work(m, chunks[0], snapshot, brackets, oracle, closed)]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(_work, m, c, snapshot, brackets, oracle, closed) for c in chunks if c]
            results = [f.result() for f in futs]

    report = SweepReport({"m": m, "filter": filt, "seed": seed, "sample": sample,
                          "brackets": brackets, "oracle": oracle})
    rows = []
    for out, table, exp in results:
        rows.extend(out)
        memo.merge(table)
        memo.stats[0] += exp
        report.expansions += exp
    rows.sort(key=lambda t: t[0])
    report.records = [r for _, r in rows]
    for r in report.records:
        report.findings.extend(_findings(r))
    report.memo_entries = len(memo)
    return report
