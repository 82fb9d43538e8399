"""Exploration runs for the three open questions the toolkit targets.

1. uniform families ``[{1..j}]^i``: index by both methods, brackets;
2. the built-in ``problem2`` family: the full certificate battery;
3. search for any family where the recursion and the direct search disagree.
"""

from __future__ import annotations

import random

from .family import Family, format_family, problem2, uniform
from .fprec import onemin_certificate
from .index import Memo, fr_bracket, no_direct, no_rec, witness_holds
from .orders import ResourceGuardError, search_orders

MAX_BUDGET_ORDERS = 4
MAX_BUDGET_SAMPLES = 200_000


def _bracket_json(c) -> dict:
    return {"lower": c.fr_lower, "upper": c.fr_upper, "status": c.status,
            "certificates": [u.to_json() for u in c.fr_upper_certificates]}


def explore_uniform(memo: Memo, max_orders: int = 3) -> dict:
    rows = []
    for j in range(1, 6):
        for i in range(1, j):
            f = uniform(j, i)
            rec = no_rec(f, memo).value
            direct = no_direct(f, 3)
            row = {"j": j, "i": i, "family": format_family(f), "recursion": rec, "direct": direct.value,
                   "witness_revalidated": witness_holds(f, direct) if direct.value is not None else None,
                   "bracket": _bracket_json(fr_bracket(f, max_orders, memo))}
            rows.append(row)
    findings = [f"j={r['j']} i={r['i']}: recursion {r['recursion']} vs direct {r['direct']}"
                for r in rows if r["direct"] is not None and r["direct"] != r["recursion"]]
    return {"problem": 1, "rows": rows, "findings": findings}


def explore_problem2(memo: Memo, max_orders: int = 3) -> dict:
    f = problem2()
    rec = no_rec(f, memo)
    direct = no_direct(f, 3)
    two = search_orders(f, 2)
    onemin = onemin_certificate(f)
    bracket = fr_bracket(f, max_orders, memo)
    return {
        "problem": 2,
        "family": format_family(f),
        "recursion": rec.value,
        "trace": [s.to_json() for s in rec.trace],
        "direct": direct.value,
        "witness_revalidated": witness_holds(f, direct),
        "two_orders": None if two.witness is None else [o.to_json() for o in two.witness],
        "two_orders_pairs_decided": two.tuples_covered,
        "onemin": None if onemin is None else {"relabeling": list(onemin[0]), "prec": onemin[1].to_json()},
        "bracket": _bracket_json(bracket),
        "findings": list(bracket.findings),
    }


def explore_oracle(memo: Memo, samples: int = 2000, seed: int = 0) -> dict:
    """Exhaustive for m <= 3, then ``samples`` seeded families on m = 4 and on m = 5."""
    rng = random.Random(seed)
    fams = [Family.from_bits(m, fm) for m in range(0, 4) for fm in range(1 << (1 << m))]
    fams += [Family.from_bits(4, rng.getrandbits(16)) for _ in range(samples)]
    fams += [Family.from_bits(5, rng.getrandbits(32)) for _ in range(samples)]
    hits = []
    beyond = 0
    for f in fams:
        d = no_direct(f, 3)
        r = no_rec(f, memo).value
        if d.value is None:
            beyond += 1
            if r <= 3:
                hits.append({"family": format_family(f), "recursion": r, "direct": "> 3"})
        elif d.value != r:
            hits.append({"family": format_family(f), "recursion": r, "direct": d.value})
    return {"problem": 3, "seed": seed, "exhaustive_max_m": 3, "sampled": {"4": samples, "5": samples},
            "checked": len(fams), "beyond_search_depth": beyond, "disagreements": hits,
            "findings": [f"recursion/direct disagreement on {h['family']}" for h in hits]}


def explore(problem: int, memo: Memo, budget: int | None = None, seed: int = 0) -> dict:
    """``budget``: orders searched for problems 1 and 2, random samples per ground size for problem 3."""
    if problem in (1, 2):
        k = 3 if budget is None else budget
        if not 1 <= k <= MAX_BUDGET_ORDERS:
            raise ResourceGuardError(f"order budget must lie in 1..{MAX_BUDGET_ORDERS}")
        return explore_uniform(memo, k) if problem == 1 else explore_problem2(memo, k)
    if problem == 3:
        n = 2000 if budget is None else budget
        if not 0 <= n <= MAX_BUDGET_SAMPLES:
            raise ResourceGuardError(f"sample budget must lie in 0..{MAX_BUDGET_SAMPLES}")
        return explore_oracle(memo, n, seed)
    raise ValueError(f"unknown problem {problem}")
