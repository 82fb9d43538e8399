"""Command-line front end.

Subcommands
-----------
no FAMILY             index by the recursion (``--oracle`` adds the direct search)
bracket FAMILY        lower bound and every applicable upper certificate
classify4 FAMILY      case label for families on {1,2,3,4}
fprec ORDER           the two-order family for an order on {1..m-1}
orders-search FAMILY  k linear orders representing a family, if any
sweep M               all (or sampled) families on {1..M}
verify [CASE]         named verification suites, ``all`` by default
explore {1,2,3}       open-question exploration runs
cache {stats,clear}   inspect or drop the memo file

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 resource guard.

Examples
--------
  python3 -m nestorders no "6: 12,23,34,35,56,123,235,356,2356" --oracle
  python3 -m nestorders --format json verify all
  python3 -m nestorders sweep 4 --filter closed --jobs 4
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import kernels
from .family import ParseError, format_family, format_set, intersection_closure, is_intersection_closed, parse_family
from .fprec import PrecOrder, fprec, onemin_holds, sprec
from .index import Memo, fr_bracket, no_direct, no_rec, witness_holds
from .orders import LinearOrder, ResourceGuardError, is_representable, search_orders
from .structure import classify4, contains_cycle

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

log = logging.getLogger("nestorders")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- output -----------------------------------------------------------------

class Output:
    """A payload plus its Markdown and CSV renderings."""

    def __init__(self, payload: dict, md: list[str] | None = None,
                 table: tuple[list[str], list[list]] | None = None, code: int = EXIT_OK):
        self.payload = payload
        self.md = md
        self.table = table
        self.code = code

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        if fmt == "csv":
            header, rows = self.table or (["key", "value"], [[k, json.dumps(v, sort_keys=True)]
                                                              for k, v in sorted(self.payload.items())])
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
            return buf.getvalue()
        lines = self.md if self.md is not None else [f"- **{k}**: {v}" for k, v in self.payload.items()]
        return "\n".join(lines) + "\n"


def _md_table(header: list[str], rows: list[list]) -> list[str]:
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    out += ["| " + " | ".join(str(c).replace("|", "\\|") for c in r) + " |" for r in rows]
    return out


# -- argument helpers -------------------------------------------------------

def _family(text: str):
    try:
        return parse_family(text)
    except ParseError as exc:
        raise UsageError(f"cannot parse family {text!r}: {exc}") from None


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


# -- commands ---------------------------------------------------------------

def cmd_no(args, memo: Memo) -> Output:
    f = _family(args.family)
    cert = no_rec(f, memo)
    payload: dict = {"family": format_family(f), "no": cert.value}
    md = [f"no({format_family(f)}) = {cert.value}"]
    code = EXIT_OK
    if args.witness:
        payload["trace"] = [s.to_json() for s in cert.trace]
        md += ["", "optimal choices (A, a, index of link):"]
        md += [f"- A={{{','.join(map(str, s.a_set))}}} a={s.a} -> {s.value}" for s in cert.trace]
    if args.oracle:
        d = no_direct(f, 3)
        agree = d.value == cert.value if d.value is not None else cert.value > 3
        held = witness_holds(f, d) if d.value is not None else None
        payload["direct"] = d.value
        payload["agree"] = agree
        payload["witness_revalidated"] = held
        md.append(f"direct search: {'> 3' if d.value is None else d.value} "
                  f"({'agrees' if agree else 'DISAGREES'})")
        if args.witness and d.witness is not None:
            payload["nested_orders"] = d.witness.to_json()
            md += ["", "nested orders:"] + ["- " + "".join(map(str, u)) for u in sorted(d.witness.seqs)]
        if not agree or held is False:
            code = EXIT_FAIL
    return Output(payload, md, (["family", "no"], [[format_family(f), cert.value]]), code)


def cmd_bracket(args, memo: Memo) -> Output:
    f = _family(args.family)
    c = fr_bracket(f, args.max_orders, memo)
    payload = {"family": format_family(f), **c.to_json()}
    if not args.witness:
        payload["certificates"] = [{"kind": u.kind, "bound": u.bound} for u in c.fr_upper_certificates]
    md = [f"family: {format_family(f)}", f"bracket: [{c.fr_lower}, {c.fr_upper}] {c.status}", ""]
    md += _md_table(["certificate", "bound"], [[u.kind, u.bound] for u in c.fr_upper_certificates])
    if args.witness:
        for u in c.fr_upper_certificates:
            if u.witness:
                md.append(f"- {u.kind}: {json.dumps(u.witness, sort_keys=True)}")
    md += [f"finding: {x}" for x in c.findings]
    rows = [[u.kind, u.bound] for u in c.fr_upper_certificates]
    return Output(payload, md, (["kind", "bound"], rows), EXIT_FAIL if c.status == "contradiction" else EXIT_OK)


def cmd_classify4(args, memo: Memo) -> Output:
    f = _family(args.family)
    if f.m != 4:
        raise UsageError("classify4 needs a family on {1,2,3,4}")
    closed = is_intersection_closed(f)
    g = f if closed else intersection_closure(f)
    label = classify4(g)
    value = no_rec(g, memo).value
    cyc = contains_cycle(g)
    payload = {"family": format_family(f), "closed": closed, "classified": format_family(g), "label": label,
               "no": value, "agree": label == max(0, value),
               "cycle": None if cyc is None else cyc.to_json()}
    md = [f"family: {format_family(f)}" + ("" if closed else f" (closure {format_family(g)})"),
          f"label: {label}", f"no: {value}"]
    if cyc is not None:
        md.append(f"cycle: {'-'.join(map(str, cyc.cycle))}")
    return Output(payload, md, (["family", "label", "no"], [[format_family(g), label, value]]),
                  EXIT_OK if payload["agree"] else EXIT_FAIL)


def cmd_fprec(args, memo: Memo) -> Output:
    try:
        p = PrecOrder.parse(args.order, args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    f = fprec(p)
    t = onemin_holds(p)
    payload = {"prec": p.to_json(), "m": p.m, "family": format_family(f), "size": len(f), "onemin_pivot": t}
    md = [f"order: {p}", f"family ({len(f)} sets): {format_family(f)}",
          f"one-minimum pivot: {'none' if t is None else t}"]
    if args.witness:
        s = sprec(p)
        payload["nested_orders"] = s.to_json()
        md += ["", "sequences:"] + ["- " + "".join(map(str, u)) for u in sorted(s.seqs)]
    return Output(payload, md, (["set"], [[format_set(a, f.m)] for a in f.sets]))


def cmd_orders_search(args, memo: Memo) -> Output:
    f = _family(args.family)
    if args.orders:
        orders = [LinearOrder.parse(o) for o in args.orders]
        rep = is_representable(f, orders)
        found = orders if rep.ok else None
    else:
        res = search_orders(f, args.k)
        found = res.witness
    payload: dict = {"family": format_family(f), "k": len(args.orders) if args.orders else args.k,
                     "orders": None if found is None else [o.to_json() for o in found]}
    md = [f"family: {format_family(f)}"]
    if found is None:
        md.append("no representing orders")
        if args.orders:
            payload["failing"] = [format(a, "x") for a in rep.failing]
            md.append("unrepresented sets: " + ", ".join(format_set(a, f.m) for a in rep.failing))
    else:
        md.append("orders: " + ", ".join(map(str, found)))
        if args.witness:
            sel = is_representable(f, found).selectors
            payload["selectors"] = {format(a, "x"): list(s) for a, s in sorted(sel.items())}
            md += [f"- {format_set(a, f.m)}: {list(s)}" for a, s in sorted(sel.items())]
    rows = [[str(o)] for o in found or []]
    return Output(payload, md, (["order"], rows))


def cmd_sweep(args, memo: Memo) -> Output:
    from .sweep import sweep

    rep = sweep(args.m, args.filter, args.jobs, args.seed, args.sample, memo,
                brackets=not args.no_brackets, oracle=args.oracle)
    payload = rep.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True, ensure_ascii=False)
            fh.write("\n")
    agg = payload["aggregates"]
    md = [f"sweep m={args.m} filter={args.filter} records={agg['records']}", ""]
    md += _md_table(["no", "families"], [[k, v] for k, v in agg["no_histogram"].items()])
    for key in ("bracket_status", "class4_agreement", "class4_checked", "oracle_checked", "oracle_disagreements"):
        if key in agg:
            md.append(f"- {key}: {agg[key]}")
    md.append(f"- recursion expansions: {rep.expansions}")
    md += [f"finding: {json.dumps(x, sort_keys=True)}" for x in rep.findings]
    header = ["family", "canonical", "no", "class4", "direct", "lower", "upper", "status"]
    rows = [[r["family"], r["canonical"], r["no"], r.get("class4", ""), r.get("direct", ""),
             *(r.get("bracket") or ["", ""]), r.get("status", "")] for r in rep.records]
    return Output(payload, md, (header, rows), EXIT_FAIL if rep.findings else EXIT_OK)


def cmd_verify(args, memo: Memo) -> Output:
    from . import verify

    try:
        cases = verify.run(args.case, args.seed, memo)
    except KeyError:
        raise UsageError(f"unknown case {args.case!r}; choose from all, {', '.join(verify.SUITES)}") from None
    payload = {"seed": args.seed, "cases": [c.to_json() for c in cases],
               "summary": {s: sum(c.status == s for c in cases) for s in ("pass", "fail", "skipped-resource")}}
    md = _md_table(["case", "status", "claim"], [[c.id, c.status, c.claim] for c in cases])
    for c in cases:
        if c.witness is not None:
            md.append(f"- {c.id} witness: {json.dumps(c.witness, sort_keys=True, ensure_ascii=False)}")
    rows = [[c.id, c.status, json.dumps(c.details, sort_keys=True, ensure_ascii=False)] for c in cases]
    code = EXIT_FAIL if any(c.status == "fail" for c in cases) else EXIT_OK
    return Output(payload, md, (["case", "status", "details"], rows), code)


def cmd_explore(args, memo: Memo) -> Output:
    from .explore import explore

    rep = explore(args.problem, memo, args.budget, args.seed)
    md = [f"problem {args.problem}"]
    table = None
    if args.problem == 1:
        header = ["j", "i", "no (recursion)", "no (direct)", "witness ok", "bracket", "status"]
        rows = [[r["j"], r["i"], r["recursion"], "> 3" if r["direct"] is None else r["direct"],
                 r["witness_revalidated"], f"[{r['bracket']['lower']}, {r['bracket']['upper']}]",
                 r["bracket"]["status"]] for r in rep["rows"]]
        md += _md_table(header, rows)
        table = (header, rows)
    elif args.problem == 2:
        b = rep["bracket"]
        md += [f"family: {rep['family']}", f"no: {rep['recursion']} (direct {rep['direct']})",
               f"two orders: {rep['two_orders'] or 'none'}", f"one-minimum certificate: {rep['onemin'] or 'none'}",
               f"bracket: [{b['lower']}, {b['upper']}] {b['status']}"]
        md += [f"- {c['kind']}: {c['bound']}" for c in b["certificates"]]
    else:
        md += [f"checked {rep['checked']} families, {len(rep['disagreements'])} disagreements",
               f"beyond search depth: {rep['beyond_search_depth']}"]
    md += [f"finding: {x}" for x in rep["findings"]]
    return Output(rep, md, table, EXIT_FAIL if rep["findings"] else EXIT_OK)


def cmd_cache(args, memo: Memo) -> Output:
    path = args.cache
    if not path:
        raise UsageError("cache commands need --cache PATH (or NESTORDERS_CACHE)")
    if args.action == "clear":
        existed = os.path.exists(path)
        if existed:
            os.remove(path)
        return Output({"path": path, "removed": existed}, [f"{'removed' if existed else 'no file at'} {path}"])
    by_m: dict[int, int] = {}
    for key in memo.table:
        by_m[key & 31] = by_m.get(key & 31, 0) + 1
    payload = {"path": path, "exists": os.path.exists(path), "entries": len(memo),
               "skipped_lines": memo.skipped, "bytes": os.path.getsize(path) if os.path.exists(path) else 0,
               "entries_by_m": {str(k): v for k, v in sorted(by_m.items())}}
    md = [f"cache: {path}", f"entries: {len(memo)}", f"corrupt lines skipped: {memo.skipped}"]
    md += _md_table(["m", "entries"], [[k, v] for k, v in sorted(by_m.items())])
    return Output(payload, md, (["m", "entries"], [[k, v] for k, v in sorted(by_m.items())]))


# -- parser -----------------------------------------------------------------

def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("json", "md", "csv"), default=d("md"), help="output format")
    p.add_argument("--cache", metavar="PATH", default=d(os.environ.get("NESTORDERS_CACHE")),
                   help="memo file (JSON lines) loaded before and saved after the run")
    p.add_argument("--jobs", type=_positive, default=d(1), help="worker processes for sweeps")
    p.add_argument("--seed", type=_seed, default=d(0), help="64-bit seed for sampled runs")
    p.add_argument("--witness", action="store_true", default=d(False), help="emit witnesses")
    p.add_argument("--oracle", action="store_true", default=d(False), help="cross-check with the direct search")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nestorders", description="Nested-orders index and freedom brackets for finite set families.")
    _global_flags(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    _global_flags(common, suppress=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("no", cmd_no, "index of a family").add_argument("family")
    p = add("bracket", cmd_bracket, "freedom bracket with certificates")
    p.add_argument("family")
    p.add_argument("--max-orders", type=_positive, default=3)
    add("classify4", cmd_classify4, "case label on {1,2,3,4}").add_argument("family")
    p = add("fprec", cmd_fprec, "two-order family F[order]")
    p.add_argument("order", help="order on {1..m-1}, least first, e.g. 53241")
    p.add_argument("--m", type=int, default=None, help="ground size (default: order length + 1)")
    p = add("orders-search", cmd_orders_search, "find k representing linear orders")
    p.add_argument("family")
    p.add_argument("-k", type=_positive, default=2)
    p.add_argument("--orders", nargs="+", metavar="ORDER", help="check these orders instead of searching")
    p = add("sweep", cmd_sweep, "sweep all families on {1..m}")
    p.add_argument("m", type=int)
    p.add_argument("--filter", choices=("all", "closed"), default="all")
    p.add_argument("--sample", type=_positive, default=None, help="random families instead of all")
    p.add_argument("--no-brackets", action="store_true")
    p.add_argument("--out", metavar="PATH", help="also write the JSON report here")
    add("verify", cmd_verify, "run verification suites").add_argument("case", nargs="?", default="all")
    p = add("explore", cmd_explore, "open-question runs")
    p.add_argument("problem", type=int, choices=(1, 2, 3))
    p.add_argument("--budget", type=int, default=None)
    add("cache", cmd_cache, "memo file maintenance").add_argument("action", choices=("stats", "clear"))
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    log.info("kernel backend: %s", kernels.BACKEND)
    memo = Memo()
    try:
        if args.cache and os.path.exists(args.cache):
            memo.load(args.cache)
        out = args.func(args, memo)
        if args.cache and args.command != "cache":
            memo.save(args.cache)
    except UsageError as exc:
        print(f"nestorders: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceGuardError as exc:
        print(f"nestorders: resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"nestorders: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out.render(args.format))
    return out.code


if __name__ == "__main__":
    sys.exit(main())
