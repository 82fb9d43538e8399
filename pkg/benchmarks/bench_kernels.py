#!/usr/bin/env python3
"""Compiled kernel vs pure-Python fallback on the hot workloads.

  python3 benchmarks/bench_kernels.py
  python3 benchmarks/bench_kernels.py --samples 5000 --seed 7
"""

import argparse
import random
import time

from nestorders import _kernels_py as py

try:
    from nestorders import _kernels as ext
except ImportError:
    ext = None


def _index_all_m4(k):
    memo, stats = {}, [0]
    for fm in range(1 << 16):
        k.no_value(fm, 4, memo, stats)
    return stats[0]


def _index_sample(k, m, fams):
    memo, stats = {}, [0]
    for fm in fams:
        k.no_value(fm, m, memo, stats)
    return stats[0]


def _canon(k, m, fams):
    return sum(k.canon_fm(fm, m)[0] & 1 for fm in fams)


def _closure_all_m4(k):
    return len({k.closure_fm(fm, 4) for fm in range(1 << 16)})


def timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return time.perf_counter() - t, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    m5 = [rng.getrandbits(32) for _ in range(args.samples)]
    m6 = [rng.getrandbits(64) for _ in range(max(1, args.samples // 20))]
    workloads = [
        ("index, all families m=4", _index_all_m4, ()),
        (f"index, {len(m5)} random m=5", _index_sample, (5, m5)),
        (f"index, {len(m6)} random m=6", _index_sample, (6, m6)),
        (f"canonical form, {len(m5)} random m=5", _canon, (5, m5)),
        ("closure, all families m=4", _closure_all_m4, ()),
    ]
    if ext is None:
        print("compiled kernel not built; only the fallback is timed")
    print(f"{'workload':<36} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, fn, extra in workloads:
        tp, outp = timed(fn, py, *extra)
        if ext is None:
            print(f"{name:<36} {tp:10.3f} {'-':>10} {'-':>8}")
            continue
        tc, outc = timed(fn, ext, *extra)
        if outp != outc:
            raise SystemExit(f"backends disagree on {name}: {outp} vs {outc}")
        print(f"{name:<36} {tp:10.3f} {tc:10.3f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
