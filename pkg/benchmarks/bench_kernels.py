"""Time the compiled kernels against the numpy fallback.

Usage::

    python3 benchmarks/bench_kernels.py --N 100,200,400,800 --repeat 5

For each N the clasp table of ``M = N``, one chain sum at ``M1 = N`` and the
sweep over all belt colors are timed with both backends; the table also
reports the largest relative disagreement of the single sums.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from whitehead_vc import _pykernels
from whitehead_vc._backend import get_kernels


def best_of(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(kern, r, M, spec, repeat):
    a, c, d = spec
    t_tab, (m, e) = best_of(lambda: kern.clasp_table(r, M), repeat)
    t_sum, val = best_of(lambda: kern.chain_sum(r, M, a, c, d, m, e), repeat)
    t_all, _ = best_of(lambda: kern.chain_sums_all(r, a, c, d, m, e), repeat)
    return t_tab, t_sum, t_all, val


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--N", default="100,200,400,800")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--spec", default="0,1,1", help="a,c,d of the chain")
    args = ap.parse_args(argv)
    try:
        ck = get_kernels("cython")
    except ImportError:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    spec = tuple(int(v) for v in args.spec.split(","))
    print(f"{'N':>6} {'kernel':>10} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8}")
    for N in (int(v) for v in args.N.split(",")):
        r = 2 * N + 1
        py = bench(_pykernels, r, N, spec, args.repeat)
        cy = bench(ck, r, N, spec, args.repeat)
        for name, tp, tc in zip(("table", "sum", "all M1"), py[:3], cy[:3]):
            print(f"{N:>6} {name:>10} {1e3 * tp:12.3f} {1e3 * tc:12.3f} {tp / tc:8.1f}")
        (vp, xp), (vc, xc) = py[3], cy[3]
        diff = abs(vp * 2.0 ** (xp - xc) - vc) / abs(vc)
        print(f"{N:>6} {'rel diff':>10} {diff:12.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
