"""Compare the compiled and pure-Python kernels on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import sys
import time

import numpy as np

from skewhad import _pykernels
from skewhad.search import SearchConfig, classify_all, seed_quadruple

try:
    from skewhad import _ckernels
except ImportError:
    _ckernels = None


def workloads():
    h24 = classify_all(24, SearchConfig()).matrices()
    m = h24[0]
    rng = np.random.default_rng(1)
    k, n = 10, 24
    g1, g2 = [], []
    for _ in range(k):
        v = rng.integers(0, 3, n)
        g1.append(int(sum(1 << j for j in range(n) if v[j] == 1)))
        g2.append(int(sum(1 << j for j in range(n) if v[j] == 2)))
    form = seed_quadruple(24, 2, 1)
    seg = list(form.segments)
    return {
        "quad_profile n=24": lambda mod: mod.quad_profile(m.rows, 24),
        "canon_form n=24": lambda mod: mod.canon_form(m.rows, 24),
        "max_transitive_chain n=24": lambda mod: mod.max_transitive_chain(m.rows, 24),
        "gf3 weights k=10": lambda mod: mod.gf3_weight_distribution(g1, g2, n),
        "row search n=24 (2,1) to depth 10": lambda mod: mod.RowSearch(24, seg, form.forced, form.group, 2, 1)
        .run(form.rows, 10, 0, 0),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; only the Python timings are shown", file=sys.stderr)
    print(f"{'kernel':40s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in workloads().items():
        tp = best_of(lambda: fn(_pykernels), args.repeat)
        if _ckernels is None:
            print(f"{name:40s} {tp:10.4f} {'-':>10s} {'-':>8s}")
            continue
        tc = best_of(lambda: fn(_ckernels), args.repeat)
        print(f"{name:40s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
