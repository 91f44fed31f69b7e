"""Time the cycle-index kernel (numba vs numpy) and the full coefficient table.

    python3 benchmarks/bench_kernels.py [--sizes 25 50 100 200 400] [--repeat 5] [--json out.json]

The numpy path can also be forced for the whole package with HFP_DISABLE_NUMBA=1.
"""

from __future__ import annotations

import argparse
import json
import platform
import time

import numpy as np

from hfpquad import _kernels
from hfpquad.interpolation import coefficient_table, cycle_arguments, layout_nodes


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[25, 50, 100, 200, 400])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json")
    args = ap.parse_args()

    if _kernels.HAVE_NUMBA:
        # compile outside the timed region
        _kernels.cycle_index_rows_jit(cycle_arguments(2, 4))

    rows = []
    print(f"package backend: {_kernels.backend()}   python {platform.python_version()}")
    print(f"{'n':>5} {'numpy [s]':>11} {'numba [s]':>11} {'speedup':>8} {'identical':>9} {'table [s]':>11}")
    for n in args.sizes:
        X = cycle_arguments(n // 2, n)
        t_np = best_of(lambda: _kernels.cycle_index_rows_numpy(X), args.repeat)
        t_jit = same = None
        if _kernels.HAVE_NUMBA:
            t_jit = best_of(lambda: _kernels.cycle_index_rows_jit(X), args.repeat)
            same = bool(np.array_equal(_kernels.cycle_index_rows_numpy(X), _kernels.cycle_index_rows_jit(X)))
        layout = layout_nodes(1e-5, (-1.0, 1.0), n)
        t_tab = best_of(lambda: coefficient_table(layout, 1), args.repeat)
        rows.append(dict(n=n, numpy=t_np, numba=t_jit, identical=same, table=t_tab))
        sp = f"{t_np / t_jit:8.1f}" if t_jit else f"{'-':>8}"
        jt = f"{t_jit:11.3e}" if t_jit else f"{'-':>11}"
        print(f"{n:5d} {t_np:11.3e} {jt} {sp} {str(same):>9} {t_tab:11.3e}")

    ns = np.array([r["n"] for r in rows], dtype=float)
    for key in ("numpy", "numba", "table"):
        ts = np.array([r[key] if r[key] else np.nan for r in rows])
        if np.all(np.isfinite(ts)) and len(ns) > 1:
            slope = np.polyfit(np.log(ns), np.log(ts), 1)[0]
            print(f"power-law exponent ({key}): {slope:.2f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"backend": _kernels.backend(), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
