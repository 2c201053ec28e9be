"""Throughput comparison of the compiled and numpy tree kernels.

Both kernels consume the same canonical uniform stream, so before timing
anything the script checks that their outputs are bit-identical; the
backends may only ever differ in speed.  Timings exclude uniform
generation (batches are pre-drawn and replayed), which makes the kernel
cost itself visible.

Run from the repository root:

    python3 benchmarks/kernel_bench.py --r 1 2 4 6 --samples 200000
"""

import argparse
import time

import numpy as np

from votepower import _treedriver
from votepower import _treekernel_py

try:
    from votepower import _treekernel
except ImportError:
    _treekernel = None


def run(kernel, r, eps, delta, batches, leaf=0):
    outs = []
    t0 = time.perf_counter()
    for root_u, flip_u, res_u in batches:
        outs.append(kernel.tree_mc(r, eps, delta, root_u, flip_u, res_u, leaf))
    elapsed = time.perf_counter() - t0
    m = np.concatenate([o[0] for o in outs])
    y = np.concatenate([o[1] for o in outs])
    x = np.concatenate([o[2] for o in outs])
    return (m, y, x), elapsed


def bench_one(r, samples, eps, delta, seed, repeats):
    batches = list(_treedriver._batches(r, samples, seed))
    py_out, _ = run(_treekernel_py, r, eps, delta, batches)  # warmup + reference
    py_time = min(run(_treekernel_py, r, eps, delta, batches)[1] for _ in range(repeats))
    row = {"r": r, "samples": samples, "python": samples / py_time}
    if _treekernel is not None:
        c_out, _ = run(_treekernel, r, eps, delta, batches)
        for a, b in zip(py_out, c_out):
            if not np.array_equal(a, b):
                raise SystemExit(f"backend outputs differ at r={r}")
        c_time = min(run(_treekernel, r, eps, delta, batches)[1] for _ in range(repeats))
        row["compiled"] = samples / c_time
        row["speedup"] = py_time / c_time
    return row


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, nargs="+", default=[1, 2, 4, 6],
                    help="tree depths to benchmark")
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--eps", type=float, default=0.01)
    ap.add_argument("--delta", type=float, default=0.01)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=3,
                    help="timing repeats; the fastest run is reported")
    args = ap.parse_args()

    if _treekernel is None:
        print("compiled kernel unavailable; timing the numpy fallback only")
    header = f"{'r':>3} {'samples':>9} {'python/s':>12} {'compiled/s':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for r in args.r:
        row = bench_one(r, args.samples, args.eps, args.delta, args.seed, args.repeats)
        compiled = f"{row['compiled']:12.0f}" if "compiled" in row else f"{'-':>12}"
        speedup = f"{row['speedup']:7.1f}x" if "speedup" in row else f"{'-':>8}"
        print(f"{row['r']:>3} {row['samples']:>9} {row['python']:12.0f} {compiled} {speedup}")


if __name__ == "__main__":
    main()
