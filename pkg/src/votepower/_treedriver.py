"""Kernel selection and deterministic uniform-stream batching.

At import time the compiled kernel is preferred; the numpy fallback is
used when the extension is missing or when ``VOTEPOWER_PURE_PYTHON=1``
is set.  Because both kernels consume identical pre-generated uniforms
in the same canonical order, the choice never changes any result, only
the speed.

Canonical stream: one PCG64 generator seeded with ``seed``; for each
batch of B samples it emits, in order, ``root_u`` (B,), ``flip_u``
(B, 3 + 9 + ... + 3^r) and ``res_u`` (B, 3^r), all float32.  The batch
size is a fixed function of r (memory cap), so results depend only on
(r, eps, delta, samples, seed).
"""

from __future__ import annotations

import os

import numpy as np

if os.environ.get("VOTEPOWER_PURE_PYTHON") == "1":
    from . import _treekernel_py as kernel

    BACKEND = "python"
else:
    try:
        from . import _treekernel as kernel

        BACKEND = "compiled"
    except ImportError:
        from . import _treekernel_py as kernel

        BACKEND = "python"

# ~12M float32 values (~48 MB) of uniforms per batch
_BATCH_VALUES = 12_000_000


def backend() -> str:
    """Name of the kernel actually in use: 'compiled' or 'python'."""
    return BACKEND


def flips_per_sample(r: int) -> int:
    return (3 ** (r + 1) - 3) // 2


def batch_size(r: int) -> int:
    per_sample = 1 + flips_per_sample(r) + 3 ** r
    return max(16, min(8192, _BATCH_VALUES // per_sample))


def _batches(r: int, samples: int, seed: int):
    rng = np.random.default_rng(seed)
    t = flips_per_sample(r)
    n = 3 ** r
    b = batch_size(r)
    left = samples
    while left > 0:
        cur = min(b, left)
        root_u = rng.random(cur, dtype=np.float32)
        flip_u = rng.random((cur, t), dtype=np.float32)
        res_u = rng.random((cur, n), dtype=np.float32)
        yield root_u, flip_u, res_u
        left -= cur


def run_tree_mc(r: int, eps: float, delta: float, samples: int, seed: int, leaf: int):
    """Per-sample (m, y_leaf, x_leaf) uint8 arrays of length ``samples``.

    ``leaf`` is 0-based here; the public API converts from 1-based.
    """
    ms, ys, xs = [], [], []
    for root_u, flip_u, res_u in _batches(r, samples, seed):
        m, yl, xl = kernel.tree_mc(r, eps, delta, root_u, flip_u, res_u, leaf)
        ms.append(m)
        ys.append(yl)
        xs.append(xl)
    if not ms:
        empty = np.empty(0, dtype=np.uint8)
        return empty, empty.copy(), empty.copy()
    return np.concatenate(ms), np.concatenate(ys), np.concatenate(xs)


def sample_leaves(r: int, eps: float, delta: float, count: int, seed: int):
    """(count, 3^r) uint8 matrix of leaf vectors."""
    outs = [
        kernel.tree_leaves(r, eps, delta, root_u, flip_u, res_u)
        for root_u, flip_u, res_u in _batches(r, count, seed)
    ]
    if not outs:
        return np.empty((0, 3 ** r), dtype=np.uint8)
    return np.vstack(outs)
