"""Pure-Python (numpy) kernel for broadcast-tree sampling.

Functionally identical twin of the compiled kernel ``_treekernel``:
both consume the same pre-generated float32 uniforms in the same
canonical order and therefore produce bit-identical outputs.

Layout of the uniforms for one batch of B samples on a depth-r tree
(n = 3^r leaves):

* ``root_u``  (B,)            root spin: 1 where u < 0.5
* ``flip_u``  (B, T)          edge flips, levels 1..r concatenated,
                              T = 3 + 9 + ... + 3^r; child i at level k
                              flips its parent's value where u < eps
* ``res_u``   (B, n)          leaf resampling: x_i = y_i or (u < delta)

The tree value m is the recursive 3-ary majority of the leaf values x.
Comparisons are done in float64 (float32 inputs upcast exactly), which
is also what the compiled kernel does.
"""

from __future__ import annotations

import numpy as np


def tree_mc(r, eps, delta, root_u, flip_u, res_u, leaf):
    """Return (m, y_leaf, x_leaf) uint8 arrays for one batch.

    ``leaf`` is a 0-based leaf position; y_leaf is the leaf's value
    before resampling, x_leaf after.
    """
    y = _leaf_y(r, eps, root_u, flip_u)
    y_leaf = y[:, leaf].copy()
    x = y | (res_u < float(delta))
    x_leaf = x[:, leaf].astype(np.uint8)
    return _majority_reduce(x), y_leaf.astype(np.uint8), x_leaf


def tree_leaves(r, eps, delta, root_u, flip_u, res_u):
    """Return the full leaf matrix x as (B, 3^r) uint8."""
    y = _leaf_y(r, eps, root_u, flip_u)
    return (y | (res_u < float(delta))).astype(np.uint8)


def _leaf_y(r, eps, root_u, flip_u):
    eps = float(eps)
    y = (root_u < 0.5).astype(bool)[:, None]
    offset = 0
    width = 1
    for _ in range(r):
        width *= 3
        flips = flip_u[:, offset : offset + width] < eps
        y = np.repeat(y, 3, axis=1) ^ flips
        offset += width
    return y


def _majority_reduce(x):
    v = x.astype(np.uint8)
    while v.shape[1] > 1:
        v = (v.reshape(v.shape[0], -1, 3).sum(axis=2) >= 2).astype(np.uint8)
    return v[:, 0]
