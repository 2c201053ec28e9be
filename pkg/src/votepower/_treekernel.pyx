# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel for broadcast-tree sampling.

Same contract as ``_treekernel_py`` (see its docstring for the uniform
layout); one tight C loop per sample instead of level-wise numpy ops.
Uniforms are float32, compared against eps/delta in double precision,
matching the numpy kernel bit for bit.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def tree_mc(int r, double eps, double delta,
            cnp.float32_t[::1] root_u,
            cnp.float32_t[:, ::1] flip_u,
            cnp.float32_t[:, ::1] res_u,
            Py_ssize_t leaf):
    cdef Py_ssize_t B = root_u.shape[0]
    cdef Py_ssize_t n = res_u.shape[1]
    m_arr = np.empty(B, dtype=np.uint8)
    yl_arr = np.empty(B, dtype=np.uint8)
    xl_arr = np.empty(B, dtype=np.uint8)
    cdef cnp.uint8_t[::1] m = m_arr
    cdef cnp.uint8_t[::1] yl = yl_arr
    cdef cnp.uint8_t[::1] xl = xl_arr
    buf_arr = np.empty(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] buf = buf_arr
    cdef Py_ssize_t s, k, i, width, off
    cdef int acc

    for s in range(B):
        buf[0] = 1 if root_u[s] < 0.5 else 0
        width = 1
        off = 0
        for k in range(r):
            width *= 3
            # expand in place from the high end; buf[i // 3] is still
            # the parent value because writes stay strictly above reads
            for i in range(width - 1, -1, -1):
                buf[i] = buf[i // 3] ^ (1 if flip_u[s, off + i] < eps else 0)
            off += width
        yl[s] = buf[leaf]
        for i in range(n):
            if res_u[s, i] < delta:
                buf[i] = 1
        xl[s] = buf[leaf]
        width = n
        while width > 1:
            width //= 3
            for i in range(width):
                acc = buf[3 * i] + buf[3 * i + 1] + buf[3 * i + 2]
                buf[i] = 1 if acc >= 2 else 0
        m[s] = buf[0]
    return m_arr, yl_arr, xl_arr


def tree_leaves(int r, double eps, double delta,
                cnp.float32_t[::1] root_u,
                cnp.float32_t[:, ::1] flip_u,
                cnp.float32_t[:, ::1] res_u):
    cdef Py_ssize_t B = root_u.shape[0]
    cdef Py_ssize_t n = res_u.shape[1]
    out_arr = np.empty((B, n), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef Py_ssize_t s, k, i, width, off

    for s in range(B):
        out[s, 0] = 1 if root_u[s] < 0.5 else 0
        width = 1
        off = 0
        for k in range(r):
            width *= 3
            for i in range(width - 1, -1, -1):
                out[s, i] = out[s, i // 3] ^ (1 if flip_u[s, off + i] < eps else 0)
            off += width
        for i in range(n):
            if res_u[s, i] < delta:
                out[s, i] = 1
    return out_arr
