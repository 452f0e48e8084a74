# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled contraction kernels.

Contracts a dense C-contiguous float64 tensor against one vector per mode,
reducing one mode at a time from the highest index down. Each reduction is a
single pass with unit-stride inner loops; after the first reduction the
scratch buffer is reused in place (writes never overtake reads because the
output index of block ``a`` is strictly below every later read index).
"""

import numpy as np

BACKEND_NAME = "cython"


cdef void _reduce_mode(const double* src, double* dst,
                       Py_ssize_t pre, Py_ssize_t m, Py_ssize_t post,
                       const double* v) noexcept nogil:
    # dst[a, b] = sum_c v[c] * src[a, c, b]; dst may alias src.
    cdef Py_ssize_t a, b, c
    cdef double acc, vc
    cdef const double* row
    cdef double* out_row
    if post == 1:
        for a in range(pre):
            row = src + a * m
            acc = 0.0
            for c in range(m):
                acc += row[c] * v[c]
            dst[a] = acc
    else:
        for a in range(pre):
            out_row = dst + a * post
            row = src + a * m * post
            vc = v[0]
            for b in range(post):
                out_row[b] = vc * row[b]
            for c in range(1, m):
                row = src + (a * m + c) * post
                vc = v[c]
                for b in range(post):
                    out_row[b] += vc * row[b]


cdef object _contract_keep(object arr, object vectors, tuple keep):
    cdef Py_ssize_t d = arr.ndim
    cdef tuple dims = arr.shape
    cdef list order = [m for m in range(d - 1, -1, -1) if m not in keep]
    if not order:
        return np.array(arr)

    cdef double[::1] flat = arr.reshape(-1)
    cdef object scratch_obj = np.empty(arr.size // dims[order[0]], dtype=np.float64)
    cdef double[::1] scratch = scratch_obj
    cdef double[::1] vec

    cdef list cur = list(dims)
    cdef const double* src = &flat[0]
    cdef double* dst = &scratch[0]
    cdef Py_ssize_t mode, k, pre, m, post

    for mode in order:
        # no mode below ``mode`` has been removed yet, so its axis is ``mode``
        pre = 1
        for k in range(mode):
            pre *= cur[k]
        m = cur[mode]
        post = 1
        for k in range(mode + 1, len(cur)):
            post *= cur[k]
        vec = vectors[mode]
        with nogil:
            _reduce_mode(src, dst, pre, m, post, &vec[0])
        src = dst
        del cur[mode]

    cdef Py_ssize_t out_size = 1
    for k in range(len(cur)):
        out_size *= cur[k]
    out = np.array(scratch_obj[:out_size])
    return out.reshape(tuple(cur)) if len(cur) > 1 else out


def contract_all_but_one(arr, vectors, keep):
    """Contract every mode of ``arr`` except ``keep``; returns a 1-D array."""
    return _contract_keep(arr, vectors, (keep,))


def contract_all_but_two(arr, vectors, keep_i, keep_j):
    """Contract every mode except ``keep_i < keep_j``; returns a matrix."""
    return _contract_keep(arr, vectors, (keep_i, keep_j))
