"""NumPy fallback for the hot contraction kernels.

Same call contract as the compiled module ``_kernels``: ``arr`` is a
C-contiguous float64 ndarray, ``vectors`` a sequence of 1-D float64 arrays
(entries for kept modes are ignored). Modes are contracted from the highest
index down, so the axis of mode ``m`` is still ``m`` when its turn comes.
"""

import numpy as np

BACKEND_NAME = "numpy"


def contract_all_but_one(arr, vectors, keep):
    """Contract every mode of ``arr`` except ``keep``; returns a 1-D array."""
    out = arr
    for mode in range(arr.ndim - 1, -1, -1):
        if mode == keep:
            continue
        out = np.tensordot(out, vectors[mode], axes=(mode, 0))
    if out is arr:  # d == 1: nothing contracted
        out = arr.copy()
    return out


def contract_all_but_two(arr, vectors, keep_i, keep_j):
    """Contract every mode except ``keep_i < keep_j``; returns a matrix."""
    out = arr
    for mode in range(arr.ndim - 1, -1, -1):
        if mode == keep_i or mode == keep_j:
            continue
        out = np.tensordot(out, vectors[mode], axes=(mode, 0))
    if out is arr:  # d == 2: nothing contracted
        out = arr.copy()
    return out
