"""Matrix kernels: leading singular triple, symmetric eigendecomposition,
and inertia counts.

The leading singular triple is computed through the Gram matrix of the
smaller side (symmetric eigendecomposition of A A^T or A^T A), either densely
or by power iteration on the Gram operator without forming it. The squared
conditioning of the Gram route is acceptable at the tolerances the solvers
run at.
"""

from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidInputError

#: dense eigendecomposition is used when the smaller side is at most this
DENSE_SIDE_LIMIT = 64

SIGN_PIVOT_TOL = 1e-12

Inertia = namedtuple("Inertia", ["positive", "negative", "zero"])


@dataclass(frozen=True)
class SingularTriple:
    """Largest singular value with unit left/right vectors: A v = sigma u."""

    sigma: float
    u: np.ndarray
    v: np.ndarray
    converged: bool = True
    iterations: int = 0


def symmetric_eig(s):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric
    matrix; raises if the input is not symmetric to 1e-10 relative."""
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {s.shape}")
    scale = np.max(np.abs(s)) if s.size else 0.0
    asym = np.max(np.abs(s - s.T)) if s.size else 0.0
    if asym > 1e-10 * max(scale, 1e-300):
        raise InvalidInputError(
            f"matrix is not symmetric: max |S - S^T| = {asym!r} vs scale {scale!r}"
        )
    return np.linalg.eigh(s)


def inertia(s, zero_tol=1e-8):
    """Counts (positive, negative, zero) of eigenvalues of a symmetric
    matrix, with |eigenvalue| <= zero_tol * max(1, max|S|) counted as zero."""
    s = np.asarray(s, dtype=np.float64)
    eigenvalues, _ = symmetric_eig(s)
    threshold = zero_tol * max(1.0, float(np.max(np.abs(s))))
    zero = int(np.count_nonzero(np.abs(eigenvalues) <= threshold))
    positive = int(np.count_nonzero(eigenvalues > threshold))
    negative = len(eigenvalues) - positive - zero
    return Inertia(positive, negative, zero)


def _sign_fix(u, v):
    # Deterministic orientation: first non-negligible entry of u positive,
    # sign propagated to v so that A v = sigma u is preserved.
    for entry in u:
        if abs(entry) > SIGN_PIVOT_TOL:
            if entry < 0.0:
                return -u, -v
            break
    return u, v


def _extract_from_v(a, v):
    av = a @ v
    sigma = float(np.linalg.norm(av))
    if sigma == 0.0:
        raise DegenerateInputError("right vector lies in the null space")
    return sigma, av / sigma, v


def top_singular_triple(a, mode="auto", max_iters=100, tol=1e-9, start=None):
    """Largest singular value and vectors of a nonzero real matrix.

    mode 'dense' forms the Gram matrix of the smaller side and takes its top
    eigenpair; 'iterative' runs power iteration on the same operator without
    forming it, stopping when the relative Rayleigh-quotient change drops
    below ``tol`` or after ``max_iters`` steps (the result is then flagged
    unconverged rather than failing). 'auto' picks dense when the smaller
    side is at most DENSE_SIDE_LIMIT.

    ``start`` optionally seeds the iteration with a right-side vector; power
    iteration from a current iterate never decreases the Rayleigh quotient,
    which the pair-update solvers rely on.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise InvalidInputError(f"expected a matrix, got shape {a.shape}")
    if not np.any(a):
        raise DegenerateInputError("matrix is identically zero")
    m, l = a.shape
    if mode == "auto":
        mode = "dense" if min(m, l) <= DENSE_SIDE_LIMIT else "iterative"

    if mode == "dense":
        if m <= l:
            _, vecs = np.linalg.eigh(a @ a.T)
            u = np.ascontiguousarray(vecs[:, -1])
            av = a.T @ u
            sigma = float(np.linalg.norm(av))
            if sigma == 0.0:
                raise DegenerateInputError("top left vector annihilates A")
            v = av / sigma
        else:
            _, vecs = np.linalg.eigh(a.T @ a)
            sigma, u, v = _extract_from_v(a, np.ascontiguousarray(vecs[:, -1]))
        u, v = _sign_fix(u, v)
        return SingularTriple(sigma, u, v)

    if mode != "iterative":
        raise InvalidInputError(f"unknown mode {mode!r}")

    uniform = np.full(l, 1.0 / np.sqrt(l))
    w = uniform
    restarted = start is None
    if start is not None:
        w = np.asarray(start, dtype=np.float64)
        if w.shape != (l,):
            raise InvalidInputError(f"start vector has shape {w.shape}, expected ({l},)")
        n = np.linalg.norm(w)
        if n == 0.0:
            w, restarted = uniform, True
        else:
            w = w / n

    converged = False
    rayleigh_prev = None
    iterations = 0
    for iterations in range(1, max_iters + 1):
        z = a @ w
        rayleigh = float(np.dot(z, z))  # w^T A^T A w
        g = a.T @ z
        gn = np.linalg.norm(g)
        if gn == 0.0:
            # the start vector hit the null space; restart once
            if restarted:
                raise DegenerateInputError("power iteration collapsed to zero")
            w, restarted, rayleigh_prev = uniform, True, None
            continue
        w = g / gn
        if rayleigh_prev is not None and abs(rayleigh - rayleigh_prev) <= tol * max(
            rayleigh, 1e-300
        ):
            converged = True
            break
        rayleigh_prev = rayleigh

    sigma, u, v = _extract_from_v(a, w)
    u, v = _sign_fix(u, v)
    return SingularTriple(sigma, u, v, converged=converged, iterations=iterations)
