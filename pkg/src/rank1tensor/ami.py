"""Spectral analysis of alternating maximization on block quadratic forms.

For f(xi) = -xi^T H xi with H symmetric and partitioned into d x d blocks,
maximizing block by block (each other block frozen) is the block
Gauss-Seidel iteration xi_k = K xi_{k-1} with K = -L_H^{-1} U_H, where L_H
is the block lower triangular part of H including the diagonal blocks and
U_H the strict block upper part.

When every diagonal block is positive definite (the origin is then maximal
in each block separately), the unit-disc eigenvalue counts of K match the
inertia of H exactly: #{|lambda|<1} = #positive, #{|lambda|>1} = #negative,
#{|lambda|=1} = #zero, the only unit-modulus eigenvalue is 1 (on the null
space of H), and the number of positive eigenvalues is at least the largest
block size. Ostrowski's theorem appears as the special case: the iteration
contracts from every start iff H is positive definite.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionError,
    InvalidInputError,
    NumericsError,
    SingularBlockError,
)

#: |modulus - 1| below this counts as "on the unit circle"
UNIT_CIRCLE_TOL = 1e-8
#: inertia zero threshold (relative, see linalg.inertia)
ZERO_EIG_TOL = 1e-8
#: every unit-circle eigenvalue must be this close to 1
NEAR_ONE_TOL = 1e-6

SYMMETRY_TOL = 1e-12
SINGULAR_BLOCK_TOL = 1e-12


class BlockQuadraticForm:
    """Symmetric matrix H with a block partition (m_1, ..., m_d)."""

    __slots__ = ("h", "block_sizes", "_offsets")

    def __init__(self, h, block_sizes):
        h = np.array(h, dtype=np.float64, copy=True)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise DimensionError(f"H must be square, got shape {h.shape}")
        sizes = tuple(int(m) for m in block_sizes)
        if not sizes or any(m < 1 for m in sizes):
            raise DimensionError(f"invalid block sizes {sizes}")
        if sum(sizes) != h.shape[0]:
            raise DimensionError(
                f"block sizes {sizes} sum to {sum(sizes)}, H has order {h.shape[0]}"
            )
        scale = float(np.max(np.abs(h))) if h.size else 0.0
        asym = float(np.max(np.abs(h - h.T)))
        if asym > SYMMETRY_TOL * max(scale, 1e-300):
            raise InvalidInputError(
                f"H is not symmetric: max |H - H^T| = {asym!r} vs scale {scale!r}"
            )
        self.h = h
        self.block_sizes = sizes
        offsets = [0]
        for m in sizes:
            offsets.append(offsets[-1] + m)
        self._offsets = tuple(offsets)

    @property
    def order(self):
        return self.h.shape[0]

    @property
    def nblocks(self):
        return len(self.block_sizes)

    def block_slice(self, j):
        return slice(self._offsets[j], self._offsets[j + 1])

    def block(self, p, q):
        return self.h[self.block_slice(p), self.block_slice(q)]

    def diagonal_blocks_positive_definite(self, zero_tol=ZERO_EIG_TOL):
        """True when every H_jj is positive definite, i.e. the origin is a
        semi-maximal point of -xi^T H xi."""
        for j in range(self.nblocks):
            counts = linalg.inertia(self.block(j, j), zero_tol=zero_tol)
            if counts.positive != self.block_sizes[j]:
                return False
        return True

    def f(self, xi):
        xi = np.asarray(xi, dtype=np.float64)
        return -float(xi @ self.h @ xi)

    def __repr__(self):
        return f"BlockQuadraticForm(order={self.order}, blocks={self.block_sizes})"


@dataclass
class AmiSpectrumReport:
    eigenvalues: np.ndarray  # complex spectrum of K
    alpha: int  # |lambda| < 1
    beta: int  # |lambda| > 1
    gamma: int  # |lambda| = 1 (within tolerance)
    inertia: linalg.Inertia  # of H
    spectral_radius: float
    diagonal_blocks_definite: bool
    theorem_holds: object  # True/False, or None when the hypothesis fails
    ostrowski: bool  # rho(K) < 1  <=>  H positive definite
    pi_lower_bound_ok: bool  # positives >= max block size
    unit_circle_near_one: bool  # every |lambda|~1 eigenvalue is ~1


@dataclass
class BasinTrajectory:
    norms: list
    f_values: list
    converged_to_zero: bool
    sweeps_run: int


def _check_diagonal_blocks(q):
    for j in range(q.nblocks):
        block = q.block(j, j)
        eigenvalues, _ = linalg.symmetric_eig(block)
        threshold = SINGULAR_BLOCK_TOL * max(1.0, float(np.max(np.abs(block))))
        if np.min(np.abs(eigenvalues)) <= threshold:
            raise SingularBlockError(j)


def gauss_seidel_matrix(q):
    """The iteration matrix K = -L_H^{-1} U_H; requires invertible diagonal
    blocks. One multiplication by K equals one :func:`ami_sweep`."""
    _check_diagonal_blocks(q)
    block_id = np.repeat(np.arange(q.nblocks), q.block_sizes)
    lower_mask = block_id[:, None] >= block_id[None, :]
    l_h = np.where(lower_mask, q.h, 0.0)
    u_h = q.h - l_h
    return np.linalg.solve(l_h, -u_h)


def ami_sweep(q, xi):
    """One alternating-maximization pass: solve block j against the already
    updated blocks below and the previous iterate above, for j = 1..d."""
    xi = np.asarray(xi, dtype=np.float64)
    if xi.shape != (q.order,):
        raise DimensionError(f"xi has shape {xi.shape}, expected ({q.order},)")
    _check_diagonal_blocks(q)
    new = xi.copy()
    for j in range(q.nblocks):
        rows = q.block_slice(j)
        start, stop = rows.start, rows.stop
        rhs = np.zeros(stop - start)
        if start > 0:
            rhs -= q.h[rows, :start] @ new[:start]
        if stop < q.order:
            rhs -= q.h[rows, stop:] @ xi[stop:]
        new[rows] = np.linalg.solve(q.block(j, j), rhs)
    return new


def analyze(q, unit_tol=UNIT_CIRCLE_TOL, zero_tol=ZERO_EIG_TOL):
    """Spectrum of K, inertia of H, and the eigenvalue-count comparison.

    When a diagonal block is not positive definite the counts are still
    reported but ``theorem_holds`` is None (hypothesis not met). A singular
    diagonal block raises instead, since K does not exist.
    """
    k = gauss_seidel_matrix(q)
    eigenvalues, eigenvectors = np.linalg.eig(k)

    k_norm = float(np.linalg.norm(k, 2))
    residual = float(
        np.max(np.linalg.norm(k @ eigenvectors - eigenvectors * eigenvalues, axis=0))
    )
    if residual > 1e-8 * max(k_norm, 1e-300):
        raise NumericsError(
            f"eigenpair residual {residual!r} exceeds 1e-8 * |K| = {1e-8 * k_norm!r}"
        )

    moduli = np.abs(eigenvalues)
    on_circle = np.abs(moduli - 1.0) <= unit_tol
    gamma = int(np.count_nonzero(on_circle))
    alpha = int(np.count_nonzero(~on_circle & (moduli < 1.0)))
    beta = len(eigenvalues) - alpha - gamma

    counts = linalg.inertia(q.h, zero_tol=zero_tol)
    definite_diag = q.diagonal_blocks_positive_definite(zero_tol=zero_tol)
    theorem_holds = (
        (alpha, beta, gamma) == tuple(counts) if definite_diag else None
    )
    rho = float(np.max(moduli))
    h_positive_definite = counts.negative == 0 and counts.zero == 0
    # classify rho against 1 with the same tolerance as the count above
    return AmiSpectrumReport(
        eigenvalues=eigenvalues,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        inertia=counts,
        spectral_radius=rho,
        diagonal_blocks_definite=definite_diag,
        theorem_holds=theorem_holds,
        ostrowski=(rho < 1.0 - unit_tol) == h_positive_definite,
        pi_lower_bound_ok=counts.positive >= max(q.block_sizes),
        unit_circle_near_one=bool(
            np.all(np.abs(eigenvalues[on_circle] - 1.0) <= NEAR_ONE_TOL)
        ),
    )


def basin_experiment(q, xi0, sweeps, zero_threshold=1e-10):
    """Iterate the sweep from ``xi0`` and record norms and objective values.

    The objective sequence never decreases along the iteration; the iterates
    contract to the origin exactly when ``xi0`` lies in the invariant
    subspace of the eigenvalues of modulus below one.
    """
    if sweeps < 0:
        raise InvalidInputError("sweeps must be >= 0")
    xi = np.asarray(xi0, dtype=np.float64)
    norms = [float(np.linalg.norm(xi))]
    f_values = [q.f(xi)]
    converged = norms[0] <= zero_threshold
    run = 0
    for run in range(1, sweeps + 1):
        xi = ami_sweep(q, xi)
        norms.append(float(np.linalg.norm(xi)))
        f_values.append(q.f(xi))
        if norms[-1] <= zero_threshold:
            converged = True
            break
        if not np.isfinite(norms[-1]) or norms[-1] > 1e150:
            break  # diverged; stop before overflow poisons the record
    return BasinTrajectory(
        norms=norms,
        f_values=f_values,
        converged_to_zero=converged,
        sweeps_run=run,
    )


def hessian_form_at(t, u, step=1e-5):
    """Experimental: local quadratic model of the objective at a tuple.

    Builds tangent coordinates on each sphere (an orthonormal completion of
    x_i), evaluates the objective through the normalized retraction, and
    returns -1/2 of its finite-difference Hessian as a
    :class:`BlockQuadraticForm` with block sizes (m_i - 1). Near a strict
    local maximum the diagonal blocks come out positive definite, so
    :func:`analyze` applies to the local alternating iteration.
    """
    from .core import f_value as _f_value

    if t.dims != u.dims:
        raise DimensionError(f"tuple dims {u.dims} do not match {t.dims}")
    bases = []
    for x in u.vectors:
        m = x.size
        if m < 2:
            raise InvalidInputError("tangent coordinates need every m_i >= 2")
        full = np.concatenate([x[:, None], np.eye(m)], axis=1)
        q_mat, _ = np.linalg.qr(full)
        if np.dot(q_mat[:, 0], x) < 0:
            q_mat = -q_mat
        bases.append(q_mat[:, 1:])  # orthonormal, orthogonal to x

    sizes = [m - 1 for m in t.dims]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offsets[-1])

    def g(theta):
        from .core import UnitTuple as _UnitTuple

        vecs = []
        for i, x in enumerate(u.vectors):
            th = theta[offsets[i] : offsets[i + 1]]
            v = x + bases[i] @ th
            vecs.append(v / np.linalg.norm(v))
        return _f_value(t, _UnitTuple(vecs))

    g0 = g(np.zeros(total))
    hess = np.empty((total, total))
    for a in range(total):
        ea = np.zeros(total)
        ea[a] = step
        hess[a, a] = (g(ea) - 2.0 * g0 + g(-ea)) / step**2
        for b in range(a + 1, total):
            eb = np.zeros(total)
            eb[b] = step
            val = (g(ea + eb) - g(ea - eb) - g(-ea + eb) + g(-ea - eb)) / (
                4.0 * step**2
            )
            hess[a, b] = val
            hess[b, a] = val
    # f(theta) ~ f(0) - theta^T H theta with H = -(1/2) * Hessian
    return BlockQuadraticForm(-0.25 * (hess + hess.T), sizes)
