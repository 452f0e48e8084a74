"""Alternating solvers for the best rank-one approximation problem.

Four methods maximize f(x_1, ..., x_d) = <T, x_1 (x) ... (x) x_d> over the
product of unit spheres:

* ``als``   - cyclic single-mode updates: replace x_i by the normalized
  contraction of T against all other current vectors.
* ``asvd``  - pair updates: replace (x_i, x_j) by the top singular pair of
  the matrix obtained by contracting every other mode. One pair step gains
  at least as much as the better of the two single-mode steps.
* ``mals``  - greedy variant of ``als``: evaluate the candidate update for
  every not-yet-updated mode, apply the best, repeat until each mode has
  been updated once. Guarantees accumulation at points maximal in every
  single mode (1-semi-maximal).
* ``masvd`` - greedy variant of ``asvd`` for 3-mode tensors: per step, for
  each not-yet-fixed mode k, the candidate freezes x_k and replaces the
  other two vectors by the top singular pair of the contracted matrix.
  Guarantees accumulation at points maximal in every pair of modes.

Every candidate-generating contraction counts as one optimization call.
All methods share one stopping rule: after each full sweep, stop when the
change in fit = f/|T| drops below ``fitchange_tol``, or when
``max_iterations`` sweeps have run.
"""

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels, linalg
from .core import UnitTuple, f_value, residual_norm, unfold
from .errors import (
    BreakdownError,
    DegenerateInputError,
    DimensionError,
    InvalidInputError,
    UnsupportedError,
)

METHODS = ("als", "asvd", "mals", "masvd")

#: a contraction below this norm is treated as an exact breakdown
BREAKDOWN_NORM = 1e-300


@dataclass
class SolverConfig:
    """Knobs for :func:`solve`; defaults follow the shared convergence rule
    (at most 10 sweeps, stop when the fit changes by less than 1e-4)."""

    method: str = "als"
    max_iterations: int = 10
    fitchange_tol: float = 1e-4
    init: str = "random"
    seed: object = 0
    svd_mode: str = "dense"  # asvd/masvd pair updates: dense | iterative
    svd_max_iters: int = 100
    svd_tol: float = 1e-9
    pair_schedule: Optional[list] = None  # asvd only; None picks the default

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidInputError(f"unknown method {self.method!r}")
        if self.max_iterations < 1:
            raise InvalidInputError("max_iterations must be >= 1")
        if not self.fitchange_tol > 0:
            raise InvalidInputError("fitchange_tol must be positive")
        if self.init not in ("random", "hosvd"):
            raise InvalidInputError(f"unknown init {self.init!r}")
        if self.svd_mode not in ("dense", "iterative"):
            raise InvalidInputError(f"unknown svd_mode {self.svd_mode!r}")


@dataclass
class SubStep:
    """One vector replacement: which modes changed, the objective after, and
    (for the greedy methods) the candidate values that were compared."""

    modes: tuple
    f_after: float
    chosen: Optional[int] = None
    candidates: Optional[dict] = None


@dataclass
class IterationRecord:
    index: int
    f_before: float
    f_after: float
    substeps: list
    opt_calls: int  # cumulative count at the end of this iteration
    wall_seconds: float


@dataclass
class SolverTrace:
    f_initial: float = 0.0
    iterations: list = field(default_factory=list)

    def f_sequence(self):
        """All objective values in order: initial, then one per sub-step."""
        yield self.f_initial
        for record in self.iterations:
            for step in record.substeps:
                yield step.f_after

    @property
    def total_opt_calls(self):
        return self.iterations[-1].opt_calls if self.iterations else 0


@dataclass
class Rank1Result:
    """Output of :func:`solve`: lambda >= 0, unit axes, and quality metrics
    with lambda^2 + residual^2 = |T|^2."""

    lambda_: float
    axes: UnitTuple
    fit: float
    residual: float
    converged_by: str  # "fitchange" | "max_iterations"
    iterations: int
    optimization_calls: int
    trace: SolverTrace

    def rank1(self):
        from .core import Rank1Tensor

        return Rank1Tensor(self.lambda_, self.axes)


class _Work:
    __slots__ = ("opt_calls", "substeps")

    def __init__(self):
        self.opt_calls = 0
        self.substeps = []


def init_random(dims, seed=0, tensor=None, max_retries=100):
    """Uniformly random point on the sphere product (normalized Gaussians),
    deterministic per seed. When ``tensor`` is given, resamples until the
    objective is nonzero (bounded retries)."""
    dims = tuple(int(m) for m in dims)
    if not dims or any(m < 1 for m in dims):
        raise DimensionError(f"invalid dims {dims}")
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        vecs = []
        for m in dims:
            while True:
                g = rng.standard_normal(m)
                n = np.linalg.norm(g)
                if n > 0.0:
                    break
            vecs.append(g / n)
        u = UnitTuple(vecs)
        if tensor is None or f_value(tensor, u) != 0.0:
            return u
    raise DegenerateInputError(
        f"{max_retries} consecutive random starts had objective exactly zero"
    )


def init_hosvd(t):
    """Per-mode top left singular vector of the unfolding (higher-order SVD
    start). More expensive than a random start but often closer."""
    if t.norm() == 0.0:
        raise DegenerateInputError("cannot initialize from the zero tensor")
    vecs = [
        linalg.top_singular_triple(unfold(t, i), mode="dense").u
        for i in range(t.ndim)
    ]
    return UnitTuple(vecs)


def default_pair_schedule(d):
    """Pair visiting order for the pair-update methods.

    d=3 and d=4 use fixed orders; for d>4 all C(d,2) pairs are arranged
    greedily so that consecutive pairs are index-disjoint when possible,
    falling back to the lexicographically first unused pair.
    """
    if d < 3:
        raise UnsupportedError("pair schedules need at least 3 modes")
    if d == 3:
        return [(1, 2), (0, 2), (0, 1)]
    if d == 4:
        return [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)]
    unused = [(i, j) for i in range(d) for j in range(i + 1, d)]
    schedule = [unused.pop(0)]
    while unused:
        prev = set(schedule[-1])
        pick = next(
            (p for p in unused if not prev.intersection(p)),
            unused[0],
        )
        unused.remove(pick)
        schedule.append(pick)
    return schedule


def _validate_schedule(schedule, d):
    for pair in schedule:
        i, j = pair
        if not 0 <= i < j < d:
            raise DimensionError(f"invalid pair {pair!r} for a {d}-mode tensor")
    return [(int(i), int(j)) for i, j in schedule]


def _make_svd(cfg):
    if cfg.svd_mode == "dense":
        return lambda mat, start=None: linalg.top_singular_triple(mat, mode="dense")
    return lambda mat, start=None: linalg.top_singular_triple(
        mat,
        mode="iterative",
        max_iters=cfg.svd_max_iters,
        tol=cfg.svd_tol,
        start=start,
    )


def _single_mode_update(arr, vecs, i, work):
    v = kernels.contract_all_but_one(arr, vecs, i)
    work.opt_calls += 1
    nv = float(np.linalg.norm(v))
    if nv < BREAKDOWN_NORM:
        raise BreakdownError(f"mode-{i} contraction collapsed to zero")
    return nv, v / nv


def _pair_update(arr, vecs, i, j, work, svd):
    mat = kernels.contract_all_but_two(arr, vecs, i, j)
    work.opt_calls += 1
    if not np.any(mat):
        raise BreakdownError(f"pair ({i},{j}) contraction collapsed to zero")
    return svd(mat, start=vecs[j])


def _als_sweep(arr, vecs, work):
    f = None
    for i in range(arr.ndim):
        f, vecs[i] = _single_mode_update(arr, vecs, i, work)
        work.substeps.append(SubStep(modes=(i,), f_after=f))
    return f


def _asvd_sweep(arr, vecs, work, schedule, svd):
    f = None
    for i, j in schedule:
        triple = _pair_update(arr, vecs, i, j, work, svd)
        vecs[i], vecs[j] = triple.u, triple.v
        f = triple.sigma
        work.substeps.append(SubStep(modes=(i, j), f_after=f))
    return f


def _mals_sweep(arr, vecs, work):
    # Candidate for mode i depends on every other current vector; cached
    # values are reused only when all of those are provably unchanged.
    d = arr.ndim
    versions = [0] * d
    cache = {}
    remaining = list(range(d))
    f = None
    while remaining:
        candidates = {}
        for i in remaining:
            stamps = tuple(versions[j] for j in range(d) if j != i)
            entry = cache.get(i)
            if entry is None or entry[2] != stamps:
                value, vector = _single_mode_update(arr, vecs, i, work)
                entry = (value, vector, stamps)
                cache[i] = entry
            candidates[i] = entry[0]
        best = max(remaining, key=lambda i: (candidates[i], -i))
        f, vector, _ = cache[best]
        if not np.array_equal(vecs[best], vector):
            versions[best] += 1
        vecs[best] = vector
        work.substeps.append(
            SubStep(modes=(best,), f_after=f, chosen=best, candidates=candidates)
        )
        remaining.remove(best)
    return f


def _masvd_sweep(arr, vecs, work, svd):
    # Candidate k freezes x_k and replaces the other two vectors by the top
    # singular pair of the contracted matrix; it depends on x_k only.
    versions = [0, 0, 0]
    cache = {}
    remaining = [0, 1, 2]
    f = None
    while remaining:
        candidates = {}
        for k in remaining:
            entry = cache.get(k)
            if entry is None or entry[3] != versions[k]:
                i, j = (m for m in range(3) if m != k)
                triple = _pair_update(arr, vecs, i, j, work, svd)
                entry = (triple.sigma, triple.u, triple.v, versions[k])
                cache[k] = entry
            candidates[k] = entry[0]
        best = max(remaining, key=lambda k: (candidates[k], -k))
        f, u_new, v_new, _ = cache[best]
        i, j = (m for m in range(3) if m != best)
        if not np.array_equal(vecs[i], u_new):
            versions[i] += 1
        if not np.array_equal(vecs[j], v_new):
            versions[j] += 1
        vecs[i], vecs[j] = u_new, v_new
        work.substeps.append(
            SubStep(modes=(i, j), f_after=f, chosen=best, candidates=candidates)
        )
        remaining.remove(best)
    return f


def _check_method_dims(method, d):
    if method in ("asvd", "masvd") and d < 3:
        raise UnsupportedError(f"{method} needs at least 3 modes, got {d}")
    if method == "masvd" and d != 3:
        raise UnsupportedError(f"masvd is defined for 3-mode tensors, got {d}")


def als_sweep(t, u):
    """One full cyclic sweep of single-mode updates; returns the new tuple."""
    vecs = [v.copy() for v in u.vectors]
    _als_sweep(t.array, vecs, _Work())
    return UnitTuple(vecs)


def asvd_sweep(t, u, schedule=None):
    """One pass of pair updates over ``schedule`` (default order for d)."""
    _check_method_dims("asvd", t.ndim)
    schedule = _validate_schedule(
        schedule if schedule is not None else default_pair_schedule(t.ndim), t.ndim
    )
    vecs = [v.copy() for v in u.vectors]
    _asvd_sweep(t.array, vecs, _Work(), schedule, _make_svd(SolverConfig(method="asvd")))
    return UnitTuple(vecs)


def mals_sweep(t, u):
    """One greedy best-candidate-first sweep of single-mode updates."""
    vecs = [v.copy() for v in u.vectors]
    _mals_sweep(t.array, vecs, _Work())
    return UnitTuple(vecs)


def masvd_sweep(t, u):
    """One greedy best-candidate-first sweep of pair updates (3-mode only)."""
    _check_method_dims("masvd", t.ndim)
    vecs = [v.copy() for v in u.vectors]
    _masvd_sweep(t.array, vecs, _Work(), _make_svd(SolverConfig(method="masvd")))
    return UnitTuple(vecs)


def solve(t, cfg=None, initial=None):
    """Run the configured alternating method on a nonzero tensor.

    ``initial`` overrides the configured initialization with an explicit
    start tuple. Returns a :class:`Rank1Result` with sign-normalized
    lambda >= 0 and a full per-sub-step trace; the traced objective sequence
    is nondecreasing.
    """
    if cfg is None:
        cfg = SolverConfig()
    nrm = t.norm()
    if nrm == 0.0:
        raise DegenerateInputError("the zero tensor has no rank-one direction")
    d = t.ndim
    _check_method_dims(cfg.method, d)

    if initial is not None:
        if initial.dims != t.dims:
            raise DimensionError(
                f"initial tuple dims {initial.dims} do not match {t.dims}"
            )
        u0 = initial
    elif cfg.init == "hosvd":
        u0 = init_hosvd(t)
    else:
        u0 = init_random(t.dims, seed=cfg.seed, tensor=t)

    arr = t.array
    vecs = [v.copy() for v in u0.vectors]
    f_current = f_value(t, u0)
    trace = SolverTrace(f_initial=f_current)

    svd = _make_svd(cfg)
    if cfg.method == "asvd":
        schedule = _validate_schedule(
            cfg.pair_schedule
            if cfg.pair_schedule is not None
            else default_pair_schedule(d),
            d,
        )

    opt_calls = 0
    fit_prev = f_current / nrm
    converged_by = "max_iterations"
    for k in range(1, cfg.max_iterations + 1):
        work = _Work()
        started = time.perf_counter()
        if cfg.method == "als":
            f_after = _als_sweep(arr, vecs, work)
        elif cfg.method == "asvd":
            f_after = _asvd_sweep(arr, vecs, work, schedule, svd)
        elif cfg.method == "mals":
            f_after = _mals_sweep(arr, vecs, work)
        else:
            f_after = _masvd_sweep(arr, vecs, work, svd)
        elapsed = time.perf_counter() - started

        opt_calls += work.opt_calls
        trace.iterations.append(
            IterationRecord(
                index=k,
                f_before=f_current,
                f_after=f_after,
                substeps=work.substeps,
                opt_calls=opt_calls,
                wall_seconds=elapsed,
            )
        )
        f_current = f_after
        fit = f_after / nrm
        if abs(fit - fit_prev) < cfg.fitchange_tol:
            converged_by = "fitchange"
            break
        fit_prev = fit

    axes = UnitTuple(vecs)
    lam = f_value(t, axes)
    if lam < 0.0:  # flip one axis; the objective is odd in each vector
        vecs[0] = -vecs[0]
        axes = UnitTuple(vecs)
        lam = -lam
    return Rank1Result(
        lambda_=lam,
        axes=axes,
        fit=lam / nrm,
        residual=residual_norm(t, axes),
        converged_by=converged_by,
        iterations=len(trace.iterations),
        optimization_calls=opt_calls,
        trace=trace,
    )
