"""Dense d-mode tensors and the multilinear primitives used by the solvers.

Conventions
-----------
* Entries are 64-bit floats stored row-major (last index fastest).
* Modes are 0-based everywhere in the API.
* ``unfold(T, i)`` puts mode ``i`` on the rows; the columns run over the
  remaining modes in increasing order, last fastest. This is consistent with
  ``contract`` in the sense that contracting all modes but ``i`` against an
  outer product equals ``unfold(T, i) @ flat(outer product)``.
"""

from functools import reduce

import numpy as np

from . import kernels
from .errors import DegenerateInputError, DimensionError, NumericsError

UNIT_NORM_TOL = 1e-12


class Tensor:
    """A dense real d-mode tensor.

    Wraps a C-contiguous float64 ndarray; ``dims`` is its shape
    (m_1, ..., m_d) with every m_j >= 1 and d >= 1.
    """

    __slots__ = ("array",)

    def __init__(self, array, copy=True):
        arr = np.array(array, dtype=np.float64, copy=copy, order="C")
        if arr.ndim < 1:
            raise DimensionError("a tensor needs at least one mode")
        if any(m < 1 for m in arr.shape):
            raise DimensionError(f"all dimensions must be >= 1, got {arr.shape}")
        self.array = arr

    @classmethod
    def zeros(cls, dims):
        return cls(np.zeros(tuple(dims)), copy=False)

    @classmethod
    def from_flat(cls, dims, values):
        """Build from a flat value sequence in row-major order."""
        dims = tuple(int(m) for m in dims)
        values = np.asarray(values, dtype=np.float64)
        if values.size != int(np.prod(dims)):
            raise DimensionError(
                f"{values.size} values cannot fill a tensor of shape {dims}"
            )
        return cls(values.reshape(dims), copy=True)

    @property
    def dims(self):
        return self.array.shape

    @property
    def ndim(self):
        return self.array.ndim

    @property
    def size(self):
        return self.array.size

    @property
    def data(self):
        """Flat row-major view of the entries."""
        return self.array.reshape(-1)

    def norm(self):
        """Hilbert-Schmidt (Frobenius) norm."""
        return float(np.linalg.norm(self.data))

    def copy(self):
        return Tensor(self.array, copy=True)

    def __repr__(self):
        return f"Tensor(dims={self.dims})"


class UnitTuple:
    """A point on the product of unit spheres: one unit vector per mode."""

    __slots__ = ("vectors",)

    def __init__(self, vectors, normalize=False):
        vecs = []
        for j, v in enumerate(vectors):
            v = np.array(v, dtype=np.float64, copy=True, order="C")
            if v.ndim != 1 or v.size < 1:
                raise DimensionError(f"component {j} is not a nonempty vector")
            n = np.linalg.norm(v)
            if normalize:
                if n == 0.0:
                    raise DegenerateInputError(f"component {j} is the zero vector")
                v /= n
            elif abs(n - 1.0) > UNIT_NORM_TOL:
                raise DimensionError(
                    f"component {j} has norm {n!r}, expected 1 within {UNIT_NORM_TOL}"
                )
            vecs.append(v)
        if not vecs:
            raise DimensionError("a unit tuple needs at least one component")
        self.vectors = tuple(vecs)

    @property
    def dims(self):
        return tuple(v.size for v in self.vectors)

    @property
    def ndim(self):
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, j):
        return self.vectors[j]

    def __iter__(self):
        return iter(self.vectors)

    def copy(self):
        return UnitTuple(self.vectors)

    def __repr__(self):
        return f"UnitTuple(dims={self.dims})"


class Rank1Tensor:
    """scale * x_1 (x) ... (x) x_d with unit axes; its norm is |scale|."""

    __slots__ = ("scale", "axes")

    def __init__(self, scale, axes):
        self.scale = float(scale)
        self.axes = axes if isinstance(axes, UnitTuple) else UnitTuple(axes)

    def to_tensor(self):
        full = reduce(np.multiply.outer, self.axes.vectors)
        return Tensor(self.scale * full, copy=False)

    def norm(self):
        return abs(self.scale)

    def __repr__(self):
        return f"Rank1Tensor(scale={self.scale!r}, dims={self.axes.dims})"


def _check_same_dims(t, s):
    if t.dims != s.dims:
        raise DimensionError(f"shape mismatch: {t.dims} vs {s.dims}")


def _check_tuple_dims(t, u):
    if t.dims != u.dims:
        raise DimensionError(f"tuple dims {u.dims} do not match tensor dims {t.dims}")


def inner(t, s):
    """Standard inner product of two tensors of identical shape."""
    _check_same_dims(t, s)
    return float(np.dot(t.data, s.data))


def contract(t, modes, x):
    """Contract ``t`` with ``x`` over the given strictly increasing modes.

    ``x`` must have the shape of the selected modes of ``t`` (in mode order).
    Returns a Tensor over the complementary modes; a float when every mode is
    contracted; ``t`` unchanged (as a copy) when ``modes`` is empty.
    """
    modes = tuple(int(m) for m in modes)
    d = t.ndim
    if any(m < 0 or m >= d for m in modes):
        raise DimensionError(f"modes {modes} out of range for a {d}-mode tensor")
    if any(a >= b for a, b in zip(modes, modes[1:])):
        raise DimensionError(f"modes must be strictly increasing, got {modes}")
    if not modes:
        return t.copy()
    expected = tuple(t.dims[m] for m in modes)
    if x.dims != expected:
        raise DimensionError(
            f"contraction operand has dims {x.dims}, expected {expected}"
        )
    out = np.tensordot(t.array, x.array, axes=(modes, tuple(range(len(modes)))))
    if out.ndim == 0:
        return float(out)
    return Tensor(out, copy=False)


def contract_vectors(t, u, keep):
    """Contract ``t`` against the tuple's vectors on every mode except ``keep``.

    Hot path used by the solvers; returns a vector of length dims[keep].
    """
    _check_tuple_dims(t, u)
    return kernels.contract_all_but_one(t.array, u.vectors, keep)


def contract_vectors_pair(t, u, keep_i, keep_j):
    """As :func:`contract_vectors` but keeping two modes (keep_i < keep_j)."""
    _check_tuple_dims(t, u)
    if not 0 <= keep_i < keep_j < t.ndim:
        raise DimensionError(f"invalid kept mode pair ({keep_i}, {keep_j})")
    return kernels.contract_all_but_two(t.array, u.vectors, keep_i, keep_j)


def unfold(t, mode):
    """Matricize: mode ``mode`` on the rows, remaining modes on the columns
    in increasing order with the last one fastest."""
    d = t.ndim
    if not 0 <= mode < d:
        raise DimensionError(f"mode {mode} out of range for a {d}-mode tensor")
    return np.ascontiguousarray(
        np.moveaxis(t.array, mode, 0).reshape(t.dims[mode], -1)
    )


def f_value(t, u):
    """The multilinear functional <T, x_1 (x) ... (x) x_d>."""
    _check_tuple_dims(t, u)
    v = kernels.contract_all_but_one(t.array, u.vectors, 0)
    return float(np.dot(u.vectors[0], v))


def residual_norm(t, u):
    """Distance from ``t`` to the best multiple of the tuple's outer product.

    Equals sqrt(|T|^2 - f_value(T, u)^2) by the Pythagoras split of ``t``
    into its projection onto the rank-one line and the complement.
    """
    nrm2 = float(np.dot(t.data, t.data))
    f = f_value(t, u)
    radicand = nrm2 - f * f
    if radicand < -1e-10 * nrm2:
        raise NumericsError(
            f"residual radicand {radicand!r} is negative beyond tolerance "
            f"(|T|^2 = {nrm2!r})"
        )
    return float(np.sqrt(max(radicand, 0.0)))
