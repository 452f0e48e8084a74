"""Backend selection for the hot contraction kernels.

The compiled extension is preferred when it imported cleanly; otherwise the
NumPy implementation is used. Set ``RANK1TENSOR_KERNELS=numpy`` (or
``cython``) to force a backend, e.g. for the comparison benchmark.
"""

import os

from . import _kernels_py

_BACKENDS = {"numpy": _kernels_py}
try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None
else:
    _BACKENDS["cython"] = _compiled

_requested = os.environ.get("RANK1TENSOR_KERNELS", "").strip().lower()
if _requested:
    if _requested not in _BACKENDS:
        raise ImportError(
            f"RANK1TENSOR_KERNELS={_requested!r} is not available; "
            f"choices: {sorted(_BACKENDS)}"
        )
    _active = _BACKENDS[_requested]
else:
    _active = _compiled if _compiled is not None else _kernels_py

contract_all_but_one = _active.contract_all_but_one
contract_all_but_two = _active.contract_all_but_two


def backend_name():
    """Name of the active kernel backend ('cython' or 'numpy')."""
    return _active.BACKEND_NAME


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name):
    """Return a specific backend module (for side-by-side benchmarking)."""
    return _BACKENDS[name]
