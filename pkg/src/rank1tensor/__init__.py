"""Best rank-one approximation of dense real d-mode tensors.

Alternating solvers (als, asvd, mals, masvd) for maximizing
<T, x_1 (x) ... (x) x_d> over unit vectors, with stationarity and
semi-maximality diagnostics, a block Gauss-Seidel spectrum analyzer for the
local alternating iteration, and a benchmark harness. Submodules:
``core``, ``linalg``, ``solvers``, ``diagnostics``, ``ami``, ``bench``,
``io``, ``cli``, ``kernels``.
"""

from .core import (
    Rank1Tensor,
    Tensor,
    UnitTuple,
    contract,
    f_value,
    inner,
    residual_norm,
    unfold,
)
from .errors import (
    BreakdownError,
    DegenerateInputError,
    DimensionError,
    InvalidInputError,
    NumericsError,
    ParseError,
    Rank1Error,
    SingularBlockError,
    UnsupportedError,
)
from .kernels import backend_name
from .solvers import Rank1Result, SolverConfig, SolverTrace, solve

__version__ = "0.1.0"

__all__ = [
    "Tensor",
    "UnitTuple",
    "Rank1Tensor",
    "inner",
    "contract",
    "unfold",
    "f_value",
    "residual_norm",
    "SolverConfig",
    "SolverTrace",
    "Rank1Result",
    "solve",
    "backend_name",
    "Rank1Error",
    "DimensionError",
    "InvalidInputError",
    "DegenerateInputError",
    "BreakdownError",
    "NumericsError",
    "UnsupportedError",
    "SingularBlockError",
    "ParseError",
    "__version__",
]
