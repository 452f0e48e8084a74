"""Text interchange formats.

Tensor file:   line 1 the mode count d, line 2 the d dimensions, then the
               entries in row-major order (last index fastest), whitespace
               separated across any number of lines.
Tuple file:    line 1 the mode count d, line 2 the d dimensions, then one
               line per mode with that mode's vector.
Block matrix:  line 1 the order L, line 2 the block sizes (summing to L),
               then the L*L entries row by row.
Vector file:   whitespace-separated entries.
"""

import numpy as np

from .core import Tensor, UnitTuple
from .errors import ParseError


def _lines(text):
    return text.splitlines()


def _parse_int(token, line, what):
    try:
        value = int(token)
    except ValueError:
        raise ParseError(line, f"{what}: {token!r} is not an integer") from None
    return value


def _parse_float(token, line, what):
    try:
        return float(token)
    except ValueError:
        raise ParseError(line, f"{what}: {token!r} is not a number") from None


def _parse_header(lines, count_what, dims_what):
    if not lines or not lines[0].split():
        raise ParseError(1, f"missing {count_what}")
    head = lines[0].split()
    if len(head) != 1:
        raise ParseError(1, f"expected a single integer ({count_what})")
    d = _parse_int(head[0], 1, count_what)
    if d < 1:
        raise ParseError(1, f"{count_what} must be >= 1, got {d}")
    if len(lines) < 2 or not lines[1].split():
        raise ParseError(2, f"missing {dims_what}")
    tokens = lines[1].split()
    if len(tokens) != d:
        raise ParseError(2, f"expected {d} dimensions, got {len(tokens)}")
    dims = []
    for tok in tokens:
        m = _parse_int(tok, 2, dims_what)
        if m < 1:
            raise ParseError(2, f"dimensions must be >= 1, got {m}")
        dims.append(m)
    return d, tuple(dims)


def _collect_values(lines, first_line, expected, what):
    values = []
    last_line = first_line
    for offset, line in enumerate(lines[first_line - 1 :]):
        lineno = first_line + offset
        for tok in line.split():
            if len(values) == expected:
                raise ParseError(lineno, f"more than {expected} {what}")
            values.append(_parse_float(tok, lineno, what))
            last_line = lineno
    if len(values) != expected:
        raise ParseError(last_line, f"expected {expected} {what}, got {len(values)}")
    return np.array(values)


def parse_tensor_text(text):
    lines = _lines(text)
    _, dims = _parse_header(lines, "mode count", "dimensions")
    values = _collect_values(lines, 3, int(np.prod(dims)), "tensor entries")
    return Tensor.from_flat(dims, values)


def read_tensor_text(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse_tensor_text(fh.read())


def format_tensor_text(t, per_line=8):
    lines = [str(t.ndim), " ".join(str(m) for m in t.dims)]
    flat = t.data
    for start in range(0, flat.size, per_line):
        lines.append(" ".join(f"{x:.17g}" for x in flat[start : start + per_line]))
    return "\n".join(lines) + "\n"


def write_tensor_text(t, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_tensor_text(t))


def parse_tuple_text(text):
    """Returns (vectors, was_normalized): unit-normalizes off-sphere input
    and reports that it had to."""
    lines = _lines(text)
    d, dims = _parse_header(lines, "mode count", "dimensions")
    if len(lines) < 2 + d:
        raise ParseError(len(lines), f"expected {d} vector lines after the header")
    vectors = []
    adjusted = False
    for i in range(d):
        lineno = 3 + i
        tokens = lines[lineno - 1].split()
        if len(tokens) != dims[i]:
            raise ParseError(
                lineno, f"expected {dims[i]} entries for mode {i}, got {len(tokens)}"
            )
        v = np.array([_parse_float(tok, lineno, "vector entry") for tok in tokens])
        n = np.linalg.norm(v)
        if n == 0.0:
            raise ParseError(lineno, f"mode-{i} vector is zero")
        if abs(n - 1.0) > 1e-12:
            adjusted = True
        vectors.append(v / n)
    return UnitTuple(vectors), adjusted


def read_tuple_text(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse_tuple_text(fh.read())


def format_tuple_text(u):
    lines = [str(len(u)), " ".join(str(m) for m in u.dims)]
    for v in u.vectors:
        lines.append(" ".join(f"{x:.17g}" for x in v))
    return "\n".join(lines) + "\n"


def write_tuple_text(u, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_tuple_text(u))


def parse_block_matrix_text(text):
    """Returns (H, block_sizes) for the appendix analyzer input format."""
    lines = _lines(text)
    if not lines or not lines[0].split():
        raise ParseError(1, "missing matrix order")
    head = lines[0].split()
    if len(head) != 1:
        raise ParseError(1, "expected a single integer (matrix order)")
    order = _parse_int(head[0], 1, "matrix order")
    if order < 1:
        raise ParseError(1, f"matrix order must be >= 1, got {order}")
    if len(lines) < 2 or not lines[1].split():
        raise ParseError(2, "missing block sizes")
    sizes = [_parse_int(tok, 2, "block size") for tok in lines[1].split()]
    if any(m < 1 for m in sizes):
        raise ParseError(2, "block sizes must be >= 1")
    if sum(sizes) != order:
        raise ParseError(2, f"block sizes sum to {sum(sizes)}, expected {order}")
    values = _collect_values(lines, 3, order * order, "matrix entries")
    return values.reshape(order, order), tuple(sizes)


def read_block_matrix_text(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse_block_matrix_text(fh.read())


def parse_vector_text(text):
    values = []
    for lineno, line in enumerate(_lines(text), start=1):
        for tok in line.split():
            values.append(_parse_float(tok, lineno, "vector entry"))
    if not values:
        raise ParseError(1, "empty vector file")
    return np.array(values)


def read_vector_text(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse_vector_text(fh.read())
