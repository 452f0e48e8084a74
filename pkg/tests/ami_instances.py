"""Random block-quadratic-form instances with positive definite diagonal
blocks and controlled inertia, for the spectrum-versus-inertia tests."""

import numpy as np

from rank1tensor.ami import BlockQuadraticForm


def random_form(rng, kind):
    """One instance attempt.

    kind 0: positive definite H; kind 1: indefinite via strong off-diagonal
    coupling; kind 2: like 1 but with an exact null vector deflated in.
    Returns (form, null_vector_or_None), or (None, None) when the draw fails
    the diagonal-definiteness requirement (caller retries).
    """
    d = int(rng.integers(2, 5))
    sizes = [int(rng.integers(1, 4)) for _ in range(d)]
    order = sum(sizes)
    null = None
    if kind == 0:
        g = rng.standard_normal((order, order))
        h = g.T @ g + 0.5 * np.eye(order)
    else:
        h = np.zeros((order, order))
        offset = 0
        for m in sizes:
            g = rng.standard_normal((m, m))
            h[offset : offset + m, offset : offset + m] = g.T @ g + (
                0.3 + rng.random()
            ) * np.eye(m)
            offset += m
        coupling = rng.standard_normal((order, order)) * rng.uniform(0.5, 3.0)
        mask = np.ones((order, order), dtype=bool)
        offset = 0
        for m in sizes:
            mask[offset : offset + m, offset : offset + m] = False
            offset += m
        h = h + np.where(mask, (coupling + coupling.T) / 2.0, 0.0)
        if kind == 2:
            w = rng.standard_normal(order)
            hw = h @ w
            quad = float(w @ hw)
            if abs(quad) < 1e-8:
                return None, None
            h = h - np.outer(hw, hw) / quad  # H w = 0 exactly
            h = (h + h.T) / 2.0
            null = w
    form = BlockQuadraticForm(h, sizes)
    if not form.diagonal_blocks_positive_definite():
        return None, None
    return form, null


def instance_stream(seed, kinds=(0, 1, 2)):
    rng = np.random.default_rng(seed)
    while True:
        kind = int(rng.choice(kinds))
        form, null = random_form(rng, kind)
        if form is not None:
            yield form, kind, null
