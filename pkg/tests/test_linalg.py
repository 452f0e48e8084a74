import numpy as np
import pytest

from rank1tensor import DegenerateInputError, InvalidInputError
from rank1tensor.linalg import inertia, symmetric_eig, top_singular_triple

import oracles


def random_symmetric(n, seed, scale=1.0):
    g = np.random.default_rng(seed).standard_normal((n, n))
    return scale * (g + g.T) / 2.0


class TestOracleSelfChecks:
    """The Jacobi SVD and polynomial inertia oracles certify themselves."""

    def test_jacobi_reconstructs(self):
        for seed, shape in enumerate([(8, 6), (5, 9), (4, 4)]):
            a = np.random.default_rng(seed).standard_normal(shape)
            s, u, v = oracles.jacobi_svd(a)
            assert np.allclose(u @ np.diag(s) @ v.T, a, atol=1e-12)
            assert np.allclose(u.T @ u, np.eye(u.shape[1]), atol=1e-12)
            assert np.allclose(v.T @ v, np.eye(v.shape[1]), atol=1e-12)
            assert np.all(np.diff(s) <= 1e-14)

    def test_charpoly_inertia_on_diagonal(self):
        s = np.diag([3.0, -1.0, 2.0, -5.0])
        assert oracles.charpoly_inertia(s) == (2, 2, 0)


class TestSymmetricEig:
    def test_identity(self):
        w, _ = symmetric_eig(np.eye(3))
        assert np.allclose(w, [1.0, 1.0, 1.0])

    def test_diagonal_sorted_ascending(self):
        w, _ = symmetric_eig(np.diag([-2.0, 0.0, 7.0]))
        assert np.allclose(w, [-2.0, 0.0, 7.0])

    def test_residuals_self_certify(self):
        s = random_symmetric(6, 0)
        w, v = symmetric_eig(s)
        scale = np.linalg.norm(s, 2)
        assert np.linalg.norm(s @ v - v * w) <= 1e-9 * scale
        assert np.max(np.abs(v.T @ v - np.eye(6))) <= 1e-10

    def test_asymmetric_rejected(self):
        s = random_symmetric(4, 1)
        s[0, 1] += 1.0
        with pytest.raises(InvalidInputError):
            symmetric_eig(s)


class TestInertia:
    def test_diagonal(self):
        assert tuple(inertia(np.diag([1.0, -1.0, 0.0]), zero_tol=1e-8)) == (1, 1, 1)

    def test_gram_plus_identity_definite(self):
        g = np.random.default_rng(2).standard_normal((5, 5))
        assert tuple(inertia(g.T @ g + np.eye(5))) == (5, 0, 0)

    def test_matches_charpoly_oracle(self):
        for seed in range(10):
            s = random_symmetric(5, 100 + seed)
            assert tuple(inertia(s)) == oracles.charpoly_inertia(s)


class TestTopSingularTripleDense:
    def test_diagonal(self):
        trip = top_singular_triple(np.diag([3.0, 1.0]), mode="dense")
        assert trip.sigma == pytest.approx(3.0, rel=1e-14)
        assert np.allclose(trip.u, [1.0, 0.0])
        assert np.allclose(trip.v, [1.0, 0.0])

    def test_rank_one_outer(self):
        rng = np.random.default_rng(3)
        p = rng.standard_normal(6)
        p *= 2.0 / np.linalg.norm(p)
        q = rng.standard_normal(4)
        q *= 5.0 / np.linalg.norm(q)
        trip = top_singular_triple(np.outer(p, q), mode="dense")
        assert trip.sigma == pytest.approx(10.0, rel=1e-12)

    def test_matches_jacobi_oracle(self):
        a = np.random.default_rng(4).standard_normal((8, 6))
        trip = top_singular_triple(a, mode="dense")
        s, u, v = oracles.jacobi_svd(a)
        assert trip.sigma == pytest.approx(s[0], rel=1e-10)
        assert min(
            np.linalg.norm(trip.u - u[:, 0]), np.linalg.norm(trip.u + u[:, 0])
        ) <= 1e-8

    def test_defining_relations(self):
        for seed, shape in enumerate([(7, 3), (3, 7), (5, 5)]):
            a = np.random.default_rng(10 + seed).standard_normal(shape)
            trip = top_singular_triple(a, mode="dense")
            scale = np.linalg.norm(a, 2)
            assert abs(np.linalg.norm(trip.u) - 1.0) <= 1e-12
            assert abs(np.linalg.norm(trip.v) - 1.0) <= 1e-12
            assert np.linalg.norm(a @ trip.v - trip.sigma * trip.u) <= 1e-10 * scale
            assert np.linalg.norm(trip.u @ a - trip.sigma * trip.v) <= 1e-10 * scale

    def test_sign_convention_deterministic(self):
        a = np.random.default_rng(5).standard_normal((4, 4))
        trip1 = top_singular_triple(a, mode="dense")
        trip2 = top_singular_triple(-a, mode="dense")  # same Gram matrix
        first = trip1.u[np.argmax(np.abs(trip1.u) > 1e-12)]
        assert first > 0
        assert np.allclose(trip1.u, trip2.u)

    def test_transpose_swaps_vectors(self):
        a = np.random.default_rng(6).standard_normal((6, 4))
        t1 = top_singular_triple(a, mode="dense")
        t2 = top_singular_triple(a.T, mode="dense")
        assert t1.sigma == pytest.approx(t2.sigma, rel=1e-12)
        assert min(
            np.linalg.norm(t1.u - t2.v), np.linalg.norm(t1.u + t2.v)
        ) <= 1e-9
        assert min(
            np.linalg.norm(t1.v - t2.u), np.linalg.norm(t1.v + t2.u)
        ) <= 1e-9

    def test_zero_matrix_rejected(self):
        with pytest.raises(DegenerateInputError):
            top_singular_triple(np.zeros((3, 3)))

    def test_matches_angle_grid_search_2x2(self):
        a = np.random.default_rng(7).standard_normal((2, 2))
        trip = top_singular_triple(a, mode="dense")
        theta = np.linspace(0.0, 2.0 * np.pi, 2000, endpoint=False)
        x = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        grid = float(np.max(x @ a @ x.T))
        assert trip.sigma == pytest.approx(grid, abs=1e-4 * np.linalg.norm(a))


class TestTopSingularTripleIterative:
    def test_never_exceeds_dense(self):
        for seed in range(10):
            a = np.random.default_rng(20 + seed).standard_normal((9, 5))
            dense = top_singular_triple(a, mode="dense").sigma
            it = top_singular_triple(a, mode="iterative", max_iters=4, tol=1e-14)
            assert it.sigma <= dense + 1e-8 * np.linalg.norm(a)

    def test_converged_agrees_with_dense(self):
        a = np.random.default_rng(30).standard_normal((9, 5))
        dense = top_singular_triple(a, mode="dense").sigma
        it = top_singular_triple(a, mode="iterative", max_iters=5000, tol=1e-14)
        assert it.converged
        assert abs(it.sigma - dense) <= 1e-8 * np.linalg.norm(a)

    def test_unconverged_is_flagged_not_fatal(self):
        # nearly equal top singular values force slow convergence
        a = np.diag([1.0, 0.9999])
        it = top_singular_triple(a, mode="iterative", max_iters=2, tol=1e-16)
        assert not it.converged
        assert it.sigma > 0

    def test_rayleigh_ascent_from_seed_vector(self):
        # seeding with a current iterate can only improve the quotient
        rng = np.random.default_rng(33)
        for seed in range(10):
            a = rng.standard_normal((6, 4))
            v0 = rng.standard_normal(4)
            v0 /= np.linalg.norm(v0)
            before = np.linalg.norm(a @ v0)
            it = top_singular_triple(a, mode="iterative", max_iters=1, tol=0.0, start=v0)
            assert it.sigma >= before - 1e-12

    def test_auto_threshold(self):
        small = np.random.default_rng(34).standard_normal((4, 4))
        assert top_singular_triple(small, mode="auto").converged

    def test_auto_picks_iterative_above_side_limit(self):
        a = np.random.default_rng(35).standard_normal((70, 70))
        auto = top_singular_triple(a, mode="auto", max_iters=5000, tol=1e-14)
        dense = top_singular_triple(a, mode="dense")
        assert auto.iterations > 0  # the iterative path ran
        assert abs(auto.sigma - dense.sigma) <= 1e-8 * np.linalg.norm(a)
