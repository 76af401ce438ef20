import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from solvers import active_least_squares, gamma_grid, lambda_grid, lasso_path, relaxed_path


@pytest.fixture
def base(small_problem):
    X, Y = small_problem
    return lasso_path(X, Y, lambda_grid(X, Y, m=15, eps=1e-3))


def test_gamma_grid():
    grid = gamma_grid(10)
    assert grid[0] == 1.0 and grid[-1] == 0.0
    assert_allclose(np.diff(grid), -1 / 9)


def test_endpoints(small_problem, base):
    X, Y = small_problem
    relaxed = relaxed_path(X, Y, base)
    assert_array_equal(relaxed.betas[:, 0, :], base.betas)
    for i, support in enumerate(base.supports):
        assert_allclose(relaxed.betas[i, -1, :], active_least_squares(X, support, Y), atol=1e-12)


def test_blend_matches_closed_form(small_problem, base):
    X, Y = small_problem
    relaxed = relaxed_path(X, Y, base, gammas=np.array([1.0, 0.5, 0.0]))
    for i, (lam, support) in enumerate(zip(base.lambdas, base.supports)):
        if support.size == 0:
            continue
        XA = X[:, support]
        signs = np.sign(base.betas[i, support])
        for q, gamma in enumerate(relaxed.gammas):
            expected = np.linalg.solve(XA.T @ XA, XA.T @ Y - gamma * lam * signs)
            assert_allclose(relaxed.betas[i, q, support], expected, atol=1e-7)


def test_empty_support_gives_zeros(small_problem, base):
    X, Y = small_problem
    relaxed = relaxed_path(X, Y, base)
    assert not relaxed.betas[0].any()


def test_flattened_path_is_lambda_major(small_problem, base):
    X, Y = small_problem
    flat = relaxed_path(X, Y, base).as_coefficient_path()
    assert len(flat) == len(base) * 10
    assert flat.label(11)["lambda"] == pytest.approx(base.lambdas[1])
    assert flat.label(11)["gamma"] == pytest.approx(gamma_grid(10)[1])


@pytest.mark.parametrize("gammas", [[1.0, 0.5], [0.5, 0.0], [1.2, 0.0]])
def test_gamma_validation(small_problem, base, gammas):
    X, Y = small_problem
    with pytest.raises(ValueError):
        relaxed_path(X, Y, base, np.array(gammas))


class TestActiveLeastSquares:
    def test_orthonormal_all_columns(self, orthonormal_problem):
        Q, Y = orthonormal_problem
        assert_allclose(active_least_squares(Q, range(Q.shape[1]), Y), Q.T @ Y, atol=1e-12)

    def test_single_column(self, small_problem):
        X, Y = small_problem
        beta = active_least_squares(X, [4], Y)
        assert beta[4] == pytest.approx(X[:, 4] @ Y / (X[:, 4] @ X[:, 4]))
        assert np.count_nonzero(beta) == 1

    def test_duplicate_columns_minimum_norm(self, rng):
        a = rng.standard_normal(20)
        X = np.column_stack([a, a, rng.standard_normal(20)])
        Y = rng.standard_normal(20)
        beta = active_least_squares(X, [0, 1], Y)
        assert beta[0] == pytest.approx(beta[1])
        single = active_least_squares(X, [0], Y)
        assert_allclose(Y - X @ beta, Y - X @ single, atol=1e-10)

    def test_empty_active_set(self, small_problem):
        X, Y = small_problem
        assert not active_least_squares(X, [], Y).any()

    def test_exact_duplicate_inside_large_support(self):
        rng = np.random.default_rng(42)
        X = rng.standard_normal((50, 10))
        X[:, 5] = X[:, 2]
        Y = rng.standard_normal(50)
        beta = active_least_squares(X, [0, 1, 2, 3, 4, 5, 6, 7, 9], Y)
        reduced = active_least_squares(X, [0, 1, 2, 3, 4, 6, 7, 9], Y)
        assert np.max(np.abs(beta)) < 10
        assert beta[2] == pytest.approx(beta[5], rel=1e-8)
        assert beta[2] + beta[5] == pytest.approx(reduced[2], rel=1e-8)
        assert_allclose(X @ beta, X @ reduced, atol=1e-10)
