"""Tests for the JADM cost, its evaluation paths and its block gradients."""

import numpy as np
import pytest

from jadm_bcd.cost import (
    JadmProblem,
    JointPoint,
    cost,
    cost_from_w,
    cost_rsl,
    egrad_x,
    lambda_from_w,
    reduce_problem,
    rgrad_u,
    rgrad_x,
    transform,
    upsilon,
)
from jadm_bcd.instances import initial_point
from jadm_bcd.linalg import real_inner
from jadm_bcd.manifolds import lambda_of, random_sl_tangent, random_stiefel_tangent
from jadm_bcd.oracles import fd_gradient_oracle, independent_cost, sl_curve, stiefel_curve
from jadm_bcd.utils import DimensionError


@pytest.mark.unit
class TestProblemUnit:
    """Validation of problem data and joint points."""

    def test_single_matrix_is_promoted(self):
        p = JadmProblem(np.eye(3), [1.0], m=2)
        assert (p.L, p.n, p.m) == (1, 3, 2)

    def test_weight_count_must_match(self):
        with pytest.raises(DimensionError):
            JadmProblem(np.ones((2, 3, 3)), [1.0], m=2)

    def test_weights_must_be_positive(self):
        with pytest.raises(ValueError):
            JadmProblem(np.ones((1, 3, 3)), [0.0], m=2)

    def test_m_out_of_range(self):
        with pytest.raises(DimensionError):
            JadmProblem(np.ones((1, 3, 3)), [1.0], m=4)

    def test_structured_requires_hermitian(self):
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError):
            JadmProblem(a, [1.0], m=2, dagger="H", structured=True)
        sym = np.array([[1.0, 2j], [2j, 0.0]])
        JadmProblem(sym, [1.0], m=2, dagger="T", structured=True)

    def test_rho_sign(self):
        assert JadmProblem(np.eye(2), [1.0], 2, "H").rho == 1.0
        assert JadmProblem(np.eye(2), [1.0], 2, "T").rho == -1.0

    def test_joint_point_dimensions(self):
        with pytest.raises(DimensionError):
            JointPoint(np.eye(3)[:, :2], np.eye(3))

    def test_point_must_match_problem(self, noisy_problem):
        with pytest.raises(DimensionError):
            cost(noisy_problem, JointPoint(np.eye(4)[:, :3], np.eye(3)))


@pytest.mark.unit
class TestCostUnit:
    """The cost agrees across evaluation paths and behaves as a sum of squares."""

    def test_two_by_two_example(self):
        a = np.array([[0.0, 1.0], [1.0, 0.0]])
        p = JadmProblem(a, [1.0], m=2)
        assert cost(p, JointPoint(np.eye(2), np.eye(2))) == pytest.approx(2.0)

    def test_paths_agree(self, generic_problem):
        omega = initial_point("random", generic_problem.n, generic_problem.m, seed=5)
        f = cost(generic_problem, omega)
        assert independent_cost(generic_problem, omega) == pytest.approx(f, rel=1e-12)
        assert cost_rsl(generic_problem, omega.y) == pytest.approx(f, rel=1e-12)

    def test_weights_scale_linearly(self, generic_problem):
        omega = initial_point("random", generic_problem.n, generic_problem.m, seed=5)
        f = cost(generic_problem, omega)
        assert cost(generic_problem.scaled(3.0), omega) == pytest.approx(3.0 * f)

    def test_ground_truth_has_zero_cost(self, exact_instance):
        problem, truth = exact_instance
        assert cost(problem, truth) < 1e-14

    def test_column_permutation_keeps_cost(self, generic_problem):
        omega = initial_point("random", generic_problem.n, generic_problem.m, seed=5)
        perm = np.eye(3)[:, [2, 0, 1]]
        if np.linalg.det(perm) < 0:
            perm[:, 0] *= -1
        moved = JointPoint(omega.u, omega.x.x @ perm)
        assert cost(generic_problem, moved) == pytest.approx(cost(generic_problem, omega))

    def test_reduced_problem_matches(self, generic_problem):
        omega = initial_point("random", generic_problem.n, generic_problem.m, seed=5)
        reduced = reduce_problem(generic_problem, omega.u)
        inner = JointPoint(np.eye(3), omega.x)
        assert cost(reduced, inner) == pytest.approx(cost(generic_problem, omega))

    def test_rsl_rejects_wrong_shape(self, generic_problem):
        with pytest.raises(DimensionError):
            cost_rsl(generic_problem, np.ones((3, 3)))


@pytest.mark.unit
class TestGradientUnit:
    """Block gradients against central differences along exponential curves."""

    def test_rgrad_u_matches_finite_differences(self, generic_problem, rng):
        omega = initial_point("random", generic_problem.n, generic_problem.m, seed=9)
        grad = rgrad_u(generic_problem, omega)
        dirs = [random_stiefel_tangent(rng, omega.u) for _ in range(5)]
        table = fd_gradient_oracle(
            lambda u: cost(generic_problem, JointPoint(u, omega.x)),
            omega.u, stiefel_curve, dirs, 1e-5,
            pairing=lambda d: real_inner(grad.z, d.z),
        )
        assert max(row["rel_err"] for row in table) < 1e-5

    def test_rgrad_x_matches_finite_differences(self, generic_problem, rng):
        omega = initial_point("random", generic_problem.n, generic_problem.m, seed=9)
        lam = rgrad_x(generic_problem, omega)
        dirs = [random_sl_tangent(rng, 3) for _ in range(5)]
        table = fd_gradient_oracle(
            lambda x: cost(generic_problem, JointPoint(omega.u, x)),
            omega.x, sl_curve, dirs, 1e-5,
            pairing=lambda d: real_inner(lam.omega, d.omega),
        )
        assert max(row["rel_err"] for row in table) < 1e-5

    def test_lambda_agrees_with_euclidean_path(self, generic_problem):
        omega = initial_point("random", generic_problem.n, generic_problem.m, seed=9)
        via_w = rgrad_x(generic_problem, omega).omega
        via_egrad = lambda_of(omega.x, egrad_x(generic_problem, omega)).omega
        assert np.allclose(via_w, via_egrad, atol=1e-10 * (1 + np.linalg.norm(via_w)))

    def test_lambda_vanishes_on_diagonal_set(self, dagger_mode):
        w = np.diag([1.0, 2.0 + 1j, -3.0])[None]
        assert np.allclose(upsilon(w, dagger_mode), 0.0)
        assert np.allclose(lambda_from_w(w, [1.0], dagger_mode), 0.0)
        assert cost_from_w(w, [1.0]) == 0.0

    def test_gradients_vanish_at_ground_truth(self, exact_instance):
        problem, truth = exact_instance
        assert rgrad_x(problem, truth).norm < 1e-8
        assert rgrad_u(problem, truth).norm < 1e-8

    def test_transform_shape(self, noisy_problem, random_point):
        w = transform(noisy_problem, random_point)
        assert w.w.shape == (noisy_problem.L, 3, 3)
        assert len(w) == noisy_problem.L


@pytest.mark.unit
@pytest.mark.slow
class TestGradientSweepUnit:
    """Finite-difference agreement over many random problems and points."""

    @pytest.mark.parametrize("seed", range(50))
    def test_block_gradients(self, dagger_mode, seed):
        rng = np.random.default_rng(seed)
        mats = rng.standard_normal((3, 5, 5)) + 1j * rng.standard_normal((3, 5, 5))
        problem = JadmProblem(mats, rng.uniform(0.5, 2.0, size=3), m=3, dagger=dagger_mode)
        omega = initial_point("random", 5, 3, seed=seed)
        grad, lam = rgrad_u(problem, omega), rgrad_x(problem, omega)
        u_table = fd_gradient_oracle(
            lambda u: cost(problem, JointPoint(u, omega.x)),
            omega.u, stiefel_curve, [random_stiefel_tangent(rng, omega.u) for _ in range(3)],
            1e-5, pairing=lambda d: real_inner(grad.z, d.z),
        )
        x_table = fd_gradient_oracle(
            lambda x: cost(problem, JointPoint(omega.u, x)),
            omega.x, sl_curve, [random_sl_tangent(rng, 3) for _ in range(3)],
            1e-5, pairing=lambda d: real_inner(lam.omega, d.omega),
        )
        assert max(row["rel_err"] for row in u_table) < 1e-5
        assert max(row["rel_err"] for row in x_table) < 1e-5
