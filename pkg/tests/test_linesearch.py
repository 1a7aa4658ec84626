"""Tests for the Armijo backtracking search on the Stiefel block."""

import numpy as np
import pytest

from jadm_bcd.LineSearch import LineSearch, LineSearchParams, armijo_step, search_direction
from jadm_bcd.cost import JointPoint, cost, rgrad_u
from jadm_bcd.manifolds import (
    StiefelTangent,
    random_stiefel,
    random_stiefel_tangent,
    stiefel_exp,
)
from jadm_bcd.utils import ContractError


def u_cost(problem, x):
    return lambda u: cost(problem, JointPoint(u, x))


def descent_point(u, grad, t):
    return stiefel_exp(u, StiefelTangent(-t * grad.z, u))


@pytest.mark.unit
class TestLineSearchUnit:
    """Parameters, directions and acceptance."""

    def test_parameter_validation(self):
        with pytest.raises(ContractError):
            LineSearchParams(delta_s=0.0)
        with pytest.raises(ContractError):
            LineSearchParams(delta_w=1.0)
        with pytest.raises(ContractError):
            LineSearchParams(tau=1.5)
        assert LineSearchParams(t_init=2.0).kappa_p == pytest.approx(2e-4)

    def test_default_direction_is_steepest_descent(self, noisy_problem, random_point):
        grad = rgrad_u(noisy_problem, random_point)
        z = search_direction(grad)
        assert np.allclose(z.z, -grad.z)

    def test_ascent_direction_rejected(self, noisy_problem, random_point):
        grad = rgrad_u(noisy_problem, random_point)
        with pytest.raises(ContractError):
            search_direction(grad, StiefelTangent(grad.z.copy(), grad.base), delta_s=0.5)

    def test_accepted_step_satisfies_armijo(self, noisy_problem, random_point):
        params = LineSearchParams()
        grad = rgrad_u(noisy_problem, random_point)
        p = u_cost(noisy_problem, random_point.x)
        f0 = p(random_point.u)
        res = armijo_step(p, random_point.u, search_direction(grad), grad, params)
        assert res.accepted
        assert res.t > 0
        assert res.f_new <= f0 - params.delta_w * res.t * grad.norm ** 2 + 1e-12
        assert res.f_new == pytest.approx(p(res.point))
        assert res.armijo_ok

    def test_decrease_slack_is_nonnegative(self, noisy_problem, random_point):
        search = LineSearch()
        grad = rgrad_u(noisy_problem, random_point)
        res = search.step(u_cost(noisy_problem, random_point.x), random_point.u, grad)
        assert search.decrease_slack(res) >= -1e-12

    def test_zero_gradient_is_a_no_op(self, rng):
        u = random_stiefel(rng, 4, 2)
        zero = StiefelTangent(np.zeros((4, 2)), u)
        res = armijo_step(lambda v: 1.0, u, zero, zero, LineSearchParams())
        assert res.accepted and res.t == 0.0
        assert res.point is u

    def test_exhausted_search_is_reported(self, rng):
        u = random_stiefel(rng, 4, 2)
        grad = random_stiefel_tangent(rng, u)
        p = lambda v: 0.0 if v is u else 1.0  # noqa: E731
        res = armijo_step(p, u, search_direction(grad), grad, LineSearchParams(max_backtracks=3))
        assert not res.accepted
        assert res.t == 0.0
        assert res.backtracks == 3

    def test_warm_start_is_opt_in(self):
        search = LineSearch()
        search.t_prev = 0.125
        assert search.initial_step() == 1.0

    def test_warm_start_grows_from_last_step(self):
        search = LineSearch(LineSearchParams(t_init=1.0, tau=0.5, warm_start=True))
        assert search.initial_step() == 1.0
        search.t_prev = 0.125
        assert search.initial_step() == pytest.approx(0.25)
        search.t_prev = 1.0
        assert search.initial_step() == 1.0


@pytest.mark.integration
class TestLargestArmijoStepIntegration:
    """Consecutive searches each return the largest t in {t_init tau^r}."""

    def test_each_search_restarts_at_t_init(self, noisy_problem, random_point):
        params = LineSearchParams()
        search = LineSearch(params)
        p = u_cost(noisy_problem, random_point.x)
        u = random_point.u
        for _ in range(6):
            grad = rgrad_u(noisy_problem, JointPoint(u, random_point.x))
            assert search.initial_step() == params.t_init
            res = search.step(p, u, grad)
            assert res.accepted
            assert res.t == pytest.approx(params.t_init * params.tau ** res.backtracks)
            f0 = p(u)
            slope = -grad.norm ** 2
            for r in range(res.backtracks):
                t = params.t_init * params.tau ** r
                trial = p(descent_point(u, grad, t))
                assert trial > f0 + params.delta_w * t * slope
            u = res.point
