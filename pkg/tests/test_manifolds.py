"""Unit tests for the Stiefel and SL manifold primitives."""

import numpy as np
import pytest

from jadm_bcd.manifolds import (
    SlPoint,
    SlTangentCoord,
    StiefelPoint,
    StiefelTangent,
    lambda_of,
    random_sl,
    random_sl_tangent,
    random_stiefel,
    random_stiefel_tangent,
    sl_exp,
    sl_metric,
    stiefel_exp,
    stiefel_project,
)
from jadm_bcd.utils import ContractError, DimensionError, ManifoldError


def orth_error(u):
    return np.linalg.norm(u.u.conj().T @ u.u - np.eye(u.m))


@pytest.mark.unit
class TestStiefelUnit:
    """Stiefel points, tangents and the exponential map."""

    def test_small_drift_is_repaired(self):
        u = StiefelPoint(np.eye(4)[:, :2] * (1.0 + 1e-8))
        assert u.repaired
        assert orth_error(u) < 1e-12

    def test_exact_point_is_untouched(self):
        u = StiefelPoint(np.eye(3)[:, :2])
        assert not u.repaired
        assert (u.n, u.m) == (3, 2)

    def test_large_drift_raises(self):
        with pytest.raises(ManifoldError):
            StiefelPoint(np.eye(4)[:, :2] * 1.001)

    def test_wide_matrix_raises(self):
        with pytest.raises(DimensionError):
            StiefelPoint(np.eye(3)[:2, :])

    def test_tangent_check(self, rng):
        u = random_stiefel(rng, 5, 3)
        with pytest.raises(ContractError):
            StiefelTangent(u.u.copy(), u)
        z = stiefel_project(u, rng.standard_normal((5, 3)))
        assert np.linalg.norm(u.u.conj().T @ z.z + z.z.conj().T @ u.u) < 1e-12

    def test_exp_stays_on_manifold(self, rng):
        u = random_stiefel(rng, 6, 3)
        for scale in (1e-3, 0.5, 3.0):
            v = stiefel_exp(u, random_stiefel_tangent(rng, u, scale))
            assert orth_error(v) < 1e-10

    def test_exp_is_first_order_retraction(self, rng):
        u = random_stiefel(rng, 5, 2)
        z = random_stiefel_tangent(rng, u, 1.0)
        t = 1e-4
        v = stiefel_exp(u, StiefelTangent(t * z.z, u))
        assert np.linalg.norm(v.u - (u.u + t * z.z)) < 10 * t ** 2

    def test_exp_rejects_foreign_tangent(self, rng):
        u = random_stiefel(rng, 5, 2)
        other = random_stiefel(rng, 5, 2)
        with pytest.raises(ContractError):
            stiefel_exp(u, random_stiefel_tangent(rng, other))

    def test_real_draw_is_real(self, rng):
        u = random_stiefel(rng, 5, 3, real=True)
        assert np.max(np.abs(u.u.imag)) < 1e-12


@pytest.mark.unit
class TestSlUnit:
    """SL points, traceless coordinates and the exponential map."""

    def test_small_determinant_drift_is_rescaled(self):
        x = SlPoint(np.diag([1.0 + 1e-6, 1.0]))
        assert x.repaired
        assert abs(np.linalg.det(x.x) - 1.0) < 1e-12

    def test_large_determinant_drift_raises(self):
        with pytest.raises(ManifoldError):
            SlPoint(2.0 * np.eye(2))

    def test_traceless_coordinates_required(self):
        with pytest.raises(ContractError):
            SlTangentCoord(np.eye(2))
        assert SlTangentCoord(np.diag([1.0, -1.0])).norm == pytest.approx(np.sqrt(2.0))

    def test_exp_keeps_unit_determinant(self, rng):
        x = random_sl(rng, 4)
        omega = random_sl_tangent(rng, 4, 2.0)
        y = sl_exp(x, omega)
        assert abs(np.linalg.det(y.x) - 1.0) < 1e-10

    def test_exp_of_zero_is_identity_map(self, rng):
        x = random_sl(rng, 3)
        y = sl_exp(x, SlTangentCoord(np.zeros((3, 3))))
        assert np.allclose(y.x, x.x)

    def test_exp_velocity_is_x_omega(self, rng):
        x = random_sl(rng, 3)
        omega = random_sl_tangent(rng, 3)
        t = 1e-6
        y = sl_exp(x, SlTangentCoord(t * omega.omega))
        assert np.allclose((y.x - x.x) / t, x.x @ omega.omega, atol=1e-4)

    def test_metric_is_left_invariant(self, rng):
        a = random_sl_tangent(rng, 3)
        b = random_sl_tangent(rng, 3)
        x1, x2 = random_sl(rng, 3), random_sl(rng, 3)
        assert sl_metric(x1, a, b) == pytest.approx(sl_metric(x2, a, b))

    def test_lambda_of_is_traceless(self, rng):
        x = random_sl(rng, 3)
        g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        lam = lambda_of(x, g)
        assert abs(np.trace(lam.omega)) < 1e-12
        with pytest.raises(DimensionError):
            lambda_of(x, np.ones((2, 2)))

    def test_real_draw_has_positive_unit_determinant(self, rng):
        x = random_sl(rng, 3, real=True)
        assert np.max(np.abs(x.x.imag)) < 1e-12
        assert np.linalg.det(x.x).real == pytest.approx(1.0)
