#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 09:41:17 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/manifolds.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/manifolds.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""Points, tangents, gradients and exponential maps on St(m,n,C) and SL_m(C).

SL tangents are stored in left-translated coordinates: the tangent vector
X*Omega is represented by the traceless Omega alone, and the left-invariant
metric reads <X xi, X eta>_X = Re tr(xi^H eta).
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .linalg import as_cmat, herm, mat_exp, real_inner
from .utils import ContractError, DimensionError, ManifoldError, complex_gaussian

logger = logging.getLogger(__name__)

STIEFEL_TOL = 1e-10
STIEFEL_REPAIR = 1e-6
SL_TOL = 1e-8
SL_REPAIR = 1e-4
TANGENT_TOL = 1e-10


@dataclass
class StiefelPoint:
    """n x m matrix with orthonormal columns.

    Drift up to 1e-6 is removed with the polar factor; larger drift raises.
    """

    u: np.ndarray
    repaired: bool = field(default=False, init=False)

    def __post_init__(self):
        u = as_cmat(self.u, "Stiefel point")
        if u.ndim != 2 or u.shape[0] < u.shape[1]:
            raise DimensionError(f"Stiefel point must be n x m with n >= m, got {u.shape}")
        drift = np.linalg.norm(u.conj().T @ u - np.eye(u.shape[1]))
        if drift > STIEFEL_REPAIR:
            raise ManifoldError(f"||U^H U - I|| = {drift:.3e} exceeds repair window")
        if drift > STIEFEL_TOL:
            u, _ = scipy.linalg.polar(u, side="right")
            self.repaired = True
            logger.debug(f"Stiefel drift {drift:.3e} repaired by polar factor")
        self.u = u

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def m(self) -> int:
        return self.u.shape[1]


@dataclass
class SlPoint:
    """m x m matrix with det = 1, rescaled by det^(-1/m) when drift <= 1e-4."""

    x: np.ndarray
    repaired: bool = field(default=False, init=False)

    def __post_init__(self):
        x = as_cmat(self.x, "SL point")
        if x.ndim != 2 or x.shape[0] != x.shape[1]:
            raise DimensionError(f"SL point must be square, got {x.shape}")
        det = np.linalg.det(x)
        drift = abs(det - 1.0)
        if drift > SL_REPAIR:
            raise ManifoldError(f"|det X - 1| = {drift:.3e} exceeds repair window")
        if drift > SL_TOL:
            x = x * det ** (-1.0 / x.shape[0])
            self.repaired = True
            logger.warning(f"SL determinant drift {drift:.3e} repaired by rescaling")
        self.x = x

    @property
    def m(self) -> int:
        return self.x.shape[0]


@dataclass
class StiefelTangent:
    """Tangent vector z at base, i.e. herm(base^H z) = 0."""

    z: np.ndarray
    base: StiefelPoint

    def __post_init__(self):
        z = as_cmat(self.z, "Stiefel tangent")
        if z.shape != self.base.u.shape:
            raise DimensionError(
                f"Tangent shape {z.shape} != base shape {self.base.u.shape}"
            )
        residual = np.linalg.norm(herm(self.base.u.conj().T @ z))
        if residual > TANGENT_TOL * (1.0 + np.linalg.norm(z)):
            raise ContractError(f"Not a tangent vector: ||sym(U^H Z)|| = {residual:.3e}")
        self.z = z

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.z))


@dataclass
class SlTangentCoord:
    """Traceless coordinates Omega of the SL tangent vector X*Omega."""

    omega: np.ndarray

    def __post_init__(self):
        omega = as_cmat(self.omega, "SL tangent")
        if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
            raise DimensionError(f"SL tangent must be square, got {omega.shape}")
        tr = abs(np.trace(omega))
        if tr > TANGENT_TOL * (1.0 + np.linalg.norm(omega)):
            raise ContractError(f"SL tangent coordinates must be traceless, |tr| = {tr:.3e}")
        self.omega = omega

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.omega))


# ---------------------------------------------------------------- Stiefel


def stiefel_project(u: StiefelPoint, xi: np.ndarray) -> StiefelTangent:
    """Orthogonal projection xi - U herm(U^H xi) onto the tangent space at u."""
    xi = np.asarray(xi, dtype=np.complex128)
    if xi.shape != u.u.shape:
        raise DimensionError(f"Shape mismatch: {xi.shape} vs {u.u.shape}")
    z = xi - u.u @ herm(u.u.conj().T @ xi)
    return StiefelTangent(z, u)


def stiefel_rgrad(u: StiefelPoint, egrad: np.ndarray) -> StiefelTangent:
    """Riemannian gradient under the embedded metric (egrad = 2 dh/dconj(U))."""
    return stiefel_project(u, egrad)


def _same_base(a: StiefelPoint, b: StiefelPoint) -> bool:
    return a is b or (a.u.shape == b.u.shape and np.array_equal(a.u, b.u))


def stiefel_exp(u: StiefelPoint, z: StiefelTangent) -> StiefelPoint:
    """Geodesic exponential through the 2m x 2m block-matrix formula."""
    if not _same_base(u, z.base):
        raise ContractError("Tangent vector is based at a different Stiefel point")
    m = u.m
    a = u.u.conj().T @ z.z
    block = np.block(
        [
            [a, -(z.z.conj().T @ z.z)],
            [np.eye(m), a],
        ]
    )
    e = mat_exp(block)[:, :m]
    y = np.hstack([u.u, z.z]) @ e @ mat_exp(-a)
    return StiefelPoint(y)


def random_stiefel(rng: np.random.Generator, n: int, m: int, real: bool = False) -> StiefelPoint:
    """Haar-like random Stiefel point from the QR factor of a Gaussian matrix."""
    q, r = np.linalg.qr(complex_gaussian(rng, (n, m), real=real))
    phases = np.diag(r) / np.abs(np.diag(r))
    return StiefelPoint(q * phases.conj())


# ---------------------------------------------------------------- SL


def sl_metric(x: SlPoint, xi_coord: SlTangentCoord, eta_coord: SlTangentCoord) -> float:
    """Left-invariant metric; independent of x by construction."""
    return real_inner(xi_coord.omega, eta_coord.omega)


def lambda_of(x: SlPoint, egrad: np.ndarray) -> SlTangentCoord:
    """Lambda = X^H egrad minus its trace part; the Riemannian gradient is X Lambda."""
    egrad = np.asarray(egrad, dtype=np.complex128)
    if egrad.shape != x.x.shape:
        raise DimensionError(f"Shape mismatch: {egrad.shape} vs {x.x.shape}")
    g = x.x.conj().T @ egrad
    return SlTangentCoord(traceless(g))


def traceless(g: np.ndarray) -> np.ndarray:
    m = g.shape[-1]
    return g - (np.trace(g) / m) * np.eye(m)


def sl_exp(x: SlPoint, omega: SlTangentCoord) -> SlPoint:
    """X exp(conj(Omega)) exp(Omega - conj(Omega))."""
    w = omega.omega
    wc = np.conj(w)
    return SlPoint(x.x @ mat_exp(wc) @ mat_exp(w - wc))


def random_sl(rng: np.random.Generator, m: int, real: bool = False) -> SlPoint:
    """Gaussian matrix rescaled to unit determinant."""
    g = complex_gaussian(rng, (m, m), real=real) + np.eye(m)
    det = np.linalg.det(g)
    if real and det.real < 0:
        g[:, 0] = -g[:, 0]
        det = -det
    return SlPoint(g * det ** (-1.0 / m))


def random_sl_tangent(rng: np.random.Generator, m: int, scale: float = 1.0) -> SlTangentCoord:
    omega = traceless(complex_gaussian(rng, (m, m)))
    return SlTangentCoord(scale * omega / np.linalg.norm(omega))


def random_stiefel_tangent(
    rng: np.random.Generator, u: StiefelPoint, scale: float = 1.0
) -> StiefelTangent:
    z = stiefel_project(u, complex_gaussian(rng, u.u.shape)).z
    return StiefelTangent(scale * z / np.linalg.norm(z), u)


if __name__ == "__main__":
    rng = np.random.default_rng(0)
    u = random_stiefel(rng, 5, 3)
    z = random_stiefel_tangent(rng, u, 0.5)
    v = stiefel_exp(u, z)
    print("||V^H V - I|| =", np.linalg.norm(v.u.conj().T @ v.u - np.eye(3)))

# python -m jadm_bcd.manifolds

# EOF
