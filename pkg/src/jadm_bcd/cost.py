#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 10:16:52 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/cost.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/cost.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""The joint approximate diagonalization cost and its gradients.

    f(U, X) = sum_l mu_l || offdiag( (UX)^dag A_l (UX) ) ||^2

with ``dag`` the conjugate transpose (mode "H") or the plain transpose
(mode "T"). Gradients follow the 2 * d/dconj convention throughout.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from .linalg import as_cmat, dagger, offdiag, offdiag_energy
from .manifolds import (
    SlPoint,
    SlTangentCoord,
    StiefelPoint,
    StiefelTangent,
    stiefel_rgrad,
    traceless,
)
from .utils import DimensionError

logger = logging.getLogger(__name__)

STRUCTURE_TOL = 1e-10


@dataclass
class JadmProblem:
    """Matrix set A_l (L x n x n), positive weights and the dagger mode."""

    matrices: np.ndarray
    weights: np.ndarray
    m: int
    dagger: str = "H"
    structured: bool = False

    def __post_init__(self):
        mats = as_cmat(self.matrices, "matrices")
        if mats.ndim == 2:
            mats = mats[None]
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise DimensionError(f"matrices must be L x n x n, got {mats.shape}")
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if weights.shape[0] != mats.shape[0]:
            raise DimensionError(
                f"{weights.shape[0]} weights for {mats.shape[0]} matrices"
            )
        if mats.shape[0] < 1:
            raise DimensionError("At least one matrix is required")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite and positive")
        if not 1 <= int(self.m) <= mats.shape[1]:
            raise DimensionError(f"Need 1 <= m <= n, got m={self.m}, n={mats.shape[1]}")
        if self.dagger not in ("H", "T"):
            raise ValueError(f"dagger must be 'H' or 'T', got {self.dagger!r}")
        self.matrices = mats
        self.weights = weights
        self.m = int(self.m)
        if self.structured:
            asym = np.linalg.norm(mats - dagger(mats, self.dagger), axis=(1, 2))
            scale = 1.0 + np.linalg.norm(mats, axis=(1, 2))
            if np.any(asym > STRUCTURE_TOL * scale):
                kind = "Hermitian" if self.dagger == "H" else "complex symmetric"
                raise ValueError(f"structured problem requires {kind} matrices")

    @property
    def n(self) -> int:
        return self.matrices.shape[1]

    @property
    def L(self) -> int:
        return self.matrices.shape[0]

    @property
    def rho(self) -> float:
        """+1 for mode H, -1 for mode T."""
        return 1.0 if self.dagger == "H" else -1.0

    def scaled(self, c: float) -> "JadmProblem":
        return JadmProblem(self.matrices, c * self.weights, self.m, self.dagger, self.structured)


@dataclass
class JointPoint:
    """omega = (U, X) on St(m,n,C) x SL_m(C)."""

    u: StiefelPoint
    x: SlPoint

    def __post_init__(self):
        if not isinstance(self.u, StiefelPoint):
            self.u = StiefelPoint(self.u)
        if not isinstance(self.x, SlPoint):
            self.x = SlPoint(self.x)
        if self.u.m != self.x.m:
            raise DimensionError(f"U has {self.u.m} columns but X is {self.x.m} x {self.x.m}")

    @property
    def y(self) -> np.ndarray:
        return self.u.u @ self.x.x

    @property
    def norm(self) -> float:
        """Product-space Frobenius norm sqrt(||U||^2 + ||X||^2)."""
        return float(np.hypot(np.linalg.norm(self.u.u), np.linalg.norm(self.x.x)))


@dataclass
class CongestedSet:
    """Transformed set W_l = (UX)^dag A_l (UX), stacked as L x m x m."""

    w: np.ndarray

    def __len__(self) -> int:
        return self.w.shape[0]


WLike = Union[CongestedSet, np.ndarray]


def as_stack(wset: WLike) -> np.ndarray:
    w = wset.w if isinstance(wset, CongestedSet) else np.asarray(wset)
    return w[None] if w.ndim == 2 else w


def _check_point(problem: JadmProblem, omega: JointPoint) -> None:
    if omega.u.n != problem.n or omega.u.m != problem.m:
        raise DimensionError(
            f"Point is {omega.u.n} x {omega.u.m}, problem needs {problem.n} x {problem.m}"
        )


def congruence(matrices: np.ndarray, y: np.ndarray, mode: str) -> np.ndarray:
    """Y^dag A_l Y for every l."""
    return dagger(y, mode)[None] @ matrices @ y[None]


def transform(problem: JadmProblem, omega: JointPoint) -> CongestedSet:
    _check_point(problem, omega)
    return CongestedSet(congruence(problem.matrices, omega.y, problem.dagger))


def cost_from_w(wset: WLike, weights: np.ndarray) -> float:
    return float(np.dot(weights, offdiag_energy(as_stack(wset))))


def cost(problem: JadmProblem, omega: JointPoint) -> float:
    return cost_from_w(transform(problem, omega), problem.weights)


def cost_rsl(problem: JadmProblem, y: np.ndarray) -> float:
    """Cost evaluated directly on a rectangular Y = UX."""
    y = np.asarray(y, dtype=np.complex128)
    if y.shape != (problem.n, problem.m):
        raise DimensionError(f"Y must be {problem.n} x {problem.m}, got {y.shape}")
    return cost_from_w(congruence(problem.matrices, y, problem.dagger), problem.weights)


def upsilon(w: np.ndarray, dagger_mode: str) -> np.ndarray:
    """Upsilon(W); batched over a leading axis.

    H: W offdiag(W)^H + W^H offdiag(W)
    T: conj(W) offdiag(W)^T + W^H offdiag(W)
    """
    w = np.asarray(w)
    d = offdiag(w)
    wh = dagger(w, "H")
    if dagger_mode == "H":
        return w @ dagger(d, "H") + wh @ d
    if dagger_mode == "T":
        return np.conj(w) @ dagger(d, "T") + wh @ d
    raise ValueError(f"Unknown dagger mode: {dagger_mode!r}")


def weighted_upsilon(wset: WLike, weights: np.ndarray, dagger_mode: str) -> np.ndarray:
    return np.tensordot(weights, upsilon(as_stack(wset), dagger_mode), axes=1)


def lambda_from_w(wset: WLike, weights: np.ndarray, dagger_mode: str) -> np.ndarray:
    """Lambda = 2 sum_l mu_l (Upsilon_l - tr(Upsilon_l)/m I)."""
    return traceless(2.0 * weighted_upsilon(wset, weights, dagger_mode))


def egrad_y(problem: JadmProblem, y: np.ndarray) -> np.ndarray:
    """Euclidean gradient of Y -> cost_rsl(problem, Y)."""
    a = problem.matrices
    ay = a @ y[None]
    w = dagger(y, problem.dagger)[None] @ ay
    d = offdiag(w)
    ah = dagger(a, "H")
    if problem.dagger == "H":
        per = ay @ dagger(d, "H") + ah @ y[None] @ d
    else:
        per = np.conj(ay) @ dagger(d, "T") + ah @ np.conj(y)[None] @ d
    return 2.0 * np.tensordot(problem.weights, per, axes=1)


def egrad_u(problem: JadmProblem, omega: JointPoint) -> np.ndarray:
    """Euclidean gradient of U -> f(U, X) at fixed X."""
    _check_point(problem, omega)
    return egrad_y(problem, omega.y) @ omega.x.x.conj().T


def egrad_x(problem: JadmProblem, omega: JointPoint) -> np.ndarray:
    """Euclidean gradient of X -> f(U, X) at fixed U."""
    _check_point(problem, omega)
    return omega.u.u.conj().T @ egrad_y(problem, omega.y)


def rgrad_u(problem: JadmProblem, omega: JointPoint) -> StiefelTangent:
    return stiefel_rgrad(omega.u, egrad_u(problem, omega))


def rgrad_x(problem: JadmProblem, omega: JointPoint) -> SlTangentCoord:
    """Left-translated Riemannian gradient coordinates Lambda(X)."""
    w = transform(problem, omega)
    return SlTangentCoord(lambda_from_w(w, problem.weights, problem.dagger))


def reduce_problem(problem: JadmProblem, u: StiefelPoint) -> JadmProblem:
    """B_l = U^dag A_l U, the m x m problem seen by the X block."""
    if u.n != problem.n or u.m != problem.m:
        raise DimensionError(f"U is {u.n} x {u.m}, problem needs {problem.n} x {problem.m}")
    b = congruence(problem.matrices, u.u, problem.dagger)
    return JadmProblem(b, problem.weights, problem.m, problem.dagger, problem.structured)


if __name__ == "__main__":
    a = np.array([[[0.0, 1.0], [1.0, 0.0]]])
    problem = JadmProblem(a, [1.0], m=2, dagger="H", structured=True)
    omega = JointPoint(np.eye(2), np.eye(2))
    print("cost =", cost(problem, omega))

# python -m jadm_bcd.cost

# EOF
