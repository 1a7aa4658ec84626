#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 11:02:30 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/rotations.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/rotations.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""Elementary 2x2 rotations, their coefficient forms and closed-form minimizers.

A rotation acts on the pair (i, j) (0-based, i < j) as X <- X V where V is
the identity except for the 2x2 block psi at rows/columns i, j. Four kinds:

    plane     [[cos t, -sin t e^{i p}], [sin t e^{-i p}, cos t]]   (SU(2))
    upper     [[1, z], [0, 1]]
    lower     [[1, 0], [z, 1]]
    diagonal  [[x, 0], [0, 1/x]]

Each minimizer returns the rotation together with the decrease of the cost
it predicts, which the solvers compare against the realized decrease.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Tuple, Union

import numpy as np

from .cost import CongestedSet, as_stack, cost_from_w
from .linalg import dagger
from .manifolds import SlTangentCoord
from .utils import ContractError, DimensionError, NumericalIntegrityError

logger = logging.getLogger(__name__)

PLANE = "plane"
UPPER = "upper"
LOWER = "lower"
DIAGONAL = "diagonal"
KINDS = (PLANE, UPPER, LOWER, DIAGONAL)

Pair = Tuple[int, int]


def _check_pair(pair: Pair, m: int = None) -> Pair:
    i, j = int(pair[0]), int(pair[1])
    if not 0 <= i < j:
        raise DimensionError(f"Pair must satisfy 0 <= i < j, got {pair}")
    if m is not None and j >= m:
        raise DimensionError(f"Pair {pair} out of range for m={m}")
    return i, j


@dataclass
class Rotation2:
    kind: str
    psi: np.ndarray
    pair: Pair

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown rotation kind: {self.kind!r}")
        self.pair = _check_pair(self.pair)
        psi = np.asarray(self.psi, dtype=np.complex128)
        if psi.shape != (2, 2):
            raise DimensionError(f"psi must be 2 x 2, got {psi.shape}")
        tol = 1e-12
        if self.kind == PLANE:
            c, s = psi[0, 0], -psi[0, 1]
            ok = (
                abs(c.imag) <= tol
                and abs(psi[1, 1] - c) <= tol
                and abs(psi[1, 0] - np.conj(s)) <= tol
                and abs(abs(c) ** 2 + abs(s) ** 2 - 1.0) <= tol
            )
        elif self.kind == UPPER:
            ok = psi[0, 0] == 1 and psi[1, 1] == 1 and psi[1, 0] == 0
        elif self.kind == LOWER:
            ok = psi[0, 0] == 1 and psi[1, 1] == 1 and psi[0, 1] == 0
        else:
            ok = (
                psi[0, 0] != 0
                and psi[0, 1] == 0
                and psi[1, 0] == 0
                and abs(psi[0, 0] * psi[1, 1] - 1.0) <= tol
            )
        if not ok:
            raise ContractError(f"psi is not a valid {self.kind} rotation: {psi}")
        self.psi = psi

    @classmethod
    def plane(cls, theta: float, phi: float, pair: Pair) -> "Rotation2":
        c, s = np.cos(theta), np.sin(theta)
        psi = np.array(
            [[c, -s * np.exp(1j * phi)], [s * np.exp(-1j * phi), c]]
        )
        return cls(PLANE, psi, pair)

    @classmethod
    def upper(cls, z: complex, pair: Pair) -> "Rotation2":
        return cls(UPPER, np.array([[1.0, z], [0.0, 1.0]]), pair)

    @classmethod
    def lower(cls, z: complex, pair: Pair) -> "Rotation2":
        return cls(LOWER, np.array([[1.0, 0.0], [z, 1.0]]), pair)

    @classmethod
    def diagonal(cls, x: complex, pair: Pair) -> "Rotation2":
        return cls(DIAGONAL, np.array([[x, 0.0], [0.0, 1.0 / x]]), pair)

    @classmethod
    def identity(cls, kind: str, pair: Pair) -> "Rotation2":
        return cls(kind, np.eye(2), pair)

    @property
    def size(self) -> float:
        """||psi - I_2||_F."""
        return float(np.linalg.norm(self.psi - np.eye(2)))


class Minimizer(NamedTuple):
    rotation: Rotation2
    decrease: float
    branch: str = ""


# ---------------------------------------------------------------- embedding


def extract_pair(w: np.ndarray, i: int, j: int) -> np.ndarray:
    """[[W_ii, W_ij], [W_ji, W_jj]]."""
    w = np.asarray(w)
    i, j = _check_pair((i, j), w.shape[-1])
    idx = [i, j]
    return w[..., idx, :][..., :, idx]


def embed(rot: Rotation2, m: int) -> np.ndarray:
    i, j = _check_pair(rot.pair, m)
    v = np.eye(m, dtype=np.complex128)
    v[np.ix_([i, j], [i, j])] = rot.psi
    return v


def apply_rotation(w: np.ndarray, rot: Rotation2, mode: str, out: np.ndarray = None) -> np.ndarray:
    """V^dag W V for every matrix of the stack; only rows/columns i, j change."""
    w = as_stack(w)
    res = w.copy() if out is None else out
    idx = list(rot.pair)
    res[:, :, idx] = res[:, :, idx] @ rot.psi
    res[:, idx, :] = dagger(rot.psi, mode) @ res[:, idx, :]
    return res


def rotated_cost(wset, weights: np.ndarray, rot: Rotation2, mode: str) -> float:
    """Cost of the stack after applying rot (direct evaluation)."""
    return cost_from_w(apply_rotation(as_stack(wset), rot, mode), weights)


# ---------------------------------------------------------------- derivatives


def _lambda_array(lam: Union[SlTangentCoord, np.ndarray]) -> np.ndarray:
    return lam.omega if isinstance(lam, SlTangentCoord) else np.asarray(lam)


def elementary_derivative(lam, pair: Pair, kind: str) -> np.ndarray:
    """Derivative of the elementary function of kind at the identity rotation.

    plane returns 3 components (c, s1, s2); the others return 2 (Re z, Im z).
    """
    lam = _lambda_array(lam)
    i, j = _check_pair(pair, lam.shape[-1])
    lij, lji = lam[i, j], lam[j, i]
    if kind == PLANE:
        return np.array([0.0, -(lij - lji).real, -(lij + lji).imag])
    if kind == UPPER:
        return np.array([lij.real, lij.imag])
    if kind == LOWER:
        return np.array([lji.real, lji.imag])
    if kind == DIAGONAL:
        dd = lam[i, i] - lam[j, j]
        return np.array([dd.real, dd.imag])
    raise ValueError(f"Unknown rotation kind: {kind!r}")


def plane_gradient_matrix(lam, pair: Pair) -> np.ndarray:
    """Riemannian gradient of the plane elementary function at I_2, as an su(2) matrix."""
    p = extract_pair(_lambda_array(lam), *pair)
    skew = 0.5 * (p - p.conj().T)
    return skew - 0.5 * np.trace(skew) * np.eye(2)


# ---------------------------------------------------------------- triangular


@dataclass
class TriangularCoeffs:
    """alpha (role upper) or beta (role lower) coefficients for one pair."""

    a1: float
    a2: float
    a3: float
    role: str
    pair: Pair

    def __post_init__(self):
        if self.role not in (UPPER, LOWER):
            raise ValueError(f"role must be 'upper' or 'lower', got {self.role!r}")
        if self.a1 < 0:
            raise NumericalIntegrityError(f"a1 must be nonnegative, got {self.a1}")

    def model(self, x, y):
        """Cost change at z = x + iy."""
        return self.a1 * (x * x + y * y) + 2.0 * self.a2 * x + 2.0 * self.a3 * y


def triangular_coeffs(wset, weights, pair: Pair, role: str, dagger_mode: str) -> TriangularCoeffs:
    w = as_stack(wset)
    i, j = _check_pair(pair, w.shape[-1])
    # V_ab = z; the sums run over p != b
    a, b = (i, j) if role == UPPER else (j, i)
    keep = np.arange(w.shape[-1]) != b
    row_a, col_a = w[:, a, keep], w[:, keep, a]
    row_b, col_b = w[:, b, keep], w[:, keep, b]
    mags = np.sum(np.abs(row_a) ** 2 + np.abs(col_a) ** 2, axis=1)
    if dagger_mode == "H":
        cross = np.sum(np.conj(col_a) * col_b + row_a * np.conj(row_b), axis=1)
    else:
        cross = np.sum(np.conj(col_a) * col_b + np.conj(row_a) * row_b, axis=1)
    weights = np.asarray(weights, dtype=np.float64)
    c = complex(np.dot(weights, cross))
    return TriangularCoeffs(float(np.dot(weights, mags)), c.real, c.imag, role, (i, j))


def minimize_triangular(c: TriangularCoeffs) -> Minimizer:
    if c.a1 > 0:
        z = complex(-c.a2 / c.a1, -c.a3 / c.a1)
        decrease = (c.a2 ** 2 + c.a3 ** 2) / c.a1
    else:
        z, decrease = 0j, 0.0
    make = Rotation2.upper if c.role == UPPER else Rotation2.lower
    return Minimizer(make(z, c.pair), decrease, "closed")


# ---------------------------------------------------------------- diagonal


@dataclass
class DiagonalCoeffs:
    g1: float
    g2: float
    pair: Pair

    def __post_init__(self):
        if self.g1 < 0 or self.g2 < 0:
            raise NumericalIntegrityError(f"gamma must be nonnegative, got {self.g1}, {self.g2}")

    def model(self, x):
        """Cost change at diag(x, 1/x), x real."""
        return self.g1 * (x * x - 1.0) + self.g2 * (1.0 / (x * x) - 1.0)


def diagonal_coeffs(wset, weights, pair: Pair) -> DiagonalCoeffs:
    w = as_stack(wset)
    m = w.shape[-1]
    i, j = _check_pair(pair, m)
    keep = np.ones(m, dtype=bool)
    keep[[i, j]] = False

    def energy(k):
        return np.sum(np.abs(w[:, k, keep]) ** 2 + np.abs(w[:, keep, k]) ** 2, axis=1)

    weights = np.asarray(weights, dtype=np.float64)
    return DiagonalCoeffs(
        float(np.dot(weights, energy(i))), float(np.dot(weights, energy(j))), (i, j)
    )


def minimize_diagonal(c: DiagonalCoeffs, sigma_var: float) -> Minimizer:
    if not 0 < sigma_var < 0.25:
        raise ContractError(f"sigma_var must lie in (0, 1/4), got {sigma_var}")
    if c.g1 == 0 and c.g2 == 0:
        return Minimizer(Rotation2.identity(DIAGONAL, c.pair), 0.0, "identity")
    if c.g1 == 0:
        x, branch = 2.0, "upper-clamp"
    else:
        ratio = c.g2 / c.g1
        if ratio < sigma_var:
            x, branch = 0.5, "lower-clamp"
        elif ratio > 1.0 / sigma_var:
            x, branch = 2.0, "upper-clamp"
        else:
            x, branch = ratio ** 0.25, "interior"
    decrease = -float(c.model(x))
    return Minimizer(Rotation2.diagonal(x, c.pair), decrease, branch)


# ---------------------------------------------------------------- plane


@dataclass
class GammaForm:
    gamma: np.ndarray
    c0: float
    pair: Pair

    def q(self, theta, phi):
        """r^T Gamma r with r = (cos 2t, -sin 2t cos p, -sin 2t sin p)."""
        g = self.gamma
        c2, s2 = np.cos(2 * theta), np.sin(2 * theta)
        r = (c2, -s2 * np.cos(phi), -s2 * np.sin(phi))
        return sum(g[a, b] * r[a] * r[b] for a in range(3) for b in range(3))

    def model(self, theta, phi):
        """Cost change after the plane rotation (theta, phi)."""
        return -(self.q(theta, phi) - self.c0)


def z_vector(w: np.ndarray, pair: Pair, dagger_mode: str) -> np.ndarray:
    """Per-matrix 3-vectors z_ij(W), stacked as L x 3."""
    w = as_stack(w)
    i, j = pair
    a, b, d, e = w[:, i, i], w[:, i, j], w[:, j, i], w[:, j, j]
    if dagger_mode == "H":
        return np.stack([e - a, b + d, -1j * (b - d)], axis=1)
    return np.stack([b + d, a - e, 1j * (a + e)], axis=1)


def build_gamma(wset, weights, pair: Pair, dagger_mode: str) -> GammaForm:
    w = as_stack(wset)
    pair = _check_pair(pair, w.shape[-1])
    z = z_vector(w, pair, dagger_mode)
    weights = np.asarray(weights, dtype=np.float64)
    rho = 1.0 if dagger_mode == "H" else -1.0
    outer = np.einsum("l,la,lb->ab", weights, z.real, z.real) + np.einsum(
        "l,la,lb->ab", weights, z.imag, z.imag
    )
    gamma = 0.5 * rho * outer
    gamma = 0.5 * (gamma + gamma.T)
    i, j = pair
    if dagger_mode == "H":
        c0 = 0.5 * float(np.dot(weights, np.abs(w[:, j, j] - w[:, i, i]) ** 2))
    else:
        c0 = -0.5 * float(np.dot(weights, np.abs(w[:, i, j] + w[:, j, i]) ** 2))
    if abs(c0 - gamma[0, 0]) > 1e-8 * (1.0 + abs(c0)):
        raise NumericalIntegrityError(f"c0 = {c0} disagrees with Gamma_11 = {gamma[0, 0]}")
    return GammaForm(gamma, c0, pair)


def minimize_plane(g: GammaForm, epsilon_inner: float) -> Minimizer:
    if epsilon_inner <= 0:
        raise ContractError(f"epsilon_inner must be positive, got {epsilon_inner}")
    gamma = g.gamma
    vals, vecs = np.linalg.eigh(gamma)
    if vals[-1] - g.c0 <= 1e-14 * (1.0 + np.linalg.norm(gamma)):
        return Minimizer(Rotation2.identity(PLANE, g.pair), 0.0, "identity")
    u = vecs[:, -1]
    if u[0] < 0 or (u[0] == 0 and u[1] < 0):
        u = -u
    theta = 0.5 * np.arccos(np.clip(u[0], -1.0, 1.0))
    phi = 0.0
    if np.sin(2 * theta) > 1e-15:
        phi = float(np.mod(np.arctan2(-u[2], -u[1]), 2 * np.pi))
    optimum = float(g.q(theta, phi) - g.c0)
    v = gamma[0, 1:]
    w = u[1:]
    if abs(np.dot(v, w)) >= epsilon_inner * np.linalg.norm(v) * np.linalg.norm(w):
        return Minimizer(Rotation2.plane(theta, phi, g.pair), optimum, "eigen")
    cs = v / np.linalg.norm(v)
    big_g = cs @ gamma[1:, 1:] @ cs
    a_coef = 0.5 * (gamma[0, 0] - big_g)
    b_coef = -(gamma[0, 1] * cs[0] + gamma[0, 2] * cs[1])
    theta_f = 0.25 * np.arctan2(b_coef, a_coef)
    phi_f = float(np.mod(np.arctan2(cs[1], cs[0]), 2 * np.pi))
    decrease = float(g.q(theta_f, phi_f) - g.c0)
    # the steered angle must keep at least half of the attainable decrease
    if decrease < 0.5 * optimum:
        return Minimizer(Rotation2.plane(theta, phi, g.pair), optimum, "eigen-kept")
    return Minimizer(Rotation2.plane(theta_f, phi_f, g.pair), decrease, "fallback")


# ---------------------------------------------------------------- dispatch


def best_rotation(
    wset, weights, pair: Pair, kind: str, dagger_mode: str,
    sigma_var: float = 0.1, epsilon_inner: float = 0.1,
) -> Minimizer:
    """Closed-form minimizer of the elementary function of kind at pair."""
    if kind in (UPPER, LOWER):
        return minimize_triangular(triangular_coeffs(wset, weights, pair, kind, dagger_mode))
    if kind == DIAGONAL:
        return minimize_diagonal(diagonal_coeffs(wset, weights, pair), sigma_var)
    if kind == PLANE:
        return minimize_plane(build_gamma(wset, weights, pair, dagger_mode), epsilon_inner)
    raise ValueError(f"Unknown rotation kind: {kind!r}")


if __name__ == "__main__":
    w = CongestedSet(np.array([[[0.0, 1.0], [1.0, 0.0]]], dtype=complex))
    best = best_rotation(w, [1.0], (0, 1), PLANE, "H")
    print(best.branch, best.decrease)
    print(np.round(apply_rotation(w.w, best.rotation, "H")[0], 12))

# python -m jadm_bcd.rotations

# EOF
