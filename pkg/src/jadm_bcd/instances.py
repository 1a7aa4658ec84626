#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 14:40:03 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/instances.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/instances.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""Seeded test instances with a known joint diagonalizer.

A full-rank Y (n x m) is drawn and rescaled so that det(Y^H Y) = 1, then
A_l = (Y^+)^dag D_l Y^+ so that Y^dag A_l Y = D_l exactly. Noise, when
requested, is a structured Gaussian perturbation of unit Frobenius norm.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Tuple

import numpy as np
import scipy.linalg

from .cost import JadmProblem, JointPoint
from .linalg import dagger, herm
from .manifolds import (
    SlPoint,
    StiefelPoint,
    random_sl,
    random_sl_tangent,
    random_stiefel,
    random_stiefel_tangent,
    sl_exp,
    stiefel_exp,
)
from .utils import ContractError, JadmError, NotInRslError, complex_gaussian, spawn_rngs

logger = logging.getLogger(__name__)

MAX_DRAWS = 10
MAX_COND = 1e8


@dataclass
class InstanceSpec:
    n: int = 6
    m: int = 4
    L: int = 5
    dagger: str = "H"
    structured: bool = True
    noise: float = 0.0
    seed: int = 0
    spread: float = 0.1
    real: bool = False

    def __post_init__(self):
        if not 1 <= self.m <= self.n:
            raise ContractError(f"Need 1 <= m <= n, got n={self.n}, m={self.m}")
        if self.L < 1:
            raise ContractError(f"L must be >= 1, got {self.L}")
        if self.dagger not in ("H", "T"):
            raise ContractError(f"dagger must be 'H' or 'T', got {self.dagger!r}")
        if self.noise < 0:
            raise ContractError(f"noise must be >= 0, got {self.noise}")
        if not 0 <= self.spread < 1:
            raise ContractError(f"spread must lie in [0, 1), got {self.spread}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InstanceSpec":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def draw_rsl(rng: np.random.Generator, n: int, m: int, real: bool = False) -> np.ndarray:
    """Random well-conditioned Y with det(Y^H Y) = 1."""
    for attempt in range(1, MAX_DRAWS + 1):
        y = complex_gaussian(rng, (n, m), real=real)
        if np.linalg.matrix_rank(y) < m or np.linalg.cond(y) > MAX_COND:
            logger.debug(f"Rank-deficient draw {attempt}; redrawing")
            continue
        gram_det = np.linalg.det(y.conj().T @ y).real
        return y * gram_det ** (-1.0 / (2 * m))
    raise JadmError(f"No full-rank Y after {MAX_DRAWS} draws")


def draw_diagonals(
    rng: np.random.Generator, L: int, m: int, spread: float, complex_entries: bool = False
) -> np.ndarray:
    """Entries uniform on [-1, -spread] U [spread, 1]; random phases if complex."""
    mag = rng.uniform(spread, 1.0, size=(L, m))
    if complex_entries:
        phase = np.exp(2j * np.pi * rng.uniform(size=(L, m)))
    else:
        phase = rng.choice([-1.0, 1.0], size=(L, m))
    return mag * phase


def structured_noise(
    rng: np.random.Generator, n: int, mode: str, structured: bool, real: bool = False
) -> np.ndarray:
    e = complex_gaussian(rng, (n, n), real=real)
    if structured:
        e = herm(e) if mode == "H" else 0.5 * (e + e.T)
    return e / np.linalg.norm(e)


def generate_instance(spec: InstanceSpec) -> Tuple[JadmProblem, JointPoint]:
    """Problem plus its ground-truth joint diagonalizer."""
    rngs = spawn_rngs(spec.seed)
    y = draw_rsl(rngs["instance"], spec.n, spec.m, spec.real)
    y_pinv = np.linalg.pinv(y)
    d = draw_diagonals(
        rngs["instance"], spec.L, spec.m, spec.spread,
        complex_entries=not spec.structured and not spec.real,
    )
    mats = np.stack(
        [dagger(y_pinv, spec.dagger) @ np.diag(dl) @ y_pinv for dl in d]
    ).astype(np.complex128)
    if spec.structured:
        mats = herm(mats) if spec.dagger == "H" else 0.5 * (mats + np.swapaxes(mats, 1, 2))
    if spec.noise > 0:
        mats = mats + spec.noise * np.stack(
            [
                structured_noise(rngs["noise"], spec.n, spec.dagger, spec.structured, spec.real)
                for _ in range(spec.L)
            ]
        )
    problem = JadmProblem(mats, np.ones(spec.L), spec.m, spec.dagger, spec.structured)
    logger.info(
        f"Generated instance n={spec.n} m={spec.m} L={spec.L} dagger={spec.dagger} "
        f"noise={spec.noise:g} seed={spec.seed}"
    )
    return problem, factor_rsl(y)


def factor_rsl(y: np.ndarray) -> JointPoint:
    """Y = U P with U the polar factor; X = P = (Y^H Y)^(1/2) has det 1."""
    y = np.asarray(y, dtype=np.complex128)
    gram_det = np.linalg.det(y.conj().T @ y)
    if abs(gram_det - 1.0) > 1e-6:
        raise NotInRslError(f"det(Y^H Y) = {gram_det:.6g}, expected 1")
    u, p = scipy.linalg.polar(y, side="right")
    return JointPoint(StiefelPoint(u), SlPoint(p))


def initial_point(
    kind: str, n: int, m: int, seed: int = 0, real: bool = False
) -> JointPoint:
    """"identity" (first m columns of I_n, I_m) or "random" draws from the init stream."""
    if kind == "identity":
        return JointPoint(np.eye(n)[:, :m], np.eye(m))
    if kind == "random":
        rng = spawn_rngs(seed)["init"]
        return JointPoint(random_stiefel(rng, n, m, real), random_sl(rng, m, real))
    raise ContractError(f"Unknown init kind: {kind!r}")


def perturbed_point(omega: JointPoint, scale: float, seed: int = 0) -> JointPoint:
    """Move a point a geodesic distance `scale` along random tangents of both blocks."""
    rng = spawn_rngs(seed)["init"]
    u = stiefel_exp(omega.u, random_stiefel_tangent(rng, omega.u, scale))
    x = sl_exp(omega.x, random_sl_tangent(rng, omega.x.m, scale))
    return JointPoint(u, x)

# EOF
