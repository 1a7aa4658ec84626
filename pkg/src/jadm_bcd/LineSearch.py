#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 13:20:14 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/LineSearch.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/LineSearch.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""Backtracking Armijo line search along Stiefel geodesics."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .linalg import real_inner
from .manifolds import StiefelPoint, StiefelTangent, stiefel_exp
from .utils import ContractError

logger = logging.getLogger(__name__)


@dataclass
class LineSearchParams:
    delta_s: float = 0.5
    delta_w: float = 1e-4
    tau: float = 0.5
    t_init: float = 1.0
    max_backtracks: int = 50
    kappa_p: Optional[float] = None
    warm_start: bool = False

    def __post_init__(self):
        if not 0 < self.delta_s <= 1:
            raise ContractError(f"delta_s must lie in (0, 1], got {self.delta_s}")
        if not 0 < self.delta_w < 1:
            raise ContractError(f"delta_w must lie in (0, 1), got {self.delta_w}")
        if not 0 < self.tau < 1:
            raise ContractError(f"tau must lie in (0, 1), got {self.tau}")
        if self.t_init <= 0:
            raise ContractError(f"t_init must be positive, got {self.t_init}")
        if self.max_backtracks < 0:
            raise ContractError(f"max_backtracks must be >= 0, got {self.max_backtracks}")
        if self.kappa_p is None:
            self.kappa_p = 1e-4 * self.t_init
        elif self.kappa_p < 0:
            raise ContractError(f"kappa_p must be >= 0, got {self.kappa_p}")


@dataclass
class LineSearchResult:
    t: float
    point: StiefelPoint
    f_old: float
    f_new: float
    accepted: bool
    backtracks: int
    grad_norm: float
    step_norm: float
    armijo_ok: bool
    shrink_ok: bool

    @property
    def decrease(self) -> float:
        return self.f_old - self.f_new


def search_direction(
    grad: StiefelTangent,
    direction: Optional[StiefelTangent] = None,
    delta_s: float = 1.0,
) -> StiefelTangent:
    """Steepest descent -grad, or validate a caller-supplied direction.

    A direction z is admissible when <grad, z> <= -delta_s ||grad|| ||z||.
    """
    if direction is None:
        return StiefelTangent(-grad.z, grad.base)
    if direction.base is not grad.base and not np.array_equal(direction.base.u, grad.base.u):
        raise ContractError("Direction and gradient live at different base points")
    g, zn = grad.norm, direction.norm
    if g == 0.0 or zn == 0.0:
        return direction
    slope = real_inner(grad.z, direction.z)
    if slope > -delta_s * g * zn:
        raise ContractError(
            f"Not a descent direction: <grad, z> = {slope:.3e} > "
            f"-{delta_s} * {g:.3e} * {zn:.3e}"
        )
    return direction


def armijo_step(
    p: Callable[[StiefelPoint], float],
    u: StiefelPoint,
    z: StiefelTangent,
    grad: StiefelTangent,
    params: LineSearchParams,
    t_init: Optional[float] = None,
    f0: Optional[float] = None,
) -> LineSearchResult:
    """Largest t in {t_init tau^r} with p(Exp_u(t z)) <= p(u) + delta_w t <grad, z>."""
    f0 = p(u) if f0 is None else f0
    g = grad.norm
    kappa = params.kappa_p
    if g == 0.0 or z.norm == 0.0:
        return LineSearchResult(0.0, u, f0, f0, True, 0, g, 0.0, True, g == 0.0)
    slope = real_inner(grad.z, z.z)
    if slope >= 0:
        raise ContractError(f"Direction is not a descent direction (slope {slope:.3e})")
    t = params.t_init if t_init is None else t_init
    for r in range(params.max_backtracks + 1):
        candidate = stiefel_exp(u, StiefelTangent(t * z.z, u))
        f_new = p(candidate)
        if f_new <= f0 + params.delta_w * t * slope:
            step_norm = t * z.norm
            return LineSearchResult(
                t, candidate, f0, f_new, True, r, g, step_norm,
                True, step_norm >= kappa * g,
            )
        t *= params.tau
    logger.warning(
        f"Armijo backtracking exhausted after {params.max_backtracks} reductions "
        f"(||grad||={g:.3e})"
    )
    return LineSearchResult(0.0, u, f0, f0, False, params.max_backtracks, g, 0.0, False, False)


class LineSearch:
    """Armijo search started at t_init.

    With params.warm_start the first trial is min(t_init, t_prev / tau) instead,
    so the accepted t is the largest Armijo point of that shorter ladder only.
    """

    def __init__(self, params: Optional[LineSearchParams] = None):
        self.params = params or LineSearchParams()
        self.t_prev: Optional[float] = None

    def initial_step(self) -> float:
        if not self.params.warm_start or self.t_prev is None:
            return self.params.t_init
        return min(self.params.t_init, self.t_prev / self.params.tau)

    def step(
        self,
        p: Callable[[StiefelPoint], float],
        u: StiefelPoint,
        grad: StiefelTangent,
        f0: Optional[float] = None,
    ) -> LineSearchResult:
        z = search_direction(grad, delta_s=self.params.delta_s)
        result = armijo_step(p, u, z, grad, self.params, self.initial_step(), f0)
        if result.accepted and result.t > 0:
            self.t_prev = result.t
        return result

    def decrease_slack(self, result: LineSearchResult) -> float:
        """p(U_old) - p(U_new) - delta_s delta_w ||grad|| ||t z||, nonnegative on accepted steps."""
        bound = self.params.delta_s * self.params.delta_w * result.grad_norm * result.step_norm
        return result.decrease - bound

# EOF
