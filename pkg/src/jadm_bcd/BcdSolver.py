#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 14:02:47 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/BcdSolver.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/BcdSolver.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""Gradient-based block coordinate descent on St(m,n,C) x SL_m(C).

Each iteration picks the block whose restricted Riemannian gradient carries
at least an upsilon-fraction of the full gradient norm, then takes one
Armijo step on U (block 1) or one Jacobi rotation on X (block 2).
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .JacobiSolver import (
    CONVERGED,
    DIVERGED,
    MAX_ITERS,
    STALLED,
    JacobiSolver,
    JacobiStep,
    RotationFamily,
    RunResult,
    StopRule,
    candidate_norms,
    point_stats,
)
from .LineSearch import LineSearch, LineSearchParams
from .Tracker import IterationTrace, Tracker
from .cost import (
    JadmProblem,
    JointPoint,
    congruence,
    cost_from_w,
    egrad_u,
    rgrad_x,
)
from .manifolds import SlPoint, SlTangentCoord, StiefelPoint, StiefelTangent, stiefel_rgrad
from .utils import ContractError, NumericalIntegrityError, StationaryPoint

logger = logging.getLogger(__name__)

UPSILON_MAX = np.sqrt(2.0) / 2.0


@dataclass
class BcdConfig:
    upsilon: float = 0.5
    family: RotationFamily = field(default_factory=RotationFamily)
    stop: StopRule = field(default_factory=StopRule)
    linesearch: LineSearchParams = field(default_factory=LineSearchParams)

    def __post_init__(self):
        if not 0 < self.upsilon < UPSILON_MAX:
            raise ContractError(f"upsilon must lie in (0, sqrt(2)/2), got {self.upsilon}")

    @property
    def algo(self) -> str:
        return f"bcd-{self.family.family.lower()}"


@dataclass
class GradientBundle:
    """Riemannian gradients of both restricted functions at one point."""

    grad_u: StiefelTangent
    lam: SlTangentCoord

    @property
    def g1(self) -> float:
        return self.grad_u.norm

    @property
    def g2(self) -> float:
        return self.lam.norm

    @property
    def norm(self) -> float:
        return float(np.hypot(self.g1, self.g2))

    def derivatives(self, family: RotationFamily) -> Dict[Tuple[Tuple[int, int], str], float]:
        """Elementary derivative norm of every admissible (pair, kind)."""
        pairs, norms = candidate_norms(self.lam.omega, family.kinds)
        return {
            ((int(p[0]), int(p[1])), kind): float(norms[r, c])
            for r, p in enumerate(pairs)
            for c, kind in enumerate(family.kinds)
        }


def block_gradients(problem: JadmProblem, omega: JointPoint) -> GradientBundle:
    return GradientBundle(
        stiefel_rgrad(omega.u, egrad_u(problem, omega)), rgrad_x(problem, omega)
    )


def block_rule_holds(bundle: GradientBundle, block: int, upsilon: float) -> bool:
    g = bundle.g1 if block == 1 else bundle.g2
    return g >= upsilon * bundle.norm


def select_block(bundle: GradientBundle, upsilon: float) -> int:
    """Larger of the blocks meeting the upsilon rule; ties go to block 1."""
    if not 0 < upsilon < UPSILON_MAX:
        raise ContractError(f"upsilon must lie in (0, sqrt(2)/2), got {upsilon}")
    if bundle.g1 == 0.0 and bundle.g2 == 0.0:
        raise StationaryPoint("Both block gradients vanish")
    eligible = [b for b in (1, 2) if block_rule_holds(bundle, b, upsilon)]
    if not eligible:
        raise NumericalIntegrityError(
            f"No block satisfies the selection rule (g1={bundle.g1:.3e}, "
            f"g2={bundle.g2:.3e}, upsilon={upsilon})"
        )
    return max(eligible, key=lambda b: (bundle.g1 if b == 1 else bundle.g2, -b))


class BcdSolver:
    """Alternates Armijo steps on U and Jacobi rotations on X."""

    def __init__(
        self,
        problem: JadmProblem,
        omega0: JointPoint,
        config: Optional[BcdConfig] = None,
        tracker: Optional[Tracker] = None,
    ):
        self.problem = problem
        self.config = config or BcdConfig()
        self.tracker = tracker if tracker is not None else Tracker()
        self.jacobi = JacobiSolver(problem, omega0.u, omega0.x, self.config.family)
        self.linesearch = LineSearch(self.config.linesearch)

    @property
    def omega(self) -> JointPoint:
        return JointPoint(self.jacobi.u, self.jacobi.x)

    @property
    def cost(self) -> float:
        return self.jacobi.cost

    def bundle(self) -> GradientBundle:
        omega = self.omega
        return GradientBundle(
            stiefel_rgrad(omega.u, egrad_u(self.problem, omega)), self.jacobi.lam()
        )

    def _u_cost(self, x: SlPoint):
        mode = self.problem.dagger
        a, weights = self.problem.matrices, self.problem.weights

        def p(u: StiefelPoint) -> float:
            return cost_from_w(congruence(congruence(a, u.u, mode), x.x, mode), weights)

        return p

    def _step_u(self, bundle: GradientBundle) -> Optional[Dict]:
        if bundle.g1 == 0.0:
            return None
        self.jacobi.refresh()
        u_old = self.jacobi.u
        p = self._u_cost(self.jacobi.x)
        res = self.linesearch.step(p, u_old, bundle.grad_u, self.jacobi.cost)
        if not res.accepted or res.t == 0.0:
            return None
        self.jacobi.set_u(res.point)
        return {
            "step_size": res.step_norm,
            "armijo_ok": True,
            "shrink_ok": res.shrink_ok,
            "decrease_slack": self.linesearch.decrease_slack(res),
            "movement": float(np.linalg.norm(res.point.u - u_old.u)),
        }

    def _step_x(self, bundle: GradientBundle) -> Optional[Dict]:
        if bundle.g2 == 0.0:
            return None
        tries = len(self.jacobi.pairs) if self.config.family.cyclic else 1
        step: Optional[JacobiStep] = None
        for _ in range(tries):
            try:
                step = self.jacobi.step(bundle.lam)
            except StationaryPoint:
                return None
            if step.rotation.size > 0.0:
                break
        if step is None or step.rotation.size == 0.0:
            return None
        sel = step.selection
        return {
            "i": sel.pair[0],
            "j": sel.pair[1],
            "kind": sel.kind,
            "step_size": step.rotation.size,
            "predicted": step.minimizer.decrease,
            "branch": step.minimizer.branch,
            "deriv_norm": sel.deriv_norm,
            "selection_ok": sel.satisfied,
            "movement": step.movement,
        }

    def run(self) -> RunResult:
        cfg = self.config
        stop = cfg.stop
        m = self.problem.m
        self.tracker.meta.update(
            {
                "algo": cfg.algo,
                "upsilon": cfg.upsilon,
                "selection": cfg.family.selection,
                **cfg.family.constants(m),
            }
        )
        started = time.perf_counter()

        f = self.cost
        bundle = self.bundle()
        tol = stop.tolerance(f)
        logger.info(
            f"{cfg.algo.upper()} start: n={self.problem.n} m={m} L={self.problem.L} "
            f"dagger={self.problem.dagger} f0={f:.6e} tol={tol:.3e}"
        )
        self.tracker.record(
            IterationTrace(
                iter=0, block=0, f=f, grad_f1=bundle.g1, grad_f2=bundle.g2,
                grad_f=bundle.norm, **point_stats(self.jacobi.u, self.jacobi.x),
            )
        )

        status = MAX_ITERS
        for k in range(1, stop.max_iters + 1):
            if bundle.norm <= tol:
                status = CONVERGED
                break
            if self.omega.norm > stop.norm_cap:
                logger.warning(f"||omega|| exceeded norm cap {stop.norm_cap:.3e}; stopping")
                status = DIVERGED
                break
            chosen = select_block(bundle, cfg.upsilon)
            info, block = None, chosen
            for block in (chosen, 3 - chosen):
                info = self._step_u(bundle) if block == 1 else self._step_x(bundle)
                if info is not None:
                    break
                logger.debug(f"Block {block} made no progress at iteration {k}")
            if info is None:
                logger.warning(f"Both blocks failed at iteration {k}; run stalled")
                status = STALLED
                break
            f_new = self.cost
            self.tracker.record(
                IterationTrace(
                    iter=k, block=block, f=f_new, grad_f1=bundle.g1, grad_f2=bundle.g2,
                    grad_f=bundle.norm, decrease=f - f_new,
                    block_ok=block_rule_holds(bundle, block, cfg.upsilon),
                    switched=block != chosen,
                    **info,
                    **point_stats(self.jacobi.u, self.jacobi.x),
                )
            )
            f = f_new
            bundle = self.bundle()
        else:
            if bundle.norm <= tol:
                status = CONVERGED

        result = RunResult(
            status=status,
            omega=self.omega,
            trace=self.tracker,
            final_cost=self.cost,
            final_grad={"grad_f1": bundle.g1, "grad_f2": bundle.g2, "grad_f": bundle.norm},
            grad_tol=tol,
            wall_time=time.perf_counter() - started,
            config=dict(self.tracker.meta),
        )
        logger.info(
            f"{cfg.algo.upper()} {status} after {result.iterations} iterations: "
            f"f={result.final_cost:.6e} ||grad f||={bundle.norm:.3e}"
        )
        return result


def run_bcd(
    problem: JadmProblem,
    omega0: JointPoint,
    config: Optional[BcdConfig] = None,
    tracker: Optional[Tracker] = None,
) -> RunResult:
    return BcdSolver(problem, omega0, config, tracker).run()


if __name__ == "__main__":
    from .instances import InstanceSpec, generate_instance

    logging.basicConfig(level=logging.INFO)
    problem, _ = generate_instance(InstanceSpec(n=6, m=4, L=5, seed=3))
    omega0 = JointPoint(np.eye(6)[:, :4], np.eye(4))
    run_bcd(problem, omega0, BcdConfig(family=RotationFamily("GLQ"), stop=StopRule(max_iters=300)))

# python -m jadm_bcd.BcdSolver

# EOF
