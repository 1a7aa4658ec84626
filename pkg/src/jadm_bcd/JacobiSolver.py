#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 12:35:51 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/JacobiSolver.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/JacobiSolver.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""Jacobi-type descent on SL_m(C) with the first block U held fixed.

GLU and GLQ only ever apply a (pair, kind) whose elementary derivative
satisfies ||d nu|| >= epsilon ||Lambda||. Among those admissible candidates
the default "decrease" selection applies the one whose closed-form
minimizer lowers the cost most; "derivative" selection applies the one
with the largest derivative. CLU and CLQ sweep the pairs in row-cyclic
order and keep the best of the three kinds for the current pair.
"""

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .Tracker import IterationTrace, Tracker
from .cost import (
    JadmProblem,
    JointPoint,
    congruence,
    cost_from_w,
    lambda_from_w,
    reduce_problem,
)
from .linalg import cond
from .manifolds import SlPoint, SlTangentCoord, StiefelPoint
from .rotations import (
    DIAGONAL,
    LOWER,
    PLANE,
    UPPER,
    Minimizer,
    apply_rotation,
    best_rotation,
    elementary_derivative,
)
from .utils import ContractError, NumericalIntegrityError, StationaryPoint

logger = logging.getLogger(__name__)

CONVERGED = "converged"
MAX_ITERS = "max_iters"
STALLED = "stalled"
DIVERGED = "diverged"
STATUSES = (CONVERGED, MAX_ITERS, STALLED, DIVERGED)

FAMILY_KINDS = {
    "GLU": (UPPER, LOWER, DIAGONAL),
    "GLQ": (PLANE, LOWER, DIAGONAL),
    "CLU": (UPPER, LOWER, DIAGONAL),
    "CLQ": (PLANE, LOWER, DIAGONAL),
}
SELECTIONS = ("decrease", "derivative")


def glu_bound(m: int) -> float:
    """Guaranteed ratio ||d nu||^2 / ||Lambda||^2 for the upper/lower/diagonal family."""
    return 2.0 / (3.0 * m * (m - 1)) if m > 1 else float("inf")


def glq_bound(m: int) -> float:
    """Guaranteed ratio for the plane/lower/diagonal family."""
    return (3.0 - np.sqrt(5.0)) / (3.0 * m * (m - 1)) if m > 1 else float("inf")


def glq_stated_bound(m: int) -> float:
    """The larger GLQ constant (3 + sqrt 5) / (3 m (m-1)), kept for reporting only."""
    return (3.0 + np.sqrt(5.0)) / (3.0 * m * (m - 1)) if m > 1 else float("inf")


@dataclass
class RotationFamily:
    family: str = "GLU"
    epsilon: Optional[float] = None
    sigma_var: float = 0.1
    epsilon_inner: float = 0.1
    selection: str = "decrease"

    def __post_init__(self):
        self.family = self.family.upper()
        if self.family not in FAMILY_KINDS:
            raise ContractError(f"Unknown rotation family: {self.family!r}")
        if self.selection not in SELECTIONS:
            raise ContractError(
                f"selection must be one of {SELECTIONS}, got {self.selection!r}"
            )
        if not 0 < self.sigma_var < 0.25:
            raise ContractError(f"sigma_var must lie in (0, 1/4), got {self.sigma_var}")
        if self.epsilon_inner <= 0:
            raise ContractError(f"epsilon_inner must be positive, got {self.epsilon_inner}")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ContractError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def kinds(self) -> Tuple[str, ...]:
        return FAMILY_KINDS[self.family]

    @property
    def cyclic(self) -> bool:
        return self.family.startswith("C")

    def bound(self, m: int) -> float:
        return glu_bound(m) if self.kinds[0] == UPPER else glq_bound(m)

    def epsilon_for(self, m: int) -> float:
        limit = np.sqrt(self.bound(m))
        if self.epsilon is None:
            return 0.5 * limit if m > 1 else 0.0
        if self.epsilon >= limit:
            raise ContractError(
                f"epsilon={self.epsilon} must be below sqrt(bound)={limit:.6g} for m={m}"
            )
        return float(self.epsilon)

    def constants(self, m: int) -> Dict[str, float]:
        out = {"epsilon": self.epsilon_for(m), "bound": self.bound(m)}
        if self.kinds[0] == PLANE:
            out["stated_bound"] = glq_stated_bound(m)
        return out


@dataclass
class SelectionResult:
    pair: Tuple[int, int]
    kind: str
    deriv_norm: float
    lambda_norm: float
    satisfied: Optional[bool] = None


def candidate_norms(lam: np.ndarray, kinds: Tuple[str, ...]) -> Tuple[np.ndarray, np.ndarray]:
    """Derivative norms of every (pair, kind), pairs in lexicographic order.

    Returns (pairs P x 2, norms P x len(kinds)).
    """
    m = lam.shape[0]
    iu, ju = np.triu_indices(m, 1)
    a, b = lam[iu, ju], lam[ju, iu]
    dd = np.diag(lam)[iu] - np.diag(lam)[ju]
    table = {
        PLANE: np.hypot((a - b).real, (a + b).imag),
        UPPER: np.abs(a),
        LOWER: np.abs(b),
        DIAGONAL: np.abs(dd),
    }
    return np.stack([iu, ju], axis=1), np.stack([table[k] for k in kinds], axis=1)


def select_rotation(lam, family: RotationFamily, m: int) -> SelectionResult:
    """Largest elementary derivative; ties go to the first pair, then kind order."""
    lam = lam.omega if isinstance(lam, SlTangentCoord) else np.asarray(lam)
    lam_norm = float(np.linalg.norm(lam))
    if lam_norm == 0.0 or m < 2:
        raise StationaryPoint("Lambda vanishes; no rotation can decrease the cost")
    pairs, norms = candidate_norms(lam, family.kinds)
    flat = int(np.argmax(norms))
    p, k = divmod(flat, len(family.kinds))
    pair = (int(pairs[p, 0]), int(pairs[p, 1]))
    kind = family.kinds[k]
    deriv = float(np.linalg.norm(elementary_derivative(lam, pair, kind)))
    eps = family.epsilon_for(m)
    return SelectionResult(pair, kind, deriv, lam_norm, deriv >= eps * lam_norm)


def admissible_candidates(lam, family: RotationFamily, m: int) -> List[SelectionResult]:
    """Every (pair, kind) with ||d nu|| >= epsilon ||Lambda||, in tie-break order."""
    lam = lam.omega if isinstance(lam, SlTangentCoord) else np.asarray(lam)
    lam_norm = float(np.linalg.norm(lam))
    if lam_norm == 0.0 or m < 2:
        raise StationaryPoint("Lambda vanishes; no rotation can decrease the cost")
    pairs, norms = candidate_norms(lam, family.kinds)
    floor = family.epsilon_for(m) * lam_norm
    return [
        SelectionResult(
            (int(pairs[p, 0]), int(pairs[p, 1])), kind, float(norms[p, k]), lam_norm, True
        )
        for p in range(len(pairs))
        for k, kind in enumerate(family.kinds)
        if norms[p, k] > 0.0 and norms[p, k] >= floor
    ]


@dataclass
class StopRule:
    grad_tol: Optional[float] = None
    max_iters: int = 5000
    norm_cap: float = 1e6

    def __post_init__(self):
        if self.max_iters < 0:
            raise ContractError(f"max_iters must be >= 0, got {self.max_iters}")
        if self.norm_cap <= 0:
            raise ContractError(f"norm_cap must be positive, got {self.norm_cap}")
        if self.grad_tol is not None and self.grad_tol < 0:
            raise ContractError(f"grad_tol must be >= 0, got {self.grad_tol}")

    def tolerance(self, f0: float) -> float:
        return self.grad_tol if self.grad_tol is not None else 1e-10 * (1.0 + f0)


@dataclass
class JacobiStep:
    minimizer: Minimizer
    selection: SelectionResult
    f_before: float
    f_after: float
    movement: float

    @property
    def decrease(self) -> float:
        return self.f_before - self.f_after

    @property
    def rotation(self):
        return self.minimizer.rotation


@dataclass
class RunResult:
    status: str
    omega: JointPoint
    trace: Tracker
    final_cost: float
    final_grad: Dict[str, float]
    grad_tol: float
    wall_time: float = 0.0
    config: Dict[str, Any] = field(default_factory=dict)

    @property
    def iterations(self) -> int:
        return len(self.trace) - 1

    def report(self) -> Dict[str, Any]:
        return {
            "config": self.config,
            "status": self.status,
            "iterations": self.iterations,
            "final_cost": self.final_cost,
            "final_grad": self.final_grad,
            "grad_tol": self.grad_tol,
            "wall_time": self.wall_time,
            "summary": self.trace.summary(),
            "trace": [asdict(r) for r in self.trace.rows],
        }


class JacobiSolver:
    """Owns X and the cache W_l = X^dag B_l X for a fixed U."""

    RECOMPUTE_EVERY = 50

    def __init__(
        self,
        problem: JadmProblem,
        u: StiefelPoint,
        x: SlPoint,
        family: Optional[RotationFamily] = None,
    ):
        self.problem = problem
        self.family = family or RotationFamily()
        self.x = x
        self._since_refresh = 0
        self._cursor = 0
        self.pairs: List[Tuple[int, int]] = [
            (i, j) for i in range(problem.m) for j in range(i + 1, problem.m)
        ]
        self.set_u(u)

    def set_u(self, u: StiefelPoint) -> None:
        """Install a new first block; B and W are rebuilt."""
        self.u = u
        self.reduced = reduce_problem(self.problem, u)
        self.refresh()

    def refresh(self) -> None:
        self.w = congruence(self.reduced.matrices, self.x.x, self.problem.dagger)
        self._since_refresh = 0

    @property
    def cost(self) -> float:
        return cost_from_w(self.w, self.problem.weights)

    def lam(self) -> SlTangentCoord:
        return SlTangentCoord(
            lambda_from_w(self.w, self.problem.weights, self.problem.dagger)
        )

    def _best(self, pair, kind) -> Minimizer:
        return best_rotation(
            self.w,
            self.problem.weights,
            pair,
            kind,
            self.problem.dagger,
            sigma_var=self.family.sigma_var,
            epsilon_inner=self.family.epsilon_inner,
        )

    def _greedy(self, lam: SlTangentCoord) -> Tuple[Minimizer, SelectionResult]:
        m = self.problem.m
        candidates = []
        if self.family.selection == "decrease":
            candidates = admissible_candidates(lam, self.family, m)
        if not candidates:
            sel = select_rotation(lam, self.family, m)
            return self._best(sel.pair, sel.kind), sel
        best, best_sel = None, None
        for sel in candidates:
            cand = self._best(sel.pair, sel.kind)
            if best is None or cand.decrease > best.decrease:
                best, best_sel = cand, sel
        return best, best_sel

    def propose(self, lam: Optional[SlTangentCoord] = None) -> Tuple[Minimizer, SelectionResult]:
        lam = lam if lam is not None else self.lam()
        m = self.problem.m
        if not self.family.cyclic:
            return self._greedy(lam)
        if lam.norm == 0.0 or m < 2:
            raise StationaryPoint("Lambda vanishes; no rotation can decrease the cost")
        pair = self.pairs[self._cursor % len(self.pairs)]
        self._cursor += 1
        best, best_kind = None, None
        for kind in self.family.kinds:
            cand = self._best(pair, kind)
            if best is None or cand.decrease > best.decrease:
                best, best_kind = cand, kind
        deriv = float(np.linalg.norm(elementary_derivative(lam, pair, best_kind)))
        return best, SelectionResult(pair, best_kind, deriv, lam.norm, None)

    def apply(self, minimizer: Minimizer, selection: SelectionResult) -> JacobiStep:
        """X <- X V and the matching update of W (two rows and two columns)."""
        rot = minimizer.rotation
        f_before = self.cost
        idx = list(rot.pair)
        x_new = self.x.x.copy()
        x_new[:, idx] = x_new[:, idx] @ rot.psi
        new = SlPoint(x_new)
        movement = float(np.linalg.norm(new.x - self.x.x))
        self.x = new
        self._since_refresh += 1
        if new.repaired or self._since_refresh >= self.RECOMPUTE_EVERY:
            self.refresh()
        else:
            apply_rotation(self.w, rot, self.problem.dagger, out=self.w)
        f_after = self.cost
        if f_after > f_before + 1e-10 * (1.0 + f_before):
            raise NumericalIntegrityError(
                f"{rot.kind} rotation at {rot.pair} increased the cost "
                f"from {f_before:.12e} to {f_after:.12e}"
            )
        step = JacobiStep(minimizer, selection, f_before, f_after, movement)
        if abs(step.decrease - minimizer.decrease) > 1e-8 * (1.0 + f_after):
            logger.warning(
                f"Predicted decrease {minimizer.decrease:.6e} differs from "
                f"realized {step.decrease:.6e} ({rot.kind} at {rot.pair})"
            )
        return step

    def step(self, lam: Optional[SlTangentCoord] = None) -> JacobiStep:
        """One Jacobi-G (or cyclic) rotation; raises StationaryPoint at Lambda = 0."""
        minimizer, selection = self.propose(lam)
        return self.apply(minimizer, selection)


def point_stats(u: StiefelPoint, x: SlPoint) -> Dict[str, float]:
    return {
        "norm_U": float(np.linalg.norm(u.u)),
        "norm_X": float(np.linalg.norm(x.x)),
        "cond_X": cond(x.x),
        "orth_drift": float(np.linalg.norm(u.u.conj().T @ u.u - np.eye(u.m))),
        "det_drift": float(abs(np.linalg.det(x.x) - 1.0)),
    }


def run_jacobi(
    problem: JadmProblem,
    omega0: JointPoint,
    family: Optional[RotationFamily] = None,
    stop: Optional[StopRule] = None,
    tracker: Optional[Tracker] = None,
) -> RunResult:
    """Jacobi-GLU/GLQ/CLU/CLQ on X with U = omega0.u frozen."""
    family = family or RotationFamily()
    stop = stop or StopRule()
    tracker = tracker if tracker is not None else Tracker()
    m = problem.m
    tracker.meta.update(
        {
            "algo": f"jacobi-{family.family.lower()}",
            "selection": family.selection,
            **family.constants(m),
        }
    )
    started = time.perf_counter()

    solver = JacobiSolver(problem, omega0.u, omega0.x, family)
    f = solver.cost
    lam = solver.lam()
    g = lam.norm
    tol = stop.tolerance(f)
    logger.info(
        f"Jacobi-{family.family} start: n={problem.n} m={m} L={problem.L} "
        f"dagger={problem.dagger} f0={f:.6e} tol={tol:.3e}"
    )
    tracker.record(
        IterationTrace(
            iter=0, block=2, f=f, grad_f1=None, grad_f2=g, grad_f=g,
            **point_stats(solver.u, solver.x),
        )
    )

    status = MAX_ITERS
    for k in range(1, stop.max_iters + 1):
        if g <= tol:
            status = CONVERGED
            break
        if np.linalg.norm(solver.x.x) > stop.norm_cap:
            logger.warning(f"||X|| exceeded norm cap {stop.norm_cap:.3e}; stopping")
            status = DIVERGED
            break
        try:
            step = solver.step(lam)
        except StationaryPoint:
            status = STALLED
            break
        if step.minimizer.decrease == 0.0 and step.rotation.size == 0.0 and not family.cyclic:
            logger.warning("Selected rotation is the identity; run stalled")
            status = STALLED
            break
        lam = solver.lam()
        sel = step.selection
        tracker.record(
            IterationTrace(
                iter=k, block=2, f=step.f_after, grad_f1=None, grad_f2=g, grad_f=g,
                i=sel.pair[0], j=sel.pair[1], kind=sel.kind,
                step_size=step.rotation.size, decrease=step.decrease,
                predicted=step.minimizer.decrease, branch=step.minimizer.branch,
                deriv_norm=sel.deriv_norm, selection_ok=sel.satisfied,
                movement=step.movement,
                **point_stats(solver.u, solver.x),
            )
        )
        g = lam.norm
    else:
        if g <= tol:
            status = CONVERGED

    omega = JointPoint(solver.u, solver.x)
    result = RunResult(
        status=status,
        omega=omega,
        trace=tracker,
        final_cost=solver.cost,
        final_grad={"grad_f1": None, "grad_f2": g, "grad_f": g},
        grad_tol=tol,
        wall_time=time.perf_counter() - started,
        config=dict(tracker.meta),
    )
    logger.info(
        f"Jacobi-{family.family} {status} after {result.iterations} iterations: "
        f"f={result.final_cost:.6e} ||Lambda||={g:.3e}"
    )
    return result


if __name__ == "__main__":
    from .instances import InstanceSpec, generate_instance

    logging.basicConfig(level=logging.INFO)
    problem, _ = generate_instance(InstanceSpec(n=4, m=4, L=3, seed=1))
    omega0 = JointPoint(np.eye(4), np.eye(4))
    run_jacobi(problem, omega0, RotationFamily("GLQ"), StopRule(max_iters=500))

# python -m jadm_bcd.JacobiSolver

# EOF
