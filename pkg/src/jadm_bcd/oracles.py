#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 15:31:26 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/oracles.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/oracles.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""Independent evaluators used to validate the analytic formulas.

- ``independent_cost``: explicit-loop duplicate of the cost.
- ``fd_gradient_oracle``: central differences through an exponential map.
- ``grid_oracle``: exhaustive grid minimum of an elementary cost model.
- ``run_checks``: the whole suite at one point, as response dicts.
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .JacobiSolver import RotationFamily, select_rotation
from .cost import (
    JadmProblem,
    JointPoint,
    cost,
    cost_rsl,
    rgrad_u,
    rgrad_x,
    transform,
)
from .linalg import real_inner
from .manifolds import (
    SlTangentCoord,
    StiefelTangent,
    random_sl_tangent,
    random_stiefel_tangent,
    sl_exp,
    stiefel_exp,
)
from .rotations import (
    DIAGONAL,
    LOWER,
    PLANE,
    UPPER,
    Rotation2,
    best_rotation,
    build_gamma,
    diagonal_coeffs,
    elementary_derivative,
    minimize_diagonal,
    minimize_plane,
    minimize_triangular,
    rotated_cost,
    triangular_coeffs,
)
from .utils import ContractError, format_response, spawn_rngs

logger = logging.getLogger(__name__)


def independent_cost(problem: JadmProblem, omega: JointPoint) -> float:
    """Cost from explicit sums over entries; shares no code with cost()."""
    y = omega.u.u @ omega.x.x
    n, m = y.shape
    conj = problem.dagger == "H"
    total = 0.0
    for mu, a in zip(problem.weights, problem.matrices):
        for p in range(m):
            for q in range(m):
                if p == q:
                    continue
                acc = 0j
                for r in range(n):
                    left = np.conj(y[r, p]) if conj else y[r, p]
                    for s in range(n):
                        acc += left * a[r, s] * y[s, q]
                total += mu * abs(acc) ** 2
    return float(total)


def fd_gradient_oracle(
    cost_fn: Callable[[Any], float],
    point: Any,
    exp_map: Callable[[Any, Any, float], Any],
    directions: Sequence[Any],
    step: float = 1e-5,
    pairing: Optional[Callable[[Any], float]] = None,
) -> List[Dict[str, float]]:
    """Central differences of t -> cost(exp_map(point, direction, t)) at t = 0.

    With ``pairing`` (direction -> analytic directional derivative) each row
    also carries the absolute and relative error.
    """
    if not 1e-7 <= step <= 1e-3:
        raise ContractError(f"step must lie in [1e-7, 1e-3], got {step}")
    table = []
    for k, d in enumerate(directions):
        plus = cost_fn(exp_map(point, d, step))
        minus = cost_fn(exp_map(point, d, -step))
        row = {"index": k, "fd": (plus - minus) / (2.0 * step)}
        if pairing is not None:
            analytic = float(pairing(d))
            err = abs(row["fd"] - analytic)
            row.update(
                analytic=analytic,
                abs_err=err,
                rel_err=err / max(abs(analytic), abs(row["fd"]), 1e-12),
            )
        table.append(row)
    return table


def stiefel_curve(u, z: StiefelTangent, t: float):
    return stiefel_exp(u, StiefelTangent(t * z.z, u))


def sl_curve(x, omega: SlTangentCoord, t: float):
    return sl_exp(x, SlTangentCoord(t * omega.omega))


def _evaluate(fn, vectorized: bool):
    return fn if vectorized else np.vectorize(fn, otypes=[float])


def grid_oracle(
    fn: Callable,
    domain: str,
    resolution: float,
    vectorized: bool = True,
) -> Tuple[Tuple[float, ...], float]:
    """Exhaustive grid minimum of an elementary cost model.

    domain "triangular": fn(x, y) on [-5, 5]^2
    domain "diagonal":   fn(x) on a log-spaced grid over [0.1, 10]
    domain "plane":      fn(theta, phi) on [-pi/4, pi/4] x [0, 2 pi)
    """
    if resolution <= 0:
        raise ContractError(f"resolution must be positive, got {resolution}")
    f = _evaluate(fn, vectorized)
    if domain == "diagonal":
        xs = np.exp(np.arange(np.log(0.1), np.log(10.0) + resolution / 2, resolution))
        vals = f(xs)
        k = int(np.argmin(vals))
        return (float(xs[k]),), float(vals[k])
    if domain == "triangular":
        a = np.arange(-5.0, 5.0 + resolution / 2, resolution)
        b = a
    elif domain == "plane":
        a = np.arange(-np.pi / 4, np.pi / 4 + resolution / 2, resolution)
        b = np.arange(0.0, 2 * np.pi, resolution)
    else:
        raise ContractError(f"Unknown grid domain: {domain!r}")
    best_point, best_val = None, np.inf
    # row chunks keep memory bounded at fine resolutions
    chunk = max(1, int(2_000_000 // len(b)))
    for start in range(0, len(a), chunk):
        aa, bb = np.meshgrid(a[start:start + chunk], b, indexing="ij")
        vals = f(aa, bb)
        k = np.unravel_index(int(np.argmin(vals)), vals.shape)
        if vals[k] < best_val:
            best_val = float(vals[k])
            best_point = (float(aa[k]), float(bb[k]))
    return best_point, best_val


def elementary_fd(
    wset, weights, mode: str, pair: Tuple[int, int], kind: str, step: float = 1e-5
) -> np.ndarray:
    """Central-difference derivative of the elementary function at the identity.

    Same coordinates as rotations.elementary_derivative.
    """

    def along(make) -> float:
        plus = rotated_cost(wset, weights, make(step), mode)
        minus = rotated_cost(wset, weights, make(-step), mode)
        return (plus - minus) / (2.0 * step)

    if kind == UPPER:
        return np.array([along(lambda t: Rotation2.upper(t, pair)),
                         along(lambda t: Rotation2.upper(1j * t, pair))])
    if kind == LOWER:
        return np.array([along(lambda t: Rotation2.lower(t, pair)),
                         along(lambda t: Rotation2.lower(1j * t, pair))])
    if kind == DIAGONAL:
        return np.array([along(lambda t: Rotation2.diagonal(1.0 + t, pair)),
                         along(lambda t: Rotation2.diagonal(1.0 + 1j * t, pair))])
    if kind == PLANE:
        return np.array([0.0,
                         along(lambda t: Rotation2.plane(t, 0.0, pair)),
                         along(lambda t: Rotation2.plane(t, np.pi / 2, pair))])
    raise ValueError(f"Unknown rotation kind: {kind!r}")


# ---------------------------------------------------------------- check suite


def _max_rel(table: List[Dict[str, float]]) -> float:
    return max((row["rel_err"] for row in table), default=0.0)


def run_checks(
    problem: JadmProblem,
    omega: JointPoint,
    seed: int = 0,
    n_directions: int = 20,
    step: float = 1e-5,
    rel_tol: float = 1e-5,
    grid_resolution: float = 0.02,
) -> Dict[str, Any]:
    """Run every oracle at omega; one response dict per check."""
    rng = spawn_rngs(seed)["oracle"]
    w = transform(problem, omega)
    weights, mode, m = problem.weights, problem.dagger, problem.m
    results: Dict[str, Any] = {}

    def check(name: str, fn: Callable[[], Tuple[bool, Dict[str, Any]]]) -> None:
        try:
            ok, data = fn()
            results[name] = format_response(True, data) if ok else format_response(
                False, error=f"{name} failed: {data}"
            )
        except Exception as e:
            logger.warning(f"Check {name} raised: {e}")
            results[name] = format_response(False, error=str(e))

    def cost_paths():
        f = cost(problem, omega)
        g = independent_cost(problem, omega)
        h = cost_rsl(problem, omega.y)
        err = max(abs(f - g), abs(f - h)) / (1.0 + abs(f))
        return err <= 1e-12, {"cost": f, "independent": g, "rsl": h, "rel_err": err}

    def grad_u():
        grad = rgrad_u(problem, omega)
        dirs = [random_stiefel_tangent(rng, omega.u) for _ in range(n_directions)]
        table = fd_gradient_oracle(
            lambda u: cost(problem, JointPoint(u, omega.x)),
            omega.u, stiefel_curve, dirs, step,
            pairing=lambda d: real_inner(grad.z, d.z),
        )
        err = _max_rel(table)
        return err <= rel_tol, {"max_rel_err": err, "norm": grad.norm}

    def grad_x():
        lam = rgrad_x(problem, omega)
        dirs = [random_sl_tangent(rng, m) for _ in range(n_directions)]
        table = fd_gradient_oracle(
            lambda x: cost(problem, JointPoint(omega.u, x)),
            omega.x, sl_curve, dirs, step,
            pairing=lambda d: real_inner(lam.omega, d.omega),
        )
        err = _max_rel(table)
        return err <= rel_tol, {"max_rel_err": err, "norm": lam.norm}

    def elementary():
        if m < 2:
            return True, {"skipped": "m < 2"}
        lam = rgrad_x(problem, omega)
        worst = 0.0
        for pair in [(i, j) for i in range(m) for j in range(i + 1, m)]:
            for kind in (PLANE, UPPER, LOWER, DIAGONAL):
                an = elementary_derivative(lam, pair, kind)
                fd = elementary_fd(w, weights, mode, pair, kind, step)
                scale = max(np.linalg.norm(an), np.linalg.norm(fd), 1e-8)
                worst = max(worst, float(np.linalg.norm(an - fd) / scale))
        return worst <= rel_tol, {"max_rel_err": worst}

    def minimizers():
        if m < 2:
            return True, {"skipped": "m < 2"}
        pair = (0, 1)
        worst_pred, worst_grid = 0.0, 0.0
        f0 = rotated_cost(w, weights, Rotation2.identity(UPPER, pair), mode)
        for kind in (UPPER, LOWER, DIAGONAL, PLANE):
            best = best_rotation(w, weights, pair, kind, mode)
            realized = f0 - rotated_cost(w, weights, best.rotation, mode)
            worst_pred = max(worst_pred, abs(realized - best.decrease) / (1.0 + f0))
        for role in (UPPER, LOWER):
            c = triangular_coeffs(w, weights, pair, role, mode)
            _, val = grid_oracle(c.model, "triangular", grid_resolution)
            worst_grid = max(worst_grid, -minimize_triangular(c).decrease - val)
        dc = diagonal_coeffs(w, weights, pair)
        dmin = minimize_diagonal(dc, 0.1)
        # clamped branches are not minimizers of the model
        if dmin.branch == "interior":
            _, val = grid_oracle(dc.model, "diagonal", grid_resolution)
            worst_grid = max(worst_grid, -dmin.decrease - val)
        gf = build_gamma(w, weights, pair, mode)
        pmin = minimize_plane(gf, 0.1)
        if pmin.branch != "fallback":
            _, val = grid_oracle(gf.model, "plane", grid_resolution)
            worst_grid = max(worst_grid, -pmin.decrease - val)
        ok = worst_pred <= 1e-8 and worst_grid <= 1e-6
        return ok, {"prediction_err": worst_pred, "grid_gap": worst_grid}

    def selection():
        if m < 2:
            return True, {"skipped": "m < 2"}
        lam = rgrad_x(problem, omega)
        if lam.norm == 0.0:
            return True, {"stationary": True}
        out = {}
        for name in ("GLU", "GLQ"):
            fam = RotationFamily(name)
            sel = select_rotation(lam, fam, m)
            out[name] = {
                "pair": list(sel.pair),
                "kind": sel.kind,
                "ratio_sq": (sel.deriv_norm / sel.lambda_norm) ** 2,
                "bound": fam.bound(m),
            }
        ok = all(v["ratio_sq"] >= v["bound"] * (1 - 1e-12) for v in out.values())
        return ok, out

    check("cost_paths", cost_paths)
    check("rgrad_u", grad_u)
    check("rgrad_x", grad_x)
    check("elementary_derivatives", elementary)
    check("minimizers", minimizers)
    check("selection_bound", selection)
    results["passed"] = all(r["success"] for r in results.values() if isinstance(r, dict))
    return results

# EOF
