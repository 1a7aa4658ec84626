#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 16:05:12 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/storage.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/storage.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""JSON files for problems, points and run reports.

Complex matrices are stored row-major with one [re, im] pair per entry.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict

import numpy as np

from .cost import JadmProblem, JointPoint
from .utils import DimensionError, from_pairs, to_pairs

logger = logging.getLogger(__name__)


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def write_json(data: Dict[str, Any], path: str) -> Path:
    path = Path(path).expanduser()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(data, f, indent=2, default=_jsonable)
    return path


def read_json(path: str) -> Dict[str, Any]:
    with open(Path(path).expanduser(), "r") as f:
        return json.load(f)


def problem_to_dict(problem: JadmProblem) -> Dict[str, Any]:
    return {
        "n": problem.n,
        "m": problem.m,
        "dagger": problem.dagger,
        "structured": problem.structured,
        "weights": problem.weights.tolist(),
        "matrices": to_pairs(problem.matrices),
    }


def problem_from_dict(data: Dict[str, Any]) -> JadmProblem:
    mats = from_pairs(data["matrices"])
    if mats.ndim != 3 or mats.shape[1:] != (data["n"], data["n"]):
        raise DimensionError(f"matrices have shape {mats.shape}, header says n={data['n']}")
    return JadmProblem(
        mats,
        data["weights"],
        data["m"],
        data.get("dagger", "H"),
        bool(data.get("structured", False)),
    )


def save_problem(problem: JadmProblem, path: str) -> Path:
    path = write_json(problem_to_dict(problem), path)
    logger.info(f"Problem (n={problem.n}, m={problem.m}, L={problem.L}) saved to {path}")
    return path


def load_problem(path: str) -> JadmProblem:
    problem = problem_from_dict(read_json(path))
    logger.info(f"Loaded problem n={problem.n} m={problem.m} L={problem.L} from {path}")
    return problem


def point_to_dict(omega: JointPoint) -> Dict[str, Any]:
    return {"U": to_pairs(omega.u.u), "X": to_pairs(omega.x.x)}


def save_point(omega: JointPoint, path: str) -> Path:
    return write_json(point_to_dict(omega), path)


def load_point(path: str) -> JointPoint:
    data = read_json(path)
    return JointPoint(from_pairs(data["U"]), from_pairs(data["X"]))

# EOF
