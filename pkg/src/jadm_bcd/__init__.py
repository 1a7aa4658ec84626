#!/usr/bin/env python3
"""
jadm-bcd - Joint approximate diagonalization on St(m, n) x SL_m by block coordinate descent
"""

from .BcdSolver import BcdConfig, BcdSolver, run_bcd
from .JacobiSolver import JacobiSolver, RotationFamily, RunResult, StopRule, run_jacobi
from .LineSearch import LineSearch, LineSearchParams
from .Tracker import IterationTrace, Tracker
from .cost import JadmProblem, JointPoint, cost
from .instances import InstanceSpec, generate_instance, initial_point
from .manifolds import SlPoint, StiefelPoint

__version__ = "0.1.0"
__all__ = [
    "BcdConfig",
    "BcdSolver",
    "InstanceSpec",
    "IterationTrace",
    "JacobiSolver",
    "JadmProblem",
    "JointPoint",
    "LineSearch",
    "LineSearchParams",
    "RotationFamily",
    "RunResult",
    "SlPoint",
    "StiefelPoint",
    "StopRule",
    "Tracker",
    "cost",
    "generate_instance",
    "initial_point",
    "run_bcd",
    "run_jacobi",
]
