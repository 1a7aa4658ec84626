#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 11:48:09 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/Tracker.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/Tracker.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""Iteration trace recorder shared by the Jacobi and BCD solvers.

Row 0 is the initial state. Row k >= 1 holds the gradient norms measured at
omega_{k-1} (the ones that drove the choice of block and rotation), the cost
after step k and the decrease f_{k-1} - f_k.
"""

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass, fields
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "iter",
    "block",
    "i",
    "j",
    "kind",
    "f",
    "grad_f1",
    "grad_f2",
    "grad_f",
    "step_size",
    "decrease",
    "norm_U",
    "norm_X",
    "cond_X",
)


@dataclass
class IterationTrace:
    iter: int
    block: int
    f: float
    grad_f1: Optional[float]
    grad_f2: float
    grad_f: float
    norm_U: float
    norm_X: float
    cond_X: float
    i: Optional[int] = None
    j: Optional[int] = None
    kind: str = ""
    step_size: float = 0.0
    decrease: float = 0.0
    # monitors, kept out of the CSV
    predicted: Optional[float] = None
    branch: str = ""
    deriv_norm: Optional[float] = None
    selection_ok: Optional[bool] = None
    block_ok: Optional[bool] = None
    switched: bool = False
    armijo_ok: Optional[bool] = None
    shrink_ok: Optional[bool] = None
    decrease_slack: Optional[float] = None
    movement: float = 0.0
    det_drift: float = 0.0
    orth_drift: float = 0.0

    def csv_row(self) -> List[Any]:
        return [getattr(self, name) for name in CSV_COLUMNS]


class Tracker:
    """Append-only trace of one solver run."""

    def __init__(self, meta: Optional[Dict[str, Any]] = None):
        self.meta: Dict[str, Any] = dict(meta or {})
        self.rows: List[IterationTrace] = []
        self.session_start = datetime.now()

    def __len__(self) -> int:
        return len(self.rows)

    def record(self, row: IterationTrace) -> IterationTrace:
        self.rows.append(row)
        logger.debug(
            f"iter={row.iter} block={row.block} kind={row.kind or '-'} "
            f"f={row.f:.6e} grad_f={row.grad_f:.3e} decrease={row.decrease:.3e}"
        )
        return row

    @property
    def last(self) -> IterationTrace:
        return self.rows[-1]

    def column(self, name: str) -> np.ndarray:
        if name not in {f.name for f in fields(IterationTrace)}:
            raise KeyError(f"Unknown trace column: {name}")
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    def steps(self) -> List[IterationTrace]:
        return self.rows[1:]

    def tail_movement(self, fraction: float = 0.1) -> float:
        """Sum of ||omega_{k+1} - omega_k|| over the last fraction of steps."""
        steps = self.steps()
        if not steps:
            return 0.0
        count = max(1, int(np.ceil(fraction * len(steps))))
        return float(sum(r.movement for r in steps[-count:]))

    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow(row.csv_row())
        return buf.getvalue()

    def save_csv(self, path: str) -> Path:
        path = Path(path).expanduser()
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.csv_text(), encoding="utf-8")
        logger.info(f"Trace with {len(self.rows)} rows written to {path}")
        return path

    def to_dict(self) -> Dict[str, Any]:
        return {
            "meta": self.meta,
            "session_start": self.session_start.isoformat(),
            "rows": [asdict(r) for r in self.rows],
        }

    def save_json(self, path: str) -> Path:
        path = Path(path).expanduser()
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=2)
        return path

    def violations(self, rel_tol: float = 1e-8) -> Dict[str, int]:
        """Count monitored inequalities that failed over the run."""
        steps = self.steps()
        counts = {
            "increase": sum(1 for r in steps if r.decrease < -rel_tol * (1.0 + r.f)),
            "block_rule": sum(1 for r in steps if r.block_ok is False),
            "selection": sum(1 for r in steps if r.selection_ok is False),
            "armijo": sum(1 for r in steps if r.armijo_ok is False),
            "shrink": sum(1 for r in steps if r.shrink_ok is False),
            "prediction": 0,
        }
        for r in steps:
            if r.block == 2 and r.predicted is not None:
                if abs(r.predicted - r.decrease) > rel_tol * (1.0 + r.f):
                    counts["prediction"] += 1
        return counts

    def summary(self) -> Dict[str, Any]:
        if not self.rows:
            return {"iterations": 0}
        first, last = self.rows[0], self.rows[-1]
        blocks = [r.block for r in self.steps()]
        return {
            "iterations": len(self.rows) - 1,
            "initial_cost": first.f,
            "final_cost": last.f,
            "block1_steps": blocks.count(1),
            "block2_steps": blocks.count(2),
            "max_det_drift": max(r.det_drift for r in self.rows),
            "max_orth_drift": max(r.orth_drift for r in self.rows),
            "violations": self.violations(),
        }

# EOF
