#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 09:20:41 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/linalg.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/linalg.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""Dense complex matrix helpers consumed by every other module.

Matrices are plain ``numpy`` complex128 arrays. Functions that accept a
stack of matrices operate on the last two axes.
"""

import numpy as np
import scipy.linalg

from .utils import DimensionError


def as_cmat(a, name: str = "matrix") -> np.ndarray:
    """Copy user input into a finite complex128 array."""
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim < 2:
        raise DimensionError(f"{name} must be at least 2-D, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def _require_square(a: np.ndarray, name: str = "matrix") -> None:
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")


def real_inner(x: np.ndarray, y: np.ndarray) -> float:
    """Re(trace(x^H y)), the real inner product on complex matrices."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise DimensionError(f"Shape mismatch: {x.shape} vs {y.shape}")
    return float(np.real(np.vdot(x, y)))


def offdiag(w: np.ndarray) -> np.ndarray:
    """Copy of w with its diagonal zeroed (batched over leading axes)."""
    w = np.asarray(w)
    _require_square(w, "offdiag input")
    mask = 1.0 - np.eye(w.shape[-1])
    return w * mask


def offdiag_energy(w: np.ndarray) -> np.ndarray:
    """||offdiag(w)||^2, one value per matrix in the stack."""
    d = offdiag(w)
    return np.sum(np.abs(d) ** 2, axis=(-2, -1))


def mat_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling and squaring with Pade, via scipy)."""
    a = np.asarray(a)
    _require_square(a, "mat_exp input")
    return scipy.linalg.expm(a)


def herm(a: np.ndarray) -> np.ndarray:
    """Hermitian part (a + a^H) / 2."""
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def dagger(a: np.ndarray, mode: str) -> np.ndarray:
    """Conjugate transpose for mode "H", plain transpose for mode "T"."""
    t = np.swapaxes(a, -1, -2)
    if mode == "H":
        return np.conj(t)
    if mode == "T":
        return t
    raise ValueError(f"Unknown dagger mode: {mode!r}")


def cond(a: np.ndarray) -> float:
    """2-norm condition number."""
    return float(np.linalg.cond(a))

# EOF
