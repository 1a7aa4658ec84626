#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Timestamp: "2026-10-18 09:12:04 (ywatanabe)"
# File: /home/ywatanabe/proj/jadm_bcd/src/jadm_bcd/utils.py
# ----------------------------------------
from __future__ import annotations
import os
__FILE__ = (
    "./src/jadm_bcd/utils.py"
)
__DIR__ = os.path.dirname(__FILE__)
# ----------------------------------------

"""Shared helpers: exception hierarchy, response dicts and seeded RNG streams."""

from typing import Any, Dict, List, Optional, Sequence

import numpy as np


class JadmError(Exception):
    """Base class for every error raised by jadm_bcd."""


class DimensionError(JadmError, ValueError):
    """Shapes of the operands do not agree."""


class ManifoldError(JadmError, ValueError):
    """A point lies off its manifold beyond the repair window."""


class NotInRslError(ManifoldError):
    """A rectangular matrix Y does not satisfy det(Y^H Y) = 1."""


class ContractError(JadmError, ValueError):
    """A caller broke a precondition (wrong base point, bad parameter, non-descent direction)."""


class NumericalIntegrityError(JadmError, ArithmeticError):
    """An internal consistency check failed (cost increase, Gamma/c0 mismatch)."""


class StationaryPoint(JadmError):
    """Raised when the gradient that drives a selection step vanishes.

    Solvers catch it and stop; it is a signal rather than a failure.
    """


def format_response(
    success: bool, data: Any = None, error: Optional[str] = None
) -> Dict[str, Any]:
    """Format a harness result as {"success": ..., "result"|"error": ...}."""
    response: Dict[str, Any] = {"success": success}
    if success:
        if data is not None:
            response["result"] = data
    else:
        response["error"] = error or "Unknown error"
    return response


# Named substreams, in spawn order. Appending keeps earlier streams stable.
RNG_STREAMS = ("instance", "noise", "init", "oracle")


def spawn_rngs(
    seed: int, names: Sequence[str] = RNG_STREAMS
) -> Dict[str, np.random.Generator]:
    """Split one integer seed into independent PCG64 generators, one per name."""
    children = np.random.SeedSequence(int(seed)).spawn(len(names))
    return {
        name: np.random.Generator(np.random.PCG64(child))
        for name, child in zip(names, children)
    }


def complex_gaussian(
    rng: np.random.Generator, shape: Sequence[int], real: bool = False
) -> np.ndarray:
    """Standard complex Gaussian array (unit variance per entry)."""
    if real:
        return rng.standard_normal(shape).astype(np.complex128)
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / np.sqrt(2.0)


def to_pairs(a: np.ndarray) -> List:
    """Complex array -> nested lists with one [re, im] pair per entry."""
    a = np.asarray(a, dtype=np.complex128)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def from_pairs(data: Any) -> np.ndarray:
    """Inverse of to_pairs."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.shape[-1] != 2:
        raise DimensionError(
            f"Expected [re, im] pairs in the last axis, got shape {arr.shape}"
        )
    return arr[..., 0] + 1j * arr[..., 1]

# EOF
