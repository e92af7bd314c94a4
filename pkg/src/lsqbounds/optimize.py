"""One-dimensional infimum search on an open interval.

Strategy: a coarse log-spaced scan brackets the minimum, then golden-section
refinement tightens the bracket to a relative tolerance.  Objectives signal
infeasibility by returning +inf or nan at a point; an objective that is
infeasible at every scan point raises NoFinitePointError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
ENDPOINT_GUARD = 1e-9  # relative inset from the open-interval endpoints
DEFAULT_SCAN_POINTS = 4096
DEFAULT_REL_TOL = 1e-6


class NoFinitePointError(RuntimeError):
    """Every scanned point of the objective was infeasible."""


@dataclass(frozen=True)
class InfimumResult:
    value: float
    argmin: float


def _eval(objective: Callable, s: float) -> float:
    v = objective(s)
    v = float(v)
    if math.isnan(v):
        return math.inf
    return v


def infimum_1d(
    objective: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = DEFAULT_REL_TOL,
    scan_points: int = DEFAULT_SCAN_POINTS,
) -> InfimumResult:
    """Approximate the infimum of ``objective`` over the open interval (lo, hi).

    The objective may be vectorized over numpy arrays (used for the scan) but
    only scalar evaluation is required.  Accurate for unimodal objectives;
    for multimodal ones the result is an upper bound on the infimum attained
    at a local minimum.
    """
    if not (hi > lo):
        raise ValueError(f"empty interval ({lo}, {hi})")
    width = hi - lo
    a = lo + width * ENDPOINT_GUARD
    b = hi - width * ENDPOINT_GUARD

    # Log-spaced scan relative to the left endpoint so that minima many
    # decades below the interval width are still bracketed.
    offsets = np.geomspace(a - lo, b - lo, scan_points)
    grid = lo + offsets
    try:
        values = np.asarray(objective(grid), dtype=float)
        if values.shape != grid.shape:
            raise TypeError
    except (TypeError, ValueError):
        values = np.array([_eval(objective, s) for s in grid])
    values = np.where(np.isnan(values), np.inf, values)

    if not np.any(np.isfinite(values)):
        raise NoFinitePointError(
            f"objective has no finite value on ({lo}, {hi}) at {scan_points} scan points"
        )

    k = int(np.argmin(values))
    left = float(grid[k - 1]) if k > 0 else a
    right = float(grid[k + 1]) if k < len(grid) - 1 else b
    return _golden_section(objective, left, right, float(grid[k]), float(values[k]), rel_tol)


def _golden_section(
    objective: Callable,
    left: float,
    right: float,
    best_x: float,
    best_f: float,
    rel_tol: float,
) -> InfimumResult:
    """Golden-section refinement inside [left, right]; infeasible probes shrink
    the bracket toward the feasible side."""
    x1 = right - GOLDEN * (right - left)
    x2 = left + GOLDEN * (right - left)
    f1 = _eval(objective, x1)
    f2 = _eval(objective, x2)
    scale = max(abs(left), abs(right), 1e-300)
    while (right - left) > rel_tol * scale:
        if f1 <= f2:
            right, x2, f2 = x2, x1, f1
            x1 = right - GOLDEN * (right - left)
            f1 = _eval(objective, x1)
        else:
            left, x1, f1 = x1, x2, f2
            x2 = left + GOLDEN * (right - left)
            f2 = _eval(objective, x2)
    for x, f in ((x1, f1), (x2, f2)):
        if f < best_f:
            best_x, best_f = x, f
    return InfimumResult(value=float(best_f), argmin=float(best_x))
