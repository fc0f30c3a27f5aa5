"""Bounded one-dimensional minimization used by the Chernoff and bath searches."""
from __future__ import annotations

import math

import numpy as np

from .errors import OptimizationError

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f, lo, hi, *, xtol=1e-9, maxiter=200):
    """Minimize ``f`` on ``[lo, hi]`` by golden-section search.

    Returns ``(x, fx)``. The bracket endpoints are never evaluated.
    """
    if not hi > lo:
        raise OptimizationError(f"empty bracket [{lo}, {hi}]")
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(maxiter):
        if hi - lo <= xtol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
    else:
        raise OptimizationError(f"golden section did not reach xtol={xtol} in {maxiter} steps")
    if not (math.isfinite(f1) and math.isfinite(f2)):
        raise OptimizationError("objective returned a non-finite value")
    return (x1, f1) if f1 <= f2 else (x2, f2)


def prescan_minimize(f, lo, hi, *, points=21, xtol=1e-9):
    """Global-ish bounded minimization: coarse grid, then golden refinement.

    The golden search runs inside the two grid cells around the best grid
    point, so a second local minimum elsewhere cannot capture the search.

    Returns ``(x, fx, n_local_minima)`` where the last item counts interior
    local minima seen on the grid.
    """
    grid = np.linspace(lo, hi, points)
    vals = np.array([f(x) for x in grid])
    if not np.all(np.isfinite(vals)):
        raise OptimizationError("objective returned a non-finite value on the prescan grid")
    i = int(np.argmin(vals))
    inner = vals[1:-1]
    n_local = int(np.sum((inner < vals[:-2]) & (inner < vals[2:])))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, points - 1)]
    x, fx = golden_section(f, a, b, xtol=xtol)
    if vals[i] < fx:
        x, fx = grid[i], vals[i]
    return float(x), float(fx), n_local
