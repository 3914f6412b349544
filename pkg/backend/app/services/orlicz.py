"""
Closed-form Orlicz integrals of constant-on-disk functions and the
divergence ratios against Phi_0(t) = t (1 + log_+ t)
"""

import logging
import math
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ..config.workbench_constants import ORLICZ_GRID_POINTS
from ..domain.entities.maximal import CounterexampleFunction, OrliczFunction

logger = logging.getLogger(__name__)

PHI0 = OrliczFunction.phi0()


def orlicz_integral(phi: OrliczFunction, f: CounterexampleFunction, scale: float = 1.0) -> float:
    """Integral of Phi(scale * f) over the plane: |D| * Phi(scale * c)"""
    return f.support.area * phi(scale * f.value)


def validate_on_grid(phi: OrliczFunction, peak: float = 1.0, points: int = ORLICZ_GRID_POINTS,
                     tol: float = 1e-12) -> Dict[str, Any]:
    """Phi(0) = 0, nondecreasing and convex on [0, 10 * peak]"""
    grid = np.linspace(0.0, 10.0 * peak, points)
    values = np.asarray(phi(grid), dtype=float)
    scale = max(1.0, float(np.max(np.abs(values))))
    steps = np.diff(values)
    bends = np.diff(steps)
    result = {
        "zero_at_origin": abs(float(values[0])) <= tol,
        "nondecreasing": bool(np.all(steps >= -tol * scale)),
        "convex": bool(np.all(bends >= -tol * scale)),
    }
    result["valid"] = all(result.values())
    return result


def divergence_factors(phi: OrliczFunction, c_scale: float, c_k: float) -> Dict[str, float]:
    """
    Phi(C c_k) / Phi_0(C c_k), which tends to 0 when Phi = o(Phi_0), and
    Phi_0(C c_k) / Phi_0(c_k), which stays bounded
    """
    scaled = c_scale * c_k
    return {
        "phi_over_phi0": phi(scaled) / PHI0(scaled),
        "phi0_scaling": PHI0(scaled) / PHI0(c_k),
    }


def is_little_o_of_phi0(phi: OrliczFunction, t_grid: Optional[Sequence[float]] = None) -> Dict[str, Any]:
    """Numeric check: Phi(t) / Phi_0(t) strictly decreasing on a growing grid and at least halved"""
    grid = np.asarray(t_grid if t_grid is not None else np.logspace(1, 12, 12), dtype=float)
    ratios = np.asarray(phi(grid), dtype=float) / np.asarray(PHI0(grid), dtype=float)
    decreasing = bool(np.all(np.diff(ratios) < 0))
    return {
        "t": grid.tolist(),
        "ratios": ratios.tolist(),
        "decreasing": decreasing,
        "little_o": decreasing and ratios[-1] <= 0.5 * ratios[0],
    }


def divergence_ratio(phi: OrliczFunction, c_scale: float, c_k: float) -> float:
    """r_k = Phi_0(c_k) / Phi(C c_k); the disk measure cancels"""
    denominator = phi(c_scale * c_k)
    if denominator <= 0:
        return math.inf
    return PHI0(c_k) / denominator
