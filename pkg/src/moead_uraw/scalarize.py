"""Scalarizing functions and weight-space transformations.

The decomposition scalarizes each subproblem with the weighted Chebyshev
distance to the reference point. Two closed-form maps between objective
vectors and weights complete the picture: the optimal Chebyshev weight for a
given solution, and the reciprocal-normalize transformation between a
subproblem's weight and its solution-mapping direction.
"""

from __future__ import annotations

import numpy as np

from .core import DegeneratePoint, DimensionMismatch, validate_weight

# Components below this floor are raised before the reciprocal transform;
# extreme weights such as (1, 0, ..., 0) appear by construction and the
# transform divides by every component.
WS_COMPONENT_FLOOR = 1e-6


def tchebycheff(f, weight, z_star) -> float:
    """Weighted Chebyshev scalarization: max_j w_j * |f_j - z*_j|."""
    f = np.asarray(f, dtype=float)
    weight = np.asarray(weight, dtype=float)
    z_star = np.asarray(z_star, dtype=float)
    if not (f.shape == weight.shape == z_star.shape):
        raise DimensionMismatch(
            f"shapes differ: f {f.shape}, weight {weight.shape}, z* {z_star.shape}"
        )
    return float(np.max(weight * np.abs(f - z_star)))


def optimal_tch_weight(f, z_star) -> np.ndarray:
    """Weight under which ``f`` is the Chebyshev-optimal solution.

    Components are the objective gaps to the reference point, normalized to
    sum to 1, which makes (f_j - z*_j) / w_j constant across objectives.

    Raises:
        ValueError: some gap is negative (f below the reference point).
        DegeneratePoint: all gaps are zero.
    """
    f = np.asarray(f, dtype=float)
    z_star = np.asarray(z_star, dtype=float)
    if f.shape != z_star.shape:
        raise DimensionMismatch(f"shapes {f.shape} and {z_star.shape} differ")
    gaps = f - z_star
    if np.any(gaps < 0.0):
        raise ValueError("objective vector lies below the reference point")
    total = gaps.sum()
    if total == 0.0:
        raise DegeneratePoint("all objectives coincide with the reference point")
    return gaps / total


def ws_transform(weight, floor: float = WS_COMPONENT_FLOOR) -> np.ndarray:
    """Reciprocal-normalize map between weight and solution-mapping vectors.

    Components below ``floor`` are raised to it and the vector renormalized
    before taking reciprocals. On strictly positive inputs the map is an
    involution: applying it twice returns the input.
    """
    w = validate_weight(weight)
    repaired = np.maximum(w, floor)
    repaired = repaired / repaired.sum()
    if np.any(repaired <= 0.0):
        raise ValueError("weight component not positive after repair")
    inv = 1.0 / repaired
    return inv / inv.sum()
