"""Foundational value types, dominance relations and the seeded RNG contract.

Everything downstream works on plain float64 numpy arrays:

- objective vectors: shape (m,), m >= 2, all entries finite
- decision vectors:  shape (n,), within the problem's box bounds
- weight vectors:    shape (m,), nonnegative, summing to 1 within WEIGHT_SUM_TOL

All comparisons assume minimization.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

# Simplex membership tolerance. Constructors renormalize inputs whose sum
# deviates by less than this and reject larger deviations.
WEIGHT_SUM_TOL = 1e-9


class DimensionMismatch(ValueError):
    """Operands have different lengths."""


class DegeneratePoint(ValueError):
    """A point coincides with the reference point in every objective."""


def as_vector(values, name: str = "vector") -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


def validate_objectives(values) -> np.ndarray:
    """Validate an objective vector: length >= 2, all entries finite."""
    arr = as_vector(values, "objective vector")
    if arr.size < 2:
        raise ValueError(f"objective vector needs at least 2 entries, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("objective vector contains non-finite entries")
    return arr


def validate_weight(values) -> np.ndarray:
    """Validate a weight vector and renormalize tiny floating-point drift.

    Inputs whose component sum deviates from 1 by at most WEIGHT_SUM_TOL are
    renormalized; larger deviations and negative components are rejected.
    """
    arr = as_vector(values, "weight vector")
    if np.any(arr < 0.0):
        raise ValueError("weight vector has negative components")
    total = arr.sum()
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weight vector components sum to {total!r}, not 1")
    return arr / total


@dataclass(frozen=True)
class Individual:
    """A decision vector paired with its objective vector.

    The objective vector must be exactly the problem evaluation of ``x``;
    callers re-evaluate after any change to ``x``.
    """

    x: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "f", validate_objectives(self.f))


@dataclass(frozen=True)
class Subproblem:
    """One scalar subproblem: weight, neighbor indices and current solution."""

    weight: np.ndarray
    neighbors: np.ndarray
    solution: Individual

    def __post_init__(self):
        object.__setattr__(self, "weight", validate_weight(self.weight))
        object.__setattr__(
            self, "neighbors", np.asarray(self.neighbors, dtype=np.int64)
        )


def dominates(a, b) -> bool:
    """Pareto dominance for minimization: a <= b everywhere, < somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return bool(np.all(a <= b) and np.any(a < b))


def euclidean_distance(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def update_reference(z_star, f) -> np.ndarray:
    """Componentwise minimum of the running reference point and a new vector."""
    z_star = np.asarray(z_star, dtype=float)
    f = np.asarray(f, dtype=float)
    if z_star.shape != f.shape:
        raise DimensionMismatch(f"shapes {z_star.shape} and {f.shape} differ")
    return np.minimum(z_star, f)


def rng_stream(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by (seed, stream).

    Identical (seed, stream) pairs yield identical draw sequences on every
    platform, so runs and operator draw orders are exactly reproducible.
    """
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
                    np.uint64(stream & 0xFFFFFFFFFFFFFFFF)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary labelled parts (platform independent)."""
    text = "\x1f".join(str(p) for p in parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")
