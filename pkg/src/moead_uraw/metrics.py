"""Hypervolume scoring, min-max normalization and nondominated filtering.

The hypervolume of a point set (minimization) is the Lebesgue measure of the
region dominated by the set and bounded above by a reference point. Final
sets are min-max normalized over the union of everything being compared, then
scored against the reference 1.2 in every coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_REFERENCE = 1.2

HV_METHODS = ("auto", "strips", "sweep", "mc")


@dataclass(frozen=True)
class NormalizationBounds:
    """Per-objective min and max over all compared sets of one instance."""

    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mins", np.asarray(self.mins, dtype=float))
        object.__setattr__(self, "maxs", np.asarray(self.maxs, dtype=float))
        if np.any(self.maxs <= self.mins):
            bad = np.flatnonzero(self.maxs <= self.mins)
            raise ValueError(f"degenerate normalization axes: {bad.tolist()}")

    @classmethod
    def from_point_sets(cls, point_sets) -> "NormalizationBounds":
        stacked = np.vstack([np.asarray(p, dtype=float) for p in point_sets])
        return cls(stacked.min(axis=0), stacked.max(axis=0))


def normalize(points, bounds: NormalizationBounds) -> np.ndarray:
    """Map each coordinate to (v - min) / (max - min).

    Values outside [0, 1] are legitimate when the bounds come from other
    sets; no clipping happens here.
    """
    points = np.asarray(points, dtype=float)
    return (points - bounds.mins) / (bounds.maxs - bounds.mins)


def nondominated_filter(points) -> np.ndarray:
    """Maximal mutually nondominated subset, original order preserved."""
    P = np.asarray(points, dtype=float)
    n = P.shape[0]
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        if not keep[i]:
            continue
        le = (P <= P[i]).all(axis=1)
        lt = (P < P[i]).any(axis=1)
        dominated = le & lt
        if dominated.any():
            keep[i] = False
            continue
        # later exact duplicates collapse onto the first occurrence
        dup = le & ~lt
        dup[: i + 1] = False
        keep[dup] = False
    return P[keep]


def _as_reference(z_ref, m: int) -> np.ndarray:
    if z_ref is None:
        return np.full(m, DEFAULT_REFERENCE)
    z = np.asarray(z_ref, dtype=float)
    if z.ndim == 0:
        return np.full(m, float(z))
    if z.shape != (m,):
        raise ValueError(f"reference point shape {z.shape} does not match m={m}")
    return z


def hypervolume(points, z_ref=None, method: str = "auto",
                samples: int = 1_000_000,
                rng: np.random.Generator | None = None) -> float:
    """Measure of the region dominated by ``points`` and bounded by ``z_ref``.

    Points that do not strictly dominate the reference contribute nothing and
    are dropped; the rest are reduced to their nondominated subset first.

    method:
        "auto"   strip sum for two objectives, else the recursive sweep
        "strips" two-objective strip sum
        "sweep"  exact dimension-sweep recursion (any m)
        "mc"     Monte Carlo estimate, for very large many-objective sets

    Returns 0.0 for an empty contributing set.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.size == 0:
        return 0.0
    m = P.shape[1]
    ref = _as_reference(z_ref, m)
    P = P[(P < ref).all(axis=1)]
    if P.shape[0] == 0:
        return 0.0
    P = nondominated_filter(P)
    if method not in HV_METHODS:
        raise ValueError(f"unknown hypervolume method {method!r}")
    if method == "auto":
        method = "strips" if m == 2 else "sweep"
    if method == "strips":
        if m != 2:
            raise ValueError("strip formula applies to two objectives only")
        return float(_hv_strips(P, ref))
    if method == "sweep":
        return float(_hv_sweep(P, ref))
    if rng is None:
        raise ValueError("Monte Carlo estimation needs an rng")
    return float(_hv_monte_carlo(P, ref, samples, rng))


def _hv_strips(P: np.ndarray, ref: np.ndarray) -> float:
    """Two-objective closed form: sort by f1 and sum rectangle strips."""
    order = np.lexsort((P[:, 1], P[:, 0]))
    P = P[order]
    total = 0.0
    best2 = ref[1]
    for i in range(P.shape[0]):
        right = P[i + 1, 0] if i + 1 < P.shape[0] else ref[0]
        best2 = min(best2, P[i, 1])
        if right > P[i, 0]:
            total += (right - P[i, 0]) * (ref[1] - best2)
    return total


def _hv_sweep(P: np.ndarray, ref: np.ndarray) -> float:
    """Exact recursion: slice along the last objective, recurse on m-1."""
    m = P.shape[1]
    if m == 1:
        return float(ref[0] - P.min())
    if m == 2:
        return _hv_strips(P, ref)
    order = np.argsort(P[:, -1], kind="stable")
    P = P[order]
    levels = P[:, -1]
    total = 0.0
    for i in range(P.shape[0]):
        top = levels[i + 1] if i + 1 < P.shape[0] else ref[-1]
        depth = top - levels[i]
        if depth <= 0.0:
            continue
        slab = nondominated_filter(P[: i + 1, :-1])
        total += depth * _hv_sweep(slab, ref[:-1])
    return total


def _hv_monte_carlo(P: np.ndarray, ref: np.ndarray, samples: int,
                    rng: np.random.Generator) -> float:
    """Estimate by sampling the [min(P), ref] box uniformly."""
    lows = P.min(axis=0)
    box = float(np.prod(ref - lows))
    if box == 0.0:
        return 0.0
    hits = 0
    chunk = 262_144
    remaining = samples
    while remaining > 0:
        size = min(chunk, remaining)
        pts = lows + rng.random((size, P.shape[1])) * (ref - lows)
        dominated = (P[None, :, :] <= pts[:, None, :]).all(axis=2).any(axis=1)
        hits += int(dominated.sum())
        remaining -= size
    return box * hits / samples


def save_points(points, path) -> None:
    """Plain text matrix, one point per line."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    lines = [" ".join(f"{v:.17g}" for v in row) for row in points]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_points(path) -> np.ndarray:
    rows = []
    for line in Path(path).read_text(encoding="ascii").splitlines():
        line = line.strip()
        if line:
            rows.append([float(tok) for tok in line.split()])
    return np.asarray(rows, dtype=float)
