"""Fixed weight-vector generation: simplex lattice, uniform-random farthest
point, and Chebyshev-optimal weights seeded from an evaluated population."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import DegeneratePoint, euclidean_distance
from .scalarize import optimal_tch_weight

# Refuse lattices that would not fit in memory.
MAX_LATTICE_SIZE = 10_000_000

DEFAULT_POOL_SIZE = 5000


@dataclass(frozen=True)
class WeightSet:
    """A bank of weight vectors plus the tag of the method that built it."""

    vectors: np.ndarray  # (N, m), rows on the unit simplex
    method: str          # one of "DD", "UR", "TSF"

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def save(self, path) -> None:
        save_weight_set(self, path)


def save_weight_set(ws: WeightSet, path) -> None:
    """One vector per line, space-separated, 17 significant digits."""
    lines = [" ".join(f"{v:.17g}" for v in row) for row in ws.vectors]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_weight_set(path, method: str = "UR") -> WeightSet:
    rows = []
    for line in Path(path).read_text(encoding="ascii").splitlines():
        line = line.strip()
        if line:
            rows.append([float(tok) for tok in line.split()])
    return WeightSet(np.asarray(rows, dtype=float), method)


def das_dennis(m: int, divisions: int) -> WeightSet:
    """All lattice weights with components in {0, 1/H, ..., 1} summing to 1.

    Enumerated in lexicographic order; the set size is
    C(divisions + m - 1, m - 1).
    """
    if m < 2:
        raise ValueError("need at least 2 objectives")
    if divisions < 1:
        raise ValueError("need at least 1 division per axis")
    size = math.comb(divisions + m - 1, m - 1)
    if size > MAX_LATTICE_SIZE:
        raise OverflowError(
            f"lattice with {size} vectors exceeds the {MAX_LATTICE_SIZE} cap"
        )
    out = np.empty((size, m))
    row = 0
    counts = [0] * m

    def rec(position: int, remaining: int):
        nonlocal row
        if position == m - 1:
            counts[position] = remaining
            out[row] = counts
            row += 1
            return
        for c in range(remaining + 1):
            counts[position] = c
            rec(position + 1, remaining - c)

    rec(0, divisions)
    return WeightSet(out / divisions, "DD")


def lattice_divisions_for(m: int, target: int) -> int:
    """Smallest H whose lattice size equals ``target`` exactly."""
    h = 1
    while True:
        size = math.comb(h + m - 1, m - 1)
        if size == target:
            return h
        if size > target:
            raise ValueError(
                f"no lattice of exactly {target} vectors exists for m={m}"
            )
        h += 1


def sample_simplex(count: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples on the unit simplex via normalized exponential spacing."""
    g = -np.log(1.0 - rng.random((count, m)))
    return g / g.sum(axis=1, keepdims=True)


def uniform_random_weights(
    n_weights: int,
    m: int,
    pool_size: int = DEFAULT_POOL_SIZE,
    rng: np.random.Generator | None = None,
    pool: np.ndarray | None = None,
) -> WeightSet:
    """Farthest-point selection from a random simplex pool.

    Starts from the m extreme unit vectors and repeatedly moves the pool
    member with the largest distance to the accumulated set into the set,
    until it holds ``n_weights`` vectors. Ties break toward the lowest pool
    index. A pre-built ``pool`` may be injected (mainly for testing);
    otherwise ``pool_size`` simplex-uniform vectors are drawn from ``rng``.
    """
    if n_weights < m:
        raise ValueError(f"need at least m={m} weights, got {n_weights}")
    selected = np.eye(m)
    if n_weights == m:
        return WeightSet(selected, "UR")
    if pool is None:
        if rng is None:
            raise ValueError("rng is required unless a pool is injected")
        if pool_size < n_weights:
            raise ValueError("pool smaller than the requested weight count")
        pool = sample_simplex(pool_size, m, rng)
    else:
        pool = np.asarray(pool, dtype=float)
        if pool.shape[0] < n_weights - m:
            raise ValueError("injected pool smaller than the remaining picks")

    picked = []
    # min distance from each pool member to the selected set, updated
    # incrementally as members are added
    dist = np.min(
        np.sqrt(((pool[:, None, :] - selected[None, :, :]) ** 2).sum(-1)), axis=1
    )
    alive = np.ones(pool.shape[0], dtype=bool)
    for _ in range(n_weights - m):
        masked = np.where(alive, dist, -np.inf)
        best = int(np.argmax(masked))
        picked.append(pool[best])
        alive[best] = False
        new_d = np.sqrt(((pool - pool[best]) ** 2).sum(axis=1))
        np.minimum(dist, new_d, out=dist)
    vectors = np.vstack([selected] + picked) if picked else selected
    return WeightSet(vectors, "UR")


def tsf_weights(objectives: np.ndarray, z_star: np.ndarray) -> WeightSet:
    """Chebyshev-optimal weight for each row of an evaluated population.

    Rows whose objectives all coincide with the reference point map to the
    uniform weight so that initialization always succeeds.
    """
    objectives = np.asarray(objectives, dtype=float)
    z_star = np.asarray(z_star, dtype=float)
    n, m = objectives.shape
    out = np.empty((n, m))
    for i in range(n):
        try:
            out[i] = optimal_tch_weight(objectives[i], z_star)
        except DegeneratePoint:
            out[i] = 1.0 / m
    return WeightSet(out, "TSF")


def distance_to_set(v, weight_set) -> float:
    """Minimum Euclidean distance from ``v`` to any member of the set."""
    vectors = weight_set.vectors if isinstance(weight_set, WeightSet) else np.asarray(weight_set, dtype=float)
    if vectors.size == 0:
        raise ValueError("weight set is empty")
    return min(euclidean_distance(v, row) for row in vectors)
