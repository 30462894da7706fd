"""Decomposition main loop with optional sparsity-driven weight adaptation.

One run is strictly sequential: subproblems are visited in index order, each
producing one offspring by differential evolution plus polynomial mutation,
which is then offered to a random sample of its mating pool and inserted into
the nondominated archive. Every 5% of the generation budget (skipping the
last 10%) the adaptation step removes the most crowded subproblems and
rebuilds them from the most isolated archive members.

All randomness flows through one counter-based generator per run, so a
(config, seed) pair reproduces a run exactly. The per-offspring draw order
is: mating-pool coin, parent picks, crossover draws (only when cr < 1),
bound-repair draws (only for the resample policy), mutation uniforms,
replacement permutation.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, replace as dc_replace
from pathlib import Path

import numpy as np

from . import kernels, metrics, problems
from .adaptation import (
    AdaptationSkipped,
    Archive,
    add_subproblems,
    remove_overcrowded,
)
from .core import Individual, Subproblem, derive_seed, rng_stream
from .scalarize import ws_transform
from .weights import (
    DEFAULT_POOL_SIZE,
    das_dennis,
    lattice_divisions_for,
    tsf_weights,
    uniform_random_weights,
)

WEIGHT_METHODS = ("DD", "UR", "TSF")
REPAIR_POLICIES = ("clip", "resample")

# Default population sizes per objective count; chosen so an exact simplex
# lattice of the same size exists for the DD baseline.
DEFAULT_POP_SIZES = {2: 120, 3: 120, 4: 120, 5: 126, 6: 126}

# algorithm tag -> (weight method, adaptation enabled)
ALGORITHMS = {
    "DD": ("DD", False),
    "UR": ("UR", False),
    "TSF": ("TSF", False),
    "URAW": ("UR", True),
}


@dataclass(frozen=True)
class RunConfig:
    problem: str = "WFG4"
    m: int = 2
    pop_size: int | None = None        # default depends on m
    neighborhood_size: int = 24
    max_generations: int = 400
    nus: int | None = None             # default: round(0.05 * pop_size)
    delta: float = 0.9
    nr: int = 2
    cr: float = 1.0
    f_scale: float = 0.5
    p_m: float | None = None           # default: 1 / n
    eta_m: float = 20.0
    weight_method: str = "UR"
    adapt_weights: bool = False
    pool_size: int = DEFAULT_POOL_SIZE
    apply_ws_transform: bool = True
    repair: str = "clip"
    trim_policy: str = "highest"
    # crowding distances on objectives divided by their scale constants;
    # False reproduces raw, unnormalized distances
    normalize_sparsity: bool = True
    distance_params: int = problems.DEFAULT_DISTANCE_PARAMS
    shape_config: str | None = None
    seed: int = 0

    @classmethod
    def for_algorithm(cls, algorithm: str, **kwargs) -> "RunConfig":
        """Config preset for one of the study's algorithm tags."""
        try:
            method, adapt = ALGORITHMS[algorithm.upper()]
        except KeyError:
            raise ValueError(
                f"unknown algorithm {algorithm!r}; known: {sorted(ALGORITHMS)}"
            ) from None
        return cls(weight_method=method, adapt_weights=adapt, **kwargs)

    def resolve(self) -> "RunConfig":
        """Fill derived defaults and validate ranges."""
        pop = self.pop_size
        if pop is None:
            if self.m not in DEFAULT_POP_SIZES:
                raise ValueError(
                    f"no default population size for m={self.m}; set pop_size"
                )
            pop = DEFAULT_POP_SIZES[self.m]
        nus = self.nus if self.nus is not None else int(round(0.05 * pop))
        cfg = dc_replace(self, pop_size=pop, nus=nus)
        if cfg.weight_method not in WEIGHT_METHODS:
            raise ValueError(f"unknown weight method {cfg.weight_method!r}")
        if cfg.repair not in REPAIR_POLICIES:
            raise ValueError(f"unknown repair policy {cfg.repair!r}")
        if not 0.0 <= cfg.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if cfg.nr < 1:
            raise ValueError("nr must be at least 1")
        if cfg.neighborhood_size < 3 or cfg.neighborhood_size > pop:
            raise ValueError("neighborhood size must lie in [3, pop_size]")
        if cfg.max_generations < 0:
            raise ValueError("max_generations must be nonnegative")
        return cfg


@dataclass
class RunRecord:
    """Everything needed to reproduce and score one run."""

    config: dict
    seed: int
    objectives: np.ndarray
    decisions: np.ndarray
    archive_objectives: np.ndarray
    archive_decisions: np.ndarray
    hv: float
    hv_method: str
    generations: int
    adaptation_events: int
    adaptation_skipped: int
    wall_time_s: float = 0.0


@dataclass
class GenerationState:
    """Read-only per-generation snapshot passed to run observers."""

    generation: int
    objectives: np.ndarray
    decisions: np.ndarray
    weights: np.ndarray
    z_star: np.ndarray
    archive_objectives: np.ndarray


def mating_pool(i: int, delta: float, neighbors: np.ndarray, pop_size: int,
                rng: np.random.Generator) -> np.ndarray:
    """Neighbor indices of subproblem i with probability delta, else all."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must lie in [0, 1]")
    if rng.random() < delta:
        return neighbors[i]
    return np.arange(pop_size)


def de_crossover(target: int, pool: np.ndarray, X: np.ndarray, f_scale: float,
                 cr: float, lower: np.ndarray, upper: np.ndarray,
                 rng: np.random.Generator, repair: str = "clip") -> np.ndarray:
    """rand/1 trial vector with binomial crossover and bound repair.

    Three distinct parents come from the mating pool; the trial is
    x_r1 + f_scale * (x_r2 - x_r3), crossed with the target at rate ``cr``
    (cr = 1 copies the trial entirely), then repaired into the box: "clip"
    snaps to the violated bound, "resample" redraws uniformly between the
    bound and the target's value.
    """
    size = pool.shape[0]
    if size < 3:
        raise ValueError("mating pool needs at least 3 members")
    i1 = int(rng.integers(size))
    i2 = int(rng.integers(size))
    while i2 == i1:
        i2 = int(rng.integers(size))
    i3 = int(rng.integers(size))
    while i3 == i1 or i3 == i2:
        i3 = int(rng.integers(size))
    r1, r2, r3 = pool[i1], pool[i2], pool[i3]
    v = X[r1] + f_scale * (X[r2] - X[r3])
    if cr < 1.0:
        n = v.shape[0]
        j_rand = int(rng.integers(n))
        take = rng.random(n) < cr
        take[j_rand] = True
        v = np.where(take, v, X[target])
    if repair == "clip":
        return np.minimum(np.maximum(v, lower), upper)
    out = v.copy()
    for j in range(out.shape[0]):
        if out[j] < lower[j]:
            out[j] = lower[j] + rng.random() * (X[target, j] - lower[j])
        elif out[j] > upper[j]:
            out[j] = X[target, j] + rng.random() * (upper[j] - X[target, j])
    return out


def polynomial_mutation(x: np.ndarray, p_m: float, eta_m: float,
                        lower: np.ndarray, upper: np.ndarray,
                        rng: np.random.Generator) -> np.ndarray:
    """Mutate each component with probability p_m; stays inside the box."""
    apply_u = rng.random(x.shape[0])
    perturb_u = rng.random(x.shape[0])
    return kernels.active.polynomial_mutation_core(
        x, lower, upper, apply_u, perturb_u, p_m, eta_m
    )


def replace(f_off: np.ndarray, x_off: np.ndarray, pool: np.ndarray,
            F: np.ndarray, X: np.ndarray, W: np.ndarray, z_star: np.ndarray,
            nr: int, rng: np.random.Generator) -> int:
    """Offer the offspring to pool members in random order, at most nr wins.

    Candidates are drawn uniformly without replacement; the offspring
    replaces an incumbent when its scalarized value is <= the incumbent's.
    F and X are updated in place; returns the replacement count.
    """
    if nr < 1:
        raise ValueError("nr must be at least 1")
    order = rng.permutation(pool)
    return kernels.active.replacement_sweep(F, X, W, z_star, order, f_off, x_off, nr)


def recompute_neighbors(W: np.ndarray, T: int) -> np.ndarray:
    """Row i holds the T nearest weight indices (self included, stable ties)."""
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    if T > n:
        raise ValueError(f"neighborhood size {T} exceeds weight count {n}")
    if T < 1:
        raise ValueError("neighborhood size must be at least 1")
    diff = W[:, None, :] - W[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    return np.argsort(dist, axis=1, kind="stable")[:, :T].astype(np.int64)


def initial_weights(cfg: RunConfig, F: np.ndarray, z_star: np.ndarray,
                    rng: np.random.Generator) -> np.ndarray:
    if cfg.weight_method == "DD":
        divisions = lattice_divisions_for(cfg.m, cfg.pop_size)
        return das_dennis(cfg.m, divisions).vectors
    if cfg.weight_method == "UR":
        return uniform_random_weights(cfg.pop_size, cfg.m, cfg.pool_size, rng).vectors
    return tsf_weights(F, z_star).vectors


def _adaptation_due(gen: int, max_gen: int) -> bool:
    interval = int(round(0.05 * max_gen))
    if interval <= 0 or gen <= 0 or gen % interval != 0:
        return False
    return gen < math.ceil(0.9 * max_gen)


def run(config: RunConfig, observer=None) -> RunRecord:
    """Execute one seeded run and return its record.

    ``observer(state: GenerationState)``, when given, is called after every
    generation with copies of the live arrays (used for invariant checks).
    """
    cfg = config.resolve()
    registry = (
        problems.load_shape_registry(cfg.shape_config) if cfg.shape_config else None
    )
    problem = problems.get_problem(
        cfg.problem, cfg.m, l=cfg.distance_params, registry=registry
    )
    lower, upper = problem.lower, problem.upper
    n, m, N = problem.n, cfg.m, cfg.pop_size
    p_m = cfg.p_m if cfg.p_m is not None else 1.0 / n
    rng = rng_stream(cfg.seed)
    t_start = time.perf_counter()

    X = problems.random_population(problem, N, rng)
    F = problems.evaluate_population(problem, X)
    z = F.min(axis=0)
    W = initial_weights(cfg, F, z, rng)
    if W.shape[0] != N:
        raise ValueError(
            f"weight method {cfg.weight_method} produced {W.shape[0]} vectors "
            f"for population size {N}"
        )
    if cfg.apply_ws_transform:
        W = np.array([ws_transform(row) for row in W])
    B = recompute_neighbors(W, cfg.neighborhood_size)
    ep = Archive(m, n)

    adaptation_events = 0
    adaptation_skipped = 0
    no_neighbors = np.empty(0, dtype=np.int64)

    backend = kernels.active
    head, tail, expo, p0, p1, p2 = problem.shape.codes
    k_pos = problem.k
    all_indices = np.arange(N)
    obj_scale = problem.objective_scale if cfg.normalize_sparsity else None

    for gen in range(cfg.max_generations):
        for i in range(N):
            pool = B[i] if rng.random() < cfg.delta else all_indices
            x_new = de_crossover(
                i, pool, X, cfg.f_scale, cfg.cr, lower, upper, rng, cfg.repair
            )
            apply_u = rng.random(n)
            perturb_u = rng.random(n)
            x_new = backend.polynomial_mutation_core(
                x_new, lower, upper, apply_u, perturb_u, p_m, cfg.eta_m
            )
            f_new = backend.wfg_pipeline(
                x_new, upper, k_pos, m, head, tail, expo, p0, p1, p2
            )
            np.minimum(z, f_new, out=z)
            order = rng.permutation(pool)
            backend.replacement_sweep(F, X, W, z, order, f_new, x_new, cfg.nr)
            ep.insert(x_new, f_new)
        ep.trim(N, cfg.trim_policy, obj_scale)

        if cfg.adapt_weights and _adaptation_due(gen, cfg.max_generations):
            viable = len(ep) > 0 and bool(
                np.any((ep.objectives - z > 0.0).all(axis=1))
            )
            if not viable:
                adaptation_skipped += 1
            else:
                sps = [
                    Subproblem(W[i], no_neighbors, Individual(X[i], F[i]))
                    for i in range(N)
                ]
                try:
                    sps = remove_overcrowded(sps, cfg.nus, z, obj_scale)
                    sps = add_subproblems(sps, ep, cfg.nus, z, obj_scale)
                except AdaptationSkipped:
                    adaptation_skipped += 1
                else:
                    X = np.array([sp.solution.x for sp in sps])
                    F = np.array([sp.solution.f for sp in sps])
                    W = np.array([sp.weight for sp in sps])
                    B = recompute_neighbors(W, cfg.neighborhood_size)
                    adaptation_events += 1

        if observer is not None:
            observer(
                GenerationState(
                    generation=gen,
                    objectives=F.copy(),
                    decisions=X.copy(),
                    weights=W.copy(),
                    z_star=z.copy(),
                    archive_objectives=ep.objectives.copy(),
                )
            )

    hv, hv_method = _record_hv(F, problem, cfg.seed)
    return RunRecord(
        config=asdict(cfg),
        seed=cfg.seed,
        objectives=F,
        decisions=X,
        archive_objectives=ep.objectives.copy(),
        archive_decisions=ep.decisions.copy(),
        hv=hv,
        hv_method=hv_method,
        generations=cfg.max_generations,
        adaptation_events=adaptation_events,
        adaptation_skipped=adaptation_skipped,
        wall_time_s=time.perf_counter() - t_start,
    )


def _record_hv(F: np.ndarray, problem, seed: int) -> tuple[float, str]:
    """Problem-scale hypervolume stored on the record.

    Objectives are divided by their scale constants 2, 4, ..., 2m before
    scoring against the standard 1.2 reference. Exact up to m=4; larger
    objective counts fall back to a seeded Monte Carlo estimate to keep runs
    fast (the report phase controls its own scoring).
    """
    m = F.shape[1]
    scaled = F / (2.0 * np.arange(1, m + 1))
    if m <= 4:
        return metrics.hypervolume(scaled), "sweep"
    hv_rng = rng_stream(derive_seed(seed, "record-hv"))
    value = metrics.hypervolume(
        scaled, method="mc", samples=1_000_000, rng=hv_rng
    )
    return value, "mc:1000000"


def save_record(record: RunRecord, path) -> None:
    """Serialize a record to JSON (volatile wall time stays out of the file,
    so identical config and seed reproduce the file byte for byte)."""
    payload = {
        "config": record.config,
        "seed": record.seed,
        "objectives": record.objectives.tolist(),
        "decisions": record.decisions.tolist(),
        "archive_objectives": record.archive_objectives.tolist(),
        "archive_decisions": record.archive_decisions.tolist(),
        "hv": record.hv,
        "hv_method": record.hv_method,
        "generations": record.generations,
        "adaptation_events": record.adaptation_events,
        "adaptation_skipped": record.adaptation_skipped,
    }
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n",
        encoding="ascii",
    )


def load_record(path) -> RunRecord:
    payload = json.loads(Path(path).read_text(encoding="ascii"))
    return RunRecord(
        config=payload["config"],
        seed=payload["seed"],
        objectives=np.asarray(payload["objectives"], dtype=float),
        decisions=np.asarray(payload["decisions"], dtype=float),
        archive_objectives=np.asarray(payload["archive_objectives"], dtype=float),
        archive_decisions=np.asarray(payload["archive_decisions"], dtype=float),
        hv=payload["hv"],
        hv_method=payload["hv_method"],
        generations=payload["generations"],
        adaptation_events=payload["adaptation_events"],
        adaptation_skipped=payload["adaptation_skipped"],
        wall_time_s=0.0,
    )
