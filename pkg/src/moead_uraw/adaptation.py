"""Sparsity-driven subproblem removal/creation and archive maintenance.

The adaptation step measures crowding with the vicinity distance: the product
of the m smallest objective-space distances from an individual to the rest of
a set (m = objective count). Overcrowded subproblems are removed one at a
time with the sparsity recomputed between removals; replacements are built
from the most isolated archive members, each receiving the reciprocal-gap
weight that makes its solution Chebyshev-optimal for the new subproblem.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import Individual, Subproblem

DEFAULT_CAPACITY_FACTOR = 2.0

TRIM_POLICIES = ("highest", "lowest")


class AdaptationSkipped(RuntimeError):
    """No archive member satisfies the nonzero-gap side condition."""


def sparsity_level(ind: Individual, pop, m: int, scale=None) -> float:
    """Product of the m smallest distances from ``ind`` to others in ``pop``.

    Distances are Euclidean in objective space, divided componentwise by
    ``scale`` when given (used to put objectives with different ranges on an
    equal footing). ``ind`` itself is excluded when it is a member of ``pop``
    (by identity; a distinct member with equal objectives still counts and
    contributes a zero factor).

    Raises:
        ValueError: fewer than m other individuals are available.
    """
    others = [p.f for p in pop if p is not ind]
    if len(others) < m:
        raise ValueError(
            f"need at least {m} other individuals, got {len(others)}"
        )
    diff = np.asarray(others) - ind.f
    if scale is not None:
        diff = diff / np.asarray(scale, dtype=float)
    d = np.sqrt((diff**2).sum(axis=1))
    d.sort()
    return float(np.prod(d[:m]))


def sparsity_report(objectives: np.ndarray, m: int, scale=None) -> np.ndarray:
    """Sparsity of every row among the set itself, index-aligned."""
    F = np.asarray(objectives, dtype=float)
    if scale is not None:
        F = F / np.asarray(scale, dtype=float)
    return kernels.active.sparsity_among(F, m)


def reciprocal_gap_weight(f, z_star) -> np.ndarray:
    """Weight of a subproblem constructed from an archive member.

    Components are the normalized reciprocals of the objective gaps to the
    reference point; defined only when every gap is strictly positive.
    """
    gaps = np.asarray(f, dtype=float) - np.asarray(z_star, dtype=float)
    if np.any(gaps <= 0.0):
        raise ValueError("reciprocal-gap weight needs strictly positive gaps")
    inv = 1.0 / gaps
    return inv / inv.sum()


def remove_overcrowded(subproblems, nus: int, z_star=None,
                       scale=None) -> list[Subproblem]:
    """Drop the ``nus`` most crowded subproblems, one at a time.

    Sparsity is recomputed over the survivors before each single removal
    (on objectives divided by ``scale`` when given); each removal takes the
    minimum-sparsity individual. Exact sparsity ties (typically duplicate
    solutions) break toward the subproblem whose solution scalarizes worst
    under its own weight when ``z_star`` is given, so the weight that owns
    the crowded point survives; without ``z_star`` ties break toward the
    lowest index.
    """
    pop = list(subproblems)
    if nus < 1:
        raise ValueError("nus must be at least 1")
    if len(pop) <= nus:
        raise ValueError(f"cannot remove {nus} of {len(pop)} subproblems")
    m = pop[0].solution.f.shape[0]
    if z_star is not None:
        z_star = np.asarray(z_star, dtype=float)
    for _ in range(nus):
        F = np.array([sp.solution.f for sp in pop])
        levels = sparsity_report(F, m, scale)
        low = levels.min()
        if z_star is None:
            pick = int(np.argmin(levels))
        else:
            tied = np.flatnonzero(levels == low)
            W = np.array([pop[i].weight for i in tied])
            own = np.max(W * np.abs(F[tied] - z_star), axis=1)
            pick = int(tied[int(np.argmax(own))])
        pop.pop(pick)
    return pop


def add_subproblems(subproblems, ep: "Archive", nus: int, z_star,
                    scale=None) -> list[Subproblem]:
    """Append ``nus`` subproblems built from the most isolated archive members.

    For each addition the archive member with the largest sparsity with
    respect to the current population (objectives divided by ``scale`` when
    given) is selected, its reciprocal-gap weight computed and its solution
    installed as the subproblem's solution; the sparsity is recomputed after
    every addition. Members with any objective exactly at the reference
    point are skipped.

    Raises:
        AdaptationSkipped: every archive member violates the side condition.
    """
    if nus < 1:
        raise ValueError("nus must be at least 1")
    if len(ep) == 0:
        raise AdaptationSkipped("archive is empty")
    z_star = np.asarray(z_star, dtype=float)
    valid = np.flatnonzero((ep.objectives - z_star > 0.0).all(axis=1))
    if valid.size == 0:
        raise AdaptationSkipped("no archive member has all-nonzero gaps")

    pop = list(subproblems)
    m = z_star.shape[0]
    pop_F = np.array([sp.solution.f for sp in pop])
    cand_F = ep.objectives[valid]
    cand_X = ep.decisions[valid]
    scaled_cand = cand_F if scale is None else cand_F / np.asarray(scale, dtype=float)
    scaled_pop = pop_F if scale is None else pop_F / np.asarray(scale, dtype=float)
    neighbors_placeholder = np.empty(0, dtype=np.int64)
    for _ in range(nus):
        levels = kernels.active.sparsity_against(scaled_cand, scaled_pop, m)
        pick = int(np.argmax(levels))
        f_new = cand_F[pick]
        weight = reciprocal_gap_weight(f_new, z_star)
        pop.append(
            Subproblem(
                weight=weight,
                neighbors=neighbors_placeholder,
                solution=Individual(cand_X[pick].copy(), f_new.copy()),
            )
        )
        pop_F = np.vstack([pop_F, f_new[None, :]])
        scaled_pop = np.vstack(
            [scaled_pop, scaled_cand[pick][None, :]]
        )
    return pop


@dataclass
class Archive:
    """Bounded store of mutually nondominated individuals.

    Members are pairwise nondominated and unique in objective space. The
    capacity is ``capacity_factor`` times the population size, enforced by
    :meth:`trim`.
    """

    m: int
    n_dec: int
    capacity_factor: float = DEFAULT_CAPACITY_FACTOR
    _F: np.ndarray = field(init=False, repr=False)
    _X: np.ndarray = field(init=False, repr=False)
    _count: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        cap0 = 64
        self._F = np.empty((cap0, self.m))
        self._X = np.empty((cap0, self.n_dec))

    def __len__(self) -> int:
        return self._count

    @property
    def objectives(self) -> np.ndarray:
        return self._F[: self._count]

    @property
    def decisions(self) -> np.ndarray:
        return self._X[: self._count]

    def members(self) -> list[Individual]:
        return [Individual(self._X[i].copy(), self._F[i].copy()) for i in range(self._count)]

    def copy(self) -> "Archive":
        dup = Archive(self.m, self.n_dec, self.capacity_factor)
        dup._F = self._F.copy()
        dup._X = self._X.copy()
        dup._count = self._count
        return dup

    def _grow(self):
        self._F = np.vstack([self._F, np.empty_like(self._F)])
        self._X = np.vstack([self._X, np.empty_like(self._X)])

    def insert(self, x, f) -> bool:
        """Add a candidate unless a member dominates or duplicates it.

        Members dominated by the candidate are removed. Returns True when
        the candidate was added.
        """
        f = np.asarray(f, dtype=float)
        x = np.asarray(x, dtype=float)
        if self._count == self._F.shape[0]:
            self._grow()
        self._count, added = kernels.active.archive_insert_sweep(
            self._F, self._X, self._count, f, x
        )
        return bool(added)

    def trim(self, pop_size: int, policy: str = "highest", scale=None) -> int:
        """Remove members until the capacity bound holds; returns removals.

        policy "highest" drops the most isolated member each round (the
        literal crowding rule used here); "lowest" drops the most crowded.
        Sparsity is recomputed within the archive after every removal, on
        objectives divided by ``scale`` when given.
        """
        if policy not in TRIM_POLICIES:
            raise ValueError(f"unknown trim policy {policy!r}")
        cap = int(self.capacity_factor * pop_size)
        if self._count <= cap:
            return 0
        F = self._F[: self._count]
        if scale is not None:
            F = F / np.asarray(scale, dtype=float)
        alive = kernels.active.trim_select(F, cap, self.m, policy == "highest")
        removed = int(self._count - alive.sum())
        if removed:
            kept = int(alive.sum())
            self._F[:kept] = self._F[: self._count][alive]
            self._X[:kept] = self._X[: self._count][alive]
            self._count = kept
        return removed


def archive_insert(ep: Archive, cand: Individual) -> Archive:
    """Pure variant of :meth:`Archive.insert`: returns an updated copy."""
    out = ep.copy()
    out.insert(cand.x, cand.f)
    return out


def archive_trim(ep: Archive, pop_size: int, policy: str = "highest",
                 scale=None) -> Archive:
    """Pure variant of :meth:`Archive.trim`: returns an updated copy."""
    out = ep.copy()
    out.trim(pop_size, policy, scale)
    return out
