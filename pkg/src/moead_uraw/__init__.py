"""Decomposition-based multi/many-objective optimization with
uniformly-randomly initialized, sparsity-adaptive weight vectors."""

__version__ = "0.1.0"

from .core import (
    Individual,
    Subproblem,
    derive_seed,
    dominates,
    euclidean_distance,
    rng_stream,
    update_reference,
)
from .engine import ALGORITHMS, RunConfig, RunRecord, run
from .problems import ProblemDef, available_problems, get_problem

__all__ = [
    "ALGORITHMS",
    "Individual",
    "ProblemDef",
    "RunConfig",
    "RunRecord",
    "Subproblem",
    "available_problems",
    "derive_seed",
    "dominates",
    "euclidean_distance",
    "get_problem",
    "rng_stream",
    "run",
    "update_reference",
]
