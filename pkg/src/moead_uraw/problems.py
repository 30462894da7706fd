"""WFG4-family benchmark problems with a pluggable front-shape layer.

All problems share the standard WFG4 skeleton: n = k + l decision variables
with box bounds z_i in [0, 2i], a multimodal shift applied to every variable,
uniform weighted-sum reduction to m position/distance parameters, and shape
functions scaled by 2, 4, ..., 2m. The variants WFG41..WFG48 differ only in
the shape layer, configured through a registry so alternative definitions can
be bound from a config file without code changes.

The shipped registry (``data/wfg4x_shapes.json``) is a best-effort mapping:
concave, convex, sharpened ("strong") concave/convex, linear, mixed, and
disconnected fronts. WFG4 itself is the verified concave reference problem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import kernels

DEFAULT_DISTANCE_PARAMS = 10

_HEAD_CODES = {"concave": 0, "convex": 1, "linear": 2}
_TAIL_CODES = {"same": 0, "mixed": 1, "disconnected": 2}


class OutOfBoundsError(ValueError):
    """A decision vector violates the problem's box bounds."""


@dataclass(frozen=True)
class ShapeSpec:
    """Front-shape configuration for one problem variant.

    head picks the family used for every objective; tail optionally replaces
    the last objective's shape with a mixed or disconnected profile; exponent
    != 1 sharpens (>1) or flattens (<1) the whole front.
    """

    head: str = "concave"
    tail: str = "same"
    exponent: float = 1.0
    mixed_alpha: float = 1.0
    mixed_sections: float = 5.0
    disc_alpha: float = 1.0
    disc_beta: float = 1.0
    disc_regions: float = 5.0

    def __post_init__(self):
        if self.head not in _HEAD_CODES:
            raise ValueError(f"unknown head shape {self.head!r}")
        if self.tail not in _TAIL_CODES:
            raise ValueError(f"unknown tail shape {self.tail!r}")
        if self.exponent <= 0.0:
            raise ValueError("shape exponent must be positive")

    @property
    def codes(self) -> tuple[int, int, float, float, float, float]:
        """(head, tail, exponent, p0, p1, p2) packed for the kernels."""
        if self.tail == "mixed":
            params = (self.mixed_alpha, self.mixed_sections, 0.0)
        else:
            params = (self.disc_alpha, self.disc_beta, self.disc_regions)
        return (_HEAD_CODES[self.head], _TAIL_CODES[self.tail], self.exponent, *params)


@dataclass(frozen=True)
class ProblemDef:
    """One benchmark instance: identifier, dimensions, bounds and shape."""

    name: str
    m: int
    k: int
    l: int
    shape: ShapeSpec = field(default_factory=ShapeSpec)

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("need at least 2 objectives")
        if self.k % (self.m - 1) != 0:
            raise ValueError(
                f"position parameter k={self.k} must be divisible by m-1={self.m - 1}"
            )
        if self.l < 1:
            raise ValueError("need at least 1 distance parameter")

    @property
    def n(self) -> int:
        return self.k + self.l

    @property
    def lower(self) -> np.ndarray:
        return np.zeros(self.n)

    @property
    def upper(self) -> np.ndarray:
        return 2.0 * np.arange(1, self.n + 1)

    @property
    def objective_scale(self) -> np.ndarray:
        """Scale constants of the objectives: 2, 4, ..., 2m."""
        return 2.0 * np.arange(1, self.m + 1)


def default_position_params(m: int) -> int:
    return 2 if m == 2 else m - 1


def load_shape_registry(path=None) -> dict[str, ShapeSpec]:
    """Load a problem-id -> shape mapping from a JSON config file.

    Without a path the packaged default registry is used.
    """
    if path is None:
        text = resources.files("moead_uraw.data").joinpath("wfg4x_shapes.json").read_text()
    else:
        text = Path(path).read_text()
    raw = json.loads(text)
    registry = {}
    for name, spec in raw.items():
        if name.startswith("_"):
            continue
        registry[name.upper()] = ShapeSpec(**spec)
    return registry


_DEFAULT_REGISTRY: dict[str, ShapeSpec] | None = None


def shape_registry() -> dict[str, ShapeSpec]:
    global _DEFAULT_REGISTRY
    if _DEFAULT_REGISTRY is None:
        _DEFAULT_REGISTRY = load_shape_registry()
    return _DEFAULT_REGISTRY


def available_problems() -> list[str]:
    return sorted(shape_registry())


def get_problem(
    name: str,
    m: int,
    k: int | None = None,
    l: int = DEFAULT_DISTANCE_PARAMS,
    registry: dict[str, ShapeSpec] | None = None,
) -> ProblemDef:
    """Build a problem instance by registry id and objective count."""
    registry = registry if registry is not None else shape_registry()
    key = name.upper()
    if key not in registry:
        raise KeyError(f"unknown problem {name!r}; known: {sorted(registry)}")
    if k is None:
        k = default_position_params(m)
    return ProblemDef(name=key, m=m, k=k, l=l, shape=registry[key])


def evaluate(problem: ProblemDef, x) -> np.ndarray:
    """Evaluate one decision vector; raises OutOfBoundsError outside the box."""
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.n,):
        raise ValueError(f"expected {problem.n} variables, got shape {x.shape}")
    upper = problem.upper
    if np.any(x < 0.0) or np.any(x > upper):
        raise OutOfBoundsError("decision vector outside [0, 2i] bounds")
    head, tail, expo, p0, p1, p2 = problem.shape.codes
    return kernels.active.wfg_pipeline(
        x, upper, problem.k, problem.m, head, tail, expo, p0, p1, p2
    )


def evaluate_unchecked(problem: ProblemDef, x: np.ndarray) -> np.ndarray:
    """Evaluation fast path for callers that guarantee in-bounds inputs."""
    head, tail, expo, p0, p1, p2 = problem.shape.codes
    return kernels.active.wfg_pipeline(
        x, problem.upper, problem.k, problem.m, head, tail, expo, p0, p1, p2
    )


def evaluate_population(problem: ProblemDef, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    out = np.empty((X.shape[0], problem.m))
    for i in range(X.shape[0]):
        out[i] = evaluate(problem, X[i])
    return out


def random_solution(problem: ProblemDef, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw inside the box bounds, component i in [0, 2i]."""
    return rng.random(problem.n) * problem.upper


def random_population(problem: ProblemDef, count: int, rng: np.random.Generator) -> np.ndarray:
    return rng.random((count, problem.n)) * problem.upper


def optimal_solution(problem: ProblemDef, position: np.ndarray) -> np.ndarray:
    """A front-optimal decision vector for given position parameters in [0,1].

    Distance-related variables sit at 0.35 of their range, which zeroes the
    final distance parameter after the multimodal shift.
    """
    position = np.asarray(position, dtype=float)
    if position.shape != (problem.k,):
        raise ValueError(f"expected {problem.k} position values")
    x = np.concatenate([position, np.full(problem.l, 0.35)])
    return x * problem.upper
