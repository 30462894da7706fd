"""Backend selection for the hot numeric kernels.

Two interchangeable implementations exist: ``numba_backend`` (jitted loops,
default when numba is importable) and ``numpy_backend`` (vectorized
fallback). The active backend is chosen once at import time from the
``MOEAD_URAW_BACKEND`` environment variable:

    MOEAD_URAW_BACKEND=numba   force the jitted kernels (error if unavailable)
    MOEAD_URAW_BACKEND=numpy   force the pure-numpy fallback
    unset / "auto"             numba when importable, else numpy

``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import os

from . import numpy_backend

ENV_VAR = "MOEAD_URAW_BACKEND"

_BACKENDS = {"numpy": numpy_backend}
try:
    from . import numba_backend

    _BACKENDS["numba"] = numba_backend
except ImportError:  # numba not installed; fallback only
    numba_backend = None


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def resolve_backend(name: str | None = None):
    """Return the backend module for ``name`` (or the environment default)."""
    if name is None:
        name = os.environ.get(ENV_VAR, "auto")
    name = name.lower()
    if name == "auto":
        return _BACKENDS.get("numba", numpy_backend)
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown kernel backend {name!r}; available: {available_backends()}"
        ) from None


active = resolve_backend()


def use_backend(name: str):
    """Switch the active backend at runtime (mainly for tests/benchmarks)."""
    global active
    active = resolve_backend(name)
    return active
