"""Pure-numpy implementations of the hot inner-loop kernels.

This is the fallback path used when numba is unavailable or when
``MOEAD_URAW_BACKEND=numpy`` is set. Signatures and semantics match
``numba_backend`` exactly; the two are cross-checked in the test suite.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"

# Shape-function codes shared by both backends.
HEAD_CONCAVE, HEAD_CONVEX, HEAD_LINEAR = 0, 1, 2
TAIL_SAME, TAIL_MIXED, TAIL_DISCONNECTED = 0, 1, 2

_MM_A = 30.0  # multimodal transform parameters
_MM_B = 10.0
_MM_C = 0.35


def _clamp01(v):
    return np.minimum(np.maximum(v, 0.0), 1.0)


def wfg_pipeline(x, upper, k, m, head, tail, expo, p0, p1, p2):
    """Evaluate one decision vector through the benchmark pipeline.

    Domain normalization, multimodal shift on every variable, uniform
    weighted-sum reduction to m position/distance parameters, degeneracy
    post-step, then the configured shape functions scaled by 2, 4, ..., 2m.
    """
    n = x.shape[0]
    y = x / upper
    t1 = np.abs(y - _MM_C) / (2.0 * (np.floor(_MM_C - y) + _MM_C))
    t2 = (4.0 * _MM_A + 2.0) * np.pi * (0.5 - t1)
    t = _clamp01((1.0 + np.cos(t2) + 4.0 * _MM_B * t1 * t1) / (_MM_B + 2.0))

    gap = k // (m - 1)
    u = np.empty(m)
    for i in range(m - 1):
        u[i] = t[i * gap:(i + 1) * gap].sum() / gap
    u[m - 1] = t[k:].sum() / (n - k)
    u = _clamp01(u)

    # Degeneracy constants are all 1, so position parameters pass through
    # unchanged and only the final distance parameter matters.
    xm = u[m - 1]
    xx = u[:m - 1]

    h = np.empty(m)
    big = m - 1
    for j in range(1, m + 1):
        if head == HEAD_CONCAVE:
            if j == 1:
                v = float(np.prod(np.sin(0.5 * np.pi * xx[:big])))
            elif j <= big:
                v = float(np.prod(np.sin(0.5 * np.pi * xx[:big - j + 1])))
                v *= np.cos(0.5 * np.pi * xx[big - j + 1])
            else:
                v = np.cos(0.5 * np.pi * xx[0])
        elif head == HEAD_CONVEX:
            if j == 1:
                v = float(np.prod(1.0 - np.cos(0.5 * np.pi * xx[:big])))
            elif j <= big:
                v = float(np.prod(1.0 - np.cos(0.5 * np.pi * xx[:big - j + 1])))
                v *= 1.0 - np.sin(0.5 * np.pi * xx[big - j + 1])
            else:
                v = 1.0 - np.sin(0.5 * np.pi * xx[0])
        else:  # HEAD_LINEAR
            if j == 1:
                v = float(np.prod(xx[:big]))
            elif j <= big:
                v = float(np.prod(xx[:big - j + 1]))
                v *= 1.0 - xx[big - j + 1]
            else:
                v = 1.0 - xx[0]
        h[j - 1] = min(max(v, 0.0), 1.0)

    if tail == TAIL_MIXED:
        # p0: alpha exponent, p1: number of front sections
        aux = 2.0 * p1 * np.pi
        v = (1.0 - xx[0] - np.cos(aux * xx[0] + 0.5 * np.pi) / aux) ** p0
        h[m - 1] = min(max(v, 0.0), 1.0)
    elif tail == TAIL_DISCONNECTED:
        # p0: alpha, p1: beta, p2: number of disconnected regions
        c = np.cos(p2 * np.pi * xx[0] ** p1)
        v = 1.0 - xx[0] ** p0 * c * c
        h[m - 1] = min(max(v, 0.0), 1.0)

    if expo != 1.0:
        h = h ** expo

    scale = 2.0 * np.arange(1, m + 1)
    return xm + scale * h


def replacement_sweep(F, X, W, z, order, f_off, x_off, nr):
    """Offer an offspring to subproblems in ``order``; accept at most nr.

    The offspring replaces incumbent j when its scalarized value for
    subproblem j's weight is <= the incumbent's. F and X are updated in
    place; returns the number of replacements.
    """
    WE = W[order]
    g_off = np.max(WE * np.abs(f_off - z), axis=1)
    g_inc = np.max(WE * np.abs(F[order] - z), axis=1)
    picked = order[g_off <= g_inc][:nr]
    F[picked] = f_off
    X[picked] = x_off
    return int(picked.shape[0])


def sparsity_among(F, m_neigh):
    """Vicinity-distance sparsity of each row among the whole set.

    Product of the m_neigh smallest distances from each point to the other
    points (self excluded). When fewer neighbors exist, all are used.
    """
    n = F.shape[0]
    diff = F[:, None, :] - F[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    np.fill_diagonal(dist, np.inf)
    k = min(m_neigh, n - 1)
    if k <= 0:
        return np.ones(n)
    nearest = np.partition(dist, k - 1, axis=1)[:, :k]
    return np.prod(nearest, axis=1)


def sparsity_against(A, P, m_neigh):
    """Vicinity-distance sparsity of each row of A with respect to set P."""
    diff = A[:, None, :] - P[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    k = min(m_neigh, P.shape[0])
    if k <= 0:
        return np.ones(A.shape[0])
    nearest = np.partition(dist, k - 1, axis=1)[:, :k]
    return np.prod(nearest, axis=1)


def trim_select(F, cap, m_neigh, remove_highest):
    """Remove members until at most ``cap`` survive; returns the alive mask.

    Each round recomputes every survivor's product of the m_neigh smallest
    distances to the other survivors, then drops the highest-sparsity
    (remove_highest) or lowest-sparsity member, ties toward the lower index.
    The pairwise distances are computed once; only the selection reruns.
    """
    n = F.shape[0]
    alive = np.ones(n, dtype=bool)
    n_alive = n
    if n_alive <= cap:
        return alive
    diff = F[:, None, :] - F[None, :, :]
    D = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    np.fill_diagonal(D, np.inf)
    while n_alive > cap:
        idx = np.flatnonzero(alive)
        sub = D[np.ix_(idx, idx)]
        k = min(m_neigh, n_alive - 1)
        if k <= 0:
            levels = np.ones(idx.shape[0])
        else:
            levels = np.prod(np.partition(sub, k - 1, axis=1)[:, :k], axis=1)
        pick = idx[int(np.argmax(levels) if remove_highest else np.argmin(levels))]
        alive[pick] = False
        n_alive -= 1
    return alive


def archive_insert_sweep(F, X, count, f, x):
    """Insert a candidate into the archive buffers unless beaten.

    Rejects the candidate when any member dominates or duplicates it;
    otherwise compacts away members the candidate dominates and appends it.
    Returns (new_count, added).
    """
    live = F[:count]
    if count:
        if bool((live <= f).all(axis=1).any()):  # dominated or duplicated
            return count, False
        beaten = (f <= live).all(axis=1) & (f < live).any(axis=1)
        if beaten.any():
            keep = ~beaten
            kept = int(keep.sum())
            F[:kept] = live[keep]
            X[:kept] = X[:count][keep]
            count = kept
    F[count] = f
    X[count] = x
    return count + 1, True


def polynomial_mutation_core(x, lower, upper, apply_u, perturb_u, p_m, eta):
    """Polynomial perturbation with pre-drawn uniforms (deterministic)."""
    span = upper - lower
    mutate = (apply_u < p_m) & (span > 0.0)
    if not mutate.any():
        return x.copy()
    d1 = (x - lower) / np.where(span > 0.0, span, 1.0)
    d2 = (upper - x) / np.where(span > 0.0, span, 1.0)
    u = perturb_u
    mpow = 1.0 / (eta + 1.0)
    low_val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta + 1.0)
    high_val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta + 1.0)
    delta = np.where(u < 0.5, low_val ** mpow - 1.0, 1.0 - high_val ** mpow)
    out = np.where(mutate, x + delta * span, x)
    return np.minimum(np.maximum(out, lower), upper)
