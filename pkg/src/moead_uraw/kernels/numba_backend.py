"""Numba-jitted implementations of the hot inner-loop kernels.

Explicit-loop twins of ``numpy_backend``; selected by default when numba is
importable. Compiled objects are cached on disk, so the JIT cost is paid once
per machine rather than once per process.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NAME = "numba"

HEAD_CONCAVE, HEAD_CONVEX, HEAD_LINEAR = 0, 1, 2
TAIL_SAME, TAIL_MIXED, TAIL_DISCONNECTED = 0, 1, 2

_MM_A = 30.0
_MM_B = 10.0
_MM_C = 0.35


@njit(cache=True)
def wfg_pipeline(x, upper, k, m, head, tail, expo, p0, p1, p2):
    n = x.shape[0]
    t = np.empty(n)
    for i in range(n):
        y = x[i] / upper[i]
        t1 = abs(y - _MM_C) / (2.0 * (np.floor(_MM_C - y) + _MM_C))
        t2 = (4.0 * _MM_A + 2.0) * np.pi * (0.5 - t1)
        v = (1.0 + np.cos(t2) + 4.0 * _MM_B * t1 * t1) / (_MM_B + 2.0)
        t[i] = min(max(v, 0.0), 1.0)

    gap = k // (m - 1)
    u = np.empty(m)
    for i in range(m - 1):
        s = 0.0
        for j in range(i * gap, (i + 1) * gap):
            s += t[j]
        u[i] = min(max(s / gap, 0.0), 1.0)
    s = 0.0
    for j in range(k, n):
        s += t[j]
    u[m - 1] = min(max(s / (n - k), 0.0), 1.0)

    xm = u[m - 1]
    big = m - 1

    h = np.empty(m)
    for j in range(1, m + 1):
        if head == HEAD_CONCAVE:
            if j == 1:
                v = 1.0
                for i in range(big):
                    v *= np.sin(0.5 * np.pi * u[i])
            elif j <= big:
                v = 1.0
                for i in range(big - j + 1):
                    v *= np.sin(0.5 * np.pi * u[i])
                v *= np.cos(0.5 * np.pi * u[big - j + 1])
            else:
                v = np.cos(0.5 * np.pi * u[0])
        elif head == HEAD_CONVEX:
            if j == 1:
                v = 1.0
                for i in range(big):
                    v *= 1.0 - np.cos(0.5 * np.pi * u[i])
            elif j <= big:
                v = 1.0
                for i in range(big - j + 1):
                    v *= 1.0 - np.cos(0.5 * np.pi * u[i])
                v *= 1.0 - np.sin(0.5 * np.pi * u[big - j + 1])
            else:
                v = 1.0 - np.sin(0.5 * np.pi * u[0])
        else:
            if j == 1:
                v = 1.0
                for i in range(big):
                    v *= u[i]
            elif j <= big:
                v = 1.0
                for i in range(big - j + 1):
                    v *= u[i]
                v *= 1.0 - u[big - j + 1]
            else:
                v = 1.0 - u[0]
        h[j - 1] = min(max(v, 0.0), 1.0)

    if tail == TAIL_MIXED:
        aux = 2.0 * p1 * np.pi
        v = (1.0 - u[0] - np.cos(aux * u[0] + 0.5 * np.pi) / aux) ** p0
        h[m - 1] = min(max(v, 0.0), 1.0)
    elif tail == TAIL_DISCONNECTED:
        c = np.cos(p2 * np.pi * u[0] ** p1)
        v = 1.0 - u[0] ** p0 * c * c
        h[m - 1] = min(max(v, 0.0), 1.0)

    f = np.empty(m)
    for j in range(m):
        hv = h[j]
        if expo != 1.0:
            hv = hv ** expo
        f[j] = xm + 2.0 * (j + 1) * hv
    return f


@njit(cache=True)
def replacement_sweep(F, X, W, z, order, f_off, x_off, nr):
    m = F.shape[1]
    n_dec = X.shape[1]
    count = 0
    for oi in range(order.shape[0]):
        if count >= nr:
            break
        j = order[oi]
        g_off = 0.0
        g_inc = 0.0
        for q in range(m):
            a = W[j, q] * abs(f_off[q] - z[q])
            if a > g_off:
                g_off = a
            b = W[j, q] * abs(F[j, q] - z[q])
            if b > g_inc:
                g_inc = b
        if g_off <= g_inc:
            for q in range(m):
                F[j, q] = f_off[q]
            for q in range(n_dec):
                X[j, q] = x_off[q]
            count += 1
    return count


@njit(cache=True)
def _k_smallest_product(dist, k):
    # repeated min-extraction; k is at most the objective count (tiny)
    prod = 1.0
    for _ in range(k):
        best = np.inf
        best_i = -1
        for i in range(dist.shape[0]):
            if dist[i] < best:
                best = dist[i]
                best_i = i
        prod *= best
        dist[best_i] = np.inf
    return prod


@njit(cache=True)
def sparsity_among(F, m_neigh):
    n = F.shape[0]
    m = F.shape[1]
    out = np.empty(n)
    k = min(m_neigh, n - 1)
    if k <= 0:
        for i in range(n):
            out[i] = 1.0
        return out
    dist = np.empty(n)
    for i in range(n):
        for j in range(n):
            if j == i:
                dist[j] = np.inf
            else:
                s = 0.0
                for q in range(m):
                    d = F[i, q] - F[j, q]
                    s += d * d
                dist[j] = np.sqrt(s)
        out[i] = _k_smallest_product(dist, k)
    return out


@njit(cache=True)
def sparsity_against(A, P, m_neigh):
    na = A.shape[0]
    npop = P.shape[0]
    m = A.shape[1]
    out = np.empty(na)
    k = min(m_neigh, npop)
    if k <= 0:
        for i in range(na):
            out[i] = 1.0
        return out
    dist = np.empty(npop)
    for i in range(na):
        for j in range(npop):
            s = 0.0
            for q in range(m):
                d = A[i, q] - P[j, q]
                s += d * d
            dist[j] = np.sqrt(s)
        out[i] = _k_smallest_product(dist, k)
    return out


@njit(cache=True)
def trim_select(F, cap, m_neigh, remove_highest):
    """Remove members until at most ``cap`` survive; returns the alive mask.

    Each round recomputes every member's product of the m_neigh smallest
    distances to the other survivors, then drops the highest-sparsity
    (remove_highest) or lowest-sparsity member, ties toward the lower index.
    The pairwise distances are computed once; only the selection loops rerun.
    """
    n = F.shape[0]
    m = F.shape[1]
    alive = np.ones(n, np.bool_)
    n_alive = n
    if n_alive <= cap:
        return alive
    D = np.empty((n, n))
    for i in range(n):
        D[i, i] = np.inf
        for j in range(i + 1, n):
            s = 0.0
            for q in range(m):
                d = F[i, q] - F[j, q]
                s += d * d
            d = np.sqrt(s)
            D[i, j] = d
            D[j, i] = d
    buf = np.empty(m_neigh)
    while n_alive > cap:
        k = min(m_neigh, n_alive - 1)
        best_val = -1.0 if remove_highest else np.inf
        best_i = -1
        for i in range(n):
            if not alive[i]:
                continue
            cnt = 0
            for j in range(n):
                if j == i or not alive[j]:
                    continue
                d = D[i, j]
                if cnt < k:
                    pos = cnt
                    while pos > 0 and buf[pos - 1] > d:
                        buf[pos] = buf[pos - 1]
                        pos -= 1
                    buf[pos] = d
                    cnt += 1
                elif d < buf[k - 1]:
                    pos = k - 1
                    while pos > 0 and buf[pos - 1] > d:
                        buf[pos] = buf[pos - 1]
                        pos -= 1
                    buf[pos] = d
            level = 1.0
            for q in range(cnt):
                level *= buf[q]
            if best_i == -1:
                best_val = level
                best_i = i
            elif remove_highest:
                if level > best_val:
                    best_val = level
                    best_i = i
            else:
                if level < best_val:
                    best_val = level
                    best_i = i
        alive[best_i] = False
        n_alive -= 1
    return alive


@njit(cache=True)
def archive_insert_sweep(F, X, count, f, x):
    """Insert a candidate into the archive buffers unless beaten.

    Rejects the candidate when any member dominates or duplicates it;
    otherwise compacts away members the candidate dominates and appends it.
    Returns (new_count, added).
    """
    m = F.shape[1]
    n_dec = X.shape[1]
    for i in range(count):
        le = True
        for q in range(m):
            if F[i, q] > f[q]:
                le = False
                break
        if le:  # member dominates (le & lt) or duplicates (le & not lt)
            return count, False
    w = 0
    for i in range(count):
        ge = True
        gt = False
        for q in range(m):
            if f[q] > F[i, q]:
                ge = False
                break
            if f[q] < F[i, q]:
                gt = True
        if not (ge and gt):
            if w != i:
                for q in range(m):
                    F[w, q] = F[i, q]
                for q in range(n_dec):
                    X[w, q] = X[i, q]
            w += 1
    for q in range(m):
        F[w, q] = f[q]
    for q in range(n_dec):
        X[w, q] = x[q]
    return w + 1, True


@njit(cache=True)
def polynomial_mutation_core(x, lower, upper, apply_u, perturb_u, p_m, eta):
    n = x.shape[0]
    out = np.empty(n)
    mpow = 1.0 / (eta + 1.0)
    for j in range(n):
        span = upper[j] - lower[j]
        if apply_u[j] < p_m and span > 0.0:
            d1 = (x[j] - lower[j]) / span
            d2 = (upper[j] - x[j]) / span
            u = perturb_u[j]
            if u < 0.5:
                val = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta + 1.0)
                delta = val ** mpow - 1.0
            else:
                val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta + 1.0)
                delta = 1.0 - val ** mpow
            v = x[j] + delta * span
            out[j] = min(max(v, lower[j]), upper[j])
        else:
            out[j] = x[j]
    return out
