"""Two-sample rank-sum significance testing and campaign summary tables."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

DEFAULT_ALPHA = 0.05

# Largest pooled size for which the exact null distribution is enumerated.
EXACT_LIMIT = 20


@dataclass(frozen=True)
class RankSumResult:
    statistic: float   # rank sum of the first sample
    p_value: float
    reject: bool
    method: str        # "exact" or "normal"


def midranks(values) -> np.ndarray:
    """Ranks starting at 1; ties get the mean of the ranks they span."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    order = np.argsort(values, kind="stable")
    sv = values[order]
    ranks = np.empty(n)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _norm_sf(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def wilcoxon_rank_sum(a, b, alpha: float = DEFAULT_ALPHA,
                      method: str = "auto") -> RankSumResult:
    """Two-sided rank-sum test with midrank tie handling.

    The exact null distribution is enumerated when the pooled size is at
    most EXACT_LIMIT; larger samples use the normal approximation with tie
    and continuity corrections. The decision rejects when p < alpha.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise ValueError("both samples need at least 2 observations")
    if method not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown method {method!r}")
    n1, n2 = a.size, b.size
    pooled = np.concatenate([a, b])
    ranks = midranks(pooled)
    w_obs = float(ranks[:n1].sum())
    if method == "auto":
        method = "exact" if n1 + n2 <= EXACT_LIMIT else "normal"

    if method == "exact":
        # Midranks are multiples of 1/2, so sums compare exactly in floats.
        low = high = total = 0
        for combo in itertools.combinations(range(n1 + n2), n1):
            w = 0.0
            for idx in combo:
                w += ranks[idx]
            total += 1
            if w <= w_obs:
                low += 1
            if w >= w_obs:
                high += 1
        p = min(1.0, 2.0 * min(low, high) / total)
        return RankSumResult(w_obs, p, p < alpha, "exact")

    n = n1 + n2
    mu = n1 * (n + 1) / 2.0
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float((counts.astype(float) ** 3 - counts).sum())
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0.0:
        return RankSumResult(w_obs, 1.0, False, "normal")
    diff = w_obs - mu
    # continuity correction pulls the statistic half a rank toward the mean
    adj = abs(diff) - 0.5
    z = max(adj, 0.0) / math.sqrt(var)
    p = min(1.0, 2.0 * _norm_sf(z))
    return RankSumResult(w_obs, p, p < alpha, "normal")


@dataclass(frozen=True)
class SummaryRow:
    problem: str
    m: int
    algorithm: str
    runs: int
    mean: float
    std: float
    std_defined: bool
    best: float
    median: float
    highest_mean: bool
    significantly_best: bool


def summarize(samples: dict, alpha: float = DEFAULT_ALPHA) -> list[SummaryRow]:
    """Per-instance summary with significance marks.

    ``samples`` maps (problem, m) -> {algorithm: 1-d array of HV values}.
    Every instance must cover the same algorithms. An algorithm is starred
    when it beats each competitor in a pairwise two-sided rank-sum test at
    ``alpha`` while having the larger mean. Single-run samples report a
    standard deviation of 0 flagged as undefined.
    """
    rows: list[SummaryRow] = []
    expected = None
    for (problem, m), by_alg in sorted(samples.items()):
        algs = sorted(by_alg)
        if expected is None:
            expected = algs
        elif algs != expected:
            raise ValueError(
                f"algorithm coverage mismatch on {(problem, m)}: "
                f"{algs} != {expected}"
            )
        arrays = {alg: np.asarray(by_alg[alg], dtype=float) for alg in algs}
        means = {alg: float(arr.mean()) for alg, arr in arrays.items()}
        top_mean = max(means.values())
        can_test = all(arr.size >= 2 for arr in arrays.values()) and len(algs) > 1
        for alg in algs:
            arr = arrays[alg]
            star = False
            if can_test:
                star = all(
                    means[alg] > means[other]
                    and wilcoxon_rank_sum(arr, arrays[other], alpha).reject
                    for other in algs
                    if other != alg
                )
            std_defined = arr.size > 1
            rows.append(
                SummaryRow(
                    problem=problem,
                    m=m,
                    algorithm=alg,
                    runs=int(arr.size),
                    mean=means[alg],
                    std=float(arr.std(ddof=1)) if std_defined else 0.0,
                    std_defined=std_defined,
                    best=float(arr.max()),
                    median=float(np.median(arr)),
                    highest_mean=means[alg] == top_mean,
                    significantly_best=star,
                )
            )
    return rows


def summary_csv_lines(rows: list[SummaryRow]) -> list[str]:
    """Summary rows as CSV lines (header included)."""
    lines = ["problem,m,algorithm,runs,mean,std,std_defined,best,median,"
             "highest_mean,significantly_best"]
    for r in rows:
        lines.append(
            f"{r.problem},{r.m},{r.algorithm},{r.runs},{r.mean!r},{r.std!r},"
            f"{int(r.std_defined)},{r.best!r},{r.median!r},"
            f"{int(r.highest_mean)},{int(r.significantly_best)}"
        )
    return lines


def format_summary_table(rows: list[SummaryRow]) -> str:
    """Aligned text table, one line per (instance, algorithm)."""
    header = f"{'problem':<8} {'m':>2} {'algorithm':<10} {'runs':>4} " \
             f"{'mean':>10} {'std':>10} {'best':>10} {'median':>10} flags"
    lines = [header, "-" * len(header)]
    for r in rows:
        flags = []
        if r.highest_mean:
            flags.append("high")
        if r.significantly_best:
            flags.append("*")
        if not r.std_defined:
            flags.append("std-undefined")
        lines.append(
            f"{r.problem:<8} {r.m:>2} {r.algorithm:<10} {r.runs:>4} "
            f"{r.mean:>10.4f} {r.std:>10.2e} {r.best:>10.4f} "
            f"{r.median:>10.4f} {' '.join(flags)}"
        )
    return "\n".join(lines)
