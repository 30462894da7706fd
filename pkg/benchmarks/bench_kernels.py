#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-numpy fallback.

Times each hot kernel on representative workload sizes, then a full
2-objective run end to end per backend.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from moead_uraw import kernels
from moead_uraw.core import rng_stream
from moead_uraw.engine import RunConfig, run


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(backend):
    rng = rng_stream(1234)
    n_var, m, n_pop = 12, 3, 120
    upper = 2.0 * np.arange(1, n_var + 1)
    x = rng.random(n_var) * upper
    F = rng.random((n_pop, m))
    X = rng.random((n_pop, n_var)) * upper
    W = rng.random((n_pop, m)) + 0.01
    W /= W.sum(axis=1, keepdims=True)
    z = np.zeros(m)
    order = rng.permutation(n_pop)
    f_off = rng.random(m)
    x_off = rng.random(n_var) * upper
    ep = rng.random((240, m))
    au, pu = rng.random(n_var), rng.random(n_var)

    def bench_wfg():
        for _ in range(1000):
            backend.wfg_pipeline(x, upper, 2, m, 0, 0, 1.0, 1.0, 5.0, 5.0)

    def bench_replace():
        Fc, Xc = F.copy(), X.copy()
        for _ in range(1000):
            backend.replacement_sweep(Fc, Xc, W, z, order, f_off, x_off, 2)

    def bench_sparsity():
        for _ in range(20):
            backend.sparsity_among(ep, m)

    def bench_trim():
        for _ in range(5):
            backend.trim_select(ep, 120, m, True)

    def bench_mutation():
        for _ in range(1000):
            backend.polynomial_mutation_core(x, np.zeros(n_var), upper, au, pu,
                                             1.0 / n_var, 20.0)

    return {
        "wfg_pipeline x1000": bench_wfg,
        "replacement_sweep x1000": bench_replace,
        "sparsity_among(240) x20": bench_sparsity,
        "trim_select(240->120) x5": bench_trim,
        "polynomial_mutation x1000": bench_mutation,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repeats, best-of reported (default 5)")
    args = parser.parse_args()

    names = kernels.available_backends()
    print(f"backends: {names}")
    results = {}
    for name in names:
        backend = kernels.resolve_backend(name)
        cases = kernel_cases(backend)
        for label, fn in cases.items():
            fn()  # warmup / JIT compile
            results[(label, name)] = best_of(fn, args.repeat)

    labels = sorted({label for label, _ in results})
    width = max(len(lbl) for lbl in labels)
    header = f"{'kernel':<{width}} " + " ".join(f"{n:>12}" for n in names)
    print(header)
    print("-" * len(header))
    for label in labels:
        row = f"{label:<{width}} "
        row += " ".join(f"{results[(label, n)] * 1e3:>10.2f}ms" for n in names)
        if len(names) == 2 and results[(label, names[0])] > 0:
            ratio = results[(label, names[1])] / results[(label, names[0])]
            row += f"   x{ratio:.1f}"
        print(row)

    print()
    cfg = RunConfig.for_algorithm("URAW", problem="WFG4", m=2,
                                  max_generations=400, seed=7)
    for name in names:
        kernels.use_backend(name)
        run(RunConfig.for_algorithm("URAW", problem="WFG4", m=2,
                                    max_generations=5, seed=7))  # warmup
        t = best_of(lambda: run(cfg), max(1, args.repeat - 3))
        print(f"end-to-end URAW WFG4 m=2 400 gens [{name:>5}]: {t:6.2f}s")
    kernels.use_backend("auto")


if __name__ == "__main__":
    main()
