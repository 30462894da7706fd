"""The jitted kernels and the pure-numpy fallback must agree everywhere."""

import numpy as np
import pytest

from moead_uraw import kernels
from moead_uraw.core import rng_stream

numba_backend = kernels.resolve_backend("numpy")
HAVE_NUMBA = "numba" in kernels.available_backends()

pytestmark = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


@pytest.fixture
def backends():
    return kernels.resolve_backend("numba"), kernels.resolve_backend("numpy")


class TestKernelAgreement:
    def test_wfg_pipeline(self, backends):
        nb, npb = backends
        rng = rng_stream(1)
        ub = 2.0 * np.arange(1, 13)
        cases = [
            (0, 0, 1.0), (1, 0, 1.0), (2, 0, 1.0),
            (0, 0, 0.5), (1, 0, 2.0), (0, 1, 1.0), (1, 2, 1.0),
        ]
        for m in (2, 3, 4):
            k = 2 if m == 2 else m - 1
            if k % (m - 1):
                continue
            for head, tail, expo in cases:
                for _ in range(25):
                    x = rng.random(12) * ub
                    a = nb.wfg_pipeline(x, ub, k, m, head, tail, expo, 1.0, 5.0, 5.0)
                    b = npb.wfg_pipeline(x, ub, k, m, head, tail, expo, 1.0, 5.0, 5.0)
                    np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-14)

    def test_replacement_sweep(self, backends):
        nb, npb = backends
        rng = rng_stream(2)
        for _ in range(50):
            n, m, nd = 20, 3, 5
            F = rng.random((n, m))
            X = rng.random((n, nd))
            W = rng.random((n, m)) + 0.01
            W /= W.sum(1, keepdims=True)
            z = np.zeros(m)
            order = rng.permutation(n)
            f_off = rng.random(m)
            x_off = rng.random(nd)
            Fa, Xa = F.copy(), X.copy()
            Fb, Xb = F.copy(), X.copy()
            ca = nb.replacement_sweep(Fa, Xa, W, z, order, f_off, x_off, 2)
            cb = npb.replacement_sweep(Fb, Xb, W, z, order, f_off, x_off, 2)
            assert ca == cb
            np.testing.assert_array_equal(Fa, Fb)
            np.testing.assert_array_equal(Xa, Xb)

    def test_sparsity_kernels(self, backends):
        nb, npb = backends
        rng = rng_stream(3)
        for n, m in [(10, 2), (60, 3), (150, 6)]:
            F = rng.random((n, m))
            np.testing.assert_allclose(
                nb.sparsity_among(F, m), npb.sparsity_among(F, m), rtol=1e-12
            )
            A = rng.random((n // 2, m))
            np.testing.assert_allclose(
                nb.sparsity_against(A, F, m), npb.sparsity_against(A, F, m),
                rtol=1e-12,
            )

    def test_trim_select(self, backends):
        nb, npb = backends
        rng = rng_stream(4)
        for _ in range(20):
            f1 = np.sort(rng.random(40))
            F = np.column_stack([f1, 1.0 - f1])
            for policy in (True, False):
                a = nb.trim_select(F, 25, 2, policy)
                b = npb.trim_select(F, 25, 2, policy)
                np.testing.assert_array_equal(a, b)

    def test_archive_insert_sweep(self, backends):
        nb, npb = backends
        rng = rng_stream(5)
        Fa = np.empty((64, 2))
        Xa = np.empty((64, 3))
        Fb = np.empty((64, 2))
        Xb = np.empty((64, 3))
        ca = cb = 0
        for _ in range(300):
            f = rng.random(2)
            x = rng.random(3)
            ca, added_a = nb.archive_insert_sweep(Fa, Xa, ca, f, x)
            cb, added_b = npb.archive_insert_sweep(Fb, Xb, cb, f, x)
            assert (ca, added_a) == (cb, added_b)
            np.testing.assert_array_equal(Fa[:ca], Fb[:cb])

    def test_polynomial_mutation_core(self, backends):
        nb, npb = backends
        rng = rng_stream(6)
        lower = np.zeros(8)
        upper = 2.0 * np.arange(1, 9)
        for _ in range(100):
            x = rng.random(8) * upper
            au, pu = rng.random(8), rng.random(8)
            a = nb.polynomial_mutation_core(x, lower, upper, au, pu, 0.5, 20.0)
            b = npb.polynomial_mutation_core(x, lower, upper, au, pu, 0.5, 20.0)
            np.testing.assert_allclose(a, b, rtol=1e-15, atol=1e-15)


class TestBackendSelection:
    def test_both_registered(self):
        assert kernels.available_backends() == ["numba", "numpy"]

    def test_resolve_names(self):
        assert kernels.resolve_backend("numpy").NAME == "numpy"
        assert kernels.resolve_backend("numba").NAME == "numba"
        with pytest.raises(ValueError):
            kernels.resolve_backend("fortran")

    def test_use_backend_switches_engine(self):
        from moead_uraw.engine import RunConfig, run

        previous = kernels.active.NAME
        try:
            cfg = RunConfig.for_algorithm(
                "URAW", problem="WFG4", m=2, pop_size=20,
                neighborhood_size=6, max_generations=8, seed=42,
            )
            kernels.use_backend("numba")
            rec_nb = run(cfg)
            kernels.use_backend("numpy")
            rec_np = run(cfg)
        finally:
            kernels.use_backend(previous)
        # same draws, same math up to float associativity differences
        np.testing.assert_allclose(
            rec_nb.objectives, rec_np.objectives, rtol=1e-9, atol=1e-9
        )
