import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from goid import _kernels_py, kernels

compiled = pytest.importorskip("goid._kernels")

small = arrays(np.int64, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=st.integers(-9, 9))


@settings(max_examples=50, deadline=None)
@given(small, st.integers(1, 6), st.integers(0, 1000))
def test_matmul_backends_agree(a, cols, seed):
    b = np.random.default_rng(seed).integers(-9, 10, size=(a.shape[1], cols), dtype=np.int64)
    want = a.astype(object) @ b.astype(object)
    for impl in (compiled, _kernels_py):
        assert np.array_equal(impl.int_matmul(a, b), want.astype(np.int64))


@pytest.mark.parametrize("impl", [compiled, _kernels_py])
def test_overflow_is_reported(impl):
    big = np.full((2, 2), 2**62, dtype=np.int64)
    with pytest.raises(OverflowError):
        impl.int_matmul(big, big)


def test_exact_matmul_falls_back_to_python_integers():
    big = np.full((2, 2), 2**62, dtype=np.int64)
    out = kernels.exact_matmul(big, big)
    assert out[0, 0] == 2 * 2**124


@pytest.mark.parametrize("n,vmax", [(1, 3), (3, 7), (5, 11), (6, 13)])
def test_monotone_scan_backends_agree(n, vmax):
    assert tuple(compiled.monotone_scan(n, vmax)) == tuple(_kernels_py.monotone_scan(n, vmax))


def test_backend_flag():
    assert kernels.BACKEND in ("compiled", "python")
