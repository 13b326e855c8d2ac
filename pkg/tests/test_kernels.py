import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from skewps import _pykernels, kernels
from skewps.fields import field


@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 1), (2, 2), (3, 2), (5, 1)]),
       st.integers(1, 3), st.integers(1, 9), st.integers(1, 9), st.integers(1, 12))
def test_backends_agree(seed, pk, s, la, lb, L):
    p, k = pk
    F = field(p, k)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    A = rng.integers(0, p, size=(n, s, s, la, k))
    B = rng.integers(0, p, size=(1, s, s, lb, k))
    want = _pykernels.batch_mul(A, B, L, p, F.red)
    got = kernels.batch_mul(A, B, L, p, F.red)
    assert got.shape == want.shape
    assert np.array_equal(got % p, want % p)


def test_scalar_product_oracle():
    # (1 + pi)(1 + pi) = 1 + pi^2 over F_2
    F = field(2, 1)
    A = np.array([1, 1]).reshape(1, 1, 1, 2, 1)
    out = kernels.batch_mul(A, A, 3, 2, F.red)
    assert out[0, 0, 0, :, 0].tolist() == [1, 0, 1]


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "numpy")


def test_pure_flag_selects_numpy_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, SKEWPS_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import skewps.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
