import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mcst import kernels

needs_numba = pytest.mark.skipif(kernels.backend() != "numba", reason="numba unavailable")


def brute_subset(w):
    n = len(w)
    return [sum(w[j] for j in range(n) if m >> j & 1) for m in range(1 << n)]


def brute_induced(n, ends, w):
    return [sum(x for (a, b), x in zip(ends, w) if m >> a & 1 and m >> b & 1)
            for m in range(1 << n)]


@given(st.lists(st.integers(-1000, 1000), max_size=10))
def test_subset_sums_numpy(w):
    assert kernels.subset_sums(w, force="numpy").tolist() == brute_subset(w)


@needs_numba
@given(st.lists(st.integers(-1000, 1000), max_size=10))
def test_subset_sums_backends_agree(w):
    a = kernels.subset_sums(w, force="numpy")
    b = kernels.subset_sums(w, force="numba")
    assert np.array_equal(a, b)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(1, 8))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    ends = draw(st.lists(st.sampled_from(pairs), max_size=15)) if pairs else []
    w = draw(st.lists(st.integers(0, 50), min_size=len(ends), max_size=len(ends)))
    return n, ends, w


@given(small_graphs())
def test_induced_sums_numpy(g):
    n, ends, w = g
    assert kernels.induced_sums(n, ends, w, force="numpy").tolist() == brute_induced(n, ends, w)


@needs_numba
@given(small_graphs())
def test_induced_sums_backends_agree(g):
    n, ends, w = g
    a = kernels.induced_sums(n, ends, w, force="numpy")
    b = kernels.induced_sums(n, ends, w, force="numba")
    assert np.array_equal(a, b)


def test_popcounts():
    assert kernels.popcounts(4, force="numpy").tolist() == [bin(m).count("1") for m in range(16)]
    if kernels.backend() == "numba":
        assert kernels.popcounts(4, force="numba").tolist() == [bin(m).count("1")
                                                                for m in range(16)]


def test_big_values_stay_exact():
    w = [2**61, 2**61, 3]
    out = kernels.subset_sums(w)
    assert out.dtype == object
    assert out.tolist() == brute_subset(w)
    out = kernels.induced_sums(3, [(0, 1), (1, 2)], [2**62, 5])
    assert out.tolist() == brute_induced(3, [(0, 1), (1, 2)], [2**62, 5])


def test_scale():
    from fractions import Fraction as F

    ints, den = kernels.scale([F(1, 2), F(1, 3), F(2)])
    assert den == 6 and ints == [3, 2, 12]


def test_env_flag_selects_numpy():
    env = dict(os.environ, MCST_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", "from mcst import kernels; print(kernels.backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_pipeline_identical_under_numpy_backend():
    code = ("import json; from mcst import fixtures; from mcst.rounding import mcst_pipeline; "
            "print(json.dumps(mcst_pipeline(fixtures.e3()).to_json(), sort_keys=True))")
    outs = []
    for backend in ("numpy", "numba"):
        env = dict(os.environ, MCST_BACKEND=backend)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                   text=True, check=True).stdout)
    assert outs[0] == outs[1]
