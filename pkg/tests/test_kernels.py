import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from tileforge._kernels import KERNEL_NAMES, fits_int64, get_backend, numpy_impl

numba_impl = pytest.importorskip("tileforge._kernels.numba_impl")

small = st.integers(-50, 50)


def int_rows(m, max_rows=60):
    return hnp.arrays(np.int64, st.tuples(st.integers(1, max_rows), st.just(m)), elements=small)


def test_backends_expose_same_kernels():
    for name in KERNEL_NAMES:
        assert callable(getattr(numpy_impl, name))
        assert callable(getattr(numba_impl, name))


def test_get_backend():
    assert get_backend("numpy") is numpy_impl
    assert get_backend("numba").NAME == "numba"
    with pytest.raises(ValueError):
        get_backend("cuda")


def test_fits_int64():
    assert fits_int64(2**62 - 1) and not fits_int64(2**62)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(hnp.arrays(np.int64, (m, m), elements=small), int_rows(m))), st.integers(1, 200))
def test_centered_mask_parity(case, q):
    adj, pts = case
    a = numpy_impl.centered_mask(adj, q, pts)
    b = numba_impl.centered_mask(adj, q, pts)
    np.testing.assert_array_equal(np.asarray(a, dtype=bool), np.asarray(b, dtype=bool))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(hnp.arrays(np.int64, (m, m), elements=small), int_rows(m), int_rows(m, 10))))
def test_level_step_parity(case):
    A, prev, D = case
    np.testing.assert_array_equal(numpy_impl.level_step(A, prev, D), numba_impl.level_step(A, prev, D))


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.integers(-500, 500), min_size=1, max_size=200, unique=True),
    st.lists(st.integers(-40, 40).filter(bool), min_size=1, max_size=4, unique=True),
)
def test_component_labels_parity(keys, offsets):
    keys = np.array(sorted(keys), dtype=np.int64)
    offsets = np.array(offsets, dtype=np.int64)
    a = numpy_impl.component_labels(keys, offsets)
    b = numba_impl.component_labels(keys, offsets)
    np.testing.assert_array_equal(a, b)
    # labels are component minima: every label points at itself
    np.testing.assert_array_equal(a[a], a)
    assert np.all(a <= np.arange(len(keys)))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 40).flatmap(lambda n: hnp.arrays(np.int64, (n, 4), elements=st.integers(-2, n - 1))))
def test_prune_parity(targets):
    alive = np.ones(targets.shape[0], dtype=np.bool_)
    a = numpy_impl.prune_fixed_point(targets, alive)
    b = numba_impl.prune_fixed_point(targets, alive)
    np.testing.assert_array_equal(np.asarray(a, dtype=bool), np.asarray(b, dtype=bool))


@settings(max_examples=150, deadline=None)
@given(
    hnp.arrays(np.int64, st.integers(1, 100), elements=st.integers(-10**6, 10**6)),
    st.integers(-1000, 1000),
    st.integers(-10**6, 10**6),
    st.integers(1, 10**5),
    st.integers(1, 512),
)
def test_bin_coords_parity(X, scale, offset, denom, n):
    a = numpy_impl.bin_coords(X, scale, offset, denom, n)
    b = numba_impl.bin_coords(X, scale, offset, denom, n)
    np.testing.assert_array_equal(a, b)
    expected = [min(max((int(x) * scale - offset) // denom, 0), n - 1) for x in X]
    assert list(map(int, a)) == expected


def test_numpy_kernels_accept_object_dtype():
    big = 2**80
    pts = np.array([[big, 1], [0, 0]], dtype=object)
    A = np.array([[2, 0], [0, 2]], dtype=object)
    D = np.array([[0, 0], [1, 1]], dtype=object)
    out = numpy_impl.level_step(A, pts, D)
    assert out[0, 0] == 2 * big and out[1, 0] == 2 * big + 1


@pytest.mark.parametrize("backend", ["numba", "numpy"])
def test_backend_env_flag(backend):
    code = "import tileforge._kernels as k; print(k.backend_name)"
    env = dict(os.environ, TILEFORGE_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == backend
    assert "Warning" not in out.stderr
