"""Kernel backends: eigensolver and polynomial recurrences, both paths."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from micz9 import _backend as bk


def dense(d, e):
    T = np.diag(d)
    n = len(d)
    for i in range(n - 1):
        T[i, i + 1] = T[i + 1, i] = e[i]
    return T


def test_eigh_2x2_closed_form():
    d = np.array([0.0, -8.0])
    e = np.array([-1.0])
    w, V = bk.tridiag_eigh(d, e)
    np.testing.assert_allclose(w, [-4 - math.sqrt(17), -4 + math.sqrt(17)], rtol=1e-15)
    T = dense(d, e)
    assert np.abs(T @ V - V * w).max() < 1e-13


def test_eigh_diagonal_and_trivial():
    d = np.array([3.0, -1.0, 2.0])
    w, V = bk.tridiag_eigh(d, np.zeros(2))
    np.testing.assert_allclose(w, sorted(d))
    assert np.abs(np.abs(V).sum(axis=0) - 1).max() < 1e-12  # unit vectors
    w, V = bk.tridiag_eigh(np.array([5.0]), np.zeros(0))
    assert w[0] == 5.0 and V[0, 0] == 1.0


def test_eigh_repeated_diagonal():
    d = np.array([2.0, 2.0, 2.0])
    w, V = bk.tridiag_eigh(d, np.zeros(2))
    np.testing.assert_allclose(w, d)
    assert np.abs(V.T @ V - np.eye(3)).max() < 1e-12


@settings(max_examples=60, deadline=None)
@given(
    d=arrays(np.float64, st.integers(2, 12), elements=st.floats(-50, 50)),
    seed=st.integers(0, 2**31),
)
def test_eigh_vs_numpy_random(d, seed):
    n = d.shape[0]
    rng = np.random.default_rng(seed)
    e = rng.uniform(-10, 10, n - 1)
    w, V = bk.tridiag_eigh(d, e)
    ref = np.linalg.eigvalsh(dense(d, e))
    scale = max(np.abs(d).max() + np.abs(e).max(), 1.0)
    assert np.abs(w - ref).max() <= 1e-12 * scale
    T = dense(d, e)
    assert np.abs(T @ V - V * w).max() <= 1e-11 * scale
    assert np.abs(V.T @ V - np.eye(n)).max() <= 1e-10


def test_sturm_count_matches_numpy():
    rng = np.random.default_rng(7)
    d = rng.uniform(-5, 5, 9)
    e = rng.uniform(-3, 3, 8)
    ref = np.linalg.eigvalsh(dense(d, e))
    for x in (-7.0, -1.0, 0.0, 0.5, 4.0, 9.0):
        assert bk._sturm_count(d, e * e, x, 1e-290) == int((ref < x).sum())


def test_laguerre_explicit():
    x = np.linspace(0.0, 9.0, 31)
    np.testing.assert_allclose(bk.laguerre(0, 3.0, x), np.ones_like(x))
    np.testing.assert_allclose(bk.laguerre(1, 2.0, x), 3.0 - x, rtol=1e-15)
    l2 = 0.5 * (x * x - 2 * (2.0 + 2) * x + (2.0 + 1) * (2.0 + 2))
    np.testing.assert_allclose(bk.laguerre(2, 2.0, x), l2, rtol=2e-14, atol=1e-13)
    assert bk.laguerre(-1, 2.0, 1.0) == 0.0
    assert bk.laguerre(3, 1.0, 0.0) == pytest.approx(math.comb(4, 3))


def test_jacobi_explicit():
    x = np.linspace(-1.0, 1.0, 21)
    np.testing.assert_allclose(bk.jacobi(0, 3.0, 5.0, x), np.ones_like(x))
    np.testing.assert_allclose(bk.jacobi(1, 0.0, 0.0, x), x, atol=1e-15)  # Legendre
    p1 = (2.0 + 1) + (2.0 + 3.0 + 2) * (x - 1) / 2
    np.testing.assert_allclose(bk.jacobi(1, 2.0, 3.0, x), p1, rtol=1e-14, atol=1e-14)
    # endpoint value binom(k+p, k)
    assert bk.jacobi(2, 3.0, 5.0, 1.0) == pytest.approx(math.comb(5, 2))
    assert bk.jacobi(-1, 1.0, 1.0, 0.3) == 0.0


def test_numpy_and_selected_backend_agree():
    rng = np.random.default_rng(3)
    d = rng.uniform(-5, 5, 14)
    e = rng.uniform(-3, 3, 13)
    w_sel = bk.tridiag_eigenvalues(d, e)
    w_np = bk._np_eigvals_bisect(d, e, 1e-14)
    scale = np.abs(d).max() + np.abs(e).max()
    assert np.abs(w_sel - w_np).max() <= 1e-13 * scale

    x = np.linspace(0, 20, 57)
    sel = bk.laguerre(7, 8.0, x)
    ref = bk._np_laguerre(7, 8.0, x)
    np.testing.assert_allclose(sel, ref, rtol=1e-13)
    sel = bk.jacobi(6, 3.0, 7.0, np.linspace(-1, 1, 57))
    ref = bk._np_jacobi(6, 3.0, 7.0, np.linspace(-1, 1, 57))
    np.testing.assert_allclose(sel, ref, rtol=1e-12, atol=1e-13)


def test_env_flag_selects_numpy():
    env = dict(os.environ, MICZ9_BACKEND="numpy")
    code = "import micz9; print(micz9.BACKEND)"
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "numpy"


def test_env_flag_rejects_garbage():
    env = dict(os.environ, MICZ9_BACKEND="cuda")
    out = subprocess.run(
        [sys.executable, "-c", "import micz9"], env=env, capture_output=True, text=True
    )
    assert out.returncode != 0
