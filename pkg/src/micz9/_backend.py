"""Numerical kernels with a numba fast path and a pure-numpy fallback.

The env var MICZ9_BACKEND selects the implementation:

* ``auto`` (default): numba when importable, else numpy;
* ``numba``: require numba, fail loudly if missing;
* ``numpy``: force the vectorized numpy path (useful for debugging and
  as the baseline in benchmarks/bench_backends.py).

Kernels: symmetric tridiagonal eigenvalues by bisection on Sturm
sign-count sequences, eigenvectors by inverse iteration with a partially
pivoted tridiagonal solve, and generalized Laguerre / Jacobi polynomial
evaluation by their three-term recurrences.  Both paths implement the
same arithmetic; tests cross-check them against each other and against
dense numpy eigendecompositions.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ConvergenceFailure

_EPS = float(np.finfo(np.float64).eps)
_PIVMIN_FLOOR = 1e-290

_env = os.environ.get("MICZ9_BACKEND", "auto").strip().lower()
if _env not in ("auto", "numba", "numpy"):
    raise ImportError(f"MICZ9_BACKEND must be auto|numba|numpy, got {_env!r}")

_HAVE_NUMBA = False
if _env != "numpy":
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        if _env == "numba":
            raise

if not _HAVE_NUMBA:

    def njit(*args, **kwargs):  # no-op decorator for the fallback path
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


BACKEND = "numba" if _HAVE_NUMBA else "numpy"


# ----------------------------------------------------------------------
# scalar-loop kernels (compiled under numba; also usable uncompiled)
# ----------------------------------------------------------------------


@njit(cache=True)
def _sturm_count(d, e2, x, pivmin):
    """Eigenvalues not above x (LDL^T sign count; zero pivots count negative)."""
    n = d.shape[0]
    cnt = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        cnt += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            cnt += 1
    return cnt


@njit(cache=True)
def _eigvals_bisect(d, e, rtol):
    n = d.shape[0]
    w = np.empty(n, dtype=np.float64)
    if n == 1:
        w[0] = d[0]
        return w
    e2 = e * e
    pivmin = _PIVMIN_FLOOR
    for i in range(n - 1):
        if e2[i] * _PIVMIN_FLOOR > pivmin:
            pivmin = e2[i] * _PIVMIN_FLOOR
    lo = d[0] - abs(e[0])
    hi = d[0] + abs(e[0])
    for i in range(1, n):
        r = abs(e[i - 1])
        if i < n - 1:
            r += abs(e[i])
        if d[i] - r < lo:
            lo = d[i] - r
        if d[i] + r > hi:
            hi = d[i] + r
    scale = max(abs(lo), abs(hi), 1e-300)
    lo -= 2.0 * _EPS * scale + pivmin
    hi += 2.0 * _EPS * scale + pivmin
    for k in range(n):
        a = lo
        b = hi
        for _ in range(250):
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            if (b - a) <= rtol * max(abs(a), abs(b)):
                break
            if _sturm_count(d, e2, mid, pivmin) <= k:
                a = mid
            else:
                b = mid
        w[k] = 0.5 * (a + b)
    return w


@njit(cache=True)
def _solve_shifted(d, e, lam, b, x, dd, du, du2):
    """Solve (T - lam I) x = b with partial pivoting; work arrays supplied."""
    n = d.shape[0]
    pivmin = _PIVMIN_FLOOR
    for i in range(n):
        dd[i] = d[i] - lam
        x[i] = b[i]
    for i in range(n - 1):
        du[i] = e[i]
    for i in range(n - 2):
        du2[i] = 0.0
    for i in range(n - 1):
        sub = e[i]
        if abs(sub) > abs(dd[i]):
            # swap rows i and i+1
            t0 = dd[i]
            t1 = du[i]
            t2 = du2[i] if i < n - 2 else 0.0
            dd[i] = sub
            du[i] = dd[i + 1]
            if i < n - 2:
                du2[i] = du[i + 1]
            r0 = t0
            r1 = t1
            r2 = t2
            tb = x[i]
            x[i] = x[i + 1]
            x[i + 1] = tb
        else:
            r0 = sub
            r1 = dd[i + 1]
            r2 = du[i + 1] if i < n - 2 else 0.0
        piv = dd[i]
        if abs(piv) < pivmin:
            piv = pivmin if piv >= 0.0 else -pivmin
            dd[i] = piv
        mult = r0 / piv
        dd[i + 1] = r1 - mult * du[i]
        if i < n - 2:
            du[i + 1] = r2 - mult * du2[i]
        x[i + 1] = x[i + 1] - mult * x[i]
    if abs(dd[n - 1]) < pivmin:
        dd[n - 1] = pivmin if dd[n - 1] >= 0.0 else -pivmin
    x[n - 1] = x[n - 1] / dd[n - 1]
    if n >= 2:
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i]


@njit(cache=True)
def _residual_inf(d, e, lam, v):
    n = d.shape[0]
    worst = 0.0
    for i in range(n):
        r = (d[i] - lam) * v[i]
        if i > 0:
            r += e[i - 1] * v[i - 1]
        if i < n - 1:
            r += e[i] * v[i + 1]
        if abs(r) > worst:
            worst = abs(r)
    return worst


@njit(cache=True)
def _eigvecs_inverse_iteration(d, e, w, maxit, restol):
    """One inverse-iteration eigenvector per eigenvalue; returns (V, iters).

    iters[k] = -1 flags failure to reach restol within maxit.
    """
    n = d.shape[0]
    nv = w.shape[0]
    V = np.empty((n, nv), dtype=np.float64)
    iters = np.empty(nv, dtype=np.int64)
    x = np.empty(n, dtype=np.float64)
    b = np.empty(n, dtype=np.float64)
    dd = np.empty(n, dtype=np.float64)
    du = np.empty(max(n - 1, 1), dtype=np.float64)
    du2 = np.empty(max(n - 2, 1), dtype=np.float64)
    for k in range(nv):
        for i in range(n):
            b[i] = 1.0 + 1e-3 * i  # deterministic start, no zero components
        nb = 0.0
        for i in range(n):
            nb += b[i] * b[i]
        nb = np.sqrt(nb)
        for i in range(n):
            b[i] /= nb
        iters[k] = -1
        for it in range(maxit):
            _solve_shifted(d, e, w[k], b, x, dd, du, du2)
            amax = 0.0  # scale by the largest entry first: near-singular
            for i in range(n):  # shifts produce ~1/pivmin entries whose
                if abs(x[i]) > amax:  # squared norm would overflow
                    amax = abs(x[i])
            if amax == 0.0 or not np.isfinite(amax):
                continue
            nx = 0.0
            for i in range(n):
                x[i] /= amax
                nx += x[i] * x[i]
            nx = np.sqrt(nx)
            for i in range(n):
                x[i] /= nx
            if _residual_inf(d, e, w[k], x) <= restol:
                iters[k] = it + 1
                break
            for i in range(n):
                b[i] = x[i]
        for i in range(n):
            V[i, k] = x[i]
    return V, iters


@njit(cache=True)
def _laguerre_rec(k, s, x, out):
    """Generalized Laguerre L_k^{(s)} on a flat array (k >= 0)."""
    n = x.shape[0]
    if k == 0:
        for i in range(n):
            out[i] = 1.0
        return
    for i in range(n):
        pm = 1.0
        pc = 1.0 + s - x[i]
        for j in range(1, k):
            pn = ((2.0 * j + s + 1.0 - x[i]) * pc - (j + s) * pm) / (j + 1.0)
            pm = pc
            pc = pn
        out[i] = pc


@njit(cache=True)
def _jacobi_rec(k, p, q, x, out):
    """Jacobi P_k^{(p,q)} on a flat array (k >= 0; p, q > -1)."""
    n = x.shape[0]
    if k == 0:
        for i in range(n):
            out[i] = 1.0
        return
    for i in range(n):
        pm = 1.0
        pc = (p + 1.0) + (p + q + 2.0) * (x[i] - 1.0) / 2.0
        for j in range(1, k):
            c = 2.0 * j + p + q
            den = 2.0 * (j + 1.0) * (j + 1.0 + p + q) * c
            a1 = (c + 1.0) * (p * p - q * q)
            a2 = c * (c + 1.0) * (c + 2.0)
            a3 = 2.0 * (j + p) * (j + q) * (c + 2.0)
            pn = ((a1 + a2 * x[i]) * pc - a3 * pm) / den
            pm = pc
            pc = pn
        out[i] = pc


# ----------------------------------------------------------------------
# pure-numpy fallback implementations (vector arithmetic, no Python loops
# over nodes or eigenvalues in the hot dimension)
# ----------------------------------------------------------------------


def _np_sturm_counts(d, e2, xs, pivmin):
    q = d[0] - xs
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    cnt = (q < 0.0).astype(np.int64)
    for i in range(1, d.shape[0]):
        q = d[i] - xs - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        cnt += q < 0.0
    return cnt


def _np_eigvals_bisect(d, e, rtol):
    n = d.shape[0]
    if n == 1:
        return d.copy()
    e2 = e * e
    pivmin = max(_PIVMIN_FLOOR, float(e2.max()) * _PIVMIN_FLOOR)
    radius = np.zeros(n)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    lo = float(np.min(d - radius))
    hi = float(np.max(d + radius))
    scale = max(abs(lo), abs(hi), 1e-300)
    lo -= 2.0 * _EPS * scale + pivmin
    hi += 2.0 * _EPS * scale + pivmin
    a = np.full(n, lo)
    b = np.full(n, hi)
    ks = np.arange(n)
    for _ in range(250):
        mid = 0.5 * (a + b)
        stuck = (mid <= a) | (mid >= b)
        tight = (b - a) <= rtol * np.maximum(np.abs(a), np.abs(b))
        active = ~(stuck | tight)
        if not active.any():
            break
        counts = _np_sturm_counts(d, e2, mid, pivmin)
        go_up = (counts <= ks) & active
        go_dn = (counts > ks) & active
        a = np.where(go_up, mid, a)
        b = np.where(go_dn, mid, b)
    return 0.5 * (a + b)


def _np_solve_shifted_batch(d, e, lams, B):
    """Solve (T - lam_j I) x_j = B[j] for all j at once, partial pivoting."""
    m, n = B.shape
    pivmin = _PIVMIN_FLOOR
    dd = np.repeat(d[None, :], m, axis=0) - lams[:, None]
    du = np.repeat(e[None, :], m, axis=0) if n > 1 else np.zeros((m, 0))
    du2 = np.zeros((m, n - 2)) if n > 2 else np.zeros((m, 0))
    x = B.copy()
    for i in range(n - 1):
        sub = e[i]
        swap = np.abs(sub) > np.abs(dd[:, i])
        t0 = dd[:, i].copy()
        t1 = du[:, i].copy()
        t2 = du2[:, i].copy() if i < n - 2 else np.zeros(m)
        nxt_du = du[:, i + 1].copy() if i < n - 2 else np.zeros(m)
        dd[:, i] = np.where(swap, sub, t0)
        du[:, i] = np.where(swap, dd[:, i + 1], t1)
        if i < n - 2:
            du2[:, i] = np.where(swap, nxt_du, t2)
        r0 = np.where(swap, t0, sub)
        r1 = np.where(swap, t1, dd[:, i + 1])
        r2 = np.where(swap, t2, nxt_du)
        xi = x[:, i].copy()
        x[:, i] = np.where(swap, x[:, i + 1], xi)
        x[:, i + 1] = np.where(swap, xi, x[:, i + 1])
        piv = dd[:, i]
        piv = np.where(np.abs(piv) < pivmin, np.where(piv >= 0.0, pivmin, -pivmin), piv)
        dd[:, i] = piv
        mult = r0 / piv
        dd[:, i + 1] = r1 - mult * du[:, i]
        if i < n - 2:
            du[:, i + 1] = r2 - mult * du2[:, i]
        x[:, i + 1] = x[:, i + 1] - mult * x[:, i]
    last = dd[:, n - 1]
    dd[:, n - 1] = np.where(np.abs(last) < pivmin, np.where(last >= 0.0, pivmin, -pivmin), last)
    x[:, n - 1] = x[:, n - 1] / dd[:, n - 1]
    if n >= 2:
        x[:, n - 2] = (x[:, n - 2] - du[:, n - 2] * x[:, n - 1]) / dd[:, n - 2]
    for i in range(n - 3, -1, -1):
        x[:, i] = (x[:, i] - du[:, i] * x[:, i + 1] - du2[:, i] * x[:, i + 2]) / dd[:, i]
    return x


def _np_residuals_inf(d, e, lams, X):
    R = (d[None, :] - lams[:, None]) * X
    if d.shape[0] > 1:
        R[:, 1:] += e[None, :] * X[:, :-1]
        R[:, :-1] += e[None, :] * X[:, 1:]
    return np.abs(R).max(axis=1)


def _np_eigvecs_inverse_iteration(d, e, w, maxit, restol):
    n = d.shape[0]
    nv = w.shape[0]
    b = 1.0 + 1e-3 * np.arange(n)
    B = np.repeat((b / np.linalg.norm(b))[None, :], nv, axis=0)
    iters = np.full(nv, -1, dtype=np.int64)
    X = B.copy()
    done = np.zeros(nv, dtype=bool)
    for it in range(maxit):
        Y = _np_solve_shifted_batch(d, e, w, B)
        amax = np.abs(Y).max(axis=1)  # pre-scale: squared norms of
        good = (amax > 0.0) & np.isfinite(amax)  # near-singular solves overflow
        Y[good] /= amax[good][:, None]
        norms = np.linalg.norm(Y, axis=1)
        Y[good] /= norms[good][:, None]
        X = np.where((good & ~done)[:, None], Y, X)
        res = _np_residuals_inf(d, e, w, X)
        newly = (res <= restol) & ~done & good
        iters[newly] = it + 1
        done |= newly
        if done.all():
            break
        B = np.where(done[:, None], B, X)
    return X.T.copy(), iters


# ----------------------------------------------------------------------
# shared wrappers
# ----------------------------------------------------------------------

if _HAVE_NUMBA:

    def _eigvals_impl(d, e, rtol):
        return _eigvals_bisect(d, e, rtol)

    def _eigvecs_impl(d, e, w, maxit, restol):
        return _eigvecs_inverse_iteration(d, e, w, maxit, restol)

else:
    _eigvals_impl = _np_eigvals_bisect
    _eigvecs_impl = _np_eigvecs_inverse_iteration


def tridiag_eigenvalues(d, e, rtol: float = 1e-14) -> np.ndarray:
    """Ascending eigenvalues of the symmetric tridiagonal (diag d, offdiag e)."""
    d = np.ascontiguousarray(d, dtype=np.float64)
    e = np.ascontiguousarray(e, dtype=np.float64)
    if d.ndim != 1 or e.shape != (max(d.shape[0] - 1, 0),):
        raise ValueError("need diag of length n and offdiag of length n-1")
    if d.shape[0] == 0:
        return np.empty(0)
    return _eigvals_impl(d, e, float(rtol))


def tridiag_eigh(d, e, rtol: float = 1e-14, maxit: int = 100):
    """Full eigendecomposition: ascending eigenvalues and orthonormal columns.

    Exactly zero couplings split the matrix into irreducible blocks that
    are solved independently (so degenerate spectra across blocks stay
    exactly orthogonal); within a block: bisection eigenvalues,
    inverse-iteration vectors (cap `maxit` per pair, else
    ConvergenceFailure), Gram-Schmidt inside near-degenerate clusters,
    then a Rayleigh-quotient polish of the eigenvalues.
    """
    d = np.ascontiguousarray(d, dtype=np.float64)
    e = np.ascontiguousarray(e, dtype=np.float64)
    n = d.shape[0]
    if n == 1:
        return d.copy(), np.ones((1, 1))
    splits = np.where(e == 0.0)[0]
    if splits.size:
        w_all = np.empty(n)
        V_all = np.zeros((n, n))
        start = 0
        for z in list(splits) + [n - 1]:
            end = z + 1
            wb, Vb = tridiag_eigh(d[start:end], e[start : end - 1], rtol, maxit)
            w_all[start:end] = wb
            V_all[start:end, start:end] = Vb
            start = end
        order = np.argsort(w_all, kind="stable")
        return w_all[order], V_all[:, order]
    w = tridiag_eigenvalues(d, e, rtol)
    scale = max(float(np.max(np.abs(d)) + (np.max(np.abs(e)) if n > 1 else 0.0)), 1e-300)
    restol = 200.0 * _EPS * scale
    V, iters = _eigvecs_impl(d, e, w, int(maxit), restol)
    if (iters < 0).any():
        bad = int(np.argmax(iters < 0))
        raise ConvergenceFailure(
            f"inverse iteration did not reach {restol:.3e} within {maxit} steps "
            f"for eigenvalue index {bad}"
        )
    # re-orthogonalize clusters of nearly equal eigenvalues
    cluster_tol = 1e-6 * scale
    start = 0
    for k in range(1, n + 1):
        if k == n or w[k] - w[k - 1] > cluster_tol:
            if k - start > 1:
                block = V[:, start:k]
                for j in range(1, block.shape[1]):
                    for i in range(j):
                        block[:, j] -= (block[:, i] @ block[:, j]) * block[:, i]
                    nrm = np.linalg.norm(block[:, j])
                    if nrm > 0:
                        block[:, j] /= nrm
                V[:, start:k] = block
            start = k
    # Rayleigh polish: exact eigenvectors make this a <= 1 ulp correction
    Tv = d[None, :].T * V
    Tv[1:, :] += e[:, None] * V[:-1, :]
    Tv[:-1, :] += e[:, None] * V[1:, :]
    w = np.einsum("ij,ij->j", V, Tv)
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def laguerre(k: int, s: float, x):
    """Generalized Laguerre L_k^{(s)}; k < 0 gives 0 (derivative ladders)."""
    xa = np.asarray(x, dtype=np.float64)
    if k < 0:
        return np.zeros_like(xa) if xa.shape else 0.0
    flat = np.ascontiguousarray(xa.ravel())
    if _HAVE_NUMBA:
        out = np.empty_like(flat)
        _laguerre_rec(k, float(s), flat, out)
    else:
        out = _np_laguerre(k, float(s), flat)
    out = out.reshape(xa.shape)
    return out if xa.shape else float(out)


def jacobi(k: int, p: float, q: float, x):
    """Jacobi P_k^{(p,q)}; k < 0 gives 0 (derivative ladders)."""
    xa = np.asarray(x, dtype=np.float64)
    if k < 0:
        return np.zeros_like(xa) if xa.shape else 0.0
    flat = np.ascontiguousarray(xa.ravel())
    if _HAVE_NUMBA:
        out = np.empty_like(flat)
        _jacobi_rec(k, float(p), float(q), flat, out)
    else:
        out = _np_jacobi(k, float(p), float(q), flat)
    out = out.reshape(xa.shape)
    return out if xa.shape else float(out)


def _np_laguerre(k, s, x):
    if k == 0:
        return np.ones_like(x)
    pm = np.ones_like(x)
    pc = 1.0 + s - x
    for j in range(1, k):
        pn = ((2.0 * j + s + 1.0 - x) * pc - (j + s) * pm) / (j + 1.0)
        pm, pc = pc, pn
    return pc


def _np_jacobi(k, p, q, x):
    if k == 0:
        return np.ones_like(x)
    pm = np.ones_like(x)
    pc = (p + 1.0) + (p + q + 2.0) * (x - 1.0) / 2.0
    for j in range(1, k):
        c = 2.0 * j + p + q
        den = 2.0 * (j + 1.0) * (j + 1.0 + p + q) * c
        a1 = (c + 1.0) * (p * p - q * q)
        a2 = c * (c + 1.0) * (c + 2.0)
        a3 = 2.0 * (j + p) * (j + q) * (c + 2.0)
        pn = ((a1 + a2 * x) * pc - a3 * pm) / den
        pm, pc = pc, pn
    return pc


# direct handles for cross-backend comparison tests and benchmarks
numpy_impl = {
    "eigvals": _np_eigvals_bisect,
    "eigvecs": _np_eigvecs_inverse_iteration,
    "laguerre": _np_laguerre,
    "jacobi": _np_jacobi,
}

if _HAVE_NUMBA:
    numba_impl = {
        "eigvals": _eigvals_bisect,
        "eigvecs": _eigvecs_inverse_iteration,
        "laguerre": _laguerre_rec,
        "jacobi": _jacobi_rec,
    }
else:
    numba_impl = None
