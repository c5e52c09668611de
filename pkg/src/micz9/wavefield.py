"""Closed-form wavefunction factors, Gauss quadrature, and residual oracles.

Everything here is the independent numeric side of the cross-checks: the
explicit bound-state factors (radial-angular and parabolic products of
exponentials, powers, generalized Laguerre and Jacobi polynomials), Gauss
rules built by Golub-Welsch from the same tridiagonal eigensolver the
rest of the package uses, overlap integrals under the reduced measure
r^8 (1-c^2)^3 dr dc with c = cos(theta), and the residuals of the four
separated differential equations evaluated with analytic derivatives.

Quadrature never exponentiates the nodes: paired basis factors always
carry a total weight exp(-alpha r), which the generalized Laguerre rule
of order 8 absorbs exactly, and the polynomial remainder has integer
powers for every parity-valid sector, so the tensor rules are exact up
to roundoff once the node count covers the polynomial degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from . import _backend
from .errors import DomainError, IndexOutOfRange, ValidationError
from .exactscalar import RadicalScalar, exact_factorial
from .sector import (
    Sector,
    alpha_scale,
    as_fraction,
    energy,
    lambda_range,
    m9_parabolic_eigenvalue,
)
from .spheroidal import SpheroidalSpectrum, SymTridiagonal, eigen_sym_tridiagonal, separation_constants


# ----------------------------------------------------------------------
# orthogonal polynomials
# ----------------------------------------------------------------------


def laguerre_gen(k: int, s: float, x):
    """Generalized Laguerre L_k^{(s)}(x) by the three-term recurrence."""
    return _backend.laguerre(k, s, x)


def laguerre_gen_pair(k: int, s: float, x):
    """(value, derivative); d/dx L_k^{(s)} = -L_{k-1}^{(s+1)}."""
    return _backend.laguerre(k, s, x), -_backend.laguerre(k - 1, s + 1, x)


def jacobi_gen(k: int, p: float, q: float, x):
    """Jacobi P_k^{(p,q)}(x) by the three-term recurrence (p, q > -1)."""
    if p <= -1 or q <= -1:
        raise ValidationError(f"jacobi parameters must exceed -1, got ({p}, {q})")
    return _backend.jacobi(k, p, q, x)


def jacobi_gen_pair(k: int, p: float, q: float, x):
    """(value, derivative) via the degree-lowering identity."""
    val = jacobi_gen(k, p, q, x)
    der = 0.5 * (k + p + q + 1) * _backend.jacobi(k - 1, p + 1, q + 1, x)
    return val, der


# ----------------------------------------------------------------------
# Gauss rules (Golub-Welsch on the Jacobi matrices)
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    kind: str  # "legendre" | "laguerre"
    order: float  # weight exponent for laguerre, 0 for legendre
    nodes: np.ndarray
    weights: np.ndarray


_rule_cache: dict = {}


def _orthonormal_last_pair(diag, off, x):
    """Unnormalized top polynomial q_n and derivative at x, via the recurrence."""
    n = diag.shape[0]
    pm = np.zeros_like(x)
    dpm = np.zeros_like(x)
    pc = np.ones_like(x)
    dpc = np.zeros_like(x)
    for k in range(n - 1):
        sub = off[k - 1] if k > 0 else 0.0
        pn = ((x - diag[k]) * pc - sub * pm) / off[k]
        dpn = (pc + (x - diag[k]) * dpc - sub * dpm) / off[k]
        pm, pc = pc, pn
        dpm, dpc = dpc, dpn
    sub = off[n - 2] if n > 1 else 0.0
    q = (x - diag[n - 1]) * pc - sub * pm
    dq = pc + (x - diag[n - 1]) * dpc - sub * dpm
    return q, dq


def _christoffel_weights(diag, off, mu0, x):
    """Gauss weights 1 / sum_k ptilde_k(x)^2 with orthonormal ptilde."""
    n = diag.shape[0]
    pm = np.zeros_like(x)
    pc = np.full_like(x, 1.0 / math.sqrt(mu0))
    S = pc * pc
    for k in range(n - 1):
        sub = off[k - 1] if k > 0 else 0.0
        pn = ((x - diag[k]) * pc - sub * pm) / off[k]
        pm, pc = pc, pn
        S += pc * pc
    with np.errstate(divide="ignore"):
        w = 1.0 / S
    return np.where(np.isfinite(S), w, 0.0)


def gauss_rule(kind: str, n_q: int, order: float = 0.0) -> QuadratureRule:
    """Gauss rule with n_q nodes: legendre on [-1,1] or laguerre x^order e^-x.

    Golub-Welsch on the symmetric Jacobi matrix of the family, reusing the
    package's tridiagonal eigensolver for the nodes; the nodes are then
    Newton-polished against the recurrence's own top polynomial and the
    weights come from the Christoffel sum, which is the eigenvector
    first-component formula evaluated consistently with the polished
    nodes.  Weights whose magnitude underflows double precision come out
    as exact zeros (huge Laguerre rules only).
    """
    if n_q < 1:
        raise ValidationError(f"n_q = {n_q} must be >= 1")
    key = (kind, n_q, float(order))
    hit = _rule_cache.get(key)
    if hit is not None:
        return hit
    if kind == "legendre":
        if order != 0.0:
            raise ValidationError("legendre rule takes no order parameter")
        diag = np.zeros(n_q)
        ks = np.arange(1.0, n_q)
        off = ks / np.sqrt(4.0 * ks * ks - 1.0)
        mu0 = 2.0
    elif kind == "laguerre":
        if order <= -1:
            raise ValidationError(f"laguerre order must exceed -1, got {order}")
        idx = np.arange(n_q, dtype=np.float64)
        diag = 2.0 * idx + order + 1.0
        ks = np.arange(1.0, n_q)
        off = np.sqrt(ks * (ks + order))
        mu0 = math.gamma(order + 1.0)
    else:
        raise ValidationError(f"unknown rule kind {kind!r}")
    if n_q == 1:
        nodes = np.array([diag[0]])
    else:
        nodes, _ = eigen_sym_tridiagonal(SymTridiagonal(diag, off))
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            for _ in range(2):
                q, dq = _orthonormal_last_pair(diag, off, nodes)
                step = q / dq
                nodes = nodes - np.where(np.isfinite(step), step, 0.0)
    rule = QuadratureRule(kind, float(order), nodes, _christoffel_weights(diag, off, mu0, nodes))
    _rule_cache[key] = rule
    return rule


# ----------------------------------------------------------------------
# wavefunction factors
# ----------------------------------------------------------------------


def _lam_index(s: Sector, lam) -> Tuple[Fraction, int]:
    l = as_fraction(lam)
    lo, hi = s.lam_min.fraction, s.m.fraction
    if l < lo or l > hi or (l - lo).denominator != 1:
        raise IndexOutOfRange(f"lambda = {l} outside {lo}..{hi} for sector {s}")
    return l, int(l - lo)


def _np_checked(s: Sector, n_p: int) -> int:
    if not 0 <= n_p < s.size:
        raise IndexOutOfRange(f"n_p = {n_p} outside 0..{s.size - 1}")
    return n_p


def norm_spherical(s: Sector, lam) -> float:
    """Normalization of the radial-angular factor under r^8 (1-c^2)^3 dr dc."""
    l, _ = _lam_index(s, lam)
    m, h, d = s.m.fraction, s.lam_min.fraction, Fraction(s.J - s.L, 2)
    f = exact_factorial
    rad = Fraction(
        f(m - l) * (2 * l + 7).numerator * f(l - h) * f(l + h + 6),
        (2 * s.n + s.Q + 8) * f(m + l + 7) * f(l - d + 3) * f(l + d + 3),
    )
    return RadicalScalar.sqrt(rad).to_float()


def norm_parabolic(s: Sector, n_p: int) -> float:
    """Normalization of the parabolic factor under the same reduced measure."""
    n_p = _np_checked(s, n_p)
    n_v = s.size - 1 - n_p
    f = exact_factorial
    rad = Fraction(
        f(n_p) * f(n_v),
        (2 * s.n + s.Q + 8) * f(n_p + s.J + 3) * f(n_v + s.L + 3),
    )
    return RadicalScalar.sqrt(rad).to_float()


def psi_spherical(s: Sector, lam, r, c):
    """Radial-angular factor at (r, cos(theta)); normalized, sign of the
    closed form (positive leading Jacobi/Laguerre coefficients)."""
    l, k = _lam_index(s, lam)
    r = np.asarray(r, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    if np.any(r <= 0):
        raise DomainError("psi_spherical needs r > 0")
    if np.any(np.abs(c) > 1):
        raise DomainError("psi_spherical needs |cos(theta)| <= 1")
    alpha = float(alpha_scale(s))
    x = alpha * r
    lamf = float(l)
    nr = int(s.m.fraction - l)
    radial = x**lamf * np.exp(-x / 2) * laguerre_gen(nr, 2 * lamf + 7, x)
    ang = (
        2.0 ** (-(s.L + s.J + 7) / 2)
        * (1 - c) ** (s.L / 2)
        * (1 + c) ** (s.J / 2)
        * jacobi_gen(k, s.L + 3, s.J + 3, c)
    )
    out = norm_spherical(s, lam) * alpha**4.5 * radial * ang
    return out if out.shape else float(out)


def psi_parabolic(s: Sector, n_p: int, u, v):
    """Parabolic factor at (u, v) = (r+z, r-z); normalized."""
    n_p = _np_checked(s, n_p)
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if np.any(u < 0) or np.any(v < 0):
        raise DomainError("psi_parabolic needs u, v >= 0")
    alpha = float(alpha_scale(s))
    n_v = s.size - 1 - n_p
    uh = alpha * u / 2
    vh = alpha * v / 2
    out = (
        norm_parabolic(s, n_p)
        * 2.0**-3.5
        * alpha**4.5
        * uh ** (s.J / 2)
        * np.exp(-uh / 2)
        * laguerre_gen(n_p, s.J + 3, uh)
        * vh ** (s.L / 2)
        * np.exp(-vh / 2)
        * laguerre_gen(n_v, s.L + 3, vh)
    )
    return out if out.shape else float(out)


def psi_spheroidal(
    s: Sector, n_k: int, a, Z=None, r=None, c=None, spectrum: Optional[SpheroidalSpectrum] = None
):
    """Spheroidal state at (r, cos(theta)) via its spherical-basis expansion."""
    if not 0 <= n_k < s.size:
        raise IndexOutOfRange(f"n_k = {n_k} outside 0..{s.size - 1}")
    if spectrum is None:
        spectrum = separation_constants(s, a, Z)
    lams = lambda_range(s)
    out = None
    for idx, lam in enumerate(lams):
        term = spectrum.T[idx, n_k] * psi_spherical(s, lam, r, c)
        out = term if out is None else out + term
    return out


# ----------------------------------------------------------------------
# overlap quadrature under r^8 (1-c^2)^3 dr dc
# ----------------------------------------------------------------------


def _bare_spherical(s: Sector, lam, X, C):
    """psi_spherical with alpha^{9/2} e^{-x/2} stripped, on the (x, c) grid."""
    l, k = _lam_index(s, lam)
    lamf = float(l)
    n_r = int(s.m.fraction - l)
    return (
        norm_spherical(s, lam)
        * X**lamf
        * laguerre_gen(n_r, 2 * lamf + 7, X)
        * 2.0 ** (-(s.L + s.J + 7) / 2)
        * (1 - C) ** (s.L / 2)
        * (1 + C) ** (s.J / 2)
        * jacobi_gen(k, s.L + 3, s.J + 3, C)
    )


def _bare_parabolic(s: Sector, n_p, X, C):
    """psi_parabolic with alpha^{9/2} e^{-x/2} stripped, on the (x, c) grid."""
    n_p = _np_checked(s, n_p)
    n_v = s.size - 1 - n_p
    U = X * (1 + C) / 2
    V = X * (1 - C) / 2
    return (
        norm_parabolic(s, n_p)
        * 2.0**-3.5
        * U ** (s.J / 2)
        * laguerre_gen(n_p, s.J + 3, U)
        * V ** (s.L / 2)
        * laguerre_gen(n_v, s.L + 3, V)
    )


def _bare_factor(s: Sector, state, X, C):
    kind = state[0]
    if kind == "spherical":
        return _bare_spherical(s, state[1], X, C)
    if kind == "parabolic":
        return _bare_parabolic(s, state[1], X, C)
    if kind == "spheroidal":
        n_k, spectrum = state[1], state[2]
        lams = lambda_range(s)
        acc = None
        for idx, lam in enumerate(lams):
            term = spectrum.T[idx, n_k] * _bare_spherical(s, lam, X, C)
            acc = term if acc is None else acc + term
        return acc
    raise ValidationError(f"unknown basis state {state!r}")


def basis_overlap(s: Sector, bra, ket, n_q: int = 64) -> float:
    """<bra|ket> over r^8 (1-c^2)^3 dr dc by tensor Gauss quadrature.

    States are ("spherical", lam), ("parabolic", n_p) or
    ("spheroidal", n_k, spectrum).  The radial rule is generalized
    Laguerre of order 8 in x = alpha*r (the pair's exponential weight,
    absorbed exactly); the angular rule is Legendre with (1-c^2)^3
    folded into the integrand.  Summation order is fixed, so results are
    bit-stable for a fixed node count.
    """
    rx = gauss_rule("laguerre", n_q, order=8.0)
    rc = gauss_rule("legendre", n_q)
    X = rx.nodes[:, None]
    C = rc.nodes[None, :]
    f = _bare_factor(s, bra, X, C) * _bare_factor(s, ket, X, C) * (1 - C * C) ** 3
    return float(rx.weights @ f @ rc.weights)


def w_overlap_quadrature(s: Sector, lam, n_p: int, n_q: int = 64) -> float:
    """Overlap of a parabolic and a spherical state: the quadrature route
    to the interbasis matrix entry W[lambda, n_p]."""
    return basis_overlap(s, ("spherical", lam), ("parabolic", n_p), n_q)


def w_overlap_stable(
    s: Sector, lam, n_p: int, n_q: int = 48, tol: float = 1e-10, max_doublings: int = 3
) -> float:
    """Node-doubled overlap: doubles n_q until successive values agree to tol."""
    val = w_overlap_quadrature(s, lam, n_p, n_q)
    for _ in range(max_doublings):
        n_q *= 2
        nxt = w_overlap_quadrature(s, lam, n_p, n_q)
        if abs(nxt - val) < tol:
            return nxt
        val = nxt
    raise ValidationError(
        f"overlap failed to stabilize to {tol} by n_q = {n_q} for {s}, "
        f"lambda = {lam}, n_p = {n_p}"
    )


# ----------------------------------------------------------------------
# separated-equation residuals (analytic derivatives)
# ----------------------------------------------------------------------


def _exp_poly_derivs(nu: float, k: int, order: float, x):
    """g = x^nu e^{-x/2} L_k^{(order)}(x) and its first two derivatives."""
    P = _backend.laguerre(k, order, x)
    P1 = -_backend.laguerre(k - 1, order + 1, x)
    P2 = _backend.laguerre(k - 2, order + 2, x)
    ex = np.exp(-x / 2)
    xn = x**nu
    xnm1 = x ** (nu - 1) if nu != 0 else np.zeros_like(x)
    xnm2 = x ** (nu - 2) if nu not in (0, 1) else np.zeros_like(x)
    g = xn * ex * P
    g1 = ex * ((nu * xnm1 - xn / 2) * P + xn * P1)
    g2 = ex * (
        (nu * (nu - 1) * xnm2 - nu * xnm1 + xn / 4) * P + (2 * nu * xnm1 - xn) * P1 + xn * P2
    )
    return g, g1, g2


def _scaled_residual(terms) -> np.ndarray:
    total = sum(terms)
    scale = np.maximum.reduce([np.abs(t) for t in terms])
    return np.abs(total) / np.maximum(scale, 1e-300)


def ode_residuals(s: Sector, which: str, index, points) -> float:
    """Max relative residual of one separated equation on interior points.

    which: "radial" or "angular" (index = lambda), "parabolic_u" or
    "parabolic_v" (index = n_p).  The closed-form factor and its
    analytic derivatives are plugged into the equation; each residual is
    scaled by the largest participating term.
    """
    pts = np.asarray(points, dtype=np.float64).ravel()
    if pts.size == 0:
        raise DomainError("need at least one evaluation point")
    Zf = float(s.Z)
    E = float(energy(s))
    alpha = float(alpha_scale(s))

    if which == "radial":
        l, _ = _lam_index(s, index)
        if np.any(pts <= 0):
            raise DomainError("radial points must satisfy r > 0")
        lamf = float(l)
        x = alpha * pts
        g, g1, g2 = _exp_poly_derivs(lamf, int(s.m.fraction - l), 2 * lamf + 7, x)
        R, R1, R2 = g, alpha * g1, alpha * alpha * g2
        terms = (
            -0.5 * (R2 + 8.0 * R1 / pts),
            (lamf * (lamf + 7) / (2 * pts * pts)) * R,
            -(Zf / pts) * R,
            -E * R,
        )
        return float(_scaled_residual(terms).max())

    if which == "angular":
        l, k = _lam_index(s, index)
        if np.any(np.abs(pts) >= 1):
            raise DomainError("angular points must satisfy |cos(theta)| < 1")
        lamf = float(l)
        c = pts
        st2 = 1 - c * c
        st = np.sqrt(st2)
        p, q = s.L + 3, s.J + 3
        P = _backend.jacobi(k, p, q, c)
        P1 = 0.5 * (k + p + q + 1) * _backend.jacobi(k - 1, p + 1, q + 1, c)
        P2 = 0.25 * (k + p + q + 1) * (k + p + q + 2) * _backend.jacobi(k - 2, p + 2, q + 2, c)
        phi = (1 - c) ** (s.L / 2) * (1 + c) ** (s.J / 2)
        psi1 = -(s.L / 2) / (1 - c) + (s.J / 2) / (1 + c)
        psi2 = -(s.L / 2) / (1 - c) ** 2 - (s.J / 2) / (1 + c) ** 2
        u = phi * P
        u1 = phi * (psi1 * P + P1)
        u2 = phi * ((psi1 * psi1 + psi2) * P + 2 * psi1 * P1 + P2)
        # theta derivatives of u(cos(theta))
        ut = -st * u1
        utt = -c * u1 + st2 * u2
        terms = (
            utt,
            7.0 * (c / st) * ut,
            -(s.L * (s.L + 6) / (2 * (1 - c))) * u,
            -(s.J * (s.J + 6) / (2 * (1 + c))) * u,
            lamf * (lamf + 7) * u,
        )
        return float(_scaled_residual(terms).max())

    if which in ("parabolic_u", "parabolic_v"):
        n_p = _np_checked(s, int(index))
        if np.any(pts <= 0):
            raise DomainError("parabolic points must be positive")
        sigma = (alpha / 4) * float(m9_parabolic_eigenvalue(s, n_p).fraction)
        if which == "parabolic_u":
            nu, k, order, barrier, sig = s.J / 2, n_p, s.J + 3, s.J * (s.J + 6), -sigma
        else:
            n_v = s.size - 1 - n_p
            nu, k, order, barrier, sig = s.L / 2, n_v, s.L + 3, s.L * (s.L + 6), +sigma
        x = alpha * pts / 2
        g, g1, g2 = _exp_poly_derivs(nu, k, order, x)
        F, F1, F2 = g, (alpha / 2) * g1, (alpha / 2) ** 2 * g2
        terms = (
            pts * F2,
            4.0 * F1,
            -(barrier / (4 * pts)) * F,
            (Zf / 2) * F,
            (E * pts / 2) * F,
            sig * F,
        )
        return float(_scaled_residual(terms).max())

    raise ValidationError(f"unknown equation selector {which!r}")


# ----------------------------------------------------------------------
# coordinate bookkeeping
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class RadialAngularPoint:
    """A point (r, cos(theta)) with its parabolic and spheroidal images.

    u = r(1+c) and v = r(1-c); with a focal distance a the spheroidal
    pair (xi, eta) uses the two-center distances, so xi >= 1 and
    |eta| <= 1 hold by the triangle inequality.
    """

    r: float
    c: float

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError(f"r = {self.r} must be positive")
        if not -1 <= self.c <= 1:
            raise DomainError(f"cos(theta) = {self.c} must lie in [-1, 1]")

    @property
    def u(self) -> float:
        return self.r * (1 + self.c)

    @property
    def v(self) -> float:
        return self.r * (1 - self.c)

    def spheroidal(self, a: float) -> Tuple[float, float]:
        if not a > 0:
            raise DomainError(f"focal distance a = {a} must be positive")
        z = self.r * self.c
        rho = self.r * math.sqrt(max(1 - self.c * self.c, 0.0))
        r2 = math.hypot(rho - a, z)
        return (self.r + r2) / a, (self.r - r2) / a
