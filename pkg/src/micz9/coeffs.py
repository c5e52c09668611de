"""Closed-form coefficient kernels.

The off-diagonal coupling between adjacent angular blocks, the diagonal of
the ninth Runge-Lenz component in the spherical basis, and the entries of
the spheroidal separation-constant matrix all come from one family of
closed forms in (n, Q, L, J, lambda).  Matrices here are indexed by
lambda ascending (rows and columns), which is also recorded in the CLI
output metadata.

a and Z only ever enter through the product a*Z, so the exact path takes
one fused rational parameter aZ and never needs a real-valued focal
distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import LambdaOutOfRange, ValidationError
from .exactscalar import RadicalScalar
from .sector import HalfInt, Sector, as_fraction, lambda_range, m9_parabolic_eigenvalue


def _lam_checked(s: Sector, lam) -> Fraction:
    l = as_fraction(lam)
    lo, hi = s.lam_min.fraction, s.m.fraction
    if l < lo or l > hi or (l - lo).denominator != 1:
        raise LambdaOutOfRange(f"lambda = {l} outside {lo}..{hi} for sector {s}")
    return l


def m9_offdiag(s: Sector, lam) -> RadicalScalar:
    """Coupling B_lambda between blocks lambda-1 and lambda; B at (L+J)/2 is 0.

    Non-negative, and strictly positive on the interior of the ladder,
    which makes the tridiagonal matrices built from it irreducible.
    """
    l = _lam_checked(s, lam)
    m = s.m.fraction
    h = s.lam_min.fraction
    d = Fraction(s.J - s.L, 2)
    rad = (
        (m - l + 1)
        * (m + l + 7)
        * (l - h)
        * (l + h + 6)
        * (l + 3 - d)
        * (l + 3 + d)
        / ((l + 3) ** 2 * (2 * l + 7) * (2 * l + 5))
    )
    return RadicalScalar.sqrt(rad)


def m9_diag(s: Sector, lam) -> Fraction:
    """Diagonal element -(J-L)(L+J+6)(2n+Q+8) / (8 (lambda+3)(lambda+4))."""
    l = _lam_checked(s, lam)
    num = -(s.J - s.L) * (s.L + s.J + 6) * (2 * s.n + s.Q + 8)
    return Fraction(num) / (8 * (l + 3) * (l + 4))


def k_diag(s: Sector, lam, aZ) -> Fraction:
    """Diagonal aZ(J-L)(L+J+6)/(4(lambda+3)(lambda+4)) - lambda(lambda+7)."""
    l = _lam_checked(s, lam)
    aZ = Fraction(aZ)
    if aZ < 0:
        raise ValidationError(f"aZ = {aZ} must be non-negative")
    return aZ * (s.J - s.L) * (s.L + s.J + 6) / (4 * (l + 3) * (l + 4)) - l * (l + 7)


def k_offdiag(s: Sector, lam, aZ) -> RadicalScalar:
    """Magnitude (2aZ/(2n+Q+8)) B_lambda; the matrix itself carries the negative."""
    aZ = Fraction(aZ)
    if aZ < 0:
        raise ValidationError(f"aZ = {aZ} must be non-negative")
    return Fraction(2 * aZ, 2 * s.n + s.Q + 8) * m9_offdiag(s, lam)


@dataclass(frozen=True)
class CoeffContext:
    """Sector plus the fused focal parameter aZ >= 0 (0 = spherical limit)."""

    sector: Sector
    aZ: Fraction

    def __post_init__(self):
        aZ = Fraction(self.aZ)
        if aZ < 0:
            raise ValidationError(f"aZ = {aZ} must be non-negative")
        object.__setattr__(self, "aZ", aZ)

    def diag(self, lam) -> Fraction:
        return k_diag(self.sector, lam, self.aZ)

    def offdiag(self, lam) -> RadicalScalar:
        return k_offdiag(self.sector, lam, self.aZ)


def m9_spherical_matrix(s: Sector) -> list[list[RadicalScalar]]:
    """N x N symmetric tridiagonal matrix of the ninth Runge-Lenz component.

    Rows and columns indexed by lambda ascending; the off-diagonal entry
    between positions i and i+1 is B at the larger lambda.
    """
    lams = lambda_range(s)
    n = s.size
    zero = RadicalScalar.zero()
    mat = [[zero for _ in range(n)] for _ in range(n)]
    for i, lam in enumerate(lams):
        mat[i][i] = RadicalScalar.from_rational(m9_diag(s, lam))
    for i in range(n - 1):
        b = m9_offdiag(s, lams[i + 1])
        mat[i][i + 1] = b
        mat[i + 1][i] = b
    return mat


def m9_eigenvalues(s: Sector) -> list[HalfInt]:
    """Spectrum {n + Q/2 - J - 2 n_p}, in n_p order (descending values)."""
    return [m9_parabolic_eigenvalue(s, n_p) for n_p in range(s.size)]


def matrix_to_float(mat: list[list[RadicalScalar]]) -> np.ndarray:
    return np.array([[x.to_float() for x in row] for row in mat], dtype=np.float64)
