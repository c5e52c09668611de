"""Exact arithmetic over values of the form c*sqrt(d), rational c and d >= 0.

Every closed-form coefficient in this package (interbasis matrix entries,
tridiagonal couplings, Clebsch-Gordan values) is a rational number times
the square root of a non-negative rational, and all the bilinear
identities among them stay inside that class: the state-dependent part of
each radical squares away in the sums that matter.  Keeping the radicand
explicit therefore permits bit-exact orthogonality and recurrence checks
with no floating-point tolerance at all.

Radicands are reduced squarefree by trial division up to a configurable
prime bound (default 10**6).  Square factors of larger primes are left in
place; comparisons stay exact anyway because they go through sign
analysis and cross-squaring.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import FactorialOfNegative, RadicandMismatch

Rational = Fraction

SQUAREFREE_BOUND_DEFAULT = 10**6

_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def _is_prime_against_cache(cand: int) -> bool:
    for p in _PRIMES:
        if p * p > cand:
            return True
        if cand % p == 0:
            return False
    return True


def _prime(i: int) -> int:
    """i-th prime, extending the cached list by trial division as needed."""
    while i >= len(_PRIMES):
        cand = _PRIMES[-1] + 2
        while not _is_prime_against_cache(cand):
            cand += 2
        _PRIMES.append(cand)
    return _PRIMES[i]


def squarefree_split(n: int, bound: int = SQUAREFREE_BOUND_DEFAULT) -> tuple[int, int]:
    """Split n >= 1 as s*s*f with f free of squared primes <= bound."""
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    s = 1
    r = math.isqrt(n)
    if r * r == n:
        return r, 1
    i = 0
    while True:
        p = _prime(i)
        if p > bound or p * p > n:
            break
        p2 = p * p
        while n % p2 == 0:
            n //= p2
            s *= p
        i += 1
    r = math.isqrt(n)
    if r * r == n:  # leftover perfect square of primes beyond the bound
        return s * r, 1
    return s, n


def exact_factorial(x) -> int:
    """Factorial of a value that must reduce to a non-negative integer.

    Raises FactorialOfNegative otherwise: the closed forms only produce
    integer factorial arguments for parity-valid quantum numbers, so a
    failure here means an invalid state slipped through validation.
    """
    f = Fraction(x)
    if f.denominator != 1 or f < 0:
        raise FactorialOfNegative(f"factorial argument {x} is not a non-negative integer")
    return math.factorial(int(f))


def format_rational(x: Fraction) -> str:
    """Serialize a rational as "p/q" (or "p" when q == 1)."""
    return str(Fraction(x))


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


class RadicalScalar:
    """Exact value coeff*sqrt(radicand); canonical radicand is a squarefree integer.

    Zero is canonically (0, 1); radicand == 1 iff the value is rational.
    """

    __slots__ = ("coeff", "radicand")

    def __init__(self, coeff, radicand=1, *, bound: int = SQUAREFREE_BOUND_DEFAULT):
        coeff = Fraction(coeff)
        radicand = Fraction(radicand)
        if radicand < 0:
            raise ValueError(f"negative radicand {radicand}")
        if coeff == 0 or radicand == 0:
            object.__setattr__(self, "coeff", Fraction(0))
            object.__setattr__(self, "radicand", Fraction(1))
            return
        # sqrt(p/q) = sqrt(p*q)/q, then pull squares out of p*q
        p, q = radicand.numerator, radicand.denominator
        s, f = squarefree_split(p * q, bound)
        object.__setattr__(self, "coeff", coeff * Fraction(s, q))
        object.__setattr__(self, "radicand", Fraction(f))

    def __setattr__(self, name, value):  # values are immutable
        raise AttributeError("RadicalScalar is immutable")

    @classmethod
    def _raw(cls, coeff: Fraction, radicand: Fraction) -> "RadicalScalar":
        """Bypass reduction for already-canonical components (internal)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeff", coeff)
        object.__setattr__(obj, "radicand", radicand)
        return obj

    @classmethod
    def zero(cls) -> "RadicalScalar":
        return cls._raw(Fraction(0), Fraction(1))

    @classmethod
    def from_rational(cls, x) -> "RadicalScalar":
        x = Fraction(x)
        if x == 0:
            return cls.zero()
        return cls._raw(x, Fraction(1))

    @classmethod
    def sqrt(cls, x) -> "RadicalScalar":
        """Exact sqrt of a non-negative rational."""
        return cls(Fraction(1), Fraction(x))

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coeff

    def square(self) -> Fraction:
        return self.coeff * self.coeff * self.radicand

    def sign(self) -> int:
        if self.coeff > 0:
            return 1
        if self.coeff < 0:
            return -1
        return 0

    def __mul__(self, other):
        if isinstance(other, RadicalScalar):
            if self.is_zero or other.is_zero:
                return RadicalScalar.zero()
            return RadicalScalar(self.coeff * other.coeff, self.radicand * other.radicand)
        if isinstance(other, (int, Fraction)):
            if other == 0 or self.is_zero:
                return RadicalScalar.zero()
            return RadicalScalar._raw(self.coeff * other, self.radicand)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        if self.is_zero:
            return self
        return RadicalScalar._raw(-self.coeff, self.radicand)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RadicalScalar.from_rational(other)
        if not isinstance(other, RadicalScalar):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.radicand != other.radicand:
            raise RadicandMismatch(
                f"cannot add sqrt({self.radicand}) and sqrt({other.radicand}) terms"
            )
        c = self.coeff + other.coeff
        if c == 0:
            return RadicalScalar.zero()
        return RadicalScalar._raw(c, self.radicand)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RadicalScalar.from_rational(other)
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def compare(self, other) -> int:
        """Exact three-way comparison: sign analysis, then cross-squaring."""
        if isinstance(other, (int, Fraction)):
            other = RadicalScalar.from_rational(other)
        sa, sb = self.sign(), other.sign()
        if sa != sb:
            return -1 if sa < sb else 1
        if sa == 0:
            return 0
        qa, qb = self.square(), other.square()
        if qa == qb:
            return 0
        less = qa < qb
        if sa < 0:
            less = not less
        return -1 if less else 1

    def __eq__(self, other):
        if isinstance(other, (RadicalScalar, int, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __hash__(self):
        return hash((self.sign(), self.square()))

    def __abs__(self):
        return -self if self.coeff < 0 else self

    def to_float(self, precision: int = 53):
        """Value rounded to `precision` bits (within 1 ulp).

        53 bits returns a Python float computed through a single correctly
        rounded division and sqrt; higher precisions go through mpmath.
        """
        if precision < 53:
            raise ValueError("precision must be at least 53 bits")
        if precision == 53:
            mag = math.sqrt(float(self.square()))
            return -mag if self.coeff < 0 else mag
        import mpmath

        sq = self.square()
        with mpmath.workprec(precision + 10):
            v = mpmath.sqrt(mpmath.mpf(sq.numerator) / mpmath.mpf(sq.denominator))
            if self.coeff < 0:
                v = -v
        return mpmath.mpf(v)

    def __float__(self):
        return self.to_float()

    def as_record(self) -> dict:
        return {"coeff": format_rational(self.coeff), "radicand": format_rational(self.radicand)}

    @classmethod
    def from_record(cls, rec: dict) -> "RadicalScalar":
        return cls(parse_rational(rec["coeff"]), parse_rational(rec["radicand"]))

    def __str__(self):
        if self.is_rational:
            return format_rational(self.coeff)
        return f"{format_rational(self.coeff)}*sqrt({format_rational(self.radicand)})"

    def __repr__(self):
        return f"RadicalScalar({format_rational(self.coeff)}, {format_rational(self.radicand)})"


def radical_mul(x: RadicalScalar, y: RadicalScalar) -> RadicalScalar:
    return x * y


def radical_add(x: RadicalScalar, y: RadicalScalar) -> RadicalScalar:
    """Sum of two radicals sharing a reduced radicand (or with either zero).

    Raises RadicandMismatch for incommensurable radicands: the sum would
    leave the c*sqrt(d) class, and the caller must fall back to floats.
    """
    return x + y


def radical_cmp(x: RadicalScalar, y: RadicalScalar) -> int:
    return x.compare(y)


def to_float(x: RadicalScalar, precision: int = 53):
    return x.to_float(precision)
