"""Sector validation, label ranges, and scalar constants."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from micz9 import coeffs
from micz9.errors import (
    EmptySector,
    IndexOutOfRange,
    LambdaOutOfRange,
    NegativeQuantumNumber,
    NonpositiveCharge,
    ParityMismatch,
)
from micz9.sector import (
    HalfInt,
    StateLabel,
    alpha_scale,
    energy,
    enumerate_sectors,
    lambda_range,
    m9_parabolic_eigenvalue,
    np_range,
    validate_sector,
)


def test_validate_examples():
    s = validate_sector(1, 0, 0, 0, 1)
    assert s.size == 2
    assert [l.fraction for l in lambda_range(s)] == [0, 1]
    s = validate_sector(0, 0, 0, 0, 1)
    assert s.size == 1 and [l.fraction for l in lambda_range(s)] == [0]
    with pytest.raises(ParityMismatch):
        validate_sector(0, 0, 1, 0, 1)


def test_validate_errors():
    with pytest.raises(NegativeQuantumNumber):
        validate_sector(-1, 0, 0, 0, 1)
    with pytest.raises(NonpositiveCharge):
        validate_sector(1, 0, 0, 0, 0)
    with pytest.raises(NonpositiveCharge):
        validate_sector(1, 0, 0, 0, Fraction(-1, 2))
    with pytest.raises(EmptySector):
        validate_sector(0, 0, 2, 2, 1)


def test_lambda_range_examples():
    assert [l.fraction for l in lambda_range(validate_sector(2, 0, 0, 2, 1))] == [1, 2]
    assert [l.fraction for l in lambda_range(validate_sector(0, 2, 1, 1, 1))] == [1]
    # odd monopole charge: half-odd-integer ladder
    assert [str(l) for l in lambda_range(validate_sector(1, 1, 0, 1, 1))] == ["1/2", "3/2"]


def test_np_range_examples():
    assert np_range(validate_sector(1, 0, 0, 0, 1)) == [0, 1]
    assert np_range(validate_sector(0, 0, 0, 0, 1)) == [0]
    assert np_range(validate_sector(3, 0, 1, 1, 1)) == [0, 1, 2]  # N = 3 - 1 + 1


def test_energy_examples():
    assert energy(validate_sector(0, 0, 0, 0, 1)) == Fraction(-1, 32)
    assert energy(validate_sector(1, 0, 0, 0, 1)) == Fraction(-1, 50)
    assert energy(validate_sector(0, 2, 0, 0, 2)) == Fraction(-2, 25)
    assert energy(validate_sector(2, 0, 0, 2, 1)) == Fraction(-1, 72)


def test_alpha_examples():
    assert alpha_scale(validate_sector(1, 0, 0, 0, 1)) == Fraction(2, 5)
    assert alpha_scale(validate_sector(0, 0, 0, 0, 1)) == Fraction(1, 2)


def test_m9_parabolic_examples():
    s = validate_sector(1, 0, 0, 0, 1)
    assert m9_parabolic_eigenvalue(s, 0).fraction == 1
    assert m9_parabolic_eigenvalue(s, 1).fraction == -1
    assert m9_parabolic_eigenvalue(validate_sector(2, 0, 0, 2, 1), 0).fraction == 0
    with pytest.raises(IndexOutOfRange):
        m9_parabolic_eigenvalue(s, 2)


def test_ranges_same_size():
    for s in enumerate_sectors(3, 3, 3):
        assert len(lambda_range(s)) == len(np_range(s)) == s.size


def test_trace_matches_m9_matrix():
    for s in enumerate_sectors(3, 3, 3):
        tr = sum(
            (coeffs.m9_diag(s, lam) for lam in lambda_range(s)), Fraction(0)
        )
        eig_sum = sum(
            (m9_parabolic_eigenvalue(s, k).fraction for k in np_range(s)), Fraction(0)
        )
        assert tr == eig_sum, s


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 20), Q=st.integers(0, 10), Z=st.fractions(
    min_value=Fraction(1, 5), max_value=Fraction(9), max_denominator=7))
def test_energy_monotone_in_n(n, Q, Z):
    L, J = Q % 2, 0
    e1 = energy(validate_sector(n, Q, L, J, Z))
    e2 = energy(validate_sector(n + 1, Q, L, J, Z))
    assert e1 < e2 < 0


def test_alpha_energy_identity():
    for s in enumerate_sectors(3, 3, 3, Z=Fraction(3, 2)):
        assert alpha_scale(s) ** 2 == -8 * energy(s)


def test_halfint():
    h = HalfInt(3)
    assert str(h) == "3/2" and not h.is_integer
    assert (h + 1).twice == 5
    assert (h - HalfInt(1)).twice == 2
    assert HalfInt.from_value(Fraction(5, 2)).twice == 5
    assert HalfInt(4).as_int() == 2
    assert HalfInt(2) < HalfInt(3)
    assert float(HalfInt(3)) == 1.5


def test_enumerate_sweep_bounds():
    sectors = list(enumerate_sectors(4, 4, 4))
    assert len(sectors) == len(set(s.key() for s in sectors))
    for s in sectors:
        assert s.m.fraction <= 4 and s.Q <= 4 and s.L <= 4 and s.J <= 4
        assert 1 <= s.size <= 6


def test_state_label_validation():
    s = validate_sector(1, 0, 0, 0, 1)
    StateLabel(s, "spherical", lam=HalfInt(2))
    StateLabel(s, "parabolic", n_p=1, passive=(0, 0, 0, 0, 0, 0))
    StateLabel(s, "spheroidal", n_k=0, a=2.5)
    with pytest.raises(LambdaOutOfRange):
        StateLabel(s, "spherical", lam=HalfInt(5))
    with pytest.raises(IndexOutOfRange):
        StateLabel(s, "parabolic", n_p=2)
    with pytest.raises(Exception):
        StateLabel(s, "spheroidal", n_k=0, a=-1.0)
