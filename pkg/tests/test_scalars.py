from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from supercurve.scalars import GaussianRational, LogScalar, formal_log, gaussian_factor

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussianRational, fracs, fracs)
nonzero = gauss.filter(bool)


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == GaussianRational(1)


def test_parse_and_str_roundtrip():
    x = GaussianRational.parse("1/2-3/4i")
    assert x == GaussianRational(Fraction(1, 2), Fraction(-3, 4))
    assert GaussianRational.parse(str(x)) == x


@given(st.integers(-60, 60), st.integers(-60, 60))
def test_gaussian_factor_reconstructs(a, b):
    if a == 0 and b == 0:
        return
    unit, primes = gaussian_factor(a, b)
    acc = GaussianRational(0, 1) ** unit
    for (pa, pb), e in primes.items():
        assert pa > 0 and pb >= 0
        acc = acc * GaussianRational(pa, pb) ** e
    assert acc == GaussianRational(a, b)


def test_formal_log_branch_convention():
    assert formal_log(GaussianRational(-1)) == LogScalar(0, 1)
    assert formal_log(GaussianRational(0, 1)) == LogScalar(0, Fraction(1, 2))
    assert str(formal_log(GaussianRational(4))) == "IPI + 4*Log(1+i)"
    assert formal_log(GaussianRational(1)).is_zero()


@settings(max_examples=60)
@given(nonzero, nonzero)
def test_formal_log_additive_up_to_2pi_i(a, b):
    diff = formal_log(a * b) - formal_log(a) - formal_log(b)
    assert diff.rational == 0 and not diff.logs
    assert (diff.pi_i * GaussianRational(Fraction(1, 2))).is_integer()
