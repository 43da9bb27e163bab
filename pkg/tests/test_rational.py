from __future__ import annotations

from hypothesis import given, settings, strategies as st

from supercurve.rational import RationalFunction, gaussian_roots, p_mul, p_eval
from supercurve.scalars import GaussianRational

small = st.integers(-4, 4)
coeffs = st.lists(small, min_size=1, max_size=4)


def rf(num, den):
    den = den if any(den) else [1]
    return RationalFunction.poly(num) / RationalFunction.poly(den)


@settings(max_examples=50)
@given(coeffs, coeffs, coeffs, coeffs)
def test_field_operations(a, b, c, d):
    x, y = rf(a, b), rf(c, d)
    assert x + y == y + x
    assert x * y == y * x
    assert (x - y) + y == x
    if y:
        assert (x / y) * y == x


@given(coeffs, coeffs)
def test_derivative_leibniz(a, b):
    x, y = RationalFunction.poly(a), RationalFunction.poly(b)
    assert (x * y).derivative() == x.derivative() * y + x * y.derivative()


def test_normalised_denominator_is_monic():
    r = RationalFunction.poly([2]) / RationalFunction.poly([0, 4])
    assert r.den[-1] == GaussianRational(1)
    assert r.den == (GaussianRational(0), GaussianRational(1))
    assert r(GaussianRational(2)) == GaussianRational(1) / GaussianRational(4)


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=3))
def test_gaussian_roots_recover_linear_factors(roots):
    poly = (GaussianRational(1),)
    for a, b in roots:
        poly = p_mul(poly, (-GaussianRational(a, b), GaussianRational(1)))
    found = gaussian_roots(poly)
    assert sum(m for _r, m in found) == len(roots)
    for r, _m in found:
        assert not p_eval(poly, r)


def test_irreducible_quadratic_has_no_roots():
    assert gaussian_roots((GaussianRational(2), GaussianRational(0), GaussianRational(1))) == []
