from __future__ import annotations

import random

import pytest

from conftest import P0, split_curve, twisted_curve
from supercurve.berezin import DifferentialOperator
from supercurve.curve import LineBundle, SuperCurve, h0
from supercurve.divisor import (
    CartierDivisor, abel, abel_oracle, abel_theorem_check, degree, divisor_representative,
    has_effective_representative, is_trivial, line_bundle_of,
)
from supercurve.sampling import random_local_unit
from supercurve.superalgebra import BaseAlgebra
from supercurve.superfunction import INF, PointP1, SuperRationalFunction as SRF

C = BaseAlgebra.complex()
P1, P2, P3 = (PointP1.finite(v) for v in (1, 2, 3))


def _vars(X):
    alg = X.alg
    return SRF.z(alg), SRF.theta(alg, 1), SRF.generator(alg, "b")


def test_degree_examples(split3_beta):
    X = split3_beta
    z, th, b = _vars(X)
    assert degree(CartierDivisor(X, {P0: z})) == 1
    assert degree(CartierDivisor(X, {P0: 1 - 2 * b * th / z})) == 0
    assert degree(CartierDivisor(X, {P0: z ** 2, P1: 1 / (z - 1)})) == 1


def test_degree_additive(split3_beta):
    X = split3_beta
    z, th, b = _vars(X)
    D = CartierDivisor(X, {P0: z ** 2 * (1 + b * th), P1: 1 / (z - 1)})
    E = CartierDivisor(X, {P1: (z - 1) ** 3, P2: (z - 2) * (1 + b * th / (z - 2))})
    assert degree(D + E) == degree(D) + degree(E)
    assert degree(D - E) == degree(D) - degree(E)


def test_degree_ignores_unit_perturbation(split3_beta):
    X = split3_beta
    z, th, b = _vars(X)
    D = CartierDivisor(X, {P1: (z - 1) ** 2, P2: 1 / (z - 2)})
    rng = random.Random(3)
    units = {P: random_local_unit(X.alg, rng, P) for P in (P1, P2)}
    assert degree(D.perturbed(units)) == degree(D)


def test_line_bundle_of_examples():
    X = SuperCurve.trivial(C, 1)
    z = SRF.z(X.alg)
    assert line_bundle_of(CartierDivisor(X, {})).multipliers == {}
    L = line_bundle_of(CartierDivisor(X, {P0: z}))
    assert h0(L).dims() == (2, 2)
    D, E = CartierDivisor(X, {P0: z}), CartierDivisor(X, {P0: z, P1: z - 1})
    prod = line_bundle_of(D + E)
    assert prod.xi(P0) == line_bundle_of(D).xi(P0) * line_bundle_of(E).xi(P0)
    assert prod.xi(P1) == line_bundle_of(E).xi(P1)


def test_is_trivial_basic(split3_beta):
    X = split3_beta
    z = SRF.z(X.alg)
    ok, w = is_trivial(X.trivial_bundle())
    assert ok and CartierDivisor.principal(X, w).support() == []
    f = (z - 2) / (z - 3)
    ok, w = is_trivial(line_bundle_of(CartierDivisor.principal(X, f)))
    assert ok
    assert CartierDivisor.principal(X, w).support() == CartierDivisor.principal(X, f).support()


def test_is_trivial_rejects_nonzero_degree(split3_beta):
    z = SRF.z(split3_beta.alg)
    assert is_trivial(line_bundle_of(CartierDivisor(split3_beta, {P1: z - 1}))) == (False, None)


def test_perturbed_transition_is_nontrivial(split3_beta):
    # 1 + b theta/(z-1) represents a nonzero class of H^1(O(-3)) times b
    z, th, b = _vars(split3_beta)
    D = CartierDivisor(split3_beta, {P1: 1 + b * th / (z - 1)})
    assert degree(D) == 0
    ok, _ = is_trivial(line_bundle_of(D))
    assert not ok
    chk = abel_theorem_check(D)
    assert chk.agree and not chk.abel_zero


def test_principal_divisors_have_zero_abel(split3_beta):
    z, th, b = _vars(split3_beta)
    for f in ((z - 2) / (z - 3), (z - 1) * (z - 2) / (z - 3) ** 2 * (1 + b * th / (z - 4) ** 2)):
        D = CartierDivisor.principal(split3_beta, f)
        assert abel(D).is_zero()
        chk = abel_theorem_check(D)
        assert chk.trivial and chk.agree


def test_log_example_difference_of_points(split3_beta):
    z, _th, _b = _vars(split3_beta)
    D = CartierDivisor(split3_beta, {P2: z - 2}) - CartierDivisor(split3_beta, {P3: z - 3})
    img = abel(D)
    assert img == abel_oracle(D)
    assert img.is_zero()


def test_single_point_nilpotent_value_is_rational(split3_beta):
    z, th, b = _vars(split3_beta)
    D = CartierDivisor(split3_beta, {P0: 1 + b * th / z})
    img = abel(D)
    assert img == abel_oracle(D)
    assert all(v.is_rational() for v in img.values)


def test_abel_additive_with_principal(split3_beta):
    z, th, b = _vars(split3_beta)
    D1 = CartierDivisor(split3_beta, {P1: 1 + b * th / (z - 1)})
    P = CartierDivisor(split3_beta, {P2: z - 2, P3: 1 / (z - 3)})
    both = abel(D1 + P)
    assert both == abel(D1)
    assert both == abel(D1) + abel(P)
    assert not abel_theorem_check(D1 + P).trivial


def test_abel_independent_of_marked_points(split3_beta):
    z, th, b = _vars(split3_beta)
    D = CartierDivisor(split3_beta, {P1: 1 + b * th / (z - 1)})
    base = abel(D)
    assert abel(D, U=[P1, P2, PointP1.finite(-4)]) == base


def test_abel_independent_of_representative_and_lift(split3_beta):
    X = split3_beta
    alg = X.alg
    z, th, b = _vars(X)
    D = CartierDivisor(X, {P1: 1 + b * th / (z - 1), P2: z - 2, P3: 1 / (z - 3)})
    base = abel(D)
    rng = random.Random(11)
    units = {P: random_local_unit(alg, rng, P) for P in (P1, P2)}
    assert abel(D.perturbed(units)) == base
    f, _R, _lam = divisor_representative(D)
    assert abel(D, representative=f * (1 + b * th * z ** 3)) == base
    M = (DifferentialOperator.d_theta(alg, 1).left_multiply(z ** 2 * th)
         + DifferentialOperator.d_z(alg).left_multiply(z * b * th))
    assert abel(D, lift_perturbation=M) == base


def test_abel_rejects_infinity_in_support(split3_beta):
    z, _th, _b = _vars(split3_beta)
    D = CartierDivisor(split3_beta, {P1: z - 1, INF: 1 / z})
    with pytest.raises(ValueError):
        abel(D)


def test_twisted_curve_abel_theorem():
    X = twisted_curve()
    alg = X.alg
    z, th = SRF.z(alg), SRF.theta(alg, 1)
    b1, b2 = SRF.generator(alg, "b1"), SRF.generator(alg, "b2")
    for data in ({P1: 1 + b1 * th / (z - 1)}, {P1: 1 + b1 * b2 / (z - 1)},
                 {P1: (z - 1) * (1 + b1 * b2 / (z - 1)), P2: 1 / (z - 2)}):
        chk = abel_theorem_check(CartierDivisor(X, data))
        assert chk.agree
        assert abel(CartierDivisor(X, data)) == abel_oracle(CartierDivisor(X, data))


def test_effectivity_gap(split2_beta):
    X = split2_beta
    z, th, b = _vars(X)
    Fc = LineBundle(X, {P0: 1 + b * th / z})
    assert Fc.reduced_degree() == X.trivial_bundle().reduced_degree() == 0
    assert not has_effective_representative(Fc)
    assert all(not s.reduce() for s in h0(Fc).sections)
    assert has_effective_representative(X.trivial_bundle())
    assert has_effective_representative(LineBundle(X, {P0: (1 + b * th / z) / z}))
