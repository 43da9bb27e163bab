from __future__ import annotations

import random

from hypothesis import given, settings, strategies as st

from supercurve.berezin import (
    BerSection, DifferentialOperator, LocalAutomorphism, change_of_variables, lift_to_Dsharp, residue,
    super_jacobian,
)
from supercurve.sampling import random_automorphism, random_srf
from supercurve.superalgebra import BaseAlgebra, LambdaAlgebra
from supercurve.superfunction import PointP1, SuperRationalFunction as SRF
from supercurve.superlinalg import berezinian

B2 = BaseAlgebra.grassmann(["b1", "b2"])


def test_jacobian_example():
    alg = LambdaAlgebra(BaseAlgebra.grassmann(["eps"]), 1)
    z, th, e = SRF.z(alg), SRF.theta(alg, 1), SRF.generator(alg, "eps")
    J = super_jacobian(LocalAutomorphism(alg, z + e * th, [th]))
    assert J.rows == [[SRF.constant(alg, 1), e], [SRF.zero(alg), SRF.constant(alg, 1)]]


def test_theta_scaling_has_inverse_berezinian():
    alg = LambdaAlgebra(B2, 1)
    z, th = SRF.z(alg), SRF.theta(alg, 1)
    sigma = LocalAutomorphism(alg, z, [(z + 2) * th])
    assert berezinian(super_jacobian(sigma)) == 1 / (z + 2)


def test_automorphism_inverse():
    alg = LambdaAlgebra(B2, 1)
    z, th = SRF.z(alg), SRF.theta(alg, 1)
    b1, b2 = SRF.generator(alg, "b1"), SRF.generator(alg, "b2")
    sigma = LocalAutomorphism(alg, z + b1 * b2 / z + b1 * th / (z - 2), [th * (1 + z * z) + b2 / (z * z)])
    assert sigma.compose(sigma.inverse()).is_identity()
    assert sigma.inverse().compose(sigma).is_identity()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_residue_invariant_under_automorphisms(seed, q):
    rng = random.Random(seed)
    alg = LambdaAlgebra(B2, q)
    P = PointP1.finite(rng.randint(-2, 2))
    sigma = random_automorphism(alg, rng, P)
    h = random_srf(alg, rng, [P], max_order=3, density=0.6)
    assert residue(h, P) == residue(change_of_variables(BerSection(h), sigma), P)


def test_lift_is_closed_and_kills_constants():
    alg = LambdaAlgebra(B2, 2)
    z = SRF.z(alg)
    b1 = SRF.generator(alg, "b1")
    h = SRF.theta(alg, 1) * SRF.theta(alg, 2) / z ** 2 + b1 * SRF.theta(alg, 1) / (z - 1) ** 2
    op = lift_to_Dsharp(h, [PointP1.finite(5)])
    assert op.kills_constants()
    assert op.is_closed()


def test_non_closed_operator_detected():
    alg = LambdaAlgebra(B2, 1)
    op = DifferentialOperator.multiplication(alg, SRF.z(alg), "dz")
    assert not op.is_closed()
