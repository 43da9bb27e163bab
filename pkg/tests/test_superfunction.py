from __future__ import annotations

import random

from hypothesis import given, settings, strategies as st

from supercurve.berezin import residue
from supercurve.rational import RationalFunction
from supercurve.sampling import random_points, random_srf
from supercurve.superalgebra import BaseAlgebra, LambdaAlgebra, SuperElement
from supercurve.superfunction import (
    INF, PointP1, SuperRationalFunction as SRF, dlog, exp_nilpotent, laurent_expand, log_decompose,
    order_at, residue_coefficient,
)

ALG = LambdaAlgebra(BaseAlgebra.grassmann(["b1", "b2"]), 1)
z = SRF.z(ALG)
th = SRF.theta(ALG, 1)
b1 = SRF.generator(ALG, "b1")


def test_residues_of_simple_forms():
    one = SuperElement.scalar(ALG, 1)
    assert residue_coefficient(1 / z, PointP1.finite(0)) == one
    assert residue_coefficient(1 / z, INF) == -one
    assert residue_coefficient(1 / (z - 1) ** 2, PointP1.finite(1)) == SuperElement(ALG)


def test_laurent_expansion_at_infinity():
    F = z / (z - 1)
    ser = laurent_expand(F, INF, 3)
    assert [ser.coeff(k).reduce() for k in range(3)] == [1, 1, 1]


def test_order_at():
    assert order_at((z - 2) ** 2 * th, PointP1.finite(2)) == 2
    assert order_at(z ** 3, INF) == -3
    assert order_at(SRF.zero(ALG), INF) is None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_residue_theorem(seed):
    rng = random.Random(seed)
    pts = random_points(rng, 3)
    F = random_srf(ALG, rng, pts, max_order=3)
    total = SuperElement(ALG)
    for P in pts + [INF]:
        total = total + residue_coefficient(F, P)
    assert not total


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_log_decompose_roundtrip(seed):
    rng = random.Random(seed)
    pts = random_points(rng, 2)
    red = SRF.from_rational(ALG, RationalFunction.z() - 7)
    f = red * (1 + random_srf(ALG, rng, pts, parity=0, nilpotent=True))
    r, lam = log_decompose(f)
    assert SRF.from_rational(ALG, r) * exp_nilpotent(lam) == f


def test_dlog_of_unipotent_has_no_residue():
    f = 1 + b1 * th / z
    assert not residue_coefficient(dlog(f), PointP1.finite(0))
