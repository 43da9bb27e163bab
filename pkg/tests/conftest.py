from __future__ import annotations

import pytest

from supercurve.berezin import LocalAutomorphism
from supercurve.curve import SuperCurve
from supercurve.superalgebra import BaseAlgebra, LambdaAlgebra
from supercurve.superfunction import PointP1, SuperRationalFunction as SRF

P0 = PointP1.finite(0)


def split_curve(base: BaseAlgebra, degree: int, q: int = 1) -> SuperCurve:
    """Split curve with odd part O(-degree)^q, glued at 0 by theta -> z^degree theta."""
    alg = LambdaAlgebra(base, q)
    z = SRF.z(alg)
    thetas = [z ** degree * SRF.theta(alg, i) for i in range(1, q + 1)]
    return SuperCurve(base, q, {P0: LocalAutomorphism(alg, z, thetas)}, f"split O(-{degree})^{q}")


def twisted_curve() -> SuperCurve:
    base = BaseAlgebra.grassmann(["b1", "b2"])
    alg = LambdaAlgebra(base, 1)
    z, th = SRF.z(alg), SRF.theta(alg, 1)
    b1, b2 = SRF.generator(alg, "b1"), SRF.generator(alg, "b2")
    return SuperCurve(base, 1, {P0: LocalAutomorphism(alg, z + b1 * th, [z ** 3 * th + b2 * z])}, "twisted")


@pytest.fixture
def beta():
    return BaseAlgebra.grassmann(["b"])


@pytest.fixture
def split3_beta(beta):
    return split_curve(beta, 3)


@pytest.fixture
def split2_beta(beta):
    return split_curve(beta, 2)
