from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from supercurve.sampling import random_element
from supercurve.superalgebra import AlgebraError, BaseAlgebra, LambdaAlgebra, SuperElement

ALGEBRAS = [
    BaseAlgebra.complex(),
    BaseAlgebra.grassmann(["b1", "b2"]),
    BaseAlgebra.truncated("eps", 3),
    BaseAlgebra.tensor(BaseAlgebra.grassmann(["b"]), BaseAlgebra.truncated("eps", 2)),
]


@pytest.mark.parametrize("base", ALGEBRAS, ids=lambda b: b.name)
def test_presets_validate(base):
    base.validate()
    assert base.nilpotency_index() is not None


def test_invalid_table_is_rejected():
    with pytest.raises(AlgebraError):
        # an odd generator squaring to the unit breaks supercommutativity
        from supercurve.scalars import ONE
        BaseAlgebra(["1", "b"], [0, 1], {(1, 1): {0: ONE}}, {"b": 1}, "bad")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(ALGEBRAS), st.integers(1, 2))
def test_supercommutativity_and_associativity(seed, base, q):
    rng = random.Random(seed)
    alg = LambdaAlgebra(base, q)
    x, y, w = (random_element(alg, rng, rng.randint(0, 1)) for _ in range(3))
    sign = -1 if x.parity() == 1 and y.parity() == 1 else 1
    assert x * y == (y * x) * sign
    assert (x * y) * w == x * (y * w)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_theta_derivative_is_odd_derivation(seed, q):
    rng = random.Random(seed)
    alg = LambdaAlgebra(BaseAlgebra.grassmann(["b1", "b2"]), q)
    x = random_element(alg, rng, rng.randint(0, 1))
    y = random_element(alg, rng)
    for i in range(1, q + 1):
        lhs = (x * y).theta_derivative(i)
        rhs = x.theta_derivative(i) * y + x * y.theta_derivative(i) * (-1 if x.parity() == 1 else 1)
        assert lhs == rhs


def test_berezin_top_conventions():
    alg = LambdaAlgebra(BaseAlgebra.grassmann(["b"]), 2)
    t1, t2 = SuperElement.theta(alg, 1), SuperElement.theta(alg, 2)
    b = SuperElement.generator(alg, "b")
    assert (t1 * t2).berezin_top() == SuperElement.scalar(alg, 1)
    assert (t2 * t1).berezin_top() == SuperElement.scalar(alg, -1)
    assert (b + b * t2 * t1).berezin_top() == -b


def test_theta_derivative_sign_example():
    alg = LambdaAlgebra(BaseAlgebra.grassmann(["b"]), 2)
    t1, t2 = SuperElement.theta(alg, 1), SuperElement.theta(alg, 2)
    b = SuperElement.generator(alg, "b")
    # d/dtheta2 passes the odd b and theta1
    assert (b * t1 * t2).theta_derivative(2) == b * t1
    assert (b * t1 * t2).theta_derivative(1) == -(b * t2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_unit_inverse(seed):
    rng = random.Random(seed)
    alg = LambdaAlgebra(BaseAlgebra.tensor(BaseAlgebra.grassmann(["b"]), BaseAlgebra.truncated("e", 3)), 1)
    u = SuperElement.scalar(alg, rng.randint(1, 5)) + random_element(alg, rng, 0, True)
    assert u * u.inverse() == SuperElement.scalar(alg, 1)


def test_nilpotent_is_not_invertible():
    alg = LambdaAlgebra(BaseAlgebra.grassmann(["b"]), 1)
    assert not SuperElement.generator(alg, "b").is_unit()
