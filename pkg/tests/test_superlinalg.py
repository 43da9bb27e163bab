from __future__ import annotations

import random

from hypothesis import given, settings, strategies as st

from supercurve.sampling import _scalar_det, random_supermatrix
from supercurve.scalars import GaussianRational
from supercurve.superalgebra import BaseAlgebra, LambdaAlgebra, SuperElement
from supercurve.superlinalg import (
    BModuleRep, SuperMatrix, Subspace, berezinian, hom_dimension, nullspace, quotient, rank,
)

ALG = LambdaAlgebra(BaseAlgebra.grassmann(["b1", "b2"]), 1)
G = GaussianRational


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([(1, 1), (2, 2)]))
def test_berezinian_multiplicative(seed, fmt):
    rng = random.Random(seed)
    M = random_supermatrix(ALG, rng, *fmt)
    N = random_supermatrix(ALG, rng, *fmt)
    assert berezinian(M * N) == berezinian(M) * berezinian(N)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_berezinian_reduces_to_determinant_ratio(seed):
    rng = random.Random(seed)
    M = random_supermatrix(ALG, rng, 2, 2)
    A, _B, _C, D = M.blocks()
    red = lambda blk: [[x.reduce() for x in row] for row in blk]
    assert berezinian(M).reduce() == _scalar_det(red(A)) / _scalar_det(red(D))


def test_one_by_one_formula():
    b1 = SuperElement.generator(ALG, "b1")
    b2 = SuperElement.generator(ALG, "b2")
    one = SuperElement.scalar(ALG, 1)
    M = SuperMatrix([[one, b1], [b2, one]], (1, 1))
    # Ber = (a - b d^-1 c) / d = 1 - b1 b2
    assert berezinian(M) == one - b1 * b2


def test_subspace_rref_is_canonical():
    v1 = {0: G(1), 1: G(2)}
    v2 = {1: G(1), 2: G(1)}
    S1 = Subspace([v1, v2])
    S2 = Subspace([{0: G(1), 1: G(3), 2: G(1)}, v2])
    assert S1 == S2
    assert S1.dim == 2
    assert S1.contains({0: G(2), 1: G(5), 2: G(1)})


def test_nullspace_and_rank():
    rows = [{0: G(1), 1: G(1)}, {1: G(1), 2: G(-1)}]
    ker = nullspace(rows, range(3))
    assert len(ker) == 1
    v = ker[0]
    for r in rows:
        assert sum((c * v.get(j, G(0)) for j, c in r.items()), G(0)) == 0
    assert rank(rows) == 2


def test_hom_dimension_of_free_module():
    base = BaseAlgebra.grassmann(["b"])
    # B itself: basis 1 (even), b (odd); b acts 1 -> b, b -> 0
    action = {0: [{0: G(1)}, {1: G(1)}], 1: [{1: G(1)}, {}]}
    M = BModuleRep(base, [0, 1], action)
    assert M.is_free()
    assert hom_dimension(M) == (1, 1)


def test_quotient_by_b_times_module():
    base = BaseAlgebra.grassmann(["b"])
    action = {0: [{0: G(1)}, {1: G(1)}], 1: [{1: G(1)}, {}]}
    M = BModuleRep(base, [0, 1], action)
    Q = quotient(M, [{1: G(1)}])
    assert Q.dims() == (1, 0)
