from __future__ import annotations

import pytest

from conftest import P0, split_curve, twisted_curve
from supercurve.berezin import LocalAutomorphism
from supercurve.catalog import catalog
from supercurve.curve import (
    LineBundle, SuperCurve, TruncationBounds, TruncationInstabilityError, ber_twist, h0, h0_ber, h1,
    principal_part_solvable, serre_pairing, stalk_member, verify_duality,
)
from supercurve.superalgebra import BaseAlgebra, LambdaAlgebra
from supercurve.superfunction import PointP1, SuperRationalFunction as SRF, order_at

C = BaseAlgebra.complex()
P1 = PointP1.finite(1)


def _twist(X: SuperCurve, d: int) -> LineBundle:
    """O(d) on the reduced level: xi = z^-d at 0."""
    z = SRF.z(X.alg)
    return LineBundle(X, {P0: z ** (-d)} if d else {})


@pytest.mark.parametrize("d", [-3, -2, -1, 0, 1, 2])
def test_trivial_curve_riemann_roch(d):
    X = SuperCurve.trivial(C, 1)
    L = _twist(X, d)
    want0 = max(d + 1, 0)
    want1 = max(-d - 1, 0)
    assert h0(L).dims() == (want0, want0)
    assert h1(L).dims() == (want1, want1)
    # Serre duality over C: same dimensions on both sides
    assert h0_ber(L).dims() == (want1, want1)


def test_trivial_bundle_dimension_scales_with_base(beta):
    for q in (1, 2):
        X = SuperCurve.trivial(beta, q)
        M = h0(X.trivial_bundle())
        assert sum(M.dims()) == 2 ** q * beta.dim
        assert h1(X.trivial_bundle()).dims() == (0, 0)


def test_split_o_minus_3_over_c():
    X = split_curve(C, 3)
    O = X.trivial_bundle()
    assert h0(O).dims() == (1, 0)
    assert h1(O).dims() == (0, 2)
    assert h0_ber(O).dims() == (0, 2)


def test_split_o_minus_2_squared():
    X = split_curve(C, 2, q=2)
    assert h1(X.trivial_bundle()).dims() == (3, 2)
    assert h0_ber(X).dims() == (3, 2)


def test_twisted_curve_dims():
    X = twisted_curve()
    O = X.trivial_bundle()
    assert h0(O).dims() == (2, 2)
    assert h1(O).dims() == (4, 4)
    assert h0_ber(O).dims() == (4, 4)


def test_h0_ber_matches_ber_twist_up_to_parity(split3_beta):
    X = split3_beta
    for L in (X.trivial_bundle(), _twist(X, 1), _twist(X, -2)):
        e, o = h0_ber(L).dims()
        e2, o2 = h0(ber_twist(L)).dims()
        assert (e, o) == ((o2, e2) if X.q % 2 else (e2, o2))


def test_stalk_member_examples():
    X = SuperCurve.trivial(C, 1)
    z = SRF.z(X.alg)
    O = X.trivial_bundle()
    assert not stalk_member(1 / z, P0, O)
    assert stalk_member(1 / z, P0, LineBundle(X, {P0: 1 / z}))
    assert stalk_member(z, P0, O)
    assert stalk_member(1 / z, P1, O)


def test_stalk_member_twist_matches_substitution():
    # gamma: theta -> z theta.  gamma(a + b theta) = a + b z theta, so theta/z is
    # in the stalk iff b = 1/z^2 is regular, which it is not.
    X = split_curve(C, 1)
    alg = X.alg
    z, th = SRF.z(alg), SRF.theta(alg, 1)
    O = X.trivial_bundle()
    g = X.gluing_at(P0)
    for b_exp in (-2, -1, 0, 1):
        f = g.apply(z ** b_exp * th)
        assert stalk_member(f, P0, O) == (b_exp >= 0)
    assert not stalk_member(th / z, P0, O)
    assert stalk_member(th * z, P0, O)


def test_explicit_bounds_too_small_raise():
    X = split_curve(C, 3)
    L = _twist(X, -6)
    with pytest.raises(TruncationInstabilityError):
        h1(L, TruncationBounds((P0,), 1))


def test_h1_stable_under_enlargement(split3_beta):
    O = split3_beta.trivial_bundle()
    b = TruncationBounds.for_bundle(O)
    base = h1(O, b).dims()
    assert h1(O, b.doubled()).dims() == base
    assert h1(O, b.enlarged()).dims() == base
    assert h0_ber(O, b.enlarged().doubled()).dims() == h0_ber(O, b).dims()


def test_serre_pairing_split3_invertible_over_c():
    X = split_curve(C, 3)
    pm = serre_pairing(X.trivial_bundle())
    assert pm.annihilates_relations
    assert len(pm.rows) == 2
    rep = verify_duality(X.trivial_bundle())
    assert rep.h1_injective and rep.h0_ber_injective and rep.ok


def test_serre_pairing_z2_nonzero():
    X = SuperCurve.trivial(C, 1)
    L = _twist(X, -2)
    pm = serre_pairing(L)
    assert pm.annihilates_relations
    assert len(pm.rows) == 2 and all(any(bool(x) for x in row) for row in pm.rows)


def test_zero_module_is_vacuously_perfect():
    X = SuperCurve.trivial(C, 1)
    rep = verify_duality(X.trivial_bundle())
    assert rep.h1_dims == (0, 0) and rep.perfect and rep.ok


def _catalog_bundles():
    out = []
    for sc in catalog():
        for cmd in sc.commands:
            if cmd.name == "duality-verify":
                out.append(pytest.param(sc, cmd.args[0], id=f"{sc.name}-{cmd.args[0]}"))
    return out


@pytest.mark.parametrize("sc,name", _catalog_bundles())
def test_duality_on_catalog(sc, name):
    L = sc.bundles[name]
    rep = verify_duality(L, sc.bounds_for(L, 1))
    assert rep.well_defined and rep.stable
    assert rep.h1_injective and rep.h0_ber_injective
    if rep.base_is_grassmann:
        assert rep.perfect


def test_principal_parts():
    X = SuperCurve.trivial(C, 1)
    z, th = SRF.z(X.alg), SRF.theta(X.alg, 1)
    assert principal_part_solvable({}, X) == (True, SRF.zero(X.alg))
    crit, wit = principal_part_solvable({P0: th / z}, X)
    assert not crit and wit is None
    crit, wit = principal_part_solvable({P0: th / z, P1: -th / (z - 1)}, X)
    assert crit and wit is not None
    for P, t in ((P0, th / z), (P1, -th / (z - 1))):
        rest = order_at(wit - t, P)
        assert rest is None or rest >= 0


def test_principal_parts_criterion_matches_witness_on_split(split3_beta):
    X = split3_beta
    alg = X.alg
    z, th = SRF.z(alg), SRF.theta(alg, 1)
    b = SRF.generator(alg, "b")
    P2 = PointP1.finite(2)
    cases = [
        {P1: th / (z - 1)},
        {P1: b / (z - 1)},
        {P1: th / (z - 1) ** 2, P2: -th / (z - 2) ** 2},
        {P1: b * th / (z - 1), P2: -b * th / (z - 2)},
    ]
    for tails in cases:
        crit, wit = principal_part_solvable(tails, X)
        assert crit == (wit is not None)
