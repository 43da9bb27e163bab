"""Acceptance criteria, one PASS/FAIL line each, all at exact equality.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed
uncaptured) or directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import sys
import tempfile
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import P0, split_curve  # noqa: E402
from supercurve.berezin import (  # noqa: E402
    BerSection, DifferentialOperator, change_of_variables, residue,
)
from supercurve.catalog import catalog  # noqa: E402
from supercurve.cli import main as cli_main  # noqa: E402
from supercurve.curve import (  # noqa: E402
    LineBundle, SuperCurve, TruncationBounds, h0, h0_ber, h1, principal_part_solvable,
    verify_duality,
)
from supercurve.divisor import (  # noqa: E402
    CartierDivisor, abel, abel_oracle, abel_theorem_check, degree, has_effective_representative,
)
from supercurve.sampling import (  # noqa: E402
    _line, _scalar_det, random_automorphism, random_element, random_local_unit, random_points,
    random_srf, random_supermatrix,
)
from supercurve.superalgebra import BaseAlgebra, LambdaAlgebra, SuperElement  # noqa: E402
from supercurve.superfunction import INF, PointP1, SuperRationalFunction as SRF  # noqa: E402
from supercurve.superlinalg import berezinian  # noqa: E402

B2 = BaseAlgebra.grassmann(["b1", "b2"])
BETA = BaseAlgebra.grassmann(["b"])
C = BaseAlgebra.complex()


# 1 ----------------------------------------------------------------------------------

def residue_theorem():
    rng = random.Random(101)
    algs = [LambdaAlgebra(B2, 1), LambdaAlgebra(B2, 2)]
    bad = 0
    for i in range(200):
        alg = algs[i % 2]
        pts = random_points(rng, 4)
        F = random_srf(alg, rng, pts, max_order=3, density=0.6)
        total = SuperElement(alg)
        for P in pts + [INF]:
            total = total + residue(F, P)
        bad += bool(total)
    return bad == 0, f"200 random functions, {bad} nonzero totals"


# 2 ----------------------------------------------------------------------------------

def berezinian_checks():
    rng = random.Random(202)
    alg = LambdaAlgebra(B2, 1)
    mult_bad = red_bad = 0
    for i in range(100):
        fmt = (1, 1) if i % 2 else (2, 2)
        M = random_supermatrix(alg, rng, *fmt)
        N = random_supermatrix(alg, rng, *fmt)
        mult_bad += berezinian(M * N) != berezinian(M) * berezinian(N)
        A, _B, _C, D = M.blocks()
        red = lambda blk: [[x.reduce() for x in row] for row in blk]
        red_bad += berezinian(M).reduce() != _scalar_det(red(A)) / _scalar_det(red(D))
    return mult_bad == red_bad == 0, f"100 pairs, {mult_bad} multiplicativity and {red_bad} reduction failures"


# 3 ----------------------------------------------------------------------------------

def change_of_variables_invariance():
    rng = random.Random(303)
    algs = [LambdaAlgebra(B2, 1), LambdaAlgebra(B2, 2), LambdaAlgebra(BETA, 1)]
    bad = 0
    for i in range(50):
        alg = algs[i % 3]
        P = PointP1.finite(rng.randint(-2, 2))
        sigma = random_automorphism(alg, rng, P)
        h = random_srf(alg, rng, [P], max_order=3, density=0.6)
        bad += residue(h, P) != residue(change_of_variables(BerSection(h), sigma), P)
    return bad == 0, f"50 automorphisms, {bad} residue changes"


# 4 ----------------------------------------------------------------------------------

def _catalog_pairs():
    for sc in catalog():
        for cmd in sc.commands:
            if cmd.name == "duality-verify":
                L = sc.bundles[cmd.args[0]]
                yield sc, cmd.args[0], L, sc.bounds_for(L, 1)


def serre_duality():
    failures = []
    count = 0
    for sc, name, L, bounds in _catalog_pairs():
        count += 1
        rep = verify_duality(L, bounds)
        if not (rep.well_defined and rep.h1_injective and rep.ok):
            failures.append(f"{sc.name}/{name}")
        if rep.base_is_grassmann and not rep.perfect:
            failures.append(f"{sc.name}/{name} not perfect")
    # classical oracles
    X3 = split_curve(C, 3)
    rep = verify_duality(X3.trivial_bundle())
    if not (rep.h1_dims == (0, 2) and rep.h0_ber_dims == (0, 2) and rep.perfect):
        failures.append("O(-3) split curve over C")
    X = SuperCurve.trivial(C, 1)
    rep = verify_duality(LineBundle(X, {P0: SRF.z(X.alg) ** 2}))
    if not (rep.h1_dims == (1, 1) and rep.perfect):
        failures.append("xi = z^2 twist")
    ok = not failures and count >= 6
    return ok, f"{count} catalog pairs" + (f"; failed: {', '.join(failures)}" if failures else "")


# 5 ----------------------------------------------------------------------------------

def truncation_stability():
    failures = []
    count = 0
    for sc in catalog():
        for name, L in sorted(sc.bundles.items()):
            b = sc.bounds_for(L, 1) or TruncationBounds.for_bundle(L)
            dims = None
            for bb in (b, b.doubled(), b.enlarged(), b.doubled().enlarged()):
                d = (h0(L, bb, check=False).dims(), h1(L, bb, check=False).dims(),
                     h0_ber(L, bb, check=False).dims())
                if dims is None:
                    dims = d
                elif d != dims:
                    failures.append(f"{sc.name}/{name} dims")
            count += 1
    for sc, name, L, bounds in _catalog_pairs():
        if not verify_duality(L, bounds).stable:
            failures.append(f"{sc.name}/{name} pairing")
    return not failures, f"{count} bundles" + (f"; failed: {', '.join(failures)}" if failures else "")


# 6 ----------------------------------------------------------------------------------

def _t(alg, P):
    return SRF.from_rational(alg, _line(P))


def _random_tails(alg, rng):
    pts = random_points(rng, rng.randint(1, 2), pool=range(1, 5))
    tails = {}
    for P in pts:
        t = SRF.zero(alg)
        for k in (1, 2):
            if rng.random() < 0.7:
                c = random_element(alg, rng, density=0.5)
                t = t + SRF.constant(alg, c) / _t(alg, P) ** k
        tails[P] = t
    if rng.random() < 0.5 and len(pts) == 1:
        # balance a simple pole so the criterion can hold
        P = pts[0]
        Q = PointP1.finite(-rng.randint(1, 4))
        c = random_element(alg, rng, density=0.5)
        tails = {P: SRF.constant(alg, c) / _t(alg, P), Q: -SRF.constant(alg, c) / _t(alg, Q)}
    return tails


def principal_parts():
    rng = random.Random(606)
    curves = [SuperCurve.trivial(C, 1), SuperCurve.trivial(BETA, 1), split_curve(BETA, 3),
              split_curve(BETA, 2), split_curve(C, 2, q=2)]
    bad = solvable = 0
    for i in range(20):
        X = curves[i % len(curves)]
        tails = _random_tails(X.alg, rng)
        crit, wit = principal_part_solvable(tails, X)
        if crit != (wit is not None):
            bad += 1
        solvable += crit
    return bad == 0, f"20 instances ({solvable} solvable), {bad} disagreements"


# 7 ----------------------------------------------------------------------------------

def degree_integrality():
    rng = random.Random(707)
    curves = [SuperCurve.trivial(B2, 1), split_curve(BETA, 3), split_curve(B2, 2, q=2)]
    bad = 0
    for i in range(100):
        X = curves[i % 3]
        pts = random_points(rng, rng.randint(1, 3), pool=range(-3, 4))
        orders = {P: rng.randint(-3, 3) for P in pts}
        data = {}
        for P, n in orders.items():
            u = random_local_unit(X.alg, rng, P)
            g = X.gluing_at(P)
            u = g.apply(u) if g is not None else u
            data[P] = _t(X.alg, P) ** n * u
        try:
            d = degree(CartierDivisor(X, data))
        except ArithmeticError:
            bad += 1
            continue
        bad += d != sum(orders.values())
    return bad == 0, f"100 divisors, {bad} failures"


# 8 ----------------------------------------------------------------------------------

def abel_theorem():
    rng = random.Random(808)
    failures = []
    count = 0
    curves = set()
    for sc in catalog():
        for cmd in sc.commands:
            if cmd.name != "abel-check":
                continue
            D = sc.divisors[cmd.args[0]]
            tag = f"{sc.name}/{cmd.args[0]}"
            count += 1
            curves.add(sc.name)
            chk = abel_theorem_check(D)
            want = sc.expectations.get(cmd.args[0], {}).get("expect_trivial")
            if not chk.agree or (want is not None and want != chk.trivial):
                failures.append(f"{tag} disagree")
            if abel_oracle(D) != chk.image:
                failures.append(f"{tag} oracle")
            alg = D.curve.alg
            units = {P: random_local_unit(alg, rng, P) for P in D.support()}
            if abel(D.perturbed(units)) != chk.image:
                failures.append(f"{tag} representative")
            z, th = SRF.z(alg), SRF.theta(alg, 1)
            M = (DifferentialOperator.d_theta(alg, 1).left_multiply(z ** 2 * th)
                 + DifferentialOperator.d_z(alg).left_multiply(SRF.constant(alg, random_element(alg, rng, 1)) * z))
            if abel(D, lift_perturbation=M) != chk.image:
                failures.append(f"{tag} lift")
            extra = list(D.support()) + [PointP1.finite(-5)]
            if abel(D, U=extra) != chk.image:
                failures.append(f"{tag} marked points")
    # additivity on the split O(-3) curve over C[b]
    sc = next(s for s in catalog() if s.name == "split O(-3) over C[b]")
    Ds = sc.divisors
    for a, b in (("D1", "P"), ("D1", "D3"), ("D0", "Q"), ("D2", "D3")):
        if abel(Ds[a] + Ds[b]) != abel(Ds[a]) + abel(Ds[b]):
            failures.append(f"additivity {a}+{b}")
    if abel(Ds["D1+P"]) != abel(Ds["D1"]):
        failures.append("D1+P vs D1")
    ok = not failures and count >= 10 and len(curves) >= 3
    detail = f"{count} divisors on {len(curves)} curves"
    return ok, detail + (f"; failed: {', '.join(failures)}" if failures else "")


# 9 ----------------------------------------------------------------------------------

def effectivity_gap():
    X = split_curve(BETA, 2)
    alg = X.alg
    z, th, b = SRF.z(alg), SRF.theta(alg, 1), SRF.generator(alg, "b")
    special = LineBundle(X, {P0: 1 + b * th / z})
    generic = X.trivial_bundle()
    nilpotent = all(not s.reduce() for s in h0(special).sections) and bool(h0(special).sections)
    ok = (not has_effective_representative(special) and has_effective_representative(generic)
          and nilpotent and special.reduced_degree() == generic.reduced_degree())
    return ok, f"special: effective={has_effective_representative(special)}, generic: effective={has_effective_representative(generic)}"


# 10 ---------------------------------------------------------------------------------

def determinism():
    with tempfile.TemporaryDirectory() as tmp:
        a, b = Path(tmp) / "a.json", Path(tmp) / "b.json"
        import contextlib
        import io
        with contextlib.redirect_stdout(io.StringIO()):
            ra = cli_main(["--catalog", "--seed", "7", "--json", str(a)])
            rb = cli_main(["--catalog", "--seed", "7", "--json", str(b)])
        same = a.read_bytes() == b.read_bytes()
    return same and ra == rb == 0, f"byte-identical={same}, exit codes {ra}/{rb}"


CRITERIA = [
    (1, "residue theorem", residue_theorem),
    (2, "Berezinian multiplicativity and reduction", berezinian_checks),
    (3, "change-of-variables invariance", change_of_variables_invariance),
    (4, "Serre duality on the catalog", serre_duality),
    (5, "truncation stability", truncation_stability),
    (6, "principal-part criterion", principal_parts),
    (7, "degree integrality", degree_integrality),
    (8, "Abel's theorem", abel_theorem),
    (9, "effectivity gap", effectivity_gap),
    (10, "determinism", determinism),
]


def _outcome(num, title, fn) -> tuple[bool, str]:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported on its line
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return ok, f"{'PASS' if ok else 'FAIL'} [{num:2}] {title}: {detail}"


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion-{n}" for n, _t, _f in CRITERIA])
def test_criterion(num, title, fn, capsys):
    ok, line = _outcome(num, title, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_outcome(*c) for c in CRITERIA]
    for _ok, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _l in results) else 1)
