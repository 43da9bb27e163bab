"""Seeded random instances for property checks and the residue suite."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .berezin import LocalAutomorphism
from .rational import RationalFunction
from .scalars import GaussianRational
from .superalgebra import LambdaAlgebra, SuperElement
from .superfunction import PointP1, SuperRationalFunction
from .superlinalg import SuperMatrix

SRF = SuperRationalFunction


def random_scalar(rng: random.Random, bound: int = 3, gaussian: bool = True) -> GaussianRational:
    re = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    im = Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) if gaussian and rng.random() < 0.3 else 0
    return GaussianRational(re, im)


def random_nonzero(rng: random.Random, bound: int = 3) -> GaussianRational:
    while True:
        x = random_scalar(rng, bound)
        if x:
            return x


def _indices(alg: LambdaAlgebra, parity: int | None, nilpotent: bool) -> list[int]:
    out = []
    for a in range(alg.dim):
        if parity is not None and alg.parity[a] != parity:
            continue
        if nilpotent and a == 0:
            continue
        out.append(a)
    return out


def random_element(alg: LambdaAlgebra, rng: random.Random, parity: int | None = None,
                   nilpotent: bool = False, density: float = 0.6) -> SuperElement:
    c = {}
    for a in _indices(alg, parity, nilpotent):
        if rng.random() < density:
            c[a] = random_scalar(rng)
    return SuperElement(alg, c)


def random_unit(alg: LambdaAlgebra, rng: random.Random) -> SuperElement:
    """An even element with nonzero scalar part."""
    return SuperElement.scalar(alg, random_nonzero(rng)) + random_element(alg, rng, 0, True)


def _line(P: PointP1) -> RationalFunction:
    return RationalFunction((-P.value, GaussianRational(1)), (GaussianRational(1),), reduced=True)


def random_rational(rng: random.Random, poles: Sequence[PointP1], max_order: int = 2,
                    max_deg: int = 2) -> RationalFunction:
    """A sum of polar terms at the given finite points plus a polynomial."""
    out = RationalFunction.const(0)
    for P in poles:
        for k in range(1, max_order + 1):
            if rng.random() < 0.6:
                out = out + _line(P) ** (-k) * random_scalar(rng)
    z = RationalFunction.z()
    for k in range(rng.randint(0, max_deg) + 1):
        if rng.random() < 0.5:
            out = out + z ** k * random_scalar(rng)
    return out


def random_srf(alg: LambdaAlgebra, rng: random.Random, poles: Sequence[PointP1],
               parity: int | None = None, nilpotent: bool = False, max_order: int = 2,
               max_deg: int = 2, density: float = 0.5) -> SRF:
    comps = {}
    for a in _indices(alg, parity, nilpotent):
        if rng.random() < density:
            r = random_rational(rng, poles, max_order, max_deg)
            if r:
                comps[a] = r
    return SRF.from_components(alg, comps)


def random_points(rng: random.Random, count: int, pool: Sequence[int] = range(-4, 5)) -> list[PointP1]:
    vals = rng.sample(list(pool), count)
    return sorted(PointP1.finite(v) for v in vals)


def random_supermatrix(alg: LambdaAlgebra, rng: random.Random, p: int, q: int) -> SuperMatrix:
    """An invertible even ``p|q`` matrix over ``alg``.

    Diagonal blocks are random scalar matrices with a nonzero determinant
    plus even nilpotent noise; off-diagonal blocks are odd.
    """
    def scalar_block(n):
        while True:
            M = [[random_scalar(rng) for _ in range(n)] for _ in range(n)]
            if _scalar_det(M):
                return M

    A0, D0 = scalar_block(p), scalar_block(q)
    rows = []
    for i in range(p + q):
        row = []
        for j in range(p + q):
            even_block = (i < p) == (j < p)
            if even_block:
                base = A0[i][j] if i < p else D0[i - p][j - p]
                x = SuperElement.scalar(alg, base) + random_element(alg, rng, 0, True, 0.4)
            else:
                x = random_element(alg, rng, 1, False, 0.5)
            row.append(x)
        rows.append(row)
    return SuperMatrix(rows, (p, q))


def _scalar_det(M):
    n = len(M)
    if n == 0:
        return GaussianRational(1)
    if n == 1:
        return M[0][0]
    total = GaussianRational(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in M[1:]]
        term = M[0][j] * _scalar_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def random_automorphism(alg: LambdaAlgebra, rng: random.Random, P: PointP1) -> LocalAutomorphism:
    """A random element of Aut+ that is regular and invertible at the finite point ``P``.

    ``z`` maps to ``z`` plus even nilpotent terms; ``theta_i`` maps to
    ``sum_j A_ij(z) theta_j`` plus nilpotent terms, with ``A(P)`` invertible.
    The images are polynomial in ``z - P``.
    """
    t = SRF.from_rational(alg, _line(P))
    q = alg.q

    def noise(parity):
        # coefficients in n(B), so the reduced theta-linear part stays M
        c = {a: random_scalar(rng) for a in _indices(alg, parity, True)
             if alg.split(a)[0] and rng.random() < 0.4}
        return SRF.constant(alg, SuperElement(alg, c))

    def poly(parity, deg=2):
        out = SRF.zero(alg)
        for k in range(deg + 1):
            out = out + noise(parity) * t ** k
        return out

    image_z = SRF.z(alg) + poly(0)
    thetas = [SRF.theta(alg, j) for j in range(1, q + 1)]
    while True:
        M = [[random_scalar(rng) for _ in range(q)] for _ in range(q)]
        if _scalar_det(M):
            break
    images = []
    for i in range(q):
        img = poly(1)
        for j in range(q):
            coef = SRF.constant(alg, M[i][j]) + t * SRF.constant(alg, random_scalar(rng)) + poly(0, 1)
            img = img + coef * thetas[j]
        images.append(img)
    return LocalAutomorphism(alg, image_z, images)


def random_local_unit(alg: LambdaAlgebra, rng: random.Random, P: PointP1) -> SRF:
    """A unit of ``O_P``: nonzero value at ``P`` times ``1 +`` regular nilpotent terms."""
    others = [Q for Q in (PointP1.finite(v) for v in (5, -5, 6)) if Q != P]
    red = SRF.constant(alg, random_nonzero(rng))
    if not P.is_infinite and rng.random() < 0.5:
        red = red * SRF.from_rational(alg, _line(others[0]))
    poles = [] if P.is_infinite else others[:1]
    return red * (1 + random_srf(alg, rng, poles, 0, True, 1, 0 if P.is_infinite else 1, 0.4))
