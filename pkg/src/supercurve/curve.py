"""Genus-zero supercurves glued from P^1, line bundles and their cohomology.

A curve is ``X^gamma``: the structure sheaf of ``P^1 x C^{0|q}`` over ``B``
with the stalk at each gluing point ``P`` replaced by ``gamma_P(O_P)``.  A
line bundle adds an even unit ``xi_P`` per point, with stalk
``gamma_P(xi_P O_P)``.

Cohomology is computed from the map

    Phi : V -> (+)_P principal parts of psi_P(v),   psi_P(x) = xi_P^-1 gamma_P^-1(x)

where ``V`` is a finite window of global functions with poles on a point set
``S'``.  ``H^0 = ker Phi`` and ``H^1`` is the low-order principal parts
modulo the image of the functions whose high-order parts vanish.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .berezin import LocalAutomorphism, super_jacobian
from .rational import P_ONE, RationalFunction
from .scalars import ONE, ZERO, GaussianRational, gr
from .superalgebra import BaseAlgebra, LambdaAlgebra, SuperElement
from .superfunction import (
    INF, Laurent, PointP1, SuperRationalFunction, laurent_expand, order_at,
    rational_laurent, residue_coefficient,
)
from .superlinalg import (
    BModuleRep, LinearSolver, Subspace, hom_dimension, nullspace, quotient,
    rank, submodule, berezinian,
)

__all__ = [
    "SuperCurve",
    "LineBundle",
    "TruncationBounds",
    "TruncationInstabilityError",
    "Repartition",
    "PairingMatrix",
    "DualityReport",
    "stalk_member",
    "h0",
    "h1",
    "h0_ber",
    "ber_twist",
    "serre_pairing",
    "pairing_value",
    "verify_duality",
    "principal_part_solvable",
]

SRF = SuperRationalFunction


class TruncationInstabilityError(RuntimeError):
    """Cohomology changed when the truncation bounds were enlarged."""


# Curves and bundles -------------------------------------------------------------

class SuperCurve:
    """A genus-zero supercurve of dimension ``1|q`` over ``base``."""

    def __init__(self, base: BaseAlgebra, q: int,
                 gluing: Mapping[PointP1, LocalAutomorphism] | None = None, name: str = ""):
        self.base = base
        self.q = q
        self.alg = LambdaAlgebra(base, q)
        self.name = name
        self.gluing: dict[PointP1, LocalAutomorphism] = {}
        for P, g in (gluing or {}).items():
            if P.is_infinite:
                raise ValueError("gluing data at infinity is not supported; move the point by a "
                                 "Mobius change of coordinates")
            if g.alg is not self.alg:
                g = LocalAutomorphism(self.alg, _rehome(g.image_z, self.alg),
                                      [_rehome(t, self.alg) for t in g.image_theta])
            if not g.is_identity():
                self.gluing[P] = g

    @classmethod
    def trivial(cls, base: BaseAlgebra, q: int, name: str = "") -> "SuperCurve":
        return cls(base, q, {}, name)

    def gluing_at(self, P: PointP1) -> LocalAutomorphism | None:
        return self.gluing.get(P)

    def trivial_bundle(self) -> "LineBundle":
        return LineBundle(self, {})

    def __repr__(self):
        pts = ", ".join(str(P) for P in sorted(self.gluing))
        return f"SuperCurve({self.name or 'X'}: {self.base.name}, q={self.q}, glued at [{pts}])"


def _rehome(F: SRF, alg: LambdaAlgebra) -> SRF:
    return SRF(alg, dict(F.num), F.den, reduced=True)


class LineBundle:
    """``O^gamma(xi)`` given by even units ``xi_P`` (trivial where absent)."""

    def __init__(self, curve: SuperCurve, multipliers: Mapping[PointP1, SRF] | None = None,
                 name: str = ""):
        self.curve = curve
        self.name = name
        self.multipliers: dict[PointP1, SRF] = {}
        for P, xi in (multipliers or {}).items():
            xi = SRF.coerce(curve.alg, xi)
            if xi.parity() != 0:
                raise ValueError(f"multiplier at {P} must be even")
            if not xi.is_unit():
                raise ValueError(f"multiplier at {P} must be a unit")
            if xi != 1:
                self.multipliers[P] = xi
        self._cache: dict = {}

    @property
    def alg(self):
        return self.curve.alg

    def xi(self, P: PointP1) -> SRF | None:
        return self.multipliers.get(P)

    def support(self) -> set[PointP1]:
        return set(self.multipliers) | set(self.curve.gluing)

    def tensor(self, other: "LineBundle") -> "LineBundle":
        pts = set(self.multipliers) | set(other.multipliers)
        one = SRF.constant(self.alg, 1)
        return LineBundle(self.curve, {P: self.multipliers.get(P, one) * other.multipliers.get(P, one)
                                       for P in pts})

    def dual(self) -> "LineBundle":
        return LineBundle(self.curve, {P: xi.inverse() for P, xi in self.multipliers.items()})

    def reduced_degree(self) -> int:
        """Degree of the underlying even line bundle on P^1."""
        return -sum(order_at(xi.reduce(), P) for P, xi in self.multipliers.items())

    def __repr__(self):
        m = ", ".join(f"{P}: {xi}" for P, xi in sorted(self.multipliers.items()))
        return f"LineBundle({self.name or 'L'}; {m})"


def ber_multiplier(curve: SuperCurve, P: PointP1) -> SRF | None:
    """Multiplier of the Berezinian sheaf at ``P``.

    In the local coordinates ``gamma_P(z), gamma_P(theta)`` the generator is
    ``Ber(J(gamma_P)) [dz d/dtheta]``, i.e. ``gamma_P(gamma_P^-1(Ber J))``.
    At infinity ``[dw d/dtheta] = -z**-2 [dz d/dtheta]``.
    """
    alg = curve.alg
    if P.is_infinite:
        return SRF.from_rational(alg, RationalFunction.z() ** -2)
    g = curve.gluing_at(P)
    if g is None:
        return None
    return g.inverse().apply(berezinian(super_jacobian(g)))


def ber_twist(L: LineBundle) -> LineBundle:
    """The bundle ``Ber (x) L^-1``."""
    curve = L.curve
    pts = set(L.multipliers) | set(curve.gluing) | {INF}
    out = {}
    one = SRF.constant(curve.alg, 1)
    for P in pts:
        b = ber_multiplier(curve, P) or one
        xi = L.multipliers.get(P)
        out[P] = b * xi.inverse() if xi is not None else b
    return LineBundle(curve, out, name=f"Ber(x){L.name or 'L'}^-1")


def stalk_member(f, P: PointP1, L: LineBundle) -> bool:
    """Whether ``f`` lies in the stalk ``gamma_P(xi_P O_P)``."""
    F = SRF.coerce(L.alg, f)
    if not F:
        return True
    g = L.curve.gluing_at(P)
    if g is not None:
        F = g.inverse().apply(F)
    xi = L.xi(P)
    if xi is not None:
        F = xi.inverse() * F
    o = order_at(F, P)
    return o is None or o >= 0


# Local models ---------------------------------------------------------------------

def _t_power(P: PointP1, k: int) -> RationalFunction:
    """``t**k`` for the local parameter at ``P``."""
    if P.is_infinite:
        return RationalFunction.z() ** (-k)
    return RationalFunction((-P.value, ONE), P_ONE, reduced=True) ** k


def _res_slot(P: PointP1) -> tuple[int, int]:
    """(exponent, sign) giving the dz-residue from a Laurent coefficient."""
    return (1, -1) if P.is_infinite else (-1, 1)


class _Local:
    """The maps ``psi_P`` and ``phi_P = psi_P^-1`` as operators on Laurent series."""

    def __init__(self, L: LineBundle, P: PointP1):
        self.alg = L.alg
        self.P = P
        self.gamma = L.curve.gluing_at(P)
        self.xi = L.xi(P)
        self.trivial = self.gamma is None and self.xi is None
        self._srf = {}
        self._series = {}

    def weights(self, kind: str) -> list[list[SRF]]:
        """``W[j][a]`` with ``map(c e_a) = sum_j c^(j) W[j][a]``."""
        if kind in self._srf:
            return self._srf[kind]
        alg = self.alg
        one = SRF.constant(alg, 1)
        if self.gamma is None:
            mult = one
            if self.xi is not None:
                mult = self.xi.inverse() if kind == "psi" else self.xi
            W = [[mult * SRF.basis(alg, a) for a in range(alg.dim)]]
        else:
            auto = self.gamma.inverse() if kind == "psi" else self.gamma
            if self.xi is None:
                mult = one
            elif kind == "psi":
                mult = self.xi.inverse()
            else:
                mult = auto.apply(self.xi)
            powers, images = auto._prepare()
            W = [[mult * pw * images[a] for a in range(alg.dim)] for pw in powers]
        self._srf[kind] = W
        return W

    def shift(self, kind: str) -> int:
        """Largest pole increase ``max_{j,a} (j - ord W[j][a])``."""
        key = ("shift", kind)
        if key not in self._series:
            best = None
            for j, row in enumerate(self.weights(kind)):
                for w in row:
                    o = order_at(w, self.P)
                    if o is None:
                        continue
                    val = j - o
                    best = val if best is None else max(best, val)
            self._series[key] = best if best is not None else 0
        return self._series[key]

    def weight_series(self, kind: str, prec: int) -> list[list[Laurent]]:
        key = (kind,)
        have = self._series.get(key)
        if have is None or have[0] < prec:
            W = self.weights(kind)
            ser = [[laurent_expand(w, self.P, prec) for w in row] for row in W]
            self._series[key] = (prec, ser)
            return ser
        return have[1]

    def apply_series(self, kind: str, c: RationalFunction, prec: int) -> list[Laurent]:
        """Expansions at ``P`` of ``map(c e_a)`` for every ``a``, exact below ``t**prec``."""
        W_rows = self.weights(kind)
        nj = len(W_rows)
        derivs = [c]
        for _ in range(1, nj):
            derivs.append(derivs[-1].derivative())
        # the weights' valuations bound how far the scalar series must go
        wmin = -self.shift(kind) - nj
        sers = [rational_laurent(d, self.P, prec - wmin) for d in derivs]
        smin = min((s.val for s in sers if s.coeffs), default=prec)
        W = self.weight_series(kind, prec - smin)
        out = []
        for a in range(self.alg.dim):
            acc = None
            for j in range(nj):
                s = sers[j]
                if not s.coeffs:
                    continue
                term = s * W[j][a]
                acc = term if acc is None else acc + term
            if acc is None:
                acc = Laurent({}, prec, SuperElement(self.alg))
            if acc.prec < prec:
                raise ArithmeticError("internal precision shortfall in local expansion")
            out.append(acc.truncate(prec))
        return out


def _local(L: LineBundle, P: PointP1) -> _Local:
    key = ("local", P)
    if key not in L._cache:
        L._cache[key] = _Local(L, P)
    return L._cache[key]


# Truncation bounds -----------------------------------------------------------------

_FRESH = [7, -7, 11, -11, 13, -13, 17, -17, 19, -19]


@dataclass(frozen=True)
class TruncationBounds:
    """Point set ``S`` (infinity always added) and pole-order cap ``N``."""

    points: tuple
    N: int

    def __post_init__(self):
        pts = tuple(sorted(set(self.points) | {INF}))
        object.__setattr__(self, "points", pts)
        if self.N < 1:
            raise ValueError("pole-order cap must be positive")

    @classmethod
    def for_bundle(cls, L: LineBundle, scale: int = 1, extra: Iterable[PointP1] = ()) -> "TruncationBounds":
        pts = set(L.support()) | {INF} | set(extra)
        need = 1
        for B in (L, ber_twist(L)):
            for P in pts | set(B.support()):
                loc = _local(B, P)
                need = max(need, max(loc.shift("psi"), 0) + max(loc.shift("phi"), 0) + 1)
        return cls(tuple(pts), max(2, need) * max(1, scale))

    def doubled(self) -> "TruncationBounds":
        return TruncationBounds(self.points, 2 * self.N)

    def enlarged(self, count: int = 2) -> "TruncationBounds":
        used = set(self.points)
        new = []
        for c in _FRESH:
            P = PointP1.finite(c)
            if P not in used:
                new.append(P)
            if len(new) == count:
                break
        return TruncationBounds(self.points + tuple(new), self.N)

    def key(self):
        return (self.points, self.N)


# The complex Phi ------------------------------------------------------------------

def _zfunc_key_sort(key):
    kind = key[0]
    if kind == "const":
        return (0,)
    if kind == "pole":
        return (1, key[1].sort_key(), key[2])
    return (2, key[1])


def _zfunc(key) -> RationalFunction:
    if key[0] == "const":
        return RationalFunction.const(1)
    if key[0] == "pole":
        return _t_power(key[1], -key[2])
    return RationalFunction.z() ** key[1]


def _zfunc_keys(points: Sequence[PointP1], caps: Mapping[PointP1, int]) -> list:
    keys = [("const",)]
    for P in points:
        cap = caps.get(P, 0)
        for k in range(1, cap + 1):
            keys.append(("pow", k) if P.is_infinite else ("pole", P, k))
    return sorted(keys, key=_zfunc_key_sort)


def _action_columns(alg: LambdaAlgebra, keys: Sequence[tuple], slot: int) -> dict[int, list]:
    """B-action on coordinates whose ``slot``-th entry is a Lambda-basis index."""
    index = {k: i for i, k in enumerate(keys)}
    nm = alg.nmask
    action = {}
    for b in range(alg.base.dim):
        cols = []
        for key in keys:
            a = key[slot]
            col = {}
            for k, c in alg.mul[b * nm][a]:
                nk = key[:slot] + (k,) + key[slot + 1:]
                col[index[nk]] = c
            cols.append(col)
        action[b] = cols
    return action


def _vector_to_srf(alg, vec: Mapping[int, GaussianRational], keys: Sequence[tuple]) -> SRF:
    comps: dict[int, RationalFunction] = {}
    for i, c in vec.items():
        zf, a = keys[i]
        term = _zfunc(zf) * c
        comps[a] = comps[a] + term if a in comps else term
    return SRF.from_components(alg, comps)


class _Complex:
    """``Phi`` for one bundle and one set of bounds, with H^0 and H^1."""

    def __init__(self, L: LineBundle, bounds: TruncationBounds):
        self.L = L
        self.bounds = bounds
        alg = self.alg = L.alg
        self.points = list(bounds.points)
        N = bounds.N
        self.caps = {P: max(N + _local(L, P).shift("phi"), 0) for P in self.points}
        zkeys = _zfunc_keys(self.points, self.caps)
        self.vkeys = [(zf, a) for zf in zkeys for a in range(alg.dim)]
        cols: list[dict] = []
        tkeys: set = set()
        for zf in zkeys:
            c = _zfunc(zf)
            per_a = [dict() for _ in range(alg.dim)]
            for P in self.points:
                loc = _local(L, P)
                if loc.trivial:
                    o = order_at(c, P)
                    if o is None or o >= 0:
                        continue
                sers = loc.apply_series("psi", c, 0)
                for a in range(alg.dim):
                    for e, coef in sers[a].coeffs.items():
                        for comp, v in coef.c.items():
                            key = (P, -e, comp)
                            per_a[a][key] = v
                            tkeys.add(key)
            cols.extend(per_a)
        for P in self.points:
            for k in range(1, N + 1):
                for a in range(alg.dim):
                    tkeys.add((P, k, a))
        high = sorted((k for k in tkeys if k[1] > N), key=lambda k: (-k[1], k[0].sort_key(), k[2]))
        low = sorted((k for k in tkeys if k[1] <= N), key=lambda k: (-k[1], k[0].sort_key(), k[2]))
        self.tkeys = high + low
        self.n_high = len(high)
        tindex = {k: i for i, k in enumerate(self.tkeys)}
        self.phi_cols = [{tindex[k]: v for k, v in col.items()} for col in cols]
        self._h0 = None
        self._h1 = None

    # H^0 -------------------------------------------------------------------
    def h0(self) -> BModuleRep:
        if self._h0 is not None:
            return self._h0
        alg = self.alg
        rows: dict[int, dict] = {}
        for j, col in enumerate(self.phi_cols):
            for i, v in col.items():
                rows.setdefault(i, {})[j] = v
        ker = nullspace(rows.values(), range(len(self.vkeys)))
        V = BModuleRep(alg.base, [alg.parity[a] for _zf, a in self.vkeys],
                       _action_columns(alg, self.vkeys, 1))
        M = submodule(V, ker)
        basis = Subspace(ker).basis()
        M.coordinates = basis
        M.keys = self.vkeys
        M.sections = [_vector_to_srf(alg, v, self.vkeys) for v in basis]
        self._h0 = M
        return M

    # H^1 -------------------------------------------------------------------
    def image(self) -> Subspace:
        if not hasattr(self, "_image"):
            self._image = Subspace(self.phi_cols)
        return self._image

    def h1(self) -> BModuleRep:
        if self._h1 is not None:
            return self._h1
        alg = self.alg
        img = self.image()
        nh = self.n_high
        low_keys = self.tkeys[nh:]
        W = [{i - nh: v for i, v in row.items()} for p, row in img.rows.items() if p >= nh]
        T = BModuleRep(alg.base, [alg.parity[k[2]] for k in low_keys],
                       _action_columns(alg, low_keys, 2))
        Q = quotient(T, W)
        Q.keys = [low_keys[j] for j in Q.representatives]
        Q.relations_low = W
        Q.low_keys = low_keys
        self._h1 = Q
        return Q

    def reduce_low(self, key_vec: Mapping[tuple, GaussianRational]) -> dict:
        """Coordinates in this H^1 basis of a principal-part vector keyed by T keys."""
        H = self.h1()
        index = {k: i for i, k in enumerate(H.low_keys)}
        v = {}
        for k, c in key_vec.items():
            if k not in index:
                raise KeyError(f"principal part {k} outside the low window")
            v[index[k]] = c
        r = H.relations.reduce(v)
        pos = {j: i for i, j in enumerate(H.representatives)}
        return {pos[j]: c for j, c in r.items()}


def _complex(L: LineBundle, bounds: TruncationBounds) -> _Complex:
    key = ("complex", bounds.key())
    if key not in L._cache:
        L._cache[key] = _Complex(L, bounds)
    return L._cache[key]


def _canonical_keyed(M: BModuleRep) -> list[dict]:
    return [{M.keys[i]: c for i, c in v.items()} for v in M.coordinates]


def _auto_bounds(L: LineBundle, bounds: TruncationBounds | None, scale: int = 1):
    if bounds is not None:
        return bounds, False
    return TruncationBounds.for_bundle(L, scale), True


def _stable(compute, compare, L, bounds, retry):
    tries = 3 if retry else 1
    for _ in range(tries):
        a = compute(L, bounds)
        b = compute(L, bounds.doubled())
        if compare(a, b):
            return a, bounds
        bounds = bounds.doubled()
    raise TruncationInstabilityError(
        f"cohomology of {L!r} changed between N={bounds.N // 2} and N={bounds.N}")


def h0(L: LineBundle, bounds: TruncationBounds | None = None, check: bool = True) -> BModuleRep:
    """Global sections of ``L`` as a B-module; ``.sections`` holds a basis."""
    bounds, retry = _auto_bounds(L, bounds)
    comp = lambda L_, b: _complex(L_, b).h0()
    if not check:
        return comp(L, bounds)
    same = lambda x, y: _canonical_keyed(x) == _canonical_keyed(y)
    return _stable(comp, same, L, bounds, retry)[0]


def _h1_compare(cx1: _Complex, cx2: _Complex) -> tuple[bool, list | None]:
    """Map H^1 for ``cx1`` into H^1 for ``cx2``; return (isomorphism?, matrix)."""
    H1, H2 = cx1.h1(), cx2.h1()
    if H1.dims() != H2.dims():
        return False, None
    cols = []
    for k in H1.keys:
        try:
            cols.append(cx2.reduce_low({k: ONE}))
        except KeyError:
            return False, None
    if rank(cols) != H2.dim:
        return False, None
    for b in range(cx1.alg.base.dim):
        for j in range(H1.dim):
            lhs: dict = {}
            for i, c in H1.action[b][j].items():
                for r, d in cols[i].items():
                    lhs[r] = lhs.get(r, ZERO) + c * d
            lhs = {k: v for k, v in lhs.items() if v}
            if lhs != H2.act(b, cols[j]):
                return False, None
    return True, cols


def _h1_stable(L: LineBundle, bounds: TruncationBounds, retry: bool):
    tries = 3 if retry else 1
    for _ in range(tries):
        base = _complex(L, bounds)
        ok1, _ = _h1_compare(base, _complex(L, bounds.doubled()))
        ok2, _ = _h1_compare(base, _complex(L, bounds.enlarged()))
        if ok1 and ok2:
            return base.h1(), bounds
        bounds = bounds.doubled()
    raise TruncationInstabilityError(f"H^1 of {L!r} is not stable up to N={bounds.N}")


def h1(L: LineBundle, bounds: TruncationBounds | None = None, check: bool = True) -> BModuleRep:
    """First cohomology of ``L`` as a B-module of principal-part classes.

    ``.keys`` lists the representative principal parts ``(P, k, a)``, meaning
    ``psi_P``-coordinates ``e_a t_P**-k``.
    """
    bounds, retry = _auto_bounds(L, bounds)
    if not check:
        return _complex(L, bounds).h1()
    return _h1_stable(L, bounds, retry)[0]


# H^0 of Ber (x) L^-1 by the annihilator route ---------------------------------------

class _Dual:
    """Sections ``f`` with ``res_P berezin_top(f u) = 0`` for all ``u`` in the stalks of ``L``."""

    def __init__(self, L: LineBundle, bounds: TruncationBounds):
        self.L = L
        self.bounds = bounds
        alg = self.alg = L.alg
        self.points = list(bounds.points)
        N = bounds.N
        twist = ber_twist(L)
        self.caps = {P: max(N + _local(twist, P).shift("phi"), 0) for P in self.points}
        zkeys = _zfunc_keys(self.points, self.caps)
        self.zkeys = zkeys
        self.fkeys = [(zf, a) for zf in zkeys for a in range(alg.dim)]
        findex = {k: i for i, k in enumerate(self.fkeys)}
        pair = alg.pair_table
        rows = []
        for P in self.points:
            loc = _local(L, P)
            e_res, sign = _res_slot(P)
            cap_here = self.caps[P]
            K = cap_here + max(loc.shift("phi"), 0) + 3
            zsers = {}
            for zf in zkeys:
                zsers[zf] = rational_laurent(_zfunc(zf), P, e_res + 1 + max(loc.shift("phi"), 0) + 1)
            for k in range(K):
                us = loc.apply_series("phi", _t_power(P, k), e_res + 1 + cap_here + 1)
                for a in range(alg.dim):
                    u = us[a]
                    if not u.coeffs:
                        continue
                    row_by_b: dict[int, dict] = {}
                    for zf in zkeys:
                        s = zsers[zf]
                        Y: dict[int, GaussianRational] = {}
                        for i, si in s.coeffs.items():
                            uc = u.coeffs.get(e_res - i)
                            if uc is None:
                                continue
                            if e_res - i >= u.prec:
                                raise ArithmeticError("internal precision shortfall")
                            for comp, v in uc.c.items():
                                Y[comp] = Y.get(comp, ZERO) + si * v
                        if not Y:
                            continue
                        for a2 in range(alg.dim):
                            col = findex[(zf, a2)]
                            prow = pair[a2]
                            for comp, v in Y.items():
                                for bidx, coef in prow[comp]:
                                    d = row_by_b.setdefault(bidx, {})
                                    d[col] = d.get(col, ZERO) + v * coef * sign
                    for d in row_by_b.values():
                        d = {c: v for c, v in d.items() if v}
                        if d:
                            rows.append(d)
        self.rows = rows
        ker = nullspace(rows, range(len(self.fkeys)))
        par = [(alg.parity[a] + alg.q) & 1 for _zf, a in self.fkeys]
        F = BModuleRep(alg.base, par, _action_columns(alg, self.fkeys, 1))
        M = submodule(F, ker)
        M.coordinates = Subspace(ker).basis()
        M.keys = self.fkeys
        M.sections = [_vector_to_srf(alg, v, self.fkeys) for v in M.coordinates]
        self.module = M


def _dual(L: LineBundle, bounds: TruncationBounds) -> _Dual:
    key = ("dual", bounds.key())
    if key not in L._cache:
        L._cache[key] = _Dual(L, bounds)
    return L._cache[key]


def h0_ber(L: LineBundle | SuperCurve, bounds: TruncationBounds | None = None,
           check: bool = True) -> BModuleRep:
    """``H^0(Ber (x) L^-1)``; with a curve, ``H^0(Ber)``.

    Module parities are those of the Ber sections: the parity of the
    coefficient ``f`` plus ``q``.
    """
    if isinstance(L, SuperCurve):
        L = L.trivial_bundle()
    bounds, retry = _auto_bounds(L, bounds)
    comp = lambda L_, b: _dual(L_, b).module
    if not check:
        return comp(L, bounds)
    same = lambda x, y: _canonical_keyed(x) == _canonical_keyed(y)
    return _stable(comp, same, L, bounds, retry)[0]


# Repartitions and the pairing --------------------------------------------------------

@dataclass
class Repartition:
    """Finitely many local terms ``r_P``; all other components are zero."""

    values: dict = field(default_factory=dict)

    def __add__(self, other):
        out = dict(self.values)
        for P, v in other.values.items():
            out[P] = out[P] + v if P in out else v
        return Repartition(out)


def pairing_value(f: SRF, r: Repartition) -> SuperElement:
    """``sum_P res_P berezin_top(f r_P) dz`` as a theta-free element."""
    total = SuperElement(f.alg)
    for P, rp in r.values.items():
        total = total + residue_coefficient((f * rp).berezin_top(), P)
    return total


def _pairing_table(L: LineBundle, bounds: TruncationBounds, sections: Sequence[SRF],
                   keys: Sequence[tuple]) -> list[list[SuperElement]]:
    """``<f_i, phi_P(e_a t**-k)>`` for every section and low key ``(P, k, a)``."""
    alg = L.alg
    by_point: dict[PointP1, list[int]] = {}
    for j, (P, _k, _a) in enumerate(keys):
        by_point.setdefault(P, []).append(j)
    table = [[None] * len(keys) for _ in sections]
    for P, idxs in by_point.items():
        loc = _local(L, P)
        e_res, sign = _res_slot(P)
        kmax = max(keys[j][1] for j in idxs)
        fvals = [order_at(f, P) for f in sections]
        fmin = min((v for v in fvals if v is not None), default=0)
        fsers = [laurent_expand(f, P, e_res + 1 + kmax + max(loc.shift("phi"), 0) + 1)
                 for f in sections]
        useries = {}
        for j in idxs:
            _P, k, a = keys[j]
            if k not in useries:
                useries[k] = loc.apply_series("phi", _t_power(P, -k), e_res + 1 - fmin + 1)
            u = useries[k][a]
            for i, fs in enumerate(fsers):
                acc = SuperElement(alg)
                for e, fc in fs.coeffs.items():
                    uc = u.coeffs.get(e_res - e)
                    if uc is not None:
                        acc = acc + fc * uc
                table[i][j] = acc.berezin_top() * sign
    return table


@dataclass
class PairingMatrix:
    """Entries ``<f_i, g_j>`` in B for ``f_i`` in H^0(Ber (x) L^-1) and ``g_j`` in H^1(L)."""

    rows: list
    h0_ber: BModuleRep
    h1: BModuleRep
    annihilates_relations: bool = True

    def scalar_matrix(self, transpose: bool = False) -> list[dict]:
        """Columns of the B-expanded scalar matrix (for rank tests)."""
        base_dim = self.h1.base.dim
        nm = self.h1_alg.nmask
        cols = []
        if not transpose:
            for j in range(self.h1.dim):
                col = {}
                for i, row in enumerate(self.rows):
                    for k, v in row[j].c.items():
                        col[i * base_dim + k // nm] = v
                cols.append(col)
        else:
            for i, row in enumerate(self.rows):
                col = {}
                for j in range(self.h1.dim):
                    for k, v in row[j].c.items():
                        col[j * base_dim + k // nm] = v
                cols.append(col)
        return cols

    def as_strings(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.rows]


def serre_pairing(L: LineBundle, bounds: TruncationBounds | None = None) -> PairingMatrix:
    bounds, _ = _auto_bounds(L, bounds)
    return _pairing(L, bounds)


def _pairing(L: LineBundle, bounds: TruncationBounds) -> PairingMatrix:
    key = ("pairing", bounds.key())
    if key in L._cache:
        return L._cache[key]
    cx = _complex(L, bounds)
    H1 = cx.h1()
    D = _dual(L, bounds).module
    low = H1.low_keys
    table = _pairing_table(L, bounds, D.sections, low)
    rows = [[table[i][j] for j in H1.representatives] for i in range(D.dim)]
    ok = True
    for w in H1.relations_low:
        for i in range(D.dim):
            acc = SuperElement(L.alg)
            for j, c in w.items():
                acc = acc + table[i][j] * c
            if acc:
                ok = False
    pm = PairingMatrix(rows, D, H1, ok)
    pm.h1_alg = L.alg
    L._cache[key] = pm
    return pm


@dataclass
class DualityReport:
    h1_dims: tuple
    h0_ber_dims: tuple
    h1_injective: bool
    h0_ber_injective: bool
    hom_h1_dims: tuple
    hom_h0_ber_dims: tuple
    well_defined: bool
    stable: bool
    base_is_grassmann: bool
    pairing: PairingMatrix | None = None

    @property
    def perfect(self) -> bool:
        return (self.h1_injective and self.h0_ber_injective and self.well_defined
                and self.hom_h1_dims == self.h0_ber_dims and self.hom_h0_ber_dims == self.h1_dims)

    @property
    def ok(self) -> bool:
        base = self.h1_injective and self.h0_ber_injective and self.well_defined and self.stable
        if self.base_is_grassmann:
            return base and self.perfect
        return base

    def as_dict(self) -> dict:
        return {
            "h1": list(self.h1_dims),
            "h0_ber": list(self.h0_ber_dims),
            "h1_to_dual_injective": self.h1_injective,
            "h0_ber_to_dual_injective": self.h0_ber_injective,
            "hom_h1_dims": list(self.hom_h1_dims),
            "hom_h0_ber_dims": list(self.hom_h0_ber_dims),
            "well_defined": self.well_defined,
            "stable": self.stable,
            "perfect": self.perfect,
            "ok": self.ok,
        }


def _is_grassmann(base: BaseAlgebra) -> bool:
    gens = base.generators
    return all(base.parity[i] for i in gens.values()) and base.dim == 2 ** len(gens)


def verify_duality(L: LineBundle, bounds: TruncationBounds | None = None) -> DualityReport:
    """Check injectivity both ways, well-definedness and stability of the pairing."""
    bounds, retry = _auto_bounds(L, bounds)
    # settle the bounds: both sides must be stable at the same window
    for _ in range(3 if retry else 1):
        _m, b1 = _h1_stable(L, bounds, retry)
        _m, b2 = _stable(lambda L_, b: _dual(L_, b).module,
                         lambda x, y: _canonical_keyed(x) == _canonical_keyed(y), L, b1, retry)
        if b2 == bounds:
            break
        bounds = b2
    pm = _pairing(L, bounds)
    H1, D = pm.h1, pm.h0_ber
    inj1 = rank(pm.scalar_matrix()) == H1.dim
    inj2 = rank(pm.scalar_matrix(transpose=True)) == D.dim
    stable = _pairing_stable(L, bounds, pm)
    return DualityReport(
        h1_dims=H1.dims(),
        h0_ber_dims=D.dims(),
        h1_injective=inj1,
        h0_ber_injective=inj2,
        hom_h1_dims=hom_dimension(H1),
        hom_h0_ber_dims=hom_dimension(D),
        well_defined=pm.annihilates_relations,
        stable=stable,
        base_is_grassmann=_is_grassmann(L.curve.base),
        pairing=pm,
    )


def _pairing_stable(L: LineBundle, bounds: TruncationBounds, pm: PairingMatrix) -> bool:
    """Pairing matrices agree after matching bases under doubling and enlargement."""
    for other in (bounds.doubled(), bounds.enlarged()):
        pm2 = _pairing(L, other)
        if _canonical_keyed(pm.h0_ber) != _canonical_keyed(pm2.h0_ber):
            return False
        ok, C = _h1_compare(_complex(L, bounds), _complex(L, other))
        if not ok:
            return False
        for i, row in enumerate(pm.rows):
            for j in range(pm.h1.dim):
                acc = SuperElement(L.alg)
                for l, c in C[j].items():
                    acc = acc + pm2.rows[i][l] * c
                if acc != row[j]:
                    return False
    return True


# The principal-part criterion -----------------------------------------------------

def principal_part_solvable(tails: Mapping[PointP1, SRF], curve: SuperCurve,
                            bounds: TruncationBounds | None = None):
    """Is there a global Ber section with the given principal parts?

    Returns ``(criterion, witness)``: the residue criterion against a basis of
    ``H^0(X, O)``, and an explicit section found by solving ``Phi`` for the
    Berezinian bundle (None if none exists).  The two must agree.
    """
    alg = curve.alg
    O = curve.trivial_bundle()
    g_basis = h0(O, bounds).sections
    tails = {P: SRF.coerce(alg, t) for P, t in tails.items()}
    crit = True
    for g in g_basis:
        total = SuperElement(alg)
        for P, t in tails.items():
            total = total + residue_coefficient((t * g).berezin_top(), P)
        if total:
            crit = False
            break
    witness = _ber_witness(curve, tails, bounds)
    return crit, witness


def _ber_bundle(curve: SuperCurve) -> LineBundle:
    return ber_twist(curve.trivial_bundle())


def _ber_witness(curve: SuperCurve, tails: Mapping[PointP1, SRF], bounds: TruncationBounds | None):
    alg = curve.alg
    Lb = _ber_bundle(curve)
    pts = set(Lb.support()) | set(tails) | {INF}
    if bounds is None:
        bounds = TruncationBounds.for_bundle(Lb, extra=tails)
    else:
        bounds = TruncationBounds(tuple(set(bounds.points) | pts), bounds.N)
    # enough room for the tails themselves
    need = 0
    for P, t in tails.items():
        loc = _local(Lb, P)
        o = order_at(t, P)
        if o is not None:
            need = max(need, -o + max(loc.shift("psi"), 0))
    if need > bounds.N:
        bounds = TruncationBounds(bounds.points, need)
    cx = _complex(Lb, bounds)
    tindex = {k: i for i, k in enumerate(cx.tkeys)}
    target: dict[int, GaussianRational] = {}
    for P, t in tails.items():
        loc = _local(Lb, P)
        comps = t.components()
        acc = None
        for a, r in comps.items():
            ser = loc.apply_series("psi", r, 0)[a]
            acc = ser if acc is None else acc + ser
        if acc is None:
            continue
        for e, coef in acc.coeffs.items():
            for comp, v in coef.c.items():
                key = (P, -e, comp)
                if key not in tindex:
                    return None
                target[tindex[key]] = target.get(tindex[key], ZERO) + v
    solver = LinearSolver()
    for j, col in enumerate(cx.phi_cols):
        solver.add(col, j)
    sol = solver.solve(target)
    if sol is None:
        return None
    return _vector_to_srf(alg, sol, cx.vkeys)
