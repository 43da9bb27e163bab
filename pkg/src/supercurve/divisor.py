"""Cartier divisors on genus-zero supercurves, the Abel map and effectivity."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .berezin import DifferentialOperator, apply_to_log, exterior_derivative, lift_to_Dsharp, one_form_residue
from .curve import (
    LineBundle, SuperCurve, TruncationBounds, _complex, _vector_to_srf, h0, h0_ber,
)
from .rational import RationalFunction
from .scalars import ONE, ZERO, GaussianRational
from .superalgebra import SuperElement
from .superfunction import (
    INF, LogSuperElement, PointP1, SuperRationalFunction, dlog, exp_nilpotent, laurent_expand,
    log_nilpotent, order_at, residue_coefficient,
)
from .superlinalg import LinearSolver

__all__ = [
    "CartierDivisor",
    "AbelImage",
    "AbelCheck",
    "degree",
    "line_bundle_of",
    "is_trivial",
    "abel",
    "abel_oracle",
    "abel_theorem_check",
    "has_effective_representative",
    "divisor_representative",
]

SRF = SuperRationalFunction


def _is_local_unit(F: SRF, P: PointP1) -> bool:
    red = F.reduce()
    if not red or order_at(red, P) != 0:
        return False
    o = order_at(F, P)
    return o is not None and o >= 0


def _glued_unit(curve: SuperCurve, F: SRF, P: PointP1) -> bool:
    """Whether ``F`` is a unit of the stalk ``O^gamma_P``."""
    g = curve.gluing_at(P)
    if g is not None:
        F = g.inverse().apply(F)
    return _is_local_unit(F, P)


class CartierDivisor:
    """Local equations ``f_P`` at finitely many points; trivial elsewhere."""

    def __init__(self, curve: SuperCurve, local_data: Mapping[PointP1, object], name: str = ""):
        self.curve = curve
        self.name = name
        self.local_data: dict[PointP1, SRF] = {}
        for P, f in local_data.items():
            F = SRF.coerce(curve.alg, f)
            if F.parity() != 0:
                raise ValueError(f"local equation at {P} must be even")
            if not F.reduce():
                raise ValueError(f"local equation at {P} has nilpotent reduction")
            self.local_data[P] = F

    @classmethod
    def principal(cls, curve: SuperCurve, f, name: str = "") -> "CartierDivisor":
        """The divisor of a global even meromorphic function."""
        F = SRF.coerce(curve.alg, f)
        pts = set(curve.gluing)
        red = F.reduce()
        for r in (red.num, red.den):
            pts |= _roots_as_points(r)
        pts.add(INF)
        for a, p in F.num.items():
            pts |= _roots_as_points(F.den)
        data = {P: F for P in pts if not _glued_unit(curve, F, P)}
        return cls(curve, data, name)

    def support(self) -> list[PointP1]:
        return sorted(P for P, f in self.local_data.items() if not _glued_unit(self.curve, f, P))

    def __add__(self, other: "CartierDivisor") -> "CartierDivisor":
        out = dict(self.local_data)
        for P, f in other.local_data.items():
            out[P] = out[P] * f if P in out else f
        return CartierDivisor(self.curve, out)

    def __neg__(self) -> "CartierDivisor":
        return CartierDivisor(self.curve, {P: f.inverse() for P, f in self.local_data.items()})

    def __sub__(self, other):
        return self + (-other)

    def perturbed(self, units: Mapping[PointP1, SRF]) -> "CartierDivisor":
        """Multiply ``f_P`` by ``gamma_P(u_P)`` for units ``u_P`` of ``O_P``."""
        out = dict(self.local_data)
        for P, u in units.items():
            u = SRF.coerce(self.curve.alg, u)
            if not _is_local_unit(u, P):
                raise ValueError(f"perturbation at {P} is not a local unit")
            g = self.curve.gluing_at(P)
            if g is not None:
                u = g.apply(u)
            out[P] = out[P] * u if P in out else u
        return CartierDivisor(self.curve, out)

    def __repr__(self):
        body = ", ".join(f"{P}: {f}" for P, f in sorted(self.local_data.items()))
        return f"CartierDivisor({self.name or 'D'}; {body})"


def _roots_as_points(poly) -> set[PointP1]:
    from .rational import gaussian_roots
    if len(poly) <= 1:
        return set()
    return {PointP1(r) for r, _m in gaussian_roots(poly)}


# Degree ----------------------------------------------------------------------------

def degree(D: CartierDivisor) -> int:
    """Total residue of ``df/f``; each local term must equal the reduced order."""
    total = 0
    for P, f in D.local_data.items():
        r = residue_coefficient(dlog(f), P)
        o = order_at(f.reduce(), P)
        expected = SuperElement.scalar(f.alg, GaussianRational(o))
        if r != expected:
            raise ArithmeticError(f"local degree at {P} is {r}, not the integer {o}")
        total += o
    return total


# Bundles ----------------------------------------------------------------------------

def line_bundle_of(D: CartierDivisor) -> LineBundle:
    """``O(D)``: sections ``g`` with ``g f_P`` in ``O^gamma_P``.

    In the ``gamma_P(xi_P O_P)`` normal form this is ``xi_P = gamma_P^-1(f_P^-1)``.
    """
    curve = D.curve
    mult = {}
    for P, f in D.local_data.items():
        inv = f.inverse()
        g = curve.gluing_at(P)
        mult[P] = g.inverse().apply(inv) if g is not None else inv
    return LineBundle(curve, mult, name=f"O({D.name or 'D'})")


def _generates(L: LineBundle, s: SRF, P: PointP1) -> bool:
    g = L.curve.gluing_at(P)
    F = g.inverse().apply(s) if g is not None else s
    xi = L.xi(P)
    if xi is not None:
        F = F * xi.inverse()
    return _is_local_unit(F, P)


def is_trivial(L: LineBundle, bounds: TruncationBounds | None = None):
    """``(True, F)`` with ``F`` a global function trivializing ``L``, else ``(False, None)``.

    Reduced Pic^0 of P^1 is trivial, so the reduced degree decides the
    reduced problem; the nilpotent corrections come from the exact ``H^0``
    computation, which solves them level by level.  An even section whose
    reduction is nonzero is then a generator everywhere, and its inverse
    has divisor ``D`` when ``L = O(D)``.
    """
    if L.reduced_degree() != 0:
        return False, None
    H = h0(L, bounds)
    for s in H.sections:
        if s.parity() != 0 or not s.reduce():
            continue
        pts = set(L.support()) | {INF}
        red = s.reduce()
        pts |= _roots_as_points(red.num) | _roots_as_points(red.den) | _roots_as_points(s.den)
        if all(_generates(L, s, P) for P in pts):
            return True, s.inverse()
        raise ArithmeticError("even section with nonzero reduction fails to generate")
    return False, None


def has_effective_representative(L: LineBundle, bounds: TruncationBounds | None = None) -> bool:
    """Whether ``L`` has a section whose reduced component is nonzero."""
    H = h0(L, bounds)
    return any(s.reduce() for s in H.sections)


# The Abel map --------------------------------------------------------------------------

@dataclass
class AbelImage:
    """Values of the Abel functional on a basis of ``H^0(Ber)``."""

    values: list
    basis: list
    points: list = field(default_factory=list)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def __add__(self, other: "AbelImage") -> "AbelImage":
        if [str(b) for b in self.basis] != [str(b) for b in other.basis]:
            raise ValueError("Abel images over different bases")
        return AbelImage([a + b for a, b in zip(self.values, other.values)], self.basis,
                         sorted(set(self.points) | set(other.points)))

    def __eq__(self, other):
        return isinstance(other, AbelImage) and self.values == other.values

    def as_strings(self) -> list[str]:
        return [str(v) for v in self.values]


def _normalized_log(curve: SuperCurve, g: SRF, P: PointP1) -> SRF:
    """``log`` of ``g / gamma_P(g_red)``: a nilpotent germ with the same class mod units."""
    red = g.reduce()
    alg = curve.alg
    red_srf = SRF.from_rational(alg, red)
    gam = curve.gluing_at(P)
    u = gam.apply(red_srf) if gam is not None else red_srf
    nu = g * u.inverse() - 1
    return log_nilpotent(nu)


def divisor_representative(D: CartierDivisor, max_doublings: int = 4):
    """A single function ``f`` on ``U = P^1 - {inf}`` representing ``D``.

    Returns ``(f, R, lam)`` with ``f = R exp(lam)``, ``R`` the scalar rational
    part and ``lam`` nilpotent, such that ``f / f_P`` is a unit of
    ``O^gamma_P`` at every support point and ``f`` is a unit at every other
    finite point.  ``lam`` solves a Mittag-Leffler problem in the glued charts.
    """
    curve = D.curve
    alg = curve.alg
    if INF in D.support():
        raise ValueError("support contains infinity; move the divisor by a Mobius map")
    if degree(D) != 0:
        raise ValueError("divisor must have degree zero")
    lin = lambda P: RationalFunction((-P.value, ONE), (ONE,), reduced=True)
    R = RationalFunction.const(1)
    for P, f in D.local_data.items():
        if P.is_infinite:
            continue
        n = order_at(f.reduce(), P)
        if n:
            R = R * lin(P) ** n
    R_srf = SRF.from_rational(alg, R)
    pts = sorted(set(P for P in D.local_data if not P.is_infinite) | set(curve.gluing))
    targets = {}
    for P in pts:
        g = D.local_data.get(P, SRF.constant(alg, 1)) * R_srf.inverse()
        targets[P] = _normalized_log(curve, g, P)
    O = curve.trivial_bundle()
    need = 1
    for P, lam in targets.items():
        gam = curve.gluing_at(P)
        psi = gam.inverse().apply(lam) if gam is not None else lam
        o = order_at(psi, P)
        if o is not None:
            need = max(need, -o)
    bounds = TruncationBounds(tuple(pts), need + 2)
    for _ in range(max_doublings):
        lam = _mittag_leffler(curve, O, bounds, targets)
        if lam is not None:
            break
        bounds = bounds.doubled()
    else:
        raise ArithmeticError("no representative found within the truncation bounds")
    for P, t in targets.items():
        gam = curve.gluing_at(P)
        diff = lam - t
        if gam is not None:
            diff = gam.inverse().apply(diff)
        o = order_at(diff, P)
        if o is not None and o < 0:
            raise ArithmeticError(f"representative misses the local class at {P}")
    f = R_srf * exp_nilpotent(lam)
    return f, R, lam


def _mittag_leffler(curve, O, bounds, targets):
    cx = _complex(O, bounds)
    alg = curve.alg
    tindex = {k: i for i, k in enumerate(cx.tkeys)}
    finite_rows = {i for k, i in tindex.items() if not k[0].is_infinite}
    target = {}
    for P, t in targets.items():
        gam = curve.gluing_at(P)
        psi = gam.inverse().apply(t) if gam is not None else t
        ser = laurent_expand(psi, P, 0)
        for e, coef in ser.coeffs.items():
            for comp, v in coef.c.items():
                key = (P, -e, comp)
                if key not in tindex:
                    return None
                target[tindex[key]] = target.get(tindex[key], ZERO) + v
    solver = LinearSolver()
    for j, col in enumerate(cx.phi_cols):
        _zf, a = cx.vkeys[j]
        if a == 0 or alg.parity[a]:
            continue
        solver.add({i: v for i, v in col.items() if i in finite_rows}, j)
    sol = solver.solve(target)
    if sol is None:
        return None
    return _vector_to_srf(alg, sol, cx.vkeys)


def _check_U(D: CartierDivisor, U: Iterable[PointP1] | None) -> list[PointP1]:
    supp = D.support()
    if U is None:
        return supp
    U = sorted(set(U))
    if INF in U:
        raise ValueError("the marked set must lie in the finite chart")
    missing = [P for P in supp if P not in U]
    if missing:
        raise ValueError(f"marked set misses support points {missing}")
    return U


def _sum_points(D: CartierDivisor, U: list[PointP1], f: SRF, h: SRF) -> list[PointP1]:
    pts = set(U) | set(D.curve.gluing) | {P for P in D.local_data if not P.is_infinite}
    pts |= _roots_as_points(f.den) | _roots_as_points(h.den)
    red = f.reduce()
    pts |= _roots_as_points(red.num)
    return sorted(pts)


def abel(D: CartierDivisor, U: Iterable[PointP1] | None = None,
         lift_perturbation: DifferentialOperator | None = None,
         representative: SRF | None = None) -> AbelImage:
    """``rho(omega) = sum_{P in U} res_P L(log f)`` on a basis of ``H^0(Ber)``.

    ``L`` lifts ``omega`` to a closed operator; ``f`` represents ``D`` on
    ``P^1 - {inf}``.  ``lift_perturbation`` ``M`` replaces ``L`` by
    ``L + d o M`` and ``representative`` overrides ``f`` (both used for the
    independence checks).
    """
    curve = D.curve
    alg = curve.alg
    U = _check_U(D, U)
    f = representative if representative is not None else divisor_representative(D)[0]
    basis = h0_ber(curve).sections
    values = []
    for h in basis:
        L = lift_to_Dsharp(h, [])
        if L.primitive.logs:
            raise ValueError("lift has a logarithmic branch point inside U")
        if lift_perturbation is not None:
            L = L + exterior_derivative(lift_perturbation)
        form = apply_to_log(L, f)
        total = LogSuperElement(alg)
        for P in _sum_points(D, U, f, h):
            r = one_form_residue(form, P)
            if r is not None:
                total = total + r
        if not total.theta_free():
            raise ArithmeticError("Abel value is not theta-free")
        values.append(total)
    return AbelImage(values, basis, U)


def abel_oracle(D: CartierDivisor) -> AbelImage:
    """Direct integration: ``sum_P res_P berezin_top(h lam) - res_P(H R'/R)``."""
    from .berezin import antiderivative
    curve = D.curve
    alg = curve.alg
    f, R, lam = divisor_representative(D)
    dl = SRF.from_rational(alg, R.derivative() * R.inverse())
    basis = h0_ber(curve).sections
    values = []
    for h in basis:
        H = antiderivative(h.berezin_top())
        if H.logs:
            raise ValueError("primitive has logarithmic terms")
        integrand = (h * lam).berezin_top() - H.rational * dl
        total = SuperElement(alg)
        for P in _sum_points(D, D.support(), f, h):
            total = total + residue_coefficient(integrand, P)
        values.append(LogSuperElement.of(total))
    return AbelImage(values, basis, D.support())


@dataclass
class AbelCheck:
    abel_zero: bool
    trivial: bool
    image: AbelImage
    witness: SRF | None

    @property
    def agree(self) -> bool:
        return self.abel_zero == self.trivial

    def as_dict(self) -> dict:
        return {
            "abel": self.image.as_strings(),
            "abel_zero": self.abel_zero,
            "trivial": self.trivial,
            "witness": str(self.witness) if self.witness is not None else None,
            "verdict": "CONFIRMED" if self.agree else "FALSIFIED",
        }


def abel_theorem_check(D: CartierDivisor) -> AbelCheck:
    """Abel value versus the H^0 triviality search, computed independently."""
    if degree(D) != 0:
        raise ValueError("divisor must have degree zero")
    image = abel(D)
    ok, witness = is_trivial(line_bundle_of(D))
    return AbelCheck(image.is_zero(), ok, image, witness)
