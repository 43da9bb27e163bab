"""Berezinian sections, residues, local automorphisms and differential operators.

A section of the Berezinian sheaf is written ``h * [dz d/dtheta]``.  Its
residue applies ``berezin_top`` to ``h`` and takes the ``dz``-residue of
what is left.  Local automorphisms act by substitution with the finite
Taylor formula in the nilpotent shift of ``z``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .rational import P_ONE, RationalFunction, gaussian_roots, p_pow
from .scalars import ONE, ZERO, GaussianRational, gr
from .superalgebra import LambdaAlgebra, SuperElement
from .superfunction import (
    INF, LogFunction, LogSuperElement, PointP1, SuperRationalFunction,
    laurent_expand, log_decompose, order_at, residue_coefficient,
)
from .superlinalg import SuperMatrix, berezinian

__all__ = [
    "LocalAutomorphism",
    "BerSection",
    "residue",
    "super_jacobian",
    "change_of_variables",
    "DifferentialOperator",
    "antiderivative",
    "lift_to_Dsharp",
    "apply_to_log",
    "exterior_derivative",
]

SRF = SuperRationalFunction


def _rf_det(M: list[list[RationalFunction]]) -> RationalFunction:
    n = len(M)
    A = [list(r) for r in M]
    det = RationalFunction.const(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return RationalFunction()
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c]
        inv = A[c][c].inverse()
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] * inv
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def _rf_inverse(M: list[list[RationalFunction]]) -> list[list[RationalFunction]]:
    n = len(M)
    one, zero = RationalFunction.const(1), RationalFunction()
    A = [list(M[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            raise ValueError("linear part is singular")
        A[c], A[piv] = A[piv], A[c]
        inv = A[c][c].inverse()
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


class LocalAutomorphism:
    """An even algebra automorphism of ``Lambda`` fixing ``B``.

    It is given by the images of ``z`` and of each ``theta_i``.  The image of
    ``z`` must reduce to ``z`` and the linear part of the theta images must be
    invertible over C(z).
    """

    def __init__(self, alg: LambdaAlgebra, image_z: SRF | None = None,
                 image_theta: Sequence[SRF] | None = None, *, check: bool = True):
        self.alg = alg
        self.image_z = image_z if image_z is not None else SRF.z(alg)
        if image_theta is None:
            image_theta = [SRF.theta(alg, i) for i in range(1, alg.q + 1)]
        self.image_theta = list(image_theta)
        if len(self.image_theta) != alg.q:
            raise ValueError(f"need {alg.q} theta images, got {len(self.image_theta)}")
        self._inv: LocalAutomorphism | None = None
        self._prep = None
        if check:
            self.validate()

    @classmethod
    def identity(cls, alg) -> "LocalAutomorphism":
        return cls(alg)

    def validate(self) -> None:
        if self.image_z.parity() != 0:
            raise ValueError("image of z must be even")
        if self.image_z.reduce() != RationalFunction.z():
            raise ValueError("image of z must reduce to z modulo nilpotents")
        for i, t in enumerate(self.image_theta, 1):
            if t.parity() != 1:
                raise ValueError(f"image of theta{i} must be odd")
        if self.alg.q and not _rf_det(self.linear_part()):
            raise ValueError("linear part of the theta images is not invertible")

    def linear_part(self) -> list[list[RationalFunction]]:
        """Reduced coefficient of ``theta_j`` in the image of ``theta_i``."""
        return [[t.component(self.alg.index(0, 1 << j)) for j in range(self.alg.q)]
                for t in self.image_theta]

    def is_identity(self) -> bool:
        return (self.image_z == SRF.z(self.alg)
                and all(t == SRF.theta(self.alg, i) for i, t in enumerate(self.image_theta, 1)))

    def _prepare(self):
        if self._prep is not None:
            return self._prep
        alg = self.alg
        shift = self.image_z - SRF.z(alg)
        powers = [SRF.constant(alg, 1)]
        k = 1
        while True:
            nxt = (powers[-1] * shift).scale(GaussianRational(Fraction(1, k)))
            if not nxt:
                break
            powers.append(nxt)
            k += 1
        theta_s = [SRF.constant(alg, 1)]
        for m in range(1, alg.nmask):
            low = m & -m
            i = low.bit_length()
            theta_s.append(self.image_theta[i - 1] * theta_s[m ^ low])
        images = []
        for a in range(alg.dim):
            b, m = alg.split(a)
            if b == 0:
                images.append(theta_s[m])
            else:
                images.append(SRF.basis(alg, alg.index(b, 0)) * theta_s[m])
        self._prep = (powers, images)
        return self._prep

    def apply(self, F) -> SRF:
        """Substitute: ``sum_a sum_j c_a^(j)(z) n**j / j! * sigma(e_a)``."""
        if isinstance(F, SuperElement):
            F = SRF.constant(self.alg, F)
        if not isinstance(F, SRF):
            F = SRF.coerce(self.alg, F)
        powers, images = self._prepare()
        out = SRF.zero(self.alg)
        comps = F.components()
        for j, pw in enumerate(powers):
            G = SRF.zero(self.alg)
            for a, c in list(comps.items()):
                if c:
                    G = G + images[a] * c
                comps[a] = c.derivative()
            if G:
                out = out + (G if j == 0 else G * pw)
        return out

    __call__ = apply

    def compose(self, other: "LocalAutomorphism") -> "LocalAutomorphism":
        """``self o other``: first ``other``'s images, then substitute ``self``."""
        return LocalAutomorphism(self.alg, self.apply(other.image_z),
                                 [self.apply(t) for t in other.image_theta])

    def inverse(self) -> "LocalAutomorphism":
        """Solve ``sigma(Y) = x`` for each generator by nilpotent iteration."""
        if self._inv is not None:
            return self._inv
        alg = self.alg
        if alg.q:
            Ainv = _rf_inverse(self.linear_part())
            red_inv = LocalAutomorphism(alg, SRF.z(alg), [
                sum((SRF.from_rational(alg, Ainv[i][j], alg.index(0, 1 << j)) for j in range(alg.q)),
                    SRF.zero(alg))
                for i in range(alg.q)], check=False)
        else:
            red_inv = LocalAutomorphism(alg, check=False)
        limit = 4 * (alg.base.dim + alg.q + 4)
        sols = []
        for x in [SRF.z(alg)] + [SRF.theta(alg, i) for i in range(1, alg.q + 1)]:
            Y = red_inv.apply(x)
            for _ in range(limit):
                r = x - self.apply(Y)
                if not r:
                    break
                Y = Y + red_inv.apply(r)
            else:
                raise ArithmeticError("inverse iteration did not terminate")
            sols.append(Y)
        inv = LocalAutomorphism(alg, sols[0], sols[1:], check=False)
        inv._inv = self
        self._inv = inv
        return inv

    def __eq__(self, other):
        return (isinstance(other, LocalAutomorphism) and self.image_z == other.image_z
                and self.image_theta == other.image_theta)

    def __repr__(self):
        th = ", ".join(f"theta{i} -> {t}" for i, t in enumerate(self.image_theta, 1))
        return f"LocalAutomorphism(z -> {self.image_z}{', ' if th else ''}{th})"


class BerSection:
    """``coefficient * [dz d/dtheta]``, optionally tagged with a chart point."""

    __slots__ = ("coefficient", "chart")

    def __init__(self, coefficient: SRF, chart: PointP1 | None = None):
        self.coefficient = coefficient
        self.chart = chart

    @property
    def alg(self):
        return self.coefficient.alg

    def __add__(self, other):
        return BerSection(self.coefficient + other.coefficient, self.chart)

    def __mul__(self, f):
        return BerSection(self.coefficient * f, self.chart)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, BerSection) and self.coefficient == other.coefficient

    def __repr__(self):
        return f"BerSection(({self.coefficient}) [dz d/dtheta])"


def residue(omega, P: PointP1) -> SuperElement:
    """Residue of a Ber section (or its coefficient) at ``P``; a theta-free element."""
    h = omega.coefficient if isinstance(omega, BerSection) else omega
    return residue_coefficient(h.berezin_top(), P)


def right_theta_derivative(f: SRF, j: int) -> SRF:
    """Right derivative: ``(-1)**(|f|+1)`` times the left one on homogeneous ``f``."""
    d = f.theta_derivative(j)
    return -d if f.parity() == 0 else d


def super_jacobian(sigma: LocalAutomorphism) -> SuperMatrix:
    """Rows ``(w, eta_i)``, columns ``(z, theta_j)``, theta-derivatives from the right.

    With right derivatives the residue of ``sigma(h) * Ber(J)`` agrees with
    the residue of ``h`` at every point where ``sigma`` is regular.
    """
    q = sigma.alg.q
    images = [sigma.image_z] + sigma.image_theta
    rows = []
    for f in images:
        rows.append([f.derivative()] + [right_theta_derivative(f, j) for j in range(1, q + 1)])
    return SuperMatrix(rows, (1, q))


def change_of_variables(omega: BerSection, sigma: LocalAutomorphism) -> BerSection:
    """Pull back ``h(w, eta)[dw d/deta]`` along ``w = sigma(z)``, ``eta = sigma(theta)``."""
    return BerSection(sigma.apply(omega.coefficient) * berezinian(super_jacobian(sigma)),
                      omega.chart)


# Differential operators -----------------------------------------------------

def _theta_sort_sign(T: int, i: int) -> int:
    return -1 if bin(T & ((1 << (i - 1)) - 1)).count("1") & 1 else 1


def _apply_dT(F, T: int, q: int):
    for i in range(q, 0, -1):
        if T >> (i - 1) & 1:
            F = F.theta_derivative(i)
    return F


def _dz_power(F, k: int):
    for _ in range(k):
        F = F.derivative()
    return F


class DifferentialOperator:
    """``sum coeff * d_z**k * d_T`` placed in output components.

    A term key is ``(target, k, T)`` with ``target`` one of ``"1"``,
    ``"dz"`` or ``"dtheta<j>"`` and ``T`` a bitmask of theta derivatives;
    ``d_T`` for ``T = {t1 < ... < tm}`` is ``d_t1 o ... o d_tm``.
    Coefficients are :class:`LogFunction` and multiply from the left.
    """

    def __init__(self, alg: LambdaAlgebra, terms: Mapping[tuple, object] | None = None):
        self.alg = alg
        self.terms: dict[tuple, LogFunction] = {}
        for key, c in (terms or {}).items():
            c = LogFunction.of(alg, c)
            if c:
                self.terms[key] = c

    @classmethod
    def multiplication(cls, alg, c, target: str = "1") -> "DifferentialOperator":
        return cls(alg, {(target, 0, 0): c})

    @classmethod
    def d_z(cls, alg, target: str = "1") -> "DifferentialOperator":
        return cls(alg, {(target, 1, 0): SRF.constant(alg, 1)})

    @classmethod
    def d_theta(cls, alg, i: int, target: str = "1") -> "DifferentialOperator":
        return cls(alg, {(target, 0, 1 << (i - 1)): SRF.constant(alg, 1)})

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return DifferentialOperator(self.alg, terms)

    def __neg__(self):
        return DifferentialOperator(self.alg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def retarget(self, target: str) -> "DifferentialOperator":
        return DifferentialOperator(self.alg, {(target, k, T): c for (_t, k, T), c in self.terms.items()})

    def component(self, target: str) -> "DifferentialOperator":
        return DifferentialOperator(self.alg, {("1", k, T): c for (t, k, T), c in self.terms.items()
                                               if t == target})

    def left_multiply(self, f) -> "DifferentialOperator":
        f = LogFunction.of(self.alg, f)
        return DifferentialOperator(self.alg, {k: f * c for k, c in self.terms.items()})

    def left_theta(self, i: int) -> "DifferentialOperator":
        """``d/dtheta_i o self`` in normal order."""
        out = DifferentialOperator(self.alg)
        bit = 1 << (i - 1)
        for (t, k, T), c in self.terms.items():
            ev, od = c.parity_parts()
            dc = c.theta_derivative(i)
            add = {}
            if dc:
                add[(t, k, T)] = dc
            if not T & bit:
                s = _theta_sort_sign(T, i)
                coef = ev - od
                if coef:
                    add[(t, k, T | bit)] = coef if s == 1 else -coef
            out = out + DifferentialOperator(self.alg, add)
        return out

    def left_z(self) -> "DifferentialOperator":
        """``d/dz o self`` in normal order."""
        out = DifferentialOperator(self.alg)
        for (t, k, T), c in self.terms.items():
            out = out + DifferentialOperator(self.alg, {(t, k, T): c.derivative(), (t, k + 1, T): c})
        return out

    def apply(self, F) -> dict[str, LogFunction]:
        """Apply to a function; returns ``target -> LogFunction``."""
        out: dict[str, LogFunction] = {}
        q = self.alg.q
        cache = {}
        for (t, k, T), c in self.terms.items():
            key = (k, T)
            if key not in cache:
                cache[key] = _dz_power(_apply_dT(F, T, q), k)
            g = cache[key]
            if isinstance(g, LogFunction):
                val = c * g
            else:
                val = c * SRF.coerce(self.alg, g)
            out[t] = out[t] + val if t in out else val
        return out

    def kills_constants(self) -> bool:
        return not any(k == 0 and T == 0 for (_t, k, T) in self.terms)

    def is_closed(self) -> bool:
        """``d o self = 0`` as an operator identity for one-form valued ``self``."""
        q = self.alg.q
        a = self.component("dz")
        b = [self.component(f"dtheta{j}") for j in range(1, q + 1)]
        for j in range(1, q + 1):
            if not (a.left_theta(j) - b[j - 1].left_z()).is_zero():
                return False
        for i in range(1, q + 1):
            for j in range(i, q + 1):
                if not (b[j - 1].left_theta(i) + b[i - 1].left_theta(j)).is_zero():
                    return False
        return True

    def __repr__(self):
        parts = []
        for (t, k, T), c in sorted(self.terms.items(), key=lambda kv: kv[0]):
            ds = "".join(f"d_theta{i}" for i in range(1, self.alg.q + 1) if T >> (i - 1) & 1)
            parts.append(f"[{t}] ({c}) d_z^{k} {ds}")
        return "DifferentialOperator(" + " + ".join(parts) + ")"


def exterior_derivative(M: DifferentialOperator) -> DifferentialOperator:
    """``d o M`` for a function-valued operator ``M``."""
    out = M.left_z().retarget("dz")
    for j in range(1, M.alg.q + 1):
        out = out + M.left_theta(j).retarget(f"dtheta{j}")
    return out


def antiderivative(F: SRF) -> LogFunction:
    """A primitive of ``F`` in z by partial fractions over Q(i).

    Simple poles give ``log(z - P)`` terms; a pole at a non-Gaussian-rational
    point raises ``ValueError``.
    """
    alg = F.alg
    if not F:
        return LogFunction(alg)
    roots = gaussian_roots(F.den) if len(F.den) > 1 else []
    if sum(m for _r, m in roots) != len(F.den) - 1:
        raise ValueError("denominator does not split over Q(i)")
    rest = F
    rational = SRF.zero(alg)
    logs = {}
    for r, _m in roots:
        P = PointP1(r)
        pp = laurent_expand(F, P, 0).principal_part()
        lin = RationalFunction((-r, ONE), P_ONE, reduced=True)
        for e, c in pp.items():
            term = SRF.constant(alg, c) * SRF.from_rational(alg, lin ** e)
            rest = rest - term
            if e == -1:
                logs[P] = SRF.constant(alg, c)
            else:
                rational = rational + term * SRF.from_rational(alg, lin).scale(GaussianRational(Fraction(1, e + 1)))
    if len(rest.den) != 1:
        raise ArithmeticError("partial fraction remainder is not polynomial")
    for a, p in rest.num.items():
        integ = (ZERO,) + tuple(c * GaussianRational(Fraction(1, k + 1)) for k, c in enumerate(p))
        rational = rational + SRF(alg, {a: integ}, P_ONE)
    return LogFunction(alg, rational, logs)


def lift_to_Dsharp(omega, U: Iterable[PointP1]) -> DifferentialOperator:
    """The operator ``[dz d/dtheta] o h - d o H`` with ``H' = berezin_top(h)``.

    It kills constants and is closed, and its ``dz``-residues on ``U``
    compute the Abel pairing.  ``h`` must be regular at every point of
    ``U``.
    """
    h = omega.coefficient if isinstance(omega, BerSection) else omega
    alg = h.alg
    for P in U:
        o = order_at(h, P)
        if o is not None and o < 0:
            raise ValueError(f"Ber section has a pole at {P} in U")
    op = DifferentialOperator.multiplication(alg, h, "dz")
    for i in range(1, alg.q + 1):
        op = op.left_theta(i)
    H = antiderivative(h.berezin_top())
    op = op - DifferentialOperator.multiplication(alg, H).left_z().retarget("dz")
    for j in range(1, alg.q + 1):
        op = op - DifferentialOperator.multiplication(alg, H).left_theta(j).retarget(f"dtheta{j}")
    op.primitive = H
    return op


def apply_to_log(L: DifferentialOperator, f: SRF) -> dict[str, LogFunction]:
    """``L(log f)`` for an operator killing constants and an even unit ``f``.

    With ``f = f_red * exp(lam)`` only the pure ``d_z**k`` terms see
    ``log f_red``, through ``d_z**(k-1)(f_red'/f_red)``.
    """
    if not L.kills_constants():
        raise ValueError("operator does not kill constants")
    alg = L.alg
    red, lam = log_decompose(f)
    out = L.apply(lam)
    dl = SRF.from_rational(alg, red.derivative() * red.inverse())
    for (t, k, T), c in L.terms.items():
        if T or k == 0:
            continue
        val = c * _dz_power(dl, k - 1)
        out[t] = out[t] + val if t in out else val
    return out


def one_form_residue(form: Mapping[str, LogFunction], P: PointP1) -> LogSuperElement:
    """Residue of a closed one-form: the residue of its ``dz`` component."""
    a = form.get("dz")
    if a is None:
        return LogSuperElement(next(iter(form.values())).alg) if form else None
    return a.residue(P)
