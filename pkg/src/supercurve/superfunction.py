"""Super rational functions on P^1 and their Laurent expansions.

An element of ``Lambda = C(z) (x) B[theta]`` is stored with one common monic
denominator and a polynomial numerator per basis element ``b * theta_S``.
Laurent expansions are taken in ``t = z - P`` at finite points and in
``w = 1/z`` at infinity.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping

from .rational import (
    P_ONE, P_Z, Poly, RationalFunction, p_add, p_deriv, p_divmod, p_exact_div,
    p_gcd, p_mul, p_neg, p_scale, p_shift, p_str, p_sub, p_trim, p_valuation,
    series_div,
)
from .scalars import ONE, ZERO, GaussianRational, LogScalar, formal_log, gr
from .superalgebra import LambdaAlgebra, SuperElement

__all__ = [
    "PointP1",
    "INF",
    "SuperRationalFunction",
    "Laurent",
    "laurent_expand",
    "rational_laurent",
    "order_at",
    "dlog",
    "log_decompose",
    "residue_coefficient",
    "LogSuperElement",
    "LogFunction",
]


@dataclass(frozen=True)
class PointP1:
    """A point of P^1 over Q(i); ``value is None`` means infinity."""

    value: GaussianRational | None = None

    @classmethod
    def finite(cls, x) -> "PointP1":
        return cls(gr(x))

    @classmethod
    def parse(cls, text: str) -> "PointP1":
        t = text.strip().lower()
        if t in ("inf", "infinity", "oo"):
            return INF
        return cls(gr(text.strip().replace("I", "i")))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def sort_key(self):
        if self.value is None:
            return (1, 0, 0)
        return (0, self.value.re, self.value.im)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "inf" if self.value is None else str(self.value)

    def __repr__(self):
        return f"PointP1({self})"


INF = PointP1(None)


def _normalize_parts(num: dict[int, Poly], den: Poly) -> tuple[dict[int, Poly], Poly]:
    num = {k: v for k, v in num.items() if v}
    if not num:
        return {}, P_ONE
    if len(den) > 1:
        g = den
        for v in num.values():
            g = p_gcd(g, v)
            if len(g) == 1:
                break
        if len(g) > 1:
            den = p_exact_div(den, g)
            num = {k: p_exact_div(v, g) for k, v in num.items()}
    lead = den[-1]
    if lead != ONE:
        inv = lead.inverse()
        den = p_scale(den, inv)
        num = {k: p_scale(v, inv) for k, v in num.items()}
    return num, den


class SuperRationalFunction:
    """``sum_a (num_a / den) * e_a`` over the basis ``e_a = b * theta_S``."""

    __slots__ = ("alg", "num", "den")

    def __init__(self, alg: LambdaAlgebra, num: Mapping[int, Poly] | None = None,
                 den: Poly = P_ONE, *, reduced: bool = False):
        self.alg = alg
        num = dict(num or {})
        if reduced:
            self.num, self.den = num, den
        else:
            self.num, self.den = _normalize_parts(num, p_trim(den))

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, alg) -> "SuperRationalFunction":
        return cls(alg, {}, P_ONE, reduced=True)

    @classmethod
    def from_rational(cls, alg, r, a: int = 0) -> "SuperRationalFunction":
        r = RationalFunction.coerce(r)
        if not r:
            return cls.zero(alg)
        return cls(alg, {a: r.num}, r.den, reduced=True)

    @classmethod
    def constant(cls, alg, x=1) -> "SuperRationalFunction":
        if isinstance(x, SuperElement):
            return cls(alg, {k: (v,) for k, v in x.c.items()}, P_ONE, reduced=True)
        return cls.from_rational(alg, RationalFunction.const(x))

    @classmethod
    def z(cls, alg) -> "SuperRationalFunction":
        return cls(alg, {0: P_Z}, P_ONE, reduced=True)

    @classmethod
    def basis(cls, alg, a: int) -> "SuperRationalFunction":
        return cls(alg, {a: P_ONE}, P_ONE, reduced=True)

    @classmethod
    def theta(cls, alg, i: int) -> "SuperRationalFunction":
        return cls.basis(alg, alg.index(0, 1 << (i - 1)))

    @classmethod
    def generator(cls, alg, name: str) -> "SuperRationalFunction":
        a = alg.generator_index(name)
        if a is None:
            raise KeyError(name)
        return cls.basis(alg, a)

    @classmethod
    def from_components(cls, alg, comps: Mapping[int, RationalFunction]) -> "SuperRationalFunction":
        out = cls.zero(alg)
        for a, r in comps.items():
            out = out + cls.from_rational(alg, r, a)
        return out

    @classmethod
    def coerce(cls, alg, x) -> "SuperRationalFunction":
        if isinstance(x, SuperRationalFunction):
            return x
        if isinstance(x, SuperElement):
            return cls.constant(alg, x)
        return cls.from_rational(alg, x)

    # arithmetic -------------------------------------------------------
    def _co(self, other):
        if isinstance(other, SuperRationalFunction):
            return other
        if isinstance(other, (int, GaussianRational, RationalFunction, SuperElement)):
            return SuperRationalFunction.coerce(self.alg, other)
        return None

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            num = dict(self.num)
            for k, v in o.num.items():
                num[k] = p_add(num[k], v) if k in num else v
            return SuperRationalFunction(self.alg, num, self.den)
        g = p_gcd(self.den, o.den)
        f1 = p_exact_div(o.den, g)
        f2 = p_exact_div(self.den, g)
        num = {k: p_mul(v, f1) for k, v in self.num.items()}
        for k, v in o.num.items():
            w = p_mul(v, f2)
            num[k] = p_add(num[k], w) if k in num else w
        return SuperRationalFunction(self.alg, num, p_mul(self.den, f1))

    __radd__ = __add__

    def __neg__(self):
        return SuperRationalFunction(self.alg, {k: p_neg(v) for k, v in self.num.items()},
                                     self.den, reduced=True)

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SuperRationalFunction":
        c = gr(c)
        if not c:
            return SuperRationalFunction.zero(self.alg)
        return SuperRationalFunction(self.alg, {k: p_scale(v, c) for k, v in self.num.items()},
                                     self.den, reduced=True)

    def __mul__(self, other):
        if isinstance(other, (int, GaussianRational)):
            return self.scale(other)
        o = self._co(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return SuperRationalFunction.zero(self.alg)
        mul = self.alg.mul
        out: dict[int, Poly] = {}
        for i, a in self.num.items():
            row = mul[i]
            for j, b in o.num.items():
                entry = row[j]
                if not entry:
                    continue
                ab = p_mul(a, b)
                for k, s in entry:
                    term = ab if s == 1 else (p_neg(ab) if s == -1 else p_scale(ab, s))
                    out[k] = p_add(out[k], term) if k in out else term
        den = self.den if len(o.den) == 1 else (o.den if len(self.den) == 1 else p_mul(self.den, o.den))
        if len(den) == 1:
            return SuperRationalFunction(self.alg, {k: v for k, v in out.items() if v}, den, reduced=True)
        return SuperRationalFunction(self.alg, out, den)

    def __rmul__(self, other):
        if isinstance(other, (int, GaussianRational)):
            return self.scale(other)
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o * self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = SuperRationalFunction.constant(self.alg, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, GaussianRational)):
            return self.scale(gr(other).inverse())
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return SuperRationalFunction.coerce(self.alg, other) * self.inverse()

    # structure --------------------------------------------------------
    def component(self, a: int) -> RationalFunction:
        v = self.num.get(a)
        if not v:
            return RationalFunction()
        return RationalFunction(v, self.den)

    def components(self) -> dict[int, RationalFunction]:
        return {a: RationalFunction(v, self.den) for a, v in self.num.items()}

    def reduce(self) -> RationalFunction:
        """Image modulo nilpotents: the coefficient of 1 as a rational function."""
        return self.component(0)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((tuple(sorted(self.num.items())), self.den))

    def parity(self) -> int | None:
        ps = {self.alg.parity[k] for k in self.num}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def even_part(self) -> "SuperRationalFunction":
        return SuperRationalFunction(self.alg, {k: v for k, v in self.num.items()
                                                if not self.alg.parity[k]}, self.den)

    def odd_part(self) -> "SuperRationalFunction":
        return SuperRationalFunction(self.alg, {k: v for k, v in self.num.items()
                                                if self.alg.parity[k]}, self.den)

    def is_constant(self) -> bool:
        return len(self.den) == 1 and all(len(v) <= 1 for v in self.num.values())

    def constant_value(self) -> SuperElement:
        if not self.is_constant():
            raise ValueError("function is not constant")
        return SuperElement(self.alg, {k: v[0] for k, v in self.num.items()})

    def theta_free(self) -> bool:
        return all(k % self.alg.nmask == 0 for k in self.num)

    def derivative(self) -> "SuperRationalFunction":
        """d/dz, componentwise."""
        if len(self.den) == 1:
            return SuperRationalFunction(self.alg, {k: p_deriv(v) for k, v in self.num.items()},
                                         P_ONE)
        dd = p_deriv(self.den)
        num = {k: p_sub(p_mul(p_deriv(v), self.den), p_mul(v, dd)) for k, v in self.num.items()}
        return SuperRationalFunction(self.alg, num, p_mul(self.den, self.den))

    def theta_derivative(self, i: int) -> "SuperRationalFunction":
        if not 1 <= i <= self.alg.q:
            raise ValueError(f"theta{i} is not a generator")
        d = self.alg.dtheta[i - 1]
        out = {}
        for k, v in self.num.items():
            t = d[k]
            if t is not None:
                out[t[0]] = v if t[1] == 1 else p_neg(v)
        return SuperRationalFunction(self.alg, out, self.den)

    def berezin_top(self) -> "SuperRationalFunction":
        """Apply d/dtheta_1 first and d/dtheta_q last."""
        top = self.alg.top
        nm = self.alg.nmask
        out: dict[int, Poly] = {}
        for k, v in self.num.items():
            t = top[k]
            if t is None:
                continue
            kk = t[0] * nm
            term = v if t[1] == 1 else p_neg(v)
            out[kk] = p_add(out[kk], term) if kk in out else term
        return SuperRationalFunction(self.alg, out, self.den)

    def is_unit(self) -> bool:
        return 0 in self.num

    def inverse(self) -> "SuperRationalFunction":
        r = self.reduce()
        if not r:
            raise ZeroDivisionError("function has nilpotent reduction")
        rinv = SuperRationalFunction.from_rational(self.alg, r.inverse())
        n = self * rinv - 1
        out = SuperRationalFunction.constant(self.alg, 1)
        term = out
        while True:
            term = term * (-n)
            if not term:
                break
            out = out + term
        return out * rinv

    def map_components(self, fn: Callable[[RationalFunction], RationalFunction]):
        return SuperRationalFunction.from_components(
            self.alg, {a: fn(r) for a, r in self.components().items()})

    def substitute_scalar(self, a: int) -> SuperElement:
        """Evaluate every component at ``z = a``."""
        a = gr(a)
        return SuperElement(self.alg, {k: r(a) for k, r in self.components().items()})

    def as_element(self) -> SuperElement:
        return self.constant_value()

    def __str__(self):
        if not self.num:
            return "0"
        parts = []
        for k in sorted(self.num):
            r = RationalFunction(self.num[k], self.den)
            rs = str(r)
            if len([c for c in r.num if c]) > 1 and len(r.den) == 1:
                rs = f"({rs})"
            lab = self.alg.labels[k]
            if lab == "1":
                parts.append(rs)
            elif r == 1:
                parts.append(lab)
            elif r == -1:
                parts.append("-" + lab)
            else:
                parts.append(f"{rs}*{lab}")
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def __repr__(self):
        return f"SuperRationalFunction({self})"


# Laurent series -------------------------------------------------------------

class Laurent:
    """Truncated Laurent series ``sum_{e >= val} c_e t**e + O(t**prec)``.

    Coefficients may be Gaussian rationals or :class:`SuperElement`.  The
    zero element of the coefficient ring is passed explicitly.
    """

    __slots__ = ("coeffs", "prec", "zero")

    def __init__(self, coeffs: Mapping[int, object], prec: int, zero):
        self.coeffs = {e: c for e, c in coeffs.items() if e < prec and c}
        self.prec = prec
        self.zero = zero

    @property
    def val(self) -> int:
        return min(self.coeffs) if self.coeffs else self.prec

    def coeff(self, e: int):
        if e >= self.prec:
            raise ValueError(f"coefficient t^{e} lies beyond the precision t^{self.prec}")
        return self.coeffs.get(e, self.zero)

    def __add__(self, other: "Laurent") -> "Laurent":
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return Laurent(out, prec, self.zero)

    def __neg__(self):
        return Laurent({e: -c for e, c in self.coeffs.items()}, self.prec, self.zero)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            return Laurent({e: c * other for e, c in self.coeffs.items()}, self.prec, self.zero)
        prec = min(self.val + other.prec, other.val + self.prec)
        out: dict[int, object] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e >= prec:
                    continue
                term = c1 * c2
                out[e] = out[e] + term if e in out else term
        zero = self.zero if isinstance(self.zero, SuperElement) else other.zero
        return Laurent(out, prec, zero)

    def truncate(self, prec: int) -> "Laurent":
        return Laurent(self.coeffs, min(prec, self.prec), self.zero)

    def principal_part(self) -> dict[int, object]:
        if self.prec < 0:
            raise ValueError("precision too low for the principal part")
        return {e: c for e, c in self.coeffs.items() if e < 0}

    def __repr__(self):
        terms = ", ".join(f"{e}: {self.coeffs[e]}" for e in sorted(self.coeffs))
        return f"Laurent({{{terms}}}, O(t^{self.prec}))"


def _poly_laurent_parts(num: Poly, den: Poly, P: PointP1):
    """Return ``(L, d1, v)`` with ``num/den = t**(-v) * L(t) / d1(t)``, ``d1(0) != 0``.

    ``L`` is a dict exponent -> coefficient (a Laurent polynomial).
    """
    if P.is_infinite:
        dd = len(den) - 1
        rev_den = tuple(reversed(den))
        lp = {dd - k: c for k, c in enumerate(num) if c}
        return lp, rev_den, 0
    x = P.value
    d = p_shift(den, x)
    v = p_valuation(d)
    d1 = d[v:]
    n = p_shift(num, x)
    return {k - v: c for k, c in enumerate(n) if c}, d1, v


def rational_laurent(r: RationalFunction, P: PointP1, prec: int) -> Laurent:
    """Scalar Laurent expansion of ``r`` at ``P`` exact below ``t**prec``."""
    if not r:
        return Laurent({}, prec, ZERO)
    lp, d1, _v = _poly_laurent_parts(r.num, r.den, P)
    lo = min(lp)
    n = max(prec - lo, 0)
    inv = series_div(P_ONE, d1, n)
    out: dict[int, GaussianRational] = {}
    for e, c in lp.items():
        for j in range(max(prec - e, 0)):
            s = inv[j]
            if s:
                k = e + j
                out[k] = out[k] + c * s if k in out else c * s
    return Laurent(out, prec, ZERO)


def laurent_expand(F: SuperRationalFunction, P: PointP1, prec: int) -> Laurent:
    """Expansion of ``F`` at ``P`` with :class:`SuperElement` coefficients."""
    alg = F.alg
    zero = SuperElement(alg)
    if not F.num:
        return Laurent({}, prec, zero)
    parts = {a: _poly_laurent_parts(v, F.den, P) for a, v in F.num.items()}
    d1 = next(iter(parts.values()))[1]
    lo = min(min(lp) for lp, _d, _v in parts.values())
    inv = series_div(P_ONE, d1, max(prec - lo, 0))
    out: dict[int, dict[int, GaussianRational]] = {}
    for a, (lp, _d, _v) in parts.items():
        for e, c in lp.items():
            for j in range(max(prec - e, 0)):
                s = inv[j]
                if s:
                    slot = out.setdefault(e + j, {})
                    slot[a] = slot.get(a, ZERO) + c * s
    return Laurent({e: SuperElement(alg, d) for e, d in out.items()}, prec, zero)


def _poly_order(p: Poly, den: Poly, P: PointP1) -> int:
    if P.is_infinite:
        return (len(den) - 1) - (len(p) - 1)
    return p_valuation(p_shift(p, P.value)) - p_valuation(p_shift(den, P.value))


def order_at(F, P: PointP1) -> int | None:
    """Least exponent in the expansion at ``P``; None for the zero function."""
    if isinstance(F, RationalFunction):
        return None if not F else _poly_order(F.num, F.den, P)
    if not F.num:
        return None
    return min(_poly_order(v, F.den, P) for v in F.num.values())


def residue_coefficient(F: SuperRationalFunction, P: PointP1) -> SuperElement:
    """Residue of the one-form ``F dz`` at ``P``.

    At infinity ``dz = -w**-2 dw``, so the residue is minus the coefficient
    of ``w**1``.
    """
    if P.is_infinite:
        return -laurent_expand(F, P, 2).coeff(1)
    return laurent_expand(F, P, 0).coeff(-1)


def dlog(f: SuperRationalFunction) -> SuperRationalFunction:
    """``f'/f`` with ``'`` = d/dz, for an even unit ``f``."""
    return f.derivative() * f.inverse()


def log_nilpotent(nu: SuperRationalFunction) -> SuperRationalFunction:
    """``log(1 + nu)`` for nilpotent ``nu`` as a finite series."""
    out = SuperRationalFunction.zero(nu.alg)
    term = SuperRationalFunction.constant(nu.alg, 1)
    k = 1
    while True:
        term = term * nu
        if not term:
            return out
        c = GaussianRational(Fraction(1 if k % 2 else -1, k))
        out = out + term.scale(c)
        k += 1


def exp_nilpotent(nu: SuperRationalFunction) -> SuperRationalFunction:
    out = SuperRationalFunction.constant(nu.alg, 1)
    term = out
    k = 1
    while True:
        term = (term * nu).scale(GaussianRational(Fraction(1, k)))
        if not term:
            return out
        out = out + term
        k += 1


def log_decompose(f: SuperRationalFunction) -> tuple[RationalFunction, SuperRationalFunction]:
    """Write an even unit as ``f_red * exp(lam)`` with ``lam`` nilpotent."""
    if f.parity() not in (0,):
        raise ValueError("log_decompose needs an even function")
    red = f.reduce()
    if not red:
        raise ValueError("function has nilpotent reduction")
    nu = f * SuperRationalFunction.from_rational(f.alg, red.inverse()) - 1
    return red, log_nilpotent(nu)


# Log-channel functions -------------------------------------------------------

class LogSuperElement:
    """An element of ``B[theta]`` with :class:`LogScalar` coefficients."""

    __slots__ = ("alg", "c")

    def __init__(self, alg: LambdaAlgebra, coeffs: Mapping[int, LogScalar] | None = None):
        self.alg = alg
        self.c = {k: LogScalar.of(v) for k, v in (coeffs or {}).items() if LogScalar.of(v)}

    @classmethod
    def of(cls, x) -> "LogSuperElement":
        if isinstance(x, LogSuperElement):
            return x
        return cls(x.alg, {k: LogScalar(v) for k, v in x.c.items()})

    @classmethod
    def times(cls, e: SuperElement, s: LogScalar) -> "LogSuperElement":
        return cls(e.alg, {k: s * v for k, v in e.c.items()})

    def __add__(self, other):
        other = LogSuperElement.of(other)
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out[k] + v if k in out else v
        return LogSuperElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return LogSuperElement(self.alg, {k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-LogSuperElement.of(other))

    def __eq__(self, other):
        if isinstance(other, SuperElement):
            other = LogSuperElement.of(other)
        if not isinstance(other, LogSuperElement):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items(), key=lambda kv: kv[0])))

    def is_zero(self) -> bool:
        return not self.c

    def is_rational(self) -> bool:
        return all(v.is_rational() for v in self.c.values())

    def rational_part(self) -> SuperElement:
        if not self.is_rational():
            raise ValueError("value has logarithmic terms")
        return SuperElement(self.alg, {k: v.rational for k, v in self.c.items()})

    def theta_free(self) -> bool:
        return all(k % self.alg.nmask == 0 for k in self.c)

    def base_components(self) -> dict[int, LogScalar]:
        nm = self.alg.nmask
        return {k // nm: v for k, v in self.c.items() if k % nm == 0}

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k in sorted(self.c):
            lab = self.alg.labels[k]
            v = str(self.c[k])
            if lab == "1":
                parts.append(v)
            else:
                parts.append(f"({v})*{lab}")
        return " + ".join(parts)

    def __repr__(self):
        return f"LogSuperElement({self})"


def _log_series(P: PointP1, Q: PointP1, prec: int) -> Laurent:
    """``log((z - Q)/(P - Q))`` expanded in ``t = z - P`` (zero constant term)."""
    d = (P.value - Q.value).inverse()
    out = {}
    pw = ONE
    for k in range(1, prec):
        pw = pw * d
        out[k] = pw * GaussianRational(Fraction(1 if k % 2 else -1, k))
    return Laurent(out, prec, ZERO)


class LogFunction:
    """``R_0 + sum_Q log(z - Q) * R_Q`` with super rational ``R``.

    This is the coefficient type of operators that involve primitives of
    rational functions with nonzero residues.
    """

    __slots__ = ("alg", "rational", "logs")

    def __init__(self, alg: LambdaAlgebra, rational: SuperRationalFunction | None = None,
                 logs: Mapping[PointP1, SuperRationalFunction] | None = None):
        self.alg = alg
        self.rational = rational if rational is not None else SuperRationalFunction.zero(alg)
        self.logs = {Q: v for Q, v in (logs or {}).items() if v}
        for Q in self.logs:
            if Q.is_infinite:
                raise ValueError("log(z - Q) needs a finite branch point Q")

    @classmethod
    def of(cls, alg, x) -> "LogFunction":
        if isinstance(x, LogFunction):
            return x
        return cls(alg, SuperRationalFunction.coerce(alg, x))

    def __add__(self, other):
        o = LogFunction.of(self.alg, other)
        logs = dict(self.logs)
        for Q, v in o.logs.items():
            logs[Q] = logs[Q] + v if Q in logs else v
        return LogFunction(self.alg, self.rational + o.rational, logs)

    __radd__ = __add__

    def __neg__(self):
        return LogFunction(self.alg, -self.rational, {Q: -v for Q, v in self.logs.items()})

    def __sub__(self, other):
        return self + (-LogFunction.of(self.alg, other))

    def __rsub__(self, other):
        return LogFunction.of(self.alg, other) - self

    def __mul__(self, other):
        if isinstance(other, LogFunction):
            if not other.logs:
                other = other.rational
            elif not self.logs:
                return LogFunction(self.alg, self.rational * other.rational,
                                   {Q: self.rational * v for Q, v in other.logs.items()})
            else:
                raise TypeError("product of two logarithmic functions")
        o = SuperRationalFunction.coerce(self.alg, other) if not isinstance(
            other, (int, GaussianRational)) else other
        return LogFunction(self.alg, self.rational * o, {Q: v * o for Q, v in self.logs.items()})

    def __rmul__(self, other):
        if isinstance(other, (int, GaussianRational)):
            return self * other
        o = SuperRationalFunction.coerce(self.alg, other)
        return LogFunction(self.alg, o * self.rational, {Q: o * v for Q, v in self.logs.items()})

    def is_zero(self) -> bool:
        return not self.rational and not self.logs

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not self.logs

    def __eq__(self, other):
        o = LogFunction.of(self.alg, other)
        return self.rational == o.rational and self.logs == o.logs

    def parity_parts(self) -> tuple["LogFunction", "LogFunction"]:
        ev = LogFunction(self.alg, self.rational.even_part(),
                         {Q: v.even_part() for Q, v in self.logs.items()})
        od = LogFunction(self.alg, self.rational.odd_part(),
                         {Q: v.odd_part() for Q, v in self.logs.items()})
        return ev, od

    def derivative(self) -> "LogFunction":
        rat = self.rational.derivative()
        for Q, v in self.logs.items():
            zq = SuperRationalFunction.from_rational(
                self.alg, RationalFunction(P_ONE, (-Q.value, ONE), reduced=True))
            rat = rat + v * zq
        return LogFunction(self.alg, rat, {Q: v.derivative() for Q, v in self.logs.items()})

    def theta_derivative(self, i: int) -> "LogFunction":
        return LogFunction(self.alg, self.rational.theta_derivative(i),
                           {Q: v.theta_derivative(i) for Q, v in self.logs.items()})

    def berezin_top(self) -> "LogFunction":
        return LogFunction(self.alg, self.rational.berezin_top(),
                           {Q: v.berezin_top() for Q, v in self.logs.items()})

    def residue(self, P: PointP1) -> LogSuperElement:
        """Residue of ``self * dz`` at ``P`` on the principal branch at P.

        Near ``P`` write ``log(z - Q) = formal_log(P - Q) + log((z-Q)/(P-Q))``;
        the second term is a power series with zero constant term.
        """
        out = LogSuperElement.of(residue_coefficient(self.rational, P))
        if not self.logs:
            return out
        if P.is_infinite:
            raise ValueError("log-channel residues at infinity are not supported")
        for Q, v in self.logs.items():
            if Q == P:
                raise ValueError(f"{P} is a branch point of log(z - {Q})")
            out = out + LogSuperElement.times(residue_coefficient(v, P), formal_log(P.value - Q.value))
            ser = laurent_expand(v, P, 0)
            if ser.val < -1:
                logs = _log_series(P, Q, -ser.val)
                acc = SuperElement(self.alg)
                for k in range(1, -ser.val):
                    acc = acc + ser.coeff(-1 - k) * logs.coeff(k)
                out = out + LogSuperElement.of(acc)
        return out

    def __str__(self):
        parts = [] if not self.rational else [str(self.rational)]
        for Q in sorted(self.logs):
            parts.append(f"log(z - {Q})*({self.logs[Q]})")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"LogFunction({self})"


def principal_parts(F: SuperRationalFunction, points: Iterable[PointP1]) -> dict[PointP1, Laurent]:
    return {P: Laurent(laurent_expand(F, P, 0).principal_part(), 0, SuperElement(F.alg))
            for P in points}


def taylor_coefficient_str(p: Poly) -> str:
    return p_str(p)
