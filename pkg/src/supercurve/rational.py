"""Dense univariate polynomials and rational functions over Q(i).

Polynomials are tuples of :class:`GaussianRational`, lowest degree first,
with no trailing zeros.  The zero polynomial is ``()``.
"""
from __future__ import annotations

from math import comb
from typing import Sequence

from .scalars import ONE, ZERO, GaussianRational, gr

Poly = tuple

P_ZERO: Poly = ()
P_ONE: Poly = (ONE,)
P_Z: Poly = (ZERO, ONE)


def p_trim(c: Sequence) -> Poly:
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def p_const(c) -> Poly:
    c = gr(c)
    return (c,) if c else ()


def p_add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = out[i] + x
    return p_trim(out)


def p_neg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def p_sub(a: Poly, b: Poly) -> Poly:
    return p_add(a, p_neg(b))


def p_scale(a: Poly, c: GaussianRational) -> Poly:
    if not c:
        return ()
    if c == ONE:
        return a
    return tuple(x * c for x in a)


def p_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    if len(a) == 1:
        return p_scale(b, a[0])
    if len(b) == 1:
        return p_scale(a, b[0])
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return p_trim(out)


def p_pow(a: Poly, n: int) -> Poly:
    out = P_ONE
    while n:
        if n & 1:
            out = p_mul(out, a)
        a = p_mul(a, a)
        n >>= 1
    return out


def p_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    r = list(a)
    lead_inv = b[-1].inverse()
    db = len(b) - 1
    q = [ZERO] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k]
        if not c:
            continue
        c = c * lead_inv
        q[k - db] = c
        for j in range(db + 1):
            if b[j]:
                r[k - db + j] = r[k - db + j] - c * b[j]
    return p_trim(q), p_trim(r[:db])


def p_exact_div(a: Poly, b: Poly) -> Poly:
    q, r = p_divmod(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def p_monic(a: Poly) -> Poly:
    if not a:
        return a
    return p_scale(a, a[-1].inverse())


def p_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by Euclid."""
    if len(a) == 1 and len(b) >= 1 or len(b) == 1 and len(a) >= 1:
        return P_ONE
    while b:
        a, b = b, p_divmod(a, b)[1]
        if len(b) == 1:
            return P_ONE
    return p_monic(a)


def p_deriv(a: Poly) -> Poly:
    return p_trim([a[k] * k for k in range(1, len(a))])


def p_eval(a: Poly, x: GaussianRational) -> GaussianRational:
    acc = ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def p_shift(a: Poly, x: GaussianRational) -> Poly:
    """Coefficients of ``a(x + t)`` in ``t``."""
    if not x or len(a) <= 1:
        return a
    n = len(a)
    out = [ZERO] * n
    pw = [ONE]
    for _ in range(n):
        pw.append(pw[-1] * x)
    for k, c in enumerate(a):
        if not c:
            continue
        for j in range(k + 1):
            out[j] = out[j] + c * comb(k, j) * pw[k - j]
    return p_trim(out)


def p_valuation(a: Poly) -> int:
    for i, c in enumerate(a):
        if c:
            return i
    raise ValueError("valuation of zero polynomial")


def p_str(a: Poly, var: str = "z") -> str:
    if not a:
        return "0"
    terms = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        cs = str(c)
        if c.re and c.im:
            cs = f"({cs})"
        if k == 0:
            terms.append(cs)
            continue
        mon = var if k == 1 else f"{var}^{k}"
        if c == 1:
            terms.append(mon)
        elif c == -1:
            terms.append("-" + mon)
        else:
            terms.append(f"{cs}*{mon}")
    out = terms[0]
    for t in terms[1:]:
        out += (" - " + t[1:]) if t.startswith("-") else (" + " + t)
    return out


def series_div(num: Poly, den: Poly, n: int) -> list[GaussianRational]:
    """First ``n`` power-series coefficients of ``num/den`` with ``den(0) != 0``."""
    inv0 = den[0].inverse()
    out: list[GaussianRational] = []
    dl = len(den)
    for k in range(n):
        acc = num[k] if k < len(num) else ZERO
        for j in range(1, min(k, dl - 1) + 1):
            if den[j]:
                acc = acc - den[j] * out[k - j]
        out.append(acc * inv0)
    return out


class RationalFunction:
    """A reduced quotient ``num/den`` with monic ``den``."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly = P_ZERO, den: Poly = P_ONE, *, reduced: bool = False):
        num = p_trim(num)
        den = p_trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = P_ZERO, P_ONE
            return
        if not reduced:
            g = p_gcd(num, den)
            if len(g) > 1:
                num = p_exact_div(num, g)
                den = p_exact_div(den, g)
            lead = den[-1]
            if lead != ONE:
                inv = lead.inverse()
                num = p_scale(num, inv)
                den = p_scale(den, inv)
        self.num, self.den = num, den

    @classmethod
    def const(cls, c) -> "RationalFunction":
        return cls(p_const(c), P_ONE, reduced=True)

    @classmethod
    def z(cls) -> "RationalFunction":
        return cls(P_Z, P_ONE, reduced=True)

    @classmethod
    def poly(cls, coeffs) -> "RationalFunction":
        return cls(p_trim([gr(c) for c in coeffs]), P_ONE, reduced=True)

    @classmethod
    def coerce(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return cls.const(x)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.const(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return RationalFunction(p_add(self.num, other.num), self.den)
        return RationalFunction(
            p_add(p_mul(self.num, other.den), p_mul(other.num, self.den)),
            p_mul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(p_neg(self.num), self.den, reduced=True)

    def __sub__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalFunction):
            if isinstance(other, GaussianRational) or isinstance(other, int):
                c = gr(other)
                return RationalFunction(p_scale(self.num, c), self.den, reduced=True) if c else RationalFunction()
            return NotImplemented
        if not self.num or not other.num:
            return RationalFunction()
        g1 = p_gcd(self.num, other.den)
        g2 = p_gcd(other.num, self.den)
        n1, d2 = (self.num, other.den) if len(g1) == 1 else (p_exact_div(self.num, g1), p_exact_div(other.den, g1))
        n2, d1 = (other.num, self.den) if len(g2) == 1 else (p_exact_div(other.num, g2), p_exact_div(self.den, g2))
        den = p_mul(d1, d2)
        num = p_mul(n1, n2)
        lead = den[-1]
        if lead != ONE:
            inv = lead.inverse()
            num, den = p_scale(num, inv), p_scale(den, inv)
        return RationalFunction(num, den, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * RationalFunction.coerce(other).inverse()

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(p_pow(self.num, n), p_pow(self.den, n), reduced=True)

    def derivative(self) -> "RationalFunction":
        if len(self.den) == 1:
            return RationalFunction(p_deriv(self.num), P_ONE, reduced=True)
        return RationalFunction(
            p_sub(p_mul(p_deriv(self.num), self.den), p_mul(self.num, p_deriv(self.den))),
            p_mul(self.den, self.den),
        )

    # predicates -------------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return len(self.den) == 1 and len(self.num) <= 1

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num[0] if self.num else ZERO

    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.const(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x) -> GaussianRational:
        x = gr(x)
        d = p_eval(self.den, x)
        if not d:
            raise ZeroDivisionError(f"pole at {x}")
        return p_eval(self.num, x) / d

    def __str__(self):
        if len(self.den) == 1:
            return p_str(self.num)
        n = p_str(self.num)
        if len([c for c in self.num if c]) > 1:
            n = f"({n})"
        d = p_str(self.den)
        if len([c for c in self.den if c]) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RationalFunction({self})"


def _gauss_divisors(a: int, b: int) -> list[tuple[int, int]]:
    """All Gaussian integer divisors of ``a + b*i`` up to units (normalised)."""
    from .scalars import gaussian_factor

    _unit, primes = gaussian_factor(a, b)
    divs = [(1, 0)]
    for (c, d), e in primes.items():
        nxt = []
        for x, y in divs:
            px, py = x, y
            for _k in range(e + 1):
                nxt.append((px, py))
                px, py = px * c - py * d, px * d + py * c
        divs = nxt
    return divs


def gaussian_roots(a: Poly) -> list[tuple[GaussianRational, int]]:
    """Roots of ``a`` in Q(i) with multiplicities.

    Uses the rational root theorem over Z[i]; the polynomials met in practice
    have small coefficients, so divisor enumeration is cheap.
    """
    import math

    if not a:
        raise ValueError("roots of the zero polynomial")
    roots: list[tuple[GaussianRational, int]] = []
    v = p_valuation(a)
    if v:
        roots.append((ZERO, v))
        a = tuple(a[v:])
    if len(a) <= 1:
        return roots
    den = 1
    for c in a:
        den = math.lcm(den, int(c.re.denominator), int(c.im.denominator))
    ints = [(int(c.re * den), int(c.im * den)) for c in a]
    units = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    cands = set()
    for px, py in _gauss_divisors(*ints[0]):
        for ux, uy in units:
            p = GaussianRational(px * ux - py * uy, px * uy + py * ux)
            for qx, qy in _gauss_divisors(*ints[-1]):
                cands.add(p / GaussianRational(qx, qy))
    cur = a
    for r in sorted(cands, key=lambda g: (g.norm(), g.re, g.im)):
        m = 0
        lin = (-r, ONE)
        while len(cur) > 1 and not p_eval(cur, r):
            cur = p_exact_div(cur, lin)
            m += 1
        if m:
            roots.append((r, m))
        if len(cur) <= 1:
            break
    return roots


def splits(a: Poly) -> bool:
    return sum(m for _r, m in gaussian_roots(a)) == len(a) - 1
