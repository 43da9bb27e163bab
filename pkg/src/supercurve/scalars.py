"""Exact scalars: Gaussian rationals and a formal-logarithm extension.

Every number that appears in the algebra lives in Q(i).  Periods of
multivalued integrals pick up logarithms of Gaussian rationals, which are
kept symbolically in :class:`LogScalar`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

try:  # gmpy2 is roughly five times faster for the inner loops
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction

__all__ = [
    "GaussianRational",
    "LogScalar",
    "formal_log",
    "gaussian_factor",
    "gr",
    "ZERO",
    "ONE",
    "I",
]


def _q(x) -> _Q:
    if isinstance(x, _Q):
        return x
    if isinstance(x, Fraction):
        return _Q(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return _Q(x)


def _fmt_q(x) -> str:
    x = Fraction(int(x.numerator), int(x.denominator))
    return str(x)


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def _raw(cls, re, im) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``"a"``, ``"a+bi"``, ``"bi"`` or ``"-i"`` with rational a, b."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty Gaussian rational")
        if not s.endswith("i"):
            return cls(Fraction(s))
        body = s[:-1]
        # split at the last sign that is not the leading one or part of a/b
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut <= 0:
            re_part, im_part = "0", body
        else:
            re_part, im_part = body[:cut], body[cut:]
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return cls(Fraction(re_part), Fraction(im_part))

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            other = gr(other)
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            other = gr(other)
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return gr(other) - self

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction, _Q)):
                o = _q(other)
                return GaussianRational._raw(self.re * o, self.im * o)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational._raw(a * c, b)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b = self.re, self.im
        if not b:
            if not a:
                raise ZeroDivisionError("inverse of zero")
            return GaussianRational._raw(1 / a, b)
        n = a * a + b * b
        return GaussianRational._raw(a / n, -b / n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            other = gr(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return gr(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> Fraction:
        return Fraction(self.re * self.re + self.im * self.im)

    # comparisons ------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, _Q)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def sort_key(self):
        return (self.re, self.im)

    def is_real(self) -> bool:
        return not self.im

    def is_integer(self) -> bool:
        return not self.im and self.re.denominator == 1

    def as_fraction(self) -> Fraction:
        if self.im:
            raise ValueError(f"{self} is not real")
        return Fraction(int(self.re.numerator), int(self.re.denominator))

    def gaussian_parts(self) -> tuple[int, int, int]:
        """Return ``(a, b, d)`` with ``self == (a + b*i)/d`` and ``d > 0`` minimal."""
        d = math.lcm(int(self.re.denominator), int(self.im.denominator))
        return int(self.re * d), int(self.im * d), d

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        re, im = self.re, self.im
        if not im:
            return _fmt_q(re)
        if im == 1:
            ims = "i"
        elif im == -1:
            ims = "-i"
        else:
            ims = _fmt_q(im) + "i"
        if not re:
            return ims
        if not ims.startswith("-"):
            ims = "+" + ims
        return _fmt_q(re) + ims


def gr(x) -> GaussianRational:
    """Coerce ints, Fractions, mpq and strings to :class:`GaussianRational`."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, str):
        return GaussianRational.parse(x)
    if isinstance(x, complex):
        raise TypeError("complex floats are not exact")
    return GaussianRational(x)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


# Gaussian integer factorisation ------------------------------------------

def _factor_int(n: int) -> dict[int, int]:
    """Trial division; the integers met here are small."""
    out: dict[int, int] = {}
    n = abs(n)
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _two_squares(p: int) -> tuple[int, int]:
    # p == 1 mod 4; find x with x^2 = -1 mod p, then run Euclid (Cornacchia)
    for g in range(2, p):
        x = pow(g, (p - 1) // 4, p)
        if x * x % p == p - 1:
            break
    a, b = p, x
    while b * b > p:
        a, b = b, a % b
    return b, int(math.isqrt(p - b * b))


def _normalize(a: int, b: int) -> tuple[tuple[int, int], int]:
    """First-quadrant associate (re > 0, im >= 0) and the power k with z = i^k * assoc."""
    for k in range(4):
        if a > 0 and b >= 0:
            return (a, b), k
        a, b = b, -a  # divide by i
    raise ValueError("zero has no associate")


def _gdivides(a: int, b: int, c: int, d: int):
    """Return (a+bi)/(c+di) if it is a Gaussian integer, else None."""
    n = c * c + d * d
    x = a * c + b * d
    y = b * c - a * d
    if x % n or y % n:
        return None
    return x // n, y // n


def gaussian_factor(a: int, b: int) -> tuple[int, dict[tuple[int, int], int]]:
    """Factor ``a + b*i`` as ``i**k * prod(pi**e)`` with normalised primes pi."""
    if a == 0 and b == 0:
        raise ValueError("cannot factor zero")
    primes: dict[tuple[int, int], int] = {}
    for p, _e in sorted(_factor_int(a * a + b * b).items()):
        if p == 2:
            cands = [(1, 1)]
        elif p % 4 == 3:
            cands = [(p, 0)]
        else:
            x, y = _two_squares(p)
            cands = sorted({_normalize(x, y)[0], _normalize(x, -y)[0]})
        for c, d in cands:
            while True:
                r = _gdivides(a, b, c, d)
                if r is None:
                    break
                a, b = r
                primes[(c, d)] = primes.get((c, d), 0) + 1
    # what remains is a unit
    unit = {(1, 0): 0, (0, 1): 1, (-1, 0): 2, (0, -1): 3}[(a, b)]
    return unit, primes


def _fmt_gauss_int(p: tuple[int, int]) -> str:
    return str(GaussianRational(p[0], p[1]))


class LogScalar:
    """``r + c*IPI + sum_p e_p*Log(p)`` over normalised Gaussian primes ``p``.

    Logarithms of distinct primes, ``IPI`` and 1 are Q(i)-linearly
    independent over the algebraic numbers, so equality is decided
    componentwise.
    """

    __slots__ = ("rational", "pi_i", "logs")

    def __init__(self, rational=ZERO, pi_i=ZERO, logs=None):
        self.rational = gr(rational)
        self.pi_i = gr(pi_i)
        self.logs: dict[tuple[int, int], GaussianRational] = {
            k: gr(v) for k, v in (logs or {}).items() if gr(v)
        }

    @classmethod
    def of(cls, x) -> "LogScalar":
        if isinstance(x, LogScalar):
            return x
        return cls(gr(x))

    def __add__(self, other):
        other = LogScalar.of(other)
        logs = dict(self.logs)
        for k, v in other.logs.items():
            logs[k] = logs.get(k, ZERO) + v
        return LogScalar(self.rational + other.rational, self.pi_i + other.pi_i, logs)

    __radd__ = __add__

    def __neg__(self):
        return LogScalar(-self.rational, -self.pi_i, {k: -v for k, v in self.logs.items()})

    def __sub__(self, other):
        return self + (-LogScalar.of(other))

    def __rsub__(self, other):
        return LogScalar.of(other) - self

    def __mul__(self, c):
        if isinstance(c, LogScalar):
            if c.is_rational():
                c = c.rational
            elif self.is_rational():
                return c * self.rational
            else:
                raise TypeError("product of two transcendental LogScalars")
        c = gr(c)
        return LogScalar(self.rational * c, self.pi_i * c, {k: v * c for k, v in self.logs.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.rational and not self.pi_i and not self.logs

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not self.pi_i and not self.logs

    def __eq__(self, other):
        if not isinstance(other, LogScalar):
            try:
                other = LogScalar.of(other)
            except TypeError:
                return NotImplemented
        return (self.rational == other.rational and self.pi_i == other.pi_i
                and self.logs == other.logs)

    def __hash__(self):
        return hash((self.rational, self.pi_i, tuple(sorted(self.logs.items()))))

    def __str__(self):
        parts = []

        def coef(c: GaussianRational) -> str:
            if c == 1:
                return ""
            if c == -1:
                return "-"
            s = str(c)
            if c.re and c.im:
                s = f"({s})"
            return s + "*"

        if self.rational:
            parts.append(str(self.rational))
        if self.pi_i:
            parts.append(coef(self.pi_i) + "IPI")
        for k in sorted(self.logs):
            parts.append(coef(self.logs[k]) + f"Log({_fmt_gauss_int(k)})")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def __repr__(self):
        return f"LogScalar({self})"


def formal_log(c) -> LogScalar:
    """Symbolic logarithm of a nonzero Gaussian rational.

    The unit ``i**k`` (k in 0..3) contributes ``k/2 * IPI``; the rest is a
    signed sum of logarithms of normalised Gaussian primes.
    """
    c = gr(c)
    if not c:
        raise ValueError("log of zero")
    a, b, d = c.gaussian_parts()
    k1, num = gaussian_factor(a, b)
    k2, den = gaussian_factor(d, 0)
    logs: dict[tuple[int, int], GaussianRational] = {}
    for p, e in num.items():
        logs[p] = logs.get(p, ZERO) + e
    for p, e in den.items():
        logs[p] = logs.get(p, ZERO) - e
    k = (k1 - k2) % 4
    return LogScalar(ZERO, GaussianRational(Fraction(k, 2)), logs)


def sum_logs(values: Iterable[LogScalar]) -> LogScalar:
    total = LogScalar()
    for v in values:
        total = total + v
    return total
