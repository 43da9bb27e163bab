"""Finite-dimensional local supercommutative base algebras and ``B[theta]``.

A :class:`BaseAlgebra` is given by a basis (unit first) and structure
constants.  :class:`LambdaAlgebra` adjoins ``q`` odd generators
``theta_1..theta_q`` and precomputes the signed multiplication table on the
basis ``b * theta_S``.  :class:`SuperElement` is an element with Gaussian
rational coefficients.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .scalars import ONE, ZERO, GaussianRational, gr

__all__ = ["BaseAlgebra", "LambdaAlgebra", "SuperElement", "AlgebraError"]


class AlgebraError(ValueError):
    """Raised when a structure-constant table fails validation."""


def _perm_sign(seq: Sequence[int]) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv & 1 else 1


class BaseAlgebra:
    """A local supercommutative C-algebra with an explicit basis.

    ``table[i][j]`` is a tuple of ``(k, c)`` pairs giving
    ``e_i * e_j = sum c * e_k``.  Basis element 0 must be the unit and the
    remaining elements must span a nilpotent ideal.
    """

    def __init__(self, labels: Sequence[str], parity: Sequence[int], table,
                 generators: Mapping[str, int] | None = None, name: str = "B",
                 validate: bool = True):
        self.labels = list(labels)
        self.parity = [int(p) & 1 for p in parity]
        self.dim = len(self.labels)
        if len(self.parity) != self.dim:
            raise AlgebraError("labels and parities differ in length")
        mul: list[list[tuple]] = [[() for _ in range(self.dim)] for _ in range(self.dim)]
        if isinstance(table, Mapping):
            for (i, j), row in table.items():
                mul[i][j] = tuple((k, gr(c)) for k, c in sorted(dict(row).items()) if gr(c))
        else:
            for i in range(self.dim):
                for j in range(self.dim):
                    mul[i][j] = tuple((k, gr(c)) for k, c in table[i][j] if gr(c))
        self.mul = mul
        self.generators = dict(generators or {})
        self.name = name
        if validate:
            self.validate()

    # presets ----------------------------------------------------------
    @classmethod
    def complex(cls) -> "BaseAlgebra":
        return cls(["1"], [0], [[((0, 1),)]], {}, name="C")

    @classmethod
    def grassmann(cls, names: Sequence[str]) -> "BaseAlgebra":
        """Exterior algebra on odd generators ``names``."""
        m = len(names)
        subsets = [s for r in range(m + 1) for s in combinations(range(m), r)]
        index = {s: i for i, s in enumerate(subsets)}
        labels = ["1" if not s else "*".join(names[i] for i in s) for s in subsets]
        parity = [len(s) & 1 for s in subsets]
        table = {}
        for s, t in product(subsets, repeat=2):
            if set(s) & set(t):
                continue
            u = tuple(sorted(s + t))
            table[(index[s], index[t])] = {index[u]: _perm_sign(s + t)}
        gens = {n: index[(i,)] for i, n in enumerate(names)}
        return cls(labels, parity, table, gens, name=f"grassmann({', '.join(names)})")

    @classmethod
    def truncated(cls, name: str, order: int) -> "BaseAlgebra":
        """``C[name]/(name**order)`` with ``name`` even."""
        if order < 1:
            raise AlgebraError("truncation order must be positive")
        labels = ["1"] + [name if k == 1 else f"{name}^{k}" for k in range(1, order)]
        table = {(i, j): {i + j: 1} for i in range(order) for j in range(order) if i + j < order}
        gens = {name: 1} if order > 1 else {}
        return cls(labels, [0] * order, table, gens, name=f"truncated({name}, {order})")

    @classmethod
    def tensor(cls, a: "BaseAlgebra", b: "BaseAlgebra") -> "BaseAlgebra":
        """Graded tensor product with the Koszul sign on the middle swap."""
        pairs = [(i, j) for i in range(a.dim) for j in range(b.dim)]
        index = {p: n for n, p in enumerate(pairs)}

        def lab(i, j):
            parts = [x for x in (a.labels[i], b.labels[j]) if x != "1"]
            return "*".join(parts) if parts else "1"

        labels = [lab(i, j) for i, j in pairs]
        parity = [(a.parity[i] + b.parity[j]) & 1 for i, j in pairs]
        table = {}
        for (i, j), (k, l) in product(pairs, repeat=2):
            sign = -1 if (b.parity[j] and a.parity[k]) else 1
            row: dict[int, GaussianRational] = {}
            for x, cx in a.mul[i][k]:
                for y, cy in b.mul[j][l]:
                    n = index[(x, y)]
                    row[n] = row.get(n, ZERO) + cx * cy * sign
            table[(index[(i, j)], index[(k, l)])] = row
        gens = {}
        for g, i in a.generators.items():
            gens[g] = index[(i, 0)]
        for g, j in b.generators.items():
            if g in gens:
                raise AlgebraError(f"generator name {g!r} used twice in tensor product")
            gens[g] = index[(0, j)]
        return cls(labels, parity, table, gens, name=f"{a.name} * {b.name}")

    # validation -------------------------------------------------------
    def product_vec(self, x: Mapping[int, GaussianRational], y: Mapping[int, GaussianRational]):
        out: dict[int, GaussianRational] = {}
        for i, a in x.items():
            for j, b in y.items():
                ab = a * b
                for k, c in self.mul[i][j]:
                    out[k] = out.get(k, ZERO) + ab * c
        return {k: v for k, v in out.items() if v}

    def validate(self) -> None:
        n = self.dim
        if n == 0 or self.parity[0] != 0:
            raise AlgebraError("basis element 0 must be the even unit")
        for i in range(n):
            if self.mul[0][i] != ((i, ONE),) or self.mul[i][0] != ((i, ONE),):
                raise AlgebraError(f"basis element 0 is not a unit for {self.labels[i]}")
        for i, j in product(range(n), repeat=2):
            for k, _c in self.mul[i][j]:
                if self.parity[k] != (self.parity[i] + self.parity[j]) & 1:
                    raise AlgebraError(f"product {self.labels[i]}*{self.labels[j]} breaks parity")
            sign = -1 if (self.parity[i] and self.parity[j]) else 1
            rev = tuple((k, c * sign) for k, c in self.mul[j][i])
            if dict(self.mul[i][j]) != dict(rev):
                raise AlgebraError(f"{self.labels[i]} and {self.labels[j]} do not supercommute")
            if i and j and any(k == 0 for k, _ in self.mul[i][j]):
                raise AlgebraError("non-unit basis elements do not span an ideal")
        for i, j, k in product(range(n), repeat=3):
            left = self.product_vec(self.product_vec({i: ONE}, {j: ONE}), {k: ONE})
            right = self.product_vec({i: ONE}, self.product_vec({j: ONE}, {k: ONE}))
            if left != right:
                raise AlgebraError(
                    f"associativity fails on ({self.labels[i]}, {self.labels[j]}, {self.labels[k]})")
        if self.nilpotency_index() is None:
            raise AlgebraError("maximal ideal is not nilpotent")

    def nilpotency_index(self) -> int | None:
        """Least ``k`` with ``m**k = 0`` for the ideal ``m`` of non-unit elements."""
        power = {i for i in range(1, self.dim)}
        k = 1
        while power:
            nxt = set()
            for i in power:
                for j in range(1, self.dim):
                    nxt.update(x for x, _ in self.mul[i][j])
            k += 1
            if k > self.dim + 1:
                return None
            power = nxt
        return k

    def is_grassmann(self) -> bool:
        return self.name.startswith("grassmann") or self.dim == 1

    def __repr__(self):
        return f"BaseAlgebra({self.name}, dim={self.dim})"


class LambdaAlgebra:
    """``B[theta_1..theta_q]`` with basis ``b * theta_S``.

    The basis index is ``b * 2**q + mask`` where bit ``i-1`` of ``mask``
    marks ``theta_i``.
    """

    def __init__(self, base: BaseAlgebra, q: int):
        if q < 0:
            raise ValueError("q must be non-negative")
        self.base = base
        self.q = q
        self.nmask = 1 << q
        self.dim = base.dim * self.nmask
        self.full_mask = self.nmask - 1
        par = []
        labels = []
        for b in range(base.dim):
            for m in range(self.nmask):
                par.append((base.parity[b] + bin(m).count("1")) & 1)
                parts = [] if base.labels[b] == "1" else [base.labels[b]]
                parts += [f"theta{i + 1}" for i in range(q) if m >> i & 1]
                labels.append("*".join(parts) if parts else "1")
        self.parity = par
        self.labels = labels
        self.mul = self._build_table()
        self.dtheta = [self._build_derivative(i) for i in range(1, q + 1)]

    def index(self, b: int, mask: int) -> int:
        return b * self.nmask + mask

    def split(self, a: int) -> tuple[int, int]:
        return divmod(a, self.nmask)

    @staticmethod
    def _theta_sign(s: int, t: int) -> int:
        # sign of theta_S theta_T = sign * theta_{S u T}
        count = 0
        tt = t
        while tt:
            low = tt & -tt
            count += bin(s & ~(low | (low - 1))).count("1")
            tt ^= low
        return -1 if count & 1 else 1

    def _build_table(self):
        nm = self.nmask
        base = self.base
        table = [[() for _ in range(self.dim)] for _ in range(self.dim)]
        for a in range(self.dim):
            b1, s1 = divmod(a, nm)
            ps = bin(s1).count("1") & 1
            for c in range(self.dim):
                b2, s2 = divmod(c, nm)
                if s1 & s2:
                    continue
                sign = self._theta_sign(s1, s2)
                if ps and base.parity[b2]:
                    sign = -sign
                u = s1 | s2
                table[a][c] = tuple((k * nm + u, coef * sign) for k, coef in base.mul[b1][b2])
        return table

    def _build_derivative(self, i: int):
        """Left derivative d/dtheta_i as ``a -> (a', sign)`` or None."""
        bit = 1 << (i - 1)
        out = []
        for a in range(self.dim):
            b, s = divmod(a, self.nmask)
            if not s & bit:
                out.append(None)
                continue
            pos = bin(s & (bit - 1)).count("1")
            sign = -1 if pos & 1 else 1
            if self.base.parity[b]:
                sign = -sign
            out.append((b * self.nmask + (s ^ bit), sign))
        return out

    @cached_property
    def top(self):
        """``berezin_top`` on basis elements: ``a -> (base index, sign)`` or None."""
        out = []
        for a in range(self.dim):
            cur = [(a, 1)]
            for i in range(1, self.q + 1):
                nxt = []
                for x, s in cur:
                    d = self.dtheta[i - 1][x]
                    if d is not None:
                        nxt.append((d[0], s * d[1]))
                cur = nxt
            if cur:
                x, s = cur[0]
                out.append((x // self.nmask, s))
            else:
                out.append(None)
        return out

    @cached_property
    def pair_table(self):
        """``berezin_top(e_a * e_c)`` as a list of ``(base index, coeff)``."""
        top = self.top
        tab = []
        for a in range(self.dim):
            row = []
            for c in range(self.dim):
                acc: dict[int, GaussianRational] = {}
                for k, coef in self.mul[a][c]:
                    t = top[k]
                    if t is not None:
                        acc[t[0]] = acc.get(t[0], ZERO) + coef * t[1]
                row.append(tuple((k, v) for k, v in acc.items() if v))
            tab.append(row)
        return tab

    def generator_index(self, name: str) -> int | None:
        if name in self.base.generators:
            return self.index(self.base.generators[name], 0)
        if name.startswith("theta") and name[5:].isdigit():
            i = int(name[5:])
            if 1 <= i <= self.q:
                return self.index(0, 1 << (i - 1))
        return None

    def __repr__(self):
        return f"LambdaAlgebra({self.base.name}, q={self.q})"


class SuperElement:
    """An element of ``B[theta]`` with Gaussian rational coefficients."""

    __slots__ = ("alg", "c")

    def __init__(self, alg: LambdaAlgebra, coeffs: Mapping[int, object] | None = None):
        self.alg = alg
        self.c: dict[int, GaussianRational] = {}
        if coeffs:
            for k, v in coeffs.items():
                v = gr(v)
                if v:
                    self.c[k] = v

    @classmethod
    def _raw(cls, alg, c):
        obj = object.__new__(cls)
        obj.alg = alg
        obj.c = c
        return obj

    @classmethod
    def scalar(cls, alg: LambdaAlgebra, x=1) -> "SuperElement":
        return cls(alg, {0: x})

    @classmethod
    def basis(cls, alg: LambdaAlgebra, a: int) -> "SuperElement":
        return cls._raw(alg, {a: ONE})

    @classmethod
    def theta(cls, alg: LambdaAlgebra, i: int) -> "SuperElement":
        return cls.basis(alg, alg.index(0, 1 << (i - 1)))

    @classmethod
    def generator(cls, alg: LambdaAlgebra, name: str) -> "SuperElement":
        a = alg.generator_index(name)
        if a is None:
            raise KeyError(name)
        return cls.basis(alg, a)

    def _coerce(self, other):
        if isinstance(other, SuperElement):
            return other
        if isinstance(other, (int, GaussianRational)):
            return SuperElement.scalar(self.alg, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.c)
        for k, v in o.c.items():
            w = out.get(k, ZERO) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return SuperElement._raw(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperElement._raw(self.alg, {k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, GaussianRational)):
            g = gr(other)
            if not g:
                return SuperElement._raw(self.alg, {})
            return SuperElement._raw(self.alg, {k: v * g for k, v in self.c.items()})
        if not isinstance(other, SuperElement):
            return NotImplemented
        mul = self.alg.mul
        out: dict[int, GaussianRational] = {}
        for i, a in self.c.items():
            row = mul[i]
            for j, b in other.c.items():
                entry = row[j]
                if not entry:
                    continue
                ab = a * b
                for k, s in entry:
                    out[k] = out.get(k, ZERO) + ab * s
        return SuperElement._raw(self.alg, {k: v for k, v in out.items() if v})

    def __rmul__(self, other):
        if isinstance(other, (int, GaussianRational)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        out = SuperElement.scalar(self.alg, 1)
        for _ in range(n):
            out = out * self
        return out

    # structure --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items(), key=lambda kv: kv[0])))

    def parity(self) -> int | None:
        """0 or 1 for homogeneous nonzero elements, None if mixed (0 for zero)."""
        ps = {self.alg.parity[k] for k in self.c}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def even_part(self) -> "SuperElement":
        return SuperElement._raw(self.alg, {k: v for k, v in self.c.items() if not self.alg.parity[k]})

    def odd_part(self) -> "SuperElement":
        return SuperElement._raw(self.alg, {k: v for k, v in self.c.items() if self.alg.parity[k]})

    def reduce(self) -> GaussianRational:
        """Image modulo all nilpotents (the coefficient of 1)."""
        return self.c.get(0, ZERO)

    def theta_free(self) -> bool:
        return all(k % self.alg.nmask == 0 for k in self.c)

    def theta_derivative(self, i: int) -> "SuperElement":
        if not 1 <= i <= self.alg.q:
            raise ValueError(f"theta{i} is not a generator")
        d = self.alg.dtheta[i - 1]
        out = {}
        for k, v in self.c.items():
            t = d[k]
            if t is not None:
                out[t[0]] = v * t[1] if t[1] == 1 else -v
        return SuperElement._raw(self.alg, out)

    def berezin_top(self) -> "SuperElement":
        """Apply d/dtheta_1 first, then d/dtheta_2, ..., d/dtheta_q."""
        top = self.alg.top
        nm = self.alg.nmask
        out: dict[int, GaussianRational] = {}
        for k, v in self.c.items():
            t = top[k]
            if t is not None:
                out[t[0] * nm] = out.get(t[0] * nm, ZERO) + (v if t[1] == 1 else -v)
        return SuperElement._raw(self.alg, {k: v for k, v in out.items() if v})

    def base_components(self) -> dict[int, GaussianRational]:
        """Coefficients of a theta-free element indexed by the base basis."""
        nm = self.alg.nmask
        if not self.theta_free():
            raise ValueError("element depends on theta")
        return {k // nm: v for k, v in self.c.items()}

    def is_unit(self) -> bool:
        return bool(self.reduce())

    def inverse(self) -> "SuperElement":
        """Inverse of a unit by the finite geometric series."""
        r = self.reduce()
        if not r:
            raise ZeroDivisionError("element is nilpotent")
        rinv = r.inverse()
        n = self * rinv - 1  # nilpotent
        out = SuperElement.scalar(self.alg, 1)
        term = SuperElement.scalar(self.alg, 1)
        while True:
            term = term * (-n)
            if not term:
                break
            out = out + term
        return out * rinv

    def __truediv__(self, other):
        if isinstance(other, (int, GaussianRational)):
            return self * gr(other).inverse()
        return self * other.inverse()

    def exp_nilpotent(self) -> "SuperElement":
        if self.reduce():
            raise ValueError("exp is only defined here on nilpotents")
        out = SuperElement.scalar(self.alg, 1)
        term = SuperElement.scalar(self.alg, 1)
        k = 1
        while True:
            term = term * self * GaussianRational(Fraction(1, k))
            if not term:
                return out
            out = out + term
            k += 1

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for k in sorted(self.c):
            v = self.c[k]
            lab = self.alg.labels[k]
            if lab == "1":
                parts.append(str(v) if not (v.re and v.im) else f"({v})")
            elif v == 1:
                parts.append(lab)
            elif v == -1:
                parts.append("-" + lab)
            else:
                vs = f"({v})" if v.re and v.im else str(v)
                parts.append(f"{vs}*{lab}")
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def __repr__(self):
        return f"SuperElement({self})"


def gram_matrix(alg: LambdaAlgebra) -> list[list[SuperElement]]:
    """``berezin_top(e_a * e_c)`` for all basis pairs, as theta-free elements."""
    nm = alg.nmask
    rows = []
    for a in range(alg.dim):
        rows.append([SuperElement(alg, {k * nm: v for k, v in alg.pair_table[a][c]})
                     for c in range(alg.dim)])
    return rows


def span_elements(alg: LambdaAlgebra, vectors: Iterable[Mapping[int, object]]):
    return [SuperElement(alg, v) for v in vectors]
