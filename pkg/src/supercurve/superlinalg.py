"""Exact linear algebra: sparse RREF, supermatrices and B-modules.

Vectors are sparse dicts ``column -> GaussianRational``.  Column order is the
integer order of the keys, so callers choose pivot priority by numbering
their coordinates.
"""
from __future__ import annotations

from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .scalars import ONE, ZERO, GaussianRational, gr
from .superalgebra import BaseAlgebra

__all__ = [
    "Subspace",
    "LinearSolver",
    "nullspace",
    "rank",
    "SuperMatrix",
    "det_even",
    "inverse_even",
    "berezinian",
    "BModuleRep",
    "kernel",
    "cokernel",
    "quotient",
    "submodule",
    "hom_dimension",
]

Vec = dict


def _axpy(y: Vec, a: GaussianRational, x: Mapping[int, GaussianRational]) -> None:
    """In place ``y += a*x`` dropping zeros."""
    for k, v in x.items():
        w = y.get(k)
        w = a * v if w is None else w + a * v
        if w:
            y[k] = w
        else:
            y.pop(k, None)


class Subspace:
    """Span of sparse vectors kept in fully reduced row echelon form.

    The pivot of a row is its smallest column.  Each row has a 1 at its
    pivot and zeros at every other pivot, so :meth:`reduce` is one pass.
    """

    def __init__(self, vectors: Iterable[Mapping[int, object]] = ()):
        self.rows: dict[int, Vec] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: Mapping[int, object]) -> Vec:
        r = {k: gr(x) for k, x in v.items() if x}
        hits = [k for k in r if k in self.rows]
        for k in hits:
            c = r.get(k)
            if c:
                _axpy(r, -c, self.rows[k])
        return r

    def add(self, v: Mapping[int, object]) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = r[p].inverse()
        r = {k: x * inv for k, x in r.items()}
        for row in self.rows.values():
            c = row.get(p)
            if c:
                _axpy(row, -c, r)
        self.rows[p] = r
        return True

    def contains(self, v) -> bool:
        return not self.reduce(v)

    def coords(self, v) -> dict[int, GaussianRational]:
        """Coordinates of ``v`` (in the span) on the rows, keyed by pivot."""
        if self.reduce(v):
            raise ValueError("vector is not in the subspace")
        return {p: gr(v[p]) for p in self.rows if v.get(p)}

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def basis(self) -> list[Vec]:
        return [self.rows[p] for p in self.pivots]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.rows == other.rows


class LinearSolver:
    """Incremental column space with tracked combinations for ``A x = y``."""

    def __init__(self):
        self.rows: dict[int, tuple[Vec, Vec]] = {}

    def add(self, v: Mapping[int, object], tag) -> bool:
        r = {k: gr(x) for k, x in v.items() if x}
        comb: Vec = {tag: ONE}
        for k in [k for k in r if k in self.rows]:
            c = r.get(k)
            if c:
                row, rc = self.rows[k]
                _axpy(r, -c, row)
                _axpy(comb, -c, rc)
        if not r:
            return False
        p = min(r)
        inv = r[p].inverse()
        r = {k: x * inv for k, x in r.items()}
        comb = {k: x * inv for k, x in comb.items()}
        for q, (row, rc) in self.rows.items():
            c = row.get(p)
            if c:
                _axpy(row, -c, r)
                _axpy(rc, -c, comb)
        self.rows[p] = (r, comb)
        return True

    def solve(self, y: Mapping[int, object]) -> Vec | None:
        r = {k: gr(x) for k, x in y.items() if x}
        sol: Vec = {}
        for k in [k for k in r if k in self.rows]:
            c = r.get(k)
            if c:
                row, rc = self.rows[k]
                _axpy(r, -c, row)
                _axpy(sol, c, rc)
        return None if r else sol


def nullspace(rows: Iterable[Mapping[int, object]], columns: Sequence[int]) -> list[Vec]:
    """Kernel of the matrix whose rows are given, on the listed columns."""
    S = Subspace(rows)
    piv = set(S.rows)
    out = []
    for j in columns:
        if j in piv:
            continue
        v = {j: ONE}
        for p, row in S.rows.items():
            c = row.get(j)
            if c:
                v[p] = -c
        out.append(v)
    return out


def rank(vectors: Iterable[Mapping[int, object]]) -> int:
    return Subspace(vectors).dim


# Supermatrices ----------------------------------------------------------------

def _one_like(x):
    return x * 0 + 1


def _zero_like(x):
    return x * 0


def _leibniz(M):
    n = len(M)
    total = _zero_like(M[0][0])
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = _one_like(M[0][0])
        for i in range(n):
            term = term * M[i][perm[i]]
            if not term:
                break
        if term:
            total = total - term if inv & 1 else total + term
    return total


def det_even(M: Sequence[Sequence]) -> object:
    """Determinant of a square matrix over the even (commutative) subring.

    Elimination uses unit pivots only, since nilpotent entries cannot be
    divided by.  A column without a unit is expanded by cofactors.
    """
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    if n <= 3:
        return _leibniz(M)
    A = [list(r) for r in M]
    sign = 1
    acc = _one_like(A[0][0])
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col].is_unit()), None)
        if piv is None:
            sub = [row[col:] for row in A[col:]]
            return acc * _cofactor_det(sub) * sign
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            sign = -sign
        p = A[col][col]
        pinv = p.inverse()
        acc = acc * p
        for r in range(col + 1, n):
            f = A[r][col]
            if not f:
                continue
            f = f * pinv
            for c in range(col, n):
                A[r][c] = A[r][c] - f * A[col][c]
    return acc * sign


def _cofactor_det(M):
    n = len(M)
    if n <= 3:
        return _leibniz(M)
    total = _zero_like(M[0][0])
    for r in range(n):
        if not M[r][0]:
            continue
        minor = [row[1:] for i, row in enumerate(M) if i != r]
        term = M[r][0] * det_even(minor)
        total = total - term if r & 1 else total + term
    return total


def inverse_even(M: Sequence[Sequence]) -> list[list]:
    """Gauss-Jordan inverse with unit pivots."""
    n = len(M)
    one = _one_like(M[0][0])
    zero = _zero_like(M[0][0])
    A = [list(M[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col].is_unit()), None)
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible (no unit pivot)")
        A[col], A[piv] = A[piv], A[col]
        pinv = A[col][col].inverse()
        A[col] = [pinv * x for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _matmul(X, Y):
    if not X or not Y:
        return []
    zero = _zero_like(X[0][0]) if X[0] else None
    out = []
    for row in X:
        new = []
        for j in range(len(Y[0])):
            acc = zero
            for k, x in enumerate(row):
                if x:
                    y = Y[k][j]
                    if y:
                        acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


class SuperMatrix:
    """A ``(p|q) x (p'|q')`` matrix with entries in a supercommutative ring.

    Rows and columns list the even indices first.  The matrix is *even*
    when the diagonal blocks are even and the off-diagonal blocks odd.
    """

    def __init__(self, rows: Sequence[Sequence], row_format: tuple[int, int],
                 col_format: tuple[int, int] | None = None):
        self.rows = [list(r) for r in rows]
        self.row_format = tuple(row_format)
        self.col_format = tuple(col_format or row_format)
        if len(self.rows) != sum(self.row_format):
            raise ValueError("row count does not match format")
        if any(len(r) != sum(self.col_format) for r in self.rows):
            raise ValueError("column count does not match format")

    def blocks(self):
        p, _q = self.row_format
        pc, _qc = self.col_format
        A = [r[:pc] for r in self.rows[:p]]
        B = [r[pc:] for r in self.rows[:p]]
        C = [r[:pc] for r in self.rows[p:]]
        D = [r[pc:] for r in self.rows[p:]]
        return A, B, C, D

    def is_even(self) -> bool:
        p, _ = self.row_format
        pc, _ = self.col_format
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                want = 0 if (i < p) == (j < pc) else 1
                par = x.parity()
                if x and par != want:
                    return False
        return True

    def __mul__(self, other: "SuperMatrix") -> "SuperMatrix":
        if self.col_format != other.row_format:
            raise ValueError("formats do not compose")
        return SuperMatrix(_matmul(self.rows, other.rows), self.row_format, other.col_format)

    def __eq__(self, other):
        return (isinstance(other, SuperMatrix) and self.row_format == other.row_format
                and self.col_format == other.col_format and self.rows == other.rows)

    def berezinian(self):
        return berezinian(self)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows)
        return f"SuperMatrix[{self.row_format}x{self.col_format}]({body})"


def berezinian(M: SuperMatrix):
    """``det(A - B D^-1 C) / det(D)`` for an even square supermatrix."""
    if M.row_format != M.col_format:
        raise ValueError("Berezinian needs a square format")
    if not M.is_even():
        raise ValueError("Berezinian needs an even supermatrix")
    A, B, C, D = M.blocks()
    p, q = M.row_format
    if q == 0:
        return det_even(A)
    Dinv = inverse_even(D)
    detD = det_even(D)
    if p == 0:
        return detD.inverse()
    S = _matmul(B, _matmul(Dinv, C))
    A2 = [[a - s for a, s in zip(ra, rs)] for ra, rs in zip(A, S)]
    return det_even(A2) * detD.inverse()


# B-modules ------------------------------------------------------------------

class BModuleRep:
    """A finite-dimensional graded module over a base algebra.

    ``action[b][j]`` is the sparse column giving ``e_b . m_j`` in the basis
    ``m``.  ``ambient`` optionally holds each basis vector in some larger
    coordinate space together with the coordinate labels.
    """

    def __init__(self, base: BaseAlgebra, parities: Sequence[int],
                 action: Mapping[int, Sequence[Mapping[int, GaussianRational]]],
                 ambient: Sequence[Mapping] | None = None, labels: Sequence | None = None):
        self.base = base
        self.parities = [int(p) & 1 for p in parities]
        self.action = {b: [dict(col) for col in cols] for b, cols in action.items()}
        self.ambient = list(ambient) if ambient is not None else None
        self.labels = list(labels) if labels is not None else None

    @property
    def dim(self) -> int:
        return len(self.parities)

    def dims(self) -> tuple[int, int]:
        ev = sum(1 for p in self.parities if not p)
        return ev, self.dim - ev

    def act(self, b: int, v: Mapping[int, GaussianRational]) -> Vec:
        out: Vec = {}
        cols = self.action[b]
        for j, c in v.items():
            _axpy(out, c, cols[j])
        return out

    def check(self) -> None:
        """Verify unit, associativity of the action and parity."""
        base = self.base
        for j in range(self.dim):
            if self.action[0][j] != {j: ONE}:
                raise ValueError("unit does not act as the identity")
        for b in range(base.dim):
            for j in range(self.dim):
                for i in self.action[b][j]:
                    if self.parities[i] != (self.parities[j] + base.parity[b]) & 1:
                        raise ValueError("action breaks parity")
        for b1 in range(1, base.dim):
            for b2 in range(1, base.dim):
                for j in range(self.dim):
                    lhs = self.act(b1, self.action[b2][j])
                    rhs: Vec = {}
                    for k, c in base.mul[b1][b2]:
                        _axpy(rhs, c, self.action[k][j])
                    if lhs != rhs:
                        raise ValueError("action is not associative")

    def minimal_generators(self) -> list[int]:
        """Basis indices whose classes span ``M / m M``."""
        mM = Subspace()
        for b in range(1, self.base.dim):
            for col in self.action[b]:
                mM.add(col)
        gens = []
        for j in range(self.dim):
            if mM.add({j: ONE}):
                gens.append(j)
        return gens

    def is_free(self) -> bool:
        return len(self.minimal_generators()) * self.base.dim == self.dim

    def summary(self) -> dict:
        ev, od = self.dims()
        gens = self.minimal_generators()
        return {
            "even": ev,
            "odd": od,
            "generators": len(gens),
            "free": len(gens) * self.base.dim == self.dim,
        }


def submodule(M: BModuleRep, vectors: Iterable[Mapping[int, object]]) -> BModuleRep:
    """The submodule spanned by B-stable ``vectors`` (in M's coordinates)."""
    S = Subspace(vectors)
    basis = S.basis()
    piv = S.pivots
    pos = {p: i for i, p in enumerate(piv)}
    parities = []
    for v in basis:
        ps = {M.parities[k] for k in v}
        if len(ps) != 1:
            raise ValueError("subspace is not graded")
        parities.append(ps.pop())
    action = {}
    for b in range(M.base.dim):
        cols = []
        for v in basis:
            w = M.act(b, v)
            if S.reduce(w):
                raise ValueError("subspace is not stable under the base algebra")
            cols.append({pos[p]: w[p] for p in piv if w.get(p)})
        action[b] = cols
    ambient = None
    if M.ambient is not None:
        ambient = []
        for v in basis:
            amb: Vec = {}
            for k, c in v.items():
                _axpy(amb, c, M.ambient[k])
            ambient.append(amb)
    return BModuleRep(M.base, parities, action, ambient, M.labels)


def quotient(M: BModuleRep, vectors: Iterable[Mapping[int, object]]) -> BModuleRep:
    """``M / span(vectors)`` with basis the non-pivot unit vectors."""
    S = Subspace(vectors)
    free = [j for j in range(M.dim) if j not in S.rows]
    pos = {j: i for i, j in enumerate(free)}
    action = {}
    for b in range(M.base.dim):
        cols = []
        for j in free:
            w = S.reduce(M.action[b][j])
            cols.append({pos[k]: c for k, c in w.items()})
        action[b] = cols
    ambient = None
    if M.ambient is not None:
        ambient = [M.ambient[j] for j in free]
    Q = BModuleRep(M.base, [M.parities[j] for j in free], action, ambient, M.labels)
    Q.representatives = free
    Q.relations = S
    return Q


def _check_linear(f: Sequence[Mapping[int, object]], M: BModuleRep, N: BModuleRep) -> None:
    for b in range(M.base.dim):
        for j in range(M.dim):
            lhs: Vec = {}
            for k, c in M.action[b][j].items():
                _axpy(lhs, c, f[k])
            rhs = N.act(b, {k: gr(v) for k, v in f[j].items()})
            if lhs != rhs:
                raise ValueError("map is not B-linear")


def kernel(f: Sequence[Mapping[int, object]], M: BModuleRep, N: BModuleRep) -> BModuleRep:
    """Kernel of the even B-linear map with columns ``f[j] = f(m_j)``."""
    _check_linear(f, M, N)
    rows: dict[int, Vec] = {}
    for j, col in enumerate(f):
        for i, c in col.items():
            if c:
                rows.setdefault(i, {})[j] = gr(c)
    return submodule(M, nullspace(rows.values(), range(M.dim)))


def cokernel(f: Sequence[Mapping[int, object]], M: BModuleRep, N: BModuleRep) -> BModuleRep:
    _check_linear(f, M, N)
    return quotient(N, f)


def hom_dimension(M: BModuleRep) -> tuple[int, int]:
    """Scalar dimensions (even, odd) of ``Hom_B(M, B)``.

    A homogeneous ``phi`` of parity ``p`` must satisfy
    ``phi(b m) = (-1)**(p|b|) b phi(m)``.
    """
    base = M.base
    out = []
    for p in (0, 1):
        unknowns = {}
        for j in range(M.dim):
            for c in range(base.dim):
                if base.parity[c] == (M.parities[j] + p) & 1:
                    unknowns[(j, c)] = len(unknowns)
        eqs = []
        for b in range(base.dim):
            sign = -1 if (p and base.parity[b]) else 1
            for j in range(M.dim):
                # sum_i M_b[i][j] phi(m_i) - sign * b * phi(m_j) = 0, one row per output c
                rows: dict[int, Vec] = {}
                for i, coef in M.action[b][j].items():
                    for c in range(base.dim):
                        u = unknowns.get((i, c))
                        if u is not None:
                            _axpy(rows.setdefault(c, {}), coef, {u: ONE})
                for c in range(base.dim):
                    u = unknowns.get((j, c))
                    if u is None:
                        continue
                    for k, s in base.mul[b][c]:
                        _axpy(rows.setdefault(k, {}), -s * sign, {u: ONE})
                eqs.extend(r for r in rows.values() if r)
        out.append(len(unknowns) - rank(eqs))
    return out[0], out[1]
