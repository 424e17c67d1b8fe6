"""Small dense linear algebra over an exact or float scalar field.

Matrices are immutable tuples of tuples.  All pivoting decisions go through
a ``Backend`` so the same elimination code serves Fraction and float
entries; sizes here are at most 6x6 (plus operator spans of dimension 36),
so clarity beats asymptotics throughout.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .scalars import Backend, EXACT, Scalar

Matrix = tuple[tuple[Scalar, ...], ...]
Vector = tuple[Scalar, ...]


def mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def vec(entries: Sequence) -> Vector:
    return tuple(entries)


def mat_fractions(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def dim(a: Matrix) -> tuple[int, int]:
    return len(a), len(a[0]) if a else 0


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(a: Matrix, c: Scalar) -> Matrix:
    return tuple(tuple(c * x for x in r) for r in a)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(ra, cb)) for cb in bt) for ra in a)


def matmul_chain(*ms: Matrix) -> Matrix:
    out = ms[0]
    for m in ms[1:]:
        out = matmul(out, m)
    return out


def matvec(a: Matrix, v: Vector) -> Vector:
    return tuple(sum(x * y for x, y in zip(r, v)) for r in a)


def vecmat(v: Vector, a: Matrix) -> Vector:
    return matvec(transpose(a), v)


def dot(u: Vector, v: Vector) -> Scalar:
    return sum(x * y for x, y in zip(u, v))


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vscale(v: Vector, c: Scalar) -> Vector:
    return tuple(c * x for x in v)


def outer(u: Vector, v: Vector) -> Matrix:
    return tuple(tuple(x * y for y in v) for x in u)


def is_symmetric(a: Matrix, backend: Backend = EXACT) -> bool:
    n, m = dim(a)
    if n != m:
        return False
    return all(backend.eq(a[i][j], a[j][i]) for i in range(n) for j in range(i))


def symmetrize(a: Matrix) -> Matrix:
    n, _ = dim(a)
    half = Fraction(1, 2) if isinstance(a[0][0], Fraction) else 0.5
    return tuple(tuple((a[i][j] + a[j][i]) * half for j in range(n)) for i in range(n))


def congruence(g: Matrix, f: Matrix) -> Matrix:
    """f^T g f."""
    return matmul(transpose(f), matmul(g, f))


def max_abs(a: Matrix) -> float:
    return max(abs(float(x)) for r in a for x in r)


def _pivot_row(col, start: int, backend: Backend):
    """Best pivot index in col[start:], or None if all are (near) zero."""
    best, best_val = None, 0.0
    for i in range(start, len(col)):
        v = abs(float(col[i]))
        if v > best_val:
            best, best_val = i, v
    if best is None or backend.is_zero(col[best]):
        return None
    return best


def det(a: Matrix, backend: Backend = EXACT) -> Scalar:
    n, m = dim(a)
    assert n == m
    rows = [list(r) for r in a]
    out = rows[0][0] - rows[0][0] + 1  # one of the right scalar type
    sign = 1
    for k in range(n):
        p = _pivot_row([rows[i][k] for i in range(n)], k, backend)
        if p is None:
            return out * 0
        if p != k:
            rows[k], rows[p] = rows[p], rows[k]
            sign = -sign
        piv = rows[k][k]
        out = out * piv
        for i in range(k + 1, n):
            f = rows[i][k] / piv
            if f == 0:
                continue
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[k])]
    return out * sign


def solve(a: Matrix, b: Vector, backend: Backend = EXACT) -> Vector:
    """Solve a x = b for square nonsingular a."""
    n, m = dim(a)
    assert n == m and len(b) == n
    rows = [list(r) + [bv] for r, bv in zip(a, b)]
    for k in range(n):
        p = _pivot_row([rows[i][k] for i in range(n)], k, backend)
        if p is None:
            raise ZeroDivisionError("singular matrix in solve")
        rows[k], rows[p] = rows[p], rows[k]
        piv = rows[k][k]
        rows[k] = [x / piv for x in rows[k]]
        for i in range(n):
            if i != k and rows[i][k] != 0:
                f = rows[i][k]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[k])]
    return tuple(r[n] for r in rows)


def _any_float(a: Matrix) -> bool:
    return any(isinstance(x, float) for r in a for x in r)


def inverse(a: Matrix, backend: Backend = EXACT) -> Matrix:
    n, m = dim(a)
    assert n == m
    one = 1.0 if _any_float(a) else Fraction(1)
    rows = [list(r) + [one * (i == j) for j in range(n)] for i, r in enumerate(a)]
    for k in range(n):
        p = _pivot_row([rows[i][k] for i in range(n)], k, backend)
        if p is None:
            raise ZeroDivisionError("singular matrix in inverse")
        rows[k], rows[p] = rows[p], rows[k]
        piv = rows[k][k]
        rows[k] = [x / piv for x in rows[k]]
        for i in range(n):
            if i != k and rows[i][k] != 0:
                f = rows[i][k]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[k])]
    return tuple(tuple(r[n:]) for r in rows)


def rref(a: Matrix, backend: Backend = EXACT) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    n, m = dim(a)
    rows = [list(r) for r in a]
    pivots: list[int] = []
    r = 0
    for c in range(m):
        if r == n:
            break
        p = _pivot_row([rows[i][c] for i in range(n)], r, backend)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(n):
            if i != r and not backend.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in rows), pivots


def rank(a: Matrix, backend: Backend = EXACT) -> int:
    _, pivots = rref(a, backend)
    return len(pivots)


def nullspace(a: Matrix, backend: Backend = EXACT) -> list[Vector]:
    """Basis of the right kernel of a."""
    n, m = dim(a)
    red, pivots = rref(a, backend)
    free = [c for c in range(m) if c not in pivots]
    one = 1.0 if _any_float(a) else Fraction(1)
    basis = []
    for fc in free:
        v = [one * 0] * m
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return basis


def row_space_coords(basis: list[Vector], v: Vector, backend: Backend = EXACT):
    """Coordinates of v in span(basis), or None if v is outside the span."""
    if not basis:
        return None if any(not backend.is_zero(x) for x in v) else ()
    a = transpose(mat(basis))  # columns are basis vectors
    n, m = dim(a)
    aug = [list(r) + [v[i]] for i, r in enumerate(a)]
    red, pivots = rref(mat(aug), backend)
    # inconsistent if a pivot lands in the last column
    if m in pivots:
        return None
    coords = [red[r][m] for r in range(len(pivots))]
    out = [basis[0][0] * 0] * len(basis)
    for r, pc in enumerate(pivots):
        out[pc] = coords[r]
    return tuple(out)


class SpanBuilder:
    """Incremental linearly independent span of flattened vectors."""

    def __init__(self, backend: Backend = EXACT):
        self.backend = backend
        self.rows: list[list[Scalar]] = []  # rref'd rows
        self.members: list[Vector] = []     # original vectors, independent

    def _reduce(self, v: Vector) -> list[Scalar]:
        w = list(v)
        for row in self.rows:
            lead = next(i for i, x in enumerate(row) if not self.backend.is_zero(x))
            if not self.backend.is_zero(w[lead]):
                f = w[lead] / row[lead]
                w = [x - f * y for x, y in zip(w, row)]
        return w

    def contains(self, v: Vector) -> bool:
        w = self._reduce(v)
        return all(self.backend.is_zero(x) for x in w)

    def add(self, v: Vector) -> bool:
        """Add v if independent; returns True when the span grew."""
        w = self._reduce(v)
        if all(self.backend.is_zero(x) for x in w):
            return False
        self.rows.append(w)
        self.members.append(v)
        return True

    @property
    def dimension(self) -> int:
        return len(self.rows)


def flatten(a: Matrix) -> Vector:
    return tuple(x for r in a for x in r)


def unflatten(v: Vector, n: int, m: int) -> Matrix:
    return tuple(tuple(v[i * m + j] for j in range(m)) for i in range(n))
