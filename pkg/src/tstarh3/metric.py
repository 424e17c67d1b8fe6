"""Metric matrices on the cotangent-Heisenberg algebra.

A left invariant metric is a nondegenerate symmetric 6x6 matrix in the
fixed basis (e1..e6).  Its restriction to the derived subalgebra
span(e4, e5, e6) can be brought, by an automorphism, to one of the
canonical 3x3 diagonal matrices E_pq (p positive, q negative directions,
zeros leading for the degenerate ones); the full matrix then takes the
block shape [[S, M], [M^T, E_pq]].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import math

from . import liealg, linalg
from .linalg import Matrix, Vector
from .scalars import Backend, EXACT, Scalar, as_fraction, scalar_to_json


class DegenerateMetricError(ValueError):
    pass


class NotSymmetricError(ValueError):
    pass


def _diag3(a, b, c) -> Matrix:
    return linalg.mat([[a, 0, 0], [0, b, 0], [0, 0, c]])


_F1 = Fraction(1)

#: canonical restriction matrices, keyed by name
E_MATRICES: dict[str, Matrix] = {
    "E30": _diag3(_F1, _F1, _F1),
    "E21": _diag3(_F1, _F1, -_F1),
    "E20": _diag3(0, _F1, _F1),
    "E11": _diag3(0, _F1, -_F1),
    "E10": _diag3(0, 0, _F1),
    "E00": _diag3(0, 0, 0),
    "E03": _diag3(-_F1, -_F1, -_F1),
    "E12": _diag3(-_F1, -_F1, _F1),
    "E02": _diag3(0, -_F1, -_F1),
    "E01": _diag3(0, 0, -_F1),
}

#: inertia (p, q) -> canonical name
_SIGNATURE_TO_E = {
    (3, 0): "E30", (2, 1): "E21", (2, 0): "E20", (1, 1): "E11",
    (1, 0): "E10", (0, 0): "E00", (0, 3): "E03", (1, 2): "E12",
    (0, 2): "E02", (0, 1): "E01",
}


def e_name_for_signature(p: int, q: int) -> str:
    return _SIGNATURE_TO_E[(p, q)]


@dataclass(frozen=True)
class Signature:
    pos: int
    neg: int
    null: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.pos, self.neg, self.null)


@dataclass(frozen=True)
class MetricMatrix:
    entries: Matrix
    backend: Backend = EXACT

    def __post_init__(self):
        n, m = linalg.dim(self.entries)
        if n != 6 or m != 6:
            raise NotSymmetricError("metric matrix must be 6x6")
        if not linalg.is_symmetric(self.entries, self.backend):
            raise NotSymmetricError("metric matrix must be symmetric")
        d = linalg.det(self.entries, self.backend)
        if self.backend.is_zero(d):
            raise DegenerateMetricError("metric matrix is degenerate")

    def inner(self, x: Vector, y: Vector) -> Scalar:
        return linalg.dot(x, linalg.matvec(self.entries, y))

    def dual(self, x: Vector) -> Vector:
        """Coordinates of the 1-form metrically dual to x."""
        return linalg.matvec(self.entries, x)

    def inverse(self) -> Matrix:
        return linalg.inverse(self.entries, self.backend)

    def to_json(self) -> list[list]:
        return [[scalar_to_json(x) for x in row] for row in self.entries]


def metric_from_rows(rows, backend: Backend = EXACT) -> MetricMatrix:
    conv = as_fraction if backend.exact else float
    return MetricMatrix(linalg.mat([[conv(x) for x in r] for r in rows]), backend)


def restrict_derived(g: MetricMatrix | Matrix) -> Matrix:
    m = g.entries if isinstance(g, MetricMatrix) else g
    return tuple(tuple(m[i][j] for j in range(3, 6)) for i in range(3, 6))


def blocks(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """(S, M, E) blocks of a 6x6 matrix."""
    s = tuple(tuple(m[i][j] for j in range(3)) for i in range(3))
    mm = tuple(tuple(m[i][j] for j in range(3, 6)) for i in range(3))
    e = restrict_derived(m)
    return s, mm, e


def assemble(s: Matrix, m: Matrix, e: Matrix) -> Matrix:
    mt = linalg.transpose(m)
    top = tuple(tuple(s[i]) + tuple(m[i]) for i in range(3))
    bottom = tuple(tuple(mt[i]) + tuple(e[i]) for i in range(3))
    return top + bottom


def congruence_diagonalize(sym: Matrix, backend: Backend = EXACT) -> tuple[Matrix, Matrix]:
    """P with P^T sym P diagonal, by symmetric Gaussian pivoting.

    Works over exact rationals without radicals; diagonal entries keep
    their own scales (no unit normalization here).
    """
    n, _ = linalg.dim(sym)
    a = [list(r) for r in sym]
    p = [list(r) for r in linalg.identity(n)]
    if not backend.exact:
        p = [[float(x) for x in r] for r in p]

    def col_op(dst: int, src: int, f):
        # basis change e_dst <- e_dst + f e_src, i.e. column op + row op on a
        for i in range(n):
            a[i][dst] += f * a[i][src]
        for j in range(n):
            a[dst][j] += f * a[src][j]
        for i in range(n):
            p[i][dst] += f * p[i][src]

    def col_swap(i: int, j: int):
        for r in a:
            r[i], r[j] = r[j], r[i]
        a[i], a[j] = a[j], a[i]
        for r in p:
            r[i], r[j] = r[j], r[i]

    scale_ref = max(1.0, max(abs(float(x)) for r in sym for x in r))

    def is_zero(x) -> bool:
        if backend.exact:
            return x == 0
        return abs(float(x)) <= backend.tol * scale_ref

    for k in range(n):
        if is_zero(a[k][k]):
            swap = next((j for j in range(k + 1, n) if not is_zero(a[j][j])), None)
            if swap is not None:
                col_swap(k, swap)
            else:
                off = next((j for j in range(k + 1, n) if not is_zero(a[k][j])), None)
                if off is None:
                    continue
                col_op(k, off, 1)
        piv = a[k][k]
        for j in range(k + 1, n):
            if not is_zero(a[k][j]):
                col_op(j, k, -a[k][j] / piv)
    # zero out numerical dust off the diagonal
    d = tuple(tuple(a[i][j] if i == j else a[i][j] * 0 for j in range(n)) for i in range(n))
    return linalg.mat(p), d


def signature(sym: Matrix, backend: Backend = EXACT) -> Signature:
    n, m = linalg.dim(sym)
    if n != m or not linalg.is_symmetric(sym, backend):
        raise NotSymmetricError("signature needs a symmetric matrix")
    _, d = congruence_diagonalize(sym, backend)
    scale_ref = max(1.0, max(abs(float(d[i][i])) for i in range(n)))
    pos = neg = null = 0
    for i in range(n):
        v = d[i][i]
        if (backend.exact and v == 0) or (not backend.exact and abs(float(v)) <= backend.tol * scale_ref):
            null += 1
        elif v > 0:
            pos += 1
        else:
            neg += 1
    return Signature(pos, neg, null)


def _pattern_for_e(name: str) -> tuple[int, ...]:
    e = E_MATRICES[name]
    return tuple(int(e[i][i]) for i in range(3))


def normalizing_congruence(sym: Matrix, backend: Backend = EXACT) -> tuple[Matrix, str]:
    """C with C^T sym C = E_pq exactly matching the inertia, det C > 0.

    Unit scalings may introduce square roots; exactness survives only for
    perfect-square pivots.
    """
    p0, d = congruence_diagonalize(sym, backend)
    vals = [d[i][i] for i in range(3)]
    scale_ref = max(1.0, max(abs(float(v)) for v in vals))

    def cls(v) -> int:
        if (backend.exact and v == 0) or (not backend.exact and abs(float(v)) <= backend.tol * scale_ref):
            return 0
        return 1 if v > 0 else -1

    classes = [cls(v) for v in vals]
    sig = (classes.count(1), classes.count(-1))
    name = e_name_for_signature(*sig)
    pattern = _pattern_for_e(name)
    # choose a permutation sending computed classes onto the target pattern
    remaining = list(range(3))
    perm = []
    for want in pattern:
        idx = next(i for i in remaining if classes[i] == want)
        remaining.remove(idx)
        perm.append(idx)
    cols = list(zip(*p0))  # columns of p0
    new_cols = []
    for j, src in enumerate(perm):
        col = cols[src]
        v = vals[src]
        if classes[src] != 0:
            s = backend.sqrt(abs(v) if isinstance(v, Fraction) else abs(float(v)))
            col = tuple(x / s for x in col)
        new_cols.append(col)
    c = linalg.transpose(linalg.mat(new_cols))
    if float(linalg.det(c, backend)) < 0:
        # flipping one column's sign preserves the diagonal congruence result
        c = linalg.transpose(linalg.mat([tuple(-x for x in new_cols[0])] + new_cols[1:]))
    return c, name


@dataclass(frozen=True)
class BlockForm:
    s: Matrix
    m: Matrix
    e_name: str
    f_used: liealg.Automorphism

    @property
    def e(self) -> Matrix:
        return E_MATRICES[self.e_name]

    def assembled(self) -> Matrix:
        return assemble(self.s, self.m, self.e)


def block_normalize(g: MetricMatrix) -> BlockForm:
    """Bring the restriction to its canonical E_pq; clear M when E is nondegenerate."""
    backend = g.backend
    sp = restrict_derived(g)
    c, name = normalizing_congruence(sp, backend)
    e = E_MATRICES[name]
    work_backend = backend if not _has_float(c) else _float_of(backend)
    f1 = liealg.automorphism_from_c(c, work_backend)
    g1 = linalg.congruence(g.entries, f1.matrix)
    f_total = f1
    p, q = name_signature(name)
    if p + q == 3:
        _, m1, _ = blocks(g1)
        e_inv = linalg.inverse(e)
        b = linalg.scale(linalg.matmul(e_inv, linalg.transpose(m1)), -1)
        f2 = liealg.make_automorphism(linalg.identity(3), b, work_backend)
        g1 = linalg.congruence(g1, f2.matrix)
        f_total = f_total.compose(f2)
    s, m, _ = blocks(g1)
    if p + q == 3:
        m = linalg.zeros(3) if not _has_float(m) else linalg.mat([[0.0] * 3] * 3)
    return BlockForm(s, m, name, f_total)


def name_signature(name: str) -> tuple[int, int]:
    for sig, n in _SIGNATURE_TO_E.items():
        if n == name:
            return sig
    raise KeyError(name)


def _has_float(m: Matrix) -> bool:
    return any(isinstance(x, float) for r in m for x in r)


def _float_of(backend: Backend) -> Backend:
    from .scalars import float_backend, DEFAULT_TOL
    return backend if not backend.exact else float_backend(DEFAULT_TOL)
