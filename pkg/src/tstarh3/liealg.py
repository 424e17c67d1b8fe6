"""Fixed-basis Lie algebra arithmetic.

The distinguished object is the 6-dimensional two-step nilpotent algebra
obtained as the cotangent extension of the 3-dimensional Heisenberg
algebra.  In its standard basis (e1..e6) the nonzero brackets are

    [e1, e2] = e6,   [e1, e3] = -e5,   [e2, e3] = e4,

i.e. [e_i, e_j] = eps_ijk e_{3+k} with the totally antisymmetric symbol,
and the derived subalgebra coincides with the 3-dimensional center
span(e4, e5, e6).  Its automorphisms are block lower triangular,
F = [[A, 0], [B, A*]] with A* = det(A) A^{-T}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .linalg import Matrix, Vector
from .scalars import Backend, EXACT


class DimensionError(ValueError):
    pass


class JacobiError(ValueError):
    """Structure constants that fail the Jacobi identity."""


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants c[i][j][k]: [e_i, e_j] = sum_k c[i][j][k] e_k."""

    dim: int
    structure: tuple  # dense dim x dim x dim, antisymmetric in (i, j)

    def bracket(self, x: Vector, y: Vector) -> Vector:
        return bracket(self, x, y)

    def basis(self, i: int) -> Vector:
        return tuple(Fraction(1 if k == i else 0) for k in range(self.dim))

    def ad(self, x: Vector) -> Matrix:
        """Matrix of ad_x: y -> [x, y]."""
        n = self.dim
        cols = [bracket(self, x, self.basis(j)) for j in range(n)]
        return tuple(tuple(cols[j][k] for j in range(n)) for k in range(n))

    def derived_subalgebra(self) -> list[Vector]:
        span = linalg.SpanBuilder()
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                span.add(bracket(self, self.basis(i), self.basis(j)))
        return span.members

    def center(self) -> list[Vector]:
        rows = []
        for j in range(self.dim):
            adj = self.ad(self.basis(j))
            rows.extend(adj)
        # x central iff ad_x = 0; assemble ad as linear map of x
        n = self.dim
        sys_rows = []
        for j in range(n):       # bracket against e_j
            for k in range(n):   # output component k
                sys_rows.append(tuple(self.structure[i][j][k] for i in range(n)))
        return linalg.nullspace(linalg.mat(sys_rows))


def from_brackets(dim: int, rels: dict[tuple[int, int], dict[int, Fraction]],
                  check: bool = True) -> LieAlgebra:
    """Build from nonzero brackets {(i, j): {k: c}} on 0-based indices, i < j."""
    c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for (i, j), comps in rels.items():
        if not i < j:
            raise ValueError("bracket relations must use i < j")
        for k, val in comps.items():
            c[i][j][k] = Fraction(val)
            c[j][i][k] = -Fraction(val)
    alg = LieAlgebra(dim, tuple(tuple(tuple(r) for r in p) for p in c))
    if check and not jacobi_holds(alg):
        raise JacobiError("structure constants violate the Jacobi identity")
    return alg


def bracket(alg: LieAlgebra, x: Vector, y: Vector) -> Vector:
    if len(x) != alg.dim or len(y) != alg.dim:
        raise DimensionError(f"expected vectors of length {alg.dim}")
    n = alg.dim
    out = [x[0] * 0] * n
    for i in range(n):
        xi = x[i]
        if xi == 0:
            continue
        row = alg.structure[i]
        for j in range(n):
            yj = y[j]
            if yj == 0:
                continue
            cij = row[j]
            coeff = xi * yj
            for k in range(n):
                if cij[k] != 0:
                    out[k] = out[k] + coeff * cij[k]
    return tuple(out)


def jacobi_holds(alg: LieAlgebra, backend: Backend = EXACT) -> bool:
    n = alg.dim
    es = [alg.basis(i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = linalg.vadd(
                    linalg.vadd(
                        bracket(alg, es[i], bracket(alg, es[j], es[k])),
                        bracket(alg, es[j], bracket(alg, es[k], es[i]))),
                    bracket(alg, es[k], bracket(alg, es[i], es[j])))
                if any(not backend.is_zero(x) for x in s):
                    return False
    return True


def heisenberg3() -> LieAlgebra:
    """[x1, x2] = x3."""
    return from_brackets(3, {(0, 1): {2: Fraction(1)}})


def tstar_h3() -> LieAlgebra:
    """The canonical 6-dimensional cotangent-Heisenberg algebra."""
    one = Fraction(1)
    return from_brackets(6, {
        (0, 1): {5: one},      # [e1, e2] = e6
        (0, 2): {4: -one},     # [e1, e3] = -e5
        (1, 2): {3: one},      # [e2, e3] = e4
    })


def coadjoint(base: LieAlgebra, x: Vector, phi: Vector) -> Vector:
    """(ad*(x) phi)(y) = -phi([x, y]); phi given by dual coordinates."""
    if len(x) != base.dim or len(phi) != base.dim:
        raise DimensionError(f"expected vectors of length {base.dim}")
    out = []
    for j in range(base.dim):
        v = bracket(base, x, base.basis(j))
        out.append(-linalg.dot(phi, v))
    return tuple(out)


@dataclass(frozen=True)
class CotangentResult:
    algebra: LieAlgebra
    #: change of basis to the canonical tstar_h3 basis (columns are the
    #: new basis vectors expressed in the cotangent-construction basis),
    #: present when the base algebra is the standard Heisenberg algebra
    to_canonical: Matrix | None


def build_cotangent(base: LieAlgebra) -> CotangentResult:
    """Semidirect sum of base with its dual via the coadjoint action.

    Basis order: (x_1..x_n, x_1*..x_n*).  Brackets:
      [x_a, x_b]   = base bracket,
      [x_a, x_b*]  = ad*(x_a) x_b*,
      [x_a*, x_b*] = 0.
    """
    if not jacobi_holds(base):
        raise JacobiError("base algebra fails the Jacobi identity")
    n = base.dim
    rels: dict[tuple[int, int], dict[int, Fraction]] = {}
    for a in range(n):
        for b in range(a + 1, n):
            v = bracket(base, base.basis(a), base.basis(b))
            comps = {k: v[k] for k in range(n) if v[k] != 0}
            if comps:
                rels[(a, b)] = comps
    for a in range(n):
        for b in range(n):
            phi = coadjoint(base, base.basis(a), base.basis(b))
            comps = {n + k: phi[k] for k in range(n) if phi[k] != 0}
            if comps:
                rels[(a, n + b)] = comps
    alg = from_brackets(2 * n, rels)

    to_canonical = None
    if base.structure == heisenberg3().structure:
        # e1=x1, e2=x2, e3=x3*, e4=x1*, e5=x2*, e6=x3 (columns below)
        cols = [0, 1, 5, 3, 4, 2]
        to_canonical = tuple(tuple(Fraction(1 if cols[j] == i else 0)
                                   for j in range(6)) for i in range(6))
    return CotangentResult(alg, to_canonical)


@dataclass(frozen=True)
class Automorphism:
    """Block lower triangular automorphism of the cotangent-Heisenberg algebra."""

    matrix: Matrix

    @property
    def a_block(self) -> Matrix:
        return tuple(r[:3] for r in self.matrix[:3])

    @property
    def b_block(self) -> Matrix:
        return tuple(r[:3] for r in self.matrix[3:])

    @property
    def c_block(self) -> Matrix:
        return tuple(r[3:] for r in self.matrix[3:])

    def compose(self, other: "Automorphism") -> "Automorphism":
        return Automorphism(linalg.matmul(self.matrix, other.matrix))

    def inverse(self, backend: Backend = EXACT) -> "Automorphism":
        return Automorphism(linalg.inverse(self.matrix, backend))


def adjugate_transpose(a: Matrix, backend: Backend = EXACT) -> Matrix:
    """A* = det(A) A^{-T} for 3x3 A, computed as the cofactor matrix."""
    d = linalg.det(a, backend)
    if backend.is_zero(d):
        raise ZeroDivisionError("singular A block")
    return linalg.scale(linalg.transpose(linalg.inverse(a, backend)), d)


def make_automorphism(a: Matrix, b: Matrix, backend: Backend = EXACT) -> Automorphism:
    """F = [[A, 0], [B, A*]]; requires det A != 0."""
    astar = adjugate_transpose(a, backend)
    zero = linalg.zeros(3)
    top = tuple(tuple(a[i]) + tuple(zero[i]) for i in range(3))
    bottom = tuple(tuple(b[i]) + tuple(astar[i]) for i in range(3))
    return Automorphism(top + bottom)


def automorphism_from_c(c: Matrix, backend: Backend = EXACT,
                        b: Matrix | None = None) -> Automorphism:
    """Automorphism whose action on the derived subalgebra is C (det C > 0).

    A = sqrt(det C) C^{-T} satisfies A* = C; the square root forces the
    float backend unless det C is a perfect rational square.
    """
    d = linalg.det(c, backend)
    if float(d) <= 0:
        raise ValueError("det C must be positive to lift to an automorphism")
    s = backend.sqrt(d)
    a = linalg.scale(linalg.transpose(linalg.inverse(c, backend)), s)
    if b is None:
        b = linalg.zeros(3)
    f = make_automorphism(a, b, backend)
    return f


def is_automorphism(alg: LieAlgebra, f: Matrix, backend: Backend = EXACT) -> bool:
    n = alg.dim
    if linalg.dim(f) != (n, n):
        return False
    if backend.is_zero(linalg.det(f, backend)):
        return False
    for i in range(n):
        fi = tuple(f[k][i] for k in range(n))
        for j in range(i + 1, n):
            fj = tuple(f[k][j] for k in range(n))
            lhs = linalg.matvec(f, bracket(alg, alg.basis(i), alg.basis(j)))
            rhs = bracket(alg, fi, fj)
            if any(not backend.eq(x, y) for x, y in zip(lhs, rhs)):
                return False
    return True


def random_rational_matrix(rng: random.Random, lo: int = -3, hi: int = 3,
                           den: int = 2) -> Matrix:
    return tuple(tuple(Fraction(rng.randint(lo * den, hi * den), den)
                       for _ in range(3)) for _ in range(3))


def random_automorphism(rng: random.Random) -> Automorphism:
    """Random exact automorphism; A entries are small rationals, det A != 0."""
    while True:
        a = random_rational_matrix(rng)
        if linalg.det(a) != 0:
            break
    b = random_rational_matrix(rng)
    return make_automorphism(a, b)
