"""Parallel fields, pp-waves, algebraic Ricci solitons, pseudo-Kahler data.

A left invariant field x is parallel iff x is orthogonal to the derived
subalgebra and ad*_x = -ad_x; on this algebra every nonzero parallel field
is null.  An algebraic Ricci soliton certificate is an exact solution of
Ric = gamma Id + D with D a derivation.  The canonical complex structure
is J e1 = e2, J e3 = -e6, J e4 = e5; compatible closed 2-forms make a
five-parameter family whose induced metrics <x,y> = Omega(Jx, y) are the
pseudo-Kahler metrics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import curvature as curv
from . import linalg
from .liealg import LieAlgebra
from .linalg import Matrix, Vector
from .metric import MetricMatrix
from .scalars import Backend, Scalar


@dataclass(frozen=True)
class ParallelSpace:
    basis: list[Vector]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def parallel_fields(alg: LieAlgebra, g: MetricMatrix) -> ParallelSpace:
    backend = g.backend
    n = alg.dim
    rows = []
    # x orthogonal to the derived subalgebra
    for w in alg.derived_subalgebra():
        rows.append(linalg.matvec(g.entries, w))
    # ad_x^T g + g ad_x = 0, linear in x
    for r in range(n):
        for c in range(n):
            row = []
            for i in range(n):
                ad_i = alg.ad(alg.basis(i))
                v = sum(ad_i[k][r] * g.entries[k][c] for k in range(n)) \
                    + sum(g.entries[r][k] * ad_i[k][c] for k in range(n))
                row.append(v)
            rows.append(tuple(row))
    basis = linalg.nullspace(linalg.mat(rows), backend)
    return ParallelSpace(basis)


@dataclass(frozen=True)
class PPWaveResult:
    is_pp_wave: bool
    witness: Vector | None


def pp_wave_check(alg: LieAlgebra, g: MetricMatrix) -> PPWaveResult:
    backend = g.backend
    par = parallel_fields(alg, g)
    if par.dimension == 0:
        return PPWaveResult(False, None)
    rt = curv.curvature(curv.levi_civita(alg, g))

    def works(v: Vector) -> bool:
        if all(backend.is_zero(x) for x in v):
            return False
        row = linalg.matvec(g.entries, v)
        perp = linalg.nullspace(linalg.mat([row]), backend)
        for u, w in itertools.combinations(perp, 2):
            op = rt.operator(u, w)
            scale = max(1.0, linalg.max_abs(op) if not backend.exact else 1.0)
            if any(not backend.is_zero(x / scale if not backend.exact else x)
                   for r in op for x in r):
                return False
        return True

    # dimension 1: direct check; otherwise a small rational grid of directions
    if par.dimension == 1:
        candidates = [par.basis[0]]
    else:
        coeff_grid = [Fraction(c) for c in (-2, -1, 0, 1, 2)]
        candidates = []
        for coeffs in itertools.product(coeff_grid, repeat=par.dimension):
            if all(c == 0 for c in coeffs):
                continue
            v = tuple(sum(c * b[k] for c, b in zip(coeffs, par.basis))
                      for k in range(alg.dim))
            candidates.append(v)
    for v in candidates:
        if works(v):
            return PPWaveResult(True, v)
    return PPWaveResult(False, None)


def derivations(alg: LieAlgebra, backend: Backend = None) -> list[Matrix]:
    """Basis of all D with D[x,y] = [Dx,y] + [x,Dy]."""
    from .scalars import EXACT
    backend = backend or EXACT
    n = alg.dim
    rows = []
    es = [alg.basis(i) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            br = alg.bracket(es[i], es[j])
            for k in range(n):
                # coefficient of unknown D_{ab} in component k of
                # D[e_i,e_j] - [De_i, e_j] - [e_i, De_j]
                row = []
                for a in range(n):
                    for b in range(n):
                        coeff = Fraction(0)
                        # D[e_i,e_j]_k = sum_b D_{kb} br_b
                        if a == k:
                            coeff += br[b]
                        # [De_i, e_j]_k = sum_a D_{a i} [e_a, e_j]_k
                        if b == i:
                            coeff -= alg.structure[a][j][k]
                        # [e_i, De_j]_k = sum_a D_{a j} [e_i, e_a]_k
                        if b == j:
                            coeff -= alg.structure[i][a][k]
                        row.append(coeff)
                rows.append(tuple(row))
    basis = linalg.nullspace(linalg.mat(rows), backend)
    return [linalg.unflatten(v, n, n) for v in basis]


@dataclass(frozen=True)
class SolitonCertificate:
    gamma: Scalar
    derivation: Matrix
    kind: str  # shrinking | steady | expanding


def ricci_operator(alg: LieAlgebra, g: MetricMatrix) -> Matrix:
    rt = curv.curvature(curv.levi_civita(alg, g))
    return linalg.matmul(g.inverse(), rt.ricci)


def nilsoliton(alg: LieAlgebra, g: MetricMatrix) -> SolitonCertificate | None:
    """Solve Ric = gamma Id + D over (gamma, derivation coordinates)."""
    backend = g.backend
    n = alg.dim
    ric = ricci_operator(alg, g)
    der_basis = derivations(alg, backend)
    # unknowns: gamma, c_1..c_m; equations: gamma I + sum c_t D_t = Ric
    m = len(der_basis)
    rows = []
    rhs = []
    for i in range(n):
        for j in range(n):
            row = [Fraction(1 if i == j else 0) if backend.exact else float(i == j)]
            row.extend(d[i][j] for d in der_basis)
            rows.append(tuple(row))
            rhs.append(ric[i][j])
    aug = linalg.mat([list(r) + [b] for r, b in zip(rows, rhs)])
    red, pivots = linalg.rref(aug, backend)
    if (m + 1) in pivots:
        return None  # inconsistent: no certificate
    sol = [Fraction(0) if backend.exact else 0.0] * (m + 1)
    for r, pc in enumerate(pivots):
        sol[pc] = red[r][m + 1]
    gamma = sol[0]
    d = linalg.zeros(n) if backend.exact else linalg.mat([[0.0] * n] * n)
    for c, db in zip(sol[1:], der_basis):
        if c != 0:
            d = linalg.add(d, linalg.scale(db, c))
    if backend.is_zero(gamma):
        kind = "steady"
    elif gamma > 0:
        kind = "shrinking"
    else:
        kind = "expanding"
    return SolitonCertificate(gamma, d, kind)


def is_ad_invariant(alg: LieAlgebra, g: MetricMatrix) -> bool:
    """<[x,y],z> = -<y,[x,z]> on all basis triples."""
    backend = g.backend
    n = alg.dim
    es = [alg.basis(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = g.inner(alg.bracket(es[i], es[j]), es[k])
                rhs = -g.inner(es[j], alg.bracket(es[i], es[k]))
                if not backend.eq(lhs, rhs):
                    return False
    return True


# --- complex and symplectic structures -------------------------------------

def canonical_complex_structure() -> Matrix:
    """J e1 = e2, J e2 = -e1, J e3 = -e6, J e6 = e3, J e4 = e5, J e5 = -e4."""
    j = [[0] * 6 for _ in range(6)]
    pairs = [(0, 1), (5, 2), (3, 4)]  # J maps first to second's column pattern
    # columns: J(e1)=e2, J(e2)=-e1, J(e3)=-e6, J(e6)=e3, J(e4)=e5, J(e5)=-e4
    j[1][0] = 1
    j[0][1] = -1
    j[5][2] = -1
    j[2][5] = 1
    j[4][3] = 1
    j[3][4] = -1
    return linalg.mat_fractions(j)


def nijenhuis(alg: LieAlgebra, j: Matrix) -> dict[tuple[int, int], Vector]:
    """N(x,y) = [x,y] - [Jx,Jy] + J[Jx,y] + J[x,Jy] on basis pairs."""
    n = alg.dim
    out = {}
    for a in range(n):
        for b in range(a + 1, n):
            x, y = alg.basis(a), alg.basis(b)
            jx, jy = linalg.matvec(j, x), linalg.matvec(j, y)
            val = linalg.vsub(alg.bracket(x, y), alg.bracket(jx, jy))
            val = linalg.vadd(val, linalg.matvec(j, alg.bracket(jx, y)))
            val = linalg.vadd(val, linalg.matvec(j, alg.bracket(x, jy)))
            out[(a + 1, b + 1)] = val
    return out


def is_integrable(alg: LieAlgebra, j: Matrix, backend: Backend) -> bool:
    return all(all(backend.is_zero(x) for x in v) for v in nijenhuis(alg, j).values())


def is_hermitian(g: MetricMatrix, j: Matrix) -> bool:
    backend = g.backend
    lhs = linalg.congruence(g.entries, j)
    return all(backend.eq(lhs[a][b], g.entries[a][b]) for a in range(6) for b in range(6))


@dataclass(frozen=True)
class SymplecticForm:
    omega: Matrix  # antisymmetric 6x6, Omega(x, y) = x^T omega y
    params: tuple  # (a12, a13, a14, a15, a16)


def symplectic_family(a12, a13, a14, a15, a16, backend: Backend = None) -> SymplecticForm:
    """Closed J-compatible 2-forms; nondegenerate iff a14 != 0."""
    from .scalars import EXACT
    backend = backend or EXACT
    conv = (lambda x: Fraction(x)) if backend.exact else float
    a12, a13, a14, a15, a16 = map(conv, (a12, a13, a14, a15, a16))
    if backend.is_zero(a14):
        raise ValueError("a14 must be nonzero for a nondegenerate form")
    w = [[conv(0)] * 6 for _ in range(6)]

    def put(i, j, v):
        w[i - 1][j - 1] = w[i - 1][j - 1] + v
        w[j - 1][i - 1] = w[j - 1][i - 1] - v

    put(1, 2, a12)
    put(1, 3, a13)
    put(2, 6, -a13)
    put(1, 4, a14)
    put(2, 5, a14)
    put(3, 6, -2 * a14)
    put(1, 5, a15)
    put(2, 4, -a15)
    put(1, 6, a16)
    put(2, 3, a16)
    return SymplecticForm(linalg.mat(w), (a12, a13, a14, a15, a16))


def is_closed(alg: LieAlgebra, omega: Matrix, backend: Backend) -> bool:
    """d Omega = 0 via the cyclic sum Omega([x,y],z) + Omega([y,z],x) + Omega([z,x],y)."""
    n = alg.dim
    es = [alg.basis(i) for i in range(n)]

    def om(u, v):
        return linalg.dot(u, linalg.matvec(omega, v))

    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = om(alg.bracket(es[i], es[j]), es[k]) \
                    + om(alg.bracket(es[j], es[k]), es[i]) \
                    + om(alg.bracket(es[k], es[i]), es[j])
                if not backend.is_zero(s):
                    return False
    return True


def pseudo_kahler_metric(omega: SymplecticForm, j: Matrix,
                         backend: Backend = None) -> MetricMatrix:
    """<x, y> = Omega(Jx, y)."""
    from .scalars import EXACT
    backend = backend or EXACT
    m = linalg.matmul(linalg.transpose(j), omega.omega)
    if not linalg.is_symmetric(m, backend):
        raise ValueError("the induced bilinear form is not symmetric")
    return MetricMatrix(m, backend)


def covariant_derivative_j(alg: LieAlgebra, g: MetricMatrix, j: Matrix):
    """Table of (nabla_{e_k} J) = nabla_k o J - J o nabla_k."""
    conn = curv.levi_civita(alg, g)
    out = []
    for k in range(alg.dim):
        op = conn.operator(alg.basis(k))
        out.append(linalg.sub(linalg.matmul(op, j), linalg.matmul(j, op)))
    return tuple(out)


def is_pseudo_kahler(alg: LieAlgebra, g: MetricMatrix, j: Matrix) -> bool:
    """nabla J = 0 and the associated 2-form Omega(x,y) = <Jx, y> is closed."""
    backend = g.backend
    scale = max(1.0, linalg.max_abs(g.entries))
    for dj in covariant_derivative_j(alg, g, j):
        for r in dj:
            for x in r:
                if backend.exact:
                    if x != 0:
                        return False
                elif abs(float(x)) > backend.tol * scale:
                    return False
    omega = linalg.matmul(linalg.transpose(j), g.entries)
    omega = linalg.scale(linalg.sub(omega, linalg.transpose(omega)),
                         Fraction(1, 2) if backend.exact else 0.5)
    return is_closed(alg, omega, backend)
