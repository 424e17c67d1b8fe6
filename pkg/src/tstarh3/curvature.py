"""Levi-Civita connection, curvature, Ricci and the flatness predicates.

On a left invariant frame the Koszul formula collapses to

    2 <nabla_x y, z> = <[x,y],z> - <[y,z],x> + <[z,x],y>,

curvature follows the convention R(x,y)z = nabla_x nabla_y z -
nabla_y nabla_x z - nabla_{[x,y]} z, and the Ricci tensor is
rho(x,y) = Tr(z -> R(z,x)y).  Everything is computed twice: from the
definition and from the nilpotent-algebra operator identities

    R(x,y) = 1/2 (j_{[x,y]} + [j_x, ad*_y] + [ad*_x, j_y])
             - 1/4 ([phi_x, phi_y] + [j_x, phi_y] + [phi_x, j_y] - [j_x, j_y]),
    rho(x,y) = -1/4 tr(j_x j_y) - 1/2 tr(ad_x ad*_y),

with ad*, j and phi the metric adjoint operators; a mismatch raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import liealg, linalg
from .liealg import LieAlgebra
from .linalg import Matrix, Vector
from .metric import MetricMatrix
from .scalars import Backend, Scalar


class CrossCheckError(AssertionError):
    """The two curvature computation paths disagreed."""


def _half(backend: Backend) -> Scalar:
    return Fraction(1, 2) if backend.exact else 0.5


@dataclass(frozen=True)
class Connection:
    alg: LieAlgebra
    g: MetricMatrix
    gamma: tuple  # gamma[i][j] = nabla_{e_i} e_j as a 6-vector

    def nabla(self, x: Vector, y: Vector) -> Vector:
        """nabla_x y for left invariant x, y (bilinear over the scalars)."""
        n = self.alg.dim
        out = [x[0] * 0] * n
        for i in range(n):
            if x[i] == 0:
                continue
            for j in range(n):
                if y[j] == 0:
                    continue
                c = x[i] * y[j]
                gij = self.gamma[i][j]
                for k in range(n):
                    if gij[k] != 0:
                        out[k] = out[k] + c * gij[k]
        return tuple(out)

    def operator(self, w: Vector) -> Matrix:
        """Matrix of y -> nabla_w y."""
        n = self.alg.dim
        cols = [self.nabla(w, self.alg.basis(j)) for j in range(n)]
        return tuple(tuple(cols[j][k] for j in range(n)) for k in range(n))


def levi_civita(alg: LieAlgebra, g: MetricMatrix) -> Connection:
    backend = g.backend
    n = alg.dim
    half = _half(backend)
    es = [alg.basis(i) for i in range(n)]
    ginv = g.inverse()
    gamma = []
    for i in range(n):
        row = []
        for j in range(n):
            w = []
            for k in range(n):
                t = (g.inner(alg.bracket(es[i], es[j]), es[k])
                     - g.inner(alg.bracket(es[j], es[k]), es[i])
                     + g.inner(alg.bracket(es[k], es[i]), es[j]))
                w.append(half * t)
            row.append(linalg.matvec(ginv, tuple(w)))
        gamma.append(tuple(row))
    return Connection(alg, g, tuple(gamma))


@dataclass(frozen=True)
class MetricAdjointOps:
    ad: tuple      # ad_{e_i}
    ad_star: tuple  # metric adjoint of ad_{e_i}
    j: tuple       # j_{e_i}: y -> ad*_y e_i
    phi: tuple     # ad + ad*


def metric_adjoint_ops(alg: LieAlgebra, g: MetricMatrix) -> MetricAdjointOps:
    n = alg.dim
    ginv = g.inverse()
    ad = [alg.ad(alg.basis(i)) for i in range(n)]
    ad_star = [linalg.matmul(ginv, linalg.matmul(linalg.transpose(a), g.entries))
               for a in ad]
    j = []
    for i in range(n):
        ei = alg.basis(i)
        cols = [linalg.matvec(ad_star[k], ei) for k in range(n)]
        j.append(tuple(tuple(cols[c][r] for c in range(n)) for r in range(n)))
    phi = [linalg.add(a, s) for a, s in zip(ad, ad_star)]
    return MetricAdjointOps(tuple(ad), tuple(ad_star), tuple(j), tuple(phi))


def _comm(a: Matrix, b: Matrix) -> Matrix:
    return linalg.sub(linalg.matmul(a, b), linalg.matmul(b, a))


@dataclass(frozen=True)
class CurvatureTensor:
    alg: LieAlgebra
    g: MetricMatrix
    conn: Connection
    r: tuple          # r[i][j] = R(e_i, e_j) as a 6x6 operator
    ricci: Matrix
    scalar: Scalar

    def operator(self, x: Vector, y: Vector) -> Matrix:
        n = self.alg.dim
        out = linalg.zeros(n) if isinstance(x[0], Fraction) else linalg.mat([[0.0] * n] * n)
        for i in range(n):
            for j in range(n):
                c = x[i] * y[j]
                if c != 0:
                    out = linalg.add(out, linalg.scale(self.r[i][j], c))
        return out

    def max_abs(self) -> float:
        return max(abs(float(x)) for row_ops in self.r for op in row_ops for r in op for x in r)


def curvature(conn: Connection) -> CurvatureTensor:
    alg, g = conn.alg, conn.g
    backend = g.backend
    n = alg.dim
    es = [alg.basis(i) for i in range(n)]
    ops = [conn.operator(es[i]) for i in range(n)]

    def nabla_op(v: Vector) -> Matrix:
        out = linalg.scale(ops[0], v[0])
        for k in range(1, n):
            if v[k] != 0:
                out = linalg.add(out, linalg.scale(ops[k], v[k]))
        return out

    r_def = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            br = alg.bracket(es[i], es[j])
            r_def[i][j] = linalg.sub(_comm(ops[i], ops[j]), nabla_op(br))

    # operator-identity path
    aux = metric_adjoint_ops(alg, g)
    half = _half(backend)
    quarter = half * half

    def j_of(v: Vector) -> Matrix:
        out = linalg.scale(aux.j[0], v[0])
        for k in range(1, n):
            if v[k] != 0:
                out = linalg.add(out, linalg.scale(aux.j[k], v[k]))
        return out

    tol_scale = max(1.0, max(abs(float(x)) for row in g.entries for x in row)) ** 3
    for i in range(n):
        for j in range(n):
            br = alg.bracket(es[i], es[j])
            term1 = linalg.add(
                j_of(br),
                linalg.add(_comm(aux.j[i], aux.ad_star[j]), _comm(aux.ad_star[i], aux.j[j])))
            term2 = linalg.add(
                linalg.add(_comm(aux.phi[i], aux.phi[j]), _comm(aux.j[i], aux.phi[j])),
                linalg.sub(_comm(aux.phi[i], aux.j[j]), _comm(aux.j[i], aux.j[j])))
            r_lemma = linalg.sub(linalg.scale(term1, half), linalg.scale(term2, quarter))
            diff = linalg.sub(r_lemma, r_def[i][j])
            bad = any(not backend.is_zero(x / tol_scale if not backend.exact else x)
                      for row in diff for x in row)
            if bad:
                raise CrossCheckError(
                    f"curvature paths disagree at R(e{i+1}, e{j+1})")

    # Ricci both ways
    ricci_rows = []
    for i in range(n):
        row = []
        for j in range(n):
            tr = sum(linalg.matvec(r_def[k][i], es[j])[k] for k in range(n))
            row.append(tr)
        ricci_rows.append(tuple(row))
    ricci = linalg.mat(ricci_rows)
    for i in range(n):
        for j in range(n):
            jj = linalg.matmul(aux.j[i], aux.j[j])
            aa = linalg.matmul(aux.ad[i], aux.ad_star[j])
            val = -quarter * _trace(jj) - half * _trace(aa)
            if not backend.eq(val, ricci[i][j]):
                raise CrossCheckError(f"Ricci paths disagree at ({i+1}, {j+1})")

    ginv = g.inverse()
    scal = _trace(linalg.matmul(ginv, ricci))
    return CurvatureTensor(alg, g, conn, tuple(tuple(r) for r in r_def), ricci, scal)


def _trace(a: Matrix) -> Scalar:
    return sum(a[i][i] for i in range(len(a)))


def scalar_curvature(alg: LieAlgebra, g: MetricMatrix) -> Scalar:
    return curvature(levi_civita(alg, g)).scalar


def covariant_derivative_r(conn: Connection, rt: CurvatureTensor):
    """Table d[k][i][j] = (nabla_{e_k} R)(e_i, e_j) as operators."""
    alg = conn.alg
    n = alg.dim
    es = [alg.basis(i) for i in range(n)]
    ops = [conn.operator(es[k]) for k in range(n)]
    out = []
    for k in range(n):
        table_k = []
        for i in range(n):
            row = []
            for j in range(n):
                term = _comm(ops[k], rt.r[i][j])
                di = conn.gamma[k][i]
                dj = conn.gamma[k][j]
                for m in range(n):
                    if di[m] != 0:
                        term = linalg.sub(term, linalg.scale(rt.r[m][j], di[m]))
                    if dj[m] != 0:
                        term = linalg.sub(term, linalg.scale(rt.r[i][m], dj[m]))
                row.append(term)
            table_k.append(tuple(row))
        out.append(tuple(table_k))
    return tuple(out)


def covariant_derivative_sym(conn: Connection, t: Matrix):
    """Table d[k] = nabla_{e_k} T for a symmetric 2-tensor T (matrix form)."""
    n = conn.alg.dim
    out = []
    for k in range(n):
        op = conn.operator(conn.alg.basis(k))
        out.append(linalg.scale(
            linalg.add(linalg.matmul(linalg.transpose(op), t), linalg.matmul(t, op)), -1))
    return tuple(out)


def _all_zero(tables, backend: Backend, scale: float = 1.0) -> bool:
    for t in tables:
        for x in _iter_scalars(t):
            if backend.exact:
                if x != 0:
                    return False
            elif abs(float(x)) > backend.tol * scale:
                return False
    return True


def _iter_scalars(t):
    if isinstance(t, (int, float, Fraction)):
        yield t
    else:
        for u in t:
            yield from _iter_scalars(u)


@dataclass(frozen=True)
class Predicates:
    is_flat: bool
    is_ricci_flat: bool
    is_locally_symmetric: bool
    is_ricci_parallel: bool
    is_einstein: bool


def predicates(alg: LieAlgebra, g: MetricMatrix) -> Predicates:
    backend = g.backend
    conn = levi_civita(alg, g)
    rt = curvature(conn)
    scale = max(1.0, max(abs(float(x)) for r in g.entries for x in r)) ** 3
    flat = _all_zero([rt.r], backend, scale)
    ricci_flat = _all_zero([rt.ricci], backend, scale)
    dr = covariant_derivative_r(conn, rt)
    loc_sym = _all_zero([dr], backend, scale)
    drho = covariant_derivative_sym(conn, rt.ricci)
    ricci_par = _all_zero([drho], backend, scale)

    # Einstein: rho = c g, with c fixed by the first usable entry of g
    c = None
    for i in range(6):
        for j in range(6):
            if not backend.is_zero(g.entries[i][j]):
                c = rt.ricci[i][j] / g.entries[i][j]
                break
        if c is not None:
            break
    einstein = all(
        backend.eq(rt.ricci[i][j], c * g.entries[i][j])
        for i in range(6) for j in range(6))
    return Predicates(flat, ricci_flat, loc_sym, ricci_par, einstein)


def wedge(alg: LieAlgebra, g: MetricMatrix, i: int, j: int) -> Matrix:
    """(e_i ^ e_j)(x) = <e_j, x> e_i - <e_i, x> e_j as a matrix (0-based i, j)."""
    gi = g.entries[i]
    gj = g.entries[j]
    ei, ej = alg.basis(i), alg.basis(j)
    return linalg.sub(linalg.outer(ei, gj), linalg.outer(ej, gi))


def wedge_coordinates(alg: LieAlgebra, g: MetricMatrix, op: Matrix, backend: Backend):
    """Coordinates of op in the basis {e_i ^ e_j : i < j}, or None."""
    basis = []
    labels = []
    for i in range(6):
        for j in range(i + 1, 6):
            basis.append(linalg.flatten(wedge(alg, g, i, j)))
            labels.append((i + 1, j + 1))
    coords = linalg.row_space_coords(basis, linalg.flatten(op), backend)
    if coords is None:
        return None
    return dict(zip(labels, coords))
