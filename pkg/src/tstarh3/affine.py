"""Parallel symmetric 2-tensors, geodesic rigidity, totally geodesic tests.

The space aff of symmetric matrices T with T w_k + w_k^T T = 0 for every
frame direction k (w_k the connection operator of nabla_{e_k}) consists of
the nabla-parallel left invariant symmetric tensors; the metric itself
always belongs, and dim aff = 1 means the metric is geodesically rigid.
On this algebra every member comes from the metric plus products of
parallel covectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import curvature as curv
from . import linalg
from .distinguished import ParallelSpace
from .liealg import LieAlgebra
from .linalg import Matrix, Vector
from .metric import MetricMatrix
from .scalars import Backend


@dataclass(frozen=True)
class AffineSpace:
    basis: list[Matrix]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, t: Matrix, backend: Backend) -> bool:
        span = linalg.SpanBuilder(backend)
        for b in self.basis:
            span.add(linalg.flatten(b))
        return span.contains(linalg.flatten(t))


def aff_space(alg: LieAlgebra, g: MetricMatrix) -> AffineSpace:
    backend = g.backend
    n = alg.dim
    conn = curv.levi_civita(alg, g)
    ops = [conn.operator(alg.basis(k)) for k in range(n)]
    # unknowns: symmetric T (21 coords); equations: T w + w^T T = 0 per direction
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    rows = []
    for w in ops:
        for r in range(n):
            for c in range(n):
                row = []
                for (i, j) in pairs:
                    v = 0
                    # (T w)_{rc} = sum_k T_{rk} w_{kc}
                    if i == r:
                        v = v + w[j][c]
                    if j == r and i != j:
                        v = v + w[i][c]
                    # (w^T T)_{rc} = sum_k w_{kr} T_{kc}
                    if i == c:
                        v = v + w[j][r]
                    if j == c and i != j:
                        v = v + w[i][r]
                    row.append(v)
                rows.append(tuple(row))
    basis = []
    for v in linalg.nullspace(linalg.mat(rows), backend):
        t = [[None] * n for _ in range(n)]
        for (i, j), x in zip(pairs, v):
            t[i][j] = x
            t[j][i] = x
        basis.append(linalg.mat(t))
    return AffineSpace(basis)


def is_geodesically_rigid(alg: LieAlgebra, g: MetricMatrix) -> bool:
    return aff_space(alg, g).dimension == 1


def parallel_tensor_from_fields(g: MetricMatrix, fields: ParallelSpace,
                                coeffs: Matrix) -> Matrix:
    """sum C_{nm} v*_n x v*_m with v* the metric duals of the parallel fields."""
    duals = [g.dual(v) for v in fields.basis]
    r = len(duals)
    n = len(g.entries)
    out = linalg.zeros(n) if g.backend.exact else linalg.mat([[0.0] * n] * n)
    for a in range(r):
        for b in range(r):
            c = coeffs[a][b]
            if c != 0:
                out = linalg.add(out, linalg.scale(linalg.outer(duals[a], duals[b]), c))
    return out


def is_parallel_tensor(alg: LieAlgebra, g: MetricMatrix, t: Matrix) -> bool:
    backend = g.backend
    conn = curv.levi_civita(alg, g)
    for dt in curv.covariant_derivative_sym(conn, t):
        scale = max(1.0, linalg.max_abs(t))
        for r in dt:
            for x in r:
                if backend.exact:
                    if x != 0:
                        return False
                elif abs(float(x)) > backend.tol * scale:
                    return False
    return True


# --- subalgebras ------------------------------------------------------------

@dataclass(frozen=True)
class SubalgebraSpec:
    generators: tuple[Vector, ...]
    name: str = ""


class NotASubalgebraError(ValueError):
    pass


def check_bracket_closed(alg: LieAlgebra, h: SubalgebraSpec, backend: Backend) -> None:
    span = linalg.SpanBuilder(backend)
    for v in h.generators:
        span.add(v)
    for x, y in itertools.combinations(h.generators, 2):
        if not span.contains(alg.bracket(x, y)):
            raise NotASubalgebraError(f"{h.name or 'subspace'} is not bracket closed")


def orthogonal_complement(g: MetricMatrix, vectors, backend: Backend) -> list[Vector]:
    rows = [linalg.matvec(g.entries, v) for v in vectors]
    return linalg.nullspace(linalg.mat(rows), backend)


def totally_geodesic_check(alg: LieAlgebra, g: MetricMatrix, h: SubalgebraSpec) -> bool:
    """<[x,y],z> + <[x,z],y> = 0 for x in h-perp, y, z in h; cross-checked
    against the direct condition nabla_y z in h."""
    backend = g.backend
    check_bracket_closed(alg, h, backend)
    perp = orthogonal_complement(g, h.generators, backend)
    cond = True
    for x in perp:
        for y in h.generators:
            for z in h.generators:
                val = g.inner(alg.bracket(x, y), z) + g.inner(alg.bracket(x, z), y)
                if not backend.is_zero(val):
                    cond = False
                    break
            if not cond:
                break
        if not cond:
            break

    conn = curv.levi_civita(alg, g)
    span = linalg.SpanBuilder(backend)
    for v in h.generators:
        span.add(v)
    direct = all(span.contains(conn.nabla(y, z))
                 for y in h.generators for z in h.generators)
    if cond != direct:
        raise AssertionError("totally-geodesic criteria disagree")
    return cond


@dataclass(frozen=True)
class IsotropyReport:
    isotropic: bool
    totally_isotropic: bool


def isotropic_check(g: MetricMatrix, subspace) -> IsotropyReport:
    backend = g.backend
    vectors = list(subspace)
    iso = all(backend.is_zero(g.inner(x, y)) for x in vectors for y in vectors)
    if not iso:
        return IsotropyReport(False, False)
    perp = orthogonal_complement(g, vectors, backend)
    span = linalg.SpanBuilder(backend)
    for v in vectors:
        span.add(v)
    sub_dim = span.dimension
    total = len(perp) == sub_dim and all(span.contains(p) for p in perp)
    return IsotropyReport(True, total)


def geodesic_vector_check(alg: LieAlgebra, g: MetricMatrix, y: Vector) -> bool:
    """nabla_y y proportional to y; equivalently y central or y orthogonal
    to the center (the algebra is nonsingular), which is cross-checked."""
    backend = g.backend
    if all(backend.is_zero(x) for x in y):
        raise ValueError("geodesic test needs a nonzero vector")
    conn = curv.levi_civita(alg, g)
    v = conn.nabla(y, y)
    span = linalg.SpanBuilder(backend)
    span.add(y)
    direct = span.contains(v)

    center = alg.center()
    cspan = linalg.SpanBuilder(backend)
    for c in center:
        cspan.add(c)
    in_center = cspan.contains(y)
    perp_center = all(backend.is_zero(g.inner(y, c)) for c in center)
    if direct != (in_center or perp_center):
        raise AssertionError("geodesic-vector criteria disagree")
    return direct


def standard_subalgebra_inventory(alg: LieAlgebra) -> list[SubalgebraSpec]:
    """The proof inventory: abelian planes/3-spaces through the center, the
    three Heisenberg subalgebras, their central extensions, and the three
    5-dimensional ones."""
    e = [alg.basis(i) for i in range(6)]
    h1 = (e[1], e[2], e[3])          # [e2,e3] = e4
    h2 = (e[0], e[2], e[4])          # [e1,e3] = -e5
    h3 = (e[0], e[1], e[5])          # [e1,e2] = e6
    inv = [
        SubalgebraSpec((e[0], e[3]), "R2(e1,e4)"),
        SubalgebraSpec((e[1], e[4]), "R2(e2,e5)"),
        SubalgebraSpec((e[2], e[5]), "R2(e3,e6)"),
        SubalgebraSpec((e[0], e[3], e[4]), "R3(e1,e4,e5)"),
        SubalgebraSpec((e[3], e[4], e[5]), "center"),
        SubalgebraSpec(h1, "h1"),
        SubalgebraSpec(h2, "h2"),
        SubalgebraSpec(h3, "h3"),
        SubalgebraSpec(h1 + (e[4],), "h1+e5"),
        SubalgebraSpec(h1 + (e[5],), "h1+e6"),
        SubalgebraSpec(h2 + (e[3],), "h2+e4"),
        SubalgebraSpec(h2 + (e[5],), "h2+e6"),
        SubalgebraSpec(h3 + (e[3],), "h3+e4"),
        SubalgebraSpec(h3 + (e[4],), "h3+e5"),
        SubalgebraSpec(h1 + (e[4], e[5]), "h1+center"),
        SubalgebraSpec(h2 + (e[3], e[5]), "h2+center"),
        SubalgebraSpec(h3 + (e[3], e[4]), "h3+center"),
    ]
    return inv
