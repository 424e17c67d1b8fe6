"""Holonomy algebra generation and structural identification.

The holonomy algebra of a left invariant metric is generated by the
curvature operators R(e_i, e_j) together with their covariant derivatives
of every order, closed under commutators.  The closure loop adjoins one
derivative order per round and stops when a full round adds nothing; a
hard cap guards against runaway recursion (never hit at this scale).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import curvature as curv
from . import linalg
from .liealg import LieAlgebra
from .linalg import Matrix, Vector
from .metric import MetricMatrix
from .scalars import Backend

MAX_ROUNDS = 10


class ClosureError(RuntimeError):
    pass


@dataclass
class OperatorSpan:
    basis_ops: list[Matrix]
    generation_log: list[str]
    backend: Backend

    @property
    def dimension(self) -> int:
        return len(self.basis_ops)

    def contains(self, op: Matrix) -> bool:
        span = linalg.SpanBuilder(self.backend)
        for b in self.basis_ops:
            span.add(linalg.flatten(b))
        return span.contains(linalg.flatten(op))


def _norm_op(op: Matrix, backend: Backend) -> Matrix | None:
    """Rescale a float operator to unit max entry for stable rank tests."""
    if backend.exact:
        return op
    m = max(abs(float(x)) for r in op for x in r)
    if m <= backend.tol:
        return None
    return linalg.scale(op, 1.0 / m)


def holonomy_algebra(alg: LieAlgebra, g: MetricMatrix) -> OperatorSpan:
    backend = g.backend
    conn = curv.levi_civita(alg, g)
    rt = curv.curvature(conn)
    n = alg.dim

    span = linalg.SpanBuilder(backend)
    ops: list[Matrix] = []
    log: list[str] = []

    def adjoin(op: Matrix, origin: str) -> bool:
        cand = _norm_op(op, backend)
        if cand is None:
            return False
        if span.add(linalg.flatten(cand)):
            ops.append(cand)
            log.append(origin)
            return True
        return False

    # order-0 generators: curvature operators
    current = rt.r
    for i in range(n):
        for j in range(i + 1, n):
            adjoin(current[i][j], f"R(e{i+1},e{j+1})")

    order = 0
    while order < MAX_ROUNDS:
        grew = False
        # next covariant-derivative order of the current operator table
        nxt = _derive_table(conn, current)
        order += 1
        for idx, op in _iter_ops(nxt):
            if adjoin(op, f"D^{order}R{idx}"):
                grew = True
        # commutator closure of everything found so far
        changed = True
        while changed:
            changed = False
            k = len(ops)
            for a in range(k):
                for b in range(a + 1, k):
                    c = linalg.sub(linalg.matmul(ops[a], ops[b]),
                                   linalg.matmul(ops[b], ops[a]))
                    if adjoin(c, f"[{a},{b}]"):
                        changed = grew = True
        current = nxt
        if not grew:
            break
        if span.dimension >= 15:
            break
    else:
        raise ClosureError("holonomy closure failed to stabilize")

    return OperatorSpan(ops, log, backend)


def _derive_table(conn, table):
    """One more covariant derivative: prepend a frame direction index."""
    n = conn.alg.dim
    es = [conn.alg.basis(i) for i in range(n)]
    nabla_ops = [conn.operator(es[k]) for k in range(n)]

    # table is indexed table[i1]...[ik][j] -> matrix; treat generically
    def walk(tbl, indices):
        if _is_matrix(tbl):
            yield indices, tbl
        else:
            for i, sub in enumerate(tbl):
                yield from walk(sub, indices + (i,))

    entries = list(walk(table, ()))
    out = []
    for k in range(n):
        new_level = {}
        for indices, op in entries:
            term = linalg.sub(linalg.matmul(nabla_ops[k], op),
                              linalg.matmul(op, nabla_ops[k]))
            for pos, idx in enumerate(indices):
                d = conn.gamma[k][idx]
                for m in range(n):
                    if d[m] != 0:
                        rep = indices[:pos] + (m,) + indices[pos + 1:]
                        term = linalg.sub(term, linalg.scale(_lookup(table, rep), d[m]))
            new_level[indices] = term
        out.append(new_level)
    # rebuild nested structure: out[k][indices]
    depth = len(entries[0][0])
    def build(k, prefix):
        if len(prefix) == depth:
            return out[k][prefix]
        return tuple(build(k, prefix + (i,)) for i in range(n))
    return tuple(build(k, ()) for k in range(n))


def _is_matrix(t) -> bool:
    return isinstance(t, tuple) and isinstance(t[0], tuple) and not isinstance(t[0][0], tuple)


def _lookup(table, indices):
    t = table
    for i in indices:
        t = t[i]
    return t


def _iter_ops(table):
    def walk(tbl, indices):
        if _is_matrix(tbl):
            yield indices, tbl
        else:
            for i, sub in enumerate(tbl):
                yield from walk(sub, indices + (i,))
    yield from walk(table, ())


def is_skew_adjoint(g: MetricMatrix, op: Matrix, backend: Backend) -> bool:
    lhs = linalg.matmul(linalg.transpose(op), g.entries)
    rhs = linalg.matmul(g.entries, op)
    s = linalg.add(lhs, rhs)
    scale = max(1.0, linalg.max_abs(g.entries) * linalg.max_abs(op))
    return all((backend.exact and x == 0) or
               (not backend.exact and abs(float(x)) <= backend.tol * scale)
               for r in s for x in r)


@dataclass(frozen=True)
class LieStructureReport:
    dim: int
    commutators: dict  # (i, j) -> coordinate vector of [h_i, h_j] in the basis
    derived_series_dims: tuple[int, ...]
    lower_central_dims: tuple[int, ...]
    radical_dim: int
    nilradical_dim: int
    killing_rank: int
    killing_signature: tuple[int, int, int]
    semisimple_part_dim: int
    semisimple_killing_signature: tuple[int, int, int] | None
    is_abelian: bool
    is_nilpotent: bool
    nilpotency_step: int | None
    is_full_so: bool


def lie_structure(span: OperatorSpan) -> LieStructureReport:
    backend = span.backend
    ops = span.basis_ops
    d = len(ops)
    if d == 0:
        return LieStructureReport(0, {}, (0,), (0,), 0, 0, 0, (0, 0, 0), 0,
                                  None, True, True, 0, False)
    flat = [linalg.flatten(o) for o in ops]

    def coords_of(op: Matrix) -> Vector:
        c = linalg.row_space_coords(flat, linalg.flatten(op), backend)
        if c is None:
            raise ClosureError("span is not closed under commutators")
        return c

    comm: dict[tuple[int, int], Vector] = {}
    for i in range(d):
        for j in range(i + 1, d):
            c = linalg.sub(linalg.matmul(ops[i], ops[j]), linalg.matmul(ops[j], ops[i]))
            comm[(i, j)] = coords_of(c)

    def bracket_coords(x: Vector, y: Vector) -> Vector:
        out = [x[0] * 0] * d
        for i in range(d):
            for j in range(d):
                if i == j or x[i] == 0 or y[j] == 0:
                    continue
                cij = comm[(i, j)] if i < j else tuple(-t for t in comm[(j, i)])
                f = x[i] * y[j]
                out = [o + f * t for o, t in zip(out, cij)]
        return tuple(out)

    basis_vecs = [tuple(Fraction(1 if k == i else 0) if backend.exact else float(k == i)
                        for k in range(d)) for i in range(d)]

    def subspace_bracket(a: list[Vector], b: list[Vector]) -> list[Vector]:
        sp = linalg.SpanBuilder(backend)
        out = []
        for x in a:
            for y in b:
                v = bracket_coords(x, y)
                if sp.add(v):
                    out.append(v)
        return out

    # derived series and lower central series (dimensions)
    derived_dims = [d]
    cur = basis_vecs
    while True:
        nxt = subspace_bracket(cur, cur)
        derived_dims.append(len(nxt))
        if len(nxt) in (0, len(cur)):
            break
        cur = nxt
    lower_dims = [d]
    cur = basis_vecs
    while True:
        nxt = subspace_bracket(basis_vecs, cur)
        lower_dims.append(len(nxt))
        if len(nxt) in (0, len(cur)):
            break
        cur = nxt

    is_abelian = derived_dims[1] == 0
    is_nilpotent = lower_dims[-1] == 0
    step = None
    if is_nilpotent:
        step = next(i for i, v in enumerate(lower_dims) if v == 0)

    # Killing form on the span
    ad_mats = []
    for i in range(d):
        cols = [bracket_coords(basis_vecs[i], basis_vecs[j]) for j in range(d)]
        ad_mats.append(tuple(tuple(cols[j][k] for j in range(d)) for k in range(d)))
    killing = linalg.mat([[_tr(linalg.matmul(ad_mats[i], ad_mats[j])) for j in range(d)]
                          for i in range(d)])
    from . import metric as metric_mod
    ksig = metric_mod.signature(killing, backend).as_tuple()
    krank = d - ksig[2]

    # radical = Killing-orthogonal complement of the derived algebra,
    # verified solvable by its own derived series
    derived_basis = subspace_bracket(basis_vecs, basis_vecs)
    if derived_basis:
        rows = [tuple(_bilinear(killing, db, bv) for bv in basis_vecs) for db in derived_basis]
        radical_basis = linalg.nullspace(linalg.mat(rows), backend)
    else:
        radical_basis = basis_vecs
    cur = radical_basis
    for _ in range(d + 1):
        if not cur:
            break
        cur = subspace_bracket(cur, cur)
    if cur:
        raise ClosureError("radical candidate is not solvable")
    radical_dim = len(radical_basis)

    # nilradical: elements of the radical acting nilpotently on the span
    nil_basis = [v for v in radical_basis if _is_nilpotent_coords(v, bracket_coords, d, backend)]
    sp = linalg.SpanBuilder(backend)
    nil_dim = 0
    for v in nil_basis:
        if sp.add(v):
            nil_dim += 1

    ss_dim = d - radical_dim
    ss_ksig = None
    if 0 < ss_dim:
        ss_ksig = _quotient_killing_signature(radical_basis, basis_vecs, bracket_coords,
                                              d, backend)

    full_so = (d == 15)
    return LieStructureReport(
        dim=d, commutators=comm,
        derived_series_dims=tuple(derived_dims),
        lower_central_dims=tuple(lower_dims),
        radical_dim=radical_dim, nilradical_dim=nil_dim,
        killing_rank=krank, killing_signature=ksig,
        semisimple_part_dim=ss_dim, semisimple_killing_signature=ss_ksig,
        is_abelian=is_abelian, is_nilpotent=is_nilpotent, nilpotency_step=step,
        is_full_so=full_so)


def _tr(a: Matrix):
    return sum(a[i][i] for i in range(len(a)))


def _bilinear(k: Matrix, x: Vector, y: Vector):
    return linalg.dot(x, linalg.matvec(k, y))


def _is_nilpotent_coords(v: Vector, bracket_coords, d: int, backend: Backend) -> bool:
    ad_cols = [bracket_coords(v, tuple(Fraction(1 if k == j else 0) if backend.exact
                                       else float(k == j) for k in range(d)))
               for j in range(d)]
    m = tuple(tuple(ad_cols[j][k] for j in range(d)) for k in range(d))
    p = m
    for _ in range(d):
        p = linalg.matmul(p, m)
    scale = max(1.0, linalg.max_abs(m)) ** (d + 1)
    return all((backend.exact and x == 0) or
               (not backend.exact and abs(float(x)) <= backend.tol * scale)
               for r in p for x in r)


def _quotient_killing_signature(radical_basis, basis_vecs, bracket_coords, d, backend):
    """Killing signature of span/radical via structure constants on a complement."""
    sp = linalg.SpanBuilder(backend)
    for v in radical_basis:
        sp.add(v)
    comp = []
    for v in basis_vecs:
        if sp.add(v):
            comp.append(v)
    m = len(comp)
    if m == 0:
        return (0, 0, 0)
    # coordinates modulo the radical: project brackets onto the complement
    full = list(radical_basis) + comp

    def comp_coords(v: Vector) -> Vector:
        c = linalg.row_space_coords([linalg.vec(x) for x in full], v, backend)
        return tuple(c[len(radical_basis):])

    ad_q = []
    for x in comp:
        cols = [comp_coords(bracket_coords(x, y)) for y in comp]
        ad_q.append(tuple(tuple(cols[j][k] for j in range(m)) for k in range(m)))
    killing = linalg.mat([[_tr(linalg.matmul(ad_q[i], ad_q[j])) for j in range(m)]
                          for i in range(m)])
    from . import metric as metric_mod
    return metric_mod.signature(killing, backend).as_tuple()
