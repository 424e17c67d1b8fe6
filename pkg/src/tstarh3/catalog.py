"""Named constructors for the canonical metric families.

Family tags follow the classification's inventory: nondegenerate
restriction (S30, S21_*), rank-2 (S20_7/8/9, S11_7/8/9/10/11/12/13),
rank-1 (S10_14, S10_15a/b/c) and rank-0 (S00_16a..d).  Sign variants enter
through explicit parameters: ``eps`` flips the restriction block, ``e11``
selects the plus or minus variant of the mixed rank-2 block, ``ssign``
flips the rank-1 upper block.  Constructors validate the printed
constraints and name the violated one; boundary values that collapse into
a different family are rejected with a pointer to that family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from . import linalg, metric
from .metric import MetricMatrix, assemble, E_MATRICES
from .scalars import Backend, EXACT, as_fraction


class ConstraintError(ValueError):
    def __init__(self, family: str, constraint: str, hint: str = ""):
        self.family = family
        self.constraint = constraint
        msg = f"{family}: constraint violated: {constraint}"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


def _diag(*v) -> linalg.Matrix:
    n = len(v)
    return linalg.mat([[v[i] if i == j else 0 for j in range(n)] for i in range(n)])


def _zero3() -> linalg.Matrix:
    return linalg.zeros(3)


def _conv(params: Mapping, backend: Backend) -> dict:
    out = {}
    for k, v in params.items():
        if k in ("eps", "e11", "ssign"):
            v = int(v)
            if v not in (1, -1):
                raise ConstraintError("?", f"{k} must be +1 or -1")
            out[k] = v
        else:
            out[k] = backend.convert(v)
    return out


def _req(cond: bool, family: str, constraint: str, hint: str = ""):
    if not cond:
        raise ConstraintError(family, constraint, hint)


@dataclass(frozen=True)
class FamilySpec:
    name: str
    param_names: tuple[str, ...]
    sign_names: tuple[str, ...]
    build: Callable  # (params dict) -> (S, M, E) blocks
    constraints: str


def _build_s30(p):
    l1, l2, l3 = p["l1"], p["l2"], p["l3"]
    _req(l1 != 0 and l2 != 0 and l3 != 0, "S30", "l1, l2, l3 nonzero")
    _req(l1 >= l2 >= l3, "S30", "l1 >= l2 >= l3")
    e = linalg.scale(E_MATRICES["E30"], p["eps"])
    return _diag(l1, l2, l3), _zero3(), e


def _build_s21_posdef(p):
    d1, d2, d3 = p["d1"], p["d2"], p["d3"]
    # the third slot pairs with the timelike restriction direction and is
    # not interchangeable with the first two
    _req(d1 >= d2 > 0, "S21_posdef", "d1 >= d2 > 0")
    _req(d3 > 0, "S21_posdef", "d3 > 0")
    s = linalg.scale(_diag(d1, d2, d3), p["sgn"] if "sgn" in p else 1)
    return s, _zero3(), linalg.scale(E_MATRICES["E21"], p["eps"])


def _build_s21_diag(p):
    d1, d2, d3 = p["d1"], p["d2"], p["d3"]
    _req(d1 != 0 and d2 != 0 and d3 != 0, "S21_diag", "diagonal entries nonzero")
    signs = sorted((d1 > 0, d2 > 0, d3 > 0))
    _req(signs not in ([True] * 3, [False] * 3), "S21_diag",
         "mixed signature required", "definite diagonals belong to S21_posdef")
    return _diag(d1, d2, d3), _zero3(), linalg.scale(E_MATRICES["E21"], p["eps"])


def _build_s21_jordan(p):
    l1, s22, s33 = p["l1"], p["s22"], p["s33"]
    _req(l1 != 0, "S21_jordan", "l1 != 0")
    _req(s22 != s33, "S21_jordan", "s22 != s33",
         "equal values collapse to the diagonal family S21_diag")
    b = (s22 + s33) / 2
    s = linalg.mat([[l1, 0, 0], [0, s22, b], [0, b, s33]])
    return s, _zero3(), linalg.scale(E_MATRICES["E21"], p["eps"])


def _build_s21_complex(p):
    l1, s22, s23 = p["l1"], p["s22"], p["s23"]
    _req(l1 != 0, "S21_complex", "l1 != 0")
    _req(s23 > 0, "S21_complex", "s23 > 0")
    _req(s22 * s22 < 4 * s23 * s23, "S21_complex", "s22^2 < 4 s23^2",
         "otherwise the pencil has real roots (diagonal or parabolic family)")
    s = linalg.mat([[l1, 0, 0], [0, s22, s23], [0, s23, 0]])
    return s, _zero3(), linalg.scale(E_MATRICES["E21"], p["eps"])


def _build_s21_triple(p):
    s11, s13 = p["s11"], p["s13"]
    _req(s11 != 0, "S21_triple", "s11 != 0")
    _req(s13 != 0, "S21_triple", "s13 != 0",
         "s13 = 0 collapses to the diagonal family S21_diag")
    s = linalg.mat([
        [s11, s13, s13],
        [s13, s11 - 2 * s13, -2 * s13],
        [s13, -2 * s13, -s11 - 2 * s13]])
    return s, _zero3(), linalg.scale(E_MATRICES["E21"], p["eps"])


_M7 = linalg.mat_fractions([[1, 0, 0], [0, 0, 0], [1, 0, 0]])
_M8 = linalg.mat_fractions([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
_M9 = linalg.mat_fractions([[0, 0, 0], [0, 0, 0], [1, 0, 0]])
_M11 = linalg.mat_fractions([[0, 0, 0], [1, 0, 0], [1, 0, 0]])


def _build_rank2_7(p, ename):
    fam = "S20_7" if ename == "E20" else "S11_7"
    s22, s33 = p["s22"], p["s33"]
    _req(s22 != 0, fam, "s22 != 0")
    _req(s33 != 0, fam, "s33 != 0")
    sign = p.get("eps", p.get("e11", 1))
    return _diag(0, s22, s33), _M7, linalg.scale(E_MATRICES[ename], sign)


def _build_rank2_8(p, ename):
    fam = "S20_8" if ename == "E20" else "S11_8"
    s22, s33 = p["s22"], p["s33"]
    _req(s22 != 0 and s33 != 0, fam, "s22, s33 != 0")
    sign = p.get("eps", 1)
    return _diag(0, s22, s33), _M8, linalg.scale(E_MATRICES[ename], sign)


def _build_rank2_9(p, ename):
    fam = "S20_9" if ename == "E20" else "S11_9"
    s12 = p["s12"]
    _req(s12 != 0, fam, "s12 != 0")
    sign = p.get("eps", p.get("e11", 1))
    s = linalg.mat([[0, s12, 0], [s12, 0, 0], [0, 0, 0]])
    return s, _M9, linalg.scale(E_MATRICES[ename], sign)


def _build_s11_10(p):
    s22 = p["s22"]
    _req(s22 != 0, "S11_10", "s22 != 0")
    h = abs(s22) / 2
    s = linalg.mat([[0, 0, 0], [0, s22, h], [0, h, 0]])
    return s, _M8, E_MATRICES["E11"]


def _build_s11_13(p):
    s33 = p["s33"]
    _req(s33 != 0, "S11_13", "s33 != 0")
    h = abs(s33) / 2
    s = linalg.mat([[0, 0, 0], [0, 0, h], [0, h, s33]])
    return s, _M8, E_MATRICES["E11"]


def _build_s11_11(p):
    s11, s22 = p["s11"], p["s22"]
    _req(s11 != 0, "S11_11", "s11 != 0")
    _req(s22 != 0, "S11_11", "s22 != 0",
         "s22 = 0 belongs to S11_12 territory")
    return _diag(s11, s22, 0), _M11, E_MATRICES["E11"]


def _build_s11_12(p):
    s12 = p["s12"]
    _req(s12 > 0, "S11_12", "s12 > 0")
    s = linalg.mat([[0, s12, 0], [s12, 0, 0], [0, 0, 0]])
    return s, _M11, E_MATRICES["E11"]


def _build_s10_14(p):
    m12 = p["m12"]
    _req(m12 != 0, "S10_14", "m12 != 0")
    s = linalg.scale(E_MATRICES["E10"], p["ssign"])
    m = linalg.mat([[0, m12, 0], [1, 0, 0], [1, 0, 0]])
    return s, m, linalg.scale(E_MATRICES["E10"], p["eps"])


def _build_s10_15a(p):
    m11, m22 = p["m11"], p["m22"]
    _req(m11 != 0 and m22 != 0, "S10_15a", "m11, m22 != 0",
         "a zero entry makes the metric degenerate")
    s = linalg.scale(E_MATRICES["E10"], p["ssign"])
    m = _diag(m11, m22, 0)
    return s, m, linalg.scale(E_MATRICES["E10"], p["eps"])


def _build_s10_15b(p):
    m11, m12 = p["m11"], p["m12"]
    _req(m12 != 0, "S10_15b", "m12 != 0",
         "m12 = 0 collapses to the diagonal form S10_15a")
    s = linalg.scale(E_MATRICES["E10"], p["ssign"])
    m = linalg.mat([[m11, m12, 0], [-m12, m11, 0], [0, 0, 0]])
    return s, m, linalg.scale(E_MATRICES["E10"], p["eps"])


def _build_s10_15c(p):
    m11 = p["m11"]
    _req(m11 != 0, "S10_15c", "m11 != 0",
         "m11 = 0 makes the metric degenerate")
    s = linalg.scale(E_MATRICES["E10"], p["ssign"])
    m = linalg.mat([[m11, 0, 0], [1, m11, 0], [0, 0, 0]])
    return s, m, linalg.scale(E_MATRICES["E10"], p["eps"])


def _build_s00_16a(p):
    l2, l3 = p["l2"], p["l3"]
    _req(l2 != 0 and l3 != 0, "S00_16a", "l2, l3 != 0")
    return _zero3(), _diag(1, l2, l3), _zero3()


def _build_s00_16b(p):
    l2 = p["l2"]
    _req(l2 != 0, "S00_16b", "l2 != 0")
    m = linalg.mat([[1, 0, 0], [0, l2, 1], [0, 0, l2]])
    return _zero3(), m, _zero3()


def _build_s00_16c(p):
    m = linalg.mat_fractions([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    return _zero3(), m, _zero3()


def _build_s00_16d(p):
    l2, l3 = p["l2"], p["l3"]
    _req(l3 > 0, "S00_16d", "l3 > 0")
    m = linalg.mat([[1, 0, 0], [0, l2, -l3], [0, l3, l2]])
    return _zero3(), m, _zero3()


FAMILIES: dict[str, FamilySpec] = {
    "S30": FamilySpec("S30", ("l1", "l2", "l3"), ("eps",), _build_s30,
                      "l1 >= l2 >= l3, all nonzero"),
    "S21_posdef": FamilySpec("S21_posdef", ("d1", "d2", "d3"), ("eps", "sgn"),
                             _build_s21_posdef, "d1 >= d2 > 0, d3 > 0"),
    "S21_diag": FamilySpec("S21_diag", ("d1", "d2", "d3"), ("eps",),
                           _build_s21_diag, "nonzero, mixed signs"),
    "S21_jordan": FamilySpec("S21_jordan", ("l1", "s22", "s33"), ("eps",),
                             _build_s21_jordan, "l1 != 0, s22 != s33"),
    "S21_complex": FamilySpec("S21_complex", ("l1", "s22", "s23"), ("eps",),
                              _build_s21_complex, "l1 != 0, s23 > 0, s22^2 < 4 s23^2"),
    "S21_triple": FamilySpec("S21_triple", ("s11", "s13"), ("eps",),
                             _build_s21_triple, "s11 != 0, s13 != 0"),
    "S20_7": FamilySpec("S20_7", ("s22", "s33"), ("eps",),
                        lambda p: _build_rank2_7(p, "E20"), "s22, s33 != 0"),
    "S20_8": FamilySpec("S20_8", ("s22", "s33"), ("eps",),
                        lambda p: _build_rank2_8(p, "E20"), "s22, s33 != 0"),
    "S20_9": FamilySpec("S20_9", ("s12",), ("eps",),
                        lambda p: _build_rank2_9(p, "E20"), "s12 != 0"),
    "S11_7": FamilySpec("S11_7", ("s22", "s33"), ("e11",),
                        lambda p: _build_rank2_7(p, "E11"), "s22, s33 != 0"),
    "S11_8": FamilySpec("S11_8", ("s22", "s33"), (),
                        lambda p: _build_rank2_8(p, "E11"), "s22, s33 != 0"),
    "S11_9": FamilySpec("S11_9", ("s12",), ("e11",),
                        lambda p: _build_rank2_9(p, "E11"), "s12 != 0"),
    "S11_10": FamilySpec("S11_10", ("s22",), (), _build_s11_10, "s22 != 0"),
    "S11_13": FamilySpec("S11_13", ("s33",), (), _build_s11_13, "s33 != 0"),
    "S11_11": FamilySpec("S11_11", ("s11", "s22"), (), _build_s11_11,
                         "s11, s22 != 0"),
    "S11_12": FamilySpec("S11_12", ("s12",), (), _build_s11_12, "s12 > 0"),
    "S10_14": FamilySpec("S10_14", ("m12",), ("ssign", "eps"), _build_s10_14,
                         "m12 != 0"),
    "S10_15a": FamilySpec("S10_15a", ("m11", "m22"), ("ssign", "eps"),
                          _build_s10_15a, "m11, m22 != 0"),
    "S10_15b": FamilySpec("S10_15b", ("m11", "m12"), ("ssign", "eps"),
                          _build_s10_15b, "m12 != 0"),
    "S10_15c": FamilySpec("S10_15c", ("m11",), ("ssign", "eps"),
                          _build_s10_15c, "m11 != 0"),
    "S00_16a": FamilySpec("S00_16a", ("l2", "l3"), (), _build_s00_16a,
                          "l2, l3 != 0"),
    "S00_16b": FamilySpec("S00_16b", ("l2",), (), _build_s00_16b, "l2 != 0"),
    "S00_16c": FamilySpec("S00_16c", (), (), _build_s00_16c, "none"),
    "S00_16d": FamilySpec("S00_16d", ("l2", "l3"), (), _build_s00_16d, "l3 > 0"),
}


def construct(family: str, params: Mapping, backend: Backend = EXACT) -> MetricMatrix:
    if family not in FAMILIES:
        raise KeyError(f"unknown family {family!r}")
    spec = FAMILIES[family]
    p = _conv(params, backend)
    for name in spec.sign_names:
        p.setdefault(name, 1)
    missing = [n for n in spec.param_names if n not in p]
    if missing:
        raise ConstraintError(family, f"missing parameters {missing}")
    s, m, e = spec.build(p)
    g = assemble(s, m, e)
    g = linalg.mat([[backend.convert(x) for x in row] for row in g])
    try:
        return MetricMatrix(g, backend)
    except metric.DegenerateMetricError as exc:
        raise ConstraintError(family, "assembled matrix is degenerate") from exc


def canonical_matrix(family: str, params: Mapping, backend: Backend = EXACT) -> linalg.Matrix:
    return construct(family, params, backend).entries


def enumerate_test_grid() -> list[tuple[str, dict]]:
    """Deterministic grid, >= 5 points per family, all sign variants,
    avoiding every printed boundary equality."""
    F = Fraction
    grid: list[tuple[str, dict]] = []

    def add(family, base, **kw):
        d = dict(base)
        d.update(kw)
        grid.append((family, d))

    for eps in (1, -1):
        for ls in [(3, 2, 1), (2, 1, -1), (1, -1, -2), (F(5, 2), F(1, 2), F(1, 3)), (4, 4, 1)]:
            add("S30", {"l1": ls[0], "l2": ls[1], "l3": ls[2], "eps": eps})
        for sgn in (1, -1):
            for ds in [(3, 2, 1), (4, 1, 1), (F(9, 4), F(1, 4), F(1, 9))]:
                add("S21_posdef", {"d1": ds[0], "d2": ds[1], "d3": ds[2],
                                   "eps": eps, "sgn": sgn})
        for ds in [(3, 2, -1), (5, -2, 1), (1, -3, -4), (F(1, 2), 2, -2), (-1, -2, 6)]:
            add("S21_diag", {"d1": ds[0], "d2": ds[1], "d3": ds[2], "eps": eps})
        # pinned jordan representatives: one of s22, s33 vanishes
        for l1, lam in [(1, 1), (2, -1), (F(1, 2), 2), (3, F(1, 2)), (1, -2)]:
            if lam > 0:
                add("S21_jordan", {"l1": l1 if eps == 1 else -l1,
                                   "s22": 2 * F(lam), "s33": 0, "eps": eps})
            else:
                add("S21_jordan", {"l1": l1 if eps == 1 else -l1,
                                   "s22": 0, "s33": -2 * F(lam), "eps": eps})
        for l1, s22, s23 in [(1, 0, 1), (2, 1, 2), (1, -1, 1), (F(1, 2), 1, 3), (3, 2, F(3, 2))]:
            sgn = 1 if eps == 1 else -1
            add("S21_complex", {"l1": sgn * l1, "s22": sgn * s22, "s23": s23, "eps": eps})
        for s11 in (1, 2, -1, F(1, 2), -3):
            add("S21_triple", {"s11": s11, "s13": 1, "eps": eps})
        for s22, s33 in [(1, 1), (2, -1), (-1, -2), (F(1, 2), 3), (-2, 1)]:
            add("S20_7", {"s22": s22, "s33": s33, "eps": eps})
        # S20_8 normalized with s22 >= s33
        for s22, s33 in [(2, 1), (1, -1), (-1, -3), (3, F(1, 2)), (F(1, 2), F(1, 3))]:
            add("S20_8", {"s22": s22, "s33": s33, "eps": eps})
        for s12 in (1, 2, -1, F(3, 2), -3):
            add("S20_9", {"s12": s12, "eps": eps})
    for e11 in (1, -1):
        for s22, s33 in [(1, 1), (2, -1), (-1, -2), (F(1, 2), 3), (-2, 1)]:
            add("S11_7", {"s22": s22, "s33": s33, "e11": e11})
        for s12 in (1, 2, -1, F(3, 2), -3):
            add("S11_9", {"s12": s12, "e11": e11})
    for s22, s33 in [(2, 1), (1, -1), (-1, -3), (3, F(1, 2)), (-2, -3)]:
        add("S11_8", {"s22": s22, "s33": s33})
    for s22 in (1, 2, -1, F(1, 2), -3):
        add("S11_10", {"s22": s22})
        add("S11_13", {"s33": s22})
    # pinned S11_11 representatives: |s22| = 1
    for s11, s22 in [(1, 1), (2, -1), (-1, 1), (F(1, 2), -1), (-2, -1)]:
        add("S11_11", {"s11": s11, "s22": s22})
    for s12 in (1, 2, 3, Fraction(1, 2), 5):
        add("S11_12", {"s12": s12})
    for ssign in (1, -1):
        for eps in (1, -1):
            for m12 in (1, 2, F(1, 2)):
                add("S10_14", {"m12": m12, "ssign": ssign, "eps": eps})
            for m11, m22 in [(2, 1), (1, -1), (-1, -2)]:
                add("S10_15a", {"m11": m11, "m22": m22, "ssign": ssign, "eps": eps})
            for m11, m12 in [(0, F(1, 2)), (1, 1), (2, F(1, 2))]:
                add("S10_15b", {"m11": m11, "m12": m12, "ssign": ssign, "eps": eps})
            for m11 in (1, 2, F(1, 2)):
                add("S10_15c", {"m11": m11, "ssign": ssign, "eps": eps})
    for l2, l3 in [(F(1, 2), F(1, 3)), (-1, F(1, 2)), (1, -1), (F(3, 4), F(3, 4)), (-1, -2)]:
        add("S00_16a", {"l2": l2, "l3": l3})
    for l2 in (1, 2, -1, F(1, 2), -3):
        add("S00_16b", {"l2": l2})
    add("S00_16c", {})
    for l2, l3 in [(0, 1), (1, 2), (-1, 1), (F(1, 2), F(1, 2)), (2, 3)]:
        add("S00_16d", {"l2": l2, "l3": l3})
    return grid
