import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tstarh3 import liealg, linalg

F = Fraction


def e(alg, i):
    return alg.basis(i - 1)


def test_defining_brackets(alg):
    assert liealg.bracket(alg, e(alg, 1), e(alg, 2)) == e(alg, 6)
    assert liealg.bracket(alg, e(alg, 1), e(alg, 3)) == tuple(-x for x in e(alg, 5))
    assert liealg.bracket(alg, e(alg, 2), e(alg, 3)) == e(alg, 4)
    assert liealg.bracket(alg, e(alg, 1), e(alg, 1)) == (F(0),) * 6


def test_bracket_dimension_mismatch(alg):
    with pytest.raises(liealg.DimensionError):
        liealg.bracket(alg, (F(1), F(0)), e(alg, 1))


def test_jacobi(alg):
    assert liealg.jacobi_holds(alg)


def test_derived_equals_center(alg):
    derived = alg.derived_subalgebra()
    center = alg.center()
    span_d = linalg.SpanBuilder()
    for v in derived:
        span_d.add(v)
    assert span_d.dimension == 3
    assert len(center) == 3
    for v in center:
        assert span_d.contains(v)


rationals = st.fractions(min_value=-3, max_value=3).map(
    lambda q: q.limit_denominator(6))
vectors = st.tuples(*([rationals] * 6))


@given(x=vectors, y=vectors, a=rationals)
@settings(max_examples=40, deadline=None)
def test_bracket_bilinear_antisymmetric(x, y, a):
    alg = liealg.tstar_h3()
    lhs = liealg.bracket(alg, linalg.vadd(linalg.vscale(x, a), y), x)
    rhs = linalg.vscale(liealg.bracket(alg, x, x), a)
    # [ax + y, x] = a[x,x] + [y,x] = -[x,y]
    assert lhs == linalg.vsub(rhs, liealg.bracket(alg, x, y))
    assert liealg.bracket(alg, x, y) == tuple(-t for t in liealg.bracket(alg, y, x))


def test_cotangent_of_heisenberg(alg):
    res = liealg.build_cotangent(liealg.heisenberg3())
    assert res.algebra.dim == 6
    derived = res.algebra.derived_subalgebra()
    assert len(derived) == 3
    center = res.algebra.center()
    span = linalg.SpanBuilder()
    for v in derived:
        span.add(v)
    assert len(center) == 3 and all(span.contains(c) for c in center)
    # the returned change of basis reproduces the fixed commutators
    t = res.to_canonical
    assert t is not None
    cols = [tuple(t[i][j] for i in range(6)) for j in range(6)]
    for i in range(6):
        for j in range(6):
            lhs = liealg.bracket(res.algebra, cols[i], cols[j])
            want = linalg.matvec(t, liealg.bracket(alg, alg.basis(i), alg.basis(j)))
            assert lhs == want


def test_cotangent_of_abelian():
    abelian = liealg.from_brackets(3, {})
    res = liealg.build_cotangent(abelian)
    assert res.algebra.dim == 6
    zero = (F(0),) * 6
    for i in range(6):
        for j in range(6):
            assert liealg.bracket(res.algebra, res.algebra.basis(i),
                                  res.algebra.basis(j)) == zero


def test_coadjoint_oracle():
    h3 = liealg.heisenberg3()

    def oracle(x, phi):
        # evaluate -phi([x, y]) on every basis y
        return tuple(-linalg.dot(phi, liealg.bracket(h3, x, h3.basis(j)))
                     for j in range(3))

    x1, x2, x3 = (h3.basis(i) for i in range(3))
    x3s = (F(0), F(0), F(1))
    assert liealg.coadjoint(h3, x1, x3s) == oracle(x1, x3s) == (F(0), F(-1), F(0))
    assert liealg.coadjoint(h3, x2, x3s) == oracle(x2, x3s) == (F(1), F(0), F(0))
    for phi in ((F(1), F(0), F(0)), (F(2), F(-1), F(3))):
        assert liealg.coadjoint(h3, x3, phi) == (F(0),) * 3


def test_make_automorphism_blocks(alg):
    ident = liealg.make_automorphism(linalg.identity(3), linalg.zeros(3))
    assert ident.matrix == linalg.identity(6)
    a = linalg.mat_fractions([[1, 0, 0], [0, 1, 0], [0, 0, 2]])
    f = liealg.make_automorphism(a, linalg.zeros(3))
    assert f.c_block == linalg.mat_fractions([[2, 0, 0], [0, 2, 0], [0, 0, 1]])
    assert liealg.is_automorphism(alg, f.matrix)


def test_det_c_is_square(alg, rng):
    for _ in range(20):
        f = liealg.random_automorphism(rng)
        det_a = linalg.det(f.a_block)
        det_c = linalg.det(f.c_block)
        assert det_c == det_a * det_a
        assert det_c > 0


def test_is_automorphism_examples(alg, rng):
    assert liealg.is_automorphism(alg, linalg.identity(6))
    b = liealg.random_rational_matrix(rng)
    f = liealg.make_automorphism(linalg.identity(3), b)
    assert liealg.is_automorphism(alg, f.matrix)
    # a nonzero upper-right block cannot preserve the brackets
    bad = [list(r) for r in linalg.identity(6)]
    bad[0][3] = F(1)
    assert not liealg.is_automorphism(alg, linalg.mat(bad))


def test_automorphism_group_closure(alg):
    rng = random.Random(11)
    for _ in range(1000):
        f = liealg.random_automorphism(rng)
        assert liealg.is_automorphism(alg, f.matrix)
    for _ in range(50):
        f = liealg.random_automorphism(rng).compose(liealg.random_automorphism(rng))
        assert liealg.is_automorphism(alg, f.matrix)


def test_ad_maps_into_derived(alg, rng):
    derived = alg.derived_subalgebra()
    span = linalg.SpanBuilder()
    for v in derived:
        span.add(v)
    for _ in range(20):
        x = tuple(Fraction(rng.randint(-5, 5)) for _ in range(6))
        adx = alg.ad(x)
        for j in range(6):
            col = tuple(adx[k][j] for k in range(6))
            assert span.contains(col)
    for z in alg.center():
        adz = alg.ad(z)
        assert all(x == 0 for r in adz for x in r)
