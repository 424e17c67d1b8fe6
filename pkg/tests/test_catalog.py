from fractions import Fraction

import pytest

from tstarh3 import catalog, linalg, metric, reduction
from tstarh3.scalars import EXACT

F = Fraction


def test_construct_examples():
    g = catalog.construct("S30", {"l1": 3, "l2": 2, "l3": 1, "eps": 1})
    assert g.entries == linalg.mat_fractions(
        [[3, 0, 0, 0, 0, 0], [0, 2, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0],
         [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]])
    # the neutral pairing with the identity coupling block
    g = catalog.construct("S00_16a", {"l2": 1, "l3": 1})
    from tstarh3 import distinguished, liealg
    assert distinguished.is_ad_invariant(liealg.tstar_h3(), g)


def test_boundary_rejections():
    with pytest.raises(catalog.ConstraintError) as err:
        catalog.construct("S21_triple", {"s11": 1, "s13": 0, "eps": 1})
    assert "S21_diag" in str(err.value)
    with pytest.raises(catalog.ConstraintError):
        catalog.construct("S21_triple", {"s11": 0, "s13": 1, "eps": 1})
    with pytest.raises(catalog.ConstraintError) as err:
        catalog.construct("S21_jordan", {"l1": 1, "s22": 2, "s33": 2, "eps": 1})
    assert "diagonal" in str(err.value)
    with pytest.raises(catalog.ConstraintError):
        catalog.construct("S10_15a", {"m11": 0, "m22": 1, "ssign": 1, "eps": 1})
    with pytest.raises(catalog.ConstraintError):
        catalog.construct("S11_12", {"s12": -1})
    with pytest.raises(catalog.ConstraintError):
        catalog.construct("S21_posdef", {"d1": 1, "d2": 2, "d3": 1,
                                         "eps": 1, "sgn": 1})
    with pytest.raises(KeyError):
        catalog.construct("S99", {})
    with pytest.raises(catalog.ConstraintError):
        catalog.construct("S30", {"l1": 1, "l2": 1, "eps": 1})  # missing l3


def test_sign_validation():
    with pytest.raises(catalog.ConstraintError):
        catalog.construct("S30", {"l1": 1, "l2": 1, "l3": 1, "eps": 2})


def test_grid_is_deterministic_and_valid():
    grid1 = catalog.enumerate_test_grid()
    grid2 = catalog.enumerate_test_grid()
    assert grid1 == grid2
    per_family = {}
    for family, params in grid1:
        per_family.setdefault(family, []).append(params)
        catalog.construct(family, params)  # validation must pass
    for family, spec in catalog.FAMILIES.items():
        count = len(per_family.get(family, []))
        if spec.param_names:
            assert count >= 5, family
        else:
            assert count >= 1, family


def test_grid_covers_sign_variants():
    grid = catalog.enumerate_test_grid()
    for fam, sign in [("S30", "eps"), ("S21_diag", "eps"), ("S11_7", "e11"),
                      ("S10_14", "ssign"), ("S10_14", "eps")]:
        seen = {params.get(sign, 1) for f, params in grid if f == fam}
        assert seen == {1, -1}, (fam, sign)


def test_classify_of_constructed_matches_family():
    # one cheap representative per family (the full sweep lives in acceptance)
    done = set()
    for family, params in catalog.enumerate_test_grid():
        if family in done:
            continue
        done.add(family)
        assert reduction.classify(catalog.construct(family, params)).family == family
    assert done == set(catalog.FAMILIES)


def test_distinct_normalized_parameters_not_isometric():
    a = catalog.construct("S21_complex", {"l1": 1, "s22": 0, "s23": 1, "eps": 1})
    b = catalog.construct("S21_complex", {"l1": 2, "s22": 0, "s23": 1, "eps": 1})
    assert not reduction.is_isometric(a, b)
    a = catalog.construct("S10_14", {"m12": 1, "ssign": 1, "eps": 1})
    b = catalog.construct("S10_14", {"m12": 2, "ssign": 1, "eps": 1})
    assert not reduction.is_isometric(a, b)
