"""Exact and floating-point geometry of left invariant pseudo-Riemannian
metrics on the cotangent algebra of the 3-dimensional Heisenberg algebra:
canonical-form classification with explicit reducing automorphisms,
curvature, holonomy, solitons, pseudo-Kahler structures and parallel
tensor spaces."""

from .liealg import LieAlgebra, bracket, build_cotangent, coadjoint, heisenberg3, \
    is_automorphism, make_automorphism, random_automorphism, tstar_h3
from .metric import BlockForm, MetricMatrix, Signature, block_normalize, \
    metric_from_rows, restrict_derived, signature
from .curvature import levi_civita, metric_adjoint_ops, predicates, \
    scalar_curvature
from .holonomy import holonomy_algebra, lie_structure
from .reduction import CanonicalDescriptor, OutsideClassificationError, \
    ReductionError, classify, is_isometric
from .catalog import ConstraintError, construct, enumerate_test_grid
from .scalars import EXACT, float_backend

__all__ = [
    "LieAlgebra", "bracket", "build_cotangent", "coadjoint", "heisenberg3",
    "is_automorphism", "make_automorphism", "random_automorphism", "tstar_h3",
    "BlockForm", "MetricMatrix", "Signature", "block_normalize",
    "metric_from_rows", "restrict_derived", "signature",
    "levi_civita", "metric_adjoint_ops", "predicates",
    "scalar_curvature", "holonomy_algebra", "lie_structure",
    "CanonicalDescriptor", "OutsideClassificationError", "ReductionError",
    "classify", "is_isometric", "ConstraintError", "construct",
    "enumerate_test_grid", "EXACT", "float_backend",
]
