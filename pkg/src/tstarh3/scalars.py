"""Scalar backends: exact rationals (fractions.Fraction) or double floats.

Every module in the package is generic over the scalar type.  Exact values
are plain ``Fraction`` instances, floats are plain ``float``; a ``Backend``
bundles the comparison policy (decidable equality for rationals, tolerance
based for floats) so that pivoting and zero tests never branch on types.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float]

#: default relative tolerance of the float backend
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Backend:
    name: str  # "exact" | "float"
    tol: float = 0.0

    @property
    def exact(self) -> bool:
        return self.name == "exact"

    def convert(self, x) -> Scalar:
        if self.exact:
            return as_fraction(x)
        return float(x)

    def is_zero(self, x: Scalar) -> bool:
        if self.exact:
            return x == 0
        return abs(x) <= self.tol

    def eq(self, x: Scalar, y: Scalar) -> bool:
        if self.exact:
            return x == y
        scale = max(abs(x), abs(y), 1.0)
        return abs(x - y) <= self.tol * scale

    def sqrt(self, x: Scalar) -> Scalar:
        """Square root; stays exact only when x is a perfect rational square."""
        if x < 0:
            raise ValueError("square root of negative scalar")
        if self.exact and isinstance(x, Fraction):
            r = _fraction_sqrt(x)
            if r is not None:
                return r
        return math.sqrt(float(x))

    def cbrt(self, x: Scalar) -> Scalar:
        """Real cube root; exact when x is a perfect rational cube."""
        if self.exact and isinstance(x, Fraction):
            r = _fraction_cbrt(x)
            if r is not None:
                return r
        v = float(x)
        return math.copysign(abs(v) ** (1.0 / 3.0), v)


EXACT = Backend("exact")


def float_backend(tol: float = DEFAULT_TOL) -> Backend:
    return Backend("float", tol)


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and strings like '3/2' or '-1' into Fractions."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if not x.is_integer():
            raise ValueError(f"refusing to reinterpret non-integral float {x!r} as exact")
        return Fraction(int(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def scalar_to_json(x: Scalar):
    """Fractions serialize as 'p/q' strings so JSON stays lossless."""
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def scalar_from_json(v, backend: Backend) -> Scalar:
    if backend.exact:
        return as_fraction(v)
    if isinstance(v, str):
        return float(Fraction(v))
    return float(v)


def _isqrt_exact(n: int):
    r = math.isqrt(n)
    return r if r * r == n else None


def _fraction_sqrt(x: Fraction):
    p = _isqrt_exact(x.numerator)
    q = _isqrt_exact(x.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def _icbrt_exact(n: int):
    if n < 0:
        r = _icbrt_exact(-n)
        return None if r is None else -r
    r = round(n ** (1.0 / 3.0))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c * c * c == n:
            return c
    return None


def _fraction_cbrt(x: Fraction):
    p = _icbrt_exact(x.numerator)
    q = _icbrt_exact(x.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)
