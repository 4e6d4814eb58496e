"""Unordered point tuples as monic polynomials and back.

An unordered n-tuple {a_1, ..., a_n} corresponds to the monic polynomial
(z - a_1)...(z - a_n); the coefficients are the signed elementary symmetric
functions of the points.  Coefficient arrays here are *descending*:
``coeffs[0] = 1`` down to the constant term.  Inputs are sorted canonically
before expansion so the coefficients are bit-for-bit permutation invariant.
"""

from __future__ import annotations

import numpy as np

from . import roots as rt
from .errors import DomainError, NumericalError


def to_monic(points) -> np.ndarray:
    pts = sorted((complex(p) for p in points), key=lambda z: (z.real, z.imag))
    if not pts:
        raise DomainError("empty tuple has no polynomial")
    asc = rt.poly_from_roots(pts)
    return asc[::-1].copy()


def from_monic(coeffs) -> tuple:
    c = np.asarray(coeffs, dtype=complex)
    if c.size < 2:
        raise DomainError("need a polynomial of degree at least 1")
    if abs(c[0]) < 1e-12:
        raise DomainError("polynomial is not monic (leading coefficient ~ 0)")
    if abs(c[0] - 1.0) > 1e-9:
        c = c / c[0]
    sols = rt.roots(c[::-1])
    if sols.size != c.size - 1:
        raise NumericalError("root count does not match the polynomial degree")
    return tuple(sorted((complex(z) for z in sols), key=lambda z: (z.real, z.imag)))
