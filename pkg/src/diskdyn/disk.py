"""Conformal automorphisms of the closed unit disk.

Every automorphism used here is stored in the canonical form
``z -> rotation * m_a(z)`` where ``m_a(z) = k (z - a) / (1 - conj(a) z)``
with ``k = (1 - conj(a)) / (1 - a)``.  The core factor ``m_a`` sends ``a`` to
0 and fixes the boundary point 1, so the stored ``rotation`` is exactly the
image of 1.  Compositions and inverses go through the 2x2 coefficient matrix,
which is numerically stabler than composing in (a, rotation) form; the
parameter form is recovered afterwards.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .config import tolerances
from .errors import DomainError, NumericalError


@dataclass(frozen=True)
class Mobius:
    """Disk automorphism ``z -> rotation * k (z - a)/(1 - conj(a) z)``."""

    a: complex
    rotation: complex = 1.0 + 0.0j

    def __post_init__(self):
        tol = tolerances()
        a = complex(self.a)
        rot = complex(self.rotation)
        if not (np.isfinite(a.real) and np.isfinite(a.imag)):
            raise DomainError("non-finite Mobius parameter")
        if abs(a) > 1.0 - tol.eps_boundary:
            raise DomainError(f"Mobius parameter |a| = {abs(a)} too close to the unit circle")
        r = abs(rot)
        if abs(r - 1.0) > tol.tol_unimodular:
            raise DomainError(f"rotation modulus {r} is not unimodular")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "rotation", rot / r)

    @property
    def k(self) -> complex:
        return (1.0 - self.a.conjugate()) / (1.0 - self.a)

    def matrix(self) -> np.ndarray:
        rk = self.rotation * self.k
        return np.array([[rk, -rk * self.a], [-self.a.conjugate(), 1.0]], dtype=complex)

    def eval_raw(self, z: complex) -> complex:
        """Evaluate without the closed-disk domain check (rational extension)."""
        den = 1.0 - self.a.conjugate() * z
        if abs(den) < tolerances().eps_singular:
            raise DomainError("evaluation at the pole of the automorphism")
        return self.rotation * self.k * (z - self.a) / den

    def __call__(self, z: complex) -> complex:
        tol = tolerances()
        z = complex(z)
        if not (np.isfinite(z.real) and np.isfinite(z.imag)):
            raise DomainError("non-finite evaluation point")
        if abs(z) > 1.0 + tol.tol_eval:
            raise DomainError(f"|z| = {abs(z)} outside the closed unit disk")
        return self.eval_raw(z)


IDENTITY = Mobius(0.0, 1.0)


def mobius_to_zero(a: complex) -> Mobius:
    """The unique automorphism sending ``a`` to 0 and fixing the point 1."""
    return Mobius(a, 1.0)


def _from_matrix(mat) -> Mobius:
    (A, B), (C, D) = mat
    if abs(A) < 1e-300:
        raise NumericalError("degenerate automorphism matrix")
    a = -B / A
    rot = (A + B) / (C + D)
    return Mobius(a, rot)


def mobius_compose(m1: Mobius, m2: Mobius) -> Mobius:
    """The automorphism ``z -> m1(m2(z))``."""
    return _from_matrix(m1.matrix() @ m2.matrix())


def mobius_invert(m: Mobius) -> Mobius:
    (A, B), (C, D) = m.matrix()
    return _from_matrix(np.array([[D, -B], [-C, A]], dtype=complex))


def mobius_from_specs(p: complex, b: complex) -> Mobius:
    """The unique automorphism sending the interior point ``p`` to 0 and the
    circle point ``b`` to 1."""
    tol = tolerances()
    p = complex(p)
    b = complex(b)
    if abs(p) > 1.0 - tol.eps_boundary:
        raise DomainError("interior specification point too close to the circle")
    if abs(abs(b) - 1.0) > tol.tol_unimodular:
        raise DomainError("boundary specification point is not on the unit circle")
    b = b / abs(b)
    core = Mobius(p, 1.0)
    image = core.eval_raw(b)
    return Mobius(p, image.conjugate() / abs(image))


def unit(angle: float) -> complex:
    """Point of the unit circle at the given angle (radians)."""
    return cmath.exp(1j * angle)
