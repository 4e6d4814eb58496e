"""Finite Blaschke products: the proper holomorphic self-maps of the disk.

A degree-d product is stored in factored form as a unimodular constant ``c``
together with its d zeros, i.e. ``B(z) = c * m_{a_1}(z) * ... * m_{a_d}(z)``
where each ``m_a`` is the normalized disk automorphism of :mod:`.disk` that
sends ``a`` to 0 and fixes 1.  Consequently ``c = B(1)``, and the map is
*boundary-rooted* exactly when ``c = 1``.  The factored form is kept
throughout; expanded rational coefficients appear only transiently inside the
algebraic solvers (fixed points, preimages, critical points), all of which
reduce to polynomial root extraction on a numerator.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import roots as rt
from .config import tolerances
from .disk import Mobius, mobius_from_specs, mobius_invert
from .errors import (
    DomainError,
    NoInteriorFixedPoint,
    NumericalError,
    TangencyWarning,
)


@dataclass(frozen=True)
class BlaschkeProduct:
    c: complex
    zeros: tuple

    def __post_init__(self):
        tol = tolerances()
        zs = tuple(complex(z) for z in self.zeros)
        if len(zs) < 1:
            raise DomainError("a Blaschke product needs at least one zero")
        for z in zs:
            if not (np.isfinite(z.real) and np.isfinite(z.imag)):
                raise DomainError("non-finite zero")
            if abs(z) > 1.0 - tol.eps_boundary:
                raise DomainError(f"zero with |a| = {abs(z)} too close to the unit circle")
        c = complex(self.c)
        r = abs(c)
        if abs(r - 1.0) > tol.tol_unimodular:
            raise DomainError(f"constant modulus {r} is not unimodular")
        object.__setattr__(self, "c", c / r)
        object.__setattr__(self, "zeros", zs)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @property
    def is_boundary_rooted(self) -> bool:
        return abs(self.c - 1.0) <= tolerances().tol_eval

    def eval_raw(self, z: complex) -> complex:
        """Evaluate the rational extension without the domain check."""
        tol = tolerances()
        val = self.c
        for a in self.zeros:
            den = 1.0 - a.conjugate() * z
            if abs(den) < tol.eps_singular:
                raise DomainError("evaluation at a pole of the rational extension")
            k = (1.0 - a.conjugate()) / (1.0 - a)
            val *= k * (z - a) / den
        return val

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        if not (np.isfinite(z.real) and np.isfinite(z.imag)):
            raise DomainError("non-finite evaluation point")
        if abs(z) > 1.0 + tolerances().tol_eval:
            raise DomainError(f"|z| = {abs(z)} outside the closed unit disk")
        return self.eval_raw(z)

    def eval_array(self, zs) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        val = np.full_like(zs, self.c)
        for a in self.zeros:
            k = (1.0 - a.conjugate()) / (1.0 - a)
            val *= k * (zs - a) / (1.0 - a.conjugate() * zs)
        return val

    def derivative(self, z: complex) -> complex:
        """B'(z) by the product rule over the stored factors."""
        z = complex(z)
        factors = []
        dfactors = []
        for a in self.zeros:
            k = (1.0 - a.conjugate()) / (1.0 - a)
            den = 1.0 - a.conjugate() * z
            factors.append(k * (z - a) / den)
            dfactors.append(k * (1.0 - abs(a) ** 2) / (den * den))
        total = 0.0 + 0.0j
        for i in range(len(factors)):
            term = dfactors[i]
            for j in range(len(factors)):
                if j != i:
                    term *= factors[j]
            total += term
        return self.c * total


@dataclass(frozen=True)
class FixedPointReport:
    interior: complex | None
    boundary: tuple
    multipliers: tuple


def power_map(d: int) -> BlaschkeProduct:
    """The map z -> z**d."""
    return BlaschkeProduct(1.0, (0.0,) * d)


# ---------------------------------------------------------------------------
# numerator polynomials (ascending coefficient arrays)

def _zero_poly(b: BlaschkeProduct) -> np.ndarray:
    """E(z) = prod (z - a_j), monic of degree d."""
    return rt.poly_from_roots(b.zeros)


def _pole_poly(b: BlaschkeProduct) -> np.ndarray:
    """Q(z) = prod (1 - conj(a_j) z), degree <= d, padded to length d+1."""
    out = np.array([1.0 + 0.0j])
    for a in b.zeros:
        out = np.convolve(out, np.array([1.0, -a.conjugate()], dtype=complex))
    pad = b.degree + 1 - out.size
    if pad > 0:
        out = np.concatenate([out, np.zeros(pad, dtype=complex)])
    return out


def _front_constant(b: BlaschkeProduct) -> complex:
    ck = b.c
    for a in b.zeros:
        ck *= (1.0 - a.conjugate()) / (1.0 - a)
    return ck


def _angle_key(z: complex) -> float:
    """Angle in [0, 2pi), with points a hair clockwise of 1 snapped to sort first."""
    theta = math.atan2(z.imag, z.real) % (2.0 * math.pi)
    if theta > 2.0 * math.pi - 1e-9:
        theta -= 2.0 * math.pi
    return theta


def log_derivative_on_circle(b: BlaschkeProduct, z: complex) -> complex:
    """z B'(z)/B(z) on |z| = 1: a sum of d real positive terms."""
    z = complex(z)
    if abs(abs(z) - 1.0) > tolerances().tol_unimodular:
        raise DomainError("logarithmic derivative is only taken on the unit circle")
    total = 0.0 + 0.0j
    for a in b.zeros:
        total += z * (1.0 - abs(a) ** 2) / ((z - a) * (1.0 - a.conjugate() * z))
    return total


def critical_points(b: BlaschkeProduct) -> list:
    """The d-1 critical points inside the open disk (with multiplicity)."""
    d = b.degree
    if d < 2:
        raise DomainError("critical points need degree >= 2")
    tol = tolerances()
    factor_polys = []
    for a in b.zeros:
        factor_polys.append(np.array([-a, 1.0 + abs(a) ** 2, -a.conjugate()], dtype=complex))
    num = np.zeros(2 * d - 1, dtype=complex)
    for i, a in enumerate(b.zeros):
        term = np.array([1.0 + 0.0j])
        for j in range(d):
            if j != i:
                term = np.convolve(term, factor_polys[j])
        weight = 1.0 - abs(a) ** 2
        num[: term.size] += weight * term
    candidates = rt.roots(num)
    inside = [complex(z) for z in candidates if abs(z) < 1.0 - tol.snap_circle]
    ambiguous = [z for z in candidates if abs(abs(z) - 1.0) <= tol.snap_circle]
    if ambiguous:
        raise NumericalError("critical point too close to the unit circle to classify")
    if len(inside) != d - 1:
        raise NumericalError(
            f"found {len(inside)} interior critical points, expected {d - 1}"
        )
    return sorted(inside, key=lambda z: (z.real, z.imag))


def fixed_points(b: BlaschkeProduct) -> FixedPointReport:
    """Classify all solutions of B(z) = z in the closed disk.

    With an interior fixed point present the report carries exactly d-1
    distinct repelling boundary fixed points.  Without one, the boundary list
    is a lower bound for the multiplicity count and near-tangent points raise
    :class:`TangencyWarning`.
    """
    d = b.degree
    if d < 2:
        raise DomainError("fixed-point classification needs degree >= 2")
    tol = tolerances()
    coeffs = np.zeros(d + 2, dtype=complex)
    coeffs[: d + 1] += _front_constant(b) * _zero_poly(b)
    coeffs[1:] -= _pole_poly(b)
    candidates = rt.roots(coeffs)

    interior: list[complex] = []
    circle: list[complex] = []
    for z in candidates:
        z = complex(z)
        r = abs(z)
        if abs(r - 1.0) <= tol.snap_circle:
            circle.append(z / r)
        elif r < 1.0:
            interior.append(z)

    merged: list[list[complex]] = []
    for z in sorted(circle, key=_angle_key):
        if merged and abs(z - merged[-1][-1]) < 1e-7:
            merged[-1].append(z)
        else:
            merged.append([z])
    if len(merged) > 1 and abs(merged[0][0] - merged[-1][-1]) < 1e-7:
        merged[0].extend(merged.pop())

    boundary: list[complex] = []
    multipliers: list[float] = []
    for cluster in merged:
        rep = sum(cluster) / len(cluster)
        rep = rep / abs(rep)
        mult = b.derivative(rep)
        if abs(mult.imag) > 1e-6 * (1.0 + abs(mult.real)):
            raise NumericalError("boundary multiplier is not real")
        if len(cluster) > 1 or abs(mult.real - 1.0) < tol.tol_multiplicity:
            warnings.warn(
                TangencyWarning(
                    f"boundary fixed point near {rep:.6f} has multiplier "
                    f"{mult.real:.8f}; multiplicity is ambiguous"
                )
            )
        boundary.append(rep)
        multipliers.append(mult.real)

    if len(interior) > 1:
        raise NumericalError("more than one interior fixed point reported by the solver")
    interior_pt = interior[0] if interior else None
    if interior_pt is not None and len(boundary) != d - 1:
        raise NumericalError(
            f"interior fixed point present but {len(boundary)} boundary fixed points"
            f" found, expected {d - 1}"
        )
    return FixedPointReport(interior_pt, tuple(boundary), tuple(multipliers))


def preimages(b: BlaschkeProduct, target: complex) -> list:
    """The d solutions of B(z) = target in the closed disk (with multiplicity)."""
    tol = tolerances()
    target = complex(target)
    if abs(target) > 1.0 + tol.tol_eval:
        raise DomainError("preimage target outside the closed unit disk")
    if target == 0:
        return sorted(b.zeros, key=lambda z: (z.real, z.imag))
    coeffs = _front_constant(b) * _zero_poly(b) - target * _pole_poly(b)
    sols = [complex(z) for z in rt.roots(coeffs)]
    if len(sols) != b.degree:
        raise NumericalError(f"{len(sols)} preimages found, expected {b.degree}")
    on_circle = abs(abs(target) - 1.0) <= tol.tol_unimodular
    if on_circle:
        sols = [z / abs(z) for z in sols]
        sols.sort(key=_angle_key)
        for u, v in zip(sols, sols[1:] + sols[:1]):
            if abs(u - v) < 1e-9 and len(sols) > 1:
                raise NumericalError("circle preimages are not distinct")
    else:
        sols.sort(key=lambda z: (z.real, z.imag))
    residual = max(abs(b.eval_raw(z) - target) for z in sols)
    if residual > 1e-6:
        raise NumericalError(f"preimage residual {residual} too large")
    return sols


def circle_preimages_batch(b: BlaschkeProduct, targets: np.ndarray) -> np.ndarray:
    """Preimages of many unit-circle targets at once, shape (m, d).

    Rows are seeded from the rotated d-th-root pattern of the target angle
    and iterated simultaneously; rows that stall fall back to the scalar
    solver.  All outputs are snapped radially onto the circle.
    """
    targets = np.asarray(targets, dtype=complex)
    d = b.degree
    ck = _front_constant(b)
    epoly = ck * _zero_poly(b)
    qpoly = _pole_poly(b)
    rows = epoly[None, :] - targets[:, None] * qpoly[None, :]
    theta = np.angle(targets)
    offsets = 2.0 * np.pi * np.arange(d)
    init = np.exp(1j * (theta[:, None] + offsets[None, :]) / d)
    sols, ok = rt.batched_roots(rows, init)
    for i in np.nonzero(~ok)[0]:
        sols[i] = rt.roots(rows[i])
    radii = np.abs(sols)
    if np.any(np.abs(radii - 1.0) > tolerances().snap_circle):
        raise NumericalError("circle preimage strayed from the unit circle")
    return sols / radii


def conformal_barycenter(points) -> complex:
    """The unique disk point p whose centering automorphism balances the points.

    Solves sum_j m_p(c_j) = 0 for p by damped Newton in the two real
    coordinates of p, starting from the Euclidean mean.  The unimodular
    front factor of m_p does not affect the zero condition, so the residual
    is taken on H(p) = sum (c_j - p)/(1 - conj(p) c_j).
    """
    tol = tolerances()
    pts = [complex(z) for z in points]
    if not pts:
        raise DomainError("barycenter of an empty configuration")
    for z in pts:
        if abs(z) > 1.0 - tol.eps_boundary:
            raise DomainError("barycenter input too close to the unit circle")
    arr = np.array(pts, dtype=complex)
    n = arr.size

    def residual(p):
        return np.sum((arr - p) / (1.0 - np.conj(p) * arr))

    p = complex(np.mean(arr))
    h = residual(p)
    target = 1e-13 * n
    for _ in range(200):
        if abs(h) <= target:
            break
        den = 1.0 - np.conj(p) * arr
        hp = np.sum(-1.0 / den)
        hpb = np.sum((arr - p) * arr / (den * den))
        # solve hp*delta + hpb*conj(delta) = -h as a real 2x2 system
        m11 = (hp + hpb).real
        m12 = -(hp - hpb).imag
        m21 = (hp + hpb).imag
        m22 = (hp - hpb).real
        det = m11 * m22 - m12 * m21
        if abs(det) < 1e-300:
            raise NumericalError("singular Newton system in barycenter solve")
        dx = (-h.real * m22 + h.imag * m12) / det
        dy = (-m11 * h.imag + m21 * h.real) / det
        step = complex(dx, dy)
        accepted = False
        for _ in range(50):
            cand = p + step
            if abs(cand) < 1.0 - 1e-9:
                hc = residual(cand)
                if abs(hc) < abs(h):
                    p, h = cand, hc
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            raise NumericalError("barycenter Newton step failed to decrease the residual")
    if abs(h) > tol.tol_barycenter:
        raise NumericalError(f"barycenter residual {abs(h)} above tolerance")
    return p


def matched_constant(zeros, ref_point: complex, ref_value: complex) -> complex:
    """Unimodular constant making the product with ``zeros`` hit ``ref_value``
    at ``ref_point``."""
    prod = 1.0 + 0.0j
    for a in zeros:
        k = (1.0 - a.conjugate()) / (1.0 - a)
        prod *= k * (ref_point - a) / (1.0 - a.conjugate() * ref_point)
    c = ref_value / prod
    r = abs(c)
    if abs(r - 1.0) > 1e-6:
        raise NumericalError(f"matched constant has modulus {r}")
    return c / r


def conjugate_blaschke(phi: BlaschkeProduct, h: Mobius) -> BlaschkeProduct:
    """The product h^{-1} o phi o h in factored form."""
    hinv = mobius_invert(h)
    center = h.eval_raw(0.0)
    zeros = sorted(
        (hinv.eval_raw(u) for u in preimages(phi, center)),
        key=lambda z: (z.real, z.imag),
    )
    ref = hinv.eval_raw(phi.eval_raw(h.eval_raw(-1.0)))
    return BlaschkeProduct(matched_constant(zeros, -1.0, ref), tuple(zeros))


def compose_blaschke(outer: BlaschkeProduct, inner: BlaschkeProduct) -> BlaschkeProduct:
    """The composite outer o inner as a single factored product."""
    zeros: list[complex] = []
    for t in outer.zeros:
        zeros.extend(preimages(inner, t))
    zeros.sort(key=lambda z: (z.real, z.imag))
    ref = outer.eval_raw(inner.eval_raw(-1.0))
    return BlaschkeProduct(matched_constant(zeros, -1.0, ref), tuple(zeros))


def normalize_fixed_point_centered(phi: BlaschkeProduct):
    """All d-1 conjugations of ``phi`` to boundary-rooted, origin-fixing form.

    Each conjugating automorphism h carries 0 to the interior fixed point and
    1 to one of the d-1 boundary fixed points; the returned pairs are
    (h^{-1} o phi o h, h), ordered by the boundary point's angle.
    """
    report = fixed_points(phi)
    if report.interior is None:
        raise NoInteriorFixedPoint("the map has no interior fixed point")
    out = []
    for bpt in report.boundary:
        hinv = mobius_from_specs(report.interior, bpt)
        h = mobius_invert(hinv)
        out.append((conjugate_blaschke(phi, h), h))
    return out


def normalize_critically_centered(phi: BlaschkeProduct):
    """All d right-compositions ``phi o h`` that are boundary-rooted and have
    zero-sum critical points.

    Each h carries 0 to the conformal barycenter of the critical points of
    ``phi`` and 1 to one of the d circle preimages of 1.
    """
    if phi.degree < 2:
        raise DomainError("critical centering needs degree >= 2")
    bary = conformal_barycenter(critical_points(phi))
    out = []
    for bpt in preimages(phi, 1.0):
        hinv = mobius_from_specs(bary, bpt)
        h = mobius_invert(hinv)
        zeros = [hinv.eval_raw(a) for a in phi.zeros]
        ref = phi.eval_raw(h.eval_raw(-1.0))
        comp = BlaschkeProduct(matched_constant(zeros, -1.0, ref), tuple(zeros))
        out.append((comp, h))
    return out


def zero_sum_to_critically_centered(b: BlaschkeProduct):
    """From zero-sum-of-zeros form to critically centered form.

    For boundary-rooted ``b`` with zeros summing to zero there is a unique
    boundary-rooted automorphism ``eta`` with ``b = b' o eta`` and ``b'``
    critically centered; returns (b', eta).  Zero order is preserved, which
    the parameter charts rely on.
    """
    if not b.is_boundary_rooted:
        raise DomainError("zero-sum normal form requires a boundary-rooted product")
    if abs(sum(b.zeros)) > 1e-6 * b.degree:
        raise DomainError("zeros do not sum to zero")
    bary = conformal_barycenter(critical_points(b))
    eta = mobius_from_specs(bary, 1.0)
    eta_inv = mobius_invert(eta)
    zeros = tuple(eta.eval_raw(a) for a in b.zeros)
    ref = b.eval_raw(eta_inv.eval_raw(-1.0))
    return BlaschkeProduct(matched_constant(zeros, -1.0, ref), zeros), eta


def critically_centered_to_zero_sum(bprime: BlaschkeProduct):
    """Inverse of :func:`zero_sum_to_critically_centered`; returns (b, eta)
    with ``b = b' o eta`` having zero-sum zeros."""
    q = conformal_barycenter(bprime.zeros)
    g = mobius_from_specs(q, 1.0)   # this is eta^{-1}
    eta = mobius_invert(g)
    zeros = tuple(g.eval_raw(z) for z in bprime.zeros)
    ref = bprime.eval_raw(eta.eval_raw(-1.0))
    return BlaschkeProduct(matched_constant(zeros, -1.0, ref), zeros), eta


def multiset_close(xs, ys, tol: float) -> bool:
    """Whether two point multisets match pairwise within ``tol``."""
    import itertools

    xs = list(xs)
    ys = list(ys)
    if len(xs) != len(ys):
        return False
    n = len(xs)
    if n <= 6:
        return any(
            all(abs(x - y) <= tol for x, y in zip(xs, perm))
            for perm in itertools.permutations(ys)
        )
    remaining = ys[:]
    for x in xs:
        best = None
        best_d = tol
        for i, y in enumerate(remaining):
            d = abs(x - y)
            if d <= best_d:
                best, best_d = i, d
        if best is None:
            return False
        remaining.pop(best)
    return True


def blaschke_close(b1: BlaschkeProduct, b2: BlaschkeProduct, tol: float) -> bool:
    return (
        b1.degree == b2.degree
        and abs(b1.c - b2.c) <= tol
        and multiset_close(b1.zeros, b2.zeros, tol)
    )
