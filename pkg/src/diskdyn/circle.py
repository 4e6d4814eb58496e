"""Boundary dynamics of an expanding degree-d circle covering.

For a boundary-rooted, origin-fixing product the induced circle map is
strictly expanding, so the iterated preimages of a boundary fixed point are
dense and carry a canonical coordinate t with t(base) = 0 in which the map
becomes multiplication by d on R/Z.  The coordinate table below holds all
d^k depth-k preimages in counterclockwise order; entry j gets the exact
rational coordinate j/d^k.  The same preimage trees give the balanced
invariant measure: the measure of an arc is the limit of (depth-k preimages
of 1 inside the arc)/d^k, and arc counts are exact integers at every depth,
so additivity holds exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .blaschke import BlaschkeProduct, circle_preimages_batch, fixed_points
from .config import tolerances
from .errors import BudgetError, DomainError, NumericalError

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ArcInterval:
    """Counterclockwise half-open arc [start, end) of angles in radians."""

    start: float
    end: float

    def __post_init__(self):
        length = self.end - self.start
        if not (0.0 < length <= _TWO_PI):
            raise DomainError("arc length must lie in (0, 2*pi]")
        object.__setattr__(self, "start", self.start % _TWO_PI)
        object.__setattr__(self, "end", self.start + length)

    @property
    def length(self) -> float:
        return self.end - self.start

    def contains_angle(self, theta: float) -> bool:
        if self.length == _TWO_PI:
            return True
        return (theta - self.start) % _TWO_PI < self.length

    def contains(self, z: complex) -> bool:
        return self.contains_angle(math.atan2(z.imag, z.real))


@dataclass(frozen=True)
class CircleCoordinateTable:
    base_point: complex
    degree: int
    depth: int
    points: np.ndarray          # d^k circle points, ccw from the base point
    rel_angles: np.ndarray      # angles relative to the base point, ascending in [0, 2pi)

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def denominator(self) -> int:
        return self.degree ** self.depth

    def coordinate(self, index: int) -> Fraction:
        return Fraction(index, self.denominator)

    def entries(self):
        den = self.denominator
        for j, z in enumerate(self.points):
            yield complex(z), Fraction(j, den)


def _check_normalized(b: BlaschkeProduct):
    tol = tolerances()
    if b.degree < 2:
        raise DomainError("circle dynamics needs degree >= 2")
    if abs(b.eval_raw(0.0)) > tol.tol_eval:
        raise DomainError("map must fix the origin for the coordinate construction")
    if not b.is_boundary_rooted:
        raise DomainError("map must be boundary-rooted")


def _preimage_levels(b: BlaschkeProduct, z0: complex, depth: int) -> np.ndarray:
    """All d^depth solutions of B^k(z) = z0, as a flat array."""
    tol = tolerances()
    d = b.degree
    if d ** depth > tol.max_table:
        raise BudgetError(f"table size {d}^{depth} exceeds the {tol.max_table} budget")
    pts = np.array([z0], dtype=complex)
    for _ in range(depth):
        pts = circle_preimages_batch(b, pts).ravel()
    return pts


def build_coordinate_table(
    b: BlaschkeProduct, depth: int, base_index: int = 0
) -> CircleCoordinateTable:
    """Depth-k coordinate table for a boundary-rooted, origin-fixing product.

    ``base_index`` selects the boundary fixed point used as coordinate zero,
    counting counterclockwise from angle 0; the default picks the one of
    smallest nonnegative argument, which for these maps is the point 1.
    """
    _check_normalized(b)
    if depth < 1:
        raise DomainError("depth must be >= 1")
    report = fixed_points(b)
    bps = sorted(report.boundary, key=lambda z: math.atan2(z.imag, z.real) % _TWO_PI)
    if not -len(bps) <= base_index < len(bps):
        raise DomainError(f"base_index {base_index} out of range for {len(bps)} fixed points")
    z0 = bps[base_index]
    if abs(z0 - 1.0) < 1e-9:
        z0 = 1.0 + 0.0j
    pts = _preimage_levels(b, z0, depth)
    base_angle = math.atan2(z0.imag, z0.real)
    rel = (np.angle(pts) - base_angle) % _TWO_PI
    rel[rel > _TWO_PI - 1e-9] = 0.0
    order = np.argsort(rel, kind="stable")
    pts = pts[order]
    rel = rel[order]
    if pts.size != b.degree ** depth:
        raise NumericalError("table size mismatch after preimage solves")
    if pts.size > 1 and float(np.min(np.diff(rel))) <= 0.0:
        raise NumericalError("coincident table entries; preimage solve failed")
    if abs(pts[0] - z0) > 1e-7:
        raise NumericalError("base fixed point did not survive the preimage tree")
    return CircleCoordinateTable(complex(z0), b.degree, depth, pts, rel)


def boundary_coordinate(table: CircleCoordinateTable, z: complex):
    """Coordinate of a circle point, interpolated between bracketing entries.

    Returns (t, bound) with t in [0, 1); ``bound`` is the coordinate gap
    1/d^k of the bracketing entries, which bounds the interpolation error.
    """
    z = complex(z)
    if abs(abs(z) - 1.0) > tolerances().tol_unimodular:
        raise DomainError("coordinate lookup requires a unit-circle point")
    base_angle = math.atan2(table.base_point.imag, table.base_point.real)
    rel = (math.atan2(z.imag, z.real) - base_angle) % _TWO_PI
    n = table.size
    den = table.denominator
    idx = int(np.searchsorted(table.rel_angles, rel, side="right")) - 1
    if idx < 0:
        idx = n - 1
    lo = table.rel_angles[idx]
    hi = table.rel_angles[(idx + 1) % n]
    span = (hi - lo) % _TWO_PI
    if span == 0.0:
        span = _TWO_PI
    frac = ((rel - lo) % _TWO_PI) / span
    t = (idx + min(frac, 1.0)) / den
    return t % 1.0, 1.0 / den


def nearest_entry(table: CircleCoordinateTable, z: complex):
    """Index and chordal distance of the table entry closest to z."""
    dist = np.abs(table.points - complex(z))
    idx = int(np.argmin(dist))
    return idx, float(dist[idx])


def conjugacy_check(b: BlaschkeProduct, table: CircleCoordinateTable):
    """Apply the map to every table entry and match against the table.

    Returns (exact, residual): ``exact`` is True when entry j always lands on
    entry (d*j mod d^k) in index arithmetic, ``residual`` is the largest
    chordal mismatch of the landing points.
    """
    imgs = b.eval_array(table.points)
    n = table.size
    base = math.atan2(table.base_point.imag, table.base_point.real)
    rel = (np.angle(imgs) - base) % _TWO_PI
    pos = np.searchsorted(table.rel_angles, rel)
    lo = (pos - 1) % n
    hi = pos % n
    d_lo = np.abs(imgs - table.points[lo])
    d_hi = np.abs(imgs - table.points[hi])
    idx = np.where(d_lo < d_hi, lo, hi)
    dist = np.minimum(d_lo, d_hi)
    expected = (table.degree * np.arange(n)) % n
    return bool(np.array_equal(idx, expected)), float(dist.max())


def invariant_measure(b: BlaschkeProduct, arc: ArcInterval, depth: int) -> Fraction:
    """Balanced-measure value of an arc at finite depth: N(k)/d^k with N(k)
    counting depth-k preimages of the point 1 inside the arc."""
    _check_normalized(b)
    pts = _preimage_levels(b, 1.0 + 0.0j, depth)
    angles = np.angle(pts) % _TWO_PI
    if arc.length == _TWO_PI:
        count = pts.size
    else:
        count = int(np.count_nonzero((angles - arc.start) % _TWO_PI < arc.length))
    return Fraction(count, b.degree ** depth)


@dataclass(frozen=True)
class BalancedReport:
    arc: ArcInterval
    parent_measure: Fraction
    component_arcs: tuple
    component_measures: tuple
    max_deviation: Fraction

    @property
    def expected_share(self) -> Fraction:
        return self.parent_measure / len(self.component_arcs)


def verify_balanced(b: BlaschkeProduct, arc: ArcInterval, depth: int) -> BalancedReport:
    """Split the preimage of an arc into its d component arcs and compare
    each component's measure against measure(arc)/d."""
    _check_normalized(b)
    if arc.length >= math.pi:
        raise DomainError("balanced check needs an arc shorter than pi")
    d = b.degree
    start_pre = circle_preimages_batch(b, np.array([np.exp(1j * arc.start)]))[0]
    end_pre = circle_preimages_batch(b, np.array([np.exp(1j * arc.end)]))[0]
    start_angles = np.sort(np.angle(start_pre) % _TWO_PI)
    end_angles = np.angle(end_pre) % _TWO_PI

    comps = []
    for sa in start_angles:
        gaps = (end_angles - sa) % _TWO_PI
        ea = sa + float(np.min(gaps))
        comp = ArcInterval(sa, ea)
        mid = np.exp(1j * (sa + comp.length / 2.0))
        img = b.eval_raw(complex(mid))
        if not arc.contains(img):
            raise NumericalError("component-arc midpoint does not map into the arc")
        comps.append(comp)

    parent = invariant_measure(b, arc, depth)
    measures = tuple(invariant_measure(b, comp, depth) for comp in comps)
    share = parent / d
    deviation = max(abs(m - share) for m in measures)
    return BalancedReport(arc, parent, tuple(comps), measures, deviation)
