"""Normal-form spaces of proper self-maps of labeled disk unions.

A member assigns to each schema vertex v a boundary-rooted degree-d(v)
product; periodic vertices fix the origin and non-periodic vertices have
zero-sum critical points.  The space is an open cell: a chart takes, per
vertex, w(v) free zeros (the origin zero is implicit at periodic vertices;
the balancing zero and the critical recentering are reconstructed at
non-periodic ones).

Boundary markings of a member are equivariant systems of circle points: a
schema automorphism iota plus one point q(v) on the circle of component
iota(v) with factor_{iota(v)}(q(v)) = q(F(v)).  Around a cycle the marking
point is a boundary fixed point of the cycle's composite return map, and at
tree vertices it is one of the d(v) circle preimages of the parent's point,
so the marking count is |Aut| * prod (D_c - 1) * prod d(v) -- the symmetry
group order.

The group acts by re-marking: an element selects the marking whose intrinsic
boundary coordinates equal the element's exact rational angles, and
conjugation by the corresponding component rotations produces another member.
Coordinates are intrinsic (counterclockwise rank from the point 1), which
makes the selection compose exactly under the group law of :mod:`.schema`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .blaschke import (
    BlaschkeProduct,
    blaschke_close,
    compose_blaschke,
    critical_points,
    fixed_points,
    matched_constant,
    power_map,
    preimages,
    zero_sum_to_critically_centered,
)
from .config import tolerances
from .disk import mobius_from_specs
from .errors import (
    DomainError,
    MembershipError,
    NumericalError,
    ValidationError,
)
from .schema import (
    GroupElement,
    MappingSchema,
    automorphism_group,
    group_elements,
    identity_element,
)

_TWO_PI = 2.0 * math.pi
_COMPOSE_DEGREE_CAP = 64


@dataclass(frozen=True)
class ModelMap:
    schema: MappingSchema
    factors: tuple  # BlaschkeProduct per schema vertex, in id order

    def factor(self, v: str) -> BlaschkeProduct:
        return self.factors[self.schema.index(v)]

    def to_dict(self) -> dict:
        return {
            "schema": self.schema.to_dict(),
            "factors": {
                v: {
                    "c": [f.c.real, f.c.imag],
                    "zeros": [[z.real, z.imag] for z in f.zeros],
                }
                for v, f in zip(self.schema.ids, self.factors)
            },
        }

    @staticmethod
    def from_dict(data: dict) -> "ModelMap":
        try:
            s = MappingSchema.from_dict(data["schema"])
            factors = []
            for v in s.ids:
                fd = data["factors"][v]
                c = complex(fd["c"][0], fd["c"][1])
                zeros = tuple(complex(z[0], z[1]) for z in fd["zeros"])
                factors.append(BlaschkeProduct(c, zeros))
        except (KeyError, TypeError, IndexError) as exc:
            raise ValidationError(f"malformed model payload: {exc}") from exc
        return ModelMap(s, tuple(factors))


@dataclass(frozen=True)
class BoundaryMarking:
    iota: dict   # vertex -> vertex (schema automorphism)
    points: dict  # vertex -> circle point


def center_map(s: MappingSchema) -> ModelMap:
    return ModelMap(s, tuple(power_map(s.d(v)) for v in s.ids))


def validate_membership(m: ModelMap) -> None:
    tol = tolerances()
    s = m.schema
    if len(m.factors) != s.size:
        raise ValidationError("factor count does not match the schema")
    periodic = s.periodic_vertices()
    for v, f in zip(s.ids, m.factors):
        if f.degree != s.d(v):
            raise MembershipError(v, "degree", f"{f.degree} != {s.d(v)}")
        root_res = abs(f.eval_raw(1.0) - 1.0)
        if root_res > tol.tol_eval:
            raise MembershipError(v, "boundary-rooted", f"residual {root_res}")
        if v in periodic:
            center_res = abs(f.eval_raw(0.0))
            if center_res > tol.tol_eval:
                raise MembershipError(v, "center-fixing", f"residual {center_res}")
        else:
            crit_sum = abs(sum(critical_points(f)))
            if crit_sum > tol.tol_barycenter:
                raise MembershipError(v, "critically-centered", f"residual {crit_sum}")


def is_member(m: ModelMap) -> bool:
    try:
        validate_membership(m)
        return True
    except (MembershipError, ValidationError):
        return False


# ---------------------------------------------------------------------------
# parameter chart (dimension 2w)

def sample(s: MappingSchema, params) -> ModelMap:
    """Member from 2w real parameters: per vertex, its w(v) free zeros."""
    tol = tolerances()
    vals = [float(x) for x in params]
    if len(vals) != 2 * s.total_weight:
        raise DomainError(
            f"parameter vector has {len(vals)} entries, expected {2 * s.total_weight}"
        )
    periodic = s.periodic_vertices()
    factors = []
    pos = 0
    for v in s.ids:
        w = s.w(v)
        free = tuple(complex(vals[pos + 2 * i], vals[pos + 2 * i + 1]) for i in range(w))
        pos += 2 * w
        for z in free:
            if abs(z) > 1.0 - tol.eps_boundary:
                raise DomainError(f"free zero {z} outside the open disk at vertex {v!r}")
        if v in periodic:
            factors.append(BlaschkeProduct(1.0, (0.0 + 0.0j,) + free))
        else:
            forced = -sum(free)
            if abs(forced) > 1.0 - tol.eps_boundary:
                raise DomainError(
                    f"balancing zero {forced} leaves the disk at vertex {v!r}"
                )
            zero_sum = BlaschkeProduct(1.0, (forced,) + free)
            centered, _ = zero_sum_to_critically_centered(zero_sum)
            factors.append(centered)
    return ModelMap(s, tuple(factors))


def parameters_of(m: ModelMap) -> list:
    """Inverse chart; for sampled members this is an exact round trip."""
    from .blaschke import conformal_barycenter

    s = m.schema
    periodic = s.periodic_vertices()
    out: list[float] = []
    for v, f in zip(s.ids, m.factors):
        if v in periodic:
            idx = min(range(f.degree), key=lambda i: abs(f.zeros[i]))
            if abs(f.zeros[idx]) > 1e-7:
                raise MembershipError(v, "center-fixing", "no zero at the origin")
            free = [z for i, z in enumerate(f.zeros) if i != idx]
        else:
            q = conformal_barycenter(f.zeros)
            g = mobius_from_specs(q, 1.0)
            pre = [g.eval_raw(z) for z in f.zeros]
            if abs(sum(pre)) > 1e-6 * f.degree:
                raise NumericalError("recentering did not balance the zeros")
            free = pre[1:]
        for z in free:
            out.extend((z.real, z.imag))
    return out


def is_post_critically_finite(m: ModelMap) -> bool:
    """True iff every factor is the power map within the configured slack
    (all zeros at the origin), the unique critically finite point."""
    tol = tolerances()
    return all(
        abs(z) <= tol.tol_pcf for f in m.factors for z in f.zeros
    )


# ---------------------------------------------------------------------------
# markings

def _snap_one(q: complex) -> complex:
    if abs(q - 1.0) < 1e-9:
        return 1.0 + 0.0j
    return q / abs(q)


def _angle_from_one(z: complex) -> float:
    theta = math.atan2(z.imag, z.real) % _TWO_PI
    if theta > _TWO_PI - 1e-9:
        theta = 0.0
    return theta


def _ccw_from_one(points) -> list:
    return sorted((_snap_one(p) for p in points), key=_angle_from_one)


def twisted_return(m: ModelMap, iota: dict, cycle) -> BlaschkeProduct:
    """Composite of the factors at iota(v) along a schema cycle, rooted at
    the first cycle vertex."""
    comp = None
    degree = 1
    for v in cycle:
        f = m.factor(iota[v])
        degree *= f.degree
        if degree > _COMPOSE_DEGREE_CAP:
            raise NumericalError(
                "composite return degree exceeds the symbolic composition cap"
            )
        comp = f if comp is None else compose_blaschke(f, comp)
    return comp


def _return_fixed_points(m: ModelMap, iota: dict, cycle) -> list:
    """Boundary fixed points of the twisted return map, ccw from the point 1
    (index j carries intrinsic coordinate j/(D-1))."""
    degree = 1
    for v in cycle:
        degree *= m.factor(iota[v]).degree
    if degree <= _COMPOSE_DEGREE_CAP:
        comp = twisted_return(m, iota, cycle)
        report = fixed_points(comp)
        fps = _ccw_from_one(report.boundary)
    else:
        chain = [m.factor(iota[v]) for v in cycle]
        fps = _ccw_from_one(_chain_circle_fixed_points(chain, degree))
    if not fps or abs(fps[0] - 1.0) > 1e-7:
        raise NumericalError("the point 1 is not among the return fixed points")
    fps[0] = 1.0 + 0.0j
    return fps


def _chain_circle_fixed_points(chain, degree) -> list:
    """Circle fixed points of a factor chain by Newton from dense seeds,
    for composites too large to expand symbolically."""
    def ev(z):
        for f in chain:
            z = f.eval_raw(z)
        return z

    def dev(z):
        acc = 1.0 + 0.0j
        for f in chain:
            acc *= f.derivative(z)
            z = f.eval_raw(z)
        return acc

    found = []
    seeds = np.exp(2j * np.pi * (np.arange(4 * degree) + 0.3) / (4 * degree))
    for z in seeds:
        z = complex(z)
        ok = False
        for _ in range(60):
            fz = ev(z) - z
            dfz = dev(z) - 1.0
            if abs(dfz) < 1e-300:
                break
            step = fz / dfz
            z = z - step
            z = z / abs(z)
            if abs(step) < 1e-14:
                ok = True
                break
        if ok and abs(ev(z) - z) < 1e-10:
            found.append(z)
    found = _ccw_from_one(found)
    dedup: list[complex] = []
    for z in found:
        if not dedup or (abs(z - dedup[-1]) > 1e-8 and abs(z - dedup[0]) > 1e-8):
            dedup.append(z)
    if len(dedup) != degree - 1:
        raise NumericalError(
            f"chain fixed-point search found {len(dedup)}, expected {degree - 1}"
        )
    return dedup


def _tree_preimages(factor: BlaschkeProduct, target: complex) -> list:
    """Preimages of a circle target, ccw from the point 1 (rank m carries the
    intrinsic coordinate (t_parent + m)/d)."""
    return _ccw_from_one(preimages(factor, _snap_one(target)))


def select_marking(m: ModelMap, g: GroupElement) -> dict:
    """The boundary marking of ``m`` whose intrinsic coordinates equal the
    exact rational angles of ``g``; covers g's automorphism."""
    s = m.schema
    iota = g.iota_map()
    q: dict[str, complex] = {}
    for cycle in s.cycles():
        root = cycle[0]
        dcomp = s.composite_degree(cycle)
        theta = g.angle(root)
        j = theta * (dcomp - 1)
        if j.denominator != 1:
            raise ValidationError("cycle angle is not a return-map fixed-point label")
        fps = _return_fixed_points(m, iota, cycle)
        cur = fps[int(j) % (dcomp - 1)]
        for v in cycle:
            q[v] = cur
            cur = _snap_one(m.factor(iota[v]).eval_raw(cur))
    for v in s.tree_vertices_outward():
        d = s.d(v)
        mv = g.angle(v) * d - g.angle(s.F(v))
        if mv.denominator != 1:
            raise ValidationError("tree angle is not a preimage label")
        opts = _tree_preimages(m.factor(iota[v]), q[s.F(v)])
        q[v] = opts[int(mv) % d]
    return q


def marking_residual(m: ModelMap, marking: BoundaryMarking) -> float:
    s = m.schema
    res = 0.0
    for v in s.ids:
        img = m.factor(marking.iota[v]).eval_raw(marking.points[v])
        res = max(res, abs(img - marking.points[s.F(v)]))
    return res


def boundary_markings(m: ModelMap) -> list:
    """All boundary markings, enumerated combinatorially (not via the group):
    every automorphism, every return fixed point per cycle, every preimage
    choice per tree vertex."""
    import itertools

    s = m.schema
    cycles = s.cycles()
    trees = s.tree_vertices_outward()
    out = []
    for aut in automorphism_group(s):
        fps_per_cycle = [_return_fixed_points(m, aut, cyc) for cyc in cycles]
        cycle_ranges = [range(len(fps)) for fps in fps_per_cycle]
        tree_ranges = [range(s.d(v)) for v in trees]
        for picks in itertools.product(*cycle_ranges, *tree_ranges):
            cpicks = picks[: len(cycles)]
            tpicks = picks[len(cycles):]
            q: dict[str, complex] = {}
            for cyc, fps, j in zip(cycles, fps_per_cycle, cpicks):
                cur = fps[j]
                for v in cyc:
                    q[v] = cur
                    cur = _snap_one(m.factor(aut[v]).eval_raw(cur))
            for v, mv in zip(trees, tpicks):
                opts = _tree_preimages(m.factor(aut[v]), q[s.F(v)])
                q[v] = opts[mv]
            out.append(BoundaryMarking(dict(aut), q))
    for marking in out:
        if marking_residual(m, marking) > 1e-7:
            raise NumericalError("marking equivariance residual too large")
    return out


# ---------------------------------------------------------------------------
# group action

def act(g: GroupElement, m: ModelMap) -> ModelMap:
    """Re-mark and conjugate: factor'_v(z) = q(F(v))^{-1} factor_{iota(v)}(q(v) z)."""
    s = m.schema
    iota = g.iota_map()
    q = select_marking(m, g)
    factors = []
    for v in s.ids:
        src = m.factor(iota[v])
        qv = q[v]
        qfv = q[s.F(v)]
        zeros = tuple(qv.conjugate() * z for z in src.zeros)
        ref = src.eval_raw(-qv) / qfv
        factors.append(BlaschkeProduct(matched_constant(zeros, -1.0, ref), zeros))
    result = ModelMap(s, tuple(factors))
    try:
        validate_membership(result)
    except MembershipError as exc:
        raise MembershipError(exc.vertex, exc.clause, "conjugation drift") from exc
    return result


def model_close(m1: ModelMap, m2: ModelMap, tol: float) -> bool:
    return all(
        blaschke_close(f1, f2, tol) for f1, f2 in zip(m1.factors, m2.factors)
    )


def kernel_N0(s: MappingSchema, seed: int = 0, probes: int = 20, tol: float | None = None):
    """Group elements acting trivially on a seeded probe set of members."""
    from .sampling import random_member

    tol = tolerances().tol_eval if tol is None else tol
    rng = np.random.default_rng(seed)
    members = [random_member(s, rng) for _ in range(probes)]
    out = []
    for g in group_elements(s):
        if all(model_close(act(g, m), m, tol) for m in members):
            out.append(g)
    return out


def conjugacy_equivalent(
    m1: ModelMap, m2: ModelMap, tol: float | None = None
) -> bool:
    """Whether some symmetry-group element carries m1 to m2 factor-wise."""
    if m1.schema != m2.schema:
        raise ValidationError("conjugacy comparison requires the same schema")
    tol = tolerances().tol_eval if tol is None else tol
    return any(model_close(act(g, m1), m2, tol) for g in group_elements(m1.schema))


# ---------------------------------------------------------------------------
# critical orbits

@dataclass(frozen=True)
class CriticalOrbitReport:
    vertex: str
    point: complex
    converged: bool
    iterations: int
    final_distance: float


def critical_orbits(m: ModelMap, max_iter: int = 10_000, tol: float = 1e-6) -> list:
    """Track every critical point forward; distance is to the attracting
    cycle through the origins of the periodic components."""
    s = m.schema
    periodic = s.periodic_vertices()
    reports = []
    for v in s.ids:
        for c in critical_points(m.factor(v)):
            cur_v, z = v, complex(c)
            it = 0
            dist = math.inf
            converged = False
            while it < max_iter:
                if cur_v in periodic:
                    dist = abs(z)
                    if dist < tol:
                        converged = True
                        break
                z = m.factor(cur_v).eval_raw(z)
                cur_v = s.F(cur_v)
                it += 1
            reports.append(CriticalOrbitReport(v, complex(c), converged, it, float(dist)))
    return reports


def identity_of(s: MappingSchema) -> GroupElement:
    return identity_element(s)
