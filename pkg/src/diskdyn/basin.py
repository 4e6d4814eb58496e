"""Straightening attracting disk-union dynamics into normal form.

A basin system is a proper holomorphic self-map of a disjoint union of
labeled disks, degree >= 2 on each component, stored per component as a
factored product sandwiched between disk automorphisms (which loses no
generality: proper self-maps of the disk are exactly the finite products).

Straightening finds, for every cycle of the component map, the attracting
interior fixed point of its return map and one of its D_c - 1 repelling
boundary fixed points, pushes both forward around the cycle, then walks the
trees outward choosing one of the d(v) boundary preimages at each step.  The
per-component disk automorphisms sending (interior point, boundary point) to
(0, 1) -- with the interior point taken to be the critical barycenter on
non-periodic components -- conjugate the system onto a normal-form member.
Enumerating every choice and every schema automorphism yields all
|G| = |Aut| * prod (D_c - 1) * prod d(v) conjugacies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .blaschke import (
    BlaschkeProduct,
    conformal_barycenter,
    critical_points,
    fixed_points,
    matched_constant,
    preimages,
)
from .config import tolerances
from .disk import Mobius, mobius_from_specs, mobius_invert
from .errors import (
    NoInteriorFixedPoint,
    NumericalError,
    ValidationError,
)
from .modelspace import ModelMap, validate_membership
from .schema import MappingSchema, automorphism_group


@dataclass(frozen=True)
class BasinComponent:
    image: str
    core: BlaschkeProduct
    pre: Mobius
    post: Mobius


@dataclass(frozen=True)
class BasinSystem:
    labels: tuple
    components: tuple  # BasinComponent per label, in label order

    def __post_init__(self):
        labels = tuple(str(v) for v in self.labels)
        if len(set(labels)) != len(labels):
            raise ValidationError("duplicate component labels")
        if len(self.components) != len(labels):
            raise ValidationError("component count does not match the labels")
        for comp in self.components:
            if comp.image not in labels:
                raise ValidationError(f"image label {comp.image!r} unknown")
            if comp.core.degree < 2:
                raise ValidationError("every component map must have degree >= 2")
        object.__setattr__(self, "labels", labels)

    def component(self, label: str) -> BasinComponent:
        return self.components[self.labels.index(label)]

    def image_of(self, label: str) -> str:
        return self.component(label).image

    def degree(self, label: str) -> int:
        return self.component(label).core.degree

    def map_eval(self, label: str, z: complex) -> complex:
        comp = self.component(label)
        return comp.post.eval_raw(comp.core.eval_raw(comp.pre.eval_raw(z)))

    def map_derivative(self, label: str, z: complex) -> complex:
        comp = self.component(label)
        w1 = comp.pre.eval_raw(z)
        w2 = comp.core.eval_raw(w1)
        return (
            _mobius_derivative(comp.post, w2)
            * comp.core.derivative(w1)
            * _mobius_derivative(comp.pre, z)
        )

    def map_preimages(self, label: str, target: complex) -> list:
        comp = self.component(label)
        t = mobius_invert(comp.post).eval_raw(target)
        pre_inv = mobius_invert(comp.pre)
        return [pre_inv.eval_raw(u) for u in preimages(comp.core, t)]

    def map_critical_points(self, label: str) -> list:
        comp = self.component(label)
        pre_inv = mobius_invert(comp.pre)
        return [pre_inv.eval_raw(c) for c in critical_points(comp.core)]

    def to_dict(self) -> dict:
        def mob(m: Mobius) -> dict:
            return {
                "a": [m.a.real, m.a.imag],
                "rotation": [m.rotation.real, m.rotation.imag],
            }

        return {
            "components": {
                label: {
                    "image": comp.image,
                    "core": {
                        "c": [comp.core.c.real, comp.core.c.imag],
                        "zeros": [[z.real, z.imag] for z in comp.core.zeros],
                    },
                    "pre": mob(comp.pre),
                    "post": mob(comp.post),
                }
                for label, comp in zip(self.labels, self.components)
            }
        }

    @staticmethod
    def from_dict(data: dict) -> "BasinSystem":
        def mob(d: dict) -> Mobius:
            return Mobius(complex(d["a"][0], d["a"][1]),
                          complex(d["rotation"][0], d["rotation"][1]))

        try:
            comps = data["components"]
            labels = tuple(sorted(comps))
            built = []
            for label in labels:
                cd = comps[label]
                core = BlaschkeProduct(
                    complex(cd["core"]["c"][0], cd["core"]["c"][1]),
                    tuple(complex(z[0], z[1]) for z in cd["core"]["zeros"]),
                )
                built.append(
                    BasinComponent(str(cd["image"]), core, mob(cd["pre"]), mob(cd["post"]))
                )
        except (KeyError, TypeError, IndexError) as exc:
            raise ValidationError(f"malformed basin payload: {exc}") from exc
        return BasinSystem(labels, tuple(built))


def _mobius_derivative(m: Mobius, z: complex) -> complex:
    den = 1.0 - m.a.conjugate() * z
    return m.rotation * m.k * (1.0 - abs(m.a) ** 2) / (den * den)


def derive_schema(b: BasinSystem) -> MappingSchema:
    return MappingSchema(
        b.labels,
        tuple(comp.image for comp in b.components),
        tuple(comp.core.degree - 1 for comp in b.components),
    )


@dataclass(frozen=True)
class StraightenResult:
    model: ModelMap
    iota: dict    # component label -> schema vertex
    mobius: dict  # component label -> normalizing automorphism


def _return_eval(b: BasinSystem, cycle, z: complex) -> complex:
    for label in cycle:
        z = b.map_eval(label, z)
    return z


def _return_derivative(b: BasinSystem, cycle, z: complex) -> complex:
    acc = 1.0 + 0.0j
    for label in cycle:
        acc *= b.map_derivative(label, z)
        z = b.map_eval(label, z)
    return acc


def _interior_return_fixed_point(b: BasinSystem, cycle) -> complex:
    """Iterate the return map from the component center until it contracts,
    then Newton-polish; rejects cycles whose orbit drifts to the circle."""
    z = 0.0 + 0.0j
    prev_step = np.inf
    for _ in range(2000):
        z_next = _return_eval(b, cycle, z)
        step = abs(z_next - z)
        z = z_next
        if step < 1e-10:
            break
        prev_step = step
    else:
        if abs(z) > 1.0 - 1e-6:
            raise NoInteriorFixedPoint(
                f"return map of cycle {cycle} attracts to the boundary"
            )
    for _ in range(60):
        f = _return_eval(b, cycle, z) - z
        df = _return_derivative(b, cycle, z) - 1.0
        if abs(df) < 1e-300:
            break
        step = f / df
        z = z - step
        if abs(step) < 1e-15:
            break
    if abs(z) > 1.0 - tolerances().snap_circle:
        raise NoInteriorFixedPoint(f"cycle {cycle} has no interior fixed point")
    if abs(_return_eval(b, cycle, z) - z) > 1e-9:
        raise NumericalError("interior fixed-point polish did not converge")
    mult = abs(_return_derivative(b, cycle, z))
    if mult >= 1.0:
        raise NoInteriorFixedPoint(f"interior fixed point of {cycle} is not attracting")
    return z


def _composite_return_blaschke(b: BasinSystem, cycle) -> BlaschkeProduct:
    targets = [0.0 + 0.0j]
    for label in reversed(cycle):
        targets = [u for t in targets for u in b.map_preimages(label, t)]
    zeros = sorted((complex(z) for z in targets), key=lambda z: (z.real, z.imag))
    ref = _return_eval(b, cycle, -1.0 + 0.0j)
    return BlaschkeProduct(matched_constant(zeros, -1.0, ref), tuple(zeros))


def _boundary_return_fixed_points(b: BasinSystem, cycle) -> list:
    comp = _composite_return_blaschke(b, cycle)
    report = fixed_points(comp)
    return sorted(report.boundary, key=np.angle)


def straighten(b: BasinSystem) -> list:
    """All |G(S)| conjugacies of the basin system onto normal-form members.

    Output order is canonical: schema automorphisms first, then per-cycle
    boundary fixed-point choices (cycles in root-label order, points by
    principal argument), then tree preimage choices (vertices outward in
    label order, preimages by principal argument).
    """
    s = derive_schema(b)
    cycles = s.cycles()
    trees = s.tree_vertices_outward()
    periodic = s.periodic_vertices()

    interior_root = {cyc: _interior_return_fixed_point(b, cyc) for cyc in cycles}
    boundary_root = {cyc: _boundary_return_fixed_points(b, cyc) for cyc in cycles}

    interior_pref: dict[str, complex] = {}
    for cyc in cycles:
        p = interior_root[cyc]
        for label in cyc:
            interior_pref[label] = p
            p = b.map_eval(label, p)
    bary: dict[str, complex] = {}
    for label in trees:
        bary[label] = conformal_barycenter(b.map_critical_points(label))
        interior_pref[label] = bary[label]

    results = []
    cycle_ranges = [range(len(boundary_root[cyc])) for cyc in cycles]
    tree_ranges = [range(s.d(v)) for v in trees]
    for aut in automorphism_group(s):
        for picks in itertools.product(*cycle_ranges, *tree_ranges):
            cpicks = picks[: len(cycles)]
            tpicks = picks[len(cycles):]
            qpts: dict[str, complex] = {}
            for cyc, j in zip(cycles, cpicks):
                q = boundary_root[cyc][j]
                for label in cyc:
                    qpts[label] = q
                    q = b.map_eval(label, q)
                    q = q / abs(q)
            for label, mv in zip(trees, tpicks):
                opts = sorted(
                    (z / abs(z) for z in b.map_preimages(label, qpts[s.F(label)])),
                    key=np.angle,
                )
                qpts[label] = opts[mv]

            mobius = {
                label: mobius_from_specs(interior_pref[label], qpts[label])
                for label in b.labels
            }
            factors: list[BlaschkeProduct | None] = [None] * s.size
            for label in b.labels:
                h = mobius[label]
                h_parent = mobius[s.F(label)]
                h_inv = mobius_invert(h)
                zeros = sorted(
                    (
                        h.eval_raw(t)
                        for t in b.map_preimages(label, interior_pref[s.F(label)])
                    ),
                    key=lambda z: (z.real, z.imag),
                )
                ref = h_parent.eval_raw(b.map_eval(label, h_inv.eval_raw(-1.0)))
                factor = BlaschkeProduct(
                    matched_constant(zeros, -1.0, ref), tuple(zeros)
                )
                factors[s.index(aut[label])] = factor
            model = ModelMap(s, tuple(factors))
            validate_membership(model)
            results.append(StraightenResult(model, dict(aut), mobius))
    return results


def basin_from_member(member: ModelMap, autos: dict) -> BasinSystem:
    """Scramble a member into a basin system by per-component automorphisms:
    component v carries g_{F(v)} o factor_v o g_v^{-1}."""
    s = member.schema
    comps = []
    for v in s.ids:
        comps.append(
            BasinComponent(
                s.F(v),
                member.factor(v),
                mobius_invert(autos[v]),
                autos[s.F(v)],
            )
        )
    return BasinSystem(s.ids, tuple(comps))
