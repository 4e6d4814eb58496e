"""Reduced mapping schemata and their symmetry groups.

A schema is a finite vertex set with a self-map F and positive integer
weights; vertex v carries the degree d(v) = w(v) + 1.  This module is all
exact arithmetic: rotation angles are `Fraction`s, group orders are integers,
and no floating point enters any computation here.

The rotation symmetries of the power-map member are the circle-valued vertex
assignments eta with eta_v^{d(v)} = eta_{F(v)}.  Propagating that relation
around a cycle with composite degree D forces the base angle onto the
(D-1)-th roots of unity, and each non-periodic vertex contributes d(v)
independent lifts, which gives the closed-form order
|N| = prod_cycles (D_c - 1) * prod_tree d(v).  The definitional brute-force
enumeration is kept in the test suite as an oracle for this derivation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, ValidationError


@dataclass(frozen=True)
class MappingSchema:
    ids: tuple
    image: tuple   # image[i] is the id of F(ids[i])
    weight: tuple  # weight[i] >= 1

    def __post_init__(self):
        ids = tuple(str(v) for v in self.ids)
        image = tuple(str(v) for v in self.image)
        weight = tuple(int(w) for w in self.weight)
        if not ids:
            raise ValidationError("schema needs at least one vertex")
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate vertex ids")
        if len(image) != len(ids) or len(weight) != len(ids):
            raise ValidationError("image/weight lists must match the vertex list")
        idset = set(ids)
        for v in image:
            if v not in idset:
                raise ValidationError(f"image vertex {v!r} is not in the schema")
        for w in weight:
            if w < 1:
                raise ValidationError("schema is not reduced: weight < 1")
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "image", image)
        object.__setattr__(self, "weight", weight)

    def index(self, v: str) -> int:
        return self.ids.index(v)

    def F(self, v: str) -> str:
        return self.image[self.index(v)]

    def w(self, v: str) -> int:
        return self.weight[self.index(v)]

    def d(self, v: str) -> int:
        return self.w(v) + 1

    @property
    def total_weight(self) -> int:
        return sum(self.weight)

    @property
    def size(self) -> int:
        return len(self.ids)

    def cycles(self) -> list:
        """Periodic cycles, each rotated to start at its smallest vertex id,
        listed in order of that root id."""
        periodic = set()
        for v in self.ids:
            seen = {}
            cur = v
            while cur not in seen:
                seen[cur] = len(seen)
                cur = self.F(cur)
            # cur is the first repeated vertex: everything from it onwards cycles
            cyc = []
            walker = cur
            while True:
                cyc.append(walker)
                walker = self.F(walker)
                if walker == cur:
                    break
            periodic.update(cyc)
        out = []
        handled = set()
        for v in sorted(periodic):
            if v in handled:
                continue
            cyc = []
            walker = v
            while True:
                cyc.append(walker)
                handled.add(walker)
                walker = self.F(walker)
                if walker == v:
                    break
            out.append(tuple(cyc))
        return out

    def periodic_vertices(self) -> set:
        return {v for cyc in self.cycles() for v in cyc}

    def is_periodic(self, v: str) -> bool:
        return v in self.periodic_vertices()

    def composite_degree(self, cycle) -> int:
        out = 1
        for v in cycle:
            out *= self.d(v)
        return out

    def tree_vertices_outward(self) -> list:
        """Non-periodic vertices ordered so parents precede children."""
        periodic = self.periodic_vertices()
        remaining = [v for v in self.ids if v not in periodic]
        placed = set(periodic)
        out = []
        while remaining:
            progress = [v for v in remaining if self.F(v) in placed]
            if not progress:
                raise ValidationError("dangling vertices (not attached to any cycle)")
            for v in sorted(progress):
                out.append(v)
                placed.add(v)
            remaining = [v for v in remaining if v not in placed]
        return out

    def to_dict(self) -> dict:
        return {
            "vertices": [
                {"id": v, "weight": self.weight[i], "image": self.image[i]}
                for i, v in enumerate(self.ids)
            ]
        }

    @staticmethod
    def from_dict(data: dict) -> "MappingSchema":
        try:
            verts = data["vertices"]
            ids = tuple(str(e["id"]) for e in verts)
            image = tuple(str(e["image"]) for e in verts)
            weight = tuple(int(e["weight"]) for e in verts)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed schema payload: {exc}") from exc
        return MappingSchema(ids, image, weight)


def validate(s: MappingSchema) -> None:
    """Constructor already validates; kept as an explicit entry point."""
    s.cycles()
    s.tree_vertices_outward()


def enumerate_cycles(s: MappingSchema) -> list:
    """(cycle vertices, composite degree) pairs plus the tree vertex list."""
    return [(cyc, s.composite_degree(cyc)) for cyc in s.cycles()]


def automorphism_group(s: MappingSchema) -> list:
    """All vertex permutations commuting with F and preserving weights.

    Returned as dicts v -> iota(v), identity first, sorted canonically.
    """
    n = s.size
    out = []
    for perm in itertools.permutations(range(n)):
        ok = True
        for i in range(n):
            if s.weight[perm[i]] != s.weight[i]:
                ok = False
                break
            fi = s.index(s.image[i])
            if s.image[perm[i]] != s.ids[perm[fi]]:
                ok = False
                break
        if ok:
            out.append({s.ids[i]: s.ids[perm[i]] for i in range(n)})
    out.sort(key=lambda m: tuple(m[v] for v in s.ids))
    return out


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class RotationElement:
    """Exact rational angles theta_v with d(v)*theta_v = theta_F(v) mod 1."""

    angles: tuple  # ((vertex, Fraction), ...) in schema id order

    def angle(self, v: str) -> Fraction:
        for u, t in self.angles:
            if u == v:
                return t
        raise KeyError(v)

    def as_dict(self) -> dict:
        return dict(self.angles)


def _rotation_elements(s: MappingSchema):
    cycles = s.cycles()
    trees = s.tree_vertices_outward()
    cycle_choices = []
    for cyc in cycles:
        dcomp = s.composite_degree(cyc)
        cycle_choices.append(range(dcomp - 1))
    tree_choices = [range(s.d(v)) for v in trees]

    for picks in itertools.product(*cycle_choices, *tree_choices):
        cpicks = picks[: len(cycles)]
        tpicks = picks[len(cycles):]
        theta = {}
        for cyc, j in zip(cycles, cpicks):
            dcomp = s.composite_degree(cyc)
            t = Fraction(j, dcomp - 1) if dcomp > 1 else Fraction(0)
            for v in cyc:
                theta[v] = t
                t = _mod1(t * s.d(v))
        for v, m in zip(trees, tpicks):
            theta[v] = _mod1(Fraction(_mod1(theta[s.F(v)]) + m, s.d(v)))
        yield RotationElement(tuple((v, _mod1(theta[v])) for v in s.ids))


def rotation_group(s: MappingSchema) -> list:
    return list(_rotation_elements(s))


def rotation_group_order(s: MappingSchema) -> int:
    """Closed form prod_cycles (D_c - 1) * prod_tree d(v)."""
    order = 1
    for cyc in s.cycles():
        order *= s.composite_degree(cyc) - 1
    for v in s.tree_vertices_outward():
        order *= s.d(v)
    return order


@dataclass(frozen=True)
class GroupElement:
    """Element of the full symmetry group of a schema.

    These are exactly the self-conjugacies of the power-map member: the pair
    acts by (v, z) -> (iota(v), eta_v z), and the rotation condition
    eta_v^{d(v)} = eta_{F(v)} makes the conjugate again a power map.
    """

    ids: tuple
    iota: tuple              # vertex images aligned with ids
    rotation: RotationElement

    def apply_iota(self, v: str) -> str:
        return self.iota[self.ids.index(v)]

    def iota_map(self) -> dict:
        return dict(zip(self.ids, self.iota))

    def angle(self, v: str) -> Fraction:
        return self.rotation.angle(v)

    @property
    def is_identity(self) -> bool:
        return all(u == v for u, v in zip(self.ids, self.iota)) and all(
            t == 0 for _, t in self.rotation.angles
        )

    def to_dict(self) -> dict:
        return {
            "automorphism": self.iota_map(),
            "rotation": {
                v: [t.numerator, t.denominator] for v, t in self.rotation.angles
            },
        }

    @staticmethod
    def from_dict(s: MappingSchema, data: dict) -> "GroupElement":
        try:
            iota = tuple(str(data["automorphism"][v]) for v in s.ids)
            ang = tuple(
                (v, _mod1(Fraction(int(data["rotation"][v][0]), int(data["rotation"][v][1]))))
                for v in s.ids
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"malformed group element payload: {exc}") from exc
        elem = GroupElement(s.ids, iota, RotationElement(ang))
        _check_element(s, elem)
        return elem


def _check_element(s: MappingSchema, g: GroupElement) -> None:
    iota = g.iota_map()
    if sorted(iota.values()) != sorted(s.ids):
        raise ValidationError("automorphism part is not a permutation")
    for v in s.ids:
        if s.F(iota[v]) != iota[s.F(v)] or s.w(iota[v]) != s.w(v):
            raise ValidationError("automorphism part does not commute with the schema")
        lhs = _mod1(g.angle(v) * s.d(v))
        if lhs != _mod1(g.angle(s.F(v))):
            raise ValidationError("rotation part violates the degree relation")


def group_elements(s: MappingSchema) -> list:
    """The full symmetry group: every (automorphism, rotation) pair."""
    auts = automorphism_group(s)
    rots = rotation_group(s)
    out = []
    for aut in auts:
        iota = tuple(aut[v] for v in s.ids)
        for rot in rots:
            out.append(GroupElement(s.ids, iota, rot))
    return out


def identity_element(s: MappingSchema) -> GroupElement:
    return GroupElement(
        s.ids, s.ids, RotationElement(tuple((v, Fraction(0)) for v in s.ids))
    )


def compose_elements(s: MappingSchema, g1: GroupElement, g2: GroupElement) -> GroupElement:
    """The element implementing act(g1, act(g2, .)).

    Composition law: iota = iota2 o iota1 and theta_v = theta1_v +
    theta2_{iota1(v)}; this matches composing the underlying conjugacies of
    the power-map member.
    """
    iota = tuple(g2.apply_iota(g1.apply_iota(v)) for v in s.ids)
    ang = tuple(
        (v, _mod1(g1.angle(v) + g2.angle(g1.apply_iota(v)))) for v in s.ids
    )
    return GroupElement(s.ids, iota, RotationElement(ang))


def invert_element(s: MappingSchema, g: GroupElement) -> GroupElement:
    inv = {g.apply_iota(v): v for v in s.ids}
    iota = tuple(inv[v] for v in s.ids)
    ang = tuple((v, _mod1(-g.angle(inv[v]))) for v in s.ids)
    return GroupElement(s.ids, iota, RotationElement(ang))


def symmetry_group_order(s: MappingSchema) -> int:
    return len(automorphism_group(s)) * rotation_group_order(s)


def effective_group_order(s: MappingSchema, seed: int = 0) -> int:
    """|G| / |N0| with the kernel computed by the probe-set action test."""
    from .modelspace import kernel_N0

    order = symmetry_group_order(s)
    kernel = len(kernel_N0(s, seed=seed))
    if order % kernel:
        raise ValidationError("kernel order does not divide the group order")
    return order // kernel


# ---------------------------------------------------------------------------
# enumeration up to isomorphism

def _canonical_key(image_idx, weights):
    n = len(weights)
    best = None
    for perm in itertools.permutations(range(n)):
        enc = [None] * n
        for i in range(n):
            enc[perm[i]] = (perm[image_idx[i]], weights[i])
        key = tuple(enc)
        if best is None or key < best:
            best = key
    return best


def canonical_key(s: MappingSchema):
    image_idx = tuple(s.index(v) for v in s.image)
    return (s.size, _canonical_key(image_idx, s.weight))


def schemata_isomorphic(s1: MappingSchema, s2: MappingSchema) -> bool:
    return canonical_key(s1) == canonical_key(s2)


def enumerate_schemata(total_weight: int) -> list:
    """All reduced schemata of the given total weight, one per isomorphism
    class, with canonical vertex ids v0, v1, ..."""
    if not 1 <= total_weight <= 6:
        raise BudgetError("schema enumeration supports total weight 1..6")
    seen = {}
    for n in range(1, total_weight + 1):
        for weights in _compositions(total_weight, n):
            for image_idx in itertools.product(range(n), repeat=n):
                key = (n, _canonical_key(image_idx, weights))
                if key in seen:
                    continue
                seen[key] = None
    out = []
    for n, enc in sorted(seen):
        ids = tuple(f"v{i}" for i in range(n))
        image = tuple(f"v{e[0]}" for e in enc)
        weight = tuple(e[1] for e in enc)
        out.append(MappingSchema(ids, image, weight))
    return out


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
