import itertools
from fractions import Fraction

import pytest

from diskdyn.errors import BudgetError, ValidationError
from diskdyn.schema import (
    GroupElement,
    MappingSchema,
    automorphism_group,
    canonical_key,
    compose_elements,
    enumerate_cycles,
    enumerate_schemata,
    group_elements,
    identity_element,
    invert_element,
    rotation_group,
    rotation_group_order,
    schemata_isomorphic,
    symmetry_group_order,
    validate,
)


def fixed_vertex(w=1):
    return MappingSchema(("v",), ("v",), (w,))


def two_cycle(w1=1, w2=1):
    return MappingSchema(("a", "b"), ("b", "a"), (w1, w2))


def tail():
    return MappingSchema(("t", "f"), ("f", "f"), (1, 2))


class TestValidationAndCycles:
    def test_single_fixed_vertex(self):
        s = fixed_vertex(1)
        validate(s)
        [(cyc, deg)] = [(c, d) for c, d in enumerate_cycles(s)]
        assert cyc == ("v",) and deg == 2

    def test_two_cycle(self):
        [(cyc, deg)] = enumerate_cycles(two_cycle(1, 1))
        assert set(cyc) == {"a", "b"} and deg == 4

    def test_tail(self):
        s = tail()
        [(cyc, deg)] = enumerate_cycles(s)
        assert cyc == ("f",) and deg == 3
        assert s.tree_vertices_outward() == ["t"]

    def test_rejects_zero_weight(self):
        with pytest.raises(ValidationError):
            MappingSchema(("v",), ("v",), (0,))

    def test_rejects_dangling_image(self):
        with pytest.raises(ValidationError):
            MappingSchema(("v",), ("u",), (1,))

    def test_json_round_trip(self):
        s = tail()
        assert MappingSchema.from_dict(s.to_dict()) == s


class TestAutomorphisms:
    def test_single_vertex_trivial(self):
        assert automorphism_group(fixed_vertex()) == [{"v": "v"}]

    def test_two_fixed_equal_weights(self):
        s = MappingSchema(("a", "b"), ("a", "b"), (1, 1))
        got = automorphism_group(s)
        # brute-force filter over all permutations
        expect = []
        for pa, pb in itertools.permutations(("a", "b")):
            perm = {"a": pa, "b": pb}
            if all(perm[s.F(v)] == s.F(perm[v]) and s.w(v) == s.w(perm[v]) for v in s.ids):
                expect.append(perm)
        assert got == sorted(expect, key=lambda m: (m["a"], m["b"]))
        assert len(got) == 2

    def test_two_fixed_unequal_weights(self):
        s = MappingSchema(("a", "b"), ("a", "b"), (1, 2))
        assert len(automorphism_group(s)) == 1

    def test_two_cycle_shift(self):
        assert len(automorphism_group(two_cycle())) == 2

    def test_cycle_structure_preserved(self):
        s = MappingSchema(("a", "b", "c"), ("b", "a", "c"), (1, 1, 1))
        for aut in automorphism_group(s):
            # image of the 2-cycle {a,b} is again a 2-cycle of equal weights
            assert {aut["a"], aut["b"]} == {"a", "b"}
            assert aut["c"] == "c"


def brute_force_rotation_count(s: MappingSchema) -> int:
    """Definitional oracle: enumerate candidate angle tuples over a common
    denominator bound per vertex and check the degree relation exactly."""
    bound = {}
    for cyc in s.cycles():
        d = s.composite_degree(cyc) - 1
        for v in cyc:
            bound[v] = d if d > 0 else 1
    for v in s.tree_vertices_outward():
        bound[v] = s.d(v) * bound[s.F(v)]
    spaces = [
        [Fraction(p, bound[v]) for p in range(bound[v])] for v in s.ids
    ]
    count = 0
    for combo in itertools.product(*spaces):
        theta = dict(zip(s.ids, combo))
        ok = all(
            (theta[v] * s.d(v) - theta[s.F(v)]).denominator == 1 for v in s.ids
        )
        if ok:
            count += 1
    return count


class TestRotationGroup:
    def test_fixed_vertex_w1_trivial(self):
        got = rotation_group(fixed_vertex(1))
        assert len(got) == 1
        assert got[0].angle("v") == 0

    def test_fixed_vertex_w2_sign(self):
        got = rotation_group(fixed_vertex(2))
        assert sorted(r.angle("v") for r in got) == [Fraction(0), Fraction(1, 2)]

    def test_two_cycle_order_three(self):
        got = rotation_group(two_cycle())
        base = sorted(r.angle("a") for r in got)
        assert base == [Fraction(0), Fraction(1, 3), Fraction(2, 3)]

    @pytest.mark.parametrize("maker", [
        lambda: fixed_vertex(1),
        lambda: fixed_vertex(2),
        lambda: fixed_vertex(3),
        two_cycle,
        tail,
        lambda: MappingSchema(("a", "b", "c"), ("b", "c", "a"), (1, 1, 1)),
        lambda: MappingSchema(("a", "b", "c"), ("b", "b", "b"), (1, 1, 1)),
    ])
    def test_against_brute_force_oracle(self, maker):
        s = maker()
        assert len(rotation_group(s)) == brute_force_rotation_count(s)

    def test_closed_form_equals_enumeration_weight_le_4(self):
        for w in range(1, 5):
            for s in enumerate_schemata(w):
                assert rotation_group_order(s) == len(rotation_group(s))

    def test_closure_exact(self):
        s = two_cycle()
        G = group_elements(s)
        keyset = {(g.iota, g.rotation.angles) for g in G}
        for g1, g2 in itertools.product(G, G):
            comp = compose_elements(s, g1, g2)
            assert (comp.iota, comp.rotation.angles) in keyset
        e = identity_element(s)
        assert (e.iota, e.rotation.angles) in keyset
        for g in G:
            inv = invert_element(s, g)
            assert (inv.iota, inv.rotation.angles) in keyset
            comp = compose_elements(s, g, inv)
            assert comp.is_identity


class TestGroupOrders:
    def test_examples(self):
        assert symmetry_group_order(fixed_vertex(1)) == 1
        assert symmetry_group_order(fixed_vertex(2)) == 2
        assert symmetry_group_order(two_cycle()) == 6

    def test_element_dict_round_trip(self):
        s = two_cycle()
        for g in group_elements(s):
            back = GroupElement.from_dict(s, g.to_dict())
            assert back.iota == g.iota
            assert back.rotation.angles == g.rotation.angles


def burnside_count(total_weight: int) -> int:
    """Independent enumeration strategy: count (F, w) pairs fixed by each
    permutation and average over the symmetric group."""
    import math

    total = 0
    for n in range(1, total_weight + 1):
        weight_lists = [
            combo
            for combo in itertools.product(range(1, total_weight + 1), repeat=n)
            if sum(combo) == total_weight
        ]
        per_n = 0
        for perm in itertools.permutations(range(n)):
            fixed = 0
            for weights in weight_lists:
                if any(weights[perm[i]] != weights[i] for i in range(n)):
                    continue
                for image in itertools.product(range(n), repeat=n):
                    if all(image[perm[i]] == perm[image[i]] for i in range(n)):
                        fixed += 1
            per_n += fixed
        assert per_n % math.factorial(n) == 0
        total += per_n // math.factorial(n)
    return total


class TestEnumeration:
    def test_weight_one(self):
        out = enumerate_schemata(1)
        assert len(out) == 1
        assert schemata_isomorphic(out[0], fixed_vertex(1))

    def test_weight_two_explicit(self):
        out = enumerate_schemata(2)
        assert len(out) == 4
        expected = [
            fixed_vertex(2),
            MappingSchema(("a", "b"), ("a", "b"), (1, 1)),
            two_cycle(1, 1),
            MappingSchema(("t", "f"), ("f", "f"), (1, 1)),
        ]
        for e in expected:
            assert any(schemata_isomorphic(e, s) for s in out)

    @pytest.mark.parametrize("w", [1, 2, 3])
    def test_against_burnside_oracle(self, w):
        assert len(enumerate_schemata(w)) == burnside_count(w)

    def test_no_isomorphic_duplicates(self):
        out = enumerate_schemata(3)
        keys = [canonical_key(s) for s in out]
        assert len(set(keys)) == len(keys)

    def test_budget(self):
        with pytest.raises(BudgetError):
            enumerate_schemata(7)
