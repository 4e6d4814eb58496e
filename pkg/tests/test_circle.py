import math
from fractions import Fraction

import numpy as np
import pytest

from diskdyn.blaschke import BlaschkeProduct, power_map
from diskdyn.circle import (
    ArcInterval,
    boundary_coordinate,
    build_coordinate_table,
    conjugacy_check,
    invariant_measure,
    nearest_entry,
    verify_balanced,
)
from diskdyn.config import tolerance_overrides
from diskdyn.errors import BudgetError, DomainError
from diskdyn.sampling import random_blaschke

RNG = np.random.default_rng(99)


def _generic_degree2():
    return BlaschkeProduct(1.0, (0.0, 0.5))


class TestTable:
    def test_square_depth_two(self):
        tab = build_coordinate_table(power_map(2), 2)
        assert np.allclose(tab.points, [1, 1j, -1, -1j])
        assert [tab.coordinate(j) for j in range(4)] == [
            Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)
        ]

    def test_cube_depth_one(self):
        tab = build_coordinate_table(power_map(3), 1)
        assert [tab.coordinate(j) for j in range(3)] == [
            Fraction(0), Fraction(1, 3), Fraction(2, 3)
        ]
        assert np.allclose(tab.points, np.exp(2j * np.pi * np.arange(3) / 3))

    def test_generic_depth_eight_conjugacy(self):
        b = _generic_degree2()
        tab = build_coordinate_table(b, 8)
        assert tab.size == 256
        exact, res = conjugacy_check(b, tab)
        assert exact
        assert res < 1e-7

    def test_monotone_angles(self):
        tab = build_coordinate_table(_generic_degree2(), 6)
        assert np.all(np.diff(tab.rel_angles) > 0)

    def test_budget(self):
        with tolerance_overrides(max_table=2 ** 10):
            with pytest.raises(BudgetError):
                build_coordinate_table(power_map(2), 11)

    def test_requires_normalized_map(self):
        with pytest.raises(DomainError):
            build_coordinate_table(BlaschkeProduct(1.0, (0.5, -0.5)), 3)

    def test_base_selector(self):
        # boundary fixed points of z^3 are the square roots of 1
        tab = build_coordinate_table(power_map(3), 2, base_index=1)
        assert tab.base_point == pytest.approx(-1.0)


class TestBoundaryCoordinate:
    def test_square_quarter(self):
        tab = build_coordinate_table(power_map(2), 6)
        t, bound = boundary_coordinate(tab, np.exp(1j * np.pi / 2))
        assert t == pytest.approx(0.25, abs=bound)

    def test_base_point_is_zero(self):
        tab = build_coordinate_table(_generic_degree2(), 6)
        t, _ = boundary_coordinate(tab, tab.base_point)
        assert t == pytest.approx(0.0, abs=1e-12)

    def test_self_consistency_through_the_map(self):
        b = _generic_degree2()
        tab = build_coordinate_table(b, 10)
        z = -1.0 + 0.0j
        t_z, bound = boundary_coordinate(tab, z)
        t_img, _ = boundary_coordinate(tab, b.eval_raw(z))
        gap = abs((t_img - 2 * t_z) % 1.0)
        gap = min(gap, 1.0 - gap)
        assert gap < 3 * bound


class TestMeasure:
    def test_square_upper_semicircle(self):
        m = invariant_measure(power_map(2), ArcInterval(0.0, math.pi), 10)
        assert m == Fraction(1, 2)

    def test_full_circle_every_depth(self):
        b = _generic_degree2()
        for k in (1, 3, 6, 9):
            assert invariant_measure(b, ArcInterval(0.0, 2 * math.pi), k) == 1

    def test_cauchy_convergence(self):
        b = _generic_degree2()
        arc = ArcInterval(-math.pi / 2, math.pi / 2)
        m12 = invariant_measure(b, arc, 12)
        m14 = invariant_measure(b, arc, 14)
        assert abs(float(m12 - m14)) < 2.0 ** -10

    def test_additivity_exact(self):
        b = _generic_degree2()
        m1 = invariant_measure(b, ArcInterval(0.2, 1.4), 9)
        m2 = invariant_measure(b, ArcInterval(1.4, 2.9), 9)
        m12 = invariant_measure(b, ArcInterval(0.2, 2.9), 9)
        assert m1 + m2 == m12

    def test_expansion_of_small_arcs(self):
        b = _generic_degree2()
        arc = ArcInterval(0.8, 1.0)
        k = 12
        small = invariant_measure(b, arc, k)
        # image arc endpoints under the map
        s = b.eval_raw(np.exp(0.8j))
        e = b.eval_raw(np.exp(1.0j))
        image = ArcInterval(math.atan2(s.imag, s.real), math.atan2(s.imag, s.real)
                            + ((math.atan2(e.imag, e.real) - math.atan2(s.imag, s.real)) % (2 * math.pi)))
        big = invariant_measure(b, image, k)
        assert abs(float(big - 2 * small)) < 40 * 2.0 ** -k


class TestBalanced:
    def test_square_split(self):
        # the two preimage arcs get identical counts; the deviation from
        # half the parent measure is only the one-step counting gap
        rep = verify_balanced(power_map(2), ArcInterval(0.4, 0.9), 10)
        assert len(set(rep.component_measures)) == 1
        assert rep.max_deviation <= Fraction(1, 2 ** 10)

    def test_cube_split(self):
        rep = verify_balanced(power_map(3), ArcInterval(1.0, 2.2), 7)
        assert len(set(rep.component_measures)) == 1
        assert rep.max_deviation <= Fraction(1, 3 ** 7)

    def test_generic_within_counting_error(self):
        k = 12
        rep = verify_balanced(_generic_degree2(), ArcInterval(0.3, 1.2), k)
        assert float(rep.max_deviation) < 10 * 2.0 ** (1 - k)

    def test_arc_too_long_rejected(self):
        with pytest.raises(DomainError):
            verify_balanced(power_map(2), ArcInterval(0.0, 3.5), 6)


def test_random_degree3_table_conjugacy():
    b = random_blaschke(RNG, 3, rmax=0.5, fixed_point_centered=True, boundary_rooted=True)
    tab = build_coordinate_table(b, 6)
    exact, res = conjugacy_check(b, tab)
    assert exact and res < 1e-7
    idx, dist = nearest_entry(tab, tab.points[5])
    assert idx == 5 and dist < 1e-15
