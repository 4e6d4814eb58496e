import cmath
import math

import numpy as np
import pytest

from diskdyn.blaschke import (
    BlaschkeProduct,
    blaschke_close,
    compose_blaschke,
    conformal_barycenter,
    conjugate_blaschke,
    critical_points,
    fixed_points,
    log_derivative_on_circle,
    normalize_critically_centered,
    normalize_fixed_point_centered,
    power_map,
    preimages,
    zero_sum_to_critically_centered,
    critically_centered_to_zero_sum,
)
from diskdyn.disk import Mobius, mobius_invert
from diskdyn.errors import DomainError, NoInteriorFixedPoint, TangencyWarning
from diskdyn.sampling import random_blaschke, random_disk_point, random_mobius

RNG = np.random.default_rng(20240811)


class TestEval:
    def test_square(self):
        assert power_map(2)(1j) == pytest.approx(-1.0)

    def test_symmetric_pair_formula(self):
        # c mu_a mu_{-a} with a = 1/2 equals (z^2 - a^2)/(1 - a^2 z^2)
        b = BlaschkeProduct(1.0, (0.5, -0.5))
        assert b(0.0) == pytest.approx(-0.25)
        for z in (0.3 + 0.2j, -0.7j, 0.9):
            a2 = 0.25
            assert b(z) == pytest.approx((z * z - a2) / (1 - a2 * z * z))

    def test_circle_modulus(self):
        b = random_blaschke(RNG, 4)
        for theta in np.linspace(0, 2 * np.pi, 50, endpoint=False):
            assert abs(abs(b(cmath.exp(1j * theta))) - 1.0) < 1e-9

    def test_interior_stays_interior(self):
        b = random_blaschke(RNG, 3)
        for _ in range(20):
            z = random_disk_point(RNG, 0.95)
            assert abs(b(z)) < 1.0

    def test_outside_rejected(self):
        with pytest.raises(DomainError):
            power_map(2)(1.2)


class TestLogDerivative:
    def test_power_map_gives_degree(self):
        for d in (2, 3, 5):
            for z in (1.0, 1j, cmath.exp(0.3j)):
                assert log_derivative_on_circle(power_map(d), z) == pytest.approx(d)

    def test_half_zero_at_one(self):
        # 1 + (1 - |1/2|^2)/|1 - 1/2|^2 = 4, as a sum of two positive terms
        b = BlaschkeProduct(1.0, (0.0, 0.5))
        assert log_derivative_on_circle(b, 1.0) == pytest.approx(4.0)

    def test_against_numeric_differentiation(self):
        b = random_blaschke(RNG, 3)
        h = 1e-6
        for theta in np.linspace(0.1, 2 * np.pi, 7):
            z = cmath.exp(1j * theta)
            num = cmath.log(b(z * cmath.exp(1j * h)) / b(z * cmath.exp(-1j * h))) / (2j * h)
            got = log_derivative_on_circle(b, z)
            assert got == pytest.approx(num, abs=1e-5)
            assert abs(got.imag) < 1e-9
            assert got.real > 0

    def test_sixty_four_points_positive(self):
        b = random_blaschke(RNG, 3)
        for theta in np.linspace(0, 2 * np.pi, 64, endpoint=False):
            val = log_derivative_on_circle(b, cmath.exp(1j * theta))
            assert val.real > 0
            assert abs(val.imag) < 1e-9

    def test_off_circle_rejected(self):
        with pytest.raises(DomainError):
            log_derivative_on_circle(power_map(2), 0.5)


class TestCriticalPoints:
    def test_square(self):
        assert critical_points(power_map(2)) == [0.0]

    def test_even_pair(self):
        got = critical_points(BlaschkeProduct(1.0, (0.5, -0.5)))
        assert len(got) == 1
        assert got[0] == pytest.approx(0.0, abs=1e-12)

    def test_real_slice_bisection_oracle(self):
        b = BlaschkeProduct(1.0, (0.0, 0.5))
        got = critical_points(b)
        assert len(got) == 1
        # bisection on the real slice of B' between 0 and 1/2
        lo, hi = 1e-6, 0.5 - 1e-6
        f = lambda x: b.derivative(x).real
        assert f(lo) * f(hi) < 0
        for _ in range(60):
            mid = (lo + hi) / 2
            if f(lo) * f(mid) <= 0:
                hi = mid
            else:
                lo = mid
        assert got[0] == pytest.approx((lo + hi) / 2, abs=1e-10)
        assert got[0] == pytest.approx(2.0 - math.sqrt(3.0))

    def test_count_with_multiplicity(self):
        for d in (2, 3, 4, 5):
            b = random_blaschke(RNG, d)
            pts = critical_points(b)
            assert len(pts) == d - 1
            assert all(abs(p) < 1 for p in pts)


class TestFixedPoints:
    def test_cubic_power(self):
        rep = fixed_points(power_map(3))
        assert rep.interior == pytest.approx(0.0)
        assert sorted(z.real for z in rep.boundary) == pytest.approx([-1.0, 1.0])
        assert all(m > 1 for m in rep.multipliers)

    def test_negative_square(self):
        # e^{i theta} = -e^{2 i theta} forces the single boundary point -1
        rep = fixed_points(BlaschkeProduct(-1.0, (0.0, 0.0)))
        assert rep.interior == pytest.approx(0.0)
        assert len(rep.boundary) == 1
        assert rep.boundary[0] == pytest.approx(-1.0)
        assert rep.multipliers[0] == pytest.approx(2.0)

    def test_symmetric_pair_cubic_oracle(self):
        # B(z) = z reduces to z^3 + 4z^2 - 4z - 1 = 0 = (z-1)(z^2+5z+1)
        rep = fixed_points(BlaschkeProduct(1.0, (0.5, -0.5)))
        assert rep.interior == pytest.approx((-5 + math.sqrt(21)) / 2)
        assert len(rep.boundary) == 1
        assert rep.boundary[0] == pytest.approx(1.0)

    def test_no_interior_case(self):
        # (z^2 + 1/2)/(1 + z^2/2): fixed points z=1 and e^{+-i pi/3}, none interior
        a = 1j / math.sqrt(2)
        b = BlaschkeProduct(1.0, (a, -a))
        rep = fixed_points(b)
        assert rep.interior is None
        assert len(rep.boundary) == 3
        angles = sorted(math.atan2(z.imag, z.real) % (2 * math.pi) for z in rep.boundary)
        assert angles == pytest.approx([0.0, math.pi / 3, 5 * math.pi / 3])

    def test_interior_implies_expansion(self):
        b = random_blaschke(RNG, 4, fixed_point_centered=True)
        for theta in np.linspace(0, 2 * np.pi, 256, endpoint=False):
            assert log_derivative_on_circle(b, cmath.exp(1j * theta)).real > 1.0


class TestPreimages:
    def test_square_of_one(self):
        got = preimages(power_map(2), 1.0)
        assert sorted(z.real for z in got) == pytest.approx([-1.0, 1.0])

    def test_cube_roots(self):
        got = preimages(power_map(3), -1.0)
        expect = sorted(np.roots([1, 0, 0, 1]), key=lambda z: (round(z.real, 9), z.imag))
        got = sorted(got, key=lambda z: (round(z.real, 9), z.imag))
        assert np.allclose(got, expect)

    def test_residuals_on_circle_targets(self):
        b = random_blaschke(RNG, 3)
        target = cmath.exp(0.77j)
        sols = preimages(b, target)
        assert len(sols) == 3
        assert len({round(z.real, 6) + round(z.imag, 6) * 1j for z in sols}) == 3
        for z in sols:
            assert abs(b(z) - target) < 1e-9


class TestNormalizeFixedPointCentered:
    def test_square_identity(self):
        out = normalize_fixed_point_centered(power_map(2))
        assert len(out) == 1
        bmap, h = out[0]
        assert blaschke_close(bmap, power_map(2), 1e-12)
        assert h(0.23) == pytest.approx(0.23)

    def test_negative_square(self):
        out = normalize_fixed_point_centered(BlaschkeProduct(-1.0, (0.0, 0.0)))
        assert len(out) == 1
        bmap, h = out[0]
        assert blaschke_close(bmap, power_map(2), 1e-12)
        assert h(0.5) == pytest.approx(-0.5)   # conjugation by z -> -z

    def test_cubic_two_choices(self):
        out = normalize_fixed_point_centered(power_map(3))
        assert len(out) == 2
        (b1, h1), (b2, h2) = out
        assert blaschke_close(b1, power_map(3), 1e-12)
        assert blaschke_close(b2, power_map(3), 1e-12)
        images = sorted((h1(1.0).real, h2(1.0).real))
        assert images == pytest.approx([-1.0, 1.0])

    def test_requires_interior_fixed_point(self):
        a = 1j / math.sqrt(2)
        with pytest.raises(NoInteriorFixedPoint):
            normalize_fixed_point_centered(BlaschkeProduct(1.0, (a, -a)))

    def test_fixed_point_centered_invariants(self):
        b = random_blaschke(RNG, 4, fixed_point_centered=True)
        deriv = abs(b.derivative(0.0))
        prod = np.prod([abs(z) for z in b.zeros if abs(z) > 0])
        assert deriv == pytest.approx(prod)
        assert deriv < 1.0
        for _ in range(100):
            z = random_disk_point(RNG, 0.95)
            if abs(z) > 1e-12:
                assert abs(b(z)) < abs(z)


class TestBarycenter:
    def test_single_point(self):
        c = 0.3 - 0.2j
        assert conformal_barycenter([c]) == pytest.approx(c, abs=1e-12)

    def test_symmetric_pair(self):
        assert conformal_barycenter([0.4 + 0.1j, -0.4 - 0.1j]) == pytest.approx(0.0, abs=1e-12)

    def test_two_zeros_and_offset(self):
        # closed form: 2 p^2 - 5 p + 1 = 0 on the real slice
        p = conformal_barycenter([0.0, 0.0, 0.6])
        assert p.imag == pytest.approx(0.0, abs=1e-12)
        assert p.real == pytest.approx((5 - math.sqrt(17)) / 4)
        assert 0 < p.real < 0.6

    def test_residual_and_equivariance(self):
        pts = [random_disk_point(RNG, 0.8) for _ in range(5)]
        p = conformal_barycenter(pts)
        res = abs(sum((c - p) / (1 - p.conjugate() * c) for c in pts))
        assert res < 1e-10
        g = random_mobius(RNG)
        q = conformal_barycenter([g(c) for c in pts])
        assert q == pytest.approx(g(p), abs=1e-9)


class TestNormalizeCriticallyCentered:
    def test_square(self):
        out = normalize_critically_centered(power_map(2))
        assert len(out) == 2
        for bmap, h in out:
            assert blaschke_close(bmap, power_map(2), 1e-12)
        hs = sorted(h(1.0).real for _, h in out)
        assert hs == pytest.approx([-1.0, 1.0])

    def test_symmetric_pair(self):
        phi = BlaschkeProduct(1.0, (0.5, -0.5))
        out = normalize_critically_centered(phi)
        assert len(out) == 2
        roots_of_one = sorted(z.real for z in preimages(phi, 1.0))
        hs = sorted(h(1.0).real for _, h in out)
        assert hs == pytest.approx(roots_of_one)
        for bmap, _ in out:
            assert abs(sum(critical_points(bmap))) < 1e-10

    def test_random_cubic_counts_and_residuals(self):
        phi = random_blaschke(RNG, 3)
        out = normalize_critically_centered(phi)
        assert len(out) == 3
        for bmap, h in out:
            assert abs(sum(critical_points(bmap))) < 1e-9
            assert bmap(1.0) == pytest.approx(1.0, abs=1e-9)
            # composition identity phi(h(z)) = bmap(z)
            for _ in range(5):
                z = random_disk_point(RNG, 0.8)
                assert bmap(z) == pytest.approx(phi(h(z)), abs=1e-9)


class TestZeroSumConversion:
    def test_power_map_fixed(self):
        b = power_map(3)
        conv, eta = zero_sum_to_critically_centered(b)
        assert blaschke_close(conv, b, 1e-12)
        assert eta(0.3) == pytest.approx(0.3)

    def test_symmetric_pair_fixed(self):
        b = BlaschkeProduct(1.0, (0.4j, -0.4j))
        conv, _ = zero_sum_to_critically_centered(b)
        assert blaschke_close(conv, b, 1e-10)

    def test_round_trip(self):
        zeros = (0.3 + 0.1j, -0.25 + 0.05j, -0.05 - 0.15j)
        b = BlaschkeProduct(1.0, zeros)
        conv, eta = zero_sum_to_critically_centered(b)
        assert abs(sum(critical_points(conv))) < 1e-10
        back, eta2 = critically_centered_to_zero_sum(conv)
        assert blaschke_close(back, b, 1e-9)
        for z in (0.2, -0.3j):
            assert conv(eta(z)) == pytest.approx(b(z), abs=1e-9)


class TestInversionSymmetry:
    def test_rational_extension_commutes_with_inversion(self):
        for _ in range(10):
            b = random_blaschke(RNG, int(RNG.integers(2, 5)))
            z = random_disk_point(RNG, 0.8) + 0.05
            mirror = 1.0 / z.conjugate()
            lhs = b.eval_raw(mirror)
            rhs = 1.0 / b.eval_raw(z).conjugate()
            assert lhs == pytest.approx(rhs, rel=1e-8)


class TestComposeConjugate:
    def test_compose_degrees_and_values(self):
        b1 = random_blaschke(RNG, 2)
        b2 = random_blaschke(RNG, 3)
        comp = compose_blaschke(b2, b1)
        assert comp.degree == 6
        for _ in range(5):
            z = random_disk_point(RNG, 0.9)
            assert comp(z) == pytest.approx(b2(b1(z)), abs=1e-9)

    def test_conjugate_matches_pointwise(self):
        phi = random_blaschke(RNG, 3)
        h = random_mobius(RNG)
        conj = conjugate_blaschke(phi, h)
        hinv = mobius_invert(h)
        for _ in range(5):
            z = random_disk_point(RNG, 0.9)
            assert conj(z) == pytest.approx(hinv(phi(h(z))), abs=1e-9)


def test_tangency_warning_near_parabolic_point():
    # in the family with zeros +-i*sqrt(s), the interior fixed point collides
    # with the boundary at s = 1/3 (triple point at 1); just past it the two
    # extra circle fixed points carry multipliers within 1e-6 of 1
    s = 1.0 / 3.0 + 1e-7
    a = 1j * math.sqrt(s)
    b = BlaschkeProduct(1.0, (a, -a))
    with pytest.warns(TangencyWarning):
        rep = fixed_points(b)
    assert rep.interior is None
    assert len(rep.boundary) == 3

