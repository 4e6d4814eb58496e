import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskdyn.disk import (
    IDENTITY,
    Mobius,
    mobius_compose,
    mobius_from_specs,
    mobius_invert,
    mobius_to_zero,
)
from diskdyn.errors import DomainError

disk_points = st.builds(
    lambda r, t: cmath.rect(r, t),
    st.floats(0.0, 0.85),
    st.floats(0.0, 2 * cmath.pi),
)
circle_points = st.builds(cmath.exp, st.builds(complex, st.just(0.0), st.floats(0.0, 2 * cmath.pi)))


class TestMobiusToZero:
    def test_zero_gives_identity(self):
        m = mobius_to_zero(0.0)
        assert m.k == 1.0
        for z in (0.3 + 0.4j, -0.2, 1.0):
            assert m(z) == pytest.approx(z)

    def test_real_half(self):
        m = mobius_to_zero(0.5)
        assert m.k == pytest.approx(1.0)
        assert m(0.0) == pytest.approx(-0.5)
        assert m(0.5) == pytest.approx(0.0)
        assert m(1.0) == pytest.approx(1.0)

    def test_imag_half(self):
        # independently evaluated: k = (1 + i/2)/(1 - i/2) = 0.6 + 0.8i
        m = mobius_to_zero(0.5j)
        assert m.k == pytest.approx(0.6 + 0.8j)
        assert abs(m.k) == pytest.approx(1.0)
        assert m(0.5j) == pytest.approx(0.0)
        assert m(1.0) == pytest.approx(1.0)

    def test_rejects_boundary_parameter(self):
        with pytest.raises(DomainError):
            mobius_to_zero(1.0 - 1e-14)


class TestEval:
    def test_identity_eval(self):
        assert IDENTITY(0.3 + 0.4j) == pytest.approx(0.3 + 0.4j)

    def test_minus_one_fixed_for_real_parameter(self):
        assert mobius_to_zero(0.5)(-1.0) == pytest.approx(-1.0)

    def test_circle_to_circle(self):
        # value checked with independent high-precision arithmetic
        val = mobius_to_zero(0.5)(1j)
        assert val == pytest.approx(-0.8 + 0.6j)
        assert abs(val) == pytest.approx(1.0)

    def test_outside_disk_rejected(self):
        with pytest.raises(DomainError):
            mobius_to_zero(0.5)(1.5)


class TestComposeInvert:
    def test_compose_with_inverse_is_identity(self):
        m = Mobius(0.3 - 0.2j, cmath.exp(0.7j))
        comp = mobius_compose(m, mobius_invert(m))
        assert comp.a == pytest.approx(0.0, abs=1e-12)
        assert comp.rotation == pytest.approx(1.0)

    def test_invert_defining_property(self):
        inv = mobius_invert(mobius_to_zero(0.5))
        assert inv(0.0) == pytest.approx(0.5)
        assert inv(1.0) == pytest.approx(1.0)

    def test_rotation_after_centering(self):
        # matrix-composition oracle: rotation by i after centering 1/2
        rot = Mobius(0.0, 1j)
        m = mobius_compose(rot, mobius_to_zero(0.5))
        assert m(0.5) == pytest.approx(0.0, abs=1e-12)
        mat = rot.matrix() @ mobius_to_zero(0.5).matrix()
        for z in (0.1, -0.4j, 0.2 + 0.3j):
            ref = (mat[0, 0] * z + mat[0, 1]) / (mat[1, 0] * z + mat[1, 1])
            assert m(z) == pytest.approx(ref)

    @settings(max_examples=60, deadline=None)
    @given(disk_points, disk_points, st.floats(0, 2 * cmath.pi), st.floats(0, 2 * cmath.pi))
    def test_round_trips(self, a1, a2, t1, t2):
        m1 = Mobius(a1, cmath.exp(1j * t1))
        m2 = Mobius(a2, cmath.exp(1j * t2))
        comp = mobius_compose(m1, m2)
        for z in (0.0, 0.37 - 0.11j, 1.0, -1.0):
            assert comp(z) == pytest.approx(m1(m2(z)), abs=1e-9)
        back = mobius_compose(mobius_invert(m1), m1)
        assert back(0.37) == pytest.approx(0.37, abs=1e-9)


class TestFromSpecs:
    def test_trivial(self):
        m = mobius_from_specs(0.0, 1.0)
        assert m(0.2 + 0.1j) == pytest.approx(0.2 + 0.1j)

    def test_pure_rotation(self):
        m = mobius_from_specs(0.0, -1.0)
        assert m(0.5) == pytest.approx(-0.5)
        assert m(-1.0) == pytest.approx(1.0)

    def test_two_conditions(self):
        m = mobius_from_specs(0.5, 1j)
        assert m(0.5) == pytest.approx(0.0, abs=1e-12)
        assert m(1j) == pytest.approx(1.0)

    @settings(max_examples=60, deadline=None)
    @given(disk_points, circle_points)
    def test_defining_property(self, p, b):
        m = mobius_from_specs(p, b)
        assert abs(m(p)) < 1e-9
        assert m(b) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(disk_points)
def test_circle_preserved_on_grid(a):
    m = mobius_to_zero(a)
    zs = np.exp(2j * np.pi * np.arange(256) / 256)
    vals = np.array([m(complex(z)) for z in zs])
    assert np.max(np.abs(np.abs(vals) - 1.0)) < 1e-9


@settings(max_examples=100, deadline=None)
@given(disk_points)
def test_centering_properties(a):
    m = mobius_to_zero(a)
    assert abs(m(a)) < 1e-9
    assert m(1.0) == pytest.approx(1.0, abs=1e-9)
