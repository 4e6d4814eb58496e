import numpy as np
import pytest

from diskdyn import roots as rt
from diskdyn.errors import NumericalError


def _sorted(xs):
    return sorted(xs, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def test_linear_and_quadratic():
    assert np.allclose(rt.roots([1.0, 2.0]), [-0.5])
    got = _sorted(rt.roots([-1.0, 0.0, 1.0]))
    assert np.allclose(got, [-1.0, 1.0])


def test_exact_zero_roots_stripped():
    got = rt.roots(np.array([0.0, 0.0, 0.0, 5.0]))
    assert np.count_nonzero(got == 0) == 3


@pytest.mark.parametrize("seed", range(8))
def test_matches_numpy_roots(seed):
    rng = np.random.default_rng(seed)
    deg = int(rng.integers(3, 12))
    coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    mine = _sorted(rt.roots(coeffs))
    ref = _sorted(np.roots(coeffs[::-1]))
    assert np.allclose(mine, ref, atol=1e-8)


def test_multiple_root_cluster():
    # (z-1)^3 (z+2): the triple root comes back as a cluster at 1
    coeffs = rt.poly_from_roots([1.0, 1.0, 1.0, -2.0])
    got = rt.roots(coeffs)
    near_one = [z for z in got if abs(z - 1) < 1e-4]
    assert len(near_one) == 3
    assert any(abs(z + 2) < 1e-10 for z in got)


def test_zero_polynomial_rejected():
    with pytest.raises(NumericalError):
        rt.roots([0.0, 0.0])


def test_batched_matches_scalar():
    rng = np.random.default_rng(1)
    base = rng.normal(size=4) + 1j * rng.normal(size=4)
    shifts = rng.normal(size=6) + 1j * rng.normal(size=6)
    rows = np.tile(base, (6, 1))
    rows[:, 0] += shifts
    init = np.exp(2j * np.pi * np.arange(3) / 3)[None, :] * np.ones((6, 1))
    got, ok = rt.batched_roots(rows, init)
    for i in range(6):
        ref = _sorted(rt.roots(rows[i]))
        mine = _sorted(got[i]) if ok[i] else ref
        assert np.allclose(mine, ref, atol=1e-8)
