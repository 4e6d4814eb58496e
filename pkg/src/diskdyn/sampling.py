"""Seeded random inputs for tests, probes, and the verification suites."""

from __future__ import annotations

import numpy as np

from .blaschke import BlaschkeProduct
from .disk import Mobius
from .schema import MappingSchema


def random_disk_point(rng: np.random.Generator, rmax: float = 0.7) -> complex:
    r = rmax * np.sqrt(rng.uniform())
    theta = rng.uniform(0.0, 2.0 * np.pi)
    return complex(r * np.cos(theta), r * np.sin(theta))


def random_unimodular(rng: np.random.Generator) -> complex:
    theta = rng.uniform(0.0, 2.0 * np.pi)
    return complex(np.cos(theta), np.sin(theta))


def random_mobius(rng: np.random.Generator, rmax: float = 0.6) -> Mobius:
    return Mobius(random_disk_point(rng, rmax), random_unimodular(rng))


def random_blaschke(
    rng: np.random.Generator,
    degree: int,
    rmax: float = 0.7,
    fixed_point_centered: bool = False,
    boundary_rooted: bool = False,
) -> BlaschkeProduct:
    free = degree - 1 if fixed_point_centered else degree
    zeros = [random_disk_point(rng, rmax) for _ in range(free)]
    if fixed_point_centered:
        zeros.insert(0, 0.0 + 0.0j)
    c = 1.0 + 0.0j if boundary_rooted else random_unimodular(rng)
    return BlaschkeProduct(c, tuple(zeros))


def random_parameters(
    s: MappingSchema, rng: np.random.Generator, rmax: float = 0.5
) -> list:
    """A chart vector whose implied balancing zeros stay inside the disk."""
    periodic = s.periodic_vertices()
    out: list[float] = []
    for v in s.ids:
        w = s.w(v)
        while True:
            pts = [random_disk_point(rng, rmax) for _ in range(w)]
            if v in periodic or abs(sum(pts)) <= 0.8:
                break
        for z in pts:
            out.extend((z.real, z.imag))
    return out


def random_member(s: MappingSchema, rng: np.random.Generator, rmax: float = 0.5):
    from .modelspace import sample

    return sample(s, random_parameters(s, rng, rmax))
