"""Numerical tolerances shared across the package.

Quantitative checks read the active `Tolerances` instance at call time, so a
process can tighten or relax them globally; the CLI and the HTTP service use
this for per-request ``--tol name=value`` overrides.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, fields, replace

from .errors import ValidationError


@dataclass(frozen=True)
class Tolerances:
    eps_boundary: float = 1e-12      # map parameters stay this far inside the open disk
    eps_singular: float = 1e-12      # denominator magnitude treated as a pole
    tol_eval: float = 1e-9           # pointwise identity checks
    tol_unimodular: float = 1e-9     # |c| = 1 slack
    tol_barycenter: float = 1e-10    # residual of the balanced-configuration solve
    tol_multiplicity: float = 1e-6   # multiplier distance to 1 that triggers TangencyWarning
    tol_conj: float = 1e-7           # circle-table geometric matching
    tol_pcf: float = 1e-8            # zeros-at-origin slack for the power-map test
    tol_chart: float = 1e-9          # parameter chart round trips
    snap_circle: float = 1e-7        # radial snap distance onto the unit circle
    max_table: int = 2 ** 20         # circle-table entry budget
    root_budget: int = 500           # simultaneous-iteration sweep limit


_active = Tolerances()


def tolerances() -> Tolerances:
    return _active


def set_tolerances(tol: Tolerances) -> None:
    global _active
    _active = tol


def tolerance_names() -> list[str]:
    return [f.name for f in fields(Tolerances)]


def make_tolerances(**overrides) -> Tolerances:
    unknown = set(overrides) - set(tolerance_names())
    if unknown:
        raise ValidationError(f"unknown tolerance names: {sorted(unknown)}")
    return replace(Tolerances(), **overrides)


@contextlib.contextmanager
def tolerance_overrides(**overrides):
    """Temporarily replace fields of the active tolerances."""
    unknown = set(overrides) - set(tolerance_names())
    if unknown:
        raise ValidationError(f"unknown tolerance names: {sorted(unknown)}")
    old = tolerances()
    try:
        set_tolerances(replace(old, **overrides))
        yield tolerances()
    finally:
        set_tolerances(old)
