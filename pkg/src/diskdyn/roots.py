"""Polynomial root extraction tuned for low-degree disk-dynamics work.

Coefficient arrays are ascending: ``coeffs[i]`` multiplies ``z**i``.  Degrees
in this package stay small (well under 20), so a simultaneous-iteration
solver with an O(n^2) coupling term is both robust and fast enough.  The
primary path is Aberth-Ehrlich iteration followed by one Newton polish per
root; roots that stall are handled by deflating the converged ones and
re-running on the quotient.
"""

from __future__ import annotations

import numpy as np

from .config import tolerances
from .errors import NumericalError

_LEAD_TRIM = 1e-13
_STEP_TOL = 1e-14


def polyval(coeffs, z):
    """Horner evaluation of an ascending coefficient array (scalar or array z)."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def polyder(coeffs):
    return np.array([k * coeffs[k] for k in range(1, len(coeffs))], dtype=complex)


def poly_from_roots(rts):
    out = np.array([1.0 + 0.0j])
    for r in rts:
        out = np.convolve(out, np.array([-r, 1.0], dtype=complex))
    return out


def poly_mul(a, b):
    return np.convolve(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _trim_leading(coeffs):
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0:
        raise NumericalError("empty coefficient array")
    scale = float(np.max(np.abs(c)))
    if scale == 0.0:
        raise NumericalError("zero polynomial has no defined roots")
    keep = c.size
    while keep > 1 and abs(c[keep - 1]) <= _LEAD_TRIM * scale:
        keep -= 1
    return c[:keep]


def _deflate(coeffs, root):
    # synthetic division by (z - root); remainder discarded
    n = len(coeffs) - 1
    out = np.empty(n, dtype=complex)
    acc = coeffs[n]
    for k in range(n - 1, -1, -1):
        out[k] = acc
        acc = coeffs[k] + acc * root
    return out


def _quadratic(coeffs):
    c0, c1, c2 = coeffs
    disc = np.sqrt(c1 * c1 - 4.0 * c2 * c0 + 0j)
    if (np.conj(c1) * disc).real > 0:
        disc = -disc
    q = -0.5 * (c1 - disc)          # the larger-magnitude branch
    r1 = q / c2
    r2 = c0 / q if abs(q) > 0 else 0.0 + 0.0j
    return np.array([r1, r2])


def roots(coeffs, budget=None, _depth=0):
    """All complex roots (with multiplicity) of an ascending polynomial."""
    budget = tolerances().root_budget if budget is None else budget
    c = _trim_leading(coeffs)
    n = c.size - 1
    if n <= 0:
        return np.array([], dtype=complex)

    # exact roots at the origin come off by stripping exact trailing zeros
    t = 0
    while t < n and c[t] == 0:
        t += 1
    if t:
        rest = roots(c[t:], budget=budget, _depth=_depth)
        return np.concatenate([np.zeros(t, dtype=complex), rest])

    if n == 1:
        return np.array([-c[0] / c[1]])
    if n == 2:
        return _quadratic(c)

    der = polyder(c)
    radius = max(1e-6, float(abs(c[0] / c[n])) ** (1.0 / n))
    angles = 2.0 * np.pi * (np.arange(n) + 0.25) / n + 0.7
    z = radius * np.exp(1j * angles)

    converged = False
    for _ in range(budget):
        p = polyval(c, z)
        dp = polyval(der, z)
        dp = np.where(np.abs(dp) < 1e-300, 1e-300, dp)
        w = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - w * s
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = w / denom
        z = z - step
        if np.all(np.abs(step) <= _STEP_TOL * (1.0 + np.abs(z))):
            converged = True
            break

    if not converged:
        z = _deflation_rescue(c, z, budget, _depth)

    return _polish(c, der, z)


def _residual_scale(c, z):
    # coarse evaluation-error scale: |c| against powers of |z|
    zabs = np.maximum(1.0, np.abs(z))
    powers = zabs[:, None] ** np.arange(len(c))[None, :]
    return powers @ np.abs(c)


def _deflation_rescue(c, z, budget, depth):
    if depth >= 3:
        raise NumericalError("root iteration failed to converge within budget")
    res = np.abs(polyval(c, z))
    ok = res <= 1e-10 * _residual_scale(c, z)
    if not np.any(ok):
        raise NumericalError("root iteration stalled with no converged roots")
    good = z[ok]
    q = c
    for r in good:
        q = _deflate(q, r)
    rest = roots(q, budget=budget, _depth=depth + 1)
    return np.concatenate([good, rest])


def _polish(c, der, z):
    p = polyval(c, z)
    dp = polyval(der, z)
    safe = np.abs(dp) > 1e-300
    cand = np.where(safe, z - p / np.where(safe, dp, 1.0), z)
    better = np.abs(polyval(c, cand)) <= np.abs(p)
    return np.where(better, cand, z)


def batched_roots(rows, init, budget=200):
    """Durand-Kerner on a batch of same-degree polynomials.

    ``rows`` has shape (m, n+1) ascending, ``init`` shape (m, n).  Returns
    (roots, ok) where ``ok`` flags rows whose iteration converged; callers
    re-solve failed rows with :func:`roots`.
    """
    rows = np.asarray(rows, dtype=complex)
    z = np.array(init, dtype=complex)
    m, n = z.shape
    lead = rows[:, -1]
    ok = np.zeros(m, dtype=bool)
    for _ in range(budget):
        acc = np.zeros_like(z)
        for k in range(rows.shape[1] - 1, -1, -1):
            acc = acc * z + rows[:, k][:, None]
        denom = np.broadcast_to(lead[:, None], z.shape).copy()
        for i in range(n):
            for j in range(n):
                if i != j:
                    denom[:, i] = denom[:, i] * (z[:, i] - z[:, j])
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = acc / denom
        active = ~ok
        z[active] -= step[active]
        ok |= np.all(np.abs(step) <= _STEP_TOL * (1.0 + np.abs(z)), axis=1)
        if np.all(ok):
            break
    return z, ok
