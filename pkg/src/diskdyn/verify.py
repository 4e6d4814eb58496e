"""Named verification suites.

Each suite runs a quantitative property batch and returns a plain dict
report: seed, per-check lines, worst residuals, and an overall ``passed``
flag.  The CLI's ``verify`` subcommands, the HTTP ``/verify`` endpoints, and
the acceptance test module all call these functions.
"""

from __future__ import annotations

import itertools
import math
import time
from fractions import Fraction

import numpy as np

from .basin import basin_from_member, straighten
from .blaschke import (
    BlaschkeProduct,
    conformal_barycenter,
    conjugate_blaschke,
    critical_points,
    fixed_points,
    normalize_critically_centered,
    normalize_fixed_point_centered,
    preimages,
)
from .circle import ArcInterval, build_coordinate_table, conjugacy_check, invariant_measure, verify_balanced
from .disk import mobius_invert
from .modelspace import (
    act,
    boundary_markings,
    center_map,
    conjugacy_equivalent,
    identity_element,
    is_post_critically_finite,
    kernel_N0,
    model_close,
    parameters_of,
    sample,
)
from .sampling import (
    random_blaschke,
    random_disk_point,
    random_member,
    random_mobius,
    random_parameters,
    random_unimodular,
)
from .schema import (
    compose_elements,
    enumerate_schemata,
    group_elements,
    invert_element,
    rotation_group_order,
    symmetry_group_order,
)

SUITE_NAMES = (
    "lemma31",
    "conjugacy",
    "measure",
    "lemma32",
    "lemma33",
    "lemma34",
    "lemma44",
    "center-uniqueness",
    "roundtrip",
    "action",
    "dimension",
)


def _report(name, seed, checks, t0, extra=None):
    out = {
        "suite": name,
        "seed": seed,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
        "runtime_s": round(time.time() - t0, 3),
    }
    if extra:
        out.update(extra)
    return out


def _check(name, passed, detail=""):
    return {"name": name, "passed": bool(passed), "detail": detail}


def run_suite(name: str, seed: int = 0, **kwargs) -> dict:
    table = {
        "lemma31": suite_lemma31,
        "conjugacy": suite_conjugacy,
        "measure": suite_measure,
        "lemma32": suite_lemma32,
        "lemma33": suite_lemma33,
        "lemma34": suite_lemma34,
        "lemma44": suite_lemma44,
        "center-uniqueness": suite_center_uniqueness,
        "roundtrip": suite_roundtrip,
        "action": suite_action,
        "dimension": suite_dimension,
    }
    if name not in table:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITE_NAMES)}")
    return table[name](seed=seed, **kwargs)


def suite_lemma31(seed: int = 0, trials: int = 50, degrees=(2, 3, 4, 5, 6)) -> dict:
    """Fixed-point census for origin-fixing products: one interior fixed
    point, d-1 repelling boundary fixed points, d distinct circle preimages
    of a random unimodular target."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    checks = []
    for d in degrees:
        worst_mult = math.inf
        ok = True
        detail = ""
        for _ in range(trials):
            b = random_blaschke(rng, d, rmax=0.75, fixed_point_centered=True)
            rep = fixed_points(b)
            if rep.interior is None or abs(rep.interior) > 1e-9:
                ok, detail = False, "interior fixed point missing or off origin"
                break
            if len(rep.boundary) != d - 1:
                ok, detail = False, f"{len(rep.boundary)} boundary fixed points"
                break
            worst_mult = min(worst_mult, min(rep.multipliers))
            if min(rep.multipliers) <= 1.0 + 1e-6:
                ok, detail = False, f"multiplier {min(rep.multipliers)} not repelling"
                break
            target = random_unimodular(rng)
            sols = preimages(b, target)
            if len(sols) != d or min(
                abs(u - v) for u, v in itertools.combinations(sols, 2)
            ) < 1e-9:
                ok, detail = False, "circle preimages not d distinct points"
                break
        checks.append(
            _check(
                f"degree {d}: {trials} maps",
                ok,
                detail or f"min boundary multiplier {worst_mult:.6f}",
            )
        )
    return _report("lemma31", seed, checks, t0)


def suite_conjugacy(seed: int = 0, maps_per_degree: int = 5, depth: int = 10) -> dict:
    """Coordinate-table conjugacy: entry j maps to entry d*j mod d^k exactly,
    with geometric residual under 1e-7."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    checks = []
    for d in (2, 3):
        for i in range(maps_per_degree):
            b = random_blaschke(rng, d, rmax=0.5, fixed_point_centered=True, boundary_rooted=True)
            tab = build_coordinate_table(b, depth)
            exact, res = conjugacy_check(b, tab)
            checks.append(
                _check(
                    f"degree {d} map {i}: {tab.size} entries",
                    exact and res < 1e-7,
                    f"index arithmetic exact={exact}, residual {res:.2e}",
                )
            )
    return _report("conjugacy", seed, checks, t0)


def suite_measure(seed: int = 0, depth: int = 12) -> dict:
    """Balanced-measure checks: total mass exactly 1 at every depth, exact
    additivity, component balance within the counting bound, and agreement
    with arc length for power maps."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    checks = []

    b = random_blaschke(rng, 2, rmax=0.5, fixed_point_centered=True, boundary_rooted=True)
    full = ArcInterval(0.0, 2.0 * math.pi)
    total_ok = all(
        invariant_measure(b, full, k) == Fraction(1) for k in (2, 5, 8)
    )
    checks.append(_check("total mass 1 at depths 2/5/8", total_ok))

    s0, s1, s2 = sorted(rng.uniform(0.0, 2.0 * math.pi, size=3))
    i1, i2, i12 = ArcInterval(s0, s1), ArcInterval(s1, s2), ArcInterval(s0, s2)
    m1 = invariant_measure(b, i1, 10)
    m2 = invariant_measure(b, i2, 10)
    m12 = invariant_measure(b, i12, 10)
    checks.append(_check("additivity exact for adjacent arcs", m1 + m2 == m12, f"{m1}+{m2} vs {m12}"))

    arc = ArcInterval(0.3, 0.3 + 1.1)
    rep = verify_balanced(b, arc, depth)
    bound = 10.0 * 2.0 ** (1 - depth)
    checks.append(
        _check(
            f"balanced components at depth {depth}",
            float(rep.max_deviation) < bound,
            f"max deviation {float(rep.max_deviation):.2e} < {bound:.2e}",
        )
    )

    for d, k in ((2, 12), (3, 8)):
        power = BlaschkeProduct(1.0, (0.0,) * d)
        arc = ArcInterval(0.7, 0.7 + 1.9)
        m = invariant_measure(power, arc, k)
        expect = arc.length / (2.0 * math.pi)
        err = abs(float(m) - expect)
        checks.append(
            _check(f"power map d={d} vs arc length", err < 1e-3, f"error {err:.2e}")
        )
    return _report("measure", seed, checks, t0)


def _random_map_with_interior_fp(rng, d):
    base = random_blaschke(rng, d, rmax=0.6, fixed_point_centered=True)
    g = random_mobius(rng)
    return conjugate_blaschke(base, mobius_invert(g))


def suite_lemma32(seed: int = 0, trials: int = 50, degrees=(2, 3, 4, 5)) -> dict:
    """Fixed-point-centering: exactly d-1 conjugations, each boundary-rooted
    and origin-fixing with residuals under 1e-9."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    checks = []
    for d in degrees:
        ok, detail, worst = True, "", 0.0
        for _ in range(trials):
            phi = _random_map_with_interior_fp(rng, d)
            out = normalize_fixed_point_centered(phi)
            if len(out) != d - 1:
                ok, detail = False, f"{len(out)} results, expected {d - 1}"
                break
            hs = [h for _, h in out]
            for (bmap, h) in out:
                res = max(abs(bmap.eval_raw(0.0)), abs(bmap.eval_raw(1.0) - 1.0))
                z = random_disk_point(rng, 0.8)
                hin = mobius_invert(h)
                res = max(res, abs(bmap.eval_raw(z) - hin.eval_raw(phi.eval_raw(h.eval_raw(z)))))
                worst = max(worst, res)
            if worst > 1e-9:
                ok, detail = False, f"residual {worst:.2e}"
                break
            dists = [
                abs(h1.eval_raw(1.0) - h2.eval_raw(1.0))
                for h1, h2 in itertools.combinations(hs, 2)
            ]
            if dists and min(dists) < 1e-9:
                ok, detail = False, "conjugating automorphisms not distinct"
                break
        checks.append(_check(f"degree {d}: {trials} maps", ok, detail or f"worst residual {worst:.2e}"))
    return _report("lemma32", seed, checks, t0)


def suite_lemma33(seed: int = 0, trials: int = 50, degrees=(2, 3, 4, 5)) -> dict:
    """Critical centering: exactly d right-compositions, each boundary-rooted
    with zero-sum critical points within 1e-9."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    checks = []
    for d in degrees:
        ok, detail, worst = True, "", 0.0
        for _ in range(trials):
            phi = random_blaschke(rng, d, rmax=0.7)
            out = normalize_critically_centered(phi)
            if len(out) != d:
                ok, detail = False, f"{len(out)} results, expected {d}"
                break
            for (bmap, h) in out:
                res = max(
                    abs(sum(critical_points(bmap))),
                    abs(bmap.eval_raw(1.0) - 1.0),
                )
                worst = max(worst, res)
            if worst > 1e-9:
                ok, detail = False, f"residual {worst:.2e}"
                break
        checks.append(_check(f"degree {d}: {trials} maps", ok, detail or f"worst residual {worst:.2e}"))
    return _report("lemma33", seed, checks, t0)


def suite_lemma34(seed: int = 0, trials: int = 100) -> dict:
    """Balanced-configuration point: residual, rotation/Moebius equivariance,
    and symmetric configurations centering at the origin."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst_res = 0.0
    worst_equi = 0.0
    worst_sym = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 7))
        pts = [random_disk_point(rng, 0.8) for _ in range(n)]
        p = conformal_barycenter(pts)
        res = abs(sum((c - p) / (1.0 - p.conjugate() * c) for c in pts))
        worst_res = max(worst_res, res)
        g = random_mobius(rng)
        moved = [g.eval_raw(c) for c in pts]
        worst_equi = max(worst_equi, abs(conformal_barycenter(moved) - g.eval_raw(p)))
    for _ in range(trials // 2):
        a = random_disk_point(rng, 0.8)
        worst_sym = max(worst_sym, abs(conformal_barycenter([a, -a])))
        rot = random_unimodular(rng)
        n = int(rng.integers(2, 6))
        ring = [rot * abs(a) * np.exp(2j * np.pi * k / n) for k in range(n)]
        worst_sym = max(worst_sym, abs(conformal_barycenter(ring)))
    checks = [
        _check("residual < 1e-10", worst_res < 1e-10, f"worst {worst_res:.2e}"),
        _check("equivariance < 1e-9", worst_equi < 1e-9, f"worst {worst_equi:.2e}"),
        _check("symmetric configurations center at 0 < 1e-10", worst_sym < 1e-10, f"worst {worst_sym:.2e}"),
    ]
    return _report("lemma34", seed, checks, t0)


def suite_lemma44(seed: int = 0, max_weight: int = 3, members: int = 10) -> dict:
    """Marking census: brute-force marking count equals
    |Aut| * prod(D_c - 1) * prod d(v) for the power-map member and for random
    members, over every schema of total weight <= max_weight."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    checks = []
    for w in range(1, max_weight + 1):
        for s in enumerate_schemata(w):
            expect = symmetry_group_order(s)
            tag = f"schema {s.to_dict()['vertices']}"
            n_center = len(boundary_markings(center_map(s)))
            ok = n_center == expect
            detail = f"center {n_center} vs |G| {expect}"
            if ok:
                for _ in range(members):
                    m = random_member(s, rng)
                    n_m = len(boundary_markings(m))
                    if n_m != expect:
                        ok, detail = False, f"member count {n_m} vs {expect}"
                        break
            checks.append(_check(tag, ok, detail))
    return _report("lemma44", seed, checks, t0)


def suite_center_uniqueness(seed: int = 0, max_weight: int = 3, samples: int = 1000) -> dict:
    """The power-map member is critically finite; random members are not
    unless their parameter vector is numerically zero."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    checks = []
    for w in range(1, max_weight + 1):
        for s in enumerate_schemata(w):
            tag = f"schema {s.to_dict()['vertices']}"
            if not is_post_critically_finite(center_map(s)):
                checks.append(_check(tag, False, "center map not detected"))
                continue
            bad = 0
            for _ in range(samples):
                params = random_parameters(s, rng)
                if np.linalg.norm(params) < 1e-8:
                    continue
                if is_post_critically_finite(sample(s, params)):
                    bad += 1
            checks.append(
                _check(tag, bad == 0, f"{bad} false positives in {samples} samples")
            )
    return _report("center-uniqueness", seed, checks, t0)


def suite_roundtrip(seed: int = 0, max_weight: int = 3, scrambles: int = 10) -> dict:
    """Scramble members by per-component automorphisms, straighten, and check
    the output count |G(S)| with every output equivalent to the original."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    checks = []
    for w in range(1, max_weight + 1):
        for s in enumerate_schemata(w):
            expect = symmetry_group_order(s)
            tag = f"schema {s.to_dict()['vertices']}"
            ok, detail = True, f"{scrambles} scrambles, {expect} conjugacies each"
            for _ in range(scrambles):
                m = random_member(s, rng)
                autos = {v: random_mobius(rng) for v in s.ids}
                outs = straighten(basin_from_member(m, autos))
                if len(outs) != expect:
                    ok, detail = False, f"{len(outs)} conjugacies vs |G| {expect}"
                    break
                if not all(conjugacy_equivalent(r.model, m, tol=1e-7) for r in outs):
                    ok, detail = False, "output not equivalent to the original"
                    break
            checks.append(_check(tag, ok, detail))
    return _report("roundtrip", seed, checks, t0)


def suite_action(seed: int = 0, max_weight: int = 3, probes: int = 20, pair_cap: int = 40) -> dict:
    """Action axioms: identity, compositionality, orbit consistency with the
    equivalence test, and the kernel being a subgroup of dividing order."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    checks = []
    for w in range(1, max_weight + 1):
        for s in enumerate_schemata(w):
            tag = f"schema {s.to_dict()['vertices']}"
            G = group_elements(s)
            members = [random_member(s, rng) for _ in range(probes)]
            e = identity_element(s)
            ok = all(model_close(act(e, m), m, 1e-8) for m in members)
            detail = "identity"
            if ok:
                pairs = list(itertools.product(G, G))
                if len(pairs) > pair_cap:
                    idx = rng.choice(len(pairs), size=pair_cap, replace=False)
                    pairs = [pairs[i] for i in idx]
                for g1, g2 in pairs:
                    gg = compose_elements(s, g1, g2)
                    if not all(
                        model_close(act(g1, act(g2, m)), act(gg, m), 1e-8)
                        for m in members[:5]
                    ):
                        ok, detail = False, "compositionality failed"
                        break
            if ok:
                m = members[0]
                g = G[int(rng.integers(len(G)))]
                if not conjugacy_equivalent(m, act(g, m)):
                    ok, detail = False, "orbit member not equivalent"
            if ok and probes >= 2 and not model_close(members[0], members[1], 1e-8):
                if conjugacy_equivalent(members[0], members[1], tol=1e-8):
                    ok, detail = False, "independent samples spuriously equivalent"
            if ok:
                K = kernel_N0(s, seed=seed, probes=probes)
                kset = {(k.iota, k.rotation.angles) for k in K}
                closed = all(
                    (
                        (compose_elements(s, k1, k2).iota,
                         compose_elements(s, k1, k2).rotation.angles) in kset
                    )
                    for k1 in K
                    for k2 in K
                ) and all(
                    (invert_element(s, k).iota, invert_element(s, k).rotation.angles) in kset
                    for k in K
                )
                divides = len(G) % len(K) == 0
                ok = closed and divides
                detail = f"kernel order {len(K)} divides |G| {len(G)}: {divides}, subgroup: {closed}"
            checks.append(_check(tag, ok, detail))
    return _report("action", seed, checks, t0)


def suite_dimension(seed: int = 0, max_weight: int = 4, vectors: int = 10) -> dict:
    """Chart shape: exactly 2w real parameters accepted, round trips under
    1e-9, wrong lengths rejected."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    checks = []
    for w in range(1, max_weight + 1):
        for s in enumerate_schemata(w):
            tag = f"schema {s.to_dict()['vertices']}"
            ok, detail = True, ""
            try:
                sample(s, [0.0] * (2 * s.total_weight - 1))
                ok, detail = False, "wrong-length vector accepted"
            except Exception:
                pass
            worst = 0.0
            if ok:
                for _ in range(vectors):
                    params = random_parameters(s, rng)
                    if len(params) != 2 * s.total_weight:
                        ok, detail = False, "parameter count mismatch"
                        break
                    back = parameters_of(sample(s, params))
                    worst = max(worst, float(np.max(np.abs(np.array(back) - np.array(params)))))
                if ok and worst > 1e-9:
                    ok, detail = False, f"round-trip error {worst:.2e}"
            checks.append(_check(tag, ok, detail or f"worst round-trip {worst:.2e}"))
    return _report("dimension", seed, checks, t0)
