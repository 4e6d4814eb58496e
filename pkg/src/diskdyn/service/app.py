"""HTTP service exposing the library.

All endpoints are stateless POSTs over the JSON wire formats of
:mod:`.models`; computations are pure, so the service is safe for concurrent
clients.  Domain, validation, and solver errors map to HTTP 400 with a typed
body; malformed payloads get FastAPI's usual 422.
"""

from __future__ import annotations

import contextlib
import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import basin as basin_mod
from .. import blaschke as bl
from .. import circle as circ
from .. import modelspace as ms
from .. import schema as sch
from .. import symfun, verify
from ..config import tolerance_overrides
from ..errors import DiskDynError
from ..sampling import random_parameters
from . import models as wire


def _maybe_overrides(tol: dict | None):
    if not tol:
        return contextlib.nullcontext()
    return tolerance_overrides(**tol)


def create_app() -> FastAPI:
    app = FastAPI(title="diskdyn", version="0.1.0")

    @app.exception_handler(DiskDynError)
    async def _domain_error(request: Request, exc: DiskDynError):
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/")
    def root():
        return {"name": "diskdyn", "version": "0.1.0", "suites": list(verify.SUITE_NAMES)}

    # -- schema ------------------------------------------------------------

    @app.post("/schema/validate")
    def schema_validate(req: wire.SchemaRequest):
        with _maybe_overrides(req.tolerances):
            s = req.schema_.to_core()
            sch.validate(s)
            cycles = [
                {"vertices": list(cyc), "composite_degree": s.composite_degree(cyc)}
                for cyc in s.cycles()
            ]
            return {
                "valid": True,
                "total_weight": s.total_weight,
                "cycles": cycles,
                "tree_vertices": s.tree_vertices_outward(),
            }

    @app.post("/schema/groups")
    def schema_groups(req: wire.SchemaGroupsRequest):
        with _maybe_overrides(req.tolerances):
            s = req.schema_.to_core()
            aut = len(sch.automorphism_group(s))
            n = sch.rotation_group_order(s)
            g = aut * n
            n0 = len(ms.kernel_N0(s, seed=req.seed))
            return {
                "aut": aut,
                "n": n,
                "g": g,
                "n0": n0,
                "g_bar": g // n0,
                "seed": req.seed,
            }

    @app.post("/schema/enumerate")
    def schema_enumerate(req: wire.EnumerateRequest):
        with _maybe_overrides(req.tolerances):
            out = sch.enumerate_schemata(req.weight)
            return {"count": len(out), "schemata": [s.to_dict() for s in out]}

    @app.post("/schema/element-compose")
    def schema_element_compose(req: wire.SchemaRequest, g1: wire.ElementModel, g2: wire.ElementModel):
        with _maybe_overrides(req.tolerances):
            s = req.schema_.to_core()
            out = sch.compose_elements(s, g1.to_core(s), g2.to_core(s))
            return out.to_dict()

    @app.post("/schema/elements")
    def schema_elements(req: wire.SchemaRequest):
        with _maybe_overrides(req.tolerances):
            s = req.schema_.to_core()
            return {"elements": [g.to_dict() for g in sch.group_elements(s)]}

    # -- blaschke ----------------------------------------------------------

    @app.post("/blaschke/eval")
    def blaschke_eval(req: wire.EvalRequest):
        with _maybe_overrides(req.tolerances):
            b = req.map.to_core()
            val = b(wire.to_complex(req.z))
            return {"value": wire.from_complex(val)}

    @app.post("/blaschke/fixed-points")
    def blaschke_fixed_points(req: wire.BlaschkeRequest):
        with _maybe_overrides(req.tolerances):
            rep = bl.fixed_points(req.map.to_core())
            return {
                "interior": None if rep.interior is None else wire.from_complex(rep.interior),
                "boundary": [wire.from_complex(z) for z in rep.boundary],
                "multipliers": list(rep.multipliers),
            }

    @app.post("/blaschke/critical")
    def blaschke_critical(req: wire.BlaschkeRequest):
        with _maybe_overrides(req.tolerances):
            pts = bl.critical_points(req.map.to_core())
            return {"points": [wire.from_complex(z) for z in pts]}

    @app.post("/blaschke/normalize-fpc")
    def blaschke_normalize_fpc(req: wire.BlaschkeRequest):
        with _maybe_overrides(req.tolerances):
            out = bl.normalize_fixed_point_centered(req.map.to_core())
            return {
                "results": [
                    {
                        "map": wire.BlaschkeModel.from_core(bmap),
                        "conjugacy": wire.MobiusModel.from_core(h),
                    }
                    for bmap, h in out
                ]
            }

    @app.post("/blaschke/normalize-cc")
    def blaschke_normalize_cc(req: wire.BlaschkeRequest):
        with _maybe_overrides(req.tolerances):
            out = bl.normalize_critically_centered(req.map.to_core())
            return {
                "results": [
                    {
                        "map": wire.BlaschkeModel.from_core(bmap),
                        "composition": wire.MobiusModel.from_core(h),
                    }
                    for bmap, h in out
                ]
            }

    @app.post("/blaschke/barycenter")
    def blaschke_barycenter(req: wire.BarycenterRequest):
        with _maybe_overrides(req.tolerances):
            p = bl.conformal_barycenter([wire.to_complex(z) for z in req.points])
            return {"point": wire.from_complex(p)}

    # -- circle ------------------------------------------------------------

    @app.post("/circle/table")
    def circle_table(req: wire.TableRequest):
        with _maybe_overrides(req.tolerances):
            b = req.map.to_core()
            tab = circ.build_coordinate_table(b, req.depth, req.base_index)
            exact, residual = circ.conjugacy_check(b, tab)
            return {
                "base_point": wire.from_complex(tab.base_point),
                "degree": tab.degree,
                "depth": tab.depth,
                "denominator": tab.denominator,
                "conjugacy_index_exact": exact,
                "conjugacy_residual": residual,
                "entries": [
                    {
                        "angle": math.atan2(z.imag, z.real) % (2.0 * math.pi),
                        "re": z.real,
                        "im": z.imag,
                        "t_numerator": j,
                        "t_denominator": tab.denominator,
                    }
                    for j, z in enumerate(complex(p) for p in tab.points)
                ],
            }

    @app.post("/circle/measure")
    def circle_measure(req: wire.MeasureRequest):
        with _maybe_overrides(req.tolerances):
            b = req.map.to_core()
            arc = circ.ArcInterval(req.arc.start, req.arc.end)
            m = circ.invariant_measure(b, arc, req.depth)
            return {
                "measure": float(m),
                "numerator": m.numerator,
                "denominator": m.denominator,
                "depth": req.depth,
            }

    @app.post("/circle/balanced")
    def circle_balanced(req: wire.MeasureRequest):
        with _maybe_overrides(req.tolerances):
            b = req.map.to_core()
            arc = circ.ArcInterval(req.arc.start, req.arc.end)
            rep = circ.verify_balanced(b, arc, req.depth)
            return {
                "parent_measure": float(rep.parent_measure),
                "expected_share": float(rep.expected_share),
                "component_arcs": [
                    {"start": c.start, "end": c.end} for c in rep.component_arcs
                ],
                "component_measures": [float(m) for m in rep.component_measures],
                "max_deviation": float(rep.max_deviation),
            }

    # -- model space ---------------------------------------------------------

    @app.post("/model/center")
    def model_center(req: wire.CenterRequest):
        with _maybe_overrides(req.tolerances):
            return ms.center_map(req.schema_.to_core()).to_dict()

    @app.post("/model/sample")
    def model_sample(req: wire.SampleRequest):
        with _maybe_overrides(req.tolerances):
            import numpy as np

            s = req.schema_.to_core()
            params = req.parameters
            if params is None:
                params = random_parameters(s, np.random.default_rng(req.seed))
            member = ms.sample(s, params)
            out = member.to_dict()
            out["parameters"] = list(params)
            return out

    @app.post("/model/validate")
    def model_validate(req: wire.ModelRequest):
        with _maybe_overrides(req.tolerances):
            ms.validate_membership(req.map.to_core())
            return {"valid": True}

    @app.post("/model/parameters")
    def model_parameters(req: wire.ModelRequest):
        with _maybe_overrides(req.tolerances):
            return {"parameters": ms.parameters_of(req.map.to_core())}

    @app.post("/model/markings")
    def model_markings(req: wire.ModelRequest):
        with _maybe_overrides(req.tolerances):
            member = req.map.to_core()
            marks = ms.boundary_markings(member)
            return {
                "count": len(marks),
                "markings": [
                    {
                        "iso": mk.iota,
                        "points": {v: wire.from_complex(q) for v, q in mk.points.items()},
                    }
                    for mk in marks
                ],
            }

    @app.post("/model/pcf")
    def model_pcf(req: wire.ModelRequest):
        with _maybe_overrides(req.tolerances):
            return {"post_critically_finite": ms.is_post_critically_finite(req.map.to_core())}

    @app.post("/model/orbit")
    def model_orbit(req: wire.OrbitRequest):
        with _maybe_overrides(req.tolerances):
            reports = ms.critical_orbits(req.map.to_core(), req.max_iter, req.tol)
            return {
                "orbits": [
                    {
                        "vertex": r.vertex,
                        "point": wire.from_complex(r.point),
                        "converged": r.converged,
                        "iterations": r.iterations,
                        "final_distance": r.final_distance,
                    }
                    for r in reports
                ]
            }

    @app.post("/model/act")
    def model_act(req: wire.ActRequest):
        with _maybe_overrides(req.tolerances):
            member = req.map.to_core()
            g = req.element.to_core(member.schema)
            return ms.act(g, member).to_dict()

    @app.post("/model/equivalent")
    def model_equivalent(req: wire.EquivalentRequest):
        with _maybe_overrides(req.tolerances):
            out = ms.conjugacy_equivalent(req.map.to_core(), req.other.to_core(), req.tol)
            return {"equivalent": out}

    # -- basin ---------------------------------------------------------------

    @app.post("/basin/derive-schema")
    def basin_derive_schema(req: wire.BasinRequest):
        with _maybe_overrides(req.tolerances):
            return basin_mod.derive_schema(req.basin.to_core()).to_dict()

    @app.post("/basin/straighten")
    def basin_straighten(req: wire.StraightenRequest):
        with _maybe_overrides(req.tolerances):
            outs = basin_mod.straighten(req.basin.to_core())
            if req.mode == "first":
                outs = outs[:1]
            elif req.mode != "all":
                raise DiskDynError(f"unknown straighten mode {req.mode!r}")
            return {
                "count": len(outs),
                "results": [
                    {
                        "model": r.model.to_dict(),
                        "iso": r.iota,
                        "mobius": {
                            v: wire.MobiusModel.from_core(h) for v, h in r.mobius.items()
                        },
                    }
                    for r in outs
                ],
            }

    # -- symmetric coordinates -------------------------------------------------

    @app.post("/util/sym/to-monic")
    def util_to_monic(req: wire.ToMonicRequest):
        with _maybe_overrides(req.tolerances):
            coeffs = symfun.to_monic([wire.to_complex(p) for p in req.points])
            return {"coefficients": [wire.from_complex(c) for c in coeffs]}

    @app.post("/util/sym/from-monic")
    def util_from_monic(req: wire.FromMonicRequest):
        with _maybe_overrides(req.tolerances):
            pts = symfun.from_monic([wire.to_complex(c) for c in req.coefficients])
            return {"points": [wire.from_complex(p) for p in pts]}

    # -- verification ------------------------------------------------------------

    @app.post("/verify/{suite}")
    def verify_suite(suite: str, req: wire.VerifyRequest):
        with _maybe_overrides(req.tolerances):
            try:
                return verify.run_suite(suite, seed=req.seed, **req.options)
            except KeyError as exc:
                raise DiskDynError(str(exc)) from exc
            except TypeError as exc:
                raise DiskDynError(f"bad suite options: {exc}") from exc

    return app


app = create_app()
