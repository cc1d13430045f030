"""End-to-end verification of a scene: build, check, summarize.

Exit codes: 0 all checks pass, 1 verification failure, 2 bad configuration,
3 construction failure (reported with the lattice vertex).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .drnet import build_net, verify_net
from .errors import ConstructionError, GeometryError
from .hyperlattice import (CROSS_POLYTOPE, enumerate_lattice, extract_maps,
                           verify_cross_polytope, verify_cuboctahedron,
                           verify_square_face)
from .scene import SceneConfig

EXIT_PASS = 0
EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2
EXIT_CONSTRUCT = 3


@dataclass
class VerificationOutcome:
    report: str
    exit_code: int
    maps: object = None
    cells: object = None


def _row(label: str, count: int, what: str, value: float, tol: float, ok: bool) -> str:
    return (f"  {label:<18} {count:>4}   max {what:<14} {value:9.3e}   "
            f"tol {tol:7.1e}   {'PASS' if ok else 'FAIL'}")


def run_verification(config: SceneConfig) -> VerificationOutcome:
    """Build the net of a scene, extract the maps, verify every complete
    cell, and summarize counts, worst residuals and cross-ratio deviations."""
    tol = config.tolerances
    lines = [f"scene: d={config.d} semi_axes={config.semi_axes} m={config.m} "
             f"lambdas={config.lambdas} window={'x'.join(str(n) for n in config.window)}"]
    family = config.family()
    try:
        net = build_net(family, config.lambdas, config.initial_line(), config.window,
                        tol_rank=tol.tol_rank, tol_forward=tol.tol_forward)
    except ConstructionError as exc:
        lines.append(f"construction failed: {exc}")
        return VerificationOutcome("\n".join(lines) + "\n", EXIT_CONSTRUCT)
    except GeometryError as exc:
        lines.append(f"invalid scene geometry: {exc}")
        return VerificationOutcome("\n".join(lines) + "\n", EXIT_CONFIG)

    failed = []
    report = verify_net(family, net, tol_edge=1e-8, tol_pencil=tol.tol_rank,
                        tol_caustic=tol.tol_caustic)
    lines.append(f"net: {len(net.lines)} lines, {len(net.edges())} edges")
    lines.append(_row("edge reflections", len(report.edges), "residual",
                      report.max_edge_residual, 1e-8, report.max_edge_residual <= 1e-8))
    lines.append(_row("quadrilaterals", len(report.quads), "pencil",
                      report.max_pencil_residual, tol.tol_rank,
                      report.max_pencil_residual <= tol.tol_rank))
    lines.append(_row("caustic drift", len(report.caustics), "drift",
                      report.max_caustic_drift, tol.tol_caustic,
                      report.max_caustic_drift <= tol.tol_caustic))
    if not report.passed:
        failed.append("net verification")

    maps = cells = None
    if config.m in (2, 3):
        maps = extract_maps(family, net, verify=False)
        _, cells = enumerate_lattice(config.window, config.m)
        cross = [c for c in cells if c.kind == CROSS_POLYTOPE]
        cubes = [c for c in cells if c.kind != CROSS_POLYTOPE]

        cross_reports = [verify_cross_polytope(maps, c, tol_rank=tol.tol_rank) for c in cross]
        if cross_reports:
            worst_coll = max(r.collinearity for r in cross_reports)
            worst_quad = max((max(r.quadric_residuals, default=0.0) for r in cross_reports),
                             default=0.0)
            ok = all(r.passed for r in cross_reports)
            lines.append(_row("cross polytopes", len(cross_reports), "collinearity",
                              worst_coll, tol.tol_rank, ok))
            lines.append(_row("", len(cross_reports), "quadric resid", worst_quad,
                              1e-10, worst_quad <= 1e-10))
            if not ok or worst_quad > 1e-10:
                failed.append("cross polytope checks")

        square_reports = []
        cube_ok = True
        if config.m == 2:
            for c in cubes:
                square_reports.append(
                    verify_square_face(maps, [c.vertices[k] for k in c.square_faces[0]],
                                       tol_rank=tol.tol_rank, tol_cr=tol.tol_cr))
        else:
            for c in cubes:
                rep = verify_cuboctahedron(maps, c, tol_rank=tol.tol_rank, tol_cr=tol.tol_cr)
                square_reports.extend(rep.square_reports)
                worst_tri = rep.max_triangle_collinearity
                if worst_tri > tol.tol_rank or not rep.membership_ok:
                    cube_ok = False
                lines.append(_row("star triplets", len(rep.triangle_collinearity),
                                  "collinearity", worst_tri, tol.tol_rank,
                                  worst_tri <= tol.tol_rank))
        if square_reports:
            worst_pencil = max(r.pencil for r in square_reports)
            worst_cr = max((abs(r.cross_ratio + 1.0) for r in square_reports
                            if r.cross_ratio is not None and math.isfinite(r.cross_ratio)),
                           default=math.inf)
            ok = all(r.passed for r in square_reports) and cube_ok
            lines.append(_row("square faces", len(square_reports), "pencil",
                              worst_pencil, tol.tol_rank, worst_pencil <= tol.tol_rank))
            lines.append(_row("", len(square_reports), "|CR + 1|", worst_cr,
                              tol.tol_cr, worst_cr <= tol.tol_cr))
            if not ok:
                failed.append("square face checks")

    if failed:
        lines.append(f"verdict: FAIL ({', '.join(failed)})")
        return VerificationOutcome("\n".join(lines) + "\n", EXIT_VERIFY_FAIL, maps, cells)
    lines.append("verdict: PASS")
    return VerificationOutcome("\n".join(lines) + "\n", EXIT_PASS, maps, cells)
