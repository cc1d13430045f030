"""Structured export of lattices (JSON) and the m=2 tiling (SVG).

Both emitters are deterministic functions of their inputs: fixed key order,
floats printed with 17 significant digits in JSON (exact round-trip), fixed
element order in SVG. Re-running on the same maps yields byte-identical
files.
"""
from __future__ import annotations

import json
import math

from .errors import GeometryError
from .hyperlattice import (CROSS_POLYTOPE, RECTIFIED_CUBE, HPMaps, HoneycombCell,
                           verify_cross_polytope, verify_cuboctahedron,
                           verify_square_face)

SCHEMA = "billinets.lattice/1"


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def _render_json(value, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {_render_json(v, indent + 1)}'
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        seq = list(value)
        if all(isinstance(v, (int, float, bool)) or v is None for v in seq):
            return "[" + ", ".join(_render_json(v) for v in seq) + "]"
        items = [f"{pad}  {_render_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return json.dumps(value)
    if isinstance(value, float):
        return _fmt_float(value)
    raise TypeError(f"cannot serialize {type(value)}")


def cell_checks(maps: HPMaps, cell: HoneycombCell, tol_rank: float = 1e-9,
                tol_cr: float = 1e-7):
    """Verification residuals of one cell as a plain dict (JSON-ready)."""
    if not cell.complete:
        return None
    if cell.kind == CROSS_POLYTOPE:
        rep = verify_cross_polytope(maps, cell, tol_rank=tol_rank)
        out = {
            "collinearity": rep.collinearity,
            "max_quadric_residual": max(rep.quadric_residuals, default=0.0),
            "passed": rep.passed,
        }
        if rep.cross_ratio is not None:
            out["cross_ratio"] = rep.cross_ratio
        return out
    if maps.m == 2:
        rep = verify_square_face(maps, [cell.vertices[k] for k in cell.square_faces[0]],
                                 tol_rank=tol_rank, tol_cr=tol_cr)
        return {
            "pencil": rep.pencil,
            "cross_ratio": rep.cross_ratio,
            "max_tangency_residual": max(rep.tangency_residuals, default=0.0),
            "harmonic": rep.harmonic,
            "passed": rep.passed,
        }
    rep = verify_cuboctahedron(maps, cell, tol_rank=tol_rank, tol_cr=tol_cr)
    return {
        "max_triangle_collinearity": rep.max_triangle_collinearity,
        "max_square_pencil": rep.max_square_pencil,
        "square_cross_ratios": [r.cross_ratio for r in rep.square_reports],
        "membership_ok": rep.membership_ok,
        "passed": rep.passed,
    }


def lattice_document(maps: HPMaps, cells, tol_rank: float = 1e-9,
                     tol_cr: float = 1e-7) -> dict:
    """The export document: vertices with their H/P values, cells with
    vertex references and verification residuals."""
    vertices = sorted(maps.hyperplanes.keys(), key=lambda v: v.dcoords)
    index = {v.dcoords: k for k, v in enumerate(vertices)}
    vertex_records = []
    for v in vertices:
        vertex_records.append({
            "dcoords": list(v.dcoords),
            "direction": v.direction,
            "lambda": maps.lam(v),
            "hyperplane": [float(c) for c in maps.H(v).coords],
            "point": [float(c) for c in maps.P(v).coords],
        })
    cell_records = []
    for cell in sorted(cells, key=lambda c: (c.kind, c.anchor)):
        record = {
            "kind": cell.kind,
            "anchor": list(cell.anchor),
            "partial": not cell.complete,
            "vertices": [index[v.dcoords] for v in cell.vertices if v.dcoords in index],
        }
        if cell.kind == RECTIFIED_CUBE:
            record["square_faces"] = [list(f) for f in cell.square_faces]
            if cell.triangle_faces:
                record["triangle_faces"] = [list(f) for f in cell.triangle_faces]
        checks = cell_checks(maps, cell, tol_rank, tol_cr) if cell.complete else None
        if checks is not None:
            record["checks"] = checks
        cell_records.append(record)
    return {
        "schema": SCHEMA,
        "m": maps.m,
        "window": list(maps.window),
        "semi_axes": list(maps.family.semi_axes),
        "lambdas": list(maps.lambdas),
        "vertices": vertex_records,
        "cells": cell_records,
    }


def export_lattice(maps: HPMaps, cells, path, tol_rank: float = 1e-9,
                   tol_cr: float = 1e-7) -> str:
    text = _render_json(lattice_document(maps, cells, tol_rank, tol_cr)) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return str(path)


# -- SVG tiling (m = 2) ------------------------------------------------------

_SCALE = 80.0
_MARGIN = 40.0


def _svg_num(x: float) -> str:
    return format(x, ".6g")


def _xml_escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _polygon(points_svg, fill: str, title: str) -> str:
    pts = " ".join(f"{_svg_num(x)},{_svg_num(y)}" for x, y in points_svg)
    return (f'  <polygon points="{pts}" fill="{fill}" stroke="#333333" '
            f'stroke-width="1.5">\n    <title>{_xml_escape(title)}</title>\n  </polygon>\n')


def render_tiling_svg(maps: HPMaps, cells, path, tol_rank: float = 1e-9,
                      tol_cr: float = 1e-7) -> str:
    """Draw the m=2 tiling: rectified squares white, cross polytopes gray,
    residuals and cross-ratios attached as hover titles."""
    if maps.m != 2:
        raise GeometryError("the square tiling rendering needs m = 2")
    n1, n2 = maps.window

    def to_svg(pos):
        return (_MARGIN + pos[0] * _SCALE, _MARGIN + (n2 - pos[1]) * _SCALE)

    width = 2 * _MARGIN + n1 * _SCALE
    height = 2 * _MARGIN + n2 * _SCALE
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_svg_num(width)}" '
           f'height="{_svg_num(height)}" viewBox="0 0 {_svg_num(width)} {_svg_num(height)}">\n']
    out.append(f'  <rect x="0" y="0" width="{_svg_num(width)}" height="{_svg_num(height)}" '
               'fill="#fdfdfd"/>\n')
    for k in range(n1 + 1):
        (x0, y0), (x1, y1) = to_svg((k, 0)), to_svg((k, n2))
        out.append(f'  <line x1="{_svg_num(x0)}" y1="{_svg_num(y0)}" x2="{_svg_num(x1)}" '
                   f'y2="{_svg_num(y1)}" stroke="#cccccc" stroke-width="1"/>\n')
    for k in range(n2 + 1):
        (x0, y0), (x1, y1) = to_svg((0, k)), to_svg((n1, k))
        out.append(f'  <line x1="{_svg_num(x0)}" y1="{_svg_num(y0)}" x2="{_svg_num(x1)}" '
                   f'y2="{_svg_num(y1)}" stroke="#cccccc" stroke-width="1"/>\n')

    ordered = sorted(cells, key=lambda c: (c.kind != RECTIFIED_CUBE, c.anchor))
    for cell in ordered:
        if not cell.complete:
            continue
        checks = cell_checks(maps, cell, tol_rank, tol_cr)
        if cell.kind == RECTIFIED_CUBE:
            cycle = [cell.vertices[k] for k in cell.square_faces[0]]
            fill = "#ffffff"
            title = (f"rectified square at {tuple(c // 2 for c in cell.anchor)}: "
                     f"pencil {checks['pencil']:.3e}, CR {checks['cross_ratio']:.9g}")
        else:
            cycle = [cell.vertices[k] for k in (0, 2, 1, 3)]
            fill = "#b8b8b8"
            title = (f"cross polytope at {tuple(c // 2 for c in cell.anchor)}: "
                     f"collinearity {checks['collinearity']:.3e}, "
                     f"CR {checks.get('cross_ratio', float('nan')):.9g}")
        out.append(_polygon([to_svg(v.position()) for v in cycle], fill, title))

    for v in sorted(maps.hyperplanes.keys(), key=lambda v: v.dcoords):
        x, y = to_svg(v.position())
        h = maps.H(v)
        p = maps.P(v)
        title = (f"midpoint {v.dcoords} dir e{v.direction} lambda {maps.lam(v):.6g}; "
                 f"H=({', '.join(format(c, '.6g') for c in h.coords)}); "
                 f"P=({', '.join(format(c, '.6g') for c in p.coords)})")
        out.append(f'  <circle cx="{_svg_num(x)}" cy="{_svg_num(y)}" r="3.5" fill="#1f5fa6">'
                   f'\n    <title>{_xml_escape(title)}</title>\n  </circle>\n')
    out.append("</svg>\n")
    text = "".join(out)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return str(path)
