"""The edge-midpoint lattice, its honeycomb cells, and the H/P maps.

Vertices carry doubled integer coordinates (2*n0 + e_i for the edge
(n0, n0+e_i)), so exactly one coordinate is odd and its index is the edge
direction; identity stays exact and hashable. The honeycomb has two cell
kinds: cross polytopes around lattice vertices (midpoints of all incident
edges) and rectified cubes on unit cells (midpoints of the cube's edges; the
cuboctahedron when m=3).

H maps an edge midpoint to the tangent hyperplane at the reflection point of
its two vertex lines; P maps it to that intersection point, which is also
the touching point of H with the unique family member it touches.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .billiards import nearest_intersection, reflect
from .confocal import ConfocalFamily
from .drnet import DRNet, double_reflection, edge_event, meet_point, verify_net
from .errors import ConstructionError, GeometryError
from .projective import (DualHyperplane, HomPoint, ProjLine,
                         collinearity_residual, cross_ratio_collinear,
                         cross_ratio_pencil, pencil_residual)
from .tolerances import TOL_CR, TOL_RANK

CROSS_POLYTOPE = "cross_polytope"
RECTIFIED_CUBE = "rectified_cube"

_TANGENCY_TOL = 1e-10


@dataclass(frozen=True)
class MidVertex:
    """Midpoint of the Z^m edge (n0, n0 + e_direction), in doubled coordinates."""
    dcoords: tuple[int, ...]
    direction: int

    def __post_init__(self):
        object.__setattr__(self, "dcoords", tuple(int(c) for c in self.dcoords))
        odd = [i for i, c in enumerate(self.dcoords) if c % 2 != 0]
        if odd != [self.direction]:
            raise GeometryError(
                f"doubled coordinates {self.dcoords} must have exactly one odd entry, "
                f"at index {self.direction}")

    @classmethod
    def of_edge(cls, n0, direction: int) -> "MidVertex":
        d = tuple(2 * int(c) + (1 if k == direction else 0) for k, c in enumerate(n0))
        return cls(d, direction)

    def edge(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        n0 = tuple(c // 2 for c in self.dcoords)
        n1 = tuple(c + (1 if k == self.direction else 0) for k, c in enumerate(n0))
        return n0, n1

    def position(self) -> np.ndarray:
        return np.asarray(self.dcoords, dtype=float) / 2.0


@dataclass(frozen=True)
class HoneycombCell:
    kind: str
    anchor: tuple[int, ...]          # doubled center (cross polytope) or doubled min corner
    vertices: tuple[MidVertex, ...]
    square_faces: tuple[tuple[int, ...], ...] = ()
    triangle_faces: tuple[tuple[int, ...], ...] = ()
    complete: bool = True

    def opposite_pairs(self) -> tuple[tuple[int, int], ...]:
        """Index pairs of opposite vertices (cross polytopes only)."""
        if self.kind != CROSS_POLYTOPE or not self.complete:
            raise GeometryError("opposite pairs are defined for complete cross polytopes")
        return tuple((2 * i, 2 * i + 1) for i in range(len(self.vertices) // 2))


def _cross_polytope(center, m: int, window, include_partial: bool):
    dc = tuple(2 * int(c) for c in center)
    vertices = []
    missing = 0
    for i in range(m):
        for sign in (1, -1):
            n0 = list(center)
            if sign < 0:
                n0[i] -= 1
            if 0 <= n0[i] and n0[i] + 1 <= window[i]:
                vertices.append(MidVertex.of_edge(n0, i))
            else:
                missing += 1
    complete = missing == 0
    if not complete and (not include_partial or not vertices):
        return None
    return HoneycombCell(CROSS_POLYTOPE, dc, tuple(vertices), complete=complete)


def _rectified_cube(corner, m: int) -> HoneycombCell:
    dc = tuple(2 * int(c) for c in corner)
    rel_vertices = []
    for i in range(m):
        for eps in itertools.product((0, 1), repeat=m - 1):
            rel = [2 * e for e in eps]
            rel.insert(i, 1)
            rel_vertices.append((tuple(rel), i))
    index = {rel: k for k, (rel, _) in enumerate(rel_vertices)}
    vertices = tuple(
        MidVertex(tuple(a + b for a, b in zip(dc, rel)), i)
        for rel, i in rel_vertices)

    square_faces = []
    triangle_faces = []
    if m == 2:
        # cycle bottom -> right -> top -> left; diagonals share a direction
        square_faces.append(tuple(index[r] for r in ((1, 0), (2, 1), (1, 2), (0, 1))))
    elif m == 3:
        for k in range(3):
            i1, i2 = [i for i in range(3) if i != k]
            for c in (0, 2):
                cycle = []
                for r1, r2 in ((1, 0), (2, 1), (1, 2), (0, 1)):
                    rel = [0, 0, 0]
                    rel[i1], rel[i2], rel[k] = r1, r2, c
                    cycle.append(index[tuple(rel)])
                square_faces.append(tuple(cycle))
        for eps in itertools.product((0, 1), repeat=3):
            tri = []
            for i in range(3):
                rel = [2 * e for e in eps]
                rel[i] += 1 - 2 * eps[i]
                tri.append(index[tuple(rel)])
            triangle_faces.append(tuple(tri))
    return HoneycombCell(RECTIFIED_CUBE, dc, vertices,
                         tuple(square_faces), tuple(triangle_faces))


def enumerate_lattice(window, m: int | None = None, include_partial: bool = False):
    """All midpoint vertices of a window of Z^m plus the honeycomb cells.

    Complete cells only by default; include_partial adds boundary cross
    polytopes (flagged) whose center lies on the window boundary.
    """
    window = tuple(int(n) for n in window)
    if m is None:
        m = len(window)
    if m not in (2, 3):
        raise GeometryError(f"lattice enumeration supports m in {{2, 3}}, got {m}")
    if len(window) != m:
        raise GeometryError("window length must equal m")
    if any(n < 0 for n in window):
        raise GeometryError("window extents must be nonnegative")

    vertices = []
    for i in range(m):
        ranges = [range(window[j] + 1) if j != i else range(window[j]) for j in range(m)]
        for n0 in itertools.product(*ranges):
            vertices.append(MidVertex.of_edge(n0, i))
    vertices.sort(key=lambda v: v.dcoords)

    cells = []
    for corner in itertools.product(*(range(n) for n in window)):
        cells.append(_rectified_cube(corner, m))
    for center in itertools.product(*(range(n + 1) for n in window)):
        interior = all(1 <= center[i] <= window[i] - 1 for i in range(m))
        if interior or include_partial:
            cell = _cross_polytope(center, m, window, include_partial)
            if cell is not None:
                cells.append(cell)
    cells.sort(key=lambda c: (c.kind, c.anchor))
    return vertices, cells


@dataclass(frozen=True, eq=False)
class HPMaps:
    """The tangent-hyperplane and touching-point maps of a net's edges."""
    family: ConfocalFamily
    lambdas: tuple[float, ...]
    window: tuple[int, ...]
    hyperplanes: dict
    points: dict

    @property
    def m(self) -> int:
        return len(self.lambdas)

    def H(self, v: MidVertex) -> DualHyperplane:
        return self.hyperplanes[v]

    def P(self, v: MidVertex) -> HomPoint:
        return self.points[v]

    def lam(self, v: MidVertex) -> float:
        return self.lambdas[v.direction]


def extract_maps(family: ConfocalFamily, net: DRNet, verify: bool = True) -> HPMaps:
    """H and P at every edge midpoint of the net's window."""
    if verify:
        report = verify_net(family, net)
        if not report.passed:
            raise ConstructionError(
                "net fails verification: " + "; ".join(report.failures[:3]))
    hyperplanes = {}
    points = {}
    for vertex, i in net.edges():
        mid = MidVertex.of_edge(vertex, i)
        lam = net.lambdas[i]
        x_meet, _, _, _, _ = edge_event(family, net, vertex, i)
        point = nearest_intersection(family, lam, net.lines[tuple(vertex)], x_meet)
        hyperplanes[mid] = family.tangent_plane_at(lam, point.affine_coords()).canonical()
        points[mid] = point.canonical()
    return HPMaps(family, net.lambdas, net.window, hyperplanes, points)


def _require_vertices(maps: HPMaps, vertices):
    missing = [v for v in vertices if v not in maps.hyperplanes]
    if missing:
        raise GeometryError(f"cell vertex {missing[0].dcoords} is outside the mapped window")


@dataclass(eq=False)
class CrossPolytopeReport:
    cell: HoneycombCell
    collinearity: float
    quadric_residuals: list
    cross_ratio: float | None
    passed: bool
    failures: list = field(default_factory=list)


def verify_cross_polytope(maps: HPMaps, cell: HoneycombCell,
                          tol_rank: float = TOL_RANK,
                          tol_quadric: float = _TANGENCY_TOL) -> CrossPolytopeReport:
    """Touching points of a cross polytope: collinear, opposite pairs on one
    quadric. For m=2 the cross-ratio of the four collinear points is reported
    but not asserted (generically not harmonic)."""
    if cell.kind != CROSS_POLYTOPE:
        raise GeometryError("expected a cross polytope cell")
    if not cell.complete:
        raise GeometryError("cannot verify an incomplete boundary cell")
    _require_vertices(maps, cell.vertices)
    pts = [maps.P(v) for v in cell.vertices]
    coll = collinearity_residual(pts)
    failures = []
    if coll >= tol_rank:
        failures.append(f"collinearity residual {coll:.3e}")
    quad_res = []
    for a, b in cell.opposite_pairs():
        va, vb = cell.vertices[a], cell.vertices[b]
        lam = maps.lam(va)
        if va.direction != vb.direction:
            failures.append("opposite vertices carry different directions")
            continue
        for v in (va, vb):
            r = abs(maps.family.quadric_value(lam, maps.P(v)))
            quad_res.append(r)
            if r >= tol_quadric:
                failures.append(f"touching point off Q_{lam}: residual {r:.3e}")
    cr = None
    if maps.m == 2 and coll < tol_rank:
        order = [cell.vertices[k] for k in (0, 1, 2, 3)]  # (+e0, -e0, +e1, -e1)
        cr = cross_ratio_collinear(*(maps.P(v) for v in order), tol_rank=max(tol_rank, coll * 10))
    return CrossPolytopeReport(cell, coll, quad_res, cr, passed=not failures,
                               failures=failures)


@dataclass(eq=False)
class SquareFaceReport:
    vertices: tuple[MidVertex, ...]
    pencil: float
    cross_ratio: float | None
    tangency_residuals: list
    harmonic: bool
    passed: bool
    failures: list = field(default_factory=list)


def verify_square_face(maps: HPMaps, face,
                       tol_rank: float = TOL_RANK, tol_cr: float = TOL_CR,
                       tol_tangency: float = _TANGENCY_TOL) -> SquareFaceReport:
    """Square 2-face of a rectified cube, vertices in cycle order: the four
    hyperplanes must lie in a pencil with opposite vertices tangent to the
    same quadric, and the opposite-vertex pairs are asserted harmonic
    (|CR + 1| < tol_cr)."""
    face = tuple(face)
    if len(face) != 4:
        raise GeometryError("a square face has four vertices")
    _require_vertices(maps, face)
    v0, v1, v2, v3 = face
    failures = []
    if v0.direction != v2.direction or v1.direction != v3.direction \
            or v0.direction == v1.direction:
        raise GeometryError("face vertices are not in cycle order of a square 2-face")
    planes = [maps.H(v) for v in face]
    pr = pencil_residual(planes)
    tang = []
    for v in face:
        r = maps.family.tangency_residual(maps.lam(v), maps.H(v))
        tang.append(r)
        if r >= tol_tangency:
            failures.append(f"H at {v.dcoords} off Q_{maps.lam(v)}: residual {r:.3e}")
    cr = None
    harmonic = False
    if pr >= tol_rank:
        failures.append(f"pencil residual {pr:.3e}")
    else:
        cr = cross_ratio_pencil(maps.H(v0), maps.H(v2), maps.H(v1), maps.H(v3),
                                tol_rank=max(tol_rank, pr * 10))
        harmonic = abs(cr + 1.0) < tol_cr
        if not harmonic:
            failures.append(f"cross-ratio {cr:.9g} deviates from -1 by {abs(cr + 1):.3e}")
    return SquareFaceReport(face, pr, cr, tang, harmonic, passed=not failures,
                            failures=failures)


def complete_square(family: ConfocalFamily, alpha: float, h_a: DualHyperplane,
                    beta: float, h_b: DualHyperplane,
                    tol: float = _TANGENCY_TOL) -> tuple[DualHyperplane, DualHyperplane]:
    """Second tangents in the pencil span(h_a, h_b): the hyperplanes a net
    face assigns to the two remaining vertices.

    With B the polarization of the tangency form,
        h_a' = h_a - 2 B_alpha(h_a,h_b)/Phi_alpha(h_b) * h_b,
        h_b' = h_b - 2 B_beta(h_a,h_b)/Phi_beta(h_a) * h_a.
    Harmonicity of the resulting quadruple is not asserted here: it is a
    property of billiard-derived faces, not of arbitrary tangent pairs.
    """
    alpha = family.check_param(alpha)
    beta = family.check_param(beta)
    ra = family.tangency_residual(alpha, h_a)
    rb = family.tangency_residual(beta, h_b)
    if ra >= tol or rb >= tol:
        raise GeometryError(
            f"inputs must be tangent to their quadrics (residuals {ra:.3e}, {rb:.3e})")
    ha = h_a.coords
    hb = h_b.coords
    cross = np.linalg.norm(np.outer(ha, hb) - np.outer(hb, ha))
    if cross < 1e-12 * np.linalg.norm(ha) * np.linalg.norm(hb):
        raise GeometryError("proportional hyperplanes span no pencil")
    phi_a_of_b = family.tangency_form(alpha, h_b)
    phi_b_of_a = family.tangency_form(beta, h_a)
    if family.tangency_residual(alpha, h_b) < tol or family.tangency_residual(beta, h_a) < tol:
        raise GeometryError("tangentially degenerate pencil: an input touches both quadrics")
    s = -2.0 * family.tangency_bilinear(alpha, h_a, h_b) / phi_a_of_b
    t = -2.0 * family.tangency_bilinear(beta, h_a, h_b) / phi_b_of_a
    h_a2 = DualHyperplane(ha + s * hb)
    h_b2 = DualHyperplane(hb + t * ha)
    return h_a2.canonical(), h_b2.canonical()


@dataclass(eq=False)
class CuboctahedronReport:
    cell: HoneycombCell
    triangle_collinearity: list
    triangle_direction_sets: list
    square_reports: list
    membership_ok: bool
    passed: bool
    failures: list = field(default_factory=list)

    @property
    def max_triangle_collinearity(self) -> float:
        return max(self.triangle_collinearity, default=0.0)

    @property
    def max_square_pencil(self) -> float:
        return max((r.pencil for r in self.square_reports), default=0.0)


def verify_cuboctahedron(maps: HPMaps, cell: HoneycombCell,
                         tol_rank: float = TOL_RANK, tol_cr: float = TOL_CR) -> CuboctahedronReport:
    """Star configuration on one cuboctahedral cell: eight collinear
    touching-point triplets (one plane per quadric each) and six pencil
    quadruplets, every vertex in exactly two of each."""
    if cell.kind != RECTIFIED_CUBE or maps.m != 3:
        raise GeometryError("expected a rectified-cube cell of an m=3 lattice")
    _require_vertices(maps, cell.vertices)
    failures = []
    tri_coll = []
    tri_dirs = []
    for tri in cell.triangle_faces:
        verts = [cell.vertices[k] for k in tri]
        dirs = sorted(v.direction for v in verts)
        tri_dirs.append(tuple(dirs))
        if dirs != [0, 1, 2]:
            failures.append(f"triangle {tri} planes do not touch three different quadrics")
        coll = collinearity_residual([maps.P(v) for v in verts])
        tri_coll.append(coll)
        if coll >= tol_rank:
            failures.append(f"triangle {tri} touching points: residual {coll:.3e}")
    squares = []
    for sq in cell.square_faces:
        rep = verify_square_face(maps, [cell.vertices[k] for k in sq],
                                 tol_rank=tol_rank, tol_cr=tol_cr)
        squares.append(rep)
        failures.extend(f"square {sq}: {msg}" for msg in rep.failures)
    counts = {k: [0, 0] for k in range(len(cell.vertices))}
    for tri in cell.triangle_faces:
        for k in tri:
            counts[k][0] += 1
    for sq in cell.square_faces:
        for k in sq:
            counts[k][1] += 1
    membership_ok = all(c == [2, 2] for c in counts.values())
    if not membership_ok:
        failures.append("vertex membership is not two triangles + two squares each")
    return CuboctahedronReport(cell, tri_coll, tri_dirs, squares, membership_ok,
                               passed=not failures, failures=failures)


def star_from_seed(family: ConfocalFamily, lambdas, planes,
                   tol_rank: float = TOL_RANK) -> HPMaps:
    """Rebuild the twelve-plane star configuration from three seed planes
    tangent to three different quadrics with collinear touching points.

    The touching points span the base line; reflecting it at them gives the
    three neighbour lines, and double reflections complete the 1x1x1 net
    whose edge maps are returned.
    """
    lambdas = tuple(family.check_param(l) for l in lambdas)
    planes = tuple(planes)
    if len(lambdas) != 3 or len(planes) != 3:
        raise GeometryError("need three quadric parameters and three planes")
    for i, j in itertools.combinations(range(3), 2):
        if abs(lambdas[i] - lambdas[j]) <= 1e-12 * max(1.0, abs(lambdas[i])):
            raise GeometryError("seed planes must touch three distinct quadrics")
    for lam, h in zip(lambdas, planes):
        r = family.tangency_residual(lam, h)
        if r >= _TANGENCY_TOL:
            raise GeometryError(f"seed plane not tangent to Q_{lam}: residual {r:.3e}")
    touch = [family.touching_point(h) for h in planes]
    coll = collinearity_residual(touch)
    if coll >= tol_rank:
        raise GeometryError(f"seed touching points are not collinear: residual {coll:.3e}")

    pts = np.array([t.affine_coords() for t in touch])
    centroid = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - centroid)
    base_line = ProjLine(HomPoint.affine(centroid), vt[0])

    lines = {(0, 0, 0): base_line}
    for j in range(3):
        ev = reflect(family, lambdas[j], base_line, touch[j], tol_rank)
        key = tuple(1 if k == j else 0 for k in range(3))
        lines[key] = ev.outgoing

    def fill(vertex, pair):
        i, j = pair
        n0 = tuple(c - (1 if k in (i, j) else 0) for k, c in enumerate(vertex))
        ni = tuple(c + (1 if k == i else 0) for k, c in enumerate(n0))
        nj = tuple(c + (1 if k == j else 0) for k, c in enumerate(n0))
        a_pt, _ = meet_point(lines[n0], lines[ni])
        b_pt, _ = meet_point(lines[n0], lines[nj])
        cfg = double_reflection(family, lambdas[i], lambdas[j], lines[n0],
                                HomPoint.affine(a_pt), HomPoint.affine(b_pt), tol_rank)
        return cfg.line12

    for vertex, pair in (((1, 1, 0), (0, 1)), ((1, 0, 1), (0, 2)), ((0, 1, 1), (1, 2)),
                         ((1, 1, 1), (0, 1))):
        try:
            lines[vertex] = fill(vertex, pair)
        except GeometryError as exc:
            raise ConstructionError(str(exc), vertex) from exc

    net = DRNet(m=3, lambdas=lambdas, window=(1, 1, 1), lines=lines)
    return extract_maps(family, net, verify=True)
